use std::f64::consts::{SQRT_2, TAU};

use proptest::prelude::*;
use rand::Rng;

use qcw_core::e91::{
    chsh_closed_form, correlation_closed_form, estimate_chsh, run_exchange, sift, AnalyzerSet,
    Basis, ExchangeConfig, PairRecord, PairSource, ProductComponent,
};
use qcw_core::rng::RandomStream;

fn mixture(rng: &mut RandomStream) -> PairSource {
    let m = rng.gen_range(1..=20);
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let components = raw
        .iter()
        .map(|w| ProductComponent {
            weight: w / total,
            alice_direction: rng.gen_range(0.0..TAU),
            bob_direction: rng.gen_range(0.0..TAU),
        })
        .collect();
    PairSource::product_mixture(components).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sifting_partitions_the_transcript(seed in any::<u64>(), loss in 0.0f64..0.5) {
        let config = ExchangeConfig::new(600).with_loss(loss);
        let transcript = run_exchange(&PairSource::Singlet, &config, seed).unwrap();
        let groups = sift(&transcript);
        let mut seen: Vec<u64> = groups
            .chsh
            .iter()
            .chain(&groups.key)
            .chain(&groups.discarded)
            .map(|r| r.pair_index)
            .collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..600).collect::<Vec<_>>());
        for r in &groups.chsh {
            let (a, b) = r.bases().unwrap();
            prop_assert!(a != Basis::Two && b != Basis::Two);
        }
        for r in &groups.key {
            prop_assert!(matches!(r.bases(), Some((Basis::Two, Basis::One) | (Basis::Three, Basis::Two))));
        }
    }

    #[test]
    fn werner_correlation_is_linear_in_visibility(v in 0.0f64..=1.0, a in 0.0f64..TAU, b in 0.0f64..TAU) {
        let werner = correlation_closed_form(&PairSource::werner(v).unwrap(), a, b).unwrap();
        let singlet = correlation_closed_form(&PairSource::Singlet, a, b).unwrap();
        prop_assert!((werner - v * singlet).abs() < 1e-12);
        let s = chsh_closed_form(&PairSource::werner(v).unwrap(), &AnalyzerSet::default()).unwrap();
        prop_assert!((s + 2.0 * SQRT_2 * v).abs() < 1e-12);
    }

    #[test]
    fn product_mixtures_obey_the_local_bound_at_any_analyzers(
        seed in any::<u64>(),
        alice in prop::array::uniform3(0.0f64..TAU),
        bob in prop::array::uniform3(0.0f64..TAU),
    ) {
        let mut rng = RandomStream::from_seed(seed);
        let source = mixture(&mut rng);
        let analyzers = AnalyzerSet::new(alice, bob).unwrap();
        // Local bound for product states at arbitrary analyzers is 2; at the
        // default analyzers it tightens to sqrt(2).
        prop_assert!(chsh_closed_form(&source, &analyzers).unwrap().abs() <= 2.0 + 1e-9);
        prop_assert!(chsh_closed_form(&source, &AnalyzerSet::default()).unwrap().abs() <= SQRT_2 + 1e-9);
    }

    #[test]
    fn intercept_resend_never_beats_the_product_bound(
        angles in prop::collection::vec(0.0f64..TAU, 1..8),
    ) {
        let mixed = PairSource::intercept_resend(angles).unwrap().equivalent_product_mixture().unwrap();
        prop_assert!(chsh_closed_form(&mixed, &AnalyzerSet::default()).unwrap().abs() <= SQRT_2 + 1e-9);
    }
}

#[test]
fn product_bound_over_a_thousand_mixtures() {
    let mut rng = RandomStream::labeled(17, "mixtures");
    let analyzers = AnalyzerSet::default();
    let worst = (0..1000)
        .map(|_| {
            chsh_closed_form(&mixture(&mut rng), &analyzers)
                .unwrap()
                .abs()
        })
        .fold(0.0, f64::max);
    assert!(worst <= SQRT_2 + 1e-9, "worst |s| = {worst}");
}

/// Empirical E for every analyzer combination, from detected pairs.
fn empirical_correlations(records: &[PairRecord]) -> [[(f64, u64); 3]; 3] {
    let mut sums = [[(0i64, 0u64); 3]; 3];
    for m in records.iter().filter_map(|r| r.measurement) {
        let cell = &mut sums[usize::from(m.alice_basis.number() - 1)]
            [usize::from(m.bob_basis.number() - 1)];
        cell.0 += i64::from(m.alice_outcome.value() * m.bob_outcome.value());
        cell.1 += 1;
    }
    sums.map(|row| row.map(|(sum, n)| (sum as f64 / n as f64, n)))
}

#[test]
fn singlet_closed_form_on_all_combinations() {
    let analyzers = AnalyzerSet::default();
    for a in Basis::ALL {
        for b in Basis::ALL {
            let (x, y) = (analyzers.alice_angle(a), analyzers.bob_angle(b));
            let e = correlation_closed_form(&PairSource::Singlet, x, y).unwrap();
            assert!((e + (x - y).cos()).abs() < 1e-12);
            if matches!(
                (a, b),
                (Basis::Two, Basis::One) | (Basis::Three, Basis::Two)
            ) {
                assert!((e + 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampled_correlations_match_closed_forms() {
    let mut rng = RandomStream::labeled(23, "sources");
    let analyzers = AnalyzerSet::default();
    let sources = [
        PairSource::Singlet,
        PairSource::werner(0.6).unwrap(),
        mixture(&mut rng),
        PairSource::intercept_resend(vec![0.0, 1.0, 2.5])
            .unwrap()
            .equivalent_product_mixture()
            .unwrap(),
    ];
    for (i, source) in sources.iter().enumerate() {
        // About 10^5 pairs per analyzer combination.
        let transcript = run_exchange(source, &ExchangeConfig::new(900_000), i as u64).unwrap();
        let empirical = empirical_correlations(&transcript.records);
        for a in Basis::ALL {
            for b in Basis::ALL {
                let (value, n) =
                    empirical[usize::from(a.number() - 1)][usize::from(b.number() - 1)];
                let exact = correlation_closed_form(
                    source,
                    analyzers.alice_angle(a),
                    analyzers.bob_angle(b),
                )
                .unwrap();
                let sigma = ((1.0 - exact * exact) / n as f64).sqrt();
                assert!(
                    (value - exact).abs() <= 4.0 * sigma + 1e-12,
                    "source {source}: E{}{} = {value} vs {exact}",
                    a.number(),
                    b.number(),
                );
            }
        }
    }
}

#[test]
fn intercept_resend_matches_its_product_mixture() {
    let angles = vec![0.3, 1.2];
    let direct = PairSource::intercept_resend(angles.clone()).unwrap();
    let mixed = direct.equivalent_product_mixture().unwrap();
    let a = estimate_chsh(
        &run_exchange(&direct, &ExchangeConfig::new(60_000), 4)
            .unwrap()
            .records,
    )
    .unwrap();
    let exact = chsh_closed_form(&mixed, &AnalyzerSet::default()).unwrap();
    assert!(
        (a.s - exact).abs() <= 4.0 * a.stderr_s,
        "{} vs {exact}",
        a.s
    );
}

#[test]
fn sampled_intercept_resend_stays_under_the_bound() {
    let mut rng = RandomStream::labeled(41, "eve-angles");
    for seed in 0..20 {
        let angles = (0..rng.gen_range(1..8))
            .map(|_| rng.gen_range(0.0..TAU))
            .collect();
        let source = PairSource::intercept_resend(angles).unwrap();
        let transcript = run_exchange(&source, &ExchangeConfig::new(50_000), seed).unwrap();
        let estimate = estimate_chsh(&transcript.records).unwrap();
        assert!(
            estimate.s.abs() <= SQRT_2 + 3.0 * estimate.stderr_s,
            "{source}: s = {} stderr {}",
            estimate.s,
            estimate.stderr_s
        );
    }
}

#[test]
fn exchange_is_independent_of_thread_count() {
    let source = PairSource::werner(0.7).unwrap();
    let config = ExchangeConfig::new(20_000).with_loss(0.1);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_exchange(&source, &config, 99).unwrap())
    };
    let reference = run(1);
    for threads in [2, 3, 8] {
        assert_eq!(run(threads), reference, "{threads} threads");
    }
    assert_ne!(run_exchange(&source, &config, 100).unwrap(), reference);
}
