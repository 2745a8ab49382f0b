//! Every simulator primitive against explicit dense matrices for all
//! layouts with `l + k <= 6`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcw_core::qsim::{
    apply_hadamard, apply_oracle, inverse_qft_first_register, marginal_probabilities, measure,
    qft_first_register, Oracle, Register, RegisterLayout, StateVector,
};

const TOL: f64 = 1e-10;

type Matrix = Vec<Vec<Complex64>>;

fn layouts() -> impl Iterator<Item = RegisterLayout> {
    (1..=6u32).flat_map(|l| (0..=6 - l).map(move |k| RegisterLayout::new(l, k).unwrap()))
}

fn random_state(layout: RegisterLayout, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..layout.dimension())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(layout, amps).unwrap()
}

fn build(layout: RegisterLayout, entry: impl Fn(u64, u64, u64, u64) -> Complex64) -> Matrix {
    let dim = layout.dimension();
    (0..dim)
        .map(|row| {
            let (xr, yr) = layout.split(row);
            (0..dim)
                .map(|col| {
                    let (xc, yc) = layout.split(col);
                    entry(xr, yr, xc, yc)
                })
                .collect()
        })
        .collect()
}

fn walsh(a: u64, b: u64, bits: u32) -> Complex64 {
    let sign = if (a & b).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Complex64::new(sign / 2f64.powi(bits as i32).sqrt(), 0.0)
}

fn delta(a: u64, b: u64) -> Complex64 {
    Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0)
}

fn hadamard_matrix(layout: RegisterLayout, register: Register) -> Matrix {
    let (l, k) = (layout.first(), layout.second());
    build(layout, |xr, yr, xc, yc| match register {
        Register::First => walsh(xr, xc, l) * delta(yr, yc),
        Register::Second => delta(xr, xc) * walsh(yr, yc, k),
        Register::Both => walsh(xr, xc, l) * walsh(yr, yc, k),
    })
}

fn fourier_matrix(layout: RegisterLayout, sign: f64) -> Matrix {
    let size = layout.first_size() as f64;
    build(layout, |xr, yr, xc, yc| {
        let phase = sign * TAU * (xr * xc) as f64 / size;
        Complex64::from_polar(size.sqrt().recip(), phase) * delta(yr, yc)
    })
}

fn oracle_matrix(layout: RegisterLayout, table: &[u64]) -> Matrix {
    let mask = layout.second_size() - 1;
    build(layout, |xr, yr, xc, yc| {
        delta(xr, xc) * delta(yr, (yc + table[xc as usize]) & mask)
    })
}

fn apply(matrix: &Matrix, state: &StateVector) -> Vec<Complex64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(state.amplitudes()).map(|(m, a)| m * a).sum())
        .collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn hadamard_layers_match_dense_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for layout in layouts() {
        for register in [Register::First, Register::Second, Register::Both] {
            let state = random_state(layout, &mut rng);
            let expected = apply(&hadamard_matrix(layout, register), &state);
            let got = apply_hadamard(&state, register);
            assert!(
                max_diff(got.amplitudes(), &expected) < TOL,
                "{layout} {register:?}"
            );
        }
    }
}

#[test]
fn fourier_transforms_match_dense_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for layout in layouts() {
        let state = random_state(layout, &mut rng);
        let forward = apply(&fourier_matrix(layout, 1.0), &state);
        let inverse = apply(&fourier_matrix(layout, -1.0), &state);
        assert!(max_diff(qft_first_register(&state).amplitudes(), &forward) < TOL);
        assert!(max_diff(inverse_qft_first_register(&state).amplitudes(), &inverse) < TOL);
    }
}

#[test]
fn oracles_match_dense_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for layout in layouts().filter(|l| l.second() > 0) {
        for _ in 0..3 {
            let table: Vec<u64> = (0..layout.first_size())
                .map(|_| rng.gen_range(0..layout.second_size()))
                .collect();
            let lookup = table.clone();
            let oracle = Oracle::new("table", layout, move |x| lookup[x as usize]).unwrap();
            let state = random_state(layout, &mut rng);
            let expected = apply(&oracle_matrix(layout, &table), &state);
            let got = apply_oracle(&state, &oracle).unwrap();
            assert!(max_diff(got.amplitudes(), &expected) < TOL, "{layout}");
        }
    }
}

#[test]
fn measurement_matches_direct_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for layout in layouts() {
        let state = random_state(layout, &mut rng);
        for register in [Register::First, Register::Second, Register::Both] {
            let width = layout.width(register);
            let value_of = |index: usize| {
                let (x, y) = layout.split(index);
                match register {
                    Register::First => x,
                    Register::Second => y,
                    Register::Both => index as u64,
                }
            };
            let mut expected = vec![0.0; 1 << width];
            for (i, a) in state.amplitudes().iter().enumerate() {
                expected[value_of(i) as usize] += a.norm_sqr();
            }
            let probs = marginal_probabilities(&state, register);
            for (p, q) in probs.iter().zip(&expected) {
                assert!((p - q).abs() < TOL);
            }

            let result = measure(&state, register, &mut rng).unwrap();
            let p = expected[result.value as usize];
            assert!((result.probability - p).abs() < TOL);
            let projected: Vec<Complex64> = state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if value_of(i) == result.value {
                        a / p.sqrt()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            assert!(max_diff(result.collapsed.amplitudes(), &projected) < TOL);
        }
    }
}
