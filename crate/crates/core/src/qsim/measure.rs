use num_complex::Complex64;
use rand::Rng;

use super::{QsimError, Register, RegisterLayout, StateVector};

/// Outcome of a projective measurement in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementResult {
    pub register: Register,
    pub value: u64,
    /// Probability the outcome had before collapse.
    pub probability: f64,
    pub collapsed: StateVector,
}

fn outcome_of(layout: RegisterLayout, register: Register, index: usize) -> u64 {
    let (x, y) = layout.split(index);
    match register {
        Register::First => x,
        Register::Second => y,
        Register::Both => index as u64,
    }
}

/// Born-rule distribution of the selected register, summed in index order.
pub fn marginal_probabilities(state: &StateVector, register: Register) -> Vec<f64> {
    let layout = state.layout();
    let mut probs = vec![0.0; 1usize << layout.width(register)];
    for (index, a) in state.amplitudes().iter().enumerate() {
        probs[outcome_of(layout, register, index) as usize] += a.norm_sqr();
    }
    probs
}

/// Samples an outcome for `register` and returns the renormalized projection.
pub fn measure<R: Rng + ?Sized>(
    state: &StateVector,
    register: Register,
    rng: &mut R,
) -> Result<MeasurementResult, QsimError> {
    let layout = state.layout();
    let probs = marginal_probabilities(state, register);
    let total: f64 = probs.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(QsimError::DegenerateMarginal);
    }

    let target = rng.gen::<f64>() * total;
    let mut cumulative = 0.0;
    let mut value = None;
    for (outcome, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        cumulative += p;
        value = Some(outcome);
        if target < cumulative {
            break;
        }
    }
    // Rounding can leave `target` just past the final cumulative sum; the last
    // outcome with nonzero weight is then the right pick.
    let value = value.ok_or(QsimError::DegenerateMarginal)?;
    let probability = probs[value] / total;

    let scale = probs[value].sqrt().recip();
    let amplitudes: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(index, &a)| {
            if outcome_of(layout, register, index) as usize == value {
                a * scale
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();

    Ok(MeasurementResult {
        register,
        value: value as u64,
        probability,
        collapsed: StateVector::from_parts_unchecked(layout, amplitudes),
    })
}
