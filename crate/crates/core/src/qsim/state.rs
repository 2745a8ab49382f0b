use std::fmt::Write as _;

use num_complex::Complex64;

use super::{QsimError, Register, RegisterLayout};

/// Amplitudes below this magnitude are left out of the debug dump.
const DUMP_CUTOFF: f64 = 1e-14;

/// Normalized amplitudes over a [`RegisterLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The basis state `|x>|y>`.
    pub fn basis(layout: RegisterLayout, x: u64, y: u64) -> Result<Self, QsimError> {
        if x >= layout.first_size() {
            return Err(QsimError::ValueOutOfRange {
                value: x,
                width: layout.first(),
            });
        }
        if y >= layout.second_size() {
            return Err(QsimError::ValueOutOfRange {
                value: y,
                width: layout.second(),
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        amplitudes[layout.index(x, y)] = Complex64::new(1.0, 0.0);
        Ok(Self { layout, amplitudes })
    }

    /// Wraps amplitudes that must already be normalized (within 1e-10).
    pub fn from_amplitudes(
        layout: RegisterLayout,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, QsimError> {
        if amplitudes.len() != layout.dimension() {
            return Err(QsimError::DimensionMismatch {
                expected: layout.dimension(),
                actual: amplitudes.len(),
            });
        }
        let state = Self { layout, amplitudes };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(QsimError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(
        layout: RegisterLayout,
        mut amplitudes: Vec<Complex64>,
    ) -> Result<Self, QsimError> {
        if amplitudes.len() != layout.dimension() {
            return Err(QsimError::DimensionMismatch {
                expected: layout.dimension(),
                actual: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(QsimError::NotNormalized { norm_sqr });
        }
        let scale = norm_sqr.sqrt().recip();
        for a in &mut amplitudes {
            *a *= scale;
        }
        Ok(Self { layout, amplitudes })
    }

    pub(crate) fn from_parts_unchecked(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.dimension());
        Self { layout, amplitudes }
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn amplitude(&self, x: u64, y: u64) -> Complex64 {
        self.amplitudes[self.layout.index(x, y)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest per-amplitude distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// One line per amplitude with magnitude >= 1e-14: `index real imag`.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for (index, a) in self.amplitudes.iter().enumerate() {
            if a.norm() >= DUMP_CUTOFF {
                let _ = writeln!(out, "{} {} {}", index, a.re, a.im);
            }
        }
        out
    }
}

/// `|0...0>|0...0>` with the Hadamard map applied to every first-register
/// qubit, i.e. amplitude `2^(-l/2)` on each `|x>|0>`.
pub fn uniform_superposition(layout: RegisterLayout) -> StateVector {
    let zero = StateVector::basis(layout, 0, 0).expect("zero is always in range");
    apply_hadamard(&zero, Register::First)
}

/// Applies the single-qubit Hadamard map to every qubit of `register`.
pub fn apply_hadamard(state: &StateVector, register: Register) -> StateVector {
    let layout = state.layout;
    let bits = match register {
        Register::First => layout.second()..layout.total_qubits(),
        Register::Second => 0..layout.second(),
        Register::Both => 0..layout.total_qubits(),
    };
    let mut amps = state.amplitudes.clone();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for bit in bits {
        let stride = 1usize << bit;
        for block in (0..amps.len()).step_by(stride << 1) {
            for lo in block..block + stride {
                let hi = lo + stride;
                let (a, b) = (amps[lo], amps[hi]);
                amps[lo] = (a + b) * scale;
                amps[hi] = (a - b) * scale;
            }
        }
    }
    StateVector::from_parts_unchecked(layout, amps)
}
