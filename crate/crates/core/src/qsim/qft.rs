//! Quantum Fourier transform on the first register.
//!
//! `|x> -> 2^(-l/2) * sum_y exp(2 pi i x y / 2^l) |y>`, applied independently
//! to each second-register slice. Implemented as an in-place radix-2
//! butterfly with a precomputed twiddle table, O(2^l * l) per slice.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::StateVector;

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Inverse,
}

pub fn qft_first_register(state: &StateVector) -> StateVector {
    transform(state, Direction::Forward)
}

pub fn inverse_qft_first_register(state: &StateVector) -> StateVector {
    transform(state, Direction::Inverse)
}

fn transform(state: &StateVector, direction: Direction) -> StateVector {
    let layout = state.layout();
    let size = layout.first_size() as usize;
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let twiddles: Vec<Complex64> = (0..size / 2)
        .map(|j| Complex64::from_polar(1.0, sign * TAU * j as f64 / size as f64))
        .collect();
    let scale = (size as f64).sqrt().recip();

    let stride = layout.second_size() as usize;
    let mut amps = state.amplitudes().to_vec();
    let mut column = vec![Complex64::new(0.0, 0.0); size];
    for y in 0..stride {
        for (x, slot) in column.iter_mut().enumerate() {
            *slot = amps[x * stride + y];
        }
        butterfly(&mut column, &twiddles);
        for (x, value) in column.iter().enumerate() {
            amps[x * stride + y] = value * scale;
        }
    }
    StateVector::from_parts_unchecked(layout, amps)
}

/// Unnormalized DFT of `data` (length a power of two) in place.
fn butterfly(data: &mut [Complex64], twiddles: &[Complex64]) {
    let n = data.len();
    if n < 2 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..half {
                let w = twiddles[j * step];
                let even = data[start + j];
                let odd = data[start + j + half] * w;
                data[start + j] = even + odd;
                data[start + j + half] = even - odd;
            }
        }
        len <<= 1;
    }
}
