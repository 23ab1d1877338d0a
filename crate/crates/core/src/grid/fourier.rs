//! Periodic Fourier axis: multipliers applied line by line with rustfft.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

pub type C64 = Complex<f64>;

#[derive(Clone)]
pub struct FourierAxis {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Signed wavenumbers in FFT order; index `n/2` is the Nyquist mode.
    k: Vec<f64>,
}

impl std::fmt::Debug for FourierAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierAxis").field("n", &self.n).finish()
    }
}

impl FourierAxis {
    pub fn new(n: usize, length: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let k = (0..n)
            .map(|j| {
                let m = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                2.0 * PI * m / length
            })
            .collect();
        Self { n, fwd, inv, k }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    /// Symbol of the first derivative. The Nyquist mode is dropped so the
    /// operator stays real and skew; with `dealias` every mode above two
    /// thirds of the resolved band is dropped as well.
    pub fn first_derivative_symbol(&self, dealias: bool) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|j| {
                let m = if j < n / 2 { j } else { n - j };
                if j == n / 2 || (dealias && 3 * m > n) {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(0.0, self.k[j])
                }
            })
            .collect()
    }

    /// Symbol of the second derivative, `-k^2`, Nyquist mode included.
    pub fn second_derivative_symbol(&self) -> Vec<C64> {
        self.k.iter().map(|k| C64::new(-k * k, 0.0)).collect()
    }

    /// Antiderivative symbol on the mean-free, Nyquist-free subspace.
    pub fn antiderivative_symbol(&self) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|j| if j == 0 || j == n / 2 { C64::new(0.0, 0.0) } else { C64::new(0.0, -1.0 / self.k[j]) })
            .collect()
    }

    pub fn forward(&self, line: &mut [C64], scratch: &mut [C64]) {
        self.fwd.process_with_scratch(line, scratch);
    }

    pub fn inverse(&self, line: &mut [C64], scratch: &mut [C64]) {
        self.inv.process_with_scratch(line, scratch);
    }

    pub fn scratch_len(&self) -> usize {
        self.fwd.get_inplace_scratch_len().max(self.inv.get_inplace_scratch_len())
    }

    /// Apply `symbol` to one complex line in place (forward, multiply, inverse, normalize).
    pub fn filter(&self, line: &mut [C64], symbol: &[C64], scratch: &mut [C64]) {
        let scale = 1.0 / self.n as f64;
        self.forward(line, scratch);
        for (c, s) in line.iter_mut().zip(symbol) {
            *c *= s * scale;
        }
        self.inverse(line, scratch);
    }

    /// Apply a real-preserving `symbol` to `count` real lines. Line `l`,
    /// element `i` is read from `input[offset(l, i)]`; the filtered lines are
    /// written contiguously (line-major) into `out`.
    ///
    /// Two real lines share one complex transform.
    pub fn filter_real_lines<F>(&self, count: usize, input: &[f64], offset: F, symbol: &[C64], out: &mut [f64])
    where
        F: Fn(usize, usize) -> usize + Sync,
    {
        let n = self.n;
        debug_assert_eq!(out.len(), count * n);
        out.par_chunks_mut(2 * n).enumerate().for_each_init(
            || (vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); self.scratch_len()]),
            |(buf, scratch), (pair, chunk)| {
                let l0 = 2 * pair;
                let two = chunk.len() == 2 * n;
                for i in 0..n {
                    let re = input[offset(l0, i)];
                    let im = if two { input[offset(l0 + 1, i)] } else { 0.0 };
                    buf[i] = C64::new(re, im);
                }
                self.filter(buf, symbol, scratch);
                for i in 0..n {
                    chunk[i] = buf[i].re;
                }
                if two {
                    for i in 0..n {
                        chunk[n + i] = buf[i].im;
                    }
                }
            },
        );
    }
}
