//! Phase-space grid: spectral in q, finite differences (or spectral) in p.

mod field;
mod fourier;
pub mod stencil;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ndarray::{Array1, Array2};
use rayon::prelude::*;

pub use field::{boundary_flux, ConfigField, PhaseField};
pub use fourier::{FourierAxis, C64};
use stencil::Stencil;

use crate::error::{Error, Result};

/// Discretization of the p-derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PScheme {
    /// Fourier, treating the p-interval as periodic. Only for p-decaying fields.
    Spectral,
    Fd4,
    Fd6,
}

impl fmt::Display for PScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PScheme::Spectral => "spectral",
            PScheme::Fd4 => "fd4",
            PScheme::Fd6 => "fd6",
        })
    }
}

impl FromStr for PScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spectral" => Ok(PScheme::Spectral),
            "fd4" => Ok(PScheme::Fd4),
            "fd6" => Ok(PScheme::Fd6),
            other => Err(Error::InvalidGrid(format!("unknown p scheme '{other}' (expected spectral, fd4 or fd6)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub n_q: usize,
    pub n_p: usize,
    pub l_q: f64,
    pub p_max: f64,
    pub p_deriv_order: PScheme,
    /// 2/3-rule mode truncation in the q-derivative.
    pub dealias: bool,
}

impl GridSpec {
    pub fn new(n_q: usize, n_p: usize, l_q: f64, p_max: f64, p_deriv_order: PScheme) -> Result<Self> {
        let spec = Self { n_q, n_p, l_q, p_max, p_deriv_order, dealias: false };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_q < 4 || !self.n_q.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n_q must be even and >= 4, got {}", self.n_q)));
        }
        if self.n_p < 4 || !self.n_p.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n_p must be even and >= 4, got {}", self.n_p)));
        }
        let min_np = match self.p_deriv_order {
            PScheme::Spectral => 4,
            PScheme::Fd4 => 8,
            PScheme::Fd6 => 10,
        };
        if self.n_p < min_np {
            return Err(Error::InvalidGrid(format!("n_p = {} too small for {}", self.n_p, self.p_deriv_order)));
        }
        if !(self.l_q.is_finite() && self.l_q > 0.0) {
            return Err(Error::InvalidGrid(format!("l_q must be positive, got {}", self.l_q)));
        }
        if !(self.p_max.is_finite() && self.p_max > 0.0) {
            return Err(Error::InvalidGrid(format!("p_max must be positive, got {}", self.p_max)));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        self.l_q / self.n_q as f64
    }

    pub fn dp(&self) -> f64 {
        2.0 * self.p_max / self.n_p as f64
    }

    pub fn build(&self) -> Result<Arc<Grid>> {
        Grid::new(self.clone()).map(Arc::new)
    }
}

#[derive(Debug)]
enum POperator {
    Spectral { axis: FourierAxis, symbol: Vec<C64> },
    Stencil(Stencil),
}

/// A validated grid with precomputed transforms and stencils.
#[derive(Debug)]
pub struct Grid {
    spec: GridSpec,
    q: Vec<f64>,
    p: Vec<f64>,
    q_axis: FourierAxis,
    dq_symbol: Vec<C64>,
    d2q_symbol: Vec<C64>,
    intq_symbol: Vec<C64>,
    p_op: POperator,
    boundary: Vec<(usize, usize, f64)>,
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let (dq, dp) = (spec.dq(), spec.dp());
        let q = (0..spec.n_q).map(|i| i as f64 * dq).collect();
        let p = (0..spec.n_p).map(|j| -spec.p_max + j as f64 * dp).collect();
        let q_axis = FourierAxis::new(spec.n_q, spec.l_q);
        let dq_symbol = q_axis.first_derivative_symbol(spec.dealias);
        let d2q_symbol = q_axis.second_derivative_symbol();
        let intq_symbol = q_axis.antiderivative_symbol();
        let p_op = match spec.p_deriv_order {
            PScheme::Spectral => {
                let axis = FourierAxis::new(spec.n_p, 2.0 * spec.p_max);
                let symbol = axis.first_derivative_symbol(false);
                POperator::Spectral { axis, symbol }
            }
            PScheme::Fd4 => POperator::Stencil(Stencil::new(4, spec.n_p, dp)),
            PScheme::Fd6 => POperator::Stencil(Stencil::new(6, spec.n_p, dp)),
        };
        let boundary = match &p_op {
            POperator::Spectral { .. } => Vec::new(),
            POperator::Stencil(st) => st.boundary_form(),
        };
        Ok(Self { spec, q, p, q_axis, dq_symbol, d2q_symbol, intq_symbol, p_op, boundary })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn n_q(&self) -> usize {
        self.spec.n_q
    }

    pub fn n_p(&self) -> usize {
        self.spec.n_p
    }

    pub fn dq(&self) -> f64 {
        self.spec.dq()
    }

    pub fn dp(&self) -> f64 {
        self.spec.dp()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q_axis(&self) -> &FourierAxis {
        &self.q_axis
    }

    /// Dense matrix of the p-derivative, row-major `n_p x n_p`.
    pub fn p_derivative_matrix(&self) -> Vec<f64> {
        let n = self.n_p();
        let mut m = vec![0.0; n * n];
        let mut unit = Array2::<f64>::zeros((1, n));
        for j in 0..n {
            unit[[0, j]] = 1.0;
            let col = self.ddp_rows(&unit);
            for i in 0..n {
                m[i * n + j] = col[[0, i]];
            }
            unit[[0, j]] = 0.0;
        }
        m
    }

    /// Non-zero entries `(j, l, s)` of `D_p + D_p^T` (empty in spectral-p mode).
    pub(crate) fn boundary_form(&self) -> &[(usize, usize, f64)] {
        &self.boundary
    }

    /// `(D_p + D_p^T)` applied along p to every row.
    pub(crate) fn boundary_form_rows(&self, v: &Array2<f64>) -> Array2<f64> {
        let mut out = Array2::zeros(v.dim());
        for (mut o, x) in out.rows_mut().into_iter().zip(v.rows()) {
            for &(j, l, s) in &self.boundary {
                o[j] += s * x[l];
            }
        }
        out
    }

    /// Apply a q-multiplier to every p-column of an `n_q x n_p` array.
    fn q_filter_phase(&self, v: &Array2<f64>, symbol: &[C64]) -> Array2<f64> {
        let (nq, np) = v.dim();
        let src = v.as_standard_layout();
        let src = src.as_slice().expect("standard layout");
        let mut t = vec![0.0; nq * np];
        self.q_axis.filter_real_lines(np, src, |l, i| i * np + l, symbol, &mut t);
        let mut out = Array2::zeros((nq, np));
        for j in 0..np {
            let col = &t[j * nq..(j + 1) * nq];
            for i in 0..nq {
                out[[i, j]] = col[i];
            }
        }
        out
    }

    fn q_filter_config(&self, v: &Array1<f64>, symbol: &[C64]) -> Array1<f64> {
        let n = v.len();
        let src = v.to_vec();
        let mut out = vec![0.0; n];
        self.q_axis.filter_real_lines(1, &src, |_, i| i, symbol, &mut out);
        Array1::from(out)
    }

    pub(crate) fn ddq_phase(&self, v: &Array2<f64>) -> Array2<f64> {
        self.q_filter_phase(v, &self.dq_symbol)
    }

    pub(crate) fn ddq_config(&self, v: &Array1<f64>) -> Array1<f64> {
        self.q_filter_config(v, &self.dq_symbol)
    }

    pub(crate) fn d2dq2_config(&self, v: &Array1<f64>) -> Array1<f64> {
        self.q_filter_config(v, &self.d2q_symbol)
    }

    pub(crate) fn intq_phase(&self, v: &Array2<f64>) -> Array2<f64> {
        self.q_filter_phase(v, &self.intq_symbol)
    }

    /// Apply an arbitrary real-preserving q-symbol to a q-only field.
    pub(crate) fn q_multiplier_config(&self, v: &Array1<f64>, symbol: &[C64]) -> Array1<f64> {
        self.q_filter_config(v, symbol)
    }

    /// p-derivative of every row of an array with `n_p` columns.
    pub(crate) fn ddp_rows(&self, v: &Array2<f64>) -> Array2<f64> {
        let (rows, np) = v.dim();
        let src = v.as_standard_layout();
        let src = src.as_slice().expect("standard layout");
        let mut out = vec![0.0; rows * np];
        match &self.p_op {
            POperator::Stencil(st) => {
                out.par_chunks_mut(np).zip(src.par_chunks(np)).for_each(|(o, x)| st.apply(x, o));
            }
            POperator::Spectral { axis, symbol } => {
                axis.filter_real_lines(rows, src, |l, j| l * np + j, symbol, &mut out);
            }
        }
        Array2::from_shape_vec((rows, np), out).expect("shape")
    }

    /// Apply a real 2D Fourier multiplier `symbol(k_q, k_p)`; both axes must be spectral.
    pub fn apply_symbol_2d<F>(&self, v: &Array2<f64>, symbol: F) -> Result<Array2<f64>>
    where
        F: Fn(f64, f64) -> f64,
    {
        let POperator::Spectral { axis: p_axis, .. } = &self.p_op else {
            return Err(Error::InvalidGrid("2D spectral operations need a spectral p axis".into()));
        };
        let (nq, np) = v.dim();
        let mut c: Vec<C64> = v.iter().map(|x| C64::new(*x, 0.0)).collect();
        let mut scratch = vec![C64::new(0.0, 0.0); p_axis.scratch_len().max(self.q_axis.scratch_len())];
        for row in c.chunks_mut(np) {
            p_axis.forward(row, &mut scratch);
        }
        let mut col = vec![C64::new(0.0, 0.0); nq];
        let kq = self.q_axis.wavenumbers();
        let kp = p_axis.wavenumbers();
        let scale = 1.0 / (nq * np) as f64;
        for j in 0..np {
            for i in 0..nq {
                col[i] = c[i * np + j];
            }
            self.q_axis.forward(&mut col, &mut scratch);
            for i in 0..nq {
                col[i] *= symbol(kq[i], kp[j]) * scale;
            }
            self.q_axis.inverse(&mut col, &mut scratch);
            for i in 0..nq {
                c[i * np + j] = col[i];
            }
        }
        for row in c.chunks_mut(np) {
            p_axis.inverse(row, &mut scratch);
        }
        Ok(Array2::from_shape_vec((nq, np), c.into_iter().map(|z| z.re).collect()).expect("shape"))
    }
}
