//! Finite-difference first-derivative operators on a bounded uniform axis.
//!
//! Interior points use the centered stencil of the requested order; the
//! `order / 2` points nearest each end use one-sided stencils of the same
//! order, built from the `order + 1` points at that end of the axis.

/// Finite-difference weights for the `m`-th derivative at `x0` using the
/// nodes `xs` (Fornberg's recursion).
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

#[derive(Clone, Debug)]
pub struct Stencil {
    order: usize,
    n: usize,
    inv_h: f64,
    /// Centered weights for offsets `-half..=half`, exactly antisymmetric.
    interior: Vec<f64>,
    /// Closure rows `0..half`, each over nodes `0..=order`.
    left: Vec<Vec<f64>>,
    /// Closure rows `n-half..n`, each over nodes `n-order-1..n`.
    right: Vec<Vec<f64>>,
}

impl Stencil {
    pub fn new(order: usize, n: usize, h: f64) -> Self {
        assert!(order >= 2 && order.is_multiple_of(2));
        assert!(n > order + 1, "axis too short for the stencil");
        let half = order / 2;
        let width = order + 1;

        let offsets: Vec<f64> = (0..width).map(|o| o as f64 - half as f64).collect();
        let raw = fornberg_weights(0.0, &offsets, 1);
        // Symmetrize so that D + D^T vanishes identically away from the ends.
        let interior: Vec<f64> = (0..width).map(|o| 0.5 * (raw[o] - raw[width - 1 - o])).collect();

        let nodes: Vec<f64> = (0..width).map(|o| o as f64).collect();
        let left = (0..half).map(|i| fornberg_weights(i as f64, &nodes, 1)).collect();
        let right = (0..half)
            .map(|r| {
                let i = width - half + r;
                fornberg_weights(i as f64, &nodes, 1)
            })
            .collect();

        Self { order, n, inv_h: 1.0 / h, interior, left, right }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Differentiate one contiguous line.
    pub fn apply(&self, input: &[f64], out: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(input.len(), n);
        debug_assert_eq!(out.len(), n);
        let half = self.order / 2;
        let width = self.order + 1;
        let s = self.inv_h;

        for (i, w) in self.left.iter().enumerate() {
            out[i] = dot(w, &input[..width]) * s;
        }
        for (r, w) in self.right.iter().enumerate() {
            out[n - half + r] = dot(w, &input[n - width..]) * s;
        }
        match self.order {
            4 => {
                let (w0, w1) = (self.interior[4], self.interior[3]);
                for i in half..n - half {
                    out[i] = (w0 * (input[i + 2] - input[i - 2]) + w1 * (input[i + 1] - input[i - 1])) * s;
                }
            }
            _ => {
                for i in half..n - half {
                    let mut acc = 0.0;
                    for o in 1..=half {
                        acc += self.interior[half + o] * (input[i + o] - input[i - o]);
                    }
                    out[i] = acc * s;
                }
            }
        }
    }

    /// Dense matrix form, row-major `n x n`.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        let mut unit = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            self.apply(&unit, &mut col);
            for i in 0..n {
                m[i * n + j] = col[i];
            }
            unit[j] = 0.0;
        }
        m
    }

    /// The non-zero corner entries of `D + D^T`, as `(i, j, value)`.
    ///
    /// For a centered interior these are confined to the first and last
    /// `order + 1` indices; `h * a^T (D + D^T) b` is the discrete analogue of
    /// the boundary term `[a b]` in integration by parts.
    pub fn boundary_form(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n;
        let band = (2 * self.order + 1).min(n);
        let dense = self.to_dense();
        let mut entries = Vec::new();
        let idx: Vec<usize> = (0..band).chain(n.saturating_sub(band).max(band)..n).collect();
        for &i in &idx {
            for &j in &idx {
                let v = dense[i * n + j] + dense[j * n + i];
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        entries
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
