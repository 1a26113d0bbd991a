use super::{is_degenerate, max_entry, problem_scale, snap, Sweeper};
use crate::error::Result;
use crate::matcore::{FactorMatrix, SparseSymMatrix};

/// Running quantities of the residual-free l2 solver.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Caches {
    /// `||H[:, l]||^2`.
    pub col_sq: Vec<f64>,
    /// `H^T H`, row-major `r x r`.
    pub gram: Vec<f64>,
}

impl L2Caches {
    pub fn from_factor(h: &FactorMatrix) -> Self {
        Self {
            col_sq: h.column_sq_norms(),
            gram: h.gram(),
        }
    }

    /// Largest absolute difference from caches recomputed from `h`.
    pub fn deviation(&self, h: &FactorMatrix) -> f64 {
        let fresh = Self::from_factor(h);
        let diff = |x: &[f64], y: &[f64]| {
            x.iter()
                .zip(y)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max)
        };
        diff(&self.col_sq, &fresh.col_sq).max(diff(&self.gram, &fresh.gram))
    }

    /// Recomputes `C_l` and row/column `l` of `D` from `h`.
    fn refresh_column(&mut self, h: &FactorMatrix, l: usize) {
        let r = h.ncols();
        let mut row = vec![0.0; r];
        for k in 0..h.nrows() {
            let hk = h.row(k);
            for (g, &x) in row.iter_mut().zip(hk) {
                *g += hk[l] * x;
            }
        }
        for (t, &g) in row.iter().enumerate() {
            self.gram[l * r + t] = g;
            self.gram[t * r + l] = g;
        }
        self.col_sq[l] = row[l];
    }
}

/// Residual-free l2 coordinate descent. Memory is `O(K + n r + r^2)`; one
/// sweep costs `O(r (K + n r))`.
///
/// With `C` the column norms and `D = H^T H`, the update of `H[k, l]` is
/// `max(0, b / a)` where `a = C_l - H_kl^2` and
/// `b = H[:, l]^T A[:, k] - H_kl A_kk - sum_{t != l} H_kt (D_lt - H_kl H_kt)`,
/// the correlation of `H[:, l]` with column `k` of `A - H H^T + H[:, l] H[:, l]^T`
/// off the diagonal. When `H_kl` holds more than half of `C_l`, the cached
/// `C_l` and `D[l, :]` are dominated by row `k` and would leave `a` and `b`
/// with large relative error, so `sum_{i != k} H_il H[i, :]` is summed
/// directly instead; at most one entry per column qualifies, which adds
/// `O(n r^2)` per sweep. `C_l` and `D[l, :]` are also refreshed whenever an
/// update removes most of the column norm.
pub struct L2Sweeper<'a> {
    a: &'a SparseSymMatrix,
    h: FactorMatrix,
    caches: L2Caches,
    a_max: f64,
    scale: f64,
    col_sum: f64,
    others: Vec<f64>,
}

impl<'a> L2Sweeper<'a> {
    pub fn new(a: &'a SparseSymMatrix, h: FactorMatrix) -> Result<Self> {
        h.validate()?;
        let caches = L2Caches::from_factor(&h);
        let r = h.ncols();
        Ok(Self {
            a,
            h,
            caches,
            a_max: max_entry(a),
            scale: 0.0,
            col_sum: 0.0,
            others: vec![0.0; r],
        })
    }

    pub fn caches(&self) -> &L2Caches {
        &self.caches
    }

    /// Curvature `a` and linear term `b` of the subproblem in `H[k, l]`,
    /// so that the objective's partial derivative is `4 (a H[k, l] - b)`.
    pub fn coefficients(&mut self, k: usize, l: usize) -> (f64, f64) {
        let r = self.h.ncols();
        let old = self.h.get(k, l);
        let mut curvature = self.caches.col_sq[l] - old * old;
        let dominant = old * old > curvature;
        if dominant {
            self.others.fill(0.0);
            for i in (0..self.h.nrows()).filter(|&i| i != k) {
                let hi = self.h.row(i);
                if hi[l] != 0.0 {
                    for (g, &x) in self.others.iter_mut().zip(hi) {
                        *g += hi[l] * x;
                    }
                }
            }
            curvature = self.others[l];
        }
        let (cols, vals) = self.a.row(k);
        let mut h_dot_a = 0.0;
        for (&i, &v) in cols.iter().zip(vals) {
            if i != k {
                h_dot_a += v * self.h.get(i, l);
            }
        }
        let row = self.h.row(k);
        let gram = &self.caches.gram;
        let mut cross = 0.0;
        for (t, &x) in row.iter().enumerate() {
            if t != l {
                let g = if dominant { self.others[t] } else { gram[l * r + t] - old * x };
                cross += x * g;
            }
        }
        (curvature, h_dot_a - cross)
    }

    fn update(&mut self, k: usize, l: usize, scale: &mut f64) {
        let r = self.h.ncols();
        let old = self.h.get(k, l);
        *scale = scale.max(self.caches.col_sq[l]);
        let (curvature, b) = self.coefficients(k, l);
        if is_degenerate(curvature, *scale) {
            return;
        }
        let b = snap(b, self.scale * self.col_sum);
        let new = (b / curvature).max(0.0);
        if new == old {
            return;
        }

        self.col_sum += new - old;
        let delta_sq = new * new - old * old;
        self.caches.col_sq[l] += delta_sq;
        let step = new - old;
        for t in 0..r {
            if t == l {
                self.caches.gram[l * r + l] += delta_sq;
            } else {
                let g = self.caches.gram[l * r + t] + self.h.get(k, t) * step;
                self.caches.gram[l * r + t] = g;
                self.caches.gram[t * r + l] = g;
            }
        }
        self.h.set(k, l, new);
        if old * old > 1e3 * self.caches.col_sq[l] {
            self.caches.refresh_column(&self.h, l);
        }
    }
}

impl Sweeper for L2Sweeper<'_> {
    fn sweep(&mut self) {
        self.scale = self.scale.max(problem_scale(self.a_max, &self.h));
        for l in 0..self.h.ncols() {
            self.col_sum = (0..self.h.nrows()).map(|k| self.h.get(k, l)).sum();
            self.caches.refresh_column(&self.h, l);
            let mut scale = self.caches.col_sq[l];
            for k in 0..self.h.nrows() {
                self.update(k, l, &mut scale);
            }
        }
    }

    fn factor(&self) -> &FactorMatrix {
        &self.h
    }

    fn into_factor(self) -> FactorMatrix {
        self.h
    }
}
