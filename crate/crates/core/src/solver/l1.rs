use super::{max_entry, problem_scale, snap, Sweeper};
use crate::error::Result;
use crate::matcore::{dot, FactorMatrix, SparseSymMatrix};
use crate::wmedian;

/// Residual-free l1 coordinate descent.
///
/// The subproblem in `H[k, l]` is a constrained weighted median with
/// weights `H[i, l]` and targets `A_ik - H[k, :] H[i, :]^T + H_il H_kl` over
/// `i != k`. Only rows in the support of `H[:, l]` are visited, so one
/// sweep costs `O(n r + sum_l n |supp(H[:, l])| r)`: `O(n^2 r^2)` for a dense
/// factor and far less for the sparse factors found on clustered data.
/// Memory is `O(K + n r)`.
pub struct L1Sweeper<'a> {
    a: &'a SparseSymMatrix,
    h: FactorMatrix,
    a_max: f64,
    scale: f64,
    a_col: Vec<f64>,
    points: Vec<(f64, f64)>,
    support: Vec<usize>,
    in_support: Vec<bool>,
}

impl<'a> L1Sweeper<'a> {
    pub fn new(a: &'a SparseSymMatrix, h: FactorMatrix) -> Result<Self> {
        h.validate()?;
        let n = h.nrows();
        Ok(Self {
            a,
            h,
            a_max: max_entry(a),
            scale: 0.0,
            a_col: vec![0.0; n],
            points: Vec::with_capacity(n),
            support: Vec::with_capacity(n),
            in_support: vec![false; n],
        })
    }

    fn update_column(&mut self, l: usize) {
        let n = self.h.nrows();
        self.support.clear();
        for i in 0..n {
            let nonzero = self.h.get(i, l) != 0.0;
            self.in_support[i] = nonzero;
            if nonzero {
                self.support.push(i);
            }
        }
        for k in 0..n {
            let (cols, vals) = self.a.row(k);
            for (&i, &v) in cols.iter().zip(vals) {
                self.a_col[i] = v;
            }

            let h_kl = self.h.get(k, l);
            let row_k = self.h.row(k);
            self.points.clear();
            let mut total = 0.0;
            for &i in &self.support {
                let w = self.h.get(i, l);
                if i == k || w == 0.0 {
                    continue;
                }
                let raw = self.a_col[i] - dot(row_k, self.h.row(i)) + w * h_kl;
                let target = snap(raw, self.scale);
                self.points.push((target / w, w));
                total += w;
            }

            for &i in cols {
                self.a_col[i] = 0.0;
            }
            // All weights zero: the objective does not depend on H[k, l].
            if self.points.is_empty() {
                continue;
            }
            let new = wmedian::scan(&mut self.points, total);
            self.h.set(k, l, new);
            if new != 0.0 && !self.in_support[k] {
                self.in_support[k] = true;
                self.support.push(k);
            }
        }
    }
}

impl Sweeper for L1Sweeper<'_> {
    fn sweep(&mut self) {
        self.scale = self.scale.max(problem_scale(self.a_max, &self.h));
        for l in 0..self.h.ncols() {
            self.update_column(l);
        }
    }

    fn factor(&self) -> &FactorMatrix {
        &self.h
    }

    fn into_factor(self) -> FactorMatrix {
        self.h
    }
}
