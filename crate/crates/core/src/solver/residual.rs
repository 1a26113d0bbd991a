use super::{is_degenerate, max_entry, problem_scale, snap, Sweeper};
use crate::error::{Error, Result};
use crate::matcore::{DenseSymMatrix, FactorMatrix, Loss, SparseSymMatrix};
use crate::wmedian;

/// Exact minimizer over `h_k >= 0` of `sum_{i != j} (P_ij - h_i h_j)^2`
/// with the other entries of `h` fixed.
///
/// The partial derivative is `a h_k - b` with `a = sum_{i != k} h_i^2` and
/// `b = sum_{i != k} h_i P_ik`, so the minimizer is `max(0, b / a)`. When
/// `a == 0` the objective does not depend on `h_k` and `h[k]` is returned.
pub fn l2_coordinate_update(p: &DenseSymMatrix, h: &[f64], k: usize) -> f64 {
    l2_update(p, None, h, k, &mut 0.0)
}

/// As [`l2_coordinate_update`], with degeneracy judged against the largest
/// squared norm `norm_ref` seen so far in the current column pass, and `b`
/// snapped against `bound * sum(h)` when a problem scale `bound` is given.
fn l2_update(p: &DenseSymMatrix, bound: Option<f64>, h: &[f64], k: usize, norm_ref: &mut f64) -> f64 {
    let hk = h[k];
    let row = p.row(k);
    let (mut curvature, mut b) = (0.0, 0.0);
    for (i, (&x, &p_ik)) in h.iter().zip(row).enumerate() {
        if i != k {
            curvature += x * x;
            b += x * p_ik;
        }
    }
    *norm_ref = norm_ref.max(curvature + hk * hk);
    if is_degenerate(curvature, *norm_ref) {
        return hk;
    }
    if let Some(bound) = bound {
        b = snap(b, bound * h.iter().sum::<f64>());
    }
    (b / curvature).max(0.0)
}

/// One cyclic l1 pass over `h` for `min_{h >= 0} sum_{i != j} |P_ij - h_i h_j|`.
///
/// Entry `k` becomes the constrained weighted median of targets `P[k, i]`
/// with weights `h_i`, `i != k`.
pub fn l1_rank_one(p: &DenseSymMatrix, h0: &[f64]) -> Result<Vec<f64>> {
    if h0.len() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "residual is {0}x{0} but h has length {1}",
            p.n(),
            h0.len()
        )));
    }
    let mut h = h0.to_vec();
    let mut points = Vec::with_capacity(h.len());
    l1_pass(p, None, &mut h, &mut points);
    Ok(h)
}

/// Given a problem scale `bound`, each target `P_ik` is snapped against it.
fn l1_pass(p: &DenseSymMatrix, bound: Option<f64>, h: &mut [f64], points: &mut Vec<(f64, f64)>) {
    for k in 0..h.len() {
        let row = p.row(k);
        points.clear();
        let mut total = 0.0;
        for (i, (&w, &p_ik)) in h.iter().zip(row).enumerate() {
            if i == k || w == 0.0 {
                continue;
            }
            let target = bound.map_or(p_ik, |m| snap(p_ik, m));
            points.push((target / w, w));
            total += w;
        }
        if points.is_empty() {
            continue;
        }
        h[k] = wmedian::scan(points, total);
    }
}

/// Coordinate descent on the explicit residual: for each column `l`,
/// `P = R + h h^T`, update `h = H[:, l]` against `P`, then `R = P - h h^T`.
/// `R` is recomputed from `A` at the start of every sweep so that rounding
/// does not accumulate across sweeps.
pub struct ResidualSweeper<'a> {
    a: &'a SparseSymMatrix,
    h: FactorMatrix,
    a_max: f64,
    scale: f64,
    residual: DenseSymMatrix,
    loss: Loss,
    column: Vec<f64>,
    points: Vec<(f64, f64)>,
}

impl<'a> ResidualSweeper<'a> {
    pub fn new(a: &'a SparseSymMatrix, h: FactorMatrix, loss: Loss) -> Result<Self> {
        h.validate()?;
        if h.nrows() != a.n() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {0}x{0} but factor has {1} rows",
                a.n(),
                h.nrows()
            )));
        }
        let residual = DenseSymMatrix::residual(a, &h);
        let n = h.nrows();
        Ok(Self {
            a,
            h,
            a_max: max_entry(a),
            scale: 0.0,
            residual,
            loss,
            column: vec![0.0; n],
            points: Vec::with_capacity(n),
        })
    }

    pub fn residual(&self) -> &DenseSymMatrix {
        &self.residual
    }
}

impl Sweeper for ResidualSweeper<'_> {
    fn sweep(&mut self) {
        self.scale = self.scale.max(problem_scale(self.a_max, &self.h));
        self.residual.assign_residual(self.a, &self.h);
        for l in 0..self.h.ncols() {
            for (k, c) in self.column.iter_mut().enumerate() {
                *c = self.h.get(k, l);
            }
            self.residual.add_outer(&self.column, 1.0);
            let p = &self.residual;
            match self.loss {
                Loss::L2 => {
                    let mut norm_ref = 0.0;
                    for k in 0..self.column.len() {
                        self.column[k] = l2_update(p, Some(self.scale), &self.column, k, &mut norm_ref);
                    }
                }
                Loss::L1 => l1_pass(p, Some(self.scale), &mut self.column, &mut self.points),
            }
            self.residual.add_outer(&self.column, -1.0);
            self.h.set_column(l, &self.column);
        }
    }

    fn factor(&self) -> &FactorMatrix {
        &self.h
    }

    fn into_factor(self) -> FactorMatrix {
        self.h
    }
}
