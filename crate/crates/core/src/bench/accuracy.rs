use super::assignment::min_cost_assignment;
use crate::error::{Error, Result};
use crate::matcore::FactorMatrix;

/// Row-wise argmax indicator of `h`; ties (including all-zero rows) go to
/// the lowest column.
pub fn harden(h: &FactorMatrix) -> FactorMatrix {
    let mut out = FactorMatrix::zeros(h.nrows(), h.ncols());
    if h.ncols() == 0 {
        return out;
    }
    for k in 0..h.nrows() {
        let row = h.row(k);
        let mut best = 0;
        for (l, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = l;
            }
        }
        out.set(k, best, 1.0);
    }
    out
}

/// `1 - sqrt(min_P ||H_P - H*||_F^2 / (r n))` with the minimum over column
/// permutations `P`, computed exactly by linear assignment on the `r x r`
/// matrix of squared column distances.
pub fn permuted_accuracy(h: &FactorMatrix, truth: &FactorMatrix) -> Result<f64> {
    let (n, r) = (truth.nrows(), truth.ncols());
    if h.nrows() != n || h.ncols() != r {
        return Err(Error::DimensionMismatch(format!(
            "factor is {}x{} but ground truth is {n}x{r}",
            h.nrows(),
            h.ncols()
        )));
    }
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument("empty ground truth".into()));
    }
    let mut cost = vec![vec![0.0; r]; r];
    for k in 0..n {
        let (hr, tr) = (h.row(k), truth.row(k));
        for (a, &x) in hr.iter().enumerate() {
            for (b, &y) in tr.iter().enumerate() {
                cost[b][a] += (x - y) * (x - y);
            }
        }
    }
    let (_, err) = min_cost_assignment(&cost);
    Ok(1.0 - (err.max(0.0) / (r * n) as f64).sqrt())
}

/// Clustering accuracy of `h` against a binary ground truth whose rows hold
/// at most one 1 (all-zero rows mark items that belong to no cluster).
/// `h` is scored as is with [`permuted_accuracy`].
pub fn accuracy(h: &FactorMatrix, truth: &FactorMatrix) -> Result<f64> {
    check_indicator(truth)?;
    permuted_accuracy(h, truth)
}

/// [`accuracy`] of the row-argmax hardening of `h`.
pub fn hardened_accuracy(h: &FactorMatrix, truth: &FactorMatrix) -> Result<f64> {
    check_indicator(truth)?;
    permuted_accuracy(&harden(h), truth)
}

fn check_indicator(truth: &FactorMatrix) -> Result<()> {
    for k in 0..truth.nrows() {
        let row = truth.row(k);
        let ones = row.iter().filter(|&&v| v == 1.0).count();
        let zeros = row.iter().filter(|&&v| v == 0.0).count();
        if ones > 1 || ones + zeros != row.len() {
            return Err(Error::InvalidArgument(format!(
                "ground-truth row {k} is not an indicator row"
            )));
        }
    }
    Ok(())
}
