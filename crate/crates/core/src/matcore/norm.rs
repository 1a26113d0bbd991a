use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factor::dot;
use super::{DenseSymMatrix, FactorMatrix, SparseSymMatrix};
use crate::error::{Error, Result};

/// Entrywise loss on the off-diagonal residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    L1,
    L2,
}

impl Loss {
    pub fn p(self) -> u32 {
        match self {
            Loss::L1 => 1,
            Loss::L2 => 2,
        }
    }

    #[inline]
    fn term(self, x: f64) -> f64 {
        match self {
            Loss::L1 => x.abs(),
            Loss::L2 => x * x,
        }
    }

    fn finish(self, sum: f64) -> f64 {
        match self {
            Loss::L1 => sum,
            Loss::L2 => sum.sqrt(),
        }
    }
}

impl std::str::FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Loss::L1),
            "l2" => Ok(Loss::L2),
            other => Err(Error::InvalidArgument(format!("unknown loss {other:?}"))),
        }
    }
}

/// A symmetric matrix whose strict upper triangle can be swept row by row.
pub trait OffDiagonal: Sync {
    fn dim(&self) -> usize;

    /// `sum_{j > i} loss(A_ij - (H H^T)_ij)`.
    fn upper_row_loss(&self, i: usize, h: &FactorMatrix, loss: Loss) -> f64;
}

impl OffDiagonal for SparseSymMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn upper_row_loss(&self, i: usize, h: &FactorMatrix, loss: Loss) -> f64 {
        let (cols, vals) = self.row(i);
        let start = cols.partition_point(|&c| c <= i);
        let mut nz = cols[start..].iter().zip(&vals[start..]).peekable();
        let hi = h.row(i);
        let mut acc = 0.0;
        for j in (i + 1)..self.n() {
            let a = match nz.peek() {
                Some(&(&c, &v)) if c == j => {
                    nz.next();
                    v
                }
                _ => 0.0,
            };
            acc += loss.term(a - dot(hi, h.row(j)));
        }
        acc
    }
}

impl OffDiagonal for DenseSymMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn upper_row_loss(&self, i: usize, h: &FactorMatrix, loss: Loss) -> f64 {
        let hi = h.row(i);
        let row = self.row(i);
        ((i + 1)..self.n())
            .map(|j| loss.term(row[j] - dot(hi, h.row(j))))
            .sum()
    }
}

/// `||A - H H^T||_{OD,p}`: the entrywise `p`-norm over `i != j`, diagonal
/// excluded.
///
/// Runs in `O(n^2 r)` time without materializing `H H^T`. Row partial sums
/// are computed in parallel and reduced in a fixed order, so the result is
/// deterministic.
pub fn od_norm<M: OffDiagonal + ?Sized>(a: &M, h: &FactorMatrix, loss: Loss) -> Result<f64> {
    Ok(loss.finish(od_loss_sum(a, h, loss)?))
}

/// `sum_{i != j} |A_ij - (H H^T)_ij|^p` (no root taken).
pub fn od_loss_sum<M: OffDiagonal + ?Sized>(a: &M, h: &FactorMatrix, loss: Loss) -> Result<f64> {
    let n = a.dim();
    if h.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {n}x{n} but factor has {} rows",
            h.nrows()
        )));
    }
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .with_min_len(16)
        .map(|i| a.upper_row_loss(i, h, loss))
        .collect();
    Ok(2.0 * rows.iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{example_one, naive_od_norm, random_binary, random_factor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn example_one_is_exact() {
        let a = example_one();
        let h = FactorMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(od_norm(&a, &h, Loss::L1).unwrap(), 0.0);
        assert_eq!(od_norm(&a, &h, Loss::L2).unwrap(), 0.0);
    }

    #[test]
    fn zero_factor_gives_norm_of_a() {
        let a = SparseSymMatrix::from_entries(3, [(0, 1, 2.0), (1, 2, 3.0), (0, 0, 9.0)]).unwrap();
        let h = FactorMatrix::zeros(3, 2);
        assert_eq!(od_norm(&a, &h, Loss::L1).unwrap(), 10.0);
        assert!((od_norm(&a, &h, Loss::L2).unwrap() - 26f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn matches_brute_force_on_random_binary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_binary(&mut rng, 4, 0.5);
            let h = random_factor(&mut rng, 4, 2);
            for loss in [Loss::L1, Loss::L2] {
                let fast = od_norm(&a, &h, loss).unwrap();
                let slow = naive_od_norm(&a.to_dense(), 4, &h, loss.p());
                assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
            }
        }
    }

    #[test]
    fn dense_and_sparse_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_binary(&mut rng, 12, 0.3);
        let h = random_factor(&mut rng, 12, 3);
        let d = DenseSymMatrix::from_sparse(&a);
        for loss in [Loss::L1, Loss::L2] {
            let s = od_norm(&a, &h, loss).unwrap();
            let t = od_norm(&d, &h, loss).unwrap();
            assert!((s - t).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = SparseSymMatrix::zeros(3);
        assert!(od_norm(&a, &FactorMatrix::zeros(2, 1), Loss::L2).is_err());
    }
}
