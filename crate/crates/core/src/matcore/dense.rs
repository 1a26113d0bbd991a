use super::{FactorMatrix, SparseSymMatrix};

/// Dense symmetric matrix holding signed values, e.g. the residuals
/// `R = A - H H^T` and `P = R + h h^T` of the explicit-residual solvers.
///
/// Uses `n^2` memory; only the small-`n` reference paths build one.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_sparse(a: &SparseSymMatrix) -> Self {
        Self {
            n: a.n(),
            data: a.to_dense(),
        }
    }

    /// Builds from a row-major buffer; the caller guarantees symmetry.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "buffer length must be n^2");
        Self { n, data }
    }

    /// `A - H H^T`.
    pub fn residual(a: &SparseSymMatrix, h: &FactorMatrix) -> Self {
        let mut r = Self::zeros(a.n());
        r.assign_residual(a, h);
        r
    }

    /// Overwrites `self` with `A - H H^T`, reusing the buffer.
    pub fn assign_residual(&mut self, a: &SparseSymMatrix, h: &FactorMatrix) {
        assert_eq!(self.n, a.n(), "dimension mismatch");
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                self.set(i, j, -h.inner(i, j));
            }
            let (cols, vals) = a.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j >= i {
                    self.set(i, j, v - h.inner(i, j));
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and its mirror `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// `self += sign * h h^T`.
    pub fn add_outer(&mut self, h: &[f64], sign: f64) {
        let n = self.n;
        for i in 0..n {
            let hi = sign * h[i];
            for (d, &hj) in self.data[i * n..(i + 1) * n].iter_mut().zip(h) {
                *d += hi * hj;
            }
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}
