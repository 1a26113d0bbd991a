use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Symmetric nonnegative `n x n` matrix in compressed row form.
///
/// Every logical entry is reachable from both of its rows: `(i, j)` and
/// `(j, i)` share one value. Column indices are sorted within each row and no
/// explicit zeros are kept, so [`nnz`](Self::nnz) is the number of nonzeros of
/// the full matrix (off-diagonal entries counted twice).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds the matrix from `(i, j, value)` triplets (0-based).
    ///
    /// Either triangle (or both) may be given. A pair listed twice must carry
    /// the same value; zeros are dropped.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut upper: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside a {n}x{n} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry {
                    row: i,
                    col: j,
                    value: v,
                });
            }
            let key = (i.min(j), i.max(j));
            match upper.get(&key) {
                Some(&prev) if prev != v => {
                    return Err(Error::Asymmetric {
                        row: key.0,
                        col: key.1,
                        upper: prev,
                        lower: v,
                    })
                }
                _ => {
                    upper.insert(key, v);
                }
            }
        }
        Ok(Self::from_upper_map(n, upper))
    }

    fn from_upper_map(n: usize, upper: BTreeMap<(usize, usize), f64>) -> Self {
        let mut degree = vec![0usize; n];
        for (&(i, j), &v) in &upper {
            if v == 0.0 {
                continue;
            }
            degree[i] += 1;
            if i != j {
                degree[j] += 1;
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        for d in &degree {
            row_ptr.push(row_ptr.last().unwrap() + d);
        }
        let nnz = *row_ptr.last().unwrap();
        let mut col_idx = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        let mut fill = row_ptr[..n].to_vec();
        // BTreeMap iterates (i, j) in row-major order of the upper triangle.
        // Lower mirrors of row j land before its own upper entries because
        // they come from rows i < j, which are visited first.
        for (&(i, j), &v) in &upper {
            if v == 0.0 {
                continue;
            }
            col_idx[fill[i]] = j;
            values[fill[i]] = v;
            fill[i] += 1;
            if i != j {
                col_idx[fill[j]] = i;
                values[fill[j]] = v;
                fill[j] += 1;
            }
        }
        debug_assert!((0..n).all(|r| col_idx[row_ptr[r]..row_ptr[r + 1]]
            .windows(2)
            .all(|w| w[0] < w[1])));
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Builds the matrix from a dense row-major array, checking symmetry exactly.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "dense buffer has {} values, expected {}",
                dense.len(),
                n * n
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (u, l) = (dense[i * n + j], dense[j * n + i]);
                if u != l {
                    return Err(Error::Asymmetric {
                        row: i,
                        col: j,
                        upper: u,
                        lower: l,
                    });
                }
            }
        }
        let entries = (0..n).flat_map(|i| (i..n).map(move |j| (i, j, dense[i * n + j])));
        Self::from_entries(n, entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_upper_map(n, BTreeMap::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored nonzeros of the full matrix (off-diagonal entries counted twice).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i` (equivalently column `i`).
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.get(i, i)
    }

    /// Upper-triangle entries `(i, j, value)` with `i <= j`, row-major.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .filter(move |(&j, _)| j >= i)
                .map(move |(&j, &v)| (i, j, v))
        })
    }

    /// `out = A x`.
    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let (cols, vals) = self.row(i);
            *o = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).1.iter().sum()).collect()
    }

    /// True when every stored value equals one.
    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|&v| v == 1.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                d[i * self.n + j] = v;
            }
        }
        d
    }
}
