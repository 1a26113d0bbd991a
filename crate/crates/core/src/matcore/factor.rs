use crate::error::{Error, Result};

/// Dense nonnegative `n x r` factor, stored row-major so that the row
/// `H[k, :]` of an item is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrix {
    n: usize,
    r: usize,
    data: Vec<f64>,
}

impl FactorMatrix {
    pub fn zeros(n: usize, r: usize) -> Self {
        Self {
            n,
            r,
            data: vec![0.0; n * r],
        }
    }

    /// Wraps a row-major buffer after checking shape, finiteness and sign.
    pub fn from_vec(n: usize, r: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * r {
            return Err(Error::DimensionMismatch(format!(
                "factor buffer has {} values, expected {n}x{r}",
                data.len()
            )));
        }
        let h = Self { n, r, data };
        h.validate()?;
        Ok(h)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let r = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != r) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} has {} columns, expected {r}",
                rows[bad].len()
            )));
        }
        Self::from_vec(n, r, rows.concat())
    }

    /// Checks that every entry is finite and nonnegative.
    pub fn validate(&self) -> Result<()> {
        for (idx, &v) in self.data.iter().enumerate() {
            let (row, col) = (idx / self.r.max(1), idx % self.r.max(1));
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { row, col, value: v });
            }
        }
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.data[k * self.r + l]
    }

    #[inline]
    pub fn set(&mut self, k: usize, l: usize, v: f64) {
        self.data[k * self.r + l] = v;
    }

    #[inline]
    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.r..(k + 1) * self.r]
    }

    #[inline]
    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.data[k * self.r..(k + 1) * self.r]
    }

    pub fn column(&self, l: usize) -> Vec<f64> {
        (0..self.n).map(|k| self.get(k, l)).collect()
    }

    pub fn set_column(&mut self, l: usize, col: &[f64]) {
        for (k, &v) in col.iter().enumerate() {
            self.set(k, l, v);
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `(H H^T)_{ij}`.
    #[inline]
    pub fn inner(&self, i: usize, j: usize) -> f64 {
        dot(self.row(i), self.row(j))
    }

    /// Squared norms of the columns, `C_l = ||H[:, l]||^2`.
    pub fn column_sq_norms(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.r];
        for k in 0..self.n {
            for (cl, &h) in c.iter_mut().zip(self.row(k)) {
                *cl += h * h;
            }
        }
        c
    }

    /// Squared norms of the rows, `L_k = ||H[k, :]||^2`.
    pub fn row_sq_norms(&self) -> Vec<f64> {
        (0..self.n).map(|k| dot(self.row(k), self.row(k))).collect()
    }

    /// Gram matrix `H^T H`, row-major `r x r`.
    pub fn gram(&self) -> Vec<f64> {
        let r = self.r;
        let mut d = vec![0.0; r * r];
        for k in 0..self.n {
            let row = self.row(k);
            for (a, &ha) in row.iter().enumerate() {
                if ha == 0.0 {
                    continue;
                }
                for (b, &hb) in row.iter().enumerate() {
                    d[a * r + b] += ha * hb;
                }
            }
        }
        d
    }

    /// Copy with rows permuted: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n, self.r);
        for (i, &p) in perm.iter().enumerate() {
            out.data[i * self.r..(i + 1) * self.r].copy_from_slice(self.row(p));
        }
        out
    }

    /// Copy with columns permuted: column `l` of the result is column `perm[l]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n, self.r);
        for k in 0..self.n {
            for (l, &p) in perm.iter().enumerate() {
                out.set(k, l, self.get(k, p));
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_match_definitions() {
        let h = FactorMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 3.0], vec![4.0, 0.5]]).unwrap();
        assert_eq!(h.column_sq_norms(), vec![17.0, 13.25]);
        assert_eq!(h.row_sq_norms(), vec![5.0, 9.0, 16.25]);
        assert_eq!(h.gram(), vec![17.0, 4.0, 4.0, 13.25]);
        assert_eq!(h.inner(0, 2), 5.0);
    }

    #[test]
    fn rejects_negative_and_ragged() {
        assert!(matches!(
            FactorMatrix::from_rows(&[vec![1.0], vec![-1.0]]),
            Err(Error::NegativeEntry { row: 1, col: 0, .. })
        ));
        assert!(FactorMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(FactorMatrix::from_vec(1, 1, vec![f64::NAN]).is_err());
    }
}
