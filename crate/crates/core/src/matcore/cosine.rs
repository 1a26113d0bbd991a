use std::collections::BTreeMap;

use super::SparseSymMatrix;
use crate::error::{Error, Result};

/// Sparse nonnegative `rows x cols` matrix, e.g. document-by-word counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCounts {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseCounts {
    /// Builds from 0-based triplets. Repeated coordinates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut cells: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside a {rows}x{cols} matrix"
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
            *cells.entry((i, j)).or_insert(0.0) += v;
        }
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(cells.len());
        let mut values = Vec::with_capacity(cells.len());
        for (&(i, j), &v) in &cells {
            if v == 0.0 {
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }
}

/// Cosine similarity between the rows of `x`:
/// `A_ab = <x_a, x_b> / (||x_a|| ||x_b||)`, with unit diagonal.
///
/// Only pairs sharing at least one column produce a stored entry. Values are
/// clamped to `[0, 1]` against rounding.
pub fn cosine_similarity(x: &SparseCounts) -> Result<SparseSymMatrix> {
    let n = x.nrows();
    let mut inv_norm = Vec::with_capacity(n);
    for i in 0..n {
        let sq: f64 = x.row(i).1.iter().map(|v| v * v).sum();
        if sq == 0.0 {
            return Err(Error::ZeroRow(i));
        }
        inv_norm.push(1.0 / sq.sqrt());
    }

    // Inverted index: column -> (row, normalized value).
    let mut postings: Vec<Vec<(usize, f64)>> = vec![Vec::new(); x.ncols()];
    for (i, j, v) in x.triplets() {
        postings[j].push((i, v * inv_norm[i]));
    }

    let mut acc = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut entries = Vec::new();
    for a in 0..n {
        let (cols, vals) = x.row(a);
        for (&j, &v) in cols.iter().zip(vals) {
            let va = v * inv_norm[a];
            for &(b, vb) in &postings[j] {
                if b <= a {
                    continue;
                }
                if acc[b] == 0.0 {
                    touched.push(b);
                }
                acc[b] += va * vb;
            }
        }
        entries.push((a, a, 1.0));
        touched.sort_unstable();
        for &b in &touched {
            entries.push((a, b, acc[b].clamp(0.0, 1.0)));
            acc[b] = 0.0;
        }
        touched.clear();
    }
    SparseSymMatrix::from_entries(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(rows: &[&[f64]]) -> SparseCounts {
        let m = rows[0].len();
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        SparseCounts::from_triplets(rows.len(), m, trip).unwrap()
    }

    #[test]
    fn identity_counts_give_identity() {
        let x = counts(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let a = cosine_similarity(&x).unwrap();
        assert_eq!(a.to_dense(), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn identical_documents_are_fully_similar() {
        let x = counts(&[&[2.0, 3.0, 0.0], &[2.0, 3.0, 0.0], &[0.0, 0.0, 4.0]]);
        let a = cosine_similarity(&x).unwrap();
        assert!((a.get(0, 1) - 1.0).abs() < 1e-15);
        assert!(a.get(0, 1) <= 1.0);
    }

    #[test]
    fn hand_computed_half() {
        let x = counts(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0]]);
        let a = cosine_similarity(&x).unwrap();
        assert!((a.get(0, 1) - 0.5).abs() < 1e-15);
        assert_eq!(a.diag(0), 1.0);
    }

    #[test]
    fn zero_row_reports_index() {
        let x = counts(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(cosine_similarity(&x), Err(Error::ZeroRow(1))));
    }

    #[test]
    fn brute_force_cross_check() {
        let rows: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..5).map(|j| ((i * 7 + j * 3) % 4) as f64).collect())
            .filter(|r: &Vec<f64>| r.iter().any(|&v| v > 0.0))
            .collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let a = cosine_similarity(&counts(&refs)).unwrap();
        for p in 0..rows.len() {
            for q in 0..rows.len() {
                let d: f64 = rows[p].iter().zip(&rows[q]).map(|(x, y)| x * y).sum();
                let np: f64 = rows[p].iter().map(|x| x * x).sum::<f64>().sqrt();
                let nq: f64 = rows[q].iter().map(|x| x * x).sum::<f64>().sqrt();
                let expect = if p == q { 1.0 } else { d / (np * nq) };
                assert!((a.get(p, q) - expect).abs() < 1e-12);
                assert!((0.0..=1.0).contains(&a.get(p, q)));
            }
        }
    }
}
