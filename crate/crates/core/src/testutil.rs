use rand::Rng;

use crate::matcore::{FactorMatrix, SparseSymMatrix};

/// The 3x3 two-overlapping-clusters matrix `[[1,1,0],[1,1,1],[0,1,1]]`.
pub fn example_one() -> SparseSymMatrix {
    SparseSymMatrix::from_dense(3, &[1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0]).unwrap()
}

pub fn cliques(sizes: &[usize]) -> SparseSymMatrix {
    let n: usize = sizes.iter().sum();
    let mut entries = Vec::new();
    let mut start = 0;
    for &s in sizes {
        for i in start..start + s {
            for j in i..start + s {
                entries.push((i, j, 1.0));
            }
        }
        start += s;
    }
    SparseSymMatrix::from_entries(n, entries).unwrap()
}

pub fn random_binary<R: Rng>(rng: &mut R, n: usize, density: f64) -> SparseSymMatrix {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(density) {
                entries.push((i, j, 1.0));
            }
        }
    }
    SparseSymMatrix::from_entries(n, entries).unwrap()
}

pub fn random_factor<R: Rng>(rng: &mut R, n: usize, r: usize) -> FactorMatrix {
    FactorMatrix::from_vec(n, r, (0..n * r).map(|_| rng.gen::<f64>()).collect()).unwrap()
}

/// Double loop over all `i != j` of a dense row-major `A`.
pub fn naive_od_norm(a: &[f64], n: usize, h: &FactorMatrix, p: u32) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut hh = 0.0;
                for l in 0..h.ncols() {
                    hh += h.get(i, l) * h.get(j, l);
                }
                s += (a[i * n + j] - hh).abs().powi(p as i32);
            }
        }
    }
    s.powf(1.0 / p as f64)
}

pub fn random_weighted<R: Rng>(rng: &mut R, n: usize, density: f64) -> SparseSymMatrix {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(density) {
                entries.push((i, j, rng.gen_range(0.1..2.0)));
            }
        }
    }
    SparseSymMatrix::from_entries(n, entries).unwrap()
}
