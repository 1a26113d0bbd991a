//! Binary rank-one results and the exact factorization with one column per
//! off-diagonal pair.

use crate::error::{Error, Result};
use crate::matcore::{FactorMatrix, SparseSymMatrix};

/// Off-diagonal mismatch counts and absolute errors for binary problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryNorm {
    L0,
    L1,
}

/// `||A - h h^T||_{OD,0}`: number of `i != j` with `A_ij != h_i h_j`.
pub fn od_l0_rank_one(a: &SparseSymMatrix, h: &[f64]) -> usize {
    let n = a.n();
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if a.get(i, j) != h[i] * h[j] {
                count += 2;
            }
        }
    }
    count
}

/// `||A - h h^T||_{OD,1}`.
pub fn od_l1_rank_one(a: &SparseSymMatrix, h: &[f64]) -> f64 {
    let n = a.n();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += (a.get(i, j) - h[i] * h[j]).abs();
        }
    }
    2.0 * sum
}

/// Support indicator: `0` stays `0`, any other value becomes `1`.
///
/// For binary `A` this never increases the off-diagonal mismatch count.
pub fn binarize_l0(h: &[f64]) -> Vec<f64> {
    h.iter().map(|&x| if x == 0.0 { 0.0 } else { 1.0 }).collect()
}

/// Rounds each fractional entry of `h in [0, 1]^n` to whichever of `0` or
/// `1` gives the smaller `sum_{j != i} |A_ij - h_i h_j|`, one entry at a
/// time. Because that partial objective is convex and piecewise linear with
/// breakpoints `A_ij / h_j` that are `0` or `>= 1`, an endpoint is optimal
/// on `[0, 1]` and the off-diagonal l1 error never increases.
pub fn binarize_l1(h: &[f64], a: &SparseSymMatrix) -> Result<Vec<f64>> {
    if h.len() != a.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {} but matrix is {}x{}",
            h.len(),
            a.n(),
            a.n()
        )));
    }
    if let Some(bad) = h.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidArgument(format!("entry {bad} outside [0, 1]")));
    }
    let mut out = h.to_vec();
    for i in 0..out.len() {
        if out[i] == 0.0 || out[i] == 1.0 {
            continue;
        }
        let partial = |v: f64, out: &[f64]| -> f64 {
            (0..out.len())
                .filter(|&j| j != i)
                .map(|j| (a.get(i, j) - v * out[j]).abs())
                .sum()
        };
        out[i] = if partial(0.0, &out) <= partial(1.0, &out) { 0.0 } else { 1.0 };
    }
    Ok(out)
}

/// Largest dimension accepted by [`rank_one_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 22;

/// Exhaustive minimization of the rank-one binary objective over
/// `h in {0, 1}^n`. Returns the first minimizer in enumeration order
/// (bit `i` of the counter is `h_i`) and its objective value.
pub fn rank_one_bruteforce(a: &SparseSymMatrix, norm: BinaryNorm) -> Result<(Vec<f64>, f64)> {
    let n = a.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::TooLarge(format!(
            "exhaustive search over 2^{n} vectors (limit 2^{BRUTEFORCE_MAX_N})"
        )));
    }
    // Off-diagonal pattern as bitmasks; valid for binary and non-binary A
    // alike since we only compare against products in {0, 1}.
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let mut best = (0u64, f64::INFINITY);
    for mask in 0u64..(1u64 << n) {
        let mut obj = 0.0;
        for i in 0..n {
            let hi = (mask >> i) & 1;
            for j in (i + 1)..n {
                let prod = (hi & (mask >> j) & 1) as f64;
                let d = rows[i][j] - prod;
                obj += match norm {
                    BinaryNorm::L0 => f64::from(u8::from(d != 0.0)),
                    BinaryNorm::L1 => d.abs(),
                };
            }
        }
        let obj = 2.0 * obj;
        if obj < best.1 {
            best = (mask, obj);
        }
    }
    let h = (0..n).map(|i| ((best.0 >> i) & 1) as f64).collect();
    Ok((h, best.1))
}

/// Factor with one column per nonzero off-diagonal pair `A_pq` (`p < q`):
/// `H[p, l] = 1`, `H[q, l] = A_pq`. Then `H H^T` matches `A` exactly off the
/// diagonal. Columns follow the row-major order of the upper triangle.
pub fn exact_factorization(a: &SparseSymMatrix) -> FactorMatrix {
    let pairs: Vec<(usize, usize, f64)> = a.upper_entries().filter(|&(i, j, _)| i != j).collect();
    let mut h = FactorMatrix::zeros(a.n(), pairs.len());
    for (l, &(p, q, v)) in pairs.iter().enumerate() {
        h.set(p, l, 1.0);
        h.set(q, l, v);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{od_norm, Loss};
    use crate::testutil::{example_one, random_binary};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binarize_l0_examples() {
        assert_eq!(binarize_l0(&[0.0, 0.3, 2.0]), vec![0.0, 1.0, 1.0]);
        assert_eq!(binarize_l0(&[0.0; 3]), vec![0.0; 3]);
    }

    #[test]
    fn binarize_l1_examples() {
        let a = SparseSymMatrix::from_entries(2, [(0, 1, 1.0)]).unwrap();
        let h = [0.5, 1.0];
        assert_eq!(od_l1_rank_one(&a, &h), 1.0);
        let b = binarize_l1(&h, &a).unwrap();
        assert_eq!(b, vec![1.0, 1.0]);
        assert_eq!(od_l1_rank_one(&a, &b), 0.0);
        assert_eq!(binarize_l1(&[1.0, 0.0], &a).unwrap(), vec![1.0, 0.0]);
        assert!(binarize_l1(&[1.5, 0.0], &a).is_err());
    }

    #[test]
    fn transforms_never_increase_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let n = rng.gen_range(2..=6);
            let a = random_binary(&mut rng, n, 0.5);
            let h: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() * 2.0 })
                .collect();
            assert!(od_l0_rank_one(&a, &binarize_l0(&h)) <= od_l0_rank_one(&a, &h));
            let h01: Vec<f64> = h.iter().map(|x| x.min(1.0)).collect();
            let b = binarize_l1(&h01, &a).unwrap();
            assert!(b.iter().all(|&x| x == 0.0 || x == 1.0));
            assert!(od_l1_rank_one(&a, &b) <= od_l1_rank_one(&a, &h01) + 1e-12);
        }
    }

    #[test]
    fn bruteforce_examples() {
        let a = SparseSymMatrix::from_entries(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        for norm in [BinaryNorm::L0, BinaryNorm::L1] {
            let (h, obj) = rank_one_bruteforce(&a, norm).unwrap();
            assert_eq!(h, vec![1.0, 1.0, 1.0, 0.0]);
            assert_eq!(obj, 0.0);
        }
        // Eight candidates on the 3x3 example; the best leave one edge (two
        // entries) unexplained.
        let (h, obj) = rank_one_bruteforce(&example_one(), BinaryNorm::L1).unwrap();
        assert_eq!(obj, 2.0);
        assert!(h == vec![1.0, 1.0, 0.0] || h == vec![0.0, 1.0, 1.0]);
        assert!(rank_one_bruteforce(&SparseSymMatrix::zeros(23), BinaryNorm::L0).is_err());
    }

    #[test]
    fn exact_factorization_examples() {
        let a = example_one();
        let h = exact_factorization(&a);
        // Nonzero off-diagonal pairs are (0, 1) and (1, 2).
        assert_eq!((h.nrows(), h.ncols()), (3, 2));
        assert_eq!(od_norm(&a, &h, Loss::L1).unwrap(), 0.0);

        let diag_only = SparseSymMatrix::from_entries(3, [(0, 0, 1.0), (2, 2, 4.0)]).unwrap();
        assert_eq!(exact_factorization(&diag_only).ncols(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dense: Vec<f64> = {
            let mut d = vec![0.0; 25];
            for i in 0..5 {
                for j in i..5 {
                    let v = rng.gen_range(0.1..3.0);
                    d[i * 5 + j] = v;
                    d[j * 5 + i] = v;
                }
            }
            d
        };
        let a = SparseSymMatrix::from_dense(5, &dense).unwrap();
        let h = exact_factorization(&a);
        assert_eq!(h.ncols(), 10);
        assert!(od_norm(&a, &h, Loss::L2).unwrap() < 1e-12);
    }
}
