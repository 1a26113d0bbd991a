//! Starting points for the solvers: zero, uniform random, and greedy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{dot, FactorMatrix, Loss, SparseSymMatrix};
use crate::wmedian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Zero,
    Random,
    Greedy,
}

impl std::str::FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(InitKind::Zero),
            "random" => Ok(InitKind::Random),
            "greedy" => Ok(InitKind::Greedy),
            other => Err(Error::InvalidArgument(format!("unknown init {other:?}"))),
        }
    }
}

pub fn init_zero(n: usize, r: usize) -> FactorMatrix {
    FactorMatrix::zeros(n, r)
}

/// I.i.d. uniform `[0, 1)` entries drawn from `rng`.
pub fn init_random_with<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> FactorMatrix {
    let data = (0..n * r).map(|_| rng.gen::<f64>()).collect();
    FactorMatrix::from_vec(n, r, data).expect("uniform samples are finite and nonnegative")
}

pub fn init_random(n: usize, r: usize, seed: u64) -> FactorMatrix {
    init_random_with(n, r, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Builds an initial factor of the requested kind.
pub fn initialize<R: Rng + ?Sized>(
    kind: InitKind,
    a: &SparseSymMatrix,
    r: usize,
    loss: Loss,
    rng: &mut R,
) -> Result<FactorMatrix> {
    match kind {
        InitKind::Zero => Ok(init_zero(a.n(), r)),
        InitKind::Random => Ok(init_random_with(a.n(), r, rng)),
        InitKind::Greedy => init_greedy(a, r, loss),
    }
}

/// Greedy column-by-column construction.
///
/// For column `j`, a weighting vector `w` starts at all ones and every item
/// is picked exactly once, in order of decreasing score
/// `s = A w - H[:, ..j] (H[:, ..j]^T w)`. The first pick gets value 1 and
/// resets `w` to its column of `A`; each later pick `k` is set to the
/// optimal value given the entries already placed in the column (closed form
/// for l2, weighted median for l1) and adds `A[:, k]` to `w`. Scores are
/// only recomputed during the first `2r - 1` picks; the remaining items are
/// then taken in order of their last score. Score ties go to the lowest
/// index.
///
/// No residual matrix is formed: memory is `O(K + n r)`.
pub fn init_greedy(a: &SparseSymMatrix, r: usize, loss: Loss) -> Result<FactorMatrix> {
    let n = a.n();
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    if r > n {
        return Err(Error::InvalidArgument(format!(
            "rank {r} exceeds matrix dimension {n}"
        )));
    }
    let mut h = FactorMatrix::zeros(n, r);
    let mut w = vec![0.0; n];
    let mut score = vec![0.0; n];
    let mut aw = vec![0.0; n];
    let mut a_col = vec![0.0; n];
    let mut selected = vec![false; n];
    let mut support: Vec<usize> = Vec::with_capacity(n);
    let mut queue: Vec<usize> = Vec::with_capacity(n);
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(n);

    for j in 0..r {
        w.fill(1.0);
        selected.fill(false);
        support.clear();
        let mut col_sq = 0.0;
        // H[J, j]^T H[J, ..j], maintained as entries are placed.
        let mut overlap = vec![0.0; j];

        for pick in 1..=n {
            let k = if pick < 2 * r {
                a.mul_vec_into(&w, &mut aw);
                let proj: Vec<f64> = (0..j)
                    .map(|t| (0..n).map(|k| h.get(k, t) * w[k]).sum())
                    .collect();
                for k in 0..n {
                    score[k] = if selected[k] {
                        f64::NEG_INFINITY
                    } else {
                        aw[k] - dot(&h.row(k)[..j], &proj)
                    };
                }
                argmax(&score)
            } else {
                if pick == 2 * r {
                    // Scores are frozen from here on: one sort replaces the
                    // remaining argmax scans.
                    queue.clear();
                    queue.extend((0..n).filter(|&k| !selected[k]));
                    queue.sort_by(|&x, &y| score[y].total_cmp(&score[x]).then(x.cmp(&y)));
                    queue.reverse();
                }
                queue.pop().expect("one unpicked item per remaining pick")
            };

            let value = if pick == 1 {
                w.fill(0.0);
                1.0
            } else {
                let (cols, vals) = a.row(k);
                match loss {
                    Loss::L2 => {
                        let mut b = 0.0;
                        for (&i, &v) in cols.iter().zip(vals) {
                            if selected[i] {
                                b += v * h.get(i, j);
                            }
                        }
                        b -= dot(&overlap, &h.row(k)[..j]);
                        if b > 0.0 {
                            b / col_sq
                        } else {
                            0.0
                        }
                    }
                    Loss::L1 => {
                        for (&i, &v) in cols.iter().zip(vals) {
                            a_col[i] = v;
                        }
                        points.clear();
                        let mut total = 0.0;
                        let hk = &h.row(k)[..j];
                        for &i in &support {
                            let weight = h.get(i, j);
                            let target = a_col[i] - dot(&h.row(i)[..j], hk);
                            points.push((target / weight, weight));
                            total += weight;
                        }
                        for &i in cols {
                            a_col[i] = 0.0;
                        }
                        wmedian::scan(&mut points, total)
                    }
                }
            };
            let (cols, vals) = a.row(k);
            for (&i, &v) in cols.iter().zip(vals) {
                w[i] += v;
            }

            h.set(k, j, value);
            selected[k] = true;
            col_sq += value * value;
            if value != 0.0 {
                support.push(k);
                for (o, &x) in overlap.iter_mut().zip(&h.row(k)[..j]) {
                    *o += value * x;
                }
            }
        }
    }
    Ok(h)
}

/// Index of the largest value; ties go to the lowest index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}
