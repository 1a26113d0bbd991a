use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{FactorMatrix, SparseSymMatrix};

/// Upper bound on the number of items a parsed clique spec may describe.
pub const MAX_ITEMS: usize = 1 << 20;

/// Sizes of the diagonal all-ones blocks of a clique benchmark.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSpec {
    sizes: Vec<usize>,
}

impl CliqueSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidArgument("clique spec needs at least one clique".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidArgument("clique sizes must be at least 1".into()));
        }
        let n = sizes.iter().try_fold(0usize, |acc, &s| acc.checked_add(s));
        if n.is_none_or(|n| n > MAX_ITEMS) {
            return Err(Error::InvalidArgument(format!("more than {MAX_ITEMS} items")));
        }
        Ok(Self { sizes })
    }

    /// `count` cliques of `size` items each.
    pub fn balanced(count: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; count])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.sizes.len()
    }
}

/// Comma-separated sizes; `CxS` stands for `C` cliques of size `S`.
/// `"10,10,5"` and `"2x10,5"` describe the same benchmark.
impl FromStr for CliqueSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |t: &str| Error::InvalidArgument(format!("bad clique size {t:?}"));
        let mut sizes = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (count, size) = match part.split_once(['x', 'X']) {
                Some((c, z)) => (
                    c.trim().parse::<usize>().map_err(|_| bad(part))?,
                    z.trim().parse::<usize>().map_err(|_| bad(part))?,
                ),
                None => (1, part.parse::<usize>().map_err(|_| bad(part))?),
            };
            if count == 0 {
                return Err(bad(part));
            }
            if sizes.len().saturating_add(count) > MAX_ITEMS {
                return Err(Error::InvalidArgument(format!("more than {MAX_ITEMS} cliques")));
            }
            sizes.extend(std::iter::repeat_n(size, count));
        }
        Self::new(sizes)
    }
}

impl std::fmt::Display for CliqueSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Block-diagonal all-ones matrix (unit diagonal included) and the matching
/// cluster indicator.
pub fn make_cliques(spec: &CliqueSpec) -> (SparseSymMatrix, FactorMatrix) {
    let n = spec.n();
    let mut truth = FactorMatrix::zeros(n, spec.rank());
    let mut entries = Vec::new();
    let mut start = 0;
    for (c, &size) in spec.sizes().iter().enumerate() {
        for i in start..start + size {
            truth.set(i, c, 1.0);
            for j in i..start + size {
                entries.push((i, j, 1.0));
            }
        }
        start += size;
    }
    let a = SparseSymMatrix::from_entries(n, entries).expect("clique entries are valid");
    (a, truth)
}

/// Flips each upper-triangle entry (diagonal included) of a binary matrix
/// independently with probability `delta`, mirroring to keep symmetry.
pub fn add_flip_noise<R: Rng + ?Sized>(
    a: &SparseSymMatrix,
    delta: f64,
    rng: &mut R,
) -> Result<SparseSymMatrix> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("noise level {delta} outside [0, 1]")));
    }
    if !a.is_binary() {
        return Err(Error::InvalidArgument("flip noise needs a binary matrix".into()));
    }
    let n = a.n();
    let mut entries = Vec::with_capacity(a.nnz());
    for i in 0..n {
        let (cols, _) = a.row(i);
        let mut nz = cols.iter().copied().filter(|&j| j >= i).peekable();
        for j in i..n {
            let present = nz.next_if_eq(&j).is_some();
            let flip = rng.gen_bool(delta);
            if present != flip {
                entries.push((i, j, 1.0));
            }
        }
    }
    SparseSymMatrix::from_entries(n, entries)
}

/// Two cliques of `clique_size` items followed by `isolated` singletons
/// (identity block). Each singleton is linked to `level` distinct members
/// of each clique, drawn uniformly without replacement.
///
/// The ground truth has one column per clique; singleton rows are all zero.
pub fn make_adversarial<R: Rng + ?Sized>(
    clique_size: usize,
    isolated: usize,
    level: usize,
    rng: &mut R,
) -> Result<(SparseSymMatrix, FactorMatrix)> {
    if clique_size == 0 {
        return Err(Error::InvalidArgument("clique size must be at least 1".into()));
    }
    if level > clique_size {
        return Err(Error::InvalidArgument(format!(
            "level {level} exceeds clique size {clique_size}"
        )));
    }
    let n = 2 * clique_size + isolated;
    let (clean, clique_truth) = make_cliques(&CliqueSpec::new(vec![clique_size, clique_size])?);
    let mut truth = FactorMatrix::zeros(n, 2);
    for k in 0..2 * clique_size {
        truth.row_mut(k).copy_from_slice(clique_truth.row(k));
    }
    let mut entries: Vec<_> = clean.upper_entries().collect();
    for e in 0..isolated {
        let item = 2 * clique_size + e;
        entries.push((item, item, 1.0));
        for clique in 0..2 {
            for member in sample(rng, clique_size, level) {
                entries.push((clique * clique_size + member, item, 1.0));
            }
        }
    }
    let a = SparseSymMatrix::from_entries(n, entries)?;
    Ok((a, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{od_norm, Loss};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_specs() {
        assert_eq!("10,10,5".parse::<CliqueSpec>().unwrap().sizes(), &[10, 10, 5]);
        assert_eq!("2x10, 5".parse::<CliqueSpec>().unwrap().sizes(), &[10, 10, 5]);
        let ten = "10x10".parse::<CliqueSpec>().unwrap();
        assert_eq!((ten.n(), ten.rank()), (100, 10));
        for bad in ["", "0", "3,,4", "x4", "0x3", "3x0", "-1", "1x1x1", "99999999999x99999999"] {
            assert!(bad.parse::<CliqueSpec>().is_err(), "accepted {bad:?}");
        }
        assert_eq!(ten.to_string().parse::<CliqueSpec>().unwrap(), ten);
    }

    #[test]
    fn cliques_are_exact() {
        let (a, h) = make_cliques(&CliqueSpec::new(vec![2]).unwrap());
        assert_eq!(a.to_dense(), vec![1.0; 4]);
        assert_eq!(h.as_slice(), &[1.0, 1.0]);

        let spec = "3,1,4".parse().unwrap();
        let (a, h) = make_cliques(&spec);
        assert_eq!(od_norm(&a, &h, Loss::L1).unwrap(), 0.0);
        assert_eq!(od_norm(&a, &h, Loss::L2).unwrap(), 0.0);
        assert_eq!(a.nnz(), 9 + 1 + 16);
    }

    #[test]
    fn noise_extremes() {
        let (a, _) = make_cliques(&"3,2".parse().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(add_flip_noise(&a, 0.0, &mut rng).unwrap(), a);
        let flipped = add_flip_noise(&a, 1.0, &mut rng).unwrap();
        let (d, f) = (a.to_dense(), flipped.to_dense());
        assert!(d.iter().zip(&f).all(|(x, y)| x + y == 1.0));
        assert!(add_flip_noise(&a, 1.5, &mut rng).is_err());
    }

    #[test]
    fn adversarial_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (a, h) = make_adversarial(10, 10, 4, &mut rng).unwrap();
        assert_eq!((a.n(), h.ncols()), (30, 2));
        assert!(h.row(25).iter().all(|&v| v == 0.0));
        for e in 20..30 {
            let (cols, _) = a.row(e);
            assert_eq!(cols.iter().filter(|&&c| c < 10).count(), 4);
            assert_eq!(cols.iter().filter(|&&c| (10..20).contains(&c)).count(), 4);
            assert_eq!(a.diag(e), 1.0);
            assert_eq!(cols.iter().filter(|&&c| c >= 20).count(), 1);
        }
        let (full, _) = make_adversarial(10, 10, 10, &mut rng).unwrap();
        for e in 20..30 {
            assert_eq!(full.row(e).0.len(), 21);
        }
        let (clean, truth) = make_adversarial(10, 10, 0, &mut rng).unwrap();
        assert_eq!(od_norm(&clean, &truth, Loss::L1).unwrap(), 0.0);
        assert!(make_adversarial(10, 10, 11, &mut rng).is_err());
    }
}
