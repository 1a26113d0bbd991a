use odsymnmf::bench::{accuracy, make_cliques, min_cost_assignment, CliqueSpec};
use odsymnmf::matcore::io;
use odsymnmf::solver::{fit, SolverConfig, SolverPath};
use odsymnmf::theory::exact_factorization;
use odsymnmf::{od_norm, wmedian, FactorMatrix, Loss, SparseSymMatrix};
use proptest::prelude::*;

fn sym_matrix(max_n: usize) -> impl Strategy<Value = SparseSymMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::option::weighted(0.4, 0.0f64..3.0), n * n).prop_map(move |cells| {
            let entries = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .filter_map(|(i, j)| cells[i * n + j].map(|v| (i, j, v)))
                .filter(|&(_, _, v)| v > 0.0);
            SparseSymMatrix::from_entries(n, entries).unwrap()
        })
    })
}

fn with_factor(max_n: usize, max_r: usize) -> impl Strategy<Value = (SparseSymMatrix, FactorMatrix)> {
    (sym_matrix(max_n), 1..=max_r).prop_flat_map(|(a, r)| {
        let n = a.n();
        prop::collection::vec(0.0f64..2.0, n * r)
            .prop_map(move |data| (a.clone(), FactorMatrix::from_vec(n, r, data).unwrap()))
    })
}

fn dense_od_frobenius(a: &SparseSymMatrix, h: &FactorMatrix) -> f64 {
    let n = a.n();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = a.get(i, j) - h.inner(i, j);
                sum += d * d;
            }
        }
    }
    sum.sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn l2_norm_is_frobenius_without_diagonal((a, h) in with_factor(12, 4)) {
        let ours = od_norm(&a, &h, Loss::L2).unwrap();
        let want = dense_od_frobenius(&a, &h);
        prop_assert!((ours - want).abs() <= 1e-10 * want.max(1.0));
    }

    #[test]
    fn norms_are_permutation_equivariant((a, h) in with_factor(10, 3), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = a.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let permuted = SparseSymMatrix::from_entries(
            n,
            a.upper_entries().map(|(i, j, v)| {
                let (pi, pj) = (perm.iter().position(|&p| p == i).unwrap(), perm.iter().position(|&p| p == j).unwrap());
                (pi.min(pj), pi.max(pj), v)
            }),
        )
        .unwrap();
        let hp = h.permute_rows(&perm);
        for loss in [Loss::L1, Loss::L2] {
            let x = od_norm(&a, &h, loss).unwrap();
            let y = od_norm(&permuted, &hp, loss).unwrap();
            prop_assert!((x - y).abs() <= 1e-10 * x.max(1.0));
        }
    }

    #[test]
    fn matrix_market_round_trip(a in sym_matrix(15)) {
        let mut buf = Vec::new();
        io::write_matrix(&a, &mut buf).unwrap();
        let back = io::read_matrix(buf.as_slice()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn factor_csv_round_trip((_, h) in with_factor(8, 5)) {
        let mut buf = Vec::new();
        io::write_factor(&h, &mut buf).unwrap();
        prop_assert_eq!(io::read_factor(buf.as_slice()).unwrap(), h);
    }

    #[test]
    fn exact_factorization_has_zero_norm(a in sym_matrix(12)) {
        let h = exact_factorization(&a);
        for loss in [Loss::L1, Loss::L2] {
            prop_assert!(od_norm(&a, &h, loss).unwrap() < 1e-12);
        }
    }

    #[test]
    fn weighted_median_beats_every_breakpoint(
        pairs in prop::collection::vec((0.0f64..2.0, -4.0f64..4.0), 1..60)
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let x = wmedian::constrained_weighted_median(&a, &b).unwrap();
        prop_assert!(x >= 0.0);
        let fx = wmedian::objective(&a, &b, x);
        for (ai, bi) in a.iter().zip(&b).filter(|(&ai, _)| ai > 0.0) {
            prop_assert!(fx <= wmedian::objective(&a, &b, (bi / ai).max(0.0)) + 1e-12);
        }
        prop_assert!(fx <= wmedian::objective(&a, &b, 0.0) + 1e-12);
    }

    #[test]
    fn accuracy_ignores_column_order(sizes in prop::collection::vec(1usize..6, 1..5), rot in 0usize..5) {
        let spec = CliqueSpec::new(sizes).unwrap();
        let (_, truth) = make_cliques(&spec);
        let r = truth.ncols();
        let perm: Vec<usize> = (0..r).map(|l| (l + rot) % r).collect();
        prop_assert_eq!(accuracy(&truth.permute_columns(&perm), &truth).unwrap(), 1.0);
    }

    #[test]
    fn assignment_matches_brute_force(cost in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 4), 4)) {
        let (assign, total) = min_cost_assignment(&cost);
        let mut best = f64::INFINITY;
        let mut perm = [0usize, 1, 2, 3];
        permutations(&mut perm, 0, &mut |p| {
            best = best.min(p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum());
        });
        prop_assert!((total - best).abs() < 1e-9);
        let direct: f64 = assign.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        prop_assert!((direct - total).abs() < 1e-9);
    }

    #[test]
    fn fits_never_increase_the_objective((a, h0) in with_factor(15, 3)) {
        for loss in [Loss::L1, Loss::L2] {
            for path in [SolverPath::ResidualFree, SolverPath::Residual] {
                let cfg = SolverConfig::new(loss, h0.ncols()).with_path(path).with_sweeps(30, 0.0);
                let (h, report) = fit(&a, &h0, &cfg).unwrap();
                prop_assert!(report.max_increase() <= 1e-10);
                prop_assert!(h.as_slice().iter().all(|&v| v >= 0.0 && v.is_finite()));
            }
        }
    }
}

fn permutations(p: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}
