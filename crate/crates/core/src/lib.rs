//! Off-diagonal symmetric nonnegative matrix factorization.
//!
//! Given a symmetric nonnegative `A`, find `H >= 0` with `r` columns that
//! minimizes `||A - H H^T||_{OD,p}`, the entrywise `p`-norm restricted to
//! off-diagonal entries, for `p = 1` or `p = 2`. Ignoring the diagonal makes
//! every one-variable subproblem easy: a nonnegative quadratic for `p = 2`
//! and a constrained weighted median for `p = 1`, which is what the
//! coordinate-descent solvers in [`solver`] exploit.
//!
//! ```
//! use odsymnmf::{bench, init, solver, Loss};
//!
//! let (a, truth) = bench::make_cliques(&"3x4".parse().unwrap());
//! let h0 = init::init_greedy(&a, 3, Loss::L1).unwrap();
//! let (h, report) = solver::fit(&a, &h0, &solver::SolverConfig::new(Loss::L1, 3)).unwrap();
//! assert_eq!(report.final_objective, 0.0);
//! assert_eq!(bench::accuracy(&h, &truth).unwrap(), 1.0);
//! ```

pub mod bench;
pub mod error;
pub mod init;
pub mod matcore;
pub mod solver;
pub mod theory;
pub mod wmedian;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use matcore::{od_norm, DenseSymMatrix, FactorMatrix, Loss, SparseSymMatrix};
