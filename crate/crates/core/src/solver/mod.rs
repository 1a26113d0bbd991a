//! Cyclic coordinate descent for `min_{H >= 0} ||A - H H^T||_{OD,p}`.
//!
//! Columns are visited in order `l = 0..r`, and within a column rows in
//! order `k = 0..n`; each scalar `H[k, l]` is replaced by the exact minimizer
//! of its one-dimensional subproblem. Two code paths produce the same
//! iterates:
//!
//! * [`SolverPath::ResidualFree`] never forms an `n x n` array. The l2 solver
//!   keeps column norms, row norms and the Gram matrix `H^T H` up to date
//!   ([`L2Sweeper`]); the l1 solver rebuilds the needed residual column on
//!   the fly ([`L1Sweeper`]).
//! * [`SolverPath::Residual`] keeps the dense residual `R = A - H H^T` and
//!   runs a rank-one solver on `P = R + h h^T` per column
//!   ([`ResidualSweeper`]). It costs `O(n^2)` memory and serves as the
//!   reference for small problems.
//!
//! When every other entry of the current column is zero the subproblem in
//! `H[k, l]` is constant and the entry is left unchanged.
//!
//! Subproblem data that cancels to within [`CANCELLATION`] of the problem
//! scale (the largest entry of `A` or of `H H^T` seen so far) is taken as
//! exactly zero. Both paths apply the same rule, so rounding residue never
//! seeds entries that the two paths would then amplify differently.

mod l1;
mod l2;
mod residual;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use l1::L1Sweeper;
pub use l2::{L2Caches, L2Sweeper};
pub use residual::{l1_rank_one, l2_coordinate_update, ResidualSweeper};

use crate::error::{Error, Result};
use crate::matcore::{od_loss_sum, FactorMatrix, Loss, SparseSymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverPath {
    Residual,
    ResidualFree,
}

impl std::str::FromStr for SolverPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "residual" => Ok(SolverPath::Residual),
            "free" | "residual-free" => Ok(SolverPath::ResidualFree),
            other => Err(Error::InvalidArgument(format!("unknown solver path {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub loss: Loss,
    pub rank: usize,
    pub max_sweeps: usize,
    /// Stop once a sweep lowers the objective by less than `tol` times the
    /// initial objective.
    pub tol: f64,
    pub path: SolverPath,
    pub seed: u64,
    /// Largest `n` the dense residual path accepts.
    pub dense_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            loss: Loss::L2,
            rank: 1,
            max_sweeps: 500,
            tol: 1e-6,
            path: SolverPath::ResidualFree,
            seed: 0,
            dense_cap: 5000,
        }
    }
}

impl SolverConfig {
    pub fn new(loss: Loss, rank: usize) -> Self {
        Self {
            loss,
            rank,
            ..Self::default()
        }
    }

    pub fn with_path(mut self, path: SolverPath) -> Self {
        self.path = path;
        self
    }

    pub fn with_sweeps(mut self, max_sweeps: usize, tol: f64) -> Self {
        self.max_sweeps = max_sweeps;
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be >= 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Outcome of one fit. The objective is the minimized loss
/// `sum_{i != j} |A_ij - (H H^T)_ij|^p`, i.e. `||A - H H^T||_{OD,p}^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub final_objective: f64,
    pub sweeps: usize,
    #[serde(rename = "elapsed_seconds")]
    pub elapsed: f64,
    pub initial_objective: f64,
    /// Objective after each sweep.
    pub objective_trace: Vec<f64>,
}

impl FitReport {
    /// Largest increase between consecutive objective values, counting the
    /// initial objective as the first value.
    pub fn max_increase(&self) -> f64 {
        std::iter::once(self.initial_objective)
            .chain(self.objective_trace.iter().copied())
            .collect::<Vec<_>>()
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One full cyclic pass over all entries of `H`.
pub trait Sweeper {
    fn sweep(&mut self);
    fn factor(&self) -> &FactorMatrix;
    fn into_factor(self) -> FactorMatrix
    where
        Self: Sized;
}

/// Runs sweeps until the relative decrease drops below `cfg.tol` or
/// `cfg.max_sweeps` is reached.
pub fn drive<S: Sweeper>(
    a: &SparseSymMatrix,
    mut sweeper: S,
    cfg: &SolverConfig,
) -> Result<(FactorMatrix, FitReport)> {
    let start = Instant::now();
    let initial = od_loss_sum(a, sweeper.factor(), cfg.loss)?;
    let scale = initial.max(f64::MIN_POSITIVE);
    let mut trace = Vec::new();
    let mut prev = initial;
    for _ in 0..cfg.max_sweeps {
        sweeper.sweep();
        let obj = od_loss_sum(a, sweeper.factor(), cfg.loss)?;
        trace.push(obj);
        let decrease = (prev - obj) / scale;
        prev = obj;
        if decrease < cfg.tol {
            break;
        }
    }
    let report = FitReport {
        final_objective: prev,
        sweeps: trace.len(),
        elapsed: start.elapsed().as_secs_f64(),
        initial_objective: initial,
        objective_trace: trace,
    };
    Ok((sweeper.into_factor(), report))
}

pub(crate) fn check_inputs(a: &SparseSymMatrix, h0: &FactorMatrix, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    if h0.nrows() != a.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {0}x{0} but the initial factor has {1} rows",
            a.n(),
            h0.nrows()
        )));
    }
    if h0.ncols() != cfg.rank {
        return Err(Error::DimensionMismatch(format!(
            "rank is {} but the initial factor has {} columns",
            cfg.rank,
            h0.ncols()
        )));
    }
    h0.validate()
}

/// Residual-free l2 coordinate descent.
pub fn fit_l2(a: &SparseSymMatrix, h0: &FactorMatrix, cfg: &SolverConfig) -> Result<(FactorMatrix, FitReport)> {
    let cfg = SolverConfig {
        loss: Loss::L2,
        ..cfg.clone()
    };
    check_inputs(a, h0, &cfg)?;
    drive(a, L2Sweeper::new(a, h0.clone())?, &cfg)
}

/// Residual-free l1 coordinate descent.
pub fn fit_l1(a: &SparseSymMatrix, h0: &FactorMatrix, cfg: &SolverConfig) -> Result<(FactorMatrix, FitReport)> {
    let cfg = SolverConfig {
        loss: Loss::L1,
        ..cfg.clone()
    };
    check_inputs(a, h0, &cfg)?;
    drive(a, L1Sweeper::new(a, h0.clone())?, &cfg)
}

/// Dense-residual coordinate descent for either loss.
pub fn fit_residual(
    a: &SparseSymMatrix,
    h0: &FactorMatrix,
    cfg: &SolverConfig,
) -> Result<(FactorMatrix, FitReport)> {
    check_inputs(a, h0, cfg)?;
    if a.n() > cfg.dense_cap {
        return Err(Error::TooLarge(format!(
            "dense residual path needs an {0}x{0} array; cap is {1}",
            a.n(),
            cfg.dense_cap
        )));
    }
    drive(a, ResidualSweeper::new(a, h0.clone(), cfg.loss)?, cfg)
}

/// Dense-residual l2 solver.
pub fn fit_l2_residual(
    a: &SparseSymMatrix,
    h0: &FactorMatrix,
    cfg: &SolverConfig,
) -> Result<(FactorMatrix, FitReport)> {
    fit_residual(a, h0, &SolverConfig { loss: Loss::L2, ..cfg.clone() })
}

/// Dense-residual l1 solver.
pub fn fit_l1_residual(
    a: &SparseSymMatrix,
    h0: &FactorMatrix,
    cfg: &SolverConfig,
) -> Result<(FactorMatrix, FitReport)> {
    fit_residual(a, h0, &SolverConfig { loss: Loss::L1, ..cfg.clone() })
}

/// Dispatches on `cfg.loss` and `cfg.path`.
pub fn fit(a: &SparseSymMatrix, h0: &FactorMatrix, cfg: &SolverConfig) -> Result<(FactorMatrix, FitReport)> {
    match (cfg.path, cfg.loss) {
        (SolverPath::ResidualFree, Loss::L2) => fit_l2(a, h0, cfg),
        (SolverPath::ResidualFree, Loss::L1) => fit_l1(a, h0, cfg),
        (SolverPath::Residual, _) => fit_residual(a, h0, cfg),
    }
}

/// Relative size below which a computed difference counts as zero.
pub const CANCELLATION: f64 = 1e-11;

/// `x`, or zero when `|x|` is within rounding of the magnitude `scale`.
#[inline]
pub(crate) fn snap(x: f64, scale: f64) -> f64 {
    if x.abs() <= CANCELLATION * scale {
        0.0
    } else {
        x
    }
}

/// Upper bound on `|A_ij|` and `|(H H^T)_ij|`: the largest entry of `A` or
/// squared row norm of `H`.
pub(crate) fn problem_scale(a_max: f64, h: &FactorMatrix) -> f64 {
    h.row_sq_norms().into_iter().fold(a_max, f64::max)
}

pub(crate) fn max_entry(a: &SparseSymMatrix) -> f64 {
    (0..a.n()).flat_map(|i| a.row(i).1.iter().copied()).fold(0.0, f64::max)
}

/// `a <= 0` up to the rounding left by incrementally updated norms.
#[inline]
pub(crate) fn is_degenerate(a: f64, norm_sq: f64) -> bool {
    a <= 64.0 * f64::EPSILON * norm_sq
}
