//! Synthetic clustering benchmarks and the permutation-matched accuracy.

mod accuracy;
mod assignment;
mod experiment;
mod generate;

pub use accuracy::{accuracy, harden, hardened_accuracy, permuted_accuracy};
pub use assignment::min_cost_assignment;
pub use experiment::{
    adversarial_sweep, noise_sweep, parse_grid, run_experiment, run_trial, sweep_csv, trial_rng,
    trials_csv, Benchmark, ExperimentConfig, ExperimentResult, SweepRow,
};
pub use generate::{add_flip_noise, make_adversarial, make_cliques, CliqueSpec, MAX_ITEMS};
