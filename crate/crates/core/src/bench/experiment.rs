use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{accuracy, add_flip_noise, make_adversarial, make_cliques, CliqueSpec};
use crate::error::Result;
use crate::init::{initialize, InitKind};
use crate::matcore::{FactorMatrix, Loss, SparseSymMatrix};
use crate::solver::{fit, SolverConfig, SolverPath};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Benchmark {
    /// Clique blocks with random flips of probability `delta`.
    Cliques { spec: CliqueSpec, delta: f64 },
    /// Two cliques plus singletons, each linked to `level` members per clique.
    Adversarial {
        clique_size: usize,
        isolated: usize,
        level: usize,
    },
}

impl Benchmark {
    /// Draws one instance and its ground truth.
    pub fn generate(&self, rng: &mut ChaCha8Rng) -> Result<(SparseSymMatrix, FactorMatrix)> {
        match self {
            Benchmark::Cliques { spec, delta } => {
                let (clean, truth) = make_cliques(spec);
                Ok((add_flip_noise(&clean, *delta, rng)?, truth))
            }
            Benchmark::Adversarial {
                clique_size,
                isolated,
                level,
            } => make_adversarial(*clique_size, *isolated, *level, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub benchmark: Benchmark,
    pub loss: Loss,
    pub init: InitKind,
    pub trials: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    pub tol: f64,
    pub path: SolverPath,
}

impl ExperimentConfig {
    pub fn new(benchmark: Benchmark, loss: Loss, init: InitKind) -> Self {
        let defaults = SolverConfig::default();
        Self {
            benchmark,
            loss,
            init,
            trials: 10,
            seed: 0,
            max_sweeps: defaults.max_sweeps,
            tol: defaults.tol,
            path: defaults.path,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub accuracies: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std: f64,
}

/// Random stream of trial `trial`: the base seed selects the key and the
/// trial index selects the ChaCha stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Generates, fits and scores one trial.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<f64> {
    let mut rng = trial_rng(cfg.seed, trial);
    let (a, truth) = cfg.benchmark.generate(&mut rng)?;
    let r = truth.ncols();
    let h0 = initialize(cfg.init, &a, r, cfg.loss, &mut rng)?;
    let solver = SolverConfig {
        loss: cfg.loss,
        rank: r,
        max_sweeps: cfg.max_sweeps,
        tol: cfg.tol,
        path: cfg.path,
        seed: cfg.seed,
        ..SolverConfig::default()
    };
    let (h, _) = fit(&a, &h0, &solver)?;
    accuracy(&h, &truth)
}

/// Runs `cfg.trials` independent trials in parallel.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let accuracies = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<f64>>>()?;
    let (mean, std) = mean_std(&accuracies);
    Ok(ExperimentResult {
        config: cfg.clone(),
        accuracies,
        mean,
        std,
    })
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// One row of an accuracy sweep: the swept parameter and the summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub mean: f64,
    pub std: f64,
    pub accuracies: Vec<f64>,
}

/// Accuracy as a function of the flip probability on a clique benchmark.
pub fn noise_sweep(base: &ExperimentConfig, spec: &CliqueSpec, deltas: &[f64]) -> Result<Vec<SweepRow>> {
    deltas
        .iter()
        .map(|&delta| {
            let cfg = ExperimentConfig {
                benchmark: Benchmark::Cliques {
                    spec: spec.clone(),
                    delta,
                },
                ..base.clone()
            };
            let res = run_experiment(&cfg)?;
            Ok(SweepRow {
                param: delta,
                mean: res.mean,
                std: res.std,
                accuracies: res.accuracies,
            })
        })
        .collect()
}

/// Accuracy as a function of the adversarial link count.
pub fn adversarial_sweep(
    base: &ExperimentConfig,
    clique_size: usize,
    isolated: usize,
    levels: &[usize],
) -> Result<Vec<SweepRow>> {
    levels
        .iter()
        .map(|&level| {
            let cfg = ExperimentConfig {
                benchmark: Benchmark::Adversarial {
                    clique_size,
                    isolated,
                    level,
                },
                ..base.clone()
            };
            let res = run_experiment(&cfg)?;
            Ok(SweepRow {
                param: level as f64,
                mean: res.mean,
                std: res.std,
                accuracies: res.accuracies,
            })
        })
        .collect()
}

/// Parses `start:step:stop` (inclusive, tolerant to rounding) or a
/// comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    use crate::error::Error;
    let bad = || Error::InvalidArgument(format!("bad parameter grid {s:?}"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop): (f64, f64, f64) = (
                start.parse().map_err(|_| bad())?,
                step.parse().map_err(|_| bad())?,
                stop.parse().map_err(|_| bad())?,
            );
            if !(start.is_finite() && step.is_finite() && stop.is_finite()) || step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor();
            if count > 1e6 {
                return Err(bad());
            }
            Ok((0..=count as usize)
                .map(|i| {
                    let v = start + i as f64 * step;
                    // Snap to the step's decimal grid, e.g. 0.15 not 0.15000000000000002.
                    (v * 1e12).round() / 1e12
                })
                .collect())
        }
        [list] => list
            .split(',')
            .map(|t| {
                let v: f64 = t.trim().parse().map_err(|_| bad())?;
                if v.is_finite() { Ok(v) } else { Err(bad()) }
            })
            .collect(),
        _ => Err(bad()),
    }
}

/// CSV with one row per sweep point: `param,mean,std,trials`.
pub fn sweep_csv(rows: &[SweepRow], param_name: &str) -> String {
    let mut out = format!("{param_name},mean,std,trials\n");
    for row in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{}\n",
            row.param,
            row.mean,
            row.std,
            row.accuracies.len()
        ));
    }
    out
}

/// CSV with one row per trial: `trial,accuracy`.
pub fn trials_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("trial,accuracy\n");
    for (t, acc) in result.accuracies.iter().enumerate() {
        out.push_str(&format!("{t},{acc:.6}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:0.05:0.2").unwrap(), vec![0.0, 0.05, 0.1, 0.15, 0.2]);
        assert_eq!(parse_grid("0.1, 0.3").unwrap(), vec![0.1, 0.3]);
        assert_eq!(parse_grid("1:1:4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_grid("0:0.05:0.5").unwrap().len(), 11);
        for bad in ["", "a", "0:0:1", "1:1:0", "0:1", "0:1e-12:1", "nan", "0:1:inf"] {
            assert!(parse_grid(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn stats() {
        assert_eq!(mean_std(&[1.0]), (1.0, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn trial_streams_are_independent_and_reproducible() {
        use rand::Rng;
        let a: u64 = trial_rng(5, 0).gen();
        let b: u64 = trial_rng(5, 1).gen();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(5, 0).gen::<u64>());
    }

    #[test]
    fn noiseless_cliques_are_recovered() {
        for loss in [Loss::L1, Loss::L2] {
            let cfg = ExperimentConfig {
                trials: 2,
                ..ExperimentConfig::new(
                    Benchmark::Cliques {
                        spec: "4x5".parse().unwrap(),
                        delta: 0.0,
                    },
                    loss,
                    InitKind::Greedy,
                )
            };
            let res = run_experiment(&cfg).unwrap();
            assert_eq!(res.mean, 1.0, "{loss:?}");
        }
    }
}
