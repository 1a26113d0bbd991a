use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use odsymnmf::bench::{self, Benchmark, CliqueSpec, ExperimentConfig, SweepRow};
use odsymnmf::init::{initialize, InitKind};
use odsymnmf::matcore::{cosine_similarity, io};
use odsymnmf::solver::{self, SolverConfig, SolverPath};
use odsymnmf::Loss;

#[derive(Parser)]
#[command(name = "odsymnmf", version, about = "Off-diagonal symmetric NMF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a symmetric matrix and write H as CSV.
    Fit(FitArgs),
    /// Generate a synthetic benchmark matrix and its ground truth.
    #[command(subcommand)]
    Synth(Synth),
    /// Print the clustering accuracy of a factor against a ground truth.
    Eval {
        #[arg(long = "h")]
        h: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Cosine similarity between the rows of a count matrix.
    Similarity {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Accuracy sweeps over the benchmark generators.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    rank: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
    /// JSON fit report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value = "l2")]
    loss: Loss,
    #[arg(long, default_value = "greedy")]
    init: InitKind,
    #[arg(long, default_value = "free")]
    path: SolverPath,
    #[arg(long, default_value_t = 500)]
    max_sweeps: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Subcommand)]
enum Synth {
    /// Diagonal all-ones blocks with random flips.
    Cliques {
        /// Comma-separated sizes; `CxS` means C cliques of size S.
        #[arg(long)]
        sizes: CliqueSpec,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: SynthOutput,
    },
    /// Two cliques plus singletons linked to `level` members of each.
    Adversarial {
        #[arg(long)]
        clique_size: usize,
        #[arg(long)]
        isolated: usize,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: SynthOutput,
    },
}

#[derive(Args)]
struct SynthOutput {
    #[arg(long)]
    out_a: PathBuf,
    #[arg(long)]
    out_truth: PathBuf,
}

#[derive(Subcommand)]
enum Experiment {
    /// Accuracy against the flip probability on a clique benchmark.
    NoiseSweep {
        #[arg(long)]
        sizes: CliqueSpec,
        /// `start:step:stop` or a comma-separated list.
        #[arg(long)]
        deltas: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Accuracy against the number of adversarial links.
    AdversarialSweep {
        #[arg(long, default_value_t = 10)]
        clique_size: usize,
        #[arg(long, default_value_t = 10)]
        isolated: usize,
        /// `start:step:stop` or a comma-separated list of integers.
        #[arg(long)]
        levels: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-trial results as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Solver(m) => m,
        }
    }
}

trait Stage<T> {
    fn usage(self) -> Result<T, Failure>;
    fn io(self, path: &Path) -> Result<T, Failure>;
    fn solver(self) -> Result<T, Failure>;
}

impl<T> Stage<T> for odsymnmf::Result<T> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.to_string()))
    }

    fn io(self, path: &Path) -> Result<T, Failure> {
        self.map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }

    fn solver(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Solver(e.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Fit(args) => fit(args),
        Command::Synth(synth) => {
            let (a, truth, out) = match synth {
                Synth::Cliques { sizes, noise, seed, out } => {
                    let (a, truth) = Benchmark::Cliques { spec: sizes, delta: noise }
                        .generate(&mut bench::trial_rng(seed, 0))
                        .usage()?;
                    (a, truth, out)
                }
                Synth::Adversarial {
                    clique_size,
                    isolated,
                    level,
                    seed,
                    out,
                } => {
                    let (a, truth) = Benchmark::Adversarial {
                        clique_size,
                        isolated,
                        level,
                    }
                    .generate(&mut bench::trial_rng(seed, 0))
                    .usage()?;
                    (a, truth, out)
                }
            };
            io::save_matrix(&a, &out.out_a).io(&out.out_a)?;
            io::save_factor(&truth, &out.out_truth).io(&out.out_truth)
        }
        Command::Eval { h, truth } => {
            let factor = io::load_factor(&h).io(&h)?;
            let truth_h = io::load_factor(&truth).io(&truth)?;
            let acc = bench::accuracy(&factor, &truth_h).usage()?;
            println!("{acc:.4}");
            Ok(())
        }
        Command::Similarity { counts, output } => {
            let x = io::load_counts(&counts).io(&counts)?;
            let a = cosine_similarity(&x).usage()?;
            io::save_matrix(&a, &output).io(&output)
        }
        Command::Experiment(Experiment::NoiseSweep { sizes, deltas, run }) => {
            let deltas = bench::parse_grid(&deltas).usage()?;
            let base = experiment_config(&run, Benchmark::Cliques {
                spec: sizes.clone(),
                delta: 0.0,
            });
            let rows = bench::noise_sweep(&base, &sizes, &deltas).usage()?;
            write_sweep(&run, &rows, "delta")
        }
        Command::Experiment(Experiment::AdversarialSweep {
            clique_size,
            isolated,
            levels,
            run,
        }) => {
            let levels = parse_levels(&levels)?;
            let base = experiment_config(&run, Benchmark::Adversarial {
                clique_size,
                isolated,
                level: 0,
            });
            let rows = bench::adversarial_sweep(&base, clique_size, isolated, &levels).usage()?;
            write_sweep(&run, &rows, "level")
        }
    }
}

fn fit(args: FitArgs) -> Result<(), Failure> {
    let a = io::load_matrix(&args.input).io(&args.input)?;
    let s = &args.solver;
    let cfg = SolverConfig {
        seed: args.seed,
        ..SolverConfig::new(s.loss, args.rank)
            .with_path(s.path)
            .with_sweeps(s.max_sweeps, s.tol)
    };
    cfg.validate().usage()?;
    let h0 = initialize(s.init, &a, args.rank, s.loss, &mut bench::trial_rng(args.seed, 0)).solver()?;
    let (h, report) = solver::fit(&a, &h0, &cfg).solver()?;
    io::save_factor(&h, &args.output).io(&args.output)?;
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(path, json + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn experiment_config(run: &RunArgs, benchmark: Benchmark) -> ExperimentConfig {
    ExperimentConfig {
        trials: run.trials,
        seed: run.seed,
        max_sweeps: run.solver.max_sweeps,
        tol: run.solver.tol,
        path: run.solver.path,
        ..ExperimentConfig::new(benchmark, run.solver.loss, run.solver.init)
    }
}

fn parse_levels(s: &str) -> Result<Vec<usize>, Failure> {
    bench::parse_grid(s)
        .usage()?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Failure::Usage(format!("level {v} is not a nonnegative integer")))
            }
        })
        .collect()
}

fn write_sweep(run: &RunArgs, rows: &[SweepRow], param: &str) -> Result<(), Failure> {
    let csv = bench::sweep_csv(rows, param);
    let write = |path: &Path, text: String| {
        fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    };
    match &run.output {
        Some(path) => write(path, csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &run.json {
        write(path, serde_json::to_string_pretty(rows).expect("rows serialize") + "\n")?;
    }
    Ok(())
}
