//! Command-line interface: `generate`, `solve`, `eval`, `bench`.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{run_benchmark, BenchConfig, Method};
use crate::coarsen::CoarseningParams;
use crate::error::Result;
use crate::icm::{sample_low_energy, IcmParams};
use crate::io;
use crate::pyramid::{solve_multiscale, PyramidParams};
use crate::synth::{generate_synthetic, SyntheticParams};

#[derive(Parser)]
#[command(name = "mse", version, about = "Multiscale solver for pairwise discrete energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveMethod {
    Multiscale,
    Icm,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic grid energy file.
    Generate {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        labels: usize,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output energy file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Minimize an energy file and write the labeling.
    Solve {
        /// Input energy file.
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: SolveMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coarse-selection agreement threshold.
        #[arg(long, default_value_t = 0.2)]
        beta: f64,
        /// Maximum nonzeros per interpolation row.
        #[arg(long, default_value_t = 3)]
        delta: usize,
        /// ICM restarts used for sampling and refinement.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Sweeps per sampling restart.
        #[arg(long = "sample-sweeps", default_value_t = 10)]
        sample_sweeps: usize,
        /// Sweep cap per refinement pass.
        #[arg(long = "max-sweeps", default_value_t = 10)]
        max_sweeps: usize,
        /// Stop coarsening at this many variables.
        #[arg(long = "coarsest-size", default_value_t = 10)]
        coarsest_size: usize,
        /// Multiplier on the agreement scale.
        #[arg(long = "sigma-scale", default_value_t = 1.0)]
        sigma_scale: f64,
        /// Output labeling file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Structured report file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the energy of a labeling.
    Eval {
        /// Input energy file.
        #[arg(short, long)]
        input: PathBuf,
        /// Labeling file.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Compare methods on seeded synthetic instances.
    Bench {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 50)]
        rows: usize,
        #[arg(long, default_value_t = 50)]
        cols: usize,
        #[arg(long, default_value_t = 5)]
        labels: usize,
        #[arg(long, default_value_t = 10.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record exact optima when the state space is small enough.
        #[arg(long)]
        oracle: bool,
        /// Structured report file.
        #[arg(long)]
        report: PathBuf,
    },
}

/// Parses and runs a command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return 0;
            }
            eprint!("{err}");
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            rows,
            cols,
            labels,
            lambda,
            seed,
            output,
        } => {
            let energy = generate_synthetic(&SyntheticParams {
                rows,
                cols,
                labels,
                lambda,
                seed,
            });
            io::write_energy_file(&energy, &output)?;
            println!(
                "wrote {} ({} variables, {} edges, {} labels)",
                output.display(),
                energy.num_vars(),
                energy.weights.len(),
                energy.num_labels()
            );
            Ok(())
        }
        Command::Solve {
            input,
            method,
            seed,
            beta,
            delta,
            samples,
            sample_sweeps,
            max_sweeps,
            coarsest_size,
            sigma_scale,
            output,
            report,
        } => {
            let energy = io::read_energy_file(&input)?;
            let icm_params = IcmParams {
                max_sweeps,
                restarts: samples,
                sweeps_per_sample: sample_sweeps,
                seed,
            };
            let meta = io::SolveMeta {
                method: match method {
                    SolveMethod::Multiscale => "multiscale".to_string(),
                    SolveMethod::Icm => "icm".to_string(),
                },
                seed,
                num_vars: energy.num_vars(),
                num_labels: energy.num_labels(),
            };
            match method {
                SolveMethod::Multiscale => {
                    let params = PyramidParams {
                        coarsest_size,
                        coarsen: CoarseningParams {
                            beta,
                            delta,
                            sigma_scale,
                            icm: icm_params,
                        },
                        refine: icm_params,
                        seed,
                        ..PyramidParams::default()
                    };
                    let solve = solve_multiscale(&energy, &params)?;
                    if let Some(path) = output {
                        io::write_labeling_file(&solve.final_labeling, path)?;
                    }
                    if let Some(path) = report {
                        let mut out = BufWriter::new(File::create(path)?);
                        io::write_solve_report(&meta, &solve, &mut out)?;
                    }
                    println!("{}", solve.final_energy);
                }
                SolveMethod::Icm => {
                    let set = sample_low_energy(
                        &energy,
                        &IcmParams {
                            sweeps_per_sample: max_sweeps,
                            ..icm_params
                        },
                    )?;
                    let (best, final_energy) = set.best().expect("at least one restart");
                    if let Some(path) = output {
                        io::write_labeling_file(best, path)?;
                    }
                    if let Some(path) = report {
                        let mut out = BufWriter::new(File::create(path)?);
                        io::write_icm_report(&meta, &set.energies, &set.sweeps, final_energy, &mut out)?;
                    }
                    println!("{final_energy}");
                }
            }
            Ok(())
        }
        Command::Eval { input, labels } => {
            let energy = io::read_energy_file(&input)?;
            let labeling =
                io::read_labeling_file(&labels, energy.num_vars(), energy.num_labels())?;
            println!("{}", energy.evaluate(&labeling)?);
            Ok(())
        }
        Command::Bench {
            instances,
            rows,
            cols,
            labels,
            lambda,
            seed,
            oracle,
            report,
        } => {
            let mut config = BenchConfig::new(
                instances,
                SyntheticParams {
                    rows,
                    cols,
                    labels,
                    lambda,
                    seed,
                },
            );
            config.oracle = oracle;
            let result = run_benchmark(&config)?;
            io::write_bench_report_file(&result, &report)?;
            for &(method, seconds) in &result.wall_clock {
                println!("{} {:.3}s", method.as_str(), seconds);
            }
            for &method in &[Method::Multiscale, Method::SingleScaleIcm] {
                if let Some(mean) = result.mean_energy(method) {
                    println!("mean {} {mean}", method.as_str());
                }
            }
            Ok(())
        }
    }
}
