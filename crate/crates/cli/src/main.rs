//! `gaussfit` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 fit failure. On
//! failure stderr starts with `error[<Name>]` where `<Name>` is the
//! library error variant.

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gaussfit::bench::{run_sweep, FixedAxes, SweepAxis, SweepConfig, DEFAULT_TRIALS};
use gaussfit::complexity::{gauss_elimination_cost, op_counts, CostModel, ModeledAlgorithm};
use gaussfit::errmodel::{DEFAULT_K1, DEFAULT_K2};
use gaussfit::fitters::DEFAULT_REL_TOL;
use gaussfit::io::{read_dataset_path, write_dataset, write_fit_results, write_sweep, Format};
use gaussfit::{fit, synthesize, Algorithm, Error, GaussianParams, IterationPolicy, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "gaussfit",
    version,
    about = "Closed-form Gaussian fitting and accuracy benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a Gaussian to an x,y CSV file.
    Fit(FitArgs),
    /// Generate a noisy Gaussian dataset as x,y CSV.
    Simulate(SimulateArgs),
    /// Monte Carlo ARE% sweep over snr, width ratio or sample count.
    Sweep(SweepArgs),
    /// Closed-form operation counts for Guo, Roonizi and FAS.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Args)]
struct IterationArgs {
    /// Reweighting iterations for guo-iter and fas-iter.
    #[arg(long, default_value_t = 10)]
    max_iters: usize,
    /// Stop iterating once the relative coefficient change drops below this.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    /// fas-iter: recompute sigma from the fitted amplitude every M iterations.
    #[arg(long, value_name = "M")]
    refresh_sigma: Option<NonZeroUsize>,
}

impl IterationArgs {
    fn policy(&self) -> IterationPolicy {
        IterationPolicy {
            max_iters: self.max_iters,
            rel_tol: self.tol,
            refresh_sigma_every: self.refresh_sigma,
        }
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Algorithm,
    #[command(flatten)]
    iteration: IterationArgs,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    amplitude: f64,
    #[arg(long, allow_negative_numbers = true)]
    mean: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    n: usize,
    /// Window width in units of sigma (W).
    #[arg(long)]
    width_ratio: f64,
    /// Standard deviation of the additive noise.
    #[arg(long)]
    noise_sd: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_axis)]
    axis: SweepAxis,
    /// Comma-separated, strictly increasing axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed signal-to-noise ratio when not sweeping snr.
    #[arg(long, conflicts_with = "noise_sd")]
    snr: Option<f64>,
    /// Fixed noise SD when not sweeping snr (snr = amplitude / noise-sd).
    #[arg(long)]
    noise_sd: Option<f64>,
    /// Fixed width ratio W when not sweeping W.
    #[arg(long, default_value_t = 12.0)]
    width_ratio: f64,
    /// Fixed sample count when not sweeping N.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    mean: f64,
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_algorithm,
        default_value = "caruana,guo,roonizi,fas"
    )]
    algorithms: Vec<Algorithm>,
    #[command(flatten)]
    iteration: IterationArgs,
    #[arg(long, default_value_t = DEFAULT_K1)]
    k1: f64,
    #[arg(long, default_value_t = DEFAULT_K2)]
    k2: f64,
    /// Cap on worker threads; output does not depend on it.
    #[arg(long)]
    threads: Option<NonZeroUsize>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
}

#[derive(Debug, Args)]
struct ComplexityArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    a_ln: u64,
    #[arg(long, default_value_t = 0)]
    m_ln: u64,
    #[arg(long, default_value_t = 0)]
    a_exp: u64,
    #[arg(long, default_value_t = 0)]
    m_exp: u64,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) => 1,
        Error::SingularSystem | Error::InvalidCurvature { .. } => 3,
        _ => 2,
    }
}

fn run_fit(args: &FitArgs) -> Result<String, Error> {
    let policy = args.iteration.policy();
    policy.validate()?;
    let data = read_dataset_path(&args.input)?;
    let result = fit(&data, args.algorithm, &policy)?;
    Ok(write_fit_results(&[result], args.format))
}

fn run_simulate(args: &SimulateArgs) -> Result<String, Error> {
    let scenario = Scenario {
        truth: GaussianParams::new(args.amplitude, args.mean, args.sigma)?,
        n: args.n,
        width_ratio: args.width_ratio,
        noise_sd: args.noise_sd,
        seed: args.seed,
    };
    Ok(write_dataset(&synthesize(&scenario)?))
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Error> {
    let truth = GaussianParams::new(args.amplitude, args.mean, args.sigma)?;
    let snr = match (args.snr, args.noise_sd) {
        (Some(snr), _) => snr,
        (None, Some(0.0)) => f64::INFINITY,
        (None, Some(sd)) if sd > 0.0 => truth.amplitude() / sd,
        (None, Some(sd)) => {
            return Err(Error::InvalidInput(format!(
                "noise SD must be non-negative, got {sd}"
            )))
        }
        (None, None) => FixedAxes::default().snr,
    };
    let mut config = SweepConfig::new(args.axis, args.values.clone());
    config.truth = truth;
    config.fixed = FixedAxes {
        snr,
        width_ratio: args.width_ratio,
        n: args.n,
    };
    config.trials = args.trials;
    config.algorithms = args.algorithms.clone();
    config.policy = args.iteration.policy();
    config.base_seed = args.seed;
    config.k1 = args.k1;
    config.k2 = args.k2;
    config.validate()?;
    Ok(config)
}

fn run_sweep_command(args: &SweepArgs) -> Result<String, Error> {
    let config = sweep_config(args)?;
    let rows = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.get())
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(|| run_sweep(&config))?,
        None => run_sweep(&config)?,
    };
    write_sweep(&rows, &config.algorithms, args.format)
}

fn run_complexity(args: &ComplexityArgs) -> Result<String, Error> {
    let model = CostModel {
        a_ln: args.a_ln,
        m_ln: args.m_ln,
        a_exp: args.a_exp,
        m_exp: args.m_exp,
    };
    let mut out = String::from("algorithm,additions,multiplications\n");
    for alg in ModeledAlgorithm::ALL {
        let c = op_counts(alg, args.n, &model)?;
        out.push_str(&format!(
            "{},{},{}\n",
            alg.as_str(),
            c.additions,
            c.multiplications
        ));
    }
    let guo = op_counts(ModeledAlgorithm::Guo, args.n, &model)?;
    let fas = op_counts(ModeledAlgorithm::Fas, args.n, &model)?;
    out.push_str(&format!(
        "guo-minus-fas,{},{}\n",
        guo.additions - fas.additions,
        guo.multiplications - fas.multiplications
    ));
    for n in [2, 3] {
        let c = gauss_elimination_cost(n)?;
        out.push_str(&format!(
            "gauss-elimination-{n}x{n},{},{}\n",
            c.additions, c.multiplications
        ));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Sweep(args) => run_sweep_command(args),
        Command::Complexity(args) => run_complexity(args),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
