use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use mutsel::ea::{run, write_trace};
use mutsel::experiments::{
    emit_phase_plot_data, run_branching_validation, run_sweep, write_equilibrium_csv_to, write_sweep_csv_to,
    write_validation_csv_to, BranchingValidationSpec, EquilibriumSpec, RunSpec, SpectralSpec, SweepSpec,
};
use mutsel::spectral::spectral_report;
use mutsel::{derive_stream, Error};

/// Experiments for the Linear Ranking EA under mutation-selection balance.
///
/// Every subcommand reads a JSON document given by --config. Flags override
/// the matching JSON values.
#[derive(Parser)]
#[command(name = "mutsel-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single EA run; writes a JSON-lines trace.
    Run(Common),
    /// Success-rate sweep over a (χ, η) grid; writes a CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Also write heatmap data here, plus `<stem>_boundaries.csv` beside it.
        #[arg(long, value_name = "PATH")]
        phase_plot: Option<PathBuf>,
    },
    /// Equilibrium level of γ-ranked individuals on LeadingOnes; writes a CSV.
    Equilibrium(Common),
    /// Monte Carlo branching processes against their tail bounds; writes a CSV.
    Branching(Common),
    /// Perron root of the prefix-sum mean matrix; writes a JSON report.
    Spectral(Common),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Overrides the seed in the configuration (ignored by `spectral`).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of logical CPUs.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    serde_json::from_reader(io::BufReader::new(file))
        .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Runtime(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn set_jobs(jobs: Option<u32>) -> Result<(), Failure> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(c) => {
            set_jobs(c.jobs)?;
            let mut spec: RunSpec = load(&c.config)?;
            if let Some(s) = c.seed {
                spec.config.seed = s;
            }
            let mut rng = derive_stream(spec.config.seed, 0);
            let record = run(&spec.config, &spec.objective, &spec.settings(), &mut rng)?;
            let mut out = output(&c.out)?;
            write_trace(&record, &mut out)?;
            out.flush()?;
        }
        Command::Sweep { common: c, phase_plot } => {
            set_jobs(c.jobs)?;
            let mut spec: SweepSpec = load(&c.config)?;
            if let Some(s) = c.seed {
                spec.base_seed = s;
            }
            let cells = run_sweep(&spec)?;
            let mut out = output(&c.out)?;
            write_sweep_csv_to(&cells, &mut out)?;
            out.flush()?;
            if let Some(p) = phase_plot {
                emit_phase_plot_data(&cells, &spec.selpres, spec.epsilon, &p)?;
            }
        }
        Command::Equilibrium(c) => {
            set_jobs(c.jobs)?;
            let mut spec: EquilibriumSpec = load(&c.config)?;
            if let Some(s) = c.seed {
                spec.seed = s;
            }
            let rows = spec.run()?;
            let mut out = output(&c.out)?;
            write_equilibrium_csv_to(&rows, &mut out)?;
            out.flush()?;
        }
        Command::Branching(c) => {
            set_jobs(c.jobs)?;
            let mut spec: BranchingValidationSpec = load(&c.config)?;
            if let Some(s) = c.seed {
                *spec.seed_mut() = s;
            }
            let rows = run_branching_validation(&spec)?;
            let mut out = output(&c.out)?;
            write_validation_csv_to(&rows, &mut out)?;
            out.flush()?;
        }
        Command::Spectral(c) => {
            let spec: SpectralSpec = load(&c.config)?;
            let report = spectral_report(spec.n, spec.eta, spec.chi, spec.kappa, spec.phi)?;
            let mut out = output(&c.out)?;
            serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Failure::Runtime(e.to_string()))?;
            writeln!(out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
