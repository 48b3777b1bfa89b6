use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kzassoc::commands::{
    self, ClassArg, ClassifyTarget, Extrapolation, FlatConnection, Images, ModeArg, PathFamily, Which,
};
use kzassoc::{parse_grid, CliError, Outcome, RunConfig, RunReport, ScalarKind};
use kzassoc_core::associator::{dyadic_grid, DEEP_GRID, DEFAULT_GRID};

#[derive(Parser)]
#[command(name = "kzassoc", version, about = "Numerical Drinfel'd associators from KZ parallel transport")]
struct Cli {
    /// Directory for cached ideal bases; falls back to $KZASSOC_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Truncation order N in λ.
    #[arg(long)]
    order: Option<usize>,
    /// Simpson panels per smooth segment.
    #[arg(long)]
    steps: Option<usize>,
    /// Regulator δ in ]0, 1/4].
    #[arg(long)]
    delta: Option<f64>,
    /// Defaults to delta.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Regulator grid, `2^-4..2^-10` or `0.1,0.05,0.02`.
    #[arg(long)]
    grid: Option<String>,
    /// Pass threshold on the reported residual.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = ScalarKind::C64)]
    scalar: ScalarKind,
}

#[derive(Subcommand)]
enum Command {
    /// Extrapolated associator Φ(A, B) and its convergence table.
    Associator {
        #[command(flatten)]
        common: Common,
        /// Report Φ modulo [A, B] and check that it is 1.
        #[arg(long)]
        commuting: bool,
        #[arg(long, value_enum)]
        extrapolation: Option<Extrapolation>,
    },
    /// Hexagon or pentagon identity.
    Verify {
        #[arg(value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value_t = ModeArg::Finite)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Images::Braid)]
        images: Images,
        #[command(flatten)]
        common: Common,
    },
    /// Parallel transport along a named path family.
    Transport {
        #[arg(value_enum)]
        family: PathFamily,
        /// 1-based leg index for the leg families.
        #[arg(long)]
        leg: Option<usize>,
        #[arg(long, value_enum, default_value_t = Images::Braid)]
        images: Images,
        #[command(flatten)]
        common: Common,
    },
    /// Curvature of a connection at seeded rational points.
    Flatness {
        #[arg(value_enum)]
        connection: FlatConnection,
        #[arg(long, value_enum, default_value_t = Images::Braid)]
        images: Images,
        /// Number of points for the KZ connection.
        #[arg(long, default_value_t = 3)]
        strands: usize,
        /// Number of seeded rational points.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Seed for the point generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// L/B/H classification of a regulated family over the grid.
    Classify {
        #[arg(value_enum)]
        target: ClassifyTarget,
        /// Fail unless the family falls in this class.
        #[arg(long, value_enum)]
        expect: Option<ClassArg>,
        #[command(flatten)]
        common: Common,
    },
}

struct Defaults {
    grid: (i32, i32),
    tolerance: f64,
}

impl Common {
    fn config(&self, d: Defaults, cli: &Cli) -> Result<RunConfig, CliError> {
        let delta = self.delta.unwrap_or(0.125);
        let grid = match &self.grid {
            Some(spec) => parse_grid(spec)?,
            None => dyadic_grid(d.grid.0, d.grid.1),
        };
        Ok(RunConfig {
            order: self.order.unwrap_or(4),
            steps: self.steps.unwrap_or(2048),
            delta,
            epsilon: self.epsilon.unwrap_or(delta),
            grid,
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            cache_dir: cli.cache_dir.clone(),
            output: cli.output.clone(),
            scalar: self.scalar,
        })
    }
}

fn fallback_config(cli: &Cli) -> RunConfig {
    RunConfig {
        order: 0,
        steps: 1,
        delta: 0.125,
        epsilon: 0.125,
        grid: Vec::new(),
        tolerance: 0.0,
        cache_dir: cli.cache_dir.clone(),
        output: cli.output.clone(),
        scalar: ScalarKind::C64,
    }
}

fn run(cli: &Cli) -> RunReport {
    let (name, common, defaults) = match &cli.command {
        Command::Associator { common, commuting, .. } => {
            let defaults = match commuting {
                true => Defaults { grid: DEEP_GRID, tolerance: 1e-6 },
                false => Defaults { grid: DEFAULT_GRID, tolerance: 1e-3 },
            };
            ("associator", common, defaults)
        }
        Command::Verify { common, mode, .. } => match mode {
            ModeArg::Finite => ("verify", common, Defaults { grid: DEFAULT_GRID, tolerance: 1e-6 }),
            ModeArg::Limit => ("verify", common, Defaults { grid: DEEP_GRID, tolerance: 1e-3 }),
        },
        Command::Transport { common, .. } => ("transport", common, Defaults { grid: DEFAULT_GRID, tolerance: 1e-6 }),
        Command::Flatness { common, .. } => ("flatness", common, Defaults { grid: DEFAULT_GRID, tolerance: 1e-10 }),
        Command::Classify { common, .. } => ("classify", common, Defaults { grid: DEFAULT_GRID, tolerance: 1e-6 }),
    };
    let config = match common.config(defaults, cli) {
        Ok(c) => c,
        Err(e) => return commands::error_report(name, fallback_config(cli), &e),
    };
    let result = match &cli.command {
        Command::Associator { commuting, extrapolation, .. } => {
            commands::cmd_associator(&config, *commuting, *extrapolation)
        }
        Command::Verify { which, mode, images, .. } => commands::cmd_verify(&config, *which, *mode, *images),
        Command::Transport { family, leg, images, .. } => commands::cmd_transport(&config, *family, *leg, *images),
        Command::Flatness { connection, images, strands, samples, seed, .. } => {
            commands::cmd_flatness(&config, *connection, *images, *strands, *samples, *seed)
        }
        Command::Classify { target, expect, .. } => commands::cmd_classify(&config, *target, *expect),
    };
    result.unwrap_or_else(|e| commands::error_report(name, config, &e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version go to stdout and succeed; malformed arguments are precondition failures.
            return ExitCode::from(if e.use_stderr() { Outcome::Precondition.exit_code() as u8 } else { 0 });
        }
    };
    let report = run(&cli);
    if let Some(err) = report.results.get("error").and_then(|v| v.as_str()) {
        eprintln!("error: {err}");
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = report.write_to(path) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(Outcome::Fail.exit_code() as u8);
            }
        }
        None => println!("{}", report.to_json()),
    }
    eprintln!("{}: {:?}", report.command, report.outcome);
    ExitCode::from(report.exit_code as u8)
}
