mod commands;
mod inputs;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use gerbe_core::parallel::{SearchOptions, DEFAULT_BUDGET};
use gerbe_core::Error;

use crate::commands::Settings;
use crate::report::{Cache, Format};

/// Finite crossed modules, simplicial bundles and nonabelian gerbes,
/// checked exhaustively at desk scale.
#[derive(Parser, Debug)]
#[command(name = "gerbe", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Simplicial truncation level.
    #[arg(long, global = true, default_value_t = 3)]
    truncation: usize,

    /// Search budget in constraint-propagation steps.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Directory for cached gerbe classifications.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Allow instances beyond the default size limits, and recompute
    /// instead of reading the cache.
    #[arg(long, global = true)]
    force: bool,

    /// Finite-difference step for gauge checks.
    #[arg(long, global = true)]
    fd_step: Option<f64>,

    /// Residual tolerance for gauge checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Directory for artifacts such as comparison dictionaries.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Crossed-module tools.
    Xmod {
        #[command(subcommand)]
        command: XmodCommand,
    },
    /// Gerbe classification by stable equivalence of cocycles.
    Gerbe {
        #[command(subcommand)]
        command: GerbeCommand,
    },
    /// Compare the bar construction on the nerve with the Duskin nerve.
    Prop55 {
        /// Crossed-module preset or xmod.json.
        #[arg(long)]
        xmod: String,
    },
    /// Principal bundles over a simplicial set.
    Bundles {
        #[command(subcommand)]
        command: BundlesCommand,
    },
    /// Numerical gluing-law checks.
    Gauge {
        #[command(subcommand)]
        command: GaugeCommand,
    },
    /// Lift cocycles for the image of α to the given crossed module.
    Lift {
        /// Cover preset or cover.json.
        #[arg(long)]
        cover: String,
        /// Target crossed-module preset or xmod.json.
        #[arg(long)]
        xmod: String,
        /// Lift only this cocycle instead of every cocycle on the cover.
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Built-in groups, crossed modules, covers and gauge cases.
    Preset {
        #[command(subcommand)]
        command: PresetCommand,
    },
}

#[derive(Subcommand, Debug)]
enum XmodCommand {
    /// Check the crossed-module axioms.
    Check {
        /// Preset expression or xmod.json.
        input: String,
    },
}

#[derive(Subcommand, Debug)]
enum GerbeCommand {
    /// Count stable classes and compare with the available oracles.
    Classify {
        #[arg(long)]
        cover: String,
        #[arg(long)]
        xmod: String,
        /// Skip the homotopy-classes-of-maps cross-check.
        #[arg(long)]
        skip_maps: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BundlesCommand {
    /// Compare twisting classes with homotopy classes of maps into W̄G.
    Classify {
        /// point, circle, sphere(k), simplex(k) or sset.json.
        #[arg(long)]
        base: String,
        /// Group preset or group.json.
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand, Debug)]
enum GaugeCommand {
    /// Evaluate residuals of a bundled case or a case file.
    Verify {
        #[arg(long, required_unless_present = "file", conflicts_with = "file")]
        case: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum PresetCommand {
    List,
    /// Print the tables of a group or crossed-module preset.
    Show { expr: String },
}

fn run(cli: Cli) -> Result<bool> {
    let g = cli.global;
    let settings = Settings {
        truncation: g.truncation,
        budget: g.budget,
        search: SearchOptions::new(g.budget, g.jobs),
        force: g.force,
        fd_step: g.fd_step,
        tolerance: g.tolerance,
        out: g.out,
    };
    let outcome = match cli.command {
        Command::Xmod {
            command: XmodCommand::Check { input },
        } => commands::xmod_check(&input)?,
        Command::Gerbe {
            command: GerbeCommand::Classify { cover, xmod, skip_maps },
        } => {
            let cache = g.cache_dir.as_deref().map(Cache::new).transpose()?;
            commands::gerbe_classify(&settings, &cover, &xmod, skip_maps, cache.as_ref())?
        }
        Command::Prop55 { xmod } => commands::prop55(&settings, &xmod)?,
        Command::Bundles {
            command: BundlesCommand::Classify { base, group },
        } => commands::bundles_classify(&settings, &base, &group)?,
        Command::Gauge {
            command: GaugeCommand::Verify { case, file },
        } => commands::gauge_verify(&settings, case.as_deref(), file.as_deref())?,
        Command::Lift { cover, xmod, cocycle } => commands::lift(&settings, &cover, &xmod, cocycle.as_deref())?,
        Command::Preset { command } => match command {
            PresetCommand::List => commands::preset_list(),
            PresetCommand::Show { expr } => commands::preset_show(&expr)?,
        },
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(outcome.render(g.format).as_bytes())?;
    stdout.flush()?;
    Ok(outcome.report.passed)
}

/// 2 for bad input, 3 for an exhausted budget, 1 for an internal
/// construction failing its own checks.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Budget { .. }) => 3,
        Some(Error::Transcription(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timing = cli.global.timing;
    let start = Instant::now();
    let result = run(cli);
    if timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
