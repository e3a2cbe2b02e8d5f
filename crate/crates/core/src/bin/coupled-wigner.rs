use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coupled_wigner::experiments::{self, output, Experiment, ExperimentConfig, Format};
use coupled_wigner::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Wigner-function experiments for two coupled oscillators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information and negativities against θ = γt
    Fig1(Common),
    /// Fidelity and coherence of the damped mode
    Fig3(Common),
    /// Print a single number: eigen, fidelity, coherence or negativity
    Query {
        experiment: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Override a config key, e.g. --set physics.gamma=0.2
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the resolved config and exit
    #[arg(long)]
    dump_config: bool,
}

fn resolve(common: &Common, experiment: Option<&str>) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(e) = experiment {
        cfg.set("experiment", e)?;
    }
    for s in &common.set {
        cfg.apply_assignment(s)?;
    }
    if let Some(p) = &common.out {
        cfg.out = Some(p.clone());
    }
    if let Some(f) = &common.format {
        cfg.format = f.parse()?;
    }
    Ok(cfg)
}

fn inset_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_inset.{}", ext.to_string_lossy()),
        None => format!("{stem}_inset"),
    };
    path.with_file_name(name)
}

fn run(cli: Cli) -> Result<()> {
    let (common, experiment) = match &cli.command {
        Command::Fig1(c) => (c, Some("fig1")),
        Command::Fig3(c) => (c, Some("fig3")),
        Command::Query { experiment, common } => (common, experiment.as_deref()),
    };
    let cfg = resolve(common, experiment)?;
    if matches!(cli.command, Command::Query { .. }) && !cfg.experiment.is_query() {
        return Err(Error::Config(format!("'{}' is not a query", cfg.experiment.name())));
    }
    if common.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    cfg.validate()?;

    match cfg.experiment {
        Experiment::Fig1 => {
            let table = experiments::run_fig1(&cfg)?;
            output::emit(cfg.out.as_deref(), &table.render(&cfg, Default::default())?)
        }
        Experiment::Fig3 => {
            let mut runs = vec![(experiments::run_fig3(&cfg)?, cfg.out.clone())];
            if cfg.inset {
                runs.push((experiments::run_fig3_inset(&cfg)?, cfg.out.as_deref().map(inset_path)));
            }
            for (i, (run, path)) in runs.iter().enumerate() {
                if path.is_none() && i > 0 && cfg.format == Format::Csv {
                    println!();
                }
                output::emit(path.as_deref(), &run.table.render(&cfg, run.summary())?)?;
                if path.is_some() {
                    print!("{}", run.summary_text());
                } else {
                    eprint!("{}", run.summary_text());
                }
            }
            Ok(())
        }
        _ => {
            println!("{}", experiments::query(&cfg)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
