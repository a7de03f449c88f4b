use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coinknn::config::{parse_config, RunConfig};
use coinknn::report::{cmd_levelsets, cmd_profile, cmd_single, cmd_sweep, with_threads};
use coinknn::{ComparatorKind, Result};

/// k-NN accuracy experiments with the Euclidean distance and the coincidence
/// dissimilarity.
#[derive(Parser)]
#[command(name = "coinknn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed, overriding the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, env = "COINKNN_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Mean and spread of β over every comparator and k.
    Sweep(Common),
    /// Full β histogram of a single (comparator, k) cell.
    Single {
        #[command(flatten)]
        common: Common,
        /// `euclidean` or `dissimilarity`.
        #[arg(long, default_value = "dissimilarity")]
        comparator: String,
        #[arg(long, default_value_t = 70)]
        k: usize,
    },
    /// 1D comparator profiles and their sensitivity.
    Profile(Common),
    /// Iso-contours of each comparator around the 2D decision point.
    Levelsets(Common),
    /// Check the configuration and print it fully resolved.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = parse_config(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let (common, files) = match &cli.command {
        Command::Validate { config } => {
            let cfg = parse_config(config)?;
            println!("{}", serde_json::to_string_pretty(&cfg.to_json()).expect("valid JSON"));
            return Ok(());
        }
        Command::Sweep(c) => (c, with_threads(c.threads, || cmd_sweep(&load(c)?, &c.out))?),
        Command::Profile(c) => (c, with_threads(c.threads, || cmd_profile(&load(c)?, &c.out))?),
        Command::Levelsets(c) => (c, with_threads(c.threads, || cmd_levelsets(&load(c)?, &c.out))?),
        Command::Single { common, comparator, k } => {
            let cfg = load(common)?;
            let kind = match comparator.as_str() {
                "euclidean" => ComparatorKind::Euclidean,
                "dissimilarity" => cfg.dissimilarity(),
                other => {
                    return Err(coinknn::Error::Config {
                        key: "comparator".into(),
                        message: format!("unknown comparator `{other}`"),
                    })
                }
            };
            let files = with_threads(common.threads, || cmd_single(&cfg, kind, *k, &common.out))?;
            (common, files)
        }
    };
    eprintln!("wrote {} files to {}", files.len(), common.out.display());
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
