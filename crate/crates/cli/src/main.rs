mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use vcd_core::config::{parse_config, ExperimentConfig};
use vcd_core::roadnet::{generate_manhattan_grid, write_road_graph};
use vcd_core::sweep::{run_sweep, SweepReport, SweepSpec};

#[derive(Parser)]
#[command(
    name = "vcd",
    version,
    about = "Vehicular collaborative download simulator"
)]
struct Cli {
    /// Only log warnings and errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config document (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed, overriding `master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Replicates per value, overriding `replicates`.
    #[arg(long)]
    replicates: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration `replicates` times.
    Run(Common),
    /// Run a configuration for each value of one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Config key to vary.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Encode a random file and check decoding from random chunk subsets.
    CodecSelftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 400_000)]
        file_size: usize,
        #[arg(long, default_value_t = 300)]
        k: usize,
        #[arg(long, default_value_t = 450)]
        n: usize,
        /// Random k-subsets to decode.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Random (k-1)-subsets that must be rejected.
        #[arg(long, default_value_t = 100)]
        short_trials: usize,
    },
    /// Write a Manhattan grid in the road-graph text format.
    GenGraph {
        #[arg(long, default_value_t = 10)]
        rows: usize,
        #[arg(long, default_value_t = 10)]
        cols: usize,
        #[arg(long, default_value_t = 200.0)]
        block_len: f64,
        /// Comma-separated main-road column indices.
        #[arg(long, value_delimiter = ',', default_value = "2,5,8")]
        main_cols: Vec<usize>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(common: &Common) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.master_seed = seed;
    }
    if let Some(r) = common.replicates {
        cfg.replicates = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report(r: &SweepReport) -> ExitCode {
    for row in &r.summary {
        let t = |i: usize| {
            row.milestones[i]
                .mean
                .map_or("-".to_string(), |h| format!("{h:.2}h"))
        };
        println!(
            "{:>10}  t30 {:>7}  t50 {:>7}  t80 {:>7}  t90 {:>7}  t99 {:>7}  failed {}",
            if row.value.is_empty() {
                "run"
            } else {
                &row.value
            },
            t(0),
            t(1),
            t(2),
            t(3),
            t(4),
            row.failed
        );
    }
    println!("results in {}", r.out_dir.display());
    if r.failures() > 0 {
        log::error!("{} run(s) failed", r.failures());
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(common) => {
            let cfg = load(&common)?;
            Ok(report(&run_sweep(&SweepSpec::plain(cfg))?))
        }
        Command::Sweep {
            common,
            param,
            values,
        } => {
            let cfg = load(&common)?;
            let spec = SweepSpec::new(cfg, &param, values)?;
            Ok(report(&run_sweep(&spec)?))
        }
        Command::CodecSelftest {
            seed,
            file_size,
            k,
            n,
            trials,
            short_trials,
        } => {
            anyhow::ensure!(k >= 1 && k <= n, "need 1 <= k <= n");
            let out = selftest::run(&selftest::Battery {
                file_len: file_size,
                k,
                n,
                trials,
                short_trials,
                min_success: 0.99,
                seed,
            })?;
            println!(
                "full-set decode: {}",
                if out.full_set_ok { "ok" } else { "MISMATCH" }
            );
            println!("{k}-subsets decoded: {}/{}", out.successes, out.trials);
            println!(
                "{}-subsets rejected: {}/{}",
                k - 1,
                out.short_rejected,
                out.short_trials
            );
            println!("{}", if out.passed { "PASS" } else { "FAIL" });
            Ok(if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::GenGraph {
            rows,
            cols,
            block_len,
            main_cols,
            out,
        } => {
            let g = generate_manhattan_grid(rows, cols, block_len, &main_cols)?;
            let text = write_road_graph(&g);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(2)
        }
    }
}
