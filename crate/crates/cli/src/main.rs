use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use beamplan::domain::EnvKind;
use beamplan::harness::{ablate_filtering, golden, run_episode, run_eval, sweep, HarnessConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beamplan",
    version,
    about = "Beam-search planning over noisy world-model surrogates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// frozenlake, minibehavior or languagetable.
    #[arg(long)]
    env: Option<EnvKind>,
    /// JSON config; unspecified fields take the environment defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 50)]
    episodes: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    no_filtering: bool,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Plan and execute one episode, printing the plan as JSON.
    Plan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        episode: u64,
    },
    /// Run an evaluation and write episodes.jsonl and metrics.csv.
    Eval(Common),
    /// Paired runs with the filter on and off.
    AblateFiltering(Common),
    /// One evaluation per value of a numeric config field.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Dotted path, e.g. noise.q_inverse or planner.dynamics_branch.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Check the three reference episodes.
    Golden,
}

fn load(common: &Common) -> Result<HarnessConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            HarnessConfig::from_json(&text, common.env)?
        }
        None => match common.env {
            Some(env) => HarnessConfig::defaults(env),
            None => bail!("pass --env or --config"),
        },
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if common.no_filtering {
        cfg.planner.filtering_enabled = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Plan { common, episode } => {
            let record = run_episode(&load(&common)?, episode)?;
            println!("{}", serde_json::to_string_pretty(&record.plan)?);
            eprintln!(
                "executed_success={} failure_mode={}",
                record.executed_success,
                record.failure_mode.name()
            );
        }
        Command::Eval(common) => {
            let cfg = load(&common)?;
            let run = run_eval(&cfg, common.episodes, common.jobs, Some(&common.out))?;
            println!("{}", serde_json::to_string_pretty(&run.metrics)?);
        }
        Command::AblateFiltering(common) => {
            let cfg = load(&common)?;
            let ablation = ablate_filtering(&cfg, common.episodes, common.jobs, Some(&common.out))?;
            println!("{}", serde_json::to_string_pretty(&ablation)?);
        }
        Command::Sweep {
            common,
            param,
            values,
        } => {
            let cfg = load(&common)?;
            let rows = sweep(
                &cfg,
                &param,
                &values,
                common.episodes,
                common.jobs,
                Some(&common.out),
            )?;
            for r in rows {
                println!(
                    "{}={} success_rate={:.3} accepted_validity={:.3}",
                    param, r.param_value, r.success_rate, r.accepted_dynamics_validity
                );
            }
        }
        Command::Golden => {
            let cases = golden::run_golden();
            for c in &cases {
                println!(
                    "{} {} ({:.1} ms) {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.elapsed_ms,
                    c.detail
                );
            }
            if cases.iter().any(|c| !c.passed) {
                bail!("golden check failed");
            }
        }
    }
    Ok(())
}
