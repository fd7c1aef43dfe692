//! Ground-truth execution, evaluation runs, the filtering ablation, sweeps
//! and the golden reference checks.

mod config;
mod episode;
mod eval;
mod execute;
pub mod golden;
mod metrics;
pub mod stats;

use thiserror::Error;

pub use config::HarnessConfig;
pub use episode::{run_episode, CandidateSummary, EpisodeRecord, FailureMode};
pub use eval::{ablate_filtering, config_id, run_eval, sweep, Ablation, EvalRun, SweepRow};
pub use execute::{execute_plan, Execution};
pub use metrics::{Metrics, MetricsRow};

use crate::domain::ConfigError;
use crate::envs::EnvError;
use crate::planner::PlanError;
use crate::surrogate::NoiseError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no environment given (set \"env\" in the config or pass --env)")]
    MissingEnv,
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Planner(#[from] ConfigError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("invalid parameter path {path:?}: {reason}")]
    InvalidParamPath { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}
