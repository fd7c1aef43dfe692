//! Beam search over surrogate rollouts, and an exhaustive reference search.

mod beam;
mod brute;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use beam::{plan, plan_with_trace, select_top_b, PoolEntry, StepTrace};
pub use brute::{brute_force_plan, NODE_CAP};

use crate::domain::{Action, ConfigError};
use crate::envs::{EnvError, Observation};
use crate::surrogate::PolicyError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BeamEntry {
    pub obs: Observation,
    pub actions: Vec<Action>,
    pub predicted: Vec<Observation>,
    pub value: u32,
    pub score: i32,
    pub terminal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Complete,
    HorizonExhausted,
    NoValidTransitions,
}

impl PlanStatus {
    pub fn name(self) -> &'static str {
        match self {
            PlanStatus::Complete => "complete",
            PlanStatus::HorizonExhausted => "horizon_exhausted",
            PlanStatus::NoValidTransitions => "no_valid_transitions",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStats {
    /// Forward-model candidates drawn.
    pub proposed: u64,
    pub accepted: u64,
    /// Keyed by reject-reason name.
    pub rejected_by_reason: BTreeMap<String, u64>,
    pub beams_expanded: u64,
}

impl PlanStats {
    pub fn rejected(&self) -> u64 {
        self.rejected_by_reason.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanResult {
    pub actions: Vec<Action>,
    pub predicted_obs: Vec<Observation>,
    pub score: i32,
    pub status: PlanStatus,
    pub stats: PlanStats,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid config: {0}")]
    InvalidConfig(#[from] ConfigError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("search tree exceeds {0} nodes")]
    TreeTooLarge(usize),
}
