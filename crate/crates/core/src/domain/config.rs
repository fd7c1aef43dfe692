use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::action::EnvKind;

/// Beam-search hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub beams: usize,
    pub action_branch: usize,
    pub dynamics_branch: usize,
    pub horizon: usize,
    #[serde(default)]
    pub dedupe: bool,
    #[serde(default = "default_true")]
    pub filtering_enabled: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("action_branch {requested} exceeds the {env} alphabet of {alphabet} actions")]
    BranchTooWide {
        requested: usize,
        env: EnvKind,
        alphabet: usize,
    },
}

impl PlannerConfig {
    /// Per-task beams and branching factors; horizons leave slack over the
    /// average demonstration length of each task.
    pub fn for_env(env: EnvKind) -> Self {
        let (beams, action_branch, dynamics_branch, horizon) = match env {
            EnvKind::FrozenLake => (2, 4, 1, 12),
            EnvKind::MiniBehavior => (2, 5, 1, 16),
            EnvKind::LanguageTable => (2, 4, 4, 12),
        };
        Self {
            beams,
            action_branch,
            dynamics_branch,
            horizon,
            dedupe: false,
            filtering_enabled: true,
        }
    }

    pub fn validate(&self, env: EnvKind) -> Result<(), ConfigError> {
        if self.beams == 0 {
            return Err(ConfigError::Zero("beams"));
        }
        if self.action_branch == 0 {
            return Err(ConfigError::Zero("action_branch"));
        }
        if self.dynamics_branch == 0 {
            return Err(ConfigError::Zero("dynamics_branch"));
        }
        if self.action_branch > env.alphabet_size() {
            return Err(ConfigError::BranchTooWide {
                requested: self.action_branch,
                env,
                alphabet: env.alphabet_size(),
            });
        }
        Ok(())
    }
}
