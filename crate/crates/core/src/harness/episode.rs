use serde::{Deserialize, Serialize};

use super::{execute_plan, HarnessConfig, HarnessError};
use crate::domain::{
    derive_stream, Action, EnvKind, PlanStreams, PlannerConfig, RngStreamKey, StreamRole,
};
use crate::envs::{random_instance, Instance};
use crate::filtering::{RejectReason, Verdict};
use crate::planner::{plan_with_trace, PlanResult, PlanStatus};
use crate::surrogate::{ErrorCategory, NoiseProfile, Surrogate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    None,
    Trapped,
    InvalidAction,
    GoalNotReached,
    PlannerNoValidTransitions,
}

impl FailureMode {
    pub fn name(self) -> &'static str {
        match self {
            FailureMode::None => "none",
            FailureMode::Trapped => "trapped",
            FailureMode::InvalidAction => "invalid_action",
            FailureMode::GoalNotReached => "goal_not_reached",
            FailureMode::PlannerNoValidTransitions => "planner_no_valid_transitions",
        }
    }
}

/// One drawn transition, without the frames.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub step: usize,
    pub action: Action,
    pub verdict: Verdict,
    pub reject_reason: RejectReason,
    pub inferred_action: Option<Action>,
    pub category: ErrorCategory,
    /// Ground-truth validity of the prediction.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub episode_index: u64,
    pub seed: u64,
    pub env_kind: EnvKind,
    pub instance: Instance,
    pub cfg: PlannerConfig,
    pub noise: NoiseProfile,
    pub plan: PlanResult,
    /// Beam-search steps actually run.
    pub planning_steps: usize,
    pub executed_success: bool,
    pub executed_steps: usize,
    pub failure_mode: FailureMode,
    pub candidate_log: Vec<CandidateSummary>,
}

/// Generates, plans and executes episode `episode_index` of `cfg`. Every
/// random draw comes from streams keyed by `(cfg.seed, episode_index)`.
pub fn run_episode(cfg: &HarnessConfig, episode_index: u64) -> Result<EpisodeRecord, HarnessError> {
    let key = |role| RngStreamKey::new(cfg.seed, episode_index, role);
    let instance = random_instance(
        cfg.env,
        &cfg.env_params,
        &mut derive_stream(key(StreamRole::Instance)),
    )?;
    let (o0, goal) = (instance.initial_obs(), instance.goal());
    let model = Surrogate::new(cfg.noise, cfg.policy);
    let mut streams = PlanStreams::derive(cfg.seed, episode_index);
    let (plan, trace) = plan_with_trace(&model, &instance, &o0, &goal, &cfg.planner, &mut streams)?;
    let exec = execute_plan(
        &instance,
        &o0,
        &goal,
        &plan.actions,
        &mut derive_stream(key(StreamRole::Env)),
    );
    let failure_mode = match exec.failure_mode {
        FailureMode::GoalNotReached if plan.status == PlanStatus::NoValidTransitions => {
            FailureMode::PlannerNoValidTransitions
        }
        other => other,
    };
    let candidate_log = trace
        .iter()
        .flat_map(|t| {
            t.candidates.iter().map(move |c| CandidateSummary {
                step: t.step,
                action: c.action,
                verdict: c.verdict,
                reject_reason: c.reject_reason,
                inferred_action: c.inferred_action,
                category: c.category,
                valid: c.valid,
            })
        })
        .collect();
    Ok(EpisodeRecord {
        episode_index,
        seed: cfg.seed,
        env_kind: cfg.env,
        instance,
        cfg: cfg.planner,
        noise: cfg.noise,
        planning_steps: trace.len(),
        plan,
        executed_success: exec.success,
        executed_steps: exec.steps,
        failure_mode,
        candidate_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_episode_succeeds_and_replays() {
        let cfg = HarnessConfig::defaults(EnvKind::FrozenLake);
        let a = run_episode(&cfg, 3).unwrap();
        assert!(a.executed_success);
        assert_eq!(a.failure_mode, FailureMode::None);
        assert_eq!(a, run_episode(&cfg, 3).unwrap());
        let accepted = a
            .candidate_log
            .iter()
            .filter(|c| c.verdict == Verdict::Accepted)
            .count() as u64;
        assert_eq!(accepted, a.plan.stats.accepted);
    }
}
