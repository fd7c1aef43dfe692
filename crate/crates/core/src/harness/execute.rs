use serde::{Deserialize, Serialize};

use super::FailureMode;
use crate::domain::{Action, Goal, Stream};
use crate::envs::{Instance, MazeStatus, Observation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Execution {
    pub success: bool,
    pub failure_mode: FailureMode,
    /// Actions actually applied.
    pub steps: usize,
    /// Ground-truth frames after each applied action.
    pub trace: Vec<Observation>,
}

/// Steps ground truth through `actions`. Stops on trap entry, on reaching
/// a maze gift, or on a rule violation.
pub fn execute_plan(
    instance: &Instance,
    o0: &Observation,
    goal: &Goal,
    actions: &[Action],
    rng: &mut Stream,
) -> Execution {
    let mut obs = o0.clone();
    let mut trace = Vec::with_capacity(actions.len());
    let mut failure = None;
    for action in actions {
        if instance.is_absorbing(&obs) {
            break;
        }
        match instance.step(&obs, action, rng) {
            Ok(next) => obs = next,
            Err(_) => {
                failure = Some(FailureMode::InvalidAction);
                break;
            }
        }
        trace.push(obs.clone());
        if matches!(&obs, Observation::Maze(m) if m.status == MazeStatus::Trapped) {
            failure = Some(FailureMode::Trapped);
            break;
        }
    }
    let success = failure.is_none() && instance.goal_reached(&obs, goal);
    let failure_mode = match failure {
        Some(f) => f,
        None if success => FailureMode::None,
        None => FailureMode::GoalNotReached,
    };
    Execution {
        success,
        failure_mode,
        steps: trace.len(),
        trace,
    }
}
