use serde::{Deserialize, Serialize};

/// Steps-remaining reported for states from which the goal can never be reached.
pub const INFEASIBLE: u32 = 100;

/// Largest finite estimate; keeps every finite value strictly below the sentinel.
pub const MAX_FINITE: u32 = INFEASIBLE - 1;

/// Pickup/drop split reported by the fetch task's value function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueComponents {
    pub pickup: u32,
    pub drop: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueEstimate {
    pub steps_remaining: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<ValueComponents>,
}

impl ValueEstimate {
    pub fn steps(steps_remaining: u32) -> Self {
        Self {
            steps_remaining: steps_remaining.min(MAX_FINITE),
            components: None,
        }
    }

    pub fn infeasible() -> Self {
        Self {
            steps_remaining: INFEASIBLE,
            components: None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        self.steps_remaining >= INFEASIBLE
    }

    /// Beam score: higher is better.
    pub fn score(&self) -> i32 {
        -(self.steps_remaining.min(INFEASIBLE) as i32)
    }
}
