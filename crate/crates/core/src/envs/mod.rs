//! Ground-truth symbolic environments.
//!
//! [`Instance`] and [`Observation`] wrap the three tasks behind one
//! dispatching surface used by the surrogates, the planner and the harness.

mod error;
pub mod fetch;
mod generate;
pub mod grid;
pub mod maze;
pub mod table;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use error::EnvError;
pub use fetch::{fetch_step, fetch_value_oracle, ApplePlace, FetchInstance, FetchObs, Pose};
pub use generate::{random_instance, EnvParams, FetchParams, IntRange, MazeParams, TableParams};
pub use grid::Cell;
pub use maze::{maze_step, maze_value_oracle, MazeInstance, MazeObs, MazeStatus};
pub use table::{
    table_step, table_valid_next, table_value_oracle, BlockPlacement, Placement, SubOffset,
    TableInstance, TableObs,
};

use crate::domain::{Action, BlockId, EnvKind, Goal, ValueEstimate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instance {
    Maze(MazeInstance),
    Fetch(FetchInstance),
    Table(TableInstance),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observation {
    Maze(MazeObs),
    Fetch(FetchObs),
    Table(TableObs),
}

impl Observation {
    pub fn kind(&self) -> EnvKind {
        match self {
            Observation::Maze(_) => EnvKind::FrozenLake,
            Observation::Fetch(_) => EnvKind::MiniBehavior,
            Observation::Table(_) => EnvKind::LanguageTable,
        }
    }

    /// Stable textual key, used for deduplication and logs.
    pub fn canonical_key(&self) -> String {
        serde_json::to_string(self).expect("observations always serialize")
    }

    /// Exact per-category object counts drawn in this frame.
    pub fn object_counts(&self) -> BTreeMap<String, u32> {
        match self {
            Observation::Maze(o) => BTreeMap::from([
                ("character".to_string(), 1),
                ("gift".to_string(), o.gifts.len() as u32),
            ]),
            Observation::Fetch(o) => BTreeMap::from([
                ("agent".to_string(), 1),
                ("apple".to_string(), o.apples.len() as u32),
            ]),
            Observation::Table(o) => BlockId::ALL
                .iter()
                .map(|&b| (b.name().to_string(), o.count_of(b) as u32))
                .collect(),
        }
    }
}

/// Rng used where a stochastic step's outcome does not matter to the caller
/// (table sub-offsets never change legality, value or goal tests).
pub(crate) fn scratch_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0)
}

impl Instance {
    pub fn kind(&self) -> EnvKind {
        match self {
            Instance::Maze(_) => EnvKind::FrozenLake,
            Instance::Fetch(_) => EnvKind::MiniBehavior,
            Instance::Table(_) => EnvKind::LanguageTable,
        }
    }

    pub fn initial_obs(&self) -> Observation {
        match self {
            Instance::Maze(i) => Observation::Maze(i.initial_obs()),
            Instance::Fetch(i) => Observation::Fetch(i.initial_obs()),
            Instance::Table(i) => Observation::Table(i.initial.clone()),
        }
    }

    pub fn goal(&self) -> Goal {
        match self {
            Instance::Maze(_) => Goal::ReachGift,
            Instance::Fetch(_) => Goal::AppleOnTable,
            Instance::Table(i) => Goal::TargetConfig(i.goal.clone()),
        }
    }

    /// Ground-truth transition. Only the table consumes `rng`.
    pub fn step<R: Rng + ?Sized>(
        &self,
        obs: &Observation,
        action: &Action,
        rng: &mut R,
    ) -> Result<Observation, EnvError> {
        match (self, obs) {
            (Instance::Maze(i), Observation::Maze(o)) => {
                maze_step(i, o, action).map(Observation::Maze)
            }
            (Instance::Fetch(i), Observation::Fetch(o)) => {
                fetch_step(i, o, action).map(Observation::Fetch)
            }
            (Instance::Table(_), Observation::Table(o)) => {
                table_step(o, action, rng).map(Observation::Table)
            }
            _ => Err(EnvError::WrongObservation(self.kind())),
        }
    }

    /// Whether `candidate` is a ground-truth outcome of `action` from `obs`.
    pub fn valid_outcome(
        &self,
        obs: &Observation,
        action: &Action,
        candidate: &Observation,
    ) -> bool {
        match (self, obs, candidate) {
            (Instance::Table(_), Observation::Table(o), Observation::Table(c)) => {
                table_valid_next(o, action, c)
            }
            (Instance::Table(_), _, _) => false,
            _ => self
                .step(obs, action, &mut scratch_rng())
                .is_ok_and(|next| next == *candidate),
        }
    }

    pub fn value_oracle(&self, obs: &Observation, goal: &Goal) -> ValueEstimate {
        match (self, obs, goal) {
            (Instance::Maze(i), Observation::Maze(o), Goal::ReachGift) => maze_value_oracle(i, o),
            (Instance::Fetch(i), Observation::Fetch(o), Goal::AppleOnTable) => {
                fetch_value_oracle(i, o)
            }
            (Instance::Table(_), Observation::Table(o), Goal::TargetConfig(g)) => {
                table_value_oracle(o, g)
            }
            _ => ValueEstimate::infeasible(),
        }
    }

    pub fn legal_actions(&self, obs: &Observation) -> Vec<Action> {
        match obs {
            Observation::Table(o) if self.kind() == EnvKind::LanguageTable => {
                table::table_legal_actions(o)
            }
            o if o.kind() == self.kind() => self.kind().alphabet(),
            _ => Vec::new(),
        }
    }

    pub fn goal_reached(&self, obs: &Observation, goal: &Goal) -> bool {
        match (obs, goal) {
            (Observation::Maze(o), Goal::ReachGift) => o.status == MazeStatus::AtGoal,
            (Observation::Fetch(o), Goal::AppleOnTable) => o.apple_on_table(),
            (Observation::Table(o), Goal::TargetConfig(g)) => table::table_goal_reached(o, g),
            _ => false,
        }
    }

    /// States no action can leave: a maze frame that is trapped or at the gift.
    pub fn is_absorbing(&self, obs: &Observation) -> bool {
        matches!(obs, Observation::Maze(o) if o.status != MazeStatus::Alive)
    }

    /// The form an exact inverse model reports for `action` taken at `obs`.
    ///
    /// Deterministic no-ops (clamped moves, blocked forwards, failed pickups)
    /// read as [`Action::NoChange`]; a move onto a shared slot reads as a
    /// move onto that slot's representative block.
    pub fn canonical_action(&self, obs: &Observation, action: &Action) -> Action {
        match (obs, *action) {
            (Observation::Table(o), Action::MoveBlockToBlock { src, dst }) => o
                .get(dst)
                .and_then(|p| table::slot_representative(o, p.slot, src))
                .map_or(*action, |rep| Action::MoveBlockToBlock { src, dst: rep }),
            (Observation::Table(_), _) => *action,
            _ => match self.step(obs, action, &mut scratch_rng()) {
                Ok(next) if next == *obs => Action::NoChange,
                _ => *action,
            },
        }
    }

    /// Symbolic diff explanation: `NoChange` for identical frames, the
    /// canonical action whose ground-truth effect yields `next`, or
    /// `Inexplicable` when no single action does.
    pub fn explain_transition(&self, obs: &Observation, next: &Observation) -> Action {
        if obs == next {
            return Action::NoChange;
        }
        self.kind()
            .alphabet()
            .into_iter()
            .find(|a| self.valid_outcome(obs, a, next))
            .map_or(Action::Inexplicable, |a| self.canonical_action(obs, &a))
    }

    /// Key under which exhaustive search treats two frames as the same state.
    pub fn search_key(&self, obs: &Observation) -> String {
        match obs {
            Observation::Table(o) => format!("{:?}", o.slot_key()),
            _ => obs.canonical_key(),
        }
    }
}

pub fn legal_actions(instance: &Instance, obs: &Observation) -> Vec<Action> {
    instance.legal_actions(obs)
}

pub fn goal_reached(instance: &Instance, obs: &Observation, goal: &Goal) -> bool {
    instance.goal_reached(obs, goal)
}

#[cfg(test)]
pub(crate) mod fixtures {
    pub use crate::harness::golden::{
        fetch_instance as golden_fetch, maze_instance as golden_maze,
        table_instance as golden_table,
    };
}
