//! FrozenLake-style maze: reach the gift without stepping on a trap.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::grid::Cell;
use super::EnvError;
use crate::domain::{Action, Direction, EnvKind, ValueEstimate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MazeInstance {
    pub rows: i32,
    pub cols: i32,
    pub traps: BTreeSet<Cell>,
    pub start: Cell,
    pub gift: Cell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MazeStatus {
    Alive,
    Trapped,
    AtGoal,
}

/// Symbolic maze frame. `gifts` lists every gift drawn in the frame; a
/// faithful frame has exactly one, at the instance's gift cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MazeObs {
    pub pos: Cell,
    pub status: MazeStatus,
    pub gifts: Vec<Cell>,
}

impl MazeInstance {
    pub fn new(
        rows: i32,
        cols: i32,
        traps: BTreeSet<Cell>,
        start: Cell,
        gift: Cell,
    ) -> Result<Self, EnvError> {
        let inst = Self {
            rows,
            cols,
            traps,
            start,
            gift,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |msg: String| Err(EnvError::InvalidInstance(msg));
        if self.rows <= 0 || self.cols <= 0 {
            return bad(format!("maze size {}x{}", self.rows, self.cols));
        }
        if self.start == self.gift {
            return bad("start equals gift".into());
        }
        for c in self.traps.iter().chain([&self.start, &self.gift]) {
            if !c.in_bounds(self.rows, self.cols) {
                return bad(format!("cell {c} out of bounds"));
            }
        }
        if self.traps.contains(&self.start) || self.traps.contains(&self.gift) {
            return bad("start or gift on a trap".into());
        }
        if shortest_path(self, self.start, &[self.gift]).is_none() {
            return bad("gift unreachable from start".into());
        }
        Ok(())
    }

    pub fn status_at(&self, cell: Cell) -> MazeStatus {
        if self.traps.contains(&cell) {
            MazeStatus::Trapped
        } else if cell == self.gift {
            MazeStatus::AtGoal
        } else {
            MazeStatus::Alive
        }
    }

    pub fn initial_obs(&self) -> MazeObs {
        MazeObs {
            pos: self.start,
            status: self.status_at(self.start),
            gifts: vec![self.gift],
        }
    }

    /// One move, clamped at the grid edge.
    pub fn moved(&self, pos: Cell, dir: Direction) -> Cell {
        let next = pos.offset(dir);
        if next.in_bounds(self.rows, self.cols) {
            next
        } else {
            pos
        }
    }
}

pub fn maze_step(inst: &MazeInstance, obs: &MazeObs, action: &Action) -> Result<MazeObs, EnvError> {
    let Action::MazeMove(dir) = *action else {
        return Err(EnvError::WrongEnvironmentAction {
            action: *action,
            env: EnvKind::FrozenLake,
        });
    };
    if obs.status != MazeStatus::Alive {
        return Err(EnvError::SteppingFromTerminal);
    }
    let pos = inst.moved(obs.pos, dir);
    Ok(MazeObs {
        pos,
        status: inst.status_at(pos),
        gifts: obs.gifts.clone(),
    })
}

/// Trap-avoiding BFS distance from `from` to the nearest of `targets`.
fn shortest_path(inst: &MazeInstance, from: Cell, targets: &[Cell]) -> Option<u32> {
    if inst.traps.contains(&from) {
        return None;
    }
    if targets.contains(&from) {
        return Some(0);
    }
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([(from, 0u32)]);
    while let Some((cell, dist)) = queue.pop_front() {
        for dir in Direction::ALL {
            let next = inst.moved(cell, dir);
            if inst.traps.contains(&next) || !seen.insert(next) {
                continue;
            }
            if targets.contains(&next) {
                return Some(dist + 1);
            }
            queue.push_back((next, dist + 1));
        }
    }
    None
}

/// Steps to the nearest drawn gift; 100 when trapped or cut off.
pub fn maze_value_oracle(inst: &MazeInstance, obs: &MazeObs) -> ValueEstimate {
    if obs.status == MazeStatus::Trapped || inst.traps.contains(&obs.pos) {
        return ValueEstimate::infeasible();
    }
    match shortest_path(inst, obs.pos, &obs.gifts) {
        Some(d) => ValueEstimate::steps(d),
        None => ValueEstimate::infeasible(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::INFEASIBLE;

    fn golden() -> MazeInstance {
        MazeInstance::new(
            3,
            3,
            BTreeSet::from([Cell::new(1, 2)]),
            Cell::new(0, 0),
            Cell::new(2, 2),
        )
        .unwrap()
    }

    fn at(inst: &MazeInstance, pos: Cell) -> MazeObs {
        MazeObs {
            pos,
            status: inst.status_at(pos),
            gifts: vec![inst.gift],
        }
    }

    fn go(d: Direction) -> Action {
        Action::MazeMove(d)
    }

    #[test]
    fn reference_moves() {
        let inst = golden();
        let next = maze_step(&inst, &at(&inst, Cell::new(0, 0)), &go(Direction::Down)).unwrap();
        assert_eq!(
            (next.pos, next.status),
            (Cell::new(1, 0), MazeStatus::Alive)
        );
        let clamped = maze_step(&inst, &at(&inst, Cell::new(0, 0)), &go(Direction::Up)).unwrap();
        assert_eq!(
            (clamped.pos, clamped.status),
            (Cell::new(0, 0), MazeStatus::Alive)
        );
        let trapped = maze_step(&inst, &at(&inst, Cell::new(0, 2)), &go(Direction::Down)).unwrap();
        assert_eq!(
            (trapped.pos, trapped.status),
            (Cell::new(1, 2), MazeStatus::Trapped)
        );
    }

    #[test]
    fn terminal_and_foreign_actions_error() {
        let inst = golden();
        let trapped = at(&inst, Cell::new(1, 2));
        assert_eq!(
            maze_step(&inst, &trapped, &go(Direction::Up)),
            Err(EnvError::SteppingFromTerminal)
        );
        let done = at(&inst, inst.gift);
        assert_eq!(
            maze_step(&inst, &done, &go(Direction::Up)),
            Err(EnvError::SteppingFromTerminal)
        );
        assert!(matches!(
            maze_step(&inst, &at(&inst, Cell::new(0, 0)), &Action::MoveForward),
            Err(EnvError::WrongEnvironmentAction { .. })
        ));
    }

    #[test]
    fn oracle_values() {
        let inst = golden();
        // Hand-checked BFS: (0,0) -> (1,0) -> (2,0) -> (2,1) -> (2,2).
        assert_eq!(
            maze_value_oracle(&inst, &at(&inst, Cell::new(0, 0))).steps_remaining,
            4
        );
        assert_eq!(
            maze_value_oracle(&inst, &at(&inst, inst.gift)).steps_remaining,
            0
        );
        assert_eq!(
            maze_value_oracle(&inst, &at(&inst, Cell::new(1, 2))).steps_remaining,
            INFEASIBLE
        );
    }

    #[test]
    fn enclosed_cell_is_infeasible() {
        // (0,0) walled in by traps at (0,1) and (1,0): the instance is unsolvable.
        let traps = BTreeSet::from([Cell::new(0, 1), Cell::new(1, 0)]);
        assert!(MazeInstance::new(3, 3, traps.clone(), Cell::new(0, 0), Cell::new(2, 2)).is_err());
        let inst = MazeInstance {
            rows: 3,
            cols: 3,
            traps,
            start: Cell::new(2, 0),
            gift: Cell::new(2, 2),
        };
        assert_eq!(
            maze_value_oracle(&inst, &at(&inst, Cell::new(0, 0))).steps_remaining,
            INFEASIBLE
        );
    }

    #[test]
    fn validation() {
        assert!(
            MazeInstance::new(3, 3, BTreeSet::new(), Cell::new(0, 0), Cell::new(0, 0)).is_err()
        );
        assert!(
            MazeInstance::new(3, 3, BTreeSet::new(), Cell::new(0, 0), Cell::new(3, 0)).is_err()
        );
        assert!(MazeInstance::new(
            3,
            3,
            BTreeSet::from([Cell::new(0, 0)]),
            Cell::new(0, 0),
            Cell::new(1, 1)
        )
        .is_err());
    }
}
