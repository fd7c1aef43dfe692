//! Mini-BEHAVIOR-style fetch task: carry the apple to the table.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::grid::Cell;
use super::EnvError;
use crate::domain::{Action, Direction, EnvKind, Side, ValueComponents, ValueEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pose {
    pub cell: Cell,
    pub facing: Direction,
}

impl Pose {
    pub fn new(cell: Cell, facing: Direction) -> Self {
        Self { cell, facing }
    }

    pub fn ahead(&self) -> Cell {
        self.cell.offset(self.facing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchInstance {
    pub rows: i32,
    pub cols: i32,
    pub table_cells: BTreeSet<Cell>,
    pub apple_start: Cell,
    pub agent_start: Pose,
}

/// Where an apple is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApplePlace {
    Cell(Cell),
    Carried,
    OnTable,
}

/// Symbolic fetch frame. A faithful frame holds exactly one apple entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FetchObs {
    pub agent: Pose,
    pub apples: Vec<ApplePlace>,
}

impl FetchObs {
    pub fn carrying(&self) -> bool {
        self.apples.contains(&ApplePlace::Carried)
    }

    pub fn apple_on_table(&self) -> bool {
        self.apples.contains(&ApplePlace::OnTable)
    }

    pub fn apple_cell(&self) -> Option<Cell> {
        self.apples.iter().find_map(|p| match p {
            ApplePlace::Cell(c) => Some(*c),
            _ => None,
        })
    }

    fn apple_cells(&self) -> BTreeSet<Cell> {
        self.apples
            .iter()
            .filter_map(|p| match p {
                ApplePlace::Cell(c) => Some(*c),
                _ => None,
            })
            .collect()
    }
}

impl FetchInstance {
    pub fn new(
        rows: i32,
        cols: i32,
        table_cells: BTreeSet<Cell>,
        apple_start: Cell,
        agent_start: Pose,
    ) -> Result<Self, EnvError> {
        let inst = Self {
            rows,
            cols,
            table_cells,
            apple_start,
            agent_start,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |msg: String| Err(EnvError::InvalidInstance(msg));
        if self.rows <= 0 || self.cols <= 0 {
            return bad(format!("grid size {}x{}", self.rows, self.cols));
        }
        if self.table_cells.is_empty() {
            return bad("no table cells".into());
        }
        for c in self
            .table_cells
            .iter()
            .chain([&self.apple_start, &self.agent_start.cell])
        {
            if !c.in_bounds(self.rows, self.cols) {
                return bad(format!("cell {c} out of bounds"));
            }
        }
        if self.table_cells.contains(&self.apple_start)
            || self.table_cells.contains(&self.agent_start.cell)
        {
            return bad("apple or agent on the table".into());
        }
        if self.apple_start == self.agent_start.cell {
            return bad("agent starts on the apple".into());
        }
        if fetch_value_oracle(self, &self.initial_obs()).is_infeasible() {
            return bad("apple cannot be delivered".into());
        }
        Ok(())
    }

    pub fn initial_obs(&self) -> FetchObs {
        FetchObs {
            agent: self.agent_start,
            apples: vec![ApplePlace::Cell(self.apple_start)],
        }
    }

    pub fn is_free(&self, cell: Cell, blocked: &BTreeSet<Cell>) -> bool {
        cell.in_bounds(self.rows, self.cols)
            && !self.table_cells.contains(&cell)
            && !blocked.contains(&cell)
    }
}

pub fn fetch_step(
    inst: &FetchInstance,
    obs: &FetchObs,
    action: &Action,
) -> Result<FetchObs, EnvError> {
    let mut next = obs.clone();
    match *action {
        Action::Turn(Side::Left) => next.agent.facing = obs.agent.facing.turned_left(),
        Action::Turn(Side::Right) => next.agent.facing = obs.agent.facing.turned_right(),
        Action::MoveForward => {
            let ahead = obs.agent.ahead();
            if inst.is_free(ahead, &obs.apple_cells()) {
                next.agent.cell = ahead;
            }
        }
        Action::PickUpApple => {
            let ahead = obs.agent.ahead();
            if !obs.carrying() {
                if let Some(slot) = next
                    .apples
                    .iter_mut()
                    .find(|p| **p == ApplePlace::Cell(ahead))
                {
                    *slot = ApplePlace::Carried;
                }
            }
        }
        Action::DropAppleOnTable => {
            if inst.table_cells.contains(&obs.agent.ahead()) {
                if let Some(slot) = next.apples.iter_mut().find(|p| **p == ApplePlace::Carried) {
                    *slot = ApplePlace::OnTable;
                }
            }
        }
        _ => {
            return Err(EnvError::WrongEnvironmentAction {
                action: *action,
                env: EnvKind::MiniBehavior,
            })
        }
    }
    Ok(next)
}

fn pose_neighbors(inst: &FetchInstance, pose: Pose, blocked: &BTreeSet<Cell>) -> [Pose; 3] {
    let ahead = pose.ahead();
    let forward = if inst.is_free(ahead, blocked) {
        Pose::new(ahead, pose.facing)
    } else {
        pose
    };
    [
        Pose::new(pose.cell, pose.facing.turned_left()),
        Pose::new(pose.cell, pose.facing.turned_right()),
        forward,
    ]
}

/// BFS distances over poses using only turns and forward moves.
fn pose_distances(
    inst: &FetchInstance,
    from: Pose,
    blocked: &BTreeSet<Cell>,
) -> HashMap<Pose, u32> {
    let mut dist = HashMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(pose) = queue.pop_front() {
        let d = dist[&pose];
        for next in pose_neighbors(inst, pose, blocked) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(next) {
                e.insert(d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

/// Moves needed to face a table cell, plus the drop itself.
fn steps_to_drop(inst: &FetchInstance, from: Pose, blocked: &BTreeSet<Cell>) -> Option<u32> {
    pose_distances(inst, from, blocked)
        .into_iter()
        .filter(|(p, _)| inst.table_cells.contains(&p.ahead()))
        .map(|(_, d)| d + 1)
        .min()
}

/// `(pickup, drop)` for one apple lying at `apple`, minimizing the total and
/// then the drop share.
fn fetch_split(
    inst: &FetchInstance,
    from: Pose,
    apple: Cell,
    others: &BTreeSet<Cell>,
) -> Option<(u32, u32)> {
    let mut blocked = others.clone();
    blocked.insert(apple);
    let approach = pose_distances(inst, from, &blocked);
    approach
        .into_iter()
        .filter(|(p, _)| p.ahead() == apple)
        .filter_map(|(p, d)| {
            let drop = steps_to_drop(inst, p, others)?;
            Some((d + 1, drop))
        })
        .min_by_key(|&(pickup, drop)| (pickup + drop, drop))
}

/// Exact minimum number of actions to get an apple onto the table, with the
/// pickup/drop split. 0 once any apple is on the table; 100 if impossible.
pub fn fetch_value_oracle(inst: &FetchInstance, obs: &FetchObs) -> ValueEstimate {
    if obs.apple_on_table() {
        return ValueEstimate {
            steps_remaining: 0,
            components: Some(ValueComponents { pickup: 0, drop: 0 }),
        };
    }
    let cells = obs.apple_cells();
    let mut best: Option<(u32, u32)> = None;
    for place in &obs.apples {
        let split = match place {
            ApplePlace::Carried => steps_to_drop(inst, obs.agent, &cells).map(|d| (0, d)),
            ApplePlace::Cell(c) => {
                let mut others = cells.clone();
                others.remove(c);
                fetch_split(inst, obs.agent, *c, &others)
            }
            ApplePlace::OnTable => unreachable!("handled above"),
        };
        if let Some(s) = split {
            if best.is_none_or(|b| (s.0 + s.1, s.1) < (b.0 + b.1, b.1)) {
                best = Some(s);
            }
        }
    }
    match best {
        Some((pickup, drop)) => {
            let mut v = ValueEstimate::steps(pickup + drop);
            v.components = Some(ValueComponents { pickup, drop });
            v
        }
        None => ValueEstimate::infeasible(),
    }
}
