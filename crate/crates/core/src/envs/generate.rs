//! Random solvable instance generation.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fetch::{fetch_value_oracle, FetchInstance, Pose};
use super::grid::{all_cells, Cell};
use super::maze::{maze_value_oracle, MazeInstance};
use super::table::{table_step, TableInstance, TableObs};
use super::{EnvError, Instance};
use crate::domain::{Action, BlockId, Direction, EnvKind, SlotId, TargetConfig};

/// Inclusive integer range, written `[min, max]` in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct IntRange {
    pub min: i32,
    pub max: i32,
}

impl IntRange {
    pub const fn new(min: i32, max: i32) -> Self {
        Self { min, max }
    }

    pub const fn exactly(v: i32) -> Self {
        Self { min: v, max: v }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i32 {
        rng.gen_range(self.min..=self.max)
    }

    fn check(&self, what: &str, lo: i32, hi: i32) -> Result<(), EnvError> {
        if self.min > self.max || self.min < lo || self.max > hi {
            return Err(EnvError::InvalidParams(format!(
                "{what} range [{}, {}] must lie within [{lo}, {hi}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

impl From<[i32; 2]> for IntRange {
    fn from([min, max]: [i32; 2]) -> Self {
        IntRange { min, max }
    }
}

impl From<IntRange> for [i32; 2] {
    fn from(r: IntRange) -> Self {
        [r.min, r.max]
    }
}

/// Grid sides are capped at 10 so every finite distance stays below the
/// infeasibility sentinel.
const MAX_SIDE: i32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MazeParams {
    pub rows: IntRange,
    pub cols: IntRange,
    pub traps: IntRange,
}

impl Default for MazeParams {
    fn default() -> Self {
        Self {
            rows: IntRange::new(4, 6),
            cols: IntRange::new(4, 6),
            traps: IntRange::new(3, 6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchParams {
    pub rows: IntRange,
    pub cols: IntRange,
    /// Length of the straight table segment.
    pub table_len: IntRange,
}

impl Default for FetchParams {
    fn default() -> Self {
        Self {
            rows: IntRange::new(5, 7),
            cols: IntRange::new(5, 7),
            table_len: IntRange::new(1, 3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableParams {
    /// Blocks displaced from their goal slot in the initial configuration.
    pub misplaced: IntRange,
}

impl Default for TableParams {
    fn default() -> Self {
        Self {
            misplaced: IntRange::new(2, 6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvParams {
    pub maze: MazeParams,
    pub fetch: FetchParams,
    pub table: TableParams,
    pub max_retries: u32,
}

impl Default for EnvParams {
    fn default() -> Self {
        Self {
            maze: MazeParams::default(),
            fetch: FetchParams::default(),
            table: TableParams::default(),
            max_retries: 1000,
        }
    }
}

impl EnvParams {
    pub fn validate(&self, env: EnvKind) -> Result<(), EnvError> {
        match env {
            EnvKind::FrozenLake => {
                self.maze.rows.check("maze rows", 1, MAX_SIDE)?;
                self.maze.cols.check("maze cols", 1, MAX_SIDE)?;
                self.maze.traps.check("maze traps", 0, MAX_SIDE * MAX_SIDE)
            }
            EnvKind::MiniBehavior => {
                self.fetch.rows.check("fetch rows", 1, MAX_SIDE)?;
                self.fetch.cols.check("fetch cols", 1, MAX_SIDE)?;
                self.fetch.table_len.check("table length", 1, MAX_SIDE)
            }
            EnvKind::LanguageTable => {
                self.table
                    .misplaced
                    .check("misplaced blocks", 1, BlockId::ALL.len() as i32)
            }
        }
    }
}

/// Draws a solvable instance, retrying up to `params.max_retries` times.
pub fn random_instance<R: Rng + ?Sized>(
    env: EnvKind,
    params: &EnvParams,
    rng: &mut R,
) -> Result<Instance, EnvError> {
    params.validate(env)?;
    for _ in 0..params.max_retries.max(1) {
        let drawn = match env {
            EnvKind::FrozenLake => draw_maze(&params.maze, rng).map(Instance::Maze),
            EnvKind::MiniBehavior => draw_fetch(&params.fetch, rng).map(Instance::Fetch),
            EnvKind::LanguageTable => Some(Instance::Table(draw_table(&params.table, rng))),
        };
        if let Some(inst) = drawn {
            return Ok(inst);
        }
    }
    Err(EnvError::GenerationExhausted {
        env,
        attempts: params.max_retries.max(1),
    })
}

fn draw_maze<R: Rng + ?Sized>(p: &MazeParams, rng: &mut R) -> Option<MazeInstance> {
    let (rows, cols, n_traps) = (p.rows.sample(rng), p.cols.sample(rng), p.traps.sample(rng));
    let needed = n_traps as usize + 2;
    let cells = all_cells(rows, cols).choose_multiple(rng, needed);
    if cells.len() < needed {
        return None;
    }
    let mut cells = cells;
    cells.shuffle(rng);
    let inst = MazeInstance {
        rows,
        cols,
        start: cells[0],
        gift: cells[1],
        traps: cells[2..].iter().copied().collect(),
    };
    let reachable = !maze_value_oracle(&inst, &inst.initial_obs()).is_infeasible();
    reachable.then_some(inst)
}

fn draw_fetch<R: Rng + ?Sized>(p: &FetchParams, rng: &mut R) -> Option<FetchInstance> {
    let (rows, cols, len) = (
        p.rows.sample(rng),
        p.cols.sample(rng),
        p.table_len.sample(rng),
    );
    let horizontal = rng.gen_bool(0.5);
    let (span_r, span_c) = if horizontal { (1, len) } else { (len, 1) };
    if span_r > rows || span_c > cols {
        return None;
    }
    let r0 = rng.gen_range(0..=rows - span_r);
    let c0 = rng.gen_range(0..=cols - span_c);
    let table_cells: BTreeSet<Cell> = (0..span_r)
        .flat_map(|dr| (0..span_c).map(move |dc| Cell::new(r0 + dr, c0 + dc)))
        .collect();
    let free: Vec<Cell> = all_cells(rows, cols)
        .filter(|c| !table_cells.contains(c))
        .collect();
    let picks: Vec<Cell> = free.choose_multiple(rng, 2).copied().collect();
    if picks.len() < 2 {
        return None;
    }
    let facing = *Direction::ALL.choose(rng).expect("four directions");
    let inst = FetchInstance {
        rows,
        cols,
        table_cells,
        apple_start: picks[0],
        agent_start: Pose::new(picks[1], facing),
    };
    let solvable = !fetch_value_oracle(&inst, &inst.initial_obs()).is_infeasible();
    solvable.then_some(inst)
}

/// Random goal permutation, then `k` distinct blocks each moved once to a
/// slot other than their goal slot. Every misplaced block can always be
/// moved straight home (onto a block there or into the empty slot), so the
/// result is solvable in exactly `k` moves.
fn draw_table<R: Rng + ?Sized>(p: &TableParams, rng: &mut R) -> TableInstance {
    let mut slots = SlotId::ALL.to_vec();
    slots.shuffle(rng);
    let goal_map: BTreeMap<BlockId, SlotId> = BlockId::ALL.iter().copied().zip(slots).collect();
    let goal = TargetConfig::new(goal_map).expect("a permutation is a valid target");
    let mut obs = TableObs::from_config(&goal);
    let k = p.misplaced.sample(rng) as usize;
    for block in BlockId::ALL
        .choose_multiple(rng, k)
        .copied()
        .collect::<Vec<_>>()
    {
        let home = goal.slot_of(block);
        let dest = *SlotId::ALL
            .iter()
            .filter(|&&s| s != home)
            .collect::<Vec<_>>()
            .choose(rng)
            .expect("seven slots");
        let action = match obs
            .blocks_in(*dest)
            .map(|e| e.block)
            .collect::<Vec<_>>()
            .choose(rng)
        {
            Some(&onto) => Action::MoveBlockToBlock {
                src: block,
                dst: onto,
            },
            None => Action::MoveBlockToPosition {
                src: block,
                dst: *dest,
            },
        };
        obs = table_step(&obs, &action, rng).expect("scramble moves are legal");
    }
    TableInstance { initial: obs, goal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{derive_stream, RngStreamKey, StreamRole};
    use crate::envs::table::table_value_oracle;

    fn rng(seed: u64) -> crate::domain::Stream {
        derive_stream(RngStreamKey::new(seed, 0, StreamRole::Instance))
    }

    #[test]
    fn maze_is_solvable_and_reproducible() {
        let params = EnvParams {
            maze: MazeParams {
                rows: IntRange::exactly(5),
                cols: IntRange::exactly(5),
                traps: IntRange::exactly(4),
            },
            ..EnvParams::default()
        };
        for seed in 0..20 {
            let a = random_instance(EnvKind::FrozenLake, &params, &mut rng(seed)).unwrap();
            let b = random_instance(EnvKind::FrozenLake, &params, &mut rng(seed)).unwrap();
            assert_eq!(a, b);
            let Instance::Maze(m) = &a else { panic!() };
            assert_eq!(m.traps.len(), 4);
            m.validate().unwrap();
        }
    }

    #[test]
    fn overfull_maze_exhausts() {
        let params = EnvParams {
            maze: MazeParams {
                rows: IntRange::exactly(2),
                cols: IntRange::exactly(2),
                traps: IntRange::exactly(4),
            },
            ..EnvParams::default()
        };
        assert_eq!(
            random_instance(EnvKind::FrozenLake, &params, &mut rng(1)),
            Err(EnvError::GenerationExhausted {
                env: EnvKind::FrozenLake,
                attempts: 1000
            })
        );
    }

    #[test]
    fn fetch_instances_validate() {
        for seed in 0..20 {
            let Instance::Fetch(f) =
                random_instance(EnvKind::MiniBehavior, &EnvParams::default(), &mut rng(seed))
                    .unwrap()
            else {
                panic!()
            };
            f.validate().unwrap();
        }
    }

    #[test]
    fn table_scramble_hits_requested_count() {
        for k in 1..=8 {
            let params = EnvParams {
                table: TableParams {
                    misplaced: IntRange::exactly(k),
                },
                ..EnvParams::default()
            };
            let Instance::Table(t) =
                random_instance(EnvKind::LanguageTable, &params, &mut rng(k as u64)).unwrap()
            else {
                panic!()
            };
            assert!(t.initial.is_complete());
            assert_eq!(
                table_value_oracle(&t.initial, &t.goal).steps_remaining,
                k as u32
            );
            for slot in SlotId::ALL {
                let anchors = t
                    .initial
                    .blocks_in(slot)
                    .filter(|e| e.sub_offset == super::super::SubOffset::Anchor)
                    .count();
                assert!(anchors <= 1);
            }
        }
    }

    #[test]
    fn bad_ranges_are_rejected() {
        let params = EnvParams {
            table: TableParams {
                misplaced: IntRange::new(0, 9),
            },
            ..EnvParams::default()
        };
        assert!(matches!(
            random_instance(EnvKind::LanguageTable, &params, &mut rng(0)),
            Err(EnvError::InvalidParams(_))
        ));
    }
}
