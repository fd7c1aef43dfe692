use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::NoiseProfile;
use crate::domain::{Action, Direction, EnvKind, SlotId, Stream};
use crate::envs::{
    fetch_step, table_valid_next, ApplePlace, BlockPlacement, Cell, EnvError, FetchInstance,
    FetchObs, Instance, MazeInstance, MazeObs, Observation, Placement, SubOffset, TableObs,
};

/// Which forward-model behaviour produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    Valid,
    WrongEffect,
    Delete,
    Duplicate,
}

impl ErrorCategory {
    pub const ALL: [ErrorCategory; 4] = [
        ErrorCategory::Valid,
        ErrorCategory::WrongEffect,
        ErrorCategory::Delete,
        ErrorCategory::Duplicate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ErrorCategory::Valid => "valid",
            ErrorCategory::WrongEffect => "wrong_effect",
            ErrorCategory::Delete => "delete",
            ErrorCategory::Duplicate => "duplicate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub obs: Observation,
    /// The category actually realized. A requested corruption that has no
    /// possible output (nothing to delete, no wrong outcome) degrades to `Valid`.
    pub category: ErrorCategory,
}

fn draw_category(noise: &NoiseProfile, rng: &mut Stream) -> ErrorCategory {
    let u: f64 = rng.gen();
    let mut edge = noise.p_wrong_effect;
    if u < edge {
        return ErrorCategory::WrongEffect;
    }
    edge += noise.p_delete;
    if u < edge {
        return ErrorCategory::Delete;
    }
    edge += noise.p_duplicate;
    if u < edge {
        return ErrorCategory::Duplicate;
    }
    ErrorCategory::Valid
}

/// One forward-model sample for `action` at `obs`.
pub fn forward_predict(
    instance: &Instance,
    obs: &Observation,
    action: &Action,
    noise: &NoiseProfile,
    rng: &mut Stream,
) -> Result<Prediction, EnvError> {
    let category = draw_category(noise, rng);
    let truth = instance.step(obs, action, rng)?;
    let corrupted = match category {
        ErrorCategory::Valid => None,
        ErrorCategory::WrongEffect => wrong_effect(instance, obs, action, &truth, rng),
        ErrorCategory::Delete => delete_object(&truth, rng),
        ErrorCategory::Duplicate => duplicate_object(instance, &truth, rng),
    };
    Ok(match corrupted {
        Some(obs) => Prediction { obs, category },
        None => Prediction {
            obs: truth,
            category: ErrorCategory::Valid,
        },
    })
}

fn wrong_effect(
    instance: &Instance,
    obs: &Observation,
    action: &Action,
    truth: &Observation,
    rng: &mut Stream,
) -> Option<Observation> {
    let mut options: Vec<Observation> = match (instance, obs) {
        (Instance::Maze(i), Observation::Maze(o)) => maze_wrong(i, o),
        (Instance::Fetch(i), Observation::Fetch(o)) => fetch_wrong(i, o),
        (Instance::Table(_), Observation::Table(o)) => table_wrong(o, action, rng)
            .into_iter()
            .filter(|c| !table_valid_next(o, action, c))
            .map(Observation::Table)
            .collect(),
        _ => Vec::new(),
    };
    options.retain(|c| c != truth && c != obs);
    options.sort();
    options.dedup();
    options.choose(rng).cloned()
}

/// The agent lands where some other direction would have taken it.
fn maze_wrong(inst: &MazeInstance, obs: &MazeObs) -> Vec<Observation> {
    Direction::ALL
        .iter()
        .map(|&d| {
            let pos = inst.moved(obs.pos, d);
            Observation::Maze(MazeObs {
                pos,
                status: inst.status_at(pos),
                gifts: obs.gifts.clone(),
            })
        })
        .collect()
}

/// Other actions' effects, plus a forward move that ignores obstacles and a
/// pickup/drop that ignores preconditions.
fn fetch_wrong(inst: &FetchInstance, obs: &FetchObs) -> Vec<Observation> {
    let mut out: Vec<FetchObs> = EnvKind::MiniBehavior
        .alphabet()
        .iter()
        .filter_map(|a| fetch_step(inst, obs, a).ok())
        .collect();
    let ahead = obs.agent.ahead();
    if ahead.in_bounds(inst.rows, inst.cols) {
        let mut forced = obs.clone();
        forced.agent.cell = ahead;
        out.push(forced);
    }
    if let Some(first) = obs.apples.first() {
        let mut flipped = obs.clone();
        flipped.apples[0] = match first {
            ApplePlace::Carried => ApplePlace::OnTable,
            _ => ApplePlace::Carried,
        };
        out.push(flipped);
    }
    out.into_iter().map(Observation::Fetch).collect()
}

fn place(obs: &TableObs, index: usize, slot: SlotId, rng: &mut Stream) -> TableObs {
    let mut next = obs.clone();
    let block = next.placement[index].block;
    let occupied = obs.blocks_in(slot).any(|e| e.block != block);
    let offset = if occupied {
        *SubOffset::AROUND.choose(rng).expect("four offsets")
    } else {
        SubOffset::Anchor
    };
    let p = Placement::new(slot, offset);
    next.placement[index].slot = p.slot;
    next.placement[index].sub_offset = p.sub_offset;
    next.placement.sort();
    next
}

/// Moves the wrong block to the intended slot, or the intended block to a
/// wrong slot.
fn table_wrong(obs: &TableObs, action: &Action, rng: &mut Stream) -> Vec<TableObs> {
    let (src, dest) = match *action {
        Action::MoveBlockToBlock { src, dst } => match obs.get(dst) {
            Some(p) => (src, p.slot),
            None => return Vec::new(),
        },
        Action::MoveBlockToPosition { src, dst } => (src, dst),
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for (i, e) in obs.placement.iter().enumerate() {
        if e.block != src && e.slot != dest {
            out.push(place(obs, i, dest, rng));
        }
    }
    if let Some(i) = obs.placement.iter().position(|e| e.block == src) {
        for &slot in SlotId::ALL.iter().filter(|&&s| s != dest) {
            out.push(place(obs, i, slot, rng));
        }
    }
    out
}

fn delete_object(obs: &Observation, rng: &mut Stream) -> Option<Observation> {
    let mut next = obs.clone();
    let removed = match &mut next {
        Observation::Maze(o) => remove_random(&mut o.gifts, rng),
        Observation::Fetch(o) => remove_random(&mut o.apples, rng),
        Observation::Table(o) => remove_random(&mut o.placement, rng),
    };
    removed.then_some(next)
}

fn remove_random<T>(items: &mut Vec<T>, rng: &mut Stream) -> bool {
    if items.is_empty() {
        return false;
    }
    let i = rng.gen_range(0..items.len());
    items.remove(i);
    true
}

fn duplicate_object(
    instance: &Instance,
    obs: &Observation,
    rng: &mut Stream,
) -> Option<Observation> {
    let mut next = obs.clone();
    match (instance, &mut next) {
        (Instance::Maze(i), Observation::Maze(o)) => {
            let free: Vec<Cell> = grid_cells(i.rows, i.cols)
                .filter(|c| !o.gifts.contains(c))
                .collect();
            o.gifts.push(*free.choose(rng)?);
        }
        (Instance::Fetch(i), Observation::Fetch(o)) => {
            let taken: Vec<Cell> = o
                .apples
                .iter()
                .filter_map(|p| match p {
                    ApplePlace::Cell(c) => Some(*c),
                    _ => None,
                })
                .collect();
            let free: Vec<Cell> = grid_cells(i.rows, i.cols)
                .filter(|c| !i.table_cells.contains(c) && *c != o.agent.cell && !taken.contains(c))
                .collect();
            if o.apples.is_empty() {
                return None;
            }
            o.apples.push(ApplePlace::Cell(*free.choose(rng)?));
        }
        (Instance::Table(_), Observation::Table(o)) => {
            let source = *o.placement.choose(rng)?;
            let slot = *SlotId::ALL
                .iter()
                .filter(|&&s| s != source.slot)
                .collect::<Vec<_>>()
                .choose(rng)?;
            let offset = if o.is_empty_slot(*slot) {
                SubOffset::Anchor
            } else {
                *SubOffset::AROUND.choose(rng).expect("four offsets")
            };
            o.placement.push(BlockPlacement {
                block: source.block,
                slot: *slot,
                sub_offset: offset,
            });
            o.placement.sort();
        }
        _ => return None,
    }
    Some(next)
}

fn grid_cells(rows: i32, cols: i32) -> impl Iterator<Item = Cell> {
    (0..rows).flat_map(move |r| (0..cols).map(move |c| Cell::new(r, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{derive_stream, RngStreamKey, StreamRole};
    use crate::envs::fixtures::*;

    fn rng(seed: u64) -> Stream {
        derive_stream(RngStreamKey::new(seed, 0, StreamRole::Forward))
    }

    fn forced(p_wrong: f64, p_del: f64, p_dup: f64) -> NoiseProfile {
        NoiseProfile {
            p_wrong_effect: p_wrong,
            p_delete: p_del,
            p_duplicate: p_dup,
            ..NoiseProfile::oracle()
        }
    }

    #[test]
    fn oracle_mode_is_ground_truth() {
        let maze = golden_maze();
        let o = maze.initial_obs();
        let p = forward_predict(
            &maze,
            &o,
            &Action::MazeMove(Direction::Down),
            &NoiseProfile::oracle(),
            &mut rng(0),
        )
        .unwrap();
        let Observation::Maze(m) = &p.obs else {
            panic!()
        };
        assert_eq!(m.pos, Cell::new(1, 0));
        assert_eq!(p.category, ErrorCategory::Valid);
        let table = golden_table();
        let t0 = table.initial_obs();
        for a in table.legal_actions(&t0) {
            let p = forward_predict(&table, &t0, &a, &NoiseProfile::oracle(), &mut rng(1)).unwrap();
            assert!(table.valid_outcome(&t0, &a, &p.obs), "{a}");
        }
    }

    #[test]
    fn wrong_effect_is_never_valid() {
        for inst in [golden_maze(), golden_fetch(), golden_table()] {
            let o = inst.initial_obs();
            for (seed, a) in inst.legal_actions(&o).into_iter().enumerate() {
                let p =
                    forward_predict(&inst, &o, &a, &forced(1.0, 0.0, 0.0), &mut rng(seed as u64))
                        .unwrap();
                assert_eq!(p.category, ErrorCategory::WrongEffect, "{a}");
                assert!(!inst.valid_outcome(&o, &a, &p.obs), "{a}");
            }
        }
        let maze = golden_maze();
        let p = forward_predict(
            &maze,
            &maze.initial_obs(),
            &Action::MazeMove(Direction::Right),
            &forced(1.0, 0.0, 0.0),
            &mut rng(3),
        )
        .unwrap();
        let Observation::Maze(m) = &p.obs else {
            panic!()
        };
        assert_ne!(m.pos, Cell::new(0, 1));
    }

    #[test]
    fn delete_and_duplicate_change_counts() {
        let table = golden_table();
        let o = table.initial_obs();
        let a = table.legal_actions(&o)[0];
        let del = forward_predict(&table, &o, &a, &forced(0.0, 1.0, 0.0), &mut rng(4)).unwrap();
        let Observation::Table(t) = &del.obs else {
            panic!()
        };
        assert_eq!(t.placement.len(), 7);
        assert_eq!(
            del.obs
                .object_counts()
                .values()
                .filter(|&&n| n == 0)
                .count(),
            1
        );
        let dup = forward_predict(&table, &o, &a, &forced(0.0, 0.0, 1.0), &mut rng(5)).unwrap();
        assert_eq!(
            dup.obs
                .object_counts()
                .values()
                .filter(|&&n| n == 2)
                .count(),
            1
        );
        for inst in [golden_maze(), golden_fetch()] {
            let o = inst.initial_obs();
            let a = inst.legal_actions(&o)[0];
            let base = inst.step(&o, &a, &mut rng(0)).unwrap().object_counts();
            for noise in [forced(0.0, 1.0, 0.0), forced(0.0, 0.0, 1.0)] {
                let p = forward_predict(&inst, &o, &a, &noise, &mut rng(6)).unwrap();
                assert_ne!(p.obs.object_counts(), base);
            }
        }
    }

    #[test]
    fn category_rates_are_calibrated() {
        let noise = forced(0.2, 0.1, 0.15);
        let maze = golden_maze();
        let o = maze.initial_obs();
        let mut r = rng(42);
        let mut counts = [0usize; 4];
        let n = 10_000;
        for _ in 0..n {
            let p = forward_predict(
                &maze,
                &o,
                &Action::MazeMove(Direction::Down),
                &noise,
                &mut r,
            )
            .unwrap();
            counts[p.category as usize] += 1;
        }
        let expected = [noise.p_valid(), 0.2, 0.1, 0.15];
        for (c, e) in counts.iter().zip(expected) {
            assert!((*c as f64 / n as f64 - e).abs() <= 0.02, "{counts:?}");
        }
    }
}
