//! Language-Table-style block rearrangement over eight named slots.
//!
//! Several blocks can share a slot: at most one sits on the slot's anchor,
//! the rest are placed at a compass offset around it.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EnvError;
use crate::domain::{Action, BlockId, EnvKind, SlotId, TargetConfig, ValueEstimate};

/// Remaining-steps estimates for this task never exceed this value.
pub const TABLE_VALUE_CAP: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubOffset {
    Anchor,
    North,
    East,
    South,
    West,
}

impl SubOffset {
    pub const AROUND: [SubOffset; 4] = [
        SubOffset::North,
        SubOffset::East,
        SubOffset::South,
        SubOffset::West,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub slot: SlotId,
    pub sub_offset: SubOffset,
}

impl Placement {
    pub fn new(slot: SlotId, sub_offset: SubOffset) -> Self {
        Self { slot, sub_offset }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockPlacement {
    pub block: BlockId,
    pub slot: SlotId,
    pub sub_offset: SubOffset,
}

impl BlockPlacement {
    pub fn placement(&self) -> Placement {
        Placement::new(self.slot, self.sub_offset)
    }
}

/// Symbolic tabletop frame. A faithful frame lists each of the eight blocks
/// exactly once; predicted frames may drop or repeat entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TableObs {
    pub placement: Vec<BlockPlacement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableInstance {
    pub initial: TableObs,
    pub goal: TargetConfig,
}

impl TableObs {
    pub fn new(entries: impl IntoIterator<Item = (BlockId, Placement)>) -> Self {
        let mut placement: Vec<_> = entries
            .into_iter()
            .map(|(block, p)| BlockPlacement {
                block,
                slot: p.slot,
                sub_offset: p.sub_offset,
            })
            .collect();
        placement.sort();
        Self { placement }
    }

    /// One block per slot, all anchored.
    pub fn from_config(config: &TargetConfig) -> Self {
        TableObs::new(
            config
                .iter()
                .map(|(b, s)| (b, Placement::new(s, SubOffset::Anchor))),
        )
    }

    pub fn get(&self, block: BlockId) -> Option<Placement> {
        self.placement
            .iter()
            .find(|e| e.block == block)
            .map(BlockPlacement::placement)
    }

    pub fn blocks_in(&self, slot: SlotId) -> impl Iterator<Item = &BlockPlacement> + '_ {
        self.placement.iter().filter(move |e| e.slot == slot)
    }

    pub fn is_empty_slot(&self, slot: SlotId) -> bool {
        self.blocks_in(slot).next().is_none()
    }

    /// True when each of the eight blocks appears exactly once.
    pub fn is_complete(&self) -> bool {
        self.placement.len() == BlockId::ALL.len()
            && self
                .placement
                .iter()
                .map(|e| e.block)
                .collect::<BTreeSet<_>>()
                .len()
                == BlockId::ALL.len()
    }

    pub fn present_blocks(&self) -> Vec<BlockId> {
        let set: BTreeSet<_> = self.placement.iter().map(|e| e.block).collect();
        set.into_iter().collect()
    }

    pub fn count_of(&self, block: BlockId) -> usize {
        self.placement.iter().filter(|e| e.block == block).count()
    }

    fn with(&self, block: BlockId, p: Placement) -> TableObs {
        let mut next = self.clone();
        if let Some(e) = next.placement.iter_mut().find(|e| e.block == block) {
            e.slot = p.slot;
            e.sub_offset = p.sub_offset;
        }
        next.placement.sort();
        next
    }

    /// Slot-only key; sub-offsets never affect legality, value or goal tests.
    pub fn slot_key(&self) -> Vec<(BlockId, SlotId)> {
        self.placement.iter().map(|e| (e.block, e.slot)).collect()
    }
}

/// Offsets a block-to-block move can land on. A block already sitting at an
/// offset in the destination slot must land on a different offset, so the
/// move always changes the frame.
pub fn landing_offsets(obs: &TableObs, src: BlockId, dst_slot: SlotId) -> Vec<SubOffset> {
    match obs.get(src) {
        Some(p) if p.slot == dst_slot && p.sub_offset != SubOffset::Anchor => SubOffset::AROUND
            .iter()
            .copied()
            .filter(|&o| o != p.sub_offset)
            .collect(),
        _ => SubOffset::AROUND.to_vec(),
    }
}

fn check_move(obs: &TableObs, action: &Action) -> Result<(), EnvError> {
    match *action {
        Action::MoveBlockToBlock { src, dst } => {
            if src == dst {
                return Err(EnvError::SelfMove(*action));
            }
            for b in [src, dst] {
                if obs.get(b).is_none() {
                    return Err(EnvError::MissingBlock(b));
                }
            }
            Ok(())
        }
        Action::MoveBlockToPosition { src, dst } => {
            if obs.get(src).is_none() {
                return Err(EnvError::MissingBlock(src));
            }
            if !obs.is_empty_slot(dst) {
                return Err(EnvError::DestinationOccupied(*action));
            }
            Ok(())
        }
        _ => Err(EnvError::WrongEnvironmentAction {
            action: *action,
            env: EnvKind::LanguageTable,
        }),
    }
}

pub fn table_step<R: Rng + ?Sized>(
    obs: &TableObs,
    action: &Action,
    rng: &mut R,
) -> Result<TableObs, EnvError> {
    check_move(obs, action)?;
    match *action {
        Action::MoveBlockToBlock { src, dst } => {
            let slot = obs.get(dst).expect("checked").slot;
            let offsets = landing_offsets(obs, src, slot);
            let offset = *offsets.choose(rng).expect("at least three offsets");
            Ok(obs.with(src, Placement::new(slot, offset)))
        }
        Action::MoveBlockToPosition { src, dst } => {
            Ok(obs.with(src, Placement::new(dst, SubOffset::Anchor)))
        }
        _ => unreachable!("checked"),
    }
}

/// Whether `candidate` is one of the outcomes `table_step` can produce.
pub fn table_valid_next(obs: &TableObs, action: &Action, candidate: &TableObs) -> bool {
    if check_move(obs, action).is_err() || !candidate.is_complete() || !obs.is_complete() {
        return false;
    }
    let (src, landing_ok): (BlockId, Box<dyn Fn(Placement) -> bool>) = match *action {
        Action::MoveBlockToBlock { src, dst } => {
            let slot = obs.get(dst).expect("checked").slot;
            let offsets = landing_offsets(obs, src, slot);
            (
                src,
                Box::new(move |p: Placement| p.slot == slot && offsets.contains(&p.sub_offset)),
            )
        }
        Action::MoveBlockToPosition { src, dst } => (
            src,
            Box::new(move |p: Placement| p == Placement::new(dst, SubOffset::Anchor)),
        ),
        _ => return false,
    };
    BlockId::ALL.iter().all(|&b| {
        let (Some(now), Some(then)) = (obs.get(b), candidate.get(b)) else {
            return false;
        };
        if b == src {
            landing_ok(then)
        } else {
            now == then
        }
    })
}

/// Number of drawn blocks not in their goal slot, capped at 10.
pub fn table_value_oracle(obs: &TableObs, goal: &TargetConfig) -> ValueEstimate {
    let misplaced = obs
        .placement
        .iter()
        .filter(|e| goal.slot_of(e.block) != e.slot)
        .count() as u32;
    ValueEstimate::steps(misplaced.min(TABLE_VALUE_CAP))
}

pub fn table_goal_reached(obs: &TableObs, goal: &TargetConfig) -> bool {
    obs.is_complete()
        && obs
            .placement
            .iter()
            .all(|e| goal.slot_of(e.block) == e.slot)
}

/// Every block-to-block pair plus moves into currently empty slots.
pub fn table_legal_actions(obs: &TableObs) -> Vec<Action> {
    let blocks = obs.present_blocks();
    let empty: Vec<SlotId> = SlotId::ALL
        .iter()
        .copied()
        .filter(|&s| obs.is_empty_slot(s))
        .collect();
    let mut out = Vec::new();
    for &src in &blocks {
        for &dst in &blocks {
            if src != dst {
                out.push(Action::MoveBlockToBlock { src, dst });
            }
        }
        for &dst in &empty {
            out.push(Action::MoveBlockToPosition { src, dst });
        }
    }
    out
}

/// The block a move onto `slot` is reported against: the anchored block if
/// there is one, else the first block (by id) other than `src`.
pub fn slot_representative(obs: &TableObs, slot: SlotId, src: BlockId) -> Option<BlockId> {
    let others: Vec<_> = obs.blocks_in(slot).filter(|e| e.block != src).collect();
    others
        .iter()
        .find(|e| e.sub_offset == SubOffset::Anchor)
        .or_else(|| others.iter().min_by_key(|e| e.block))
        .map(|e| e.block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{derive_stream, RngStreamKey, StreamRole};
    use BlockId::*;
    use SlotId::*;

    fn anchored(entries: &[(BlockId, SlotId)]) -> Vec<(BlockId, Placement)> {
        entries
            .iter()
            .map(|&(b, s)| (b, Placement::new(s, SubOffset::Anchor)))
            .collect()
    }

    pub(crate) fn reference_initial() -> TableObs {
        let mut entries = anchored(&[
            (YellowStar, TopCenter),
            (RedMoon, TopLeft),
            (GreenStar, TopRight),
            (GreenCube, CenterLeft),
            (BlueMoon, CenterRight),
            (YellowPentagon, BottomLeft),
            (RedPentagon, BottomRight),
        ]);
        entries.push((BlueCube, Placement::new(TopCenter, SubOffset::North)));
        TableObs::new(entries)
    }

    pub(crate) fn reference_goal() -> TargetConfig {
        TargetConfig::new(
            [
                (YellowStar, TopCenter),
                (RedMoon, TopLeft),
                (GreenStar, TopRight),
                (GreenCube, CenterLeft),
                (BlueCube, CenterRight),
                (BlueMoon, BottomCenter),
                (YellowPentagon, BottomLeft),
                (RedPentagon, BottomRight),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap()
    }

    fn rng() -> crate::domain::Stream {
        derive_stream(RngStreamKey::new(7, 0, StreamRole::Env))
    }

    #[test]
    fn move_to_empty_position() {
        let obs = reference_initial();
        let a = Action::MoveBlockToPosition {
            src: BlueMoon,
            dst: BottomCenter,
        };
        let next = table_step(&obs, &a, &mut rng()).unwrap();
        assert_eq!(
            next.get(BlueMoon),
            Some(Placement::new(BottomCenter, SubOffset::Anchor))
        );
        assert!(table_valid_next(&obs, &a, &next));
    }

    #[test]
    fn occupied_position_is_a_violation() {
        let obs = reference_initial();
        let a = Action::MoveBlockToPosition {
            src: BlueCube,
            dst: CenterRight,
        };
        assert_eq!(
            table_step(&obs, &a, &mut rng()),
            Err(EnvError::DestinationOccupied(a))
        );
    }

    #[test]
    fn self_move_errors() {
        let a = Action::MoveBlockToBlock {
            src: BlueCube,
            dst: BlueCube,
        };
        assert_eq!(
            table_step(&reference_initial(), &a, &mut rng()),
            Err(EnvError::SelfMove(a))
        );
    }

    #[test]
    fn block_to_block_lands_around_target() {
        let obs = reference_initial();
        let a = Action::MoveBlockToBlock {
            src: GreenCube,
            dst: YellowStar,
        };
        let mut r = rng();
        for _ in 0..20 {
            let next = table_step(&obs, &a, &mut r).unwrap();
            let p = next.get(GreenCube).unwrap();
            assert_eq!(p.slot, TopCenter);
            assert_ne!(p.sub_offset, SubOffset::Anchor);
        }
    }

    #[test]
    fn every_offset_outcome_is_valid() {
        let obs = reference_initial();
        let a = Action::MoveBlockToBlock {
            src: GreenCube,
            dst: YellowStar,
        };
        for off in SubOffset::AROUND {
            assert!(table_valid_next(
                &obs,
                &a,
                &obs.with(GreenCube, Placement::new(TopCenter, off))
            ));
        }
        assert!(!table_valid_next(
            &obs,
            &a,
            &obs.with(GreenCube, Placement::new(TopCenter, SubOffset::Anchor))
        ));
    }

    #[test]
    fn missing_or_disturbed_blocks_are_invalid() {
        let obs = reference_initial();
        let a = Action::MoveBlockToBlock {
            src: GreenCube,
            dst: YellowStar,
        };
        let good = obs.with(GreenCube, Placement::new(TopCenter, SubOffset::East));
        let mut missing = good.clone();
        missing.placement.retain(|e| e.block != GreenCube);
        assert!(!table_valid_next(&obs, &a, &missing));
        let disturbed = good.with(RedMoon, Placement::new(BottomCenter, SubOffset::Anchor));
        assert!(!table_valid_next(&obs, &a, &disturbed));
        let mut duplicated = good.clone();
        duplicated.placement.push(duplicated.placement[0]);
        assert!(!table_valid_next(&obs, &a, &duplicated));
    }

    #[test]
    fn colocated_block_always_changes_offset() {
        let obs = reference_initial();
        let a = Action::MoveBlockToBlock {
            src: BlueCube,
            dst: YellowStar,
        };
        assert_eq!(landing_offsets(&obs, BlueCube, TopCenter).len(), 3);
        assert!(!table_valid_next(&obs, &a, &obs));
        let mut r = rng();
        for _ in 0..20 {
            assert_ne!(table_step(&obs, &a, &mut r).unwrap(), obs);
        }
    }

    #[test]
    fn reference_plan_values() {
        let goal = reference_goal();
        let mut obs = reference_initial();
        assert_eq!(table_value_oracle(&obs, &goal).steps_remaining, 2);
        obs = table_step(
            &obs,
            &Action::MoveBlockToPosition {
                src: BlueMoon,
                dst: BottomCenter,
            },
            &mut rng(),
        )
        .unwrap();
        assert_eq!(table_value_oracle(&obs, &goal).steps_remaining, 1);
        obs = table_step(
            &obs,
            &Action::MoveBlockToPosition {
                src: BlueCube,
                dst: CenterRight,
            },
            &mut rng(),
        )
        .unwrap();
        assert_eq!(table_value_oracle(&obs, &goal).steps_remaining, 0);
        assert!(table_goal_reached(&obs, &goal));
    }

    #[test]
    fn all_misplaced_reads_eight() {
        // Rotate every block one slot along SlotId::ALL.
        let goal = reference_goal();
        let obs = TableObs::new(goal.iter().map(|(b, s)| {
            let i = SlotId::ALL.iter().position(|&x| x == s).unwrap();
            (
                b,
                Placement::new(SlotId::ALL[(i + 1) % 8], SubOffset::Anchor),
            )
        }));
        assert_eq!(table_value_oracle(&obs, &goal).steps_remaining, 8);
    }

    #[test]
    fn legal_positions_only_target_empty_slots() {
        let legal = table_legal_actions(&reference_initial());
        assert_eq!(legal.len(), 56 + 8);
        for a in &legal {
            if let Action::MoveBlockToPosition { dst, .. } = a {
                assert_eq!(*dst, BottomCenter);
            }
        }
    }

    #[test]
    fn representative_prefers_anchor() {
        let obs = reference_initial();
        assert_eq!(
            slot_representative(&obs, TopCenter, GreenCube),
            Some(YellowStar)
        );
        assert_eq!(
            slot_representative(&obs, TopCenter, YellowStar),
            Some(BlueCube)
        );
        assert_eq!(slot_representative(&obs, BottomCenter, GreenCube), None);
    }
}
