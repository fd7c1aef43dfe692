use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::action::{BlockId, SlotId};

/// Block-to-slot assignment for the tabletop task: a permutation of the
/// eight blocks over the eight slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    try_from = "BTreeMap<BlockId, SlotId>",
    into = "BTreeMap<BlockId, SlotId>"
)]
pub struct TargetConfig {
    slots: BTreeMap<BlockId, SlotId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoalError {
    #[error("target config misses block {0}")]
    MissingBlock(BlockId),
    #[error("blocks {0} and {1} share slot {2}")]
    SharedSlot(BlockId, BlockId, SlotId),
}

impl TargetConfig {
    pub fn new(slots: BTreeMap<BlockId, SlotId>) -> Result<Self, GoalError> {
        if let Some(&missing) = BlockId::ALL.iter().find(|b| !slots.contains_key(b)) {
            return Err(GoalError::MissingBlock(missing));
        }
        let mut seen: BTreeMap<SlotId, BlockId> = BTreeMap::new();
        for (&block, &slot) in &slots {
            if let Some(&other) = seen.get(&slot) {
                return Err(GoalError::SharedSlot(other, block, slot));
            }
            seen.insert(slot, block);
        }
        Ok(Self { slots })
    }

    pub fn slot_of(&self, block: BlockId) -> SlotId {
        self.slots[&block]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BlockId, SlotId)> + '_ {
        self.slots.iter().map(|(&b, &s)| (b, s))
    }
}

impl TryFrom<BTreeMap<BlockId, SlotId>> for TargetConfig {
    type Error = GoalError;

    fn try_from(slots: BTreeMap<BlockId, SlotId>) -> Result<Self, Self::Error> {
        TargetConfig::new(slots)
    }
}

impl From<TargetConfig> for BTreeMap<BlockId, SlotId> {
    fn from(t: TargetConfig) -> Self {
        t.slots
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Goal {
    ReachGift,
    AppleOnTable,
    TargetConfig(TargetConfig),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_shared_slots_and_missing_blocks() {
        let mut slots: BTreeMap<_, _> = BlockId::ALL.iter().copied().zip(SlotId::ALL).collect();
        assert!(TargetConfig::new(slots.clone()).is_ok());
        slots.insert(BlockId::BlueMoon, SlotId::TopLeft);
        assert!(matches!(
            TargetConfig::new(slots.clone()),
            Err(GoalError::SharedSlot(..))
        ));
        slots.remove(&BlockId::BlueMoon);
        assert_eq!(
            TargetConfig::new(slots),
            Err(GoalError::MissingBlock(BlockId::BlueMoon))
        );
    }
}
