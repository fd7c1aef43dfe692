//! Self-discriminated filtering of forward-model samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Action, Stream};
use crate::envs::{EnvError, Instance, Observation};
use crate::surrogate::{ErrorCategory, WorldModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    None,
    ActionMismatch,
    CountMismatch,
}

impl RejectReason {
    pub fn name(self) -> &'static str {
        match self {
            RejectReason::None => "none",
            RejectReason::ActionMismatch => "action_mismatch",
            RejectReason::CountMismatch => "count_mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionCandidate {
    pub obs: Observation,
    pub action: Action,
    pub predicted: Observation,
    pub verdict: Verdict,
    pub reject_reason: RejectReason,
    /// What the inverse model read off the pair; absent when the inverse
    /// check did not run.
    pub inferred_action: Option<Action>,
    /// Forward-model category that produced `predicted` (diagnostic only).
    pub category: ErrorCategory,
    /// Ground-truth validity (diagnostic only; never consulted by the filter).
    pub valid: bool,
}

impl TransitionCandidate {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

/// Semantic action equality: equal normalized tuples.
pub fn actions_match(a: &Action, b: &Action) -> bool {
    a.normalize() == b.normalize()
}

/// Whether the (possibly noisy) counter sees the same objects in both frames.
pub fn count_consistent<M: WorldModel + ?Sized>(
    model: &M,
    obs: &Observation,
    predicted: &Observation,
    rng: &mut Stream,
) -> bool {
    model.count_objects(obs, rng) == model.count_objects(predicted, rng)
}

/// Checks one prediction: count consistency first, then inverse matching.
/// The issued action is compared in the form an exact inverse model would
/// report it (see [`Instance::canonical_action`]).
pub fn check_candidate<M: WorldModel + ?Sized>(
    model: &M,
    instance: &Instance,
    obs: &Observation,
    action: &Action,
    predicted: &Observation,
    rng: &mut Stream,
) -> (RejectReason, Option<Action>) {
    if !count_consistent(model, obs, predicted, rng) {
        return (RejectReason::CountMismatch, None);
    }
    let inferred = model.inverse_infer(instance, obs, predicted, rng);
    let expected = instance.canonical_action(obs, action);
    if actions_match(&inferred, &expected) {
        (RejectReason::None, Some(inferred))
    } else {
        (RejectReason::ActionMismatch, Some(inferred))
    }
}

/// Draws `d` forward predictions for `action` from `forward_rng` and
/// verdicts each one. Per-candidate check streams are seeded from
/// `inverse_rng` before any check runs, so verdicts do not depend on check
/// order. With `enabled = false` every candidate is accepted and
/// `inverse_rng` is left untouched.
#[allow(clippy::too_many_arguments)]
pub fn discriminate<M: WorldModel + ?Sized>(
    model: &M,
    instance: &Instance,
    obs: &Observation,
    action: &Action,
    d: usize,
    enabled: bool,
    forward_rng: &mut Stream,
    inverse_rng: &mut Stream,
) -> Result<Vec<TransitionCandidate>, EnvError> {
    let predictions = (0..d)
        .map(|_| model.forward_predict(instance, obs, action, forward_rng))
        .collect::<Result<Vec<_>, _>>()?;
    let seeds: Vec<u64> = if enabled {
        (0..d).map(|_| inverse_rng.gen()).collect()
    } else {
        Vec::new()
    };
    Ok(predictions
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            let (reject_reason, inferred_action) = if enabled {
                check_candidate(
                    model,
                    instance,
                    obs,
                    action,
                    &p.obs,
                    &mut ChaCha8Rng::seed_from_u64(seeds[j]),
                )
            } else {
                (RejectReason::None, None)
            };
            TransitionCandidate {
                obs: obs.clone(),
                action: *action,
                valid: instance.valid_outcome(obs, action, &p.obs),
                predicted: p.obs,
                verdict: if reject_reason == RejectReason::None {
                    Verdict::Accepted
                } else {
                    Verdict::Rejected
                },
                reject_reason,
                inferred_action,
                category: p.category,
            }
        })
        .collect())
}
