use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use thiserror::Error;

use super::PolicyParams;
use crate::domain::{Action, Goal, Stream, INFEASIBLE};
use crate::envs::{scratch_rng, Instance, Observation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("asked for {requested} actions but only {available} are legal")]
    InsufficientActions { requested: usize, available: usize },
}

/// `count` distinct legal actions, drawn without replacement. Each draw is
/// uniform with probability `epsilon`, otherwise a softmax over the negated
/// change in oracle steps-to-go.
pub fn propose_actions(
    instance: &Instance,
    obs: &Observation,
    goal: &Goal,
    count: usize,
    params: &PolicyParams,
    rng: &mut Stream,
) -> Result<Vec<Action>, PolicyError> {
    let mut pool = instance.legal_actions(obs);
    if count > pool.len() {
        return Err(PolicyError::InsufficientActions {
            requested: count,
            available: pool.len(),
        });
    }
    let here = instance.value_oracle(obs, goal).steps_remaining as f64;
    let mut deltas: Vec<f64> = pool
        .iter()
        .map(|a| {
            let after = instance
                .step(obs, a, &mut scratch_rng())
                .map_or(INFEASIBLE, |next| {
                    instance.value_oracle(&next, goal).steps_remaining
                });
            after as f64 - here
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let i = if rng.gen_bool(params.epsilon) {
            rng.gen_range(0..pool.len())
        } else {
            let best = deltas.iter().copied().fold(f64::INFINITY, f64::min);
            let weights: Vec<f64> = deltas
                .iter()
                .map(|d| (-(d - best) / params.temperature).exp())
                .collect();
            WeightedIndex::new(&weights)
                .expect("the best action has weight one")
                .sample(rng)
        };
        out.push(pool.swap_remove(i));
        deltas.swap_remove(i);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{derive_stream, Direction, RngStreamKey, StreamRole};
    use crate::envs::fixtures::*;

    fn rng(seed: u64) -> Stream {
        derive_stream(RngStreamKey::new(seed, 0, StreamRole::Policy))
    }

    #[test]
    fn full_alphabets() {
        for (inst, n) in [(golden_maze(), 4), (golden_fetch(), 5)] {
            let o = inst.initial_obs();
            let got = propose_actions(
                &inst,
                &o,
                &inst.goal(),
                n,
                &PolicyParams::default(),
                &mut rng(1),
            )
            .unwrap();
            let mut sorted = got.clone();
            sorted.sort_by_key(|a| a.render());
            sorted.dedup();
            assert_eq!(sorted.len(), n);
        }
    }

    #[test]
    fn greedy_first_proposal_descends() {
        let maze = golden_maze();
        let o = maze.initial_obs();
        for seed in 0..30 {
            let got = propose_actions(
                &maze,
                &o,
                &maze.goal(),
                1,
                &PolicyParams::greedy(),
                &mut rng(seed),
            )
            .unwrap();
            assert!(
                matches!(
                    got[0],
                    Action::MazeMove(Direction::Down) | Action::MazeMove(Direction::Right)
                ),
                "{}",
                got[0]
            );
        }
    }

    #[test]
    fn too_many_requested() {
        let maze = golden_maze();
        let err = propose_actions(
            &maze,
            &maze.initial_obs(),
            &maze.goal(),
            5,
            &PolicyParams::default(),
            &mut rng(0),
        );
        assert_eq!(
            err,
            Err(PolicyError::InsufficientActions {
                requested: 5,
                available: 4
            })
        );
    }
}
