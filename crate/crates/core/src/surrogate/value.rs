use rand::Rng;

use super::{NoiseProfile, ValueNoise};
use crate::domain::{Goal, Stream, ValueEstimate, MAX_FINITE};
use crate::envs::{Instance, Observation};

/// Oracle steps-to-go, perturbed per `noise.value_noise`. The infeasibility
/// sentinel is never perturbed; a perturbed estimate drops its components.
pub fn estimate_value(
    instance: &Instance,
    obs: &Observation,
    goal: &Goal,
    noise: &NoiseProfile,
    rng: &mut Stream,
) -> ValueEstimate {
    let oracle = instance.value_oracle(obs, goal);
    if oracle.is_infeasible() {
        return oracle;
    }
    match noise.value_noise {
        ValueNoise::None => oracle,
        ValueNoise::Discrete { k, p } => {
            if !rng.gen_bool(p) {
                return oracle;
            }
            let d = rng.gen_range(1..=k.max(1)) as i64;
            let shifted = if rng.gen_bool(0.5) {
                oracle.steps_remaining as i64 + d
            } else {
                oracle.steps_remaining as i64 - d
            };
            ValueEstimate::steps(shifted.clamp(0, MAX_FINITE as i64) as u32)
        }
    }
}
