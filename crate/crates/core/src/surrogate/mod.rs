//! Parameterized stand-ins for the four world-model roles: forward dynamics,
//! inverse dynamics, policy and value. With an all-zero [`NoiseProfile`]
//! every role is exact.

mod counter;
mod forward;
mod inverse;
mod policy;
mod value;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use counter::count_objects;
pub use forward::{forward_predict, ErrorCategory, Prediction};
pub use inverse::inverse_infer;
pub use policy::{propose_actions, PolicyError};
pub use value::estimate_value;

use crate::domain::{Action, Goal, Stream, ValueEstimate};
use crate::envs::{EnvError, Instance, Observation};

/// Value-function perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ValueNoise {
    #[default]
    None,
    /// With probability `p`, shift the estimate by a uniform `±1..=±k`.
    Discrete { k: u32, p: f64 },
}

/// Error rates of the surrogate models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseProfile {
    pub p_wrong_effect: f64,
    pub p_delete: f64,
    pub p_duplicate: f64,
    /// Probability that inverse inference reports the true symbolic diff.
    pub q_inverse: f64,
    pub value_noise: ValueNoise,
    /// Probability that the object counter is off by one, per category.
    pub counter_error: f64,
}

impl Default for NoiseProfile {
    fn default() -> Self {
        Self::oracle()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error("{0} = {1} is not a probability")]
    NotAProbability(&'static str, f64),
    #[error("forward error rates sum to {0} > 1")]
    RatesExceedOne(f64),
    #[error("value noise needs k >= 1")]
    ZeroValueShift,
    #[error("policy temperature must be positive, got {0}")]
    Temperature(f64),
}

fn check_prob(name: &'static str, p: f64) -> Result<(), NoiseError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(NoiseError::NotAProbability(name, p))
    }
}

impl NoiseProfile {
    pub const fn oracle() -> Self {
        Self {
            p_wrong_effect: 0.0,
            p_delete: 0.0,
            p_duplicate: 0.0,
            q_inverse: 1.0,
            value_noise: ValueNoise::None,
            counter_error: 0.0,
        }
    }

    pub fn p_valid(&self) -> f64 {
        1.0 - (self.p_wrong_effect + self.p_delete + self.p_duplicate)
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        check_prob("p_wrong_effect", self.p_wrong_effect)?;
        check_prob("p_delete", self.p_delete)?;
        check_prob("p_duplicate", self.p_duplicate)?;
        check_prob("q_inverse", self.q_inverse)?;
        check_prob("counter_error", self.counter_error)?;
        let total = self.p_wrong_effect + self.p_delete + self.p_duplicate;
        if total > 1.0 + 1e-12 {
            return Err(NoiseError::RatesExceedOne(total));
        }
        if let ValueNoise::Discrete { k, p } = self.value_noise {
            check_prob("value_noise.p", p)?;
            if k == 0 {
                return Err(NoiseError::ZeroValueShift);
            }
        }
        Ok(())
    }
}

/// Proposal policy: uniform with probability `epsilon`, otherwise a softmax
/// over the negated change in true steps-to-go.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub epsilon: f64,
    pub temperature: f64,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            temperature: 0.25,
        }
    }
}

impl PolicyParams {
    /// Near-deterministic best-first proposals.
    pub const fn greedy() -> Self {
        Self {
            epsilon: 0.0,
            temperature: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        check_prob("epsilon", self.epsilon)?;
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(NoiseError::Temperature(self.temperature));
        }
        Ok(())
    }
}

/// The four model roles the planner calls, plus the object counter used
/// by self-discrimination.
pub trait WorldModel {
    fn propose_actions(
        &self,
        instance: &Instance,
        obs: &Observation,
        goal: &Goal,
        count: usize,
        rng: &mut Stream,
    ) -> Result<Vec<Action>, PolicyError>;

    fn forward_predict(
        &self,
        instance: &Instance,
        obs: &Observation,
        action: &Action,
        rng: &mut Stream,
    ) -> Result<Prediction, EnvError>;

    fn inverse_infer(
        &self,
        instance: &Instance,
        obs: &Observation,
        next: &Observation,
        rng: &mut Stream,
    ) -> Action;

    fn estimate_value(
        &self,
        instance: &Instance,
        obs: &Observation,
        goal: &Goal,
        rng: &mut Stream,
    ) -> ValueEstimate;

    fn count_objects(&self, obs: &Observation, rng: &mut Stream) -> BTreeMap<String, u32>;
}

/// Oracle-backed surrogate with injectable errors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Surrogate {
    pub noise: NoiseProfile,
    pub policy: PolicyParams,
}

impl Surrogate {
    pub fn new(noise: NoiseProfile, policy: PolicyParams) -> Self {
        Self { noise, policy }
    }

    /// Exact models with greedy proposals.
    pub fn oracle() -> Self {
        Self {
            noise: NoiseProfile::oracle(),
            policy: PolicyParams::greedy(),
        }
    }
}

impl WorldModel for Surrogate {
    fn propose_actions(
        &self,
        instance: &Instance,
        obs: &Observation,
        goal: &Goal,
        count: usize,
        rng: &mut Stream,
    ) -> Result<Vec<Action>, PolicyError> {
        propose_actions(instance, obs, goal, count, &self.policy, rng)
    }

    fn forward_predict(
        &self,
        instance: &Instance,
        obs: &Observation,
        action: &Action,
        rng: &mut Stream,
    ) -> Result<Prediction, EnvError> {
        forward_predict(instance, obs, action, &self.noise, rng)
    }

    fn inverse_infer(
        &self,
        instance: &Instance,
        obs: &Observation,
        next: &Observation,
        rng: &mut Stream,
    ) -> Action {
        inverse_infer(instance, obs, next, &self.noise, rng)
    }

    fn estimate_value(
        &self,
        instance: &Instance,
        obs: &Observation,
        goal: &Goal,
        rng: &mut Stream,
    ) -> ValueEstimate {
        estimate_value(instance, obs, goal, &self.noise, rng)
    }

    fn count_objects(&self, obs: &Observation, rng: &mut Stream) -> BTreeMap<String, u32> {
        count_objects(obs, &self.noise, rng)
    }
}
