//! Beam-search planning over noisy world-model surrogates.
//!
//! A planner proposes actions with a policy, imagines their outcomes with a
//! forward-dynamics model, keeps only the imagined transitions that survive
//! self-discrimination (inverse-dynamics action matching plus an
//! object-count check) and ranks beams with a steps-to-go value estimate.
//! Everything runs against three small symbolic environments whose ground
//! truth is known, so hallucinations can be injected and measured.

pub mod domain;
pub mod envs;
pub mod filtering;
pub mod harness;
pub mod planner;
pub mod surrogate;
