use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EpisodeRecord;
use crate::filtering::Verdict;

/// Aggregates over a batch of episodes. Raw counts are kept alongside the
/// rates so confidence intervals can be computed downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n_episodes: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Every drawn candidate.
    pub raw_total: u64,
    pub raw_valid: u64,
    pub raw_dynamics_validity: f64,
    /// Candidates that passed the filter (all of them when it is off).
    pub accepted_total: u64,
    pub accepted_valid: u64,
    pub accepted_dynamics_validity: f64,
    pub acceptance_rate: f64,
    pub reject_reason_histogram: BTreeMap<String, u64>,
    pub failure_modes: BTreeMap<String, u64>,
    pub mean_plan_length: f64,
    pub planning_steps: u64,
    /// Mean accepted candidates per beam-search step.
    pub accepted_per_step: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Metrics {
    pub fn from_records(records: &[EpisodeRecord]) -> Self {
        let mut m = Metrics {
            n_episodes: records.len() as u64,
            successes: 0,
            success_rate: 0.0,
            raw_total: 0,
            raw_valid: 0,
            raw_dynamics_validity: 0.0,
            accepted_total: 0,
            accepted_valid: 0,
            accepted_dynamics_validity: 0.0,
            acceptance_rate: 0.0,
            reject_reason_histogram: BTreeMap::new(),
            failure_modes: BTreeMap::new(),
            mean_plan_length: 0.0,
            planning_steps: 0,
            accepted_per_step: 0.0,
        };
        let mut plan_len = 0u64;
        for r in records {
            m.successes += r.executed_success as u64;
            *m.failure_modes
                .entry(r.failure_mode.name().to_string())
                .or_default() += 1;
            plan_len += r.plan.actions.len() as u64;
            m.planning_steps += r.planning_steps as u64;
            for c in &r.candidate_log {
                m.raw_total += 1;
                m.raw_valid += c.valid as u64;
                if c.verdict == Verdict::Accepted {
                    m.accepted_total += 1;
                    m.accepted_valid += c.valid as u64;
                } else {
                    *m.reject_reason_histogram
                        .entry(c.reject_reason.name().to_string())
                        .or_default() += 1;
                }
            }
        }
        m.success_rate = ratio(m.successes, m.n_episodes);
        m.raw_dynamics_validity = ratio(m.raw_valid, m.raw_total);
        m.accepted_dynamics_validity = ratio(m.accepted_valid, m.accepted_total);
        m.acceptance_rate = ratio(m.accepted_total, m.raw_total);
        m.mean_plan_length = ratio(plan_len, m.n_episodes);
        m.accepted_per_step = ratio(m.accepted_total, m.planning_steps);
        m
    }

    pub fn row(&self, config_id: &str, env: &str) -> MetricsRow {
        MetricsRow {
            config_id: config_id.to_string(),
            env: env.to_string(),
            n_episodes: self.n_episodes,
            success_rate: self.success_rate,
            raw_dynamics_validity: self.raw_dynamics_validity,
            accepted_dynamics_validity: self.accepted_dynamics_validity,
            acceptance_rate: self.acceptance_rate,
            mean_plan_length: self.mean_plan_length,
        }
    }
}

/// One line of `metrics.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub config_id: String,
    pub env: String,
    pub n_episodes: u64,
    pub success_rate: f64,
    pub raw_dynamics_validity: f64,
    pub accepted_dynamics_validity: f64,
    pub acceptance_rate: f64,
    pub mean_plan_length: f64,
}
