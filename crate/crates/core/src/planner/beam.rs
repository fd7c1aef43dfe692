use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{BeamEntry, PlanError, PlanResult, PlanStats, PlanStatus};
use crate::domain::{Goal, PlanStreams, PlannerConfig};
use crate::envs::{Instance, Observation};
use crate::filtering::{discriminate, TransitionCandidate};
use crate::surrogate::WorldModel;

/// One pool entry as seen by top-B selection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub value: u32,
    pub score: i32,
    pub terminal: bool,
    /// Carried over from the previous step without expansion.
    pub frozen: bool,
}

/// Everything that happened during one beam-search step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub step: usize,
    pub candidates: Vec<TransitionCandidate>,
    pub pool: Vec<PoolEntry>,
    /// Indices into `pool` of the retained beams, best first.
    pub retained: Vec<usize>,
}

/// The `b` highest-scoring entries. The sort is stable, so equal scores
/// keep insertion order.
pub fn select_top_b(mut pool: Vec<BeamEntry>, b: usize) -> Vec<BeamEntry> {
    pool.sort_by_key(|e| std::cmp::Reverse(e.score));
    pool.truncate(b);
    pool
}

fn top_b_indices(pool: &[BeamEntry], b: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.sort_by(|&x, &y| pool[y].score.cmp(&pool[x].score));
    idx.truncate(b);
    idx
}

pub fn plan<M: WorldModel + ?Sized>(
    model: &M,
    instance: &Instance,
    o0: &Observation,
    goal: &Goal,
    cfg: &PlannerConfig,
    streams: &mut PlanStreams,
) -> Result<PlanResult, PlanError> {
    run(model, instance, o0, goal, cfg, streams, None)
}

/// [`plan`], also returning a per-step record of candidates, pool and
/// retained beams.
pub fn plan_with_trace<M: WorldModel + ?Sized>(
    model: &M,
    instance: &Instance,
    o0: &Observation,
    goal: &Goal,
    cfg: &PlannerConfig,
    streams: &mut PlanStreams,
) -> Result<(PlanResult, Vec<StepTrace>), PlanError> {
    let mut trace = Vec::new();
    let result = run(model, instance, o0, goal, cfg, streams, Some(&mut trace))?;
    Ok((result, trace))
}

fn finish(best: &BeamEntry, status: PlanStatus, stats: PlanStats) -> PlanResult {
    PlanResult {
        actions: best.actions.clone(),
        predicted_obs: best.predicted.clone(),
        score: best.score,
        status,
        stats,
    }
}

fn run<M: WorldModel + ?Sized>(
    model: &M,
    instance: &Instance,
    o0: &Observation,
    goal: &Goal,
    cfg: &PlannerConfig,
    streams: &mut PlanStreams,
    mut trace: Option<&mut Vec<StepTrace>>,
) -> Result<PlanResult, PlanError> {
    cfg.validate(instance.kind())?;
    let mut stats = PlanStats::default();
    let v0 = model.estimate_value(instance, o0, goal, &mut streams.value);
    let root = BeamEntry {
        obs: o0.clone(),
        actions: Vec::new(),
        predicted: Vec::new(),
        value: v0.steps_remaining,
        score: v0.score(),
        terminal: v0.steps_remaining == 0,
    };
    let mut beams = vec![root; cfg.beams];
    let frozen = |e: &BeamEntry| e.terminal || instance.is_absorbing(&e.obs);

    for step in 0..cfg.horizon {
        if beams.iter().all(frozen) {
            break;
        }
        let mut pool: Vec<BeamEntry> = Vec::new();
        let mut pool_frozen: Vec<bool> = Vec::new();
        let mut step_candidates = Vec::new();
        for beam in &beams {
            if frozen(beam) {
                pool.push(beam.clone());
                pool_frozen.push(true);
                continue;
            }
            stats.beams_expanded += 1;
            let a = cfg
                .action_branch
                .min(instance.legal_actions(&beam.obs).len());
            let actions =
                model.propose_actions(instance, &beam.obs, goal, a, &mut streams.policy)?;
            for action in actions {
                let candidates = discriminate(
                    model,
                    instance,
                    &beam.obs,
                    &action,
                    cfg.dynamics_branch,
                    cfg.filtering_enabled,
                    &mut streams.forward,
                    &mut streams.inverse,
                )?;
                for c in &candidates {
                    stats.proposed += 1;
                    if !c.accepted() {
                        *stats
                            .rejected_by_reason
                            .entry(c.reject_reason.name().to_string())
                            .or_default() += 1;
                        continue;
                    }
                    stats.accepted += 1;
                    let v = model.estimate_value(instance, &c.predicted, goal, &mut streams.value);
                    let mut actions = beam.actions.clone();
                    actions.push(action);
                    let mut predicted = beam.predicted.clone();
                    predicted.push(c.predicted.clone());
                    pool.push(BeamEntry {
                        obs: c.predicted.clone(),
                        actions,
                        predicted,
                        value: v.steps_remaining,
                        score: v.score(),
                        terminal: v.steps_remaining == 0,
                    });
                    pool_frozen.push(false);
                }
                if trace.is_some() {
                    step_candidates.extend(candidates);
                }
            }
        }
        if cfg.dedupe {
            let mut seen = BTreeSet::new();
            let keep: Vec<bool> = pool
                .iter()
                .map(|e| seen.insert((instance.search_key(&e.obs), e.actions.clone())))
                .collect();
            let mut it = keep.iter();
            pool.retain(|_| *it.next().expect("one flag per entry"));
            let mut it = keep.iter();
            pool_frozen.retain(|_| *it.next().expect("one flag per entry"));
        }
        if pool.is_empty() {
            if let Some(t) = trace.as_deref_mut() {
                t.push(StepTrace {
                    step,
                    candidates: step_candidates,
                    pool: Vec::new(),
                    retained: Vec::new(),
                });
            }
            let best = select_top_b(beams, 1).remove(0);
            return Ok(finish(&best, PlanStatus::NoValidTransitions, stats));
        }
        let retained = top_b_indices(&pool, cfg.beams);
        if let Some(t) = trace.as_deref_mut() {
            t.push(StepTrace {
                step,
                candidates: step_candidates,
                pool: pool
                    .iter()
                    .zip(&pool_frozen)
                    .map(|(e, &f)| PoolEntry {
                        value: e.value,
                        score: e.score,
                        terminal: e.terminal,
                        frozen: f,
                    })
                    .collect(),
                retained: retained.clone(),
            });
        }
        beams = retained.into_iter().map(|i| pool[i].clone()).collect();
    }
    let best = select_top_b(beams, 1).remove(0);
    let status = if best.terminal {
        PlanStatus::Complete
    } else {
        PlanStatus::HorizonExhausted
    };
    Ok(finish(&best, status, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Action, EnvKind};
    use crate::envs::fixtures::*;
    use crate::surrogate::{NoiseProfile, Surrogate};

    fn entry(value: u32, tag: usize) -> BeamEntry {
        let obs = golden_maze().initial_obs();
        BeamEntry {
            obs,
            actions: vec![Action::NoChange; tag],
            predicted: Vec::new(),
            value,
            score: -(value as i32),
            terminal: value == 0,
        }
    }

    #[test]
    fn top_b_orders_by_steps_remaining() {
        let kept = select_top_b(vec![entry(3, 0), entry(1, 1), entry(2, 2)], 2);
        assert_eq!(kept.iter().map(|e| e.value).collect::<Vec<_>>(), vec![1, 2]);
        let kept = select_top_b(vec![entry(2, 5), entry(2, 6)], 1);
        assert_eq!(kept[0].actions.len(), 5);
        assert_eq!(select_top_b(vec![entry(4, 0)], 2).len(), 1);
        let kept = select_top_b(vec![entry(100, 0), entry(99, 1)], 1);
        assert_eq!(kept[0].value, 99);
    }

    fn cfg(env: EnvKind, b: usize, a: usize, d: usize, h: usize) -> PlannerConfig {
        PlannerConfig {
            beams: b,
            action_branch: a,
            dynamics_branch: d,
            horizon: h,
            ..PlannerConfig::for_env(env)
        }
    }

    #[test]
    fn golden_maze_plan() {
        let maze = golden_maze();
        let mut streams = PlanStreams::derive(0, 0);
        let out = plan(
            &Surrogate::oracle(),
            &maze,
            &maze.initial_obs(),
            &maze.goal(),
            &cfg(EnvKind::FrozenLake, 2, 4, 1, 8),
            &mut streams,
        )
        .unwrap();
        assert_eq!(out.status, PlanStatus::Complete);
        assert_eq!(out.actions.len(), 4);
        assert_eq!(out.predicted_obs.len(), 4);
    }

    #[test]
    fn zero_horizon_and_total_rejection() {
        let maze = golden_maze();
        let o = maze.initial_obs();
        let out = plan(
            &Surrogate::oracle(),
            &maze,
            &o,
            &maze.goal(),
            &cfg(EnvKind::FrozenLake, 2, 4, 1, 0),
            &mut PlanStreams::derive(0, 0),
        )
        .unwrap();
        assert_eq!(out.status, PlanStatus::HorizonExhausted);
        assert!(out.actions.is_empty());
        let deleting = Surrogate {
            noise: NoiseProfile {
                p_delete: 1.0,
                ..NoiseProfile::oracle()
            },
            ..Surrogate::oracle()
        };
        let out = plan(
            &deleting,
            &maze,
            &o,
            &maze.goal(),
            &cfg(EnvKind::FrozenLake, 2, 4, 1, 8),
            &mut PlanStreams::derive(0, 0),
        )
        .unwrap();
        assert_eq!(out.status, PlanStatus::NoValidTransitions);
        assert!(out.actions.is_empty());
        assert_eq!(
            out.stats.rejected_by_reason["count_mismatch"],
            out.stats.proposed
        );
    }

    #[test]
    fn rejects_wide_branching() {
        let maze = golden_maze();
        let err = plan(
            &Surrogate::oracle(),
            &maze,
            &maze.initial_obs(),
            &maze.goal(),
            &cfg(EnvKind::FrozenLake, 2, 5, 1, 8),
            &mut PlanStreams::derive(0, 0),
        );
        assert!(matches!(err, Err(PlanError::InvalidConfig(_))));
    }

    #[test]
    fn trace_respects_pool_bound() {
        let table = golden_table();
        let c = cfg(EnvKind::LanguageTable, 2, 4, 4, 4);
        let noise = NoiseProfile {
            p_wrong_effect: 0.3,
            p_delete: 0.1,
            ..NoiseProfile::oracle()
        };
        let model = Surrogate {
            noise,
            ..Surrogate::default()
        };
        let (out, trace) = plan_with_trace(
            &model,
            &table,
            &table.initial_obs(),
            &table.goal(),
            &c,
            &mut PlanStreams::derive(3, 0),
        )
        .unwrap();
        for t in &trace {
            assert!(t.pool.len() <= 2 * 4 * 4 + 2);
            assert!(t.retained.len() <= 2);
        }
        assert_eq!(
            out.stats.proposed,
            out.stats.accepted + out.stats.rejected()
        );
    }
}
