use std::collections::{HashSet, VecDeque};

use super::{PlanError, PlanResult, PlanStats, PlanStatus};
use crate::domain::{Action, Goal};
use crate::envs::{scratch_rng, Instance, Observation};

/// Largest number of generated search nodes before giving up.
pub const NODE_CAP: usize = 1_000_000;

struct Node {
    obs: Observation,
    parent: Option<(usize, Action)>,
    depth: usize,
}

/// Breadth-first search over ground-truth dynamics for a shortest plan of
/// at most `max_depth` actions.
pub fn brute_force_plan(
    instance: &Instance,
    o0: &Observation,
    goal: &Goal,
    max_depth: usize,
) -> Result<PlanResult, PlanError> {
    let mut nodes = vec![Node {
        obs: o0.clone(),
        parent: None,
        depth: 0,
    }];
    let mut stats = PlanStats::default();
    if instance.goal_reached(o0, goal) {
        return Ok(unwind(&nodes, 0, stats));
    }
    let mut seen = HashSet::from([instance.search_key(o0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut rng = scratch_rng();
    while let Some(i) = queue.pop_front() {
        if nodes[i].depth >= max_depth || instance.is_absorbing(&nodes[i].obs) {
            continue;
        }
        stats.beams_expanded += 1;
        for action in instance.legal_actions(&nodes[i].obs) {
            stats.proposed += 1;
            if stats.proposed as usize > NODE_CAP {
                return Err(PlanError::TreeTooLarge(NODE_CAP));
            }
            let next = instance.step(&nodes[i].obs, &action, &mut rng)?;
            if !seen.insert(instance.search_key(&next)) {
                continue;
            }
            stats.accepted += 1;
            let reached = instance.goal_reached(&next, goal);
            nodes.push(Node {
                obs: next,
                parent: Some((i, action)),
                depth: nodes[i].depth + 1,
            });
            let j = nodes.len() - 1;
            if reached {
                return Ok(unwind(&nodes, j, stats));
            }
            queue.push_back(j);
        }
    }
    Ok(PlanResult {
        actions: Vec::new(),
        predicted_obs: Vec::new(),
        score: -(crate::domain::INFEASIBLE as i32),
        status: PlanStatus::NoValidTransitions,
        stats,
    })
}

fn unwind(nodes: &[Node], mut i: usize, stats: PlanStats) -> PlanResult {
    let mut actions = Vec::new();
    let mut predicted = Vec::new();
    while let Some((parent, action)) = nodes[i].parent {
        actions.push(action);
        predicted.push(nodes[i].obs.clone());
        i = parent;
    }
    actions.reverse();
    predicted.reverse();
    PlanResult {
        actions,
        predicted_obs: predicted,
        score: 0,
        status: PlanStatus::Complete,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::fixtures::*;

    #[test]
    fn golden_lengths() {
        let maze = golden_maze();
        let out = brute_force_plan(&maze, &maze.initial_obs(), &maze.goal(), 4).unwrap();
        assert_eq!((out.status, out.actions.len()), (PlanStatus::Complete, 4));
        let out = brute_force_plan(&maze, &maze.initial_obs(), &maze.goal(), 2).unwrap();
        assert_eq!(out.status, PlanStatus::NoValidTransitions);
        let fetch = golden_fetch();
        let out = brute_force_plan(&fetch, &fetch.initial_obs(), &fetch.goal(), 10).unwrap();
        assert_eq!(out.actions.len(), 10);
        let table = golden_table();
        let out = brute_force_plan(&table, &table.initial_obs(), &table.goal(), 4).unwrap();
        assert_eq!(out.actions.len(), 2);
    }
}
