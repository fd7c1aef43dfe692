//! The three worked examples from the task prompts, as exact regression checks.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::execute_plan;
use crate::domain::{
    derive_stream, parse_action, Action, BlockId, Direction, PlanStreams, PlannerConfig,
    RngStreamKey, SlotId, StreamRole, TargetConfig,
};
use crate::envs::{
    Cell, FetchInstance, Instance, MazeInstance, Placement, Pose, SubOffset, TableInstance,
    TableObs,
};
use crate::planner::{plan, PlanStatus};
use crate::surrogate::Surrogate;

pub const MAZE_REFERENCE_PLAN: [&str; 4] = ["go down", "go down", "go right", "go right"];

pub const FETCH_REFERENCE_PLAN: [&str; 10] = [
    "turn left",
    "turn left",
    "move forward",
    "turn right",
    "move forward",
    "pickup",
    "turn left",
    "turn left",
    "move forward",
    "drop",
];

pub const TABLE_REFERENCE_PLAN: [&str; 2] = [
    "move blue_moon to bottom_center",
    "move blue_cube to center_right",
];

/// 3x3, trap at (1, 2), start (0, 0), gift (2, 2).
pub fn maze_instance() -> Instance {
    Instance::Maze(
        MazeInstance::new(
            3,
            3,
            BTreeSet::from([Cell::new(1, 2)]),
            Cell::new(0, 0),
            Cell::new(2, 2),
        )
        .expect("valid layout"),
    )
}

/// Table at [0, 3], apple at [3, 3], agent at [1, 2] facing left, on a 5x5 grid.
pub fn fetch_instance() -> Instance {
    Instance::Fetch(
        FetchInstance::new(
            5,
            5,
            BTreeSet::from([Cell::new(0, 3)]),
            Cell::new(3, 3),
            Pose::new(Cell::new(1, 2), Direction::Left),
        )
        .expect("valid layout"),
    )
}

/// blue_cube shares top_center with yellow_star; bottom_center is empty.
pub fn table_instance() -> Instance {
    use BlockId::*;
    use SlotId::*;
    let goal = TargetConfig::new(
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
    .expect("a permutation");
    let anchor = |s| Placement::new(s, SubOffset::Anchor);
    let initial = TableObs::new([
        (YellowStar, anchor(TopCenter)),
        (BlueCube, Placement::new(TopCenter, SubOffset::North)),
        (RedMoon, anchor(TopLeft)),
        (GreenStar, anchor(TopRight)),
        (GreenCube, anchor(CenterLeft)),
        (BlueMoon, anchor(CenterRight)),
        (YellowPentagon, anchor(BottomLeft)),
        (RedPentagon, anchor(BottomRight)),
    ]);
    Instance::Table(TableInstance { initial, goal })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCase {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
}

fn parse_plan(inst: &Instance, plan: &[&str]) -> Vec<Action> {
    plan.iter()
        .map(|s| parse_action(s, inst.kind()).expect("reference actions parse"))
        .collect()
}

fn timed(name: &str, f: impl FnOnce() -> (bool, String)) -> GoldenCase {
    let start = Instant::now();
    let (passed, detail) = f();
    GoldenCase {
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn env_rng() -> crate::domain::Stream {
    derive_stream(RngStreamKey::new(0, 0, StreamRole::Env))
}

/// Oracle planner on the reference maze: complete, four actions, and the plan
/// (like the reference plan) executes to the gift.
pub fn check_maze() -> GoldenCase {
    timed("frozenlake", || {
        let inst = maze_instance();
        let (o0, goal) = (inst.initial_obs(), inst.goal());
        let cfg = PlannerConfig {
            beams: 2,
            action_branch: 4,
            dynamics_branch: 1,
            horizon: 8,
            ..PlannerConfig::for_env(inst.kind())
        };
        let result = match plan(
            &Surrogate::oracle(),
            &inst,
            &o0,
            &goal,
            &cfg,
            &mut PlanStreams::derive(0, 0),
        ) {
            Ok(r) => r,
            Err(e) => return (false, e.to_string()),
        };
        let exec = execute_plan(&inst, &o0, &goal, &result.actions, &mut env_rng());
        let reference = execute_plan(
            &inst,
            &o0,
            &goal,
            &parse_plan(&inst, &MAZE_REFERENCE_PLAN),
            &mut env_rng(),
        );
        let rendered: Vec<String> = result.actions.iter().map(Action::render).collect();
        let passed = result.status == PlanStatus::Complete
            && result.actions.len() == 4
            && exec.success
            && reference.success;
        (
            passed,
            format!(
                "status={} plan={rendered:?} executed={}",
                result.status.name(),
                exec.success
            ),
        )
    })
}

/// Reference plan replay plus the pickup/drop/total oracle split at the start.
pub fn check_fetch() -> GoldenCase {
    timed("minibehavior", || {
        let inst = fetch_instance();
        let (o0, goal) = (inst.initial_obs(), inst.goal());
        let exec = execute_plan(
            &inst,
            &o0,
            &goal,
            &parse_plan(&inst, &FETCH_REFERENCE_PLAN),
            &mut env_rng(),
        );
        let v = inst.value_oracle(&o0, &goal);
        let split = v.components.map(|c| (c.pickup, c.drop));
        let passed = exec.success && split == Some((6, 4)) && v.steps_remaining == 10;
        (
            passed,
            format!(
                "apple_on_table={} value={} split={split:?}",
                exec.success, v.steps_remaining
            ),
        )
    })
}

/// Reference plan replay with the misplaced-block count read after each move.
pub fn check_table() -> GoldenCase {
    timed("languagetable", || {
        let inst = table_instance();
        let (o0, goal) = (inst.initial_obs(), inst.goal());
        let exec = execute_plan(
            &inst,
            &o0,
            &goal,
            &parse_plan(&inst, &TABLE_REFERENCE_PLAN),
            &mut env_rng(),
        );
        let values: Vec<u32> = std::iter::once(&o0)
            .chain(exec.trace.iter())
            .map(|o| inst.value_oracle(o, &goal).steps_remaining)
            .collect();
        let passed = exec.success && values == [2, 1, 0];
        (
            passed,
            format!("reached={} values={values:?}", exec.success),
        )
    })
}

pub fn run_golden() -> Vec<GoldenCase> {
    vec![check_maze(), check_fetch(), check_table()]
}
