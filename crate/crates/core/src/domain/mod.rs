//! Types shared by every module: actions, goals, value estimates, planner
//! configuration and random stream derivation.

pub mod action;
pub mod config;
pub mod goal;
pub mod rng;
pub mod value;

pub use action::{
    parse_action, Action, BlockId, Direction, EnvKind, NormalizedAction, ParseError, Side, SlotId,
};
pub use config::{ConfigError, PlannerConfig};
pub use goal::{Goal, GoalError, TargetConfig};
pub use rng::{derive_stream, PlanStreams, RngStreamKey, Stream, StreamRole};
pub use value::{ValueComponents, ValueEstimate, INFEASIBLE, MAX_FINITE};
