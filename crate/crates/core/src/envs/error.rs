use thiserror::Error;

use crate::domain::{Action, BlockId, EnvKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("action `{action}` does not belong to {env}")]
    WrongEnvironmentAction { action: Action, env: EnvKind },
    #[error("cannot step from a terminal maze state")]
    SteppingFromTerminal,
    #[error("destination of `{0}` is occupied")]
    DestinationOccupied(Action),
    #[error("`{0}` moves a block onto itself")]
    SelfMove(Action),
    #[error("block {0} is not on the table")]
    MissingBlock(BlockId),
    #[error("observation does not belong to {0}")]
    WrongObservation(EnvKind),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("no solvable {env} instance after {attempts} attempts")]
    GenerationExhausted { env: EnvKind, attempts: u32 },
}
