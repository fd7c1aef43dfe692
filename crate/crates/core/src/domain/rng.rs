//! Deterministic per-(episode, role) random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The random stream type handed to every stochastic operation.
pub type Stream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamRole {
    Policy,
    Forward,
    Inverse,
    Value,
    Env,
    Instance,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Policy => 1,
            StreamRole::Forward => 2,
            StreamRole::Inverse => 3,
            StreamRole::Value => 4,
            StreamRole::Env => 5,
            StreamRole::Instance => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStreamKey {
    pub master_seed: u64,
    pub episode_index: u64,
    pub role: StreamRole,
}

impl RngStreamKey {
    pub fn new(master_seed: u64, episode_index: u64, role: StreamRole) -> Self {
        Self {
            master_seed,
            episode_index,
            role,
        }
    }
}

/// The key is laid out verbatim into the ChaCha key, so distinct keys give
/// distinct keystreams and identical keys give identical ones.
pub fn derive_stream(key: RngStreamKey) -> Stream {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&key.master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&key.episode_index.to_le_bytes());
    seed[16..24].copy_from_slice(&key.role.tag().to_le_bytes());
    seed[24..].copy_from_slice(b"beamplan");
    ChaCha8Rng::from_seed(seed)
}

/// The four streams consumed while planning one episode.
#[derive(Debug, Clone)]
pub struct PlanStreams {
    pub policy: Stream,
    pub forward: Stream,
    pub inverse: Stream,
    pub value: Stream,
}

impl PlanStreams {
    pub fn derive(master_seed: u64, episode_index: u64) -> Self {
        let stream = |role| derive_stream(RngStreamKey::new(master_seed, episode_index, role));
        Self {
            policy: stream(StreamRole::Policy),
            forward: stream(StreamRole::Forward),
            inverse: stream(StreamRole::Inverse),
            value: stream(StreamRole::Value),
        }
    }
}
