use std::collections::BTreeMap;

use rand::Rng;

use super::NoiseProfile;
use crate::domain::Stream;
use crate::envs::Observation;

/// Per-category object counts, each off by one with probability
/// `counter_error`. A zero count can only be over-counted.
pub fn count_objects(
    obs: &Observation,
    noise: &NoiseProfile,
    rng: &mut Stream,
) -> BTreeMap<String, u32> {
    let mut counts = obs.object_counts();
    if noise.counter_error <= 0.0 {
        return counts;
    }
    for n in counts.values_mut() {
        if rng.gen_bool(noise.counter_error) {
            *n = if *n == 0 || rng.gen_bool(0.5) {
                *n + 1
            } else {
                *n - 1
            };
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{derive_stream, RngStreamKey, StreamRole};
    use crate::envs::fixtures::*;

    #[test]
    fn exact_table_counts() {
        let mut rng = derive_stream(RngStreamKey::new(0, 0, StreamRole::Inverse));
        let counts = count_objects(
            &golden_table().initial_obs(),
            &NoiseProfile::oracle(),
            &mut rng,
        );
        assert_eq!(counts.len(), 8);
        assert!(counts.values().all(|&n| n == 1));
        let noisy = NoiseProfile {
            counter_error: 1.0,
            ..NoiseProfile::oracle()
        };
        let counts = count_objects(&golden_table().initial_obs(), &noisy, &mut rng);
        assert!(counts.values().all(|&n| n == 0 || n == 2));
    }
}
