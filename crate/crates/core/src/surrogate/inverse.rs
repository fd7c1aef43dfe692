use rand::seq::SliceRandom;
use rand::Rng;

use super::NoiseProfile;
use crate::domain::{Action, Stream};
use crate::envs::{Instance, Observation};

/// With probability `q_inverse` the exact symbolic-diff explanation,
/// otherwise a uniform alphabet action other than that explanation.
pub fn inverse_infer(
    instance: &Instance,
    obs: &Observation,
    next: &Observation,
    noise: &NoiseProfile,
    rng: &mut Stream,
) -> Action {
    let truth = instance.explain_transition(obs, next);
    if rng.gen_bool(noise.q_inverse) {
        return truth;
    }
    let key = truth.normalize();
    let wrong: Vec<Action> = instance
        .kind()
        .alphabet()
        .into_iter()
        .filter(|a| a.normalize() != key)
        .collect();
    *wrong
        .choose(rng)
        .expect("every alphabet has at least four actions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{derive_stream, BlockId, RngStreamKey, SlotId, StreamRole};
    use crate::envs::fixtures::*;
    use crate::envs::{table_step, TableObs};

    fn rng() -> Stream {
        derive_stream(RngStreamKey::new(9, 0, StreamRole::Inverse))
    }

    #[test]
    fn exact_inverse_reads_the_diff() {
        let table = golden_table();
        let Observation::Table(o) = table.initial_obs() else {
            panic!()
        };
        let a = Action::MoveBlockToPosition {
            src: BlockId::BlueMoon,
            dst: SlotId::BottomCenter,
        };
        let next: TableObs = table_step(&o, &a, &mut rng()).unwrap();
        let (o, next) = (Observation::Table(o), Observation::Table(next));
        let got = inverse_infer(&table, &o, &next, &NoiseProfile::oracle(), &mut rng());
        assert_eq!(got.render(), "move blue_moon to bottom_center");
        assert_eq!(
            inverse_infer(&table, &o, &o, &NoiseProfile::oracle(), &mut rng()),
            Action::NoChange
        );
    }

    #[test]
    fn noisy_inverse_is_always_wrong() {
        let maze = golden_maze();
        let o = maze.initial_obs();
        let next = maze
            .step(
                &o,
                &Action::MazeMove(crate::domain::Direction::Down),
                &mut rng(),
            )
            .unwrap();
        let noise = NoiseProfile {
            q_inverse: 0.0,
            ..NoiseProfile::oracle()
        };
        let mut r = rng();
        for _ in 0..50 {
            let a = inverse_infer(&maze, &o, &next, &noise, &mut r);
            assert_ne!(a, Action::MazeMove(crate::domain::Direction::Down));
            assert!(matches!(a, Action::MazeMove(_)));
        }
    }
}
