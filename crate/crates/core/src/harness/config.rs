use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::HarnessError;
use crate::domain::{EnvKind, PlannerConfig};
use crate::envs::EnvParams;
use crate::surrogate::{NoiseProfile, PolicyParams};

/// Everything one evaluation run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub env: EnvKind,
    pub env_params: EnvParams,
    pub planner: PlannerConfig,
    pub noise: NoiseProfile,
    pub policy: PolicyParams,
    pub seed: u64,
}

impl HarnessConfig {
    pub fn defaults(env: EnvKind) -> Self {
        Self {
            env,
            env_params: EnvParams::default(),
            planner: PlannerConfig::for_env(env),
            noise: NoiseProfile::oracle(),
            policy: PolicyParams::default(),
            seed: 0,
        }
    }

    /// Parses a JSON config, filling unspecified fields from the defaults of
    /// its environment. `env` overrides the file's `"env"` field.
    pub fn from_json(text: &str, env: Option<EnvKind>) -> Result<Self, HarnessError> {
        let user: Value = serde_json::from_str(text)?;
        Self::from_value(user, env)
    }

    pub fn from_value(user: Value, env: Option<EnvKind>) -> Result<Self, HarnessError> {
        let env = match env {
            Some(env) => env,
            None => match user.get("env") {
                Some(v) => serde_json::from_value(v.clone())?,
                None => return Err(HarnessError::MissingEnv),
            },
        };
        let mut merged = serde_json::to_value(Self::defaults(env))?;
        merge(&mut merged, user);
        merged["env"] = serde_json::to_value(env)?;
        let cfg: Self = serde_json::from_value(merged)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.env_params.validate(self.env)?;
        self.planner.validate(self.env)?;
        self.noise.validate()?;
        self.policy.validate()?;
        Ok(())
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_config_merges_over_defaults() {
        let cfg = HarnessConfig::from_json(
            r#"{"env": "languagetable", "noise": {"p_wrong_effect": 0.3}, "planner": {"horizon": 6}, "seed": 9}"#,
            None,
        )
        .unwrap();
        assert_eq!(cfg.env, EnvKind::LanguageTable);
        assert_eq!(cfg.noise.p_wrong_effect, 0.3);
        assert_eq!(cfg.noise.q_inverse, 1.0);
        assert_eq!(cfg.planner.horizon, 6);
        assert_eq!(cfg.planner.dynamics_branch, 4);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn env_override_and_errors() {
        let cfg = HarnessConfig::from_json("{}", Some(EnvKind::FrozenLake)).unwrap();
        assert_eq!(cfg, HarnessConfig::defaults(EnvKind::FrozenLake));
        assert!(matches!(
            HarnessConfig::from_json("{}", None),
            Err(HarnessError::MissingEnv)
        ));
        assert!(HarnessConfig::from_json(
            r#"{"planner": {"horizon": -1}}"#,
            Some(EnvKind::FrozenLake)
        )
        .is_err());
        assert!(matches!(
            HarnessConfig::from_json(
                r#"{"planner": {"action_branch": 5}}"#,
                Some(EnvKind::FrozenLake)
            ),
            Err(HarnessError::Planner(_))
        ));
        assert!(matches!(
            HarnessConfig::from_json(r#"{"noise": {"p_delete": 1.5}}"#, Some(EnvKind::FrozenLake)),
            Err(HarnessError::Noise(_))
        ));
    }
}
