use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::stats::{diff_ci, DiffCi};
use super::{run_episode, EpisodeRecord, HarnessConfig, HarnessError, Metrics};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRun {
    pub config_id: String,
    pub metrics: Metrics,
    pub records: Vec<EpisodeRecord>,
}

/// First 12 hex digits of the SHA-256 of the config's JSON form.
pub fn config_id(cfg: &HarnessConfig) -> String {
    let json = serde_json::to_string(cfg).expect("configs serialize");
    Sha256::digest(json.as_bytes())
        .iter()
        .take(6)
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn run_records(
    cfg: &HarnessConfig,
    n: usize,
    jobs: usize,
) -> Result<Vec<EpisodeRecord>, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    pool.install(|| {
        (0..n as u64)
            .into_par_iter()
            .map(|i| run_episode(cfg, i))
            .collect()
    })
}

fn write_outputs(dir: &Path, run: &EvalRun, env: &str) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    let mut jsonl = std::io::BufWriter::new(fs::File::create(dir.join("episodes.jsonl"))?);
    for r in &run.records {
        serde_json::to_writer(&mut jsonl, r)?;
        jsonl.write_all(b"\n")?;
    }
    jsonl.flush()?;
    let mut csv = csv::Writer::from_path(dir.join("metrics.csv"))?;
    csv.serialize(run.metrics.row(&run.config_id, env))?;
    csv.flush()?;
    Ok(())
}

/// Runs episodes `0..n` on `jobs` threads (0 = one per core). Records come
/// back in episode order regardless of scheduling. With `out`, writes
/// `episodes.jsonl` and `metrics.csv` there.
pub fn run_eval(
    cfg: &HarnessConfig,
    n: usize,
    jobs: usize,
    out: Option<&Path>,
) -> Result<EvalRun, HarnessError> {
    cfg.validate()?;
    let records = run_records(cfg, n, jobs)?;
    let run = EvalRun {
        config_id: config_id(cfg),
        metrics: Metrics::from_records(&records),
        records,
    };
    if let Some(dir) = out {
        write_outputs(dir, &run, cfg.env.name())?;
    }
    Ok(run)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ablation {
    pub filter_on: Metrics,
    pub filter_off: Metrics,
    /// success(on) - success(off).
    pub success_gain: DiffCi,
    /// accepted validity - raw validity, both from the filtered arm.
    pub validity_gain: DiffCi,
}

/// The same episodes with filtering on and off. Instances, proposals and
/// forward draws share streams across arms; only the filter differs.
pub fn ablate_filtering(
    cfg: &HarnessConfig,
    n: usize,
    jobs: usize,
    out: Option<&Path>,
) -> Result<Ablation, HarnessError> {
    let mut on_cfg = cfg.clone();
    on_cfg.planner.filtering_enabled = true;
    let mut off_cfg = cfg.clone();
    off_cfg.planner.filtering_enabled = false;
    let on = run_eval(
        &on_cfg,
        n,
        jobs,
        out.map(|d| d.join("filter_on")).as_deref(),
    )?;
    let off = run_eval(
        &off_cfg,
        n,
        jobs,
        out.map(|d| d.join("filter_off")).as_deref(),
    )?;
    let (a, b) = (on.metrics, off.metrics);
    let ablation = Ablation {
        success_gain: diff_ci(a.successes, a.n_episodes, b.successes, b.n_episodes),
        validity_gain: diff_ci(a.accepted_valid, a.accepted_total, a.raw_valid, a.raw_total),
        filter_on: a,
        filter_off: b,
    };
    if let Some(dir) = out {
        fs::write(
            dir.join("ablation.json"),
            serde_json::to_string_pretty(&ablation)?,
        )?;
    }
    Ok(ablation)
}

/// Returns `cfg` with the numeric field at dotted `path` set to `value`.
/// Integer fields accept only non-negative integral values.
pub fn set_param(
    cfg: &HarnessConfig,
    path: &str,
    value: f64,
) -> Result<HarnessConfig, HarnessError> {
    let bad = |reason: &str| HarnessError::InvalidParamPath {
        path: path.to_string(),
        reason: reason.to_string(),
    };
    let mut json = serde_json::to_value(cfg)?;
    let mut slot = &mut json;
    for key in path.split('.') {
        slot = slot.get_mut(key).ok_or_else(|| bad("no such field"))?;
    }
    *slot = match slot {
        Value::Number(n) if n.is_u64() || n.is_i64() => {
            if value.fract() != 0.0 || value < 0.0 {
                return Err(bad("integer field needs a non-negative integral value"));
            }
            Value::from(value as u64)
        }
        Value::Number(_) => Value::from(value),
        _ => return Err(bad("not a numeric field")),
    };
    HarnessConfig::from_value(json, Some(cfg.env))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub config_id: String,
    pub env: String,
    pub n_episodes: u64,
    pub success_rate: f64,
    pub raw_dynamics_validity: f64,
    pub accepted_dynamics_validity: f64,
    pub acceptance_rate: f64,
    pub mean_plan_length: f64,
    pub accepted_per_step: f64,
    pub accepted_valid: u64,
    pub accepted_total: u64,
}

/// One evaluation per value of the field at `path`, all else fixed. With
/// `out`, writes `sweep.csv` there.
pub fn sweep(
    cfg: &HarnessConfig,
    path: &str,
    values: &[f64],
    n: usize,
    jobs: usize,
    out: Option<&Path>,
) -> Result<Vec<SweepRow>, HarnessError> {
    let configs = values
        .iter()
        .map(|&v| set_param(cfg, path, v))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::with_capacity(values.len());
    for (&v, c) in values.iter().zip(&configs) {
        let run = run_eval(c, n, jobs, None)?;
        let m = &run.metrics;
        rows.push(SweepRow {
            param_value: v,
            config_id: run.config_id.clone(),
            env: c.env.name().to_string(),
            n_episodes: m.n_episodes,
            success_rate: m.success_rate,
            raw_dynamics_validity: m.raw_dynamics_validity,
            accepted_dynamics_validity: m.accepted_dynamics_validity,
            acceptance_rate: m.acceptance_rate,
            mean_plan_length: m.mean_plan_length,
            accepted_per_step: m.accepted_per_step,
            accepted_valid: m.accepted_valid,
            accepted_total: m.accepted_total,
        });
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut csv = csv::Writer::from_path(dir.join("sweep.csv"))?;
        for r in &rows {
            csv.serialize(r)?;
        }
        csv.flush()?;
    }
    Ok(rows)
}
