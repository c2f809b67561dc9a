//! Parameter sweeps: replicated runs per value, per-run CSVs and a summary.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, MapError};
use crate::engine::{self, Metrics, SimError, MILESTONES};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("swept value {0:?} appears more than once")]
    DuplicateValue(String),
    #[error("sweep needs at least one value")]
    NoValues,
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Seed of one replicate: the first eight bytes of
/// SHA-256(master_seed LE ‖ value ‖ replicate LE), read little-endian.
pub fn replicate_seed(master_seed: u64, value: &str, replicate: u32) -> u64 {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update(value.as_bytes());
    h.update(replicate.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ExperimentConfig,
    /// `None` for a plain replicated run of `base`.
    pub param: Option<String>,
    pub values: Vec<String>,
}

impl SweepSpec {
    pub fn new(
        base: ExperimentConfig,
        param: &str,
        values: Vec<String>,
    ) -> Result<Self, SweepError> {
        if values.is_empty() {
            return Err(SweepError::NoValues);
        }
        let values: Vec<String> = values.into_iter().map(|v| v.trim().to_string()).collect();
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(SweepError::DuplicateValue(v.clone()));
            }
            let mut cfg = base.clone();
            cfg.set(param, v)?;
            cfg.validate()?;
        }
        Ok(Self {
            base,
            param: Some(param.to_string()),
            values,
        })
    }

    pub fn plain(base: ExperimentConfig) -> Self {
        Self {
            base,
            param: None,
            values: vec![String::new()],
        }
    }

    pub fn config_for(&self, value: &str) -> Result<ExperimentConfig, SweepError> {
        let mut cfg = self.base.clone();
        if let Some(p) = &self.param {
            cfg.set(p, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn csv_name(&self, value: &str, replicate: u32) -> String {
        match &self.param {
            Some(p) => format!("{p}={value}_rep{replicate}.csv"),
            None => format!("rep{replicate}.csv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub value: String,
    pub replicate: u32,
    pub seed: u64,
    /// Hours to each of [`MILESTONES`]; `None` if unreached or failed.
    pub milestones_h: [Option<f64>; 5],
    pub final_fraction: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MilestoneStats {
    /// Replicates that reached the milestone.
    pub reached: usize,
    /// Mean, min and max in hours; only when every replicate reached it.
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub value: String,
    pub replicates: usize,
    pub failed: usize,
    pub milestones: [MilestoneStats; 5],
}

/// Per-value milestone statistics over replicate series.
pub fn emit_milestones(groups: &[(String, Vec<Metrics>)]) -> Vec<SummaryRow> {
    groups
        .iter()
        .map(|(value, runs)| {
            let milestones = std::array::from_fn(|i| {
                let hours: Vec<Option<f64>> = runs
                    .iter()
                    .map(|m| m.time_to_fraction(MILESTONES[i]).map(|s| s / 3600.0))
                    .collect();
                let reached: Vec<f64> = hours.iter().flatten().copied().collect();
                let mut st = MilestoneStats {
                    reached: reached.len(),
                    ..MilestoneStats::default()
                };
                if !reached.is_empty() && reached.len() == runs.len() {
                    st.mean = Some(reached.iter().sum::<f64>() / reached.len() as f64);
                    st.min = reached.iter().copied().reduce(f64::min);
                    st.max = reached.iter().copied().reduce(f64::max);
                }
                st
            });
            SummaryRow {
                value: value.clone(),
                replicates: runs.len(),
                failed: 0,
                milestones,
            }
        })
        .collect()
}

fn pct(p: f64) -> u32 {
    (p * 100.0).round() as u32
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn write_summary<W: std::io::Write>(
    w: W,
    param: &str,
    rows: &[SummaryRow],
) -> Result<(), SimError> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![
        "param".to_string(),
        "value".into(),
        "replicates".into(),
        "failed".into(),
    ];
    for p in MILESTONES {
        let p = pct(p);
        header.extend([
            format!("t{p}_mean_h"),
            format!("t{p}_min_h"),
            format!("t{p}_max_h"),
            format!("t{p}_reached"),
        ]);
    }
    header.push("status".into());
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            param.to_string(),
            r.value.clone(),
            r.replicates.to_string(),
            r.failed.to_string(),
        ];
        for st in &r.milestones {
            rec.extend([
                opt(st.mean),
                opt(st.min),
                opt(st.max),
                st.reached.to_string(),
            ]);
        }
        rec.push(if r.failed == 0 {
            "ok".into()
        } else {
            "failed".into()
        });
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_runs<W: std::io::Write>(w: W, runs: &[RunRecord]) -> Result<(), SimError> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["value".to_string(), "replicate".into(), "seed".into()];
    header.extend(MILESTONES.iter().map(|&p| format!("t{}_h", pct(p))));
    header.extend(["final_fraction".into(), "status".into()]);
    out.write_record(&header)?;
    for r in runs {
        let mut rec = vec![r.value.clone(), r.replicate.to_string(), r.seed.to_string()];
        rec.extend(r.milestones_h.iter().map(|&h| opt(h)));
        rec.push(opt(r.final_fraction));
        rec.push(r.error.clone().unwrap_or_else(|| "ok".into()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub out_dir: PathBuf,
    pub runs: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

impl SweepReport {
    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| r.error.is_some()).count()
    }
}

fn write_file(
    path: &Path,
    f: impl FnOnce(BufWriter<fs::File>) -> Result<(), SimError>,
) -> Result<(), SweepError> {
    let io = |source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(io)?;
    f(BufWriter::new(file)).map_err(|e| match e {
        SimError::Io(source) => io(source),
        other => SweepError::Sim(other),
    })
}

/// Runs every value × replicate cell and writes into `spec.base.output_dir`:
/// one metrics CSV per cell, `runs.csv`, `summary.csv` and `config.txt`.
///
/// Cells run in parallel; file contents do not depend on scheduling. A cell
/// that fails is reported in `runs.csv`/`summary.csv` rather than aborting.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport, SweepError> {
    let out_dir = spec.base.output_dir.clone();
    fs::create_dir_all(&out_dir).map_err(|source| SweepError::Io {
        path: out_dir.clone(),
        source,
    })?;
    let configs = spec
        .values
        .iter()
        .map(|v| spec.config_for(v))
        .collect::<Result<Vec<_>, _>>()?;
    let graphs: Vec<Result<_, String>> = configs
        .iter()
        .map(|c| c.build_graph().map_err(|e: MapError| e.to_string()))
        .collect();

    let reps = spec.base.replicates as u32;
    let cells: Vec<(usize, u32)> = (0..spec.values.len())
        .flat_map(|v| (0..reps).map(move |r| (v, r)))
        .collect();
    let param = spec.param.as_deref().unwrap_or("run");
    let results: Vec<(u64, Result<Metrics, String>)> = cells
        .par_iter()
        .map(|&(v, r)| {
            let value = &spec.values[v];
            let seed = replicate_seed(spec.base.master_seed, value, r);
            let result = match &graphs[v] {
                Ok(g) => engine::run(g, &configs[v].sim_params(), seed).map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            match &result {
                Ok(m) => log::info!(
                    "{param}={value} rep {r}: done, final fraction {:.3}",
                    m.final_fraction()
                ),
                Err(e) => log::error!("{param}={value} rep {r}: {e}"),
            }
            (seed, result)
        })
        .collect();

    let mut runs = Vec::with_capacity(cells.len());
    let mut groups: Vec<(String, Vec<Metrics>)> = spec
        .values
        .iter()
        .map(|v| (v.clone(), Vec::new()))
        .collect();
    let mut failed = vec![0usize; spec.values.len()];
    for (&(v, r), (seed, result)) in cells.iter().zip(results) {
        let value = spec.values[v].clone();
        match result {
            Ok(m) => {
                let path = out_dir.join(spec.csv_name(&value, r));
                write_file(&path, |w| m.write_csv(w))?;
                let milestones_h = m.milestones().map(|t| t.map(|s| s / 3600.0));
                runs.push(RunRecord {
                    value,
                    replicate: r,
                    seed,
                    milestones_h,
                    final_fraction: Some(m.final_fraction()),
                    error: None,
                });
                groups[v].1.push(m);
            }
            Err(e) => {
                failed[v] += 1;
                runs.push(RunRecord {
                    value,
                    replicate: r,
                    seed,
                    milestones_h: [None; 5],
                    final_fraction: None,
                    error: Some(e),
                });
            }
        }
    }
    let mut summary = emit_milestones(&groups);
    for (row, f) in summary.iter_mut().zip(failed) {
        row.failed = f;
        row.replicates += f;
    }

    write_file(&out_dir.join("runs.csv"), |w| write_runs(w, &runs))?;
    write_file(&out_dir.join("summary.csv"), |w| {
        write_summary(w, param, &summary)
    })?;
    let doc_path = out_dir.join("config.txt");
    fs::write(&doc_path, spec.base.to_document()).map_err(|source| SweepError::Io {
        path: doc_path,
        source,
    })?;
    Ok(SweepReport {
        out_dir,
        runs,
        summary,
    })
}
