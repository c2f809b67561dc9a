//! Experiment configuration: a flat `key = value` document with `#` comments.
//!
//! ```text
//! # baseline scenario
//! grid_rows = 10
//! grid_cols = 10
//! main_cols = 2, 5, 8
//! n_vehicles = 2000
//! speed = 2.0
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use thiserror::Error;

use crate::engine::SimParams;
use crate::fountain::CodecParams;
use crate::mobility::{RoutingPolicy, TripParams};
use crate::roadnet::{
    generate_manhattan_grid, load_road_graph, Perturbation, RoadGraph, RoadnetError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("`{key}`: cannot parse {value:?} as {expected}")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("`{key}`: {constraint}")]
    Constraint { key: String, constraint: String },
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Roadnet(#[from] RoadnetError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSource {
    Grid {
        rows: usize,
        cols: usize,
        block_len: f64,
        main_cols: Vec<usize>,
    },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub map: MapSource,
    pub n_vehicles: usize,
    pub seed_rate: f64,
    /// Bits per second.
    pub transfer_rate: f64,
    pub comm_range: f64,
    pub n_chunks: usize,
    pub decode_threshold: usize,
    pub file_size: usize,
    pub mean_trips: f64,
    pub max_trip_dist: f64,
    pub day_len: f64,
    pub routing: RoutingPolicy,
    pub perturb_min: f64,
    pub perturb_max: f64,
    pub speed: f64,
    pub dt: f64,
    pub sim_duration: f64,
    pub sample_interval: f64,
    pub main_road_fraction: f64,
    pub parked_exchange: bool,
    pub share_bandwidth: bool,
    pub replicates: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            map: MapSource::Grid {
                rows: 10,
                cols: 10,
                block_len: 200.0,
                main_cols: vec![2, 5, 8],
            },
            n_vehicles: 1000,
            seed_rate: 0.01,
            transfer_rate: 800_000.0,
            comm_range: 100.0,
            n_chunks: 450,
            decode_threshold: 300,
            file_size: 400_000,
            mean_trips: 3.0,
            max_trip_dist: 10_000.0,
            day_len: 86_400.0,
            routing: RoutingPolicy::Random,
            perturb_min: Perturbation::DEFAULT.min_factor,
            perturb_max: Perturbation::DEFAULT.max_factor,
            speed: 13.9,
            dt: 1.0,
            sim_duration: 72.0 * 3600.0,
            sample_interval: 60.0,
            main_road_fraction: 0.0,
            parked_exchange: false,
            share_bandwidth: false,
            replicates: 5,
            master_seed: 1,
            output_dir: PathBuf::from("out"),
        }
    }
}

/// Every key [`parse_config`] accepts.
pub const KEYS: &[&str] = &[
    "map_file",
    "grid_rows",
    "grid_cols",
    "block_len",
    "main_cols",
    "n_vehicles",
    "seed_rate",
    "transfer_rate",
    "comm_range",
    "n_chunks",
    "decode_threshold",
    "file_size",
    "mean_trips",
    "max_trip_dist",
    "day_len",
    "routing",
    "perturb_min",
    "perturb_max",
    "speed",
    "dt",
    "sim_duration",
    "sample_interval",
    "main_road_fraction",
    "parked_exchange",
    "share_bandwidth",
    "replicates",
    "master_seed",
    "output_dir",
];

fn parse<T: std::str::FromStr>(
    key: &str,
    value: &str,
    expected: &'static str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            expected: "a boolean",
        }),
    }
}

fn grid_parts(map: &mut MapSource) -> (&mut usize, &mut usize, &mut f64, &mut Vec<usize>) {
    if let MapSource::File(_) = map {
        *map = ExperimentConfig::default().map;
    }
    match map {
        MapSource::Grid {
            rows,
            cols,
            block_len,
            main_cols,
        } => (rows, cols, block_len, main_cols),
        MapSource::File(_) => unreachable!(),
    }
}

impl ExperimentConfig {
    /// Sets one key from its text form without validating the whole config.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        const REAL: &str = "a number";
        const COUNT: &str = "a non-negative integer";
        match key {
            "map_file" => self.map = MapSource::File(PathBuf::from(v)),
            "grid_rows" => *grid_parts(&mut self.map).0 = parse(key, v, COUNT)?,
            "grid_cols" => *grid_parts(&mut self.map).1 = parse(key, v, COUNT)?,
            "block_len" => *grid_parts(&mut self.map).2 = parse(key, v, REAL)?,
            "main_cols" => {
                let cols = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse(key, s, "a comma-separated list of column indices"))
                    .collect::<Result<Vec<usize>, _>>()?;
                *grid_parts(&mut self.map).3 = cols;
            }
            "n_vehicles" => self.n_vehicles = parse(key, v, COUNT)?,
            "seed_rate" => self.seed_rate = parse(key, v, REAL)?,
            "transfer_rate" => self.transfer_rate = parse(key, v, REAL)?,
            "comm_range" => self.comm_range = parse(key, v, REAL)?,
            "n_chunks" => self.n_chunks = parse(key, v, COUNT)?,
            "decode_threshold" => self.decode_threshold = parse(key, v, COUNT)?,
            "file_size" => self.file_size = parse(key, v, COUNT)?,
            "mean_trips" => self.mean_trips = parse(key, v, REAL)?,
            "max_trip_dist" => self.max_trip_dist = parse(key, v, REAL)?,
            "day_len" => self.day_len = parse(key, v, REAL)?,
            "routing" => self.routing = parse(key, v, "one of shortest, random, main_road")?,
            "perturb_min" => self.perturb_min = parse(key, v, REAL)?,
            "perturb_max" => self.perturb_max = parse(key, v, REAL)?,
            "speed" => self.speed = parse(key, v, REAL)?,
            "dt" => self.dt = parse(key, v, REAL)?,
            "sim_duration" => self.sim_duration = parse(key, v, REAL)?,
            "sample_interval" => self.sample_interval = parse(key, v, REAL)?,
            "main_road_fraction" => self.main_road_fraction = parse(key, v, REAL)?,
            "parked_exchange" => self.parked_exchange = parse_bool(key, v)?,
            "share_bandwidth" => self.share_bandwidth = parse_bool(key, v)?,
            "replicates" => self.replicates = parse(key, v, COUNT)?,
            "master_seed" => self.master_seed = parse(key, v, "an unsigned 64-bit integer")?,
            "output_dir" => self.output_dir = PathBuf::from(v),
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: 0,
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn fail(key: &str, constraint: &str) -> Result<(), ConfigError> {
            Err(ConfigError::Constraint {
                key: key.to_string(),
                constraint: constraint.to_string(),
            })
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if let MapSource::Grid {
            rows,
            cols,
            block_len,
            main_cols,
        } = &self.map
        {
            if *rows == 0 {
                return fail("grid_rows", "must be >= 1");
            }
            if *cols == 0 {
                return fail("grid_cols", "must be >= 1");
            }
            if rows * cols < 2 {
                return fail("grid_rows", "grid must have at least two nodes");
            }
            if !positive(*block_len) {
                return fail("block_len", "must be > 0");
            }
            if let Some(c) = main_cols.iter().find(|&&c| c >= *cols) {
                return fail("main_cols", &format!("column {c} outside 0..{cols}"));
            }
        }
        if self.n_vehicles == 0 {
            return fail("n_vehicles", "must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.seed_rate) {
            return fail("seed_rate", "must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.main_road_fraction) {
            return fail("main_road_fraction", "must lie in [0, 1]");
        }
        for (key, v) in [
            ("transfer_rate", self.transfer_rate),
            ("comm_range", self.comm_range),
            ("max_trip_dist", self.max_trip_dist),
            ("day_len", self.day_len),
            ("speed", self.speed),
            ("dt", self.dt),
            ("sim_duration", self.sim_duration),
            ("sample_interval", self.sample_interval),
            ("perturb_min", self.perturb_min),
        ] {
            if !positive(v) {
                return fail(key, "must be > 0");
            }
        }
        if !(self.perturb_max >= self.perturb_min) || !self.perturb_max.is_finite() {
            return fail("perturb_max", "must be >= perturb_min");
        }
        if !(self.mean_trips >= 0.0) || !self.mean_trips.is_finite() {
            return fail("mean_trips", "must be >= 0");
        }
        if self.n_chunks == 0 || self.n_chunks > u32::MAX as usize {
            return fail("n_chunks", "must be >= 1");
        }
        if self.decode_threshold == 0 {
            return fail("decode_threshold", "must be >= 1");
        }
        if self.decode_threshold > self.n_chunks {
            return fail("decode_threshold", "must be <= n_chunks");
        }
        if self.file_size == 0 {
            return fail("file_size", "must be >= 1");
        }
        if self.replicates == 0 {
            return fail("replicates", "must be >= 1");
        }
        Ok(())
    }

    pub fn codec_params(&self) -> CodecParams {
        CodecParams::for_file_len(self.file_size, self.decode_threshold, self.n_chunks)
    }

    pub fn sim_params(&self) -> SimParams {
        SimParams {
            n_vehicles: self.n_vehicles,
            seed_rate: self.seed_rate,
            transfer_rate: self.transfer_rate,
            comm_range: self.comm_range,
            n_chunks: self.n_chunks,
            decode_threshold: self.decode_threshold,
            chunk_wire_size: self.codec_params().chunk_wire_size(),
            speed: self.speed,
            dt: self.dt,
            sim_duration: self.sim_duration,
            sample_interval: self.sample_interval,
            trips: TripParams {
                mean_trips: self.mean_trips,
                max_trip_dist: self.max_trip_dist,
                day_len: self.day_len,
                base_policy: self.routing,
                main_road_fraction: self.main_road_fraction,
                perturbation: Perturbation {
                    min_factor: self.perturb_min,
                    max_factor: self.perturb_max,
                },
            },
            parked_exchange: self.parked_exchange,
            share_bandwidth: self.share_bandwidth,
        }
    }

    pub fn build_graph(&self) -> Result<RoadGraph, MapError> {
        match &self.map {
            MapSource::Grid {
                rows,
                cols,
                block_len,
                main_cols,
            } => Ok(generate_manhattan_grid(
                *rows, *cols, *block_len, main_cols,
            )?),
            MapSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| MapError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(load_road_graph(&text)?)
            }
        }
    }

    /// Canonical document form; parsing it gives back an equal config.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        match &self.map {
            MapSource::Grid {
                rows,
                cols,
                block_len,
                main_cols,
            } => {
                let mains: Vec<String> = main_cols.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "grid_rows = {rows}");
                let _ = writeln!(out, "grid_cols = {cols}");
                let _ = writeln!(out, "block_len = {block_len}");
                let _ = writeln!(out, "main_cols = {}", mains.join(", "));
            }
            MapSource::File(p) => {
                let _ = writeln!(out, "map_file = {}", p.display());
            }
        }
        let fields: [(&str, String); 23] = [
            ("n_vehicles", self.n_vehicles.to_string()),
            ("seed_rate", self.seed_rate.to_string()),
            ("transfer_rate", self.transfer_rate.to_string()),
            ("comm_range", self.comm_range.to_string()),
            ("n_chunks", self.n_chunks.to_string()),
            ("decode_threshold", self.decode_threshold.to_string()),
            ("file_size", self.file_size.to_string()),
            ("mean_trips", self.mean_trips.to_string()),
            ("max_trip_dist", self.max_trip_dist.to_string()),
            ("day_len", self.day_len.to_string()),
            ("routing", self.routing.name().to_string()),
            ("perturb_min", self.perturb_min.to_string()),
            ("perturb_max", self.perturb_max.to_string()),
            ("speed", self.speed.to_string()),
            ("dt", self.dt.to_string()),
            ("sim_duration", self.sim_duration.to_string()),
            ("sample_interval", self.sample_interval.to_string()),
            ("main_road_fraction", self.main_road_fraction.to_string()),
            ("parked_exchange", self.parked_exchange.to_string()),
            ("share_bandwidth", self.share_bandwidth.to_string()),
            ("replicates", self.replicates.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("output_dir", self.output_dir.display().to_string()),
        ];
        for (k, v) in fields {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// Parses and validates a config document; absent keys keep their defaults.
pub fn parse_config(document: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    for (i, raw) in document.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let Some((key, value)) = text.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: raw.to_string(),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: raw.to_string(),
            });
        }
        let Some(&known) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if seen.contains(&known) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        seen.push(known);
        cfg.set(known, value)?;
    }
    if seen.contains(&"map_file")
        && seen
            .iter()
            .any(|k| k.starts_with("grid_") || *k == "block_len" || *k == "main_cols")
    {
        return Err(ConfigError::Constraint {
            key: "map_file".into(),
            constraint: "cannot be combined with grid keys".into(),
        });
    }
    cfg.validate()?;
    Ok(cfg)
}
