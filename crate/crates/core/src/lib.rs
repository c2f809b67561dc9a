//! Simulation of collaborative file distribution among vehicles: a road
//! network and trip model, a GF(256) random linear fountain code, and a
//! discrete-time contact and exchange engine with sweep tooling.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod engine;
pub mod fountain;
pub mod mobility;
pub mod roadnet;
pub mod sweep;

pub use config::{parse_config, ConfigError, ExperimentConfig, MapSource};
pub use engine::{ChunkStore, Contact, Metrics, SimError, SimParams, Simulation};
pub use fountain::{CodecParams, CodedChunk, DecoderState, FountainError, SourceBlock};
pub use mobility::{RoutingPolicy, TripSchedule, VehicleId, VehicleState};
pub use roadnet::{NodeId, Point, RoadGraph, Route};
pub use sweep::{run_sweep, SweepError, SweepSpec};
