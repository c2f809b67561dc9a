//! Discrete-time dissemination loop: contacts, rate-limited exchange, seeds
//! and completion metrics.

mod contact;
mod exchange;
mod metrics;
mod seeds;
mod sim;
mod store;

use thiserror::Error;

use crate::fountain::FountainError;
use crate::mobility::MobilityError;

pub use contact::{detect_contacts, Contact, ContactDetector};
pub use exchange::{exchange, LinkCarry, Transfer};
pub use metrics::{time_to_fraction, Metrics, Sample, MILESTONES};
pub use seeds::{provision_seeds, seed_count};
pub use sim::{run, SimParams, SimStats, Simulation};
pub use store::{ChunkSet, ChunkStore};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Mobility(#[from] MobilityError),
    #[error(transparent)]
    Fountain(#[from] FountainError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed metrics file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
