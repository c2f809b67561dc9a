//! Daily trip schedules and constant-speed vehicle motion along routes.

mod trips;
mod vehicle;

use std::fmt;

use thiserror::Error;

use crate::roadnet::RoadnetError;

pub use trips::{assign_trips, RoutingPolicy, Trip, TripParams, TripPlanner, TripSchedule};
pub use vehicle::{advance, position_of, Mode, VehicleState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VehicleId(pub u32);

impl VehicleId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VehicleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobilityError {
    #[error("no destination within the maximum trip distance of node {node}")]
    NoDestination { node: u32 },
    #[error("invalid trip parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Route(#[from] RoadnetError),
}
