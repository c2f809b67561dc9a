use std::sync::Arc;

use crate::roadnet::{NodeId, Point, RoadGraph, Route};

use super::trips::TripSchedule;
use super::VehicleId;

// absorbs float drift when summing per-step distances
const ARRIVAL_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Parked(NodeId),
    EnRoute { route: Arc<Route>, traveled: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub id: VehicleId,
    pub mode: Mode,
    pub is_seed: bool,
    /// Index of the next trip in the vehicle's schedule that has not departed.
    pub next_trip: usize,
}

impl VehicleState {
    pub fn parked(id: VehicleId, at: NodeId) -> Self {
        Self {
            id,
            mode: Mode::Parked(at),
            is_seed: false,
            next_trip: 0,
        }
    }

    pub fn is_en_route(&self) -> bool {
        matches!(self.mode, Mode::EnRoute { .. })
    }

    pub fn parked_at(&self) -> Option<NodeId> {
        match self.mode {
            Mode::Parked(n) => Some(n),
            Mode::EnRoute { .. } => None,
        }
    }

    /// Departure time of the next pending trip, if any.
    pub fn next_departure(&self, schedule: &TripSchedule) -> Option<f64> {
        schedule.trips.get(self.next_trip).map(|t| t.depart_time)
    }
}

/// One kinematic step over `(now, now + dt]`.
///
/// A parked vehicle whose next trip is due by `now + dt` starts that trip at
/// its origin without moving this step. A moving vehicle covers `speed · dt`
/// meters and parks at its destination once it reaches the end of the route;
/// any leftover time is dropped rather than spent on a following departure.
pub fn advance(
    state: &VehicleState,
    schedule: &TripSchedule,
    now: f64,
    dt: f64,
    speed: f64,
) -> VehicleState {
    debug_assert!(dt > 0.0 && speed > 0.0);
    let mut next = state.clone();
    match &state.mode {
        Mode::Parked(at) => {
            if let Some(trip) = schedule.trips.get(state.next_trip) {
                if trip.depart_time <= now + dt {
                    debug_assert_eq!(trip.origin, *at, "trip chain broken");
                    next.mode = Mode::EnRoute {
                        route: trip.route.clone(),
                        traveled: 0.0,
                    };
                    next.next_trip += 1;
                }
            }
        }
        Mode::EnRoute { route, traveled } => {
            let moved = traveled + speed * dt;
            next.mode = if moved >= route.total_length() - ARRIVAL_EPS {
                Mode::Parked(route.destination())
            } else {
                Mode::EnRoute {
                    route: route.clone(),
                    traveled: moved,
                }
            };
        }
    }
    next
}

/// Position of a moving vehicle; parked vehicles have none.
pub fn position_of(state: &VehicleState, g: &RoadGraph) -> Option<Point> {
    match &state.mode {
        Mode::Parked(_) => None,
        Mode::EnRoute { route, traveled } => Some(route.position_at(g, *traveled)),
    }
}
