use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::roadnet::{
    distances_from, main_road_route, random_route, shortest_path, NodeId, Perturbation, RoadGraph,
    Route,
};

use super::{MobilityError, VehicleId};

/// How a vehicle picks routes between its trip endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoutingPolicy {
    Shortest,
    Random,
    MainRoad,
}

impl RoutingPolicy {
    pub fn name(self) -> &'static str {
        match self {
            RoutingPolicy::Shortest => "shortest",
            RoutingPolicy::Random => "random",
            RoutingPolicy::MainRoad => "main_road",
        }
    }
}

impl std::str::FromStr for RoutingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shortest" => Ok(RoutingPolicy::Shortest),
            "random" => Ok(RoutingPolicy::Random),
            "main_road" => Ok(RoutingPolicy::MainRoad),
            other => Err(format!("unknown routing policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trip {
    pub depart_time: f64,
    pub origin: NodeId,
    pub destination: NodeId,
    pub route: Arc<Route>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripSchedule {
    pub vehicle: VehicleId,
    pub trips: Vec<Trip>,
}

impl TripSchedule {
    pub fn empty(vehicle: VehicleId) -> Self {
        Self {
            vehicle,
            trips: Vec::new(),
        }
    }

    /// Trips sorted by departure and each starting where the previous ended.
    pub fn is_chained(&self) -> bool {
        self.trips
            .windows(2)
            .all(|w| w[0].depart_time <= w[1].depart_time && w[0].destination == w[1].origin)
            && self
                .trips
                .iter()
                .all(|t| t.route.origin() == t.origin && t.route.destination() == t.destination)
    }

    /// Where the vehicle ends up after its last trip, or `start` if it has none.
    pub fn final_node(&self, start: NodeId) -> NodeId {
        self.trips.last().map_or(start, |t| t.destination)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripParams {
    pub mean_trips: f64,
    /// Upper bound on the shortest-path distance between trip endpoints, meters.
    pub max_trip_dist: f64,
    /// Seconds in one simulated day; departures are uniform over a day.
    pub day_len: f64,
    /// Policy of vehicles that do not prefer main roads.
    pub base_policy: RoutingPolicy,
    pub main_road_fraction: f64,
    pub perturbation: Perturbation,
}

impl Default for TripParams {
    fn default() -> Self {
        Self {
            mean_trips: 3.0,
            max_trip_dist: 10_000.0,
            day_len: 86_400.0,
            base_policy: RoutingPolicy::Random,
            main_road_fraction: 0.0,
            perturbation: Perturbation::DEFAULT,
        }
    }
}

impl TripParams {
    fn validate(&self) -> Result<(), MobilityError> {
        let bad = |m: &str| Err(MobilityError::InvalidParams(m.to_string()));
        if !(self.mean_trips >= 0.0) || !self.mean_trips.is_finite() {
            return bad("mean_trips must be a finite value >= 0");
        }
        if !(self.max_trip_dist > 0.0) {
            return bad("max_trip_dist must be > 0");
        }
        if !(self.day_len > 0.0) || !self.day_len.is_finite() {
            return bad("day_len must be > 0");
        }
        if !(0.0..=1.0).contains(&self.main_road_fraction) {
            return bad("main_road_fraction must lie in [0, 1]");
        }
        let p = self.perturbation;
        if !(p.min_factor > 0.0) || !(p.max_factor >= p.min_factor) {
            return bad("perturbation factors must satisfy 0 < min <= max");
        }
        Ok(())
    }
}

/// Draws daily itineraries over one road graph.
pub struct TripPlanner<'g> {
    graph: &'g RoadGraph,
    params: TripParams,
    // destinations reachable within (0, max_trip_dist], per origin
    candidates: Vec<Option<Arc<[NodeId]>>>,
}

impl<'g> TripPlanner<'g> {
    pub fn new(graph: &'g RoadGraph, params: TripParams) -> Result<Self, MobilityError> {
        params.validate()?;
        if graph.node_count() == 0 {
            return Err(MobilityError::InvalidParams(
                "road graph has no nodes".into(),
            ));
        }
        Ok(Self {
            graph,
            params,
            candidates: vec![None; graph.node_count()],
        })
    }

    pub fn params(&self) -> &TripParams {
        &self.params
    }

    /// One Bernoulli(main_road_fraction) draw per vehicle.
    pub fn draw_policies<R: Rng + ?Sized>(
        &self,
        n_vehicles: usize,
        rng: &mut R,
    ) -> Vec<RoutingPolicy> {
        (0..n_vehicles)
            .map(|_| {
                if rng.random_bool(self.params.main_road_fraction) {
                    RoutingPolicy::MainRoad
                } else {
                    self.params.base_policy
                }
            })
            .collect()
    }

    pub fn uniform_starts<R: Rng + ?Sized>(&self, n_vehicles: usize, rng: &mut R) -> Vec<NodeId> {
        let n = self.graph.node_count() as u32;
        (0..n_vehicles)
            .map(|_| NodeId(rng.random_range(0..n)))
            .collect()
    }

    fn destinations(&mut self, origin: NodeId) -> Result<Arc<[NodeId]>, MobilityError> {
        if let Some(c) = &self.candidates[origin.index()] {
            return Ok(c.clone());
        }
        let dist = distances_from(self.graph, origin, |_, e| Some(e.length));
        let list: Arc<[NodeId]> = dist
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d > 0.0 && d <= self.params.max_trip_dist)
            .map(|(i, _)| NodeId(i as u32))
            .collect();
        if list.is_empty() {
            return Err(MobilityError::NoDestination { node: origin.0 });
        }
        self.candidates[origin.index()] = Some(list.clone());
        Ok(list)
    }

    pub fn route<R: Rng + ?Sized>(
        &self,
        policy: RoutingPolicy,
        origin: NodeId,
        destination: NodeId,
        rng: &mut R,
    ) -> Result<Route, MobilityError> {
        let g = self.graph;
        Ok(match policy {
            RoutingPolicy::Shortest => shortest_path(g, origin, destination)?,
            RoutingPolicy::Random => {
                random_route(g, origin, destination, self.params.perturbation, rng)?
            }
            RoutingPolicy::MainRoad => main_road_route(g, origin, destination)?,
        })
    }

    /// Itineraries for day `day` (departures in `[day·day_len, (day+1)·day_len)`).
    ///
    /// Vehicle `i` starts at `starts[i]` and uses `policies[i]` for every trip.
    pub fn plan_day<R: Rng + ?Sized>(
        &mut self,
        day: u32,
        starts: &[NodeId],
        policies: &[RoutingPolicy],
        rng: &mut R,
    ) -> Result<Vec<TripSchedule>, MobilityError> {
        assert_eq!(starts.len(), policies.len());
        let day_start = day as f64 * self.params.day_len;
        let poisson = (self.params.mean_trips > 0.0)
            .then(|| Poisson::new(self.params.mean_trips).expect("validated mean"));

        let mut schedules = Vec::with_capacity(starts.len());
        for (i, (&start, &policy)) in starts.iter().zip(policies).enumerate() {
            let vehicle = VehicleId(i as u32);
            let count = poisson.as_ref().map_or(0, |p| p.sample(rng) as usize);
            let mut times: Vec<f64> = (0..count)
                .map(|_| day_start + rng.random::<f64>() * self.params.day_len)
                .collect();
            times.sort_by(f64::total_cmp);

            let mut trips = Vec::with_capacity(count);
            let mut origin = start;
            for depart_time in times {
                let candidates = self.destinations(origin)?;
                let destination = *candidates.choose(rng).expect("nonempty candidate list");
                let route = self.route(policy, origin, destination, rng)?;
                trips.push(Trip {
                    depart_time,
                    origin,
                    destination,
                    route: Arc::new(route),
                });
                origin = destination;
            }
            schedules.push(TripSchedule { vehicle, trips });
        }
        Ok(schedules)
    }
}

/// Day-0 schedules from uniformly drawn starting nodes, with a fresh policy
/// draw per vehicle.
pub fn assign_trips<R: Rng + ?Sized>(
    g: &RoadGraph,
    n_vehicles: usize,
    params: TripParams,
    rng: &mut R,
) -> Result<Vec<TripSchedule>, MobilityError> {
    let mut planner = TripPlanner::new(g, params)?;
    let policies = planner.draw_policies(n_vehicles, rng);
    let starts = planner.uniform_starts(n_vehicles, rng);
    planner.plan_day(0, &starts, &policies, rng)
}
