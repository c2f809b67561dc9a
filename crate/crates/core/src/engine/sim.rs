use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fountain::{CodedChunk, DecoderState};
use crate::mobility::{
    advance, position_of, RoutingPolicy, TripParams, TripPlanner, TripSchedule, VehicleId,
    VehicleState,
};
use crate::roadnet::{NodeId, Point, RoadGraph};

use super::contact::{Contact, ContactDetector};
use super::exchange::{exchange, LinkCarry};
use super::metrics::Metrics;
use super::seeds::provision_seeds;
use super::store::ChunkStore;
use super::SimError;

const STREAM_SEEDS: u64 = 1;
const STREAM_TRIPS: u64 = 2;
const STREAM_EXCHANGE: u64 = 3;

/// Everything a single run needs besides the road graph and the RNG seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub n_vehicles: usize,
    pub seed_rate: f64,
    /// Per-link rate in bits per second.
    pub transfer_rate: f64,
    pub comm_range: f64,
    pub n_chunks: usize,
    pub decode_threshold: usize,
    /// Bytes on the air per chunk (id plus payload).
    pub chunk_wire_size: usize,
    pub speed: f64,
    pub dt: f64,
    pub sim_duration: f64,
    pub sample_interval: f64,
    pub trips: TripParams,
    /// Let parked vehicles exchange with anything in range of their node.
    pub parked_exchange: bool,
    /// Split each vehicle's rate evenly over its links in a step.
    pub share_bandwidth: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            n_vehicles: 1000,
            seed_rate: 0.01,
            transfer_rate: 800_000.0,
            comm_range: 100.0,
            n_chunks: 450,
            decode_threshold: 300,
            chunk_wire_size: 1338,
            speed: 13.9,
            dt: 1.0,
            sim_duration: 72.0 * 3600.0,
            sample_interval: 60.0,
            trips: TripParams::default(),
            parked_exchange: false,
            share_bandwidth: false,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::InvalidParams(m.to_string()));
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(0.0..=1.0).contains(&self.seed_rate) {
            return bad("seed_rate must lie in [0, 1]");
        }
        if !positive(self.transfer_rate) {
            return bad("transfer_rate must be > 0");
        }
        if !positive(self.comm_range) {
            return bad("comm_range must be > 0");
        }
        if self.n_chunks == 0 || self.decode_threshold == 0 || self.decode_threshold > self.n_chunks
        {
            return bad("need 0 < decode_threshold <= n_chunks");
        }
        if self.n_chunks > u32::MAX as usize {
            return bad("n_chunks too large");
        }
        if self.chunk_wire_size == 0 {
            return bad("chunk_wire_size must be > 0");
        }
        if !positive(self.speed) || !positive(self.dt) || !positive(self.sample_interval) {
            return bad("speed, dt and sample_interval must be > 0");
        }
        if !(self.sim_duration >= 0.0) || !self.sim_duration.is_finite() {
            return bad("sim_duration must be >= 0");
        }
        Ok(())
    }

    /// Whole-rate budget of one link direction for one step, in chunks.
    pub fn link_budget(&self) -> f64 {
        self.transfer_rate * self.dt / (8.0 * self.chunk_wire_size as f64)
    }
}

/// Running totals over a simulation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimStats {
    pub steps: u64,
    /// Sum over steps of the number of contacts.
    pub contact_steps: u64,
    pub chunks_transferred: u64,
    /// Sum over steps of `dt` times the number of moving vehicles.
    pub en_route_seconds: f64,
    /// Vehicles whose distinct chunk count reached the threshold while their
    /// coefficient rank was still short (payload mode only).
    pub rank_short_at_threshold: u64,
}

struct PayloadMode {
    held: Vec<Vec<Option<Arc<[u8]>>>>,
    rank: Vec<DecoderState>,
}

/// Departure queue key; non-negative f64 bit patterns order like the values.
type Departure = Reverse<(u64, u32)>;

/// Discrete-time state of one run.
pub struct Simulation<'g> {
    graph: &'g RoadGraph,
    params: SimParams,
    planner: TripPlanner<'g>,
    policies: Vec<RoutingPolicy>,
    day_starts: Vec<NodeId>,
    planned_days: u32,
    schedules: Vec<TripSchedule>,
    vehicles: Vec<VehicleState>,
    stores: Vec<ChunkStore>,
    seeds: Vec<VehicleId>,
    moving: Vec<u32>,
    departures: BinaryHeap<Departure>,
    carries: HashMap<(u32, u32), LinkCarry>,
    detector: ContactDetector,
    last_contacts: Vec<Contact>,
    trip_rng: ChaCha8Rng,
    exchange_rng: ChaCha8Rng,
    clock: f64,
    next_sample: f64,
    completed: usize,
    metrics: Metrics,
    stats: SimStats,
    payloads: Option<PayloadMode>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl<'g> Simulation<'g> {
    /// Provisions seeds, places vehicles and plans the first day.
    pub fn new(graph: &'g RoadGraph, params: SimParams, seed: u64) -> Result<Self, SimError> {
        params.validate()?;
        let n = params.n_vehicles;
        let mut seed_rng = stream(seed, STREAM_SEEDS);
        let mut trip_rng = stream(seed, STREAM_TRIPS);

        let mut stores = vec![ChunkStore::new(params.n_chunks); n];
        let seeds = provision_seeds(
            &mut stores,
            params.seed_rate,
            params.n_chunks,
            &mut seed_rng,
        );

        let planner = TripPlanner::new(graph, params.trips)?;
        let policies = planner.draw_policies(n, &mut trip_rng);
        let day_starts = planner.uniform_starts(n, &mut trip_rng);
        let mut vehicles: Vec<VehicleState> = day_starts
            .iter()
            .enumerate()
            .map(|(i, &at)| VehicleState::parked(VehicleId(i as u32), at))
            .collect();
        for s in &seeds {
            vehicles[s.index()].is_seed = true;
        }

        let mut metrics = Metrics::new(n, params.sample_interval);
        let completed = seeds.len();
        metrics.record(0.0, completed);

        let mut sim = Self {
            graph,
            planner,
            policies,
            day_starts,
            planned_days: 0,
            schedules: (0..n)
                .map(|i| TripSchedule::empty(VehicleId(i as u32)))
                .collect(),
            vehicles,
            stores,
            seeds,
            moving: Vec::new(),
            departures: BinaryHeap::new(),
            carries: HashMap::new(),
            detector: ContactDetector::new(),
            last_contacts: Vec::new(),
            trip_rng,
            exchange_rng: stream(seed, STREAM_EXCHANGE),
            clock: 0.0,
            next_sample: params.sample_interval,
            completed,
            metrics,
            stats: SimStats::default(),
            payloads: None,
            params,
        };
        sim.plan_next_day()?;
        Ok(sim)
    }

    /// Switches on payload carrying: every transfer copies the sender's bytes
    /// and completion requires full coefficient rank instead of a chunk count.
    ///
    /// `chunks` must be the full coded set, ids `0..n_chunks` in order. Only
    /// valid before the first step.
    pub fn with_payloads(mut self, chunks: Vec<CodedChunk>) -> Result<Self, SimError> {
        if self.stats.steps > 0 {
            return Err(SimError::InvalidParams(
                "payloads must be attached before the first step".into(),
            ));
        }
        let n = self.params.n_chunks;
        if chunks.len() != n
            || chunks
                .iter()
                .enumerate()
                .any(|(i, c)| c.chunk_id as usize != i)
        {
            return Err(SimError::InvalidParams(format!(
                "expected chunks with ids 0..{n} in order"
            )));
        }
        let cloud: Vec<Arc<[u8]>> = chunks.into_iter().map(|c| Arc::from(c.payload)).collect();
        let k = self.params.decode_threshold;
        let mut mode = PayloadMode {
            held: vec![vec![None; n]; self.params.n_vehicles],
            rank: vec![DecoderState::new(k, 0); self.params.n_vehicles],
        };
        for s in &self.seeds {
            let i = s.index();
            mode.held[i] = cloud.iter().cloned().map(Some).collect();
            for id in 0..n as u32 {
                if mode.rank[i].is_complete() {
                    break;
                }
                mode.rank[i].absorb(id, &[])?;
            }
        }
        self.payloads = Some(mode);
        Ok(self)
    }

    fn plan_next_day(&mut self) -> Result<(), SimError> {
        let day = self.planned_days;
        let plans =
            self.planner
                .plan_day(day, &self.day_starts, &self.policies, &mut self.trip_rng)?;
        for (i, plan) in plans.into_iter().enumerate() {
            let sched = &mut self.schedules[i];
            let pending_before = sched.trips.len() > self.vehicles[i].next_trip;
            if let Some(last) = plan.trips.last() {
                self.day_starts[i] = last.destination;
            }
            let first = plan.trips.first().map(|t| t.depart_time);
            sched.trips.extend(plan.trips);
            if let (Some(t), false, false) = (first, pending_before, self.vehicles[i].is_en_route())
            {
                self.departures.push(Reverse((t.to_bits(), i as u32)));
            }
        }
        self.planned_days += 1;
        Ok(())
    }

    pub fn graph(&self) -> &RoadGraph {
        self.graph
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn vehicles(&self) -> &[VehicleState] {
        &self.vehicles
    }

    pub fn schedules(&self) -> &[TripSchedule] {
        &self.schedules
    }

    pub fn stores(&self) -> &[ChunkStore] {
        &self.stores
    }

    pub fn seeds(&self) -> &[VehicleId] {
        &self.seeds
    }

    pub fn completed_count(&self) -> usize {
        self.completed
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn stats(&self) -> &SimStats {
        &self.stats
    }

    /// Contacts detected in the most recent step.
    pub fn last_contacts(&self) -> &[Contact] {
        &self.last_contacts
    }

    /// Chunks vehicle `v` holds, with the bytes it actually received.
    /// `None` unless payload mode is on.
    pub fn held_chunks(&self, v: VehicleId) -> Option<Vec<CodedChunk>> {
        let mode = self.payloads.as_ref()?;
        Some(
            mode.held[v.index()]
                .iter()
                .enumerate()
                .filter_map(|(id, p)| {
                    p.as_ref().map(|bytes| CodedChunk {
                        chunk_id: id as u32,
                        payload: bytes.to_vec(),
                    })
                })
                .collect(),
        )
    }

    /// Overrides a vehicle's state; used to set up hand-built scenarios.
    /// Pending departures are rebuilt from the new states.
    pub fn set_vehicle_states(&mut self, states: Vec<VehicleState>) {
        assert_eq!(states.len(), self.vehicles.len());
        self.vehicles = states;
        self.moving = self
            .vehicles
            .iter()
            .filter(|v| v.is_en_route())
            .map(|v| v.id.0)
            .collect();
        self.departures.clear();
        for v in self.vehicles.iter().filter(|v| !v.is_en_route()) {
            if let Some(t) = v.next_departure(&self.schedules[v.id.index()]) {
                self.departures.push(Reverse((t.to_bits(), v.id.0)));
            }
        }
    }

    /// Replaces the trip schedules, e.g. to freeze traffic in tests.
    pub fn set_schedules(&mut self, schedules: Vec<TripSchedule>) {
        assert_eq!(schedules.len(), self.schedules.len());
        self.schedules = schedules;
        let states = self.vehicles.clone();
        self.set_vehicle_states(states);
    }

    fn positions(&self) -> Vec<(VehicleId, Point)> {
        if self.params.parked_exchange {
            return self
                .vehicles
                .iter()
                .map(|v| {
                    let p = match v.parked_at() {
                        Some(n) => self.graph.node(n),
                        None => position_of(v, self.graph).expect("moving vehicle has a position"),
                    };
                    (v.id, p)
                })
                .collect();
        }
        self.moving
            .iter()
            .map(|&i| {
                let v = &self.vehicles[i as usize];
                (
                    v.id,
                    position_of(v, self.graph).expect("moving vehicle has a position"),
                )
            })
            .collect()
    }

    /// Advances the clock by one `dt`.
    pub fn step(&mut self) -> Result<(), SimError> {
        let now = self.clock;
        let dt = self.params.dt;
        let end = now + dt;
        while self.planned_days as f64 * self.params.trips.day_len <= end {
            self.plan_next_day()?;
        }

        // (1) mobility
        let speed = self.params.speed;
        let mut still = Vec::with_capacity(self.moving.len() + 8);
        let mut arrived = Vec::new();
        for &i in &self.moving {
            let v = i as usize;
            let next = advance(&self.vehicles[v], &self.schedules[v], now, dt, speed);
            if next.is_en_route() {
                still.push(i);
            } else if let Some(t) = next.next_departure(&self.schedules[v]) {
                arrived.push(Reverse((t.to_bits(), i)));
            }
            self.vehicles[v] = next;
        }
        while let Some(&Reverse((bits, i))) = self.departures.peek() {
            if f64::from_bits(bits) > now + dt {
                break;
            }
            self.departures.pop();
            let v = i as usize;
            let next = advance(&self.vehicles[v], &self.schedules[v], now, dt, speed);
            debug_assert!(next.is_en_route());
            self.vehicles[v] = next;
            still.push(i);
        }
        self.departures.extend(arrived);
        still.sort_unstable();
        self.moving = still;
        self.stats.en_route_seconds += dt * self.moving.len() as f64;

        // (2) positions, (3) contacts
        let positions = self.positions();
        let contacts = self.detector.detect(&positions, self.params.comm_range);

        // (4) exchange against pre-step snapshots
        let base = self.params.link_budget();
        let mut degree: HashMap<u32, u32> = HashMap::new();
        if self.params.share_bandwidth {
            for c in &contacts {
                *degree.entry(c.a.0).or_default() += 1;
                *degree.entry(c.b.0).or_default() += 1;
            }
        }
        let budget_of = |v: VehicleId| match degree.get(&v.0) {
            Some(&d) => base / d as f64,
            None => base,
        };
        let mut carries = HashMap::with_capacity(contacts.len());
        // (receiver, sender, ids)
        let mut gains: Vec<(u32, u32, Vec<u32>)> = Vec::new();
        for c in &contacts {
            let key = (c.a.0, c.b.0);
            let mut carry = self.carries.remove(&key).unwrap_or_default();
            let (sa, sb) = (&self.stores[c.a.index()].set, &self.stores[c.b.index()].set);
            let t = exchange(
                sa,
                sb,
                budget_of(c.a),
                budget_of(c.b),
                &mut carry,
                &mut self.exchange_rng,
            );
            if !t.a_to_b.is_empty() {
                gains.push((c.b.0, c.a.0, t.a_to_b));
            }
            if !t.b_to_a.is_empty() {
                gains.push((c.a.0, c.b.0, t.b_to_a));
            }
            carries.insert(key, carry);
        }
        self.carries = carries;
        self.stats.contact_steps += contacts.len() as u64;
        self.last_contacts = contacts;

        // (5) apply gains and completion
        let k = self.params.decode_threshold;
        for (r, s, ids) in gains {
            let (r, s) = (r as usize, s as usize);
            let mut any = false;
            for id in ids {
                if !self.stores[r].set.insert(id) {
                    continue;
                }
                any = true;
                self.stats.chunks_transferred += 1;
                if let Some(mode) = &mut self.payloads {
                    let bytes = mode.held[s][id as usize].clone();
                    debug_assert!(bytes.is_some(), "sender lacks payload it advertised");
                    mode.held[r][id as usize] = bytes;
                    mode.rank[r].absorb(id, &[])?;
                }
            }
            if !any || self.stores[r].is_complete() {
                continue;
            }
            let reached = match &self.payloads {
                Some(mode) => {
                    let full = mode.rank[r].is_complete();
                    if !full && self.stores[r].count() >= k {
                        self.stats.rank_short_at_threshold += 1;
                    }
                    full
                }
                None => self.stores[r].count() >= k,
            };
            if self.stores[r].mark_complete(reached, end) {
                self.completed += 1;
            }
        }

        // (6) clock and sampling
        self.clock = end;
        self.stats.steps += 1;
        let tol = 1e-9 * self.params.sample_interval;
        if self.clock >= self.next_sample - tol {
            self.metrics.record(self.clock, self.completed);
            while self.next_sample <= self.clock + tol {
                self.next_sample += self.params.sample_interval;
            }
        }
        Ok(())
    }

    /// Steps until `sim_duration` and closes the series with a final sample.
    pub fn run_to_end(&mut self) -> Result<(), SimError> {
        let total = (self.params.sim_duration / self.params.dt - 1e-9)
            .ceil()
            .max(0.0) as u64;
        while self.stats.steps < total {
            self.step()?;
        }
        if self
            .metrics
            .series()
            .last()
            .is_some_and(|s| s.time < self.clock)
        {
            self.metrics.record(self.clock, self.completed);
        }
        Ok(())
    }

    pub fn into_metrics(self) -> Metrics {
        self.metrics
    }
}

/// One complete run.
pub fn run(graph: &RoadGraph, params: &SimParams, seed: u64) -> Result<Metrics, SimError> {
    let mut sim = Simulation::new(graph, params.clone(), seed)?;
    sim.run_to_end()?;
    Ok(sim.into_metrics())
}
