//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.
//!
//! Scenario settings shared by the dissemination criteria: 10x10 grid of
//! 200 m blocks with main columns {2, 5, 8}, 100 m range, 450 chunks with
//! threshold 300, 3 trips per vehicle per day, cruise speed 2 m/s, contacts
//! between moving vehicles only.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestCaseError, TestRunner};
use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vcd_core::config::ExperimentConfig;
use vcd_core::engine::{detect_contacts, SimParams, Simulation};
use vcd_core::fountain::{
    coefficient_rank, decode, derive_coefficients, encode, gf256, CodecParams, FountainError,
};
use vcd_core::mobility::{TripParams, TripPlanner, VehicleId};
use vcd_core::roadnet::{generate_manhattan_grid, Point};
use vcd_core::sweep::{run_sweep, SummaryRow, SweepSpec};

// criterion 1
const FILE_LEN: usize = 400_000;
const K: usize = 300;
const N: usize = 450;
const SUBSET_TRIALS: usize = 1000;
const MIN_DECODE_RATE: f64 = 0.99;
const SHORT_TRIALS: usize = 200;
const RANK_ORACLE_TRIALS: usize = 40;
// criterion 2
const CONTACT_INSTANCES: usize = 100;
const CONTACT_MAX_VEHICLES: usize = 500;
// criterion 4
const SEED_RATES: [&str; 5] = ["0.1", "0.05", "0.03", "0.01", "0.0002"];
const SEED_FLEET: usize = 2000;
const SEED_HOURS: f64 = 48.0;
const T80_MAX_SPREAD: f64 = 0.25;
// criterion 5 uses the 1% runs of criterion 4
// criterion 6
const RATES: [&str; 2] = ["16000", "800000"];
const RATE_SEED_RATE: f64 = 0.05;
const RATE_MAX_GAP: f64 = 0.10;
// criterion 7
const DENSITY_BASELINE: usize = 3000;
const DENSITY_FACTORS: [f64; 4] = [0.3, 0.5, 1.0, 1.5];
const DENSITY_MAX_SPREAD: f64 = 0.30;
// criterion 8
const MAIN_ROAD_FRACTIONS: [&str; 3] = ["0", "0.5", "1"];
const MAIN_ROAD_FLEET: usize = 700;
const MAIN_ROAD_HOURS: f64 = 72.0;
const MAIN_ROAD_REPLICATES: usize = 10;
const MAIN_ROAD_MIN_GAIN: f64 = 0.15;
// criterion 9
const PROPERTY_CASES: u32 = 10_000;
// criterion 10
const PAYLOAD_FLEET: usize = 50;

const HOUR: f64 = 3600.0;

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        let line = format!(
            "{} criterion {id:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        println!("{line}");
        self.lines.push((pass, line));
    }
}

fn desk(n_vehicles: usize, hours: f64, out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        n_vehicles,
        speed: 2.0,
        sim_duration: hours * HOUR,
        output_dir: out.to_path_buf(),
        master_seed: 20_240_601,
        ..ExperimentConfig::default()
    }
}

fn sweep(base: ExperimentConfig, param: &str, values: &[&str]) -> Vec<SummaryRow> {
    let spec = SweepSpec::new(base, param, values.iter().map(|v| v.to_string()).collect()).unwrap();
    let report = run_sweep(&spec).unwrap();
    assert_eq!(report.failures(), 0);
    report.summary
}

/// Mean hours to milestone `i`; unreached in any replicate ranks as infinite.
fn mean_h(row: &SummaryRow, i: usize) -> f64 {
    row.milestones[i].mean.unwrap_or(f64::INFINITY)
}

fn fmt_h(h: f64) -> String {
    if h.is_finite() {
        format!("{h:.2}h")
    } else {
        "unreached".into()
    }
}

// ---- independent GF(256) oracle ----

fn oracle_mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    p
}

fn oracle_inv(a: u8) -> u8 {
    (1..=255u8)
        .find(|&x| oracle_mul(a, x) == 1)
        .expect("nonzero element has an inverse")
}

fn oracle_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = oracle_inv(rows[rank][c]);
        let pivot: Vec<u8> = rows[rank].iter().map(|&x| oracle_mul(x, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= oracle_mul(f, y);
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn criterion_1(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut file = vec![0u8; FILE_LEN];
    rng.fill_bytes(&mut file);
    let params = CodecParams::for_file_len(FILE_LEN, K, N);
    let chunks = encode(&file, &params).unwrap();
    let full_ok = decode(&chunks, K, FILE_LEN).unwrap() == file;

    let mut ok = 0;
    let mut wrong_bytes = 0;
    for _ in 0..SUBSET_TRIALS {
        let picked: Vec<_> = sample(&mut rng, N, K)
            .into_iter()
            .map(|i| chunks[i].clone())
            .collect();
        match decode(&picked, K, FILE_LEN) {
            Ok(out) if out == file => ok += 1,
            Ok(_) => wrong_bytes += 1,
            Err(FountainError::RankDeficient { .. }) => {}
            Err(e) => panic!("unexpected decode error {e}"),
        }
    }
    let rate = ok as f64 / SUBSET_TRIALS as f64;

    let mut short_rejected = 0;
    for _ in 0..SHORT_TRIALS {
        let picked: Vec<_> = sample(&mut rng, N, K - 1)
            .into_iter()
            .map(|i| chunks[i].clone())
            .collect();
        if matches!(decode(&picked, K, FILE_LEN), Err(FountainError::RankDeficient { rank, .. }) if rank < K)
        {
            short_rejected += 1;
        }
    }

    // decoder rank agrees with a textbook elimination over the same coefficients
    let mut rank_agree = 0;
    for _ in 0..RANK_ORACLE_TRIALS {
        let ids: Vec<u32> = sample(&mut rng, N, K)
            .into_iter()
            .map(|i| i as u32)
            .collect();
        let rows = ids.iter().map(|&id| derive_coefficients(id, K)).collect();
        if oracle_rank(rows) == coefficient_rank(ids.iter().copied(), K) {
            rank_agree += 1;
        }
    }

    // s systematic rows leave an r x r uniform block on the uncovered columns
    let theory: f64 = (1..=K as i32).map(|i| 1.0 - 256f64.powi(-i)).product();
    let pass = full_ok
        && wrong_bytes == 0
        && rate >= MIN_DECODE_RATE
        && short_rejected == SHORT_TRIALS
        && rank_agree == RANK_ORACLE_TRIALS;
    rep.record(
        1,
        "codec validity",
        pass,
        format!(
            "full set {}; {ok}/{SUBSET_TRIALS} random {K}-subsets decode (rate {rate:.3}, need >= {MIN_DECODE_RATE}, \
             theory ~{theory:.4}); {short_rejected}/{SHORT_TRIALS} {}-subsets rank-deficient; \
             rank oracle agrees {rank_agree}/{RANK_ORACLE_TRIALS}",
            if full_ok { "ok" } else { "MISMATCH" },
            K - 1
        ),
    );
}

fn brute_force_pairs(positions: &[(VehicleId, Point)], range: f64) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            let (a, p) = positions[i];
            let (b, q) = positions[j];
            let d = ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt();
            if d <= range {
                out.insert((a.0.min(b.0), a.0.max(b.0)));
            }
        }
    }
    out
}

fn random_positions(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<(VehicleId, Point)> {
    // shuffled ids so output order cannot lean on input order
    let mut ids: Vec<u32> = (0..n as u32).collect();
    for i in (1..ids.len()).rev() {
        ids.swap(i, rng.random_range(0..=i));
    }
    ids.into_iter()
        .map(|id| {
            (
                VehicleId(id),
                Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side)),
            )
        })
        .collect()
}

fn criterion_2(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut matched = 0;
    let mut pairs = 0;
    for _ in 0..CONTACT_INSTANCES {
        let n = rng.random_range(2..=CONTACT_MAX_VEHICLES);
        let side = rng.random_range(300.0..3000.0);
        let positions = random_positions(&mut rng, n, side);
        let got = detect_contacts(&positions, 100.0);
        let sorted = got.windows(2).all(|w| (w[0].a, w[0].b) < (w[1].a, w[1].b));
        let set: BTreeSet<(u32, u32)> = got.iter().map(|c| (c.a.0, c.b.0)).collect();
        pairs += set.len();
        if sorted && set.len() == got.len() && set == brute_force_pairs(&positions, 100.0) {
            matched += 1;
        }
    }
    rep.record(
        2,
        "contact oracle equivalence",
        matched == CONTACT_INSTANCES,
        format!("{matched}/{CONTACT_INSTANCES} instances identical to brute force ({pairs} pairs total)"),
    );
}

fn read_csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn criterion_3(rep: &mut Report, tmp: &Path) {
    let mut outputs = Vec::new();
    for (i, threads) in [1usize, 3, 1].into_iter().enumerate() {
        let out = tmp.join(format!("det{i}"));
        let mut base = desk(400, 6.0, &out);
        base.replicates = 3;
        let spec = SweepSpec::new(base, "seed_rate", vec!["0.05".into(), "0.01".into()]).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| run_sweep(&spec)).unwrap();
        outputs.push(read_csvs(&out));
    }
    let n_files = outputs[0].len();
    let identical = outputs.iter().all(|o| *o == outputs[0]);
    rep.record(
        3,
        "determinism",
        identical && n_files == 8,
        format!("3 executions (1, 3, 1 worker threads), {n_files} CSV files each, byte-identical: {identical}"),
    );
}

/// Returns the mean completion curve of the 1% runs for criterion 5.
fn criterion_4(rep: &mut Report, tmp: &Path) -> Vec<f64> {
    let out = tmp.join("seed_rate");
    let rows = sweep(desk(SEED_FLEET, SEED_HOURS, &out), "seed_rate", &SEED_RATES);
    let t30: Vec<f64> = rows.iter().map(|r| mean_h(r, 0)).collect();
    let t80: Vec<f64> = rows.iter().map(|r| mean_h(r, 2)).collect();
    // seed rates are listed high to low, so times must strictly increase
    let t30_ok = t30.windows(2).all(|w| w[0] < w[1]);
    let upper = &t80[..4];
    let spread = if upper.iter().all(|t| t.is_finite()) {
        let mean = upper.iter().sum::<f64>() / 4.0;
        (upper.iter().copied().fold(f64::MIN, f64::max)
            - upper.iter().copied().fold(f64::MAX, f64::min))
            / mean
    } else {
        f64::INFINITY
    };
    let slowest = upper.iter().all(|&t| t < t80[4]);
    let pass = t30_ok && spread <= T80_MAX_SPREAD && slowest;
    let show = |v: &[f64]| v.iter().map(|&h| fmt_h(h)).collect::<Vec<_>>().join(" ");
    rep.record(
        4,
        "seed-rate trend",
        pass,
        format!(
            "rates {} -> mean t30 [{}] strictly decreasing in rate: {t30_ok}; mean t80 [{}], spread over 1%-10% {:.1}% \
             (limit {:.0}%), 0.02% slowest: {slowest}",
            SEED_RATES.join("/"),
            show(&t30),
            show(&t80),
            spread * 100.0,
            T80_MAX_SPREAD * 100.0
        ),
    );

    // mean curve of the 1% replicates from the written CSVs
    let reps: Vec<_> = (0..5)
        .map(|r| {
            let bytes = fs::read(out.join(format!("seed_rate=0.01_rep{r}.csv"))).unwrap();
            vcd_core::engine::Metrics::read_csv(&bytes[..], SEED_FLEET, 60.0).unwrap()
        })
        .collect();
    (0..=24)
        .map(|h| {
            reps.iter()
                .map(|m| m.fraction_at(h as f64 * HOUR))
                .sum::<f64>()
                / reps.len() as f64
        })
        .collect()
}

fn criterion_5(rep: &mut Report, hourly: &[f64]) {
    let early = hourly[6] - hourly[1];
    let late = hourly[18] - hourly[13];
    rep.record(
        5,
        "completion-curve shape",
        early > late,
        format!(
            "1% seeds, {SEED_FLEET} vehicles: gain over hours 1-6 = {:.1} pp, over hours 13-18 = {:.1} pp",
            early * 100.0,
            late * 100.0
        ),
    );
}

fn criterion_6(rep: &mut Report, tmp: &Path) {
    let mut base = desk(SEED_FLEET, 24.0, &tmp.join("rate"));
    base.seed_rate = RATE_SEED_RATE;
    let spec = SweepSpec::new(
        base,
        "transfer_rate",
        RATES.iter().map(|v| v.to_string()).collect(),
    )
    .unwrap();
    let report = run_sweep(&spec).unwrap();
    assert_eq!(report.failures(), 0);
    let final_mean = |v: &str| {
        let f: Vec<f64> = report
            .runs
            .iter()
            .filter(|r| r.value == v)
            .map(|r| r.final_fraction.unwrap())
            .collect();
        f.iter().sum::<f64>() / f.len() as f64
    };
    let (slow, fast) = (final_mean(RATES[0]), final_mean(RATES[1]));
    let gap = (fast - slow).abs();
    rep.record(
        6,
        "transfer-rate insensitivity",
        gap <= RATE_MAX_GAP,
        format!(
            "5% seeds, completion at 24 h: 16 kb/s {:.1}%, 800 kb/s {:.1}%, gap {:.1} pp (limit {:.0} pp)",
            slow * 100.0,
            fast * 100.0,
            gap * 100.0,
            RATE_MAX_GAP * 100.0
        ),
    );
}

fn criterion_7(rep: &mut Report, tmp: &Path) {
    let fleets: Vec<String> = DENSITY_FACTORS
        .iter()
        .map(|f| ((f * DENSITY_BASELINE as f64).round() as usize).to_string())
        .collect();
    let values: Vec<&str> = fleets.iter().map(String::as_str).collect();
    let rows = sweep(
        desk(DENSITY_BASELINE, 24.0, &tmp.join("density")),
        "n_vehicles",
        &values,
    );
    let t50: Vec<f64> = rows.iter().map(|r| mean_h(r, 1)).collect();
    let upper = &t50[1..];
    let lo = upper.iter().copied().fold(f64::MAX, f64::min);
    let hi = upper.iter().copied().fold(f64::MIN, f64::max);
    let spread = hi / lo - 1.0;
    let lowest_slowest = upper.iter().all(|&t| t < t50[0]);
    rep.record(
        7,
        "car-count effect",
        spread <= DENSITY_MAX_SPREAD && lowest_slowest,
        format!(
            "fleets {} -> mean t50 [{}]; upper three within {:.1}% (limit {:.0}%), lowest density slowest: {lowest_slowest}",
            fleets.join("/"),
            t50.iter().map(|&h| fmt_h(h)).collect::<Vec<_>>().join(" "),
            spread * 100.0,
            DENSITY_MAX_SPREAD * 100.0
        ),
    );
}

fn criterion_8(rep: &mut Report, tmp: &Path) {
    let mut base = desk(MAIN_ROAD_FLEET, MAIN_ROAD_HOURS, &tmp.join("main_road"));
    base.replicates = MAIN_ROAD_REPLICATES;
    let rows = sweep(base, "main_road_fraction", &MAIN_ROAD_FRACTIONS);
    let t80: Vec<f64> = rows.iter().map(|r| mean_h(r, 2)).collect();
    let decreasing = t80.windows(2).all(|w| w[1] < w[0]);
    let gain = 1.0 - t80[2] / t80[0];
    rep.record(
        8,
        "main-road effect",
        decreasing && gain >= MAIN_ROAD_MIN_GAIN,
        format!(
            "{MAIN_ROAD_FLEET} vehicles, fractions {} -> mean t80 [{}]; strictly decreasing: {decreasing}; \
             all-main vs random {:.1}% faster (need >= {:.0}%)",
            MAIN_ROAD_FRACTIONS.join("/"),
            t80.iter().map(|&h| fmt_h(h)).collect::<Vec<_>>().join(" "),
            gain * 100.0,
            MAIN_ROAD_MIN_GAIN * 100.0
        ),
    );
}

fn field_axioms() -> Result<u32, String> {
    let mut runner = TestRunner::new(PropConfig {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..PropConfig::default()
    });
    runner
        .run(&(any::<u8>(), any::<u8>(), any::<u8>()), |(a, b, c)| {
            use gf256::{add, div, inv, mul};
            prop_assert_eq!(mul(a, b), oracle_mul(a, b));
            prop_assert_eq!(add(a, b), a ^ b);
            prop_assert_eq!(mul(a, b), mul(b, a));
            prop_assert_eq!(mul(mul(a, b), c), mul(a, mul(b, c)));
            prop_assert_eq!(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
            prop_assert_eq!(mul(a, 1), a);
            prop_assert_eq!(add(a, a), 0);
            if a != 0 {
                let ia = inv(a).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(oracle_mul(a, ia), 1);
                prop_assert_eq!(div(b, a).unwrap(), oracle_mul(b, ia));
            } else {
                prop_assert!(inv(0).is_err());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(PROPERTY_CASES)
}

fn contact_symmetry() -> Result<u32, String> {
    let mut runner = TestRunner::new(PropConfig {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..PropConfig::default()
    });
    let strategy = (
        proptest::collection::vec((0.0f64..600.0, 0.0f64..600.0), 0..40),
        5.0f64..150.0,
    );
    runner
        .run(&strategy, |(pts, range)| {
            let positions: Vec<_> = pts
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| (VehicleId(i as u32), Point::new(x, y)))
                .collect();
            let reversed: Vec<_> = positions.iter().rev().copied().collect();
            let a = detect_contacts(&positions, range);
            let b = detect_contacts(&reversed, range);
            prop_assert_eq!(&a, &b);
            let mut seen = HashSet::new();
            for c in &a {
                prop_assert!(c.a < c.b);
                prop_assert!(c.distance <= range);
                prop_assert!(seen.insert((c.a, c.b)));
                let d = positions[c.a.index()].1.distance(positions[c.b.index()].1);
                prop_assert!((d - c.distance).abs() <= 1e-9 * range);
            }
            prop_assert_eq!(seen.len(), brute_force_pairs(&positions, range).len());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(PROPERTY_CASES)
}

fn trip_chains() -> Result<u32, String> {
    let graphs: Vec<_> = [
        (3, 3, vec![1]),
        (4, 6, vec![0, 5]),
        (6, 4, vec![]),
        (1, 5, vec![2]),
    ]
    .into_iter()
    .map(|(r, c, m)| generate_manhattan_grid(r, c, 150.0, &m).unwrap())
    .collect();
    let mut runner = TestRunner::new(PropConfig {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..PropConfig::default()
    });
    let strategy = (
        0..graphs.len(),
        0.0f64..6.0,
        0.0f64..=1.0,
        0u32..4,
        any::<u64>(),
    );
    runner
        .run(&strategy, |(gi, mean_trips, mrf, day, seed)| {
            let g = &graphs[gi];
            let params = TripParams {
                mean_trips,
                main_road_fraction: mrf,
                ..TripParams::default()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut planner = TripPlanner::new(g, params).unwrap();
            let policies = planner.draw_policies(4, &mut rng);
            let starts = planner.uniform_starts(4, &mut rng);
            let plans = planner.plan_day(day, &starts, &policies, &mut rng).unwrap();
            let day_start = day as f64 * 86_400.0;
            for (sched, &start) in plans.iter().zip(&starts) {
                prop_assert!(sched.is_chained());
                let mut at = start;
                let mut last_t = day_start;
                for t in &sched.trips {
                    prop_assert_eq!(t.origin, at);
                    prop_assert!(t.depart_time >= last_t && t.depart_time < day_start + 86_400.0);
                    prop_assert!(t.route.is_valid_walk(g));
                    prop_assert_eq!(t.route.origin(), t.origin);
                    prop_assert_eq!(t.route.destination(), t.destination);
                    prop_assert!(t.origin != t.destination);
                    at = t.destination;
                    last_t = t.depart_time;
                }
                prop_assert_eq!(sched.final_node(start), at);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(PROPERTY_CASES)
}

/// Steps several small runs and checks store monotonicity and chunk
/// conservation after every step. Returns the number of step checks.
fn store_invariants() -> Result<u32, String> {
    let g = generate_manhattan_grid(5, 5, 200.0, &[2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checks = 0u32;
    for run_idx in 0..4 {
        let p = SimParams {
            n_vehicles: 250,
            seed_rate: 0.02,
            speed: 2.0,
            transfer_rate: if run_idx % 2 == 0 {
                16_000.0
            } else {
                800_000.0
            },
            share_bandwidth: run_idx >= 2,
            ..SimParams::default()
        };
        let mut sim = Simulation::new(&g, p, rng.next_u64()).map_err(|e| e.to_string())?;
        let seeds: HashSet<usize> = sim.seeds().iter().map(|s| s.index()).collect();
        for _ in 0..3000 {
            let before = sim.stores().to_vec();
            let completed_before = sim.completed_count();
            sim.step().map_err(|e| e.to_string())?;
            if sim.completed_count() < completed_before {
                return Err(format!("completed count fell at t={}", sim.clock()));
            }
            let mut universe = BTreeSet::new();
            for (v, (old, new)) in before.iter().zip(sim.stores()).enumerate() {
                if !old.set.is_subset(&new.set) {
                    return Err(format!("vehicle {v} lost chunks at t={}", sim.clock()));
                }
                if new.count() != new.set.iter().count() {
                    return Err(format!("vehicle {v} count cache stale"));
                }
                if old.completed_at.is_some() && old.completed_at != new.completed_at {
                    return Err(format!("vehicle {v} completion time changed"));
                }
                if new.completed_at.is_some() != (new.count() >= 300) {
                    return Err(format!("vehicle {v} completion flag disagrees with count"));
                }
                for id in new.set.iter() {
                    if id as usize >= N {
                        return Err(format!("chunk id {id} out of range"));
                    }
                    universe.insert(id);
                }
                if seeds.contains(&v) {
                    continue;
                }
                for id in new.set.iter().filter(|&id| !old.set.contains(id)) {
                    let held_by_partner = sim.last_contacts().iter().any(|c| {
                        let partner = if c.a.index() == v {
                            c.b.index()
                        } else if c.b.index() == v {
                            c.a.index()
                        } else {
                            return false;
                        };
                        before[partner].set.contains(id)
                    });
                    if !held_by_partner {
                        return Err(format!("vehicle {v} gained chunk {id} from nowhere"));
                    }
                }
            }
            if universe.len() > N {
                return Err("more distinct chunks than exist".into());
            }
            checks += 1;
        }
    }
    Ok(checks)
}

type Suite = fn() -> Result<u32, String>;

fn criterion_9(rep: &mut Report) {
    let suites: [(&str, Suite); 4] = [
        ("GF(256) field axioms", field_axioms),
        ("contact symmetry", contact_symmetry),
        ("trip-chain continuity", trip_chains),
        ("store monotonicity + chunk conservation", store_invariants),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, suite) in suites {
        match suite() {
            Ok(cases) => {
                pass &= cases >= PROPERTY_CASES;
                parts.push(format!("{name} ok ({cases} cases)"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name} FAILED: {e}"));
            }
        }
    }
    rep.record(9, "invariant suites", pass, parts.join("; "));
}

fn criterion_10(rep: &mut Report) {
    let g = generate_manhattan_grid(3, 3, 100.0, &[1]).unwrap();
    let mut file = vec![0u8; FILE_LEN];
    ChaCha8Rng::seed_from_u64(10).fill_bytes(&mut file);
    let codec = CodecParams::for_file_len(FILE_LEN, K, N);
    let mut p = SimParams {
        n_vehicles: PAYLOAD_FLEET,
        seed_rate: 0.04,
        chunk_wire_size: codec.chunk_wire_size(),
        speed: 2.0,
        sim_duration: 24.0 * HOUR,
        ..SimParams::default()
    };
    p.trips.mean_trips = 40.0;
    let mut sim = Simulation::new(&g, p, 10)
        .unwrap()
        .with_payloads(encode(&file, &codec).unwrap())
        .unwrap();
    sim.run_to_end().unwrap();
    let flagged: Vec<usize> = (0..PAYLOAD_FLEET)
        .filter(|&v| sim.stores()[v].is_complete())
        .collect();
    let non_seed = flagged.len() - sim.seeds().len();
    let decoded = flagged
        .iter()
        .filter(|&&v| {
            let held = sim.held_chunks(VehicleId(v as u32)).unwrap();
            decode(&held, K, FILE_LEN).is_ok_and(|out| out == file)
        })
        .count();
    rep.record(
        10,
        "codec in the loop",
        non_seed > 0 && decoded == flagged.len(),
        format!(
            "{PAYLOAD_FLEET} vehicles carrying real payloads: {} flagged complete ({non_seed} non-seed), \
             {decoded} decode the exact file; {} reached {K} chunks before full rank",
            flagged.len(),
            sim.stats().rank_short_at_threshold
        ),
    );
}

fn main() {
    // `cargo test` passes harness flags; listing must not run the battery.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let mut rep = Report { lines: Vec::new() };
    let started = Instant::now();
    let timed =
        |label: &str, t: Instant| eprintln!("  ({label} took {:.1}s)", t.elapsed().as_secs_f64());

    let t = Instant::now();
    criterion_1(&mut rep);
    timed("1", t);
    let t = Instant::now();
    criterion_2(&mut rep);
    timed("2", t);
    let t = Instant::now();
    criterion_3(&mut rep, tmp.path());
    timed("3", t);
    let t = Instant::now();
    let hourly = criterion_4(&mut rep, tmp.path());
    timed("4", t);
    criterion_5(&mut rep, &hourly);
    let t = Instant::now();
    criterion_6(&mut rep, tmp.path());
    timed("6", t);
    let t = Instant::now();
    criterion_7(&mut rep, tmp.path());
    timed("7", t);
    let t = Instant::now();
    criterion_8(&mut rep, tmp.path());
    timed("8", t);
    let t = Instant::now();
    criterion_9(&mut rep);
    timed("9", t);
    let t = Instant::now();
    criterion_10(&mut rep);
    timed("10", t);

    let failed = rep.lines.iter().filter(|(ok, _)| !ok).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.0}s",
        rep.lines.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
