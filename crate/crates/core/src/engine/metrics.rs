use std::io::{Read, Write};

use super::SimError;

/// Fractions reported in run summaries.
pub const MILESTONES: [f64; 5] = [0.30, 0.50, 0.80, 0.90, 0.99];

// fraction comparisons tolerate representation error in p · n
const FRACTION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub completed: usize,
}

/// Completion time series of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    n_vehicles: usize,
    sample_interval: f64,
    series: Vec<Sample>,
}

impl Metrics {
    pub fn new(n_vehicles: usize, sample_interval: f64) -> Self {
        Self {
            n_vehicles,
            sample_interval,
            series: Vec::new(),
        }
    }

    pub fn n_vehicles(&self) -> usize {
        self.n_vehicles
    }

    pub fn sample_interval(&self) -> f64 {
        self.sample_interval
    }

    pub fn series(&self) -> &[Sample] {
        &self.series
    }

    /// Appends a sample. Panics if time does not increase or the count drops.
    pub fn record(&mut self, time: f64, completed: usize) {
        if let Some(last) = self.series.last() {
            assert!(
                time > last.time,
                "sample times must increase ({} after {})",
                time,
                last.time
            );
            assert!(
                completed >= last.completed,
                "completed count decreased at t={time}"
            );
        }
        self.series.push(Sample { time, completed });
    }

    pub fn fraction(&self, s: &Sample) -> f64 {
        if self.n_vehicles == 0 {
            0.0
        } else {
            s.completed as f64 / self.n_vehicles as f64
        }
    }

    pub fn final_fraction(&self) -> f64 {
        self.series.last().map_or(0.0, |s| self.fraction(s))
    }

    /// Completed fraction at time `t`, interpolated linearly between samples
    /// and clamped to the ends of the series.
    pub fn fraction_at(&self, t: f64) -> f64 {
        let s = &self.series;
        match s.iter().position(|x| x.time >= t) {
            None => self.final_fraction(),
            Some(0) => self.fraction(&s[0]),
            Some(i) => {
                let (lo, hi) = (&s[i - 1], &s[i]);
                let w = (t - lo.time) / (hi.time - lo.time);
                self.fraction(lo) + w * (self.fraction(hi) - self.fraction(lo))
            }
        }
    }

    pub fn time_to_fraction(&self, p: f64) -> Option<f64> {
        time_to_fraction(self, p, self.n_vehicles)
    }

    /// Seconds to each of [`MILESTONES`].
    pub fn milestones(&self) -> [Option<f64>; 5] {
        MILESTONES.map(|p| self.time_to_fraction(p))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SimError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["time_s", "completed_count", "completed_fraction"])?;
        for s in &self.series {
            out.write_record([
                s.time.to_string(),
                s.completed.to_string(),
                self.fraction(s).to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a series written by [`Metrics::write_csv`].
    pub fn read_csv<R: Read>(
        r: R,
        n_vehicles: usize,
        sample_interval: f64,
    ) -> Result<Self, SimError> {
        let mut m = Metrics::new(n_vehicles, sample_interval);
        let mut reader = csv::Reader::from_reader(r);
        for row in reader.records() {
            let row = row?;
            let parse_err = |field: &str| SimError::Format(format!("bad {field} in row {:?}", row));
            let time: f64 = row
                .get(0)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err("time_s"))?;
            let completed: usize = row
                .get(1)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err("completed_count"))?;
            if m.series
                .last()
                .is_some_and(|l| time <= l.time || completed < l.completed)
            {
                return Err(SimError::Format(format!("series not monotone at t={time}")));
            }
            m.series.push(Sample { time, completed });
        }
        Ok(m)
    }
}

/// First time the completed fraction reaches `p`, interpolated linearly
/// between the bracketing samples. `None` if the series never gets there.
pub fn time_to_fraction(m: &Metrics, p: f64, n_vehicles: usize) -> Option<f64> {
    assert!(p > 0.0 && p <= 1.0, "fraction {p} outside (0, 1]");
    if n_vehicles == 0 {
        return None;
    }
    let frac = |s: &Sample| s.completed as f64 / n_vehicles as f64;
    let s = m.series();
    let i = s.iter().position(|x| frac(x) >= p - FRACTION_EPS)?;
    if i == 0 {
        return Some(s[0].time);
    }
    let (lo, hi) = (&s[i - 1], &s[i]);
    let w = ((p - frac(lo)) / (frac(hi) - frac(lo))).clamp(0.0, 1.0);
    Some(lo.time + w * (hi.time - lo.time))
}
