//! Repressilator simulation and parameter sweeps.
//!
//! Three genes repress each other cyclically (`p3 ⊣ m1`, `p1 ⊣ m2`,
//! `p2 ⊣ m3`). The dimensionless model is
//!
//! ```text
//! m_i' = -m_i + α / (1 + p_j^n) + α0
//! p_i' = -β (p_i - m_i)
//! ```
//!
//! integrated with classical fixed-step Runge–Kutta and then thinned to a
//! fixed number of equally spaced samples by linear interpolation of the
//! fine trace.

use std::io::Write as _;
use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{parse, SignalSchema};
use crate::satset::{monitor, MonitorOptions};
use crate::signal::Signal;
use crate::time::{format_time, time_to_f64, Time};

pub const VARIABLES: [&str; 6] = ["m1", "m2", "m3", "p1", "p2", "p3"];
pub const DEFAULT_DT: f64 = 0.05;
pub const DEFAULT_SAMPLES: usize = 80;

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("state became non-finite at t = {time}")]
    Integration { time: f64 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepressilatorParams {
    pub alpha: f64,
    pub alpha0: f64,
    pub beta: f64,
    pub n: f64,
    /// `(m1, m2, m3, p1, p2, p3)` at time 0.
    pub init: [f64; 6],
    #[serde(serialize_with = "ser_time")]
    pub t_end: Time,
    pub dt: f64,
    /// Number of output samples, endpoints included.
    pub samples: usize,
}

fn ser_time<S: serde::Serializer>(t: &Time, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_time(t))
}

impl Default for RepressilatorParams {
    fn default() -> Self {
        RepressilatorParams {
            alpha: 400.0,
            alpha0: 0.2,
            beta: 0.2,
            n: 2.0,
            init: [0.1, 0.3, 0.2, 0.2, 0.1, 0.3],
            t_end: Ratio::from_integer(300),
            dt: DEFAULT_DT,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl RepressilatorParams {
    pub fn validate(&self) -> Result<(), SimulateError> {
        let bad = |m: &str| Err(SimulateError::InvalidParams(m.to_string()));
        let pos = |x: f64| x.is_finite() && x > 0.0;
        if !pos(self.alpha) {
            return bad("alpha must be positive");
        }
        if !(self.alpha0.is_finite() && self.alpha0 >= 0.0) {
            return bad("alpha0 must be non-negative");
        }
        if !pos(self.beta) {
            return bad("beta must be positive");
        }
        if !(self.n.is_finite() && self.n >= 1.0) {
            return bad("n must be at least 1");
        }
        if !self.init.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return bad("initial values must be non-negative");
        }
        if self.t_end <= Ratio::from_integer(0) {
            return bad("t_end must be positive");
        }
        if !pos(self.dt) {
            return bad("dt must be positive");
        }
        if self.samples < 2 {
            return bad("at least 2 samples are needed");
        }
        Ok(())
    }

    pub fn rhs(&self, s: &[f64; 6]) -> [f64; 6] {
        repressilator_rhs(s, self.alpha, self.alpha0, self.beta, self.n)
    }
}

pub fn repressilator_rhs(s: &[f64; 6], alpha: f64, alpha0: f64, beta: f64, n: f64) -> [f64; 6] {
    let [m1, m2, m3, p1, p2, p3] = *s;
    let hill = |p: f64| alpha / (1.0 + p.powf(n));
    [
        -m1 + hill(p3) + alpha0,
        -m2 + hill(p1) + alpha0,
        -m3 + hill(p2) + alpha0,
        -beta * (p1 - m1),
        -beta * (p2 - m2),
        -beta * (p3 - m3),
    ]
}

fn axpy(a: &[f64; 6], h: f64, k: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| a[i] + h * k[i])
}

fn rk4_step(p: &RepressilatorParams, s: &[f64; 6], h: f64) -> [f64; 6] {
    let k1 = p.rhs(s);
    let k2 = p.rhs(&axpy(s, h / 2.0, &k1));
    let k3 = p.rhs(&axpy(s, h / 2.0, &k2));
    let k4 = p.rhs(&axpy(s, h, &k3));
    std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// The fine RK4 trace: step times and states. The last step is shortened
/// when `dt` does not divide `t_end`.
pub fn trajectory(p: &RepressilatorParams) -> Result<(Vec<f64>, Vec<[f64; 6]>), SimulateError> {
    p.validate()?;
    let t_end = time_to_f64(&p.t_end);
    let steps = (t_end / p.dt - 1e-9).ceil().max(1.0) as usize;
    let mut ts = Vec::with_capacity(steps + 1);
    let mut xs = Vec::with_capacity(steps + 1);
    let mut s = p.init;
    ts.push(0.0);
    xs.push(s);
    for k in 1..=steps {
        let t = if k == steps { t_end } else { k as f64 * p.dt };
        s = rk4_step(p, &s, t - ts[k - 1]);
        if !s.iter().all(|v| v.is_finite()) {
            return Err(SimulateError::Integration { time: t });
        }
        ts.push(t);
        xs.push(s);
    }
    Ok((ts, xs))
}

/// Simulates and samples at `k · t_end / (samples − 1)`.
pub fn integrate(p: &RepressilatorParams) -> Result<Signal, SimulateError> {
    let (ts, xs) = trajectory(p)?;
    let last = (p.samples - 1) as i128;
    let times: Vec<Time> = (0..=last).map(|k| p.t_end * Ratio::new(k, last)).collect();
    let mut values = Vec::with_capacity(times.len());
    let mut j = 0;
    for t in &times {
        let t = time_to_f64(t);
        while j + 2 < ts.len() && ts[j + 1] <= t {
            j += 1;
        }
        let w = ((t - ts[j]) / (ts[j + 1] - ts[j])).clamp(0.0, 1.0);
        values.push((0..6).map(|i| xs[j][i] + w * (xs[j + 1][i] - xs[j][i])).collect());
    }
    let schema = SignalSchema::new(VARIABLES).expect("fixed schema is valid");
    Ok(Signal::new(schema, times, values).expect("samples are finite and increasing"))
}

/// The symmetric equilibrium `v = α / (1 + vⁿ) + α0`, by bisection.
pub fn fixed_point(alpha: f64, alpha0: f64, n: f64) -> f64 {
    let g = |v: f64| alpha / (1.0 + v.powf(n)) + alpha0 - v;
    let (mut lo, mut hi) = (0.0, alpha + alpha0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub alpha0: f64,
    pub beta: f64,
    pub n: f64,
    pub formula: String,
    /// `SAT`, `UNSAT`, `BOUNDARY` or `error: …`.
    pub verdict: String,
    pub wall_ms: u128,
}

/// Runs every formula over every parameter point, in grid order. Errors are
/// recorded in the verdict column; the sweep itself never aborts.
pub fn sweep(grid: &[RepressilatorParams], formulas: &[String]) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(grid.len() * formulas.len());
    for p in grid {
        let start = Instant::now();
        let signal = integrate(p);
        let sim_ms = start.elapsed().as_millis();
        for text in formulas {
            let start = Instant::now();
            let verdict = match &signal {
                Err(e) => format!("error: {e}"),
                Ok(s) => match parse(text, s.schema()) {
                    Err(e) => format!("error: {e}"),
                    Ok(f) => match monitor(s, &f, &MonitorOptions::default()) {
                        Ok(r) => r.verdict.to_string(),
                        Err(e) => format!("error: {e}"),
                    },
                },
            };
            rows.push(SweepRow {
                alpha: p.alpha,
                alpha0: p.alpha0,
                beta: p.beta,
                n: p.n,
                formula: text.clone(),
                verdict,
                wall_ms: sim_ms + start.elapsed().as_millis(),
            });
        }
    }
    rows
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], writer: W) -> Result<(), SimulateError> {
    // header written by hand so an empty table still has one
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(["alpha", "alpha0", "beta", "n", "formula", "verdict", "wall_ms"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a sweep table to a string; convenient in tests.
pub fn sweep_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(rows, &mut buf).expect("writing to memory");
    let _ = buf.flush();
    String::from_utf8(buf).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(1.0)
    }

    #[test]
    fn rhs_values() {
        let s = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert!(close(repressilator_rhs(&s, 400.0, 0.2, 0.2, 2.0)[0], 400.2));
        let s = [1.0, 0.0, 0.0, 2.0, 0.0, 0.0];
        assert!(close(repressilator_rhs(&s, 400.0, 0.2, 0.2, 2.0)[3], -0.2));
    }

    #[test]
    fn rhs_vanishes_at_fixed_point() {
        let v = fixed_point(400.0, 0.2, 2.0);
        let d = repressilator_rhs(&[v; 6], 400.0, 0.2, 0.2, 2.0);
        assert!(d.iter().all(|x| x.abs() < 1e-9), "{d:?}");
    }

    #[test]
    fn sampled_signal_shape() {
        let s = integrate(&RepressilatorParams::default()).unwrap();
        assert_eq!(s.times().len(), 80);
        assert_eq!(s.segment_count(), 79);
        assert_eq!(s.len_time(), Ratio::from_integer(300));
        assert_eq!(s.schema().names(), VARIABLES);
        assert_eq!(s.row(0), &[0.1, 0.3, 0.2, 0.2, 0.1, 0.3]);
    }

    #[test]
    fn samples_on_steps_match_trace() {
        let p = RepressilatorParams {
            samples: 301,
            ..Default::default()
        };
        let (ts, xs) = trajectory(&p).unwrap();
        let s = integrate(&p).unwrap();
        for k in 0..=300 {
            let j = ts.iter().position(|&t| (t - k as f64).abs() < 1e-9).unwrap();
            for (got, want) in s.row(k).iter().zip(xs[j]) {
                assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn invalid_params() {
        let bad = [
            RepressilatorParams {
                alpha: 0.0,
                ..Default::default()
            },
            RepressilatorParams {
                alpha0: -1.0,
                ..Default::default()
            },
            RepressilatorParams {
                n: 0.5,
                ..Default::default()
            },
            RepressilatorParams {
                dt: 0.0,
                ..Default::default()
            },
            RepressilatorParams {
                samples: 1,
                ..Default::default()
            },
            RepressilatorParams {
                init: [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                ..Default::default()
            },
            RepressilatorParams {
                t_end: Ratio::from_integer(0),
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(matches!(integrate(&p), Err(SimulateError::InvalidParams(_))), "{p:?}");
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let p = RepressilatorParams {
            alpha: 1e300,
            dt: 10.0,
            ..Default::default()
        };
        assert!(matches!(integrate(&p), Err(SimulateError::Integration { .. })));
    }

    #[test]
    fn sweep_records_errors_and_order() {
        let grid = vec![
            RepressilatorParams {
                t_end: Ratio::from_integer(20),
                ..Default::default()
            },
            RepressilatorParams {
                beta: -1.0,
                ..Default::default()
            },
        ];
        let rows = sweep(&grid, &["G[0,10] m1 > -1".to_string(), "G[0,10] m1 == 0".to_string()]);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].verdict, "SAT");
        assert!(rows[1].verdict.starts_with("error: "));
        assert!(rows[2].verdict.starts_with("error: invalid parameter"));
        assert!(sweep(&[], &["true".to_string()]).is_empty());
        let csv = sweep_csv_string(&rows);
        assert!(
            csv.starts_with("alpha,alpha0,beta,n,formula,verdict,wall_ms\n400.0,0.2,0.2,2.0,\"G[0,10] m1 > -1\",SAT,")
        );
        assert_eq!(csv.lines().count(), 5);
    }
}
