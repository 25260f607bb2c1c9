//! Reference evaluator for differential testing.
//!
//! Independently of the polygon engine, the oracle evaluates a formula one
//! horizontal line `t* = y` at a time. On such a line every subformula's
//! truth set is a finite union of `t`-intervals that can be computed exactly
//! from the piecewise-linear signal: atoms by root finding per segment,
//! boolean operators by interval algebra and `U` by scanning the connected
//! components of its left operand. The only approximation is the freeze
//! operator, whose `t`-set is located by dense sampling followed by
//! bisection of every sign change. Truth values are then read off at the
//! points of a square lattice.
//!
//! Lattice points close to a boundary are ambiguous by design, so
//! [`compare`] ignores points within `2·eps` of any engine polygon edge that
//! is not part of the domain border.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;
use stlstar_geometry::{Membership, Point, Region};
use thiserror::Error;

use crate::formula::{Cmp, Formula, LinearPredicate};
use crate::signal::{LengthCheck, Signal};
use crate::time::{format_time, time_to_f64, Time};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("lattice step must be positive and finite, got {0}")]
    BadDelta(f64),
    #[error("signal too short: formula needs length {}, signal has {}", format_time(.needed), format_time(.have))]
    ShortSignal { needed: Time, have: Time },
    #[error("formula refers to variable index {index} but the signal has {count} variables")]
    SchemaMismatch { index: usize, count: usize },
}

/// Samples used to locate the truth set of a freeze operator.
const FREEZE_SAMPLES: usize = 20_000;
const BISECTION_STEPS: usize = 60;

/// Lattice `{0, δ, 2δ, …} ∪ {breakpoints}` on both axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    delta: f64,
}

impl GridSpec {
    pub fn new(delta: f64) -> Result<Self, OracleError> {
        if delta.is_finite() && delta > 0.0 {
            Ok(GridSpec { delta })
        } else {
            Err(OracleError::BadDelta(delta))
        }
    }

    /// One eighth of the shortest segment.
    pub fn default_for(signal: &Signal) -> Self {
        let ts = signal.times_f64();
        let min = ts.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        GridSpec { delta: min / 8.0 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn coordinates(&self, signal: &Signal) -> Vec<f64> {
        let r = signal.length();
        let n = (r / self.delta).floor() as usize;
        let mut c: Vec<f64> = (0..=n).map(|k| k as f64 * self.delta).filter(|&x| x <= r).collect();
        c.extend_from_slice(signal.times_f64());
        c.sort_by(f64::total_cmp);
        c.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * r.max(1.0));
        c
    }
}

/// Truth values on the lattice; `cells[j * n + i]` is the value at
/// `(coords[i], coords[j])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub coords: Vec<f64>,
    pub cells: Vec<bool>,
}

impl Grid {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.coords.len() + i]
    }

    /// Plain PGM image, `t*` increasing upwards; white where the formula
    /// holds.
    pub fn to_pgm(&self) -> String {
        let n = self.coords.len();
        let mut s = format!("P2\n{n} {n}\n255\n");
        for j in (0..n).rev() {
            let row: Vec<&str> = (0..n).map(|i| if self.get(i, j) { "255" } else { "0" }).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let n = self.coords.len();
        let rows: Vec<Vec<u8>> = (0..n).map(|j| (0..n).map(|i| self.get(i, j) as u8).collect()).collect();
        serde_json::json!({ "coords": self.coords, "rows": rows }).to_string()
    }
}

/// A lattice point where oracle and engine differ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Disagreement {
    pub t: f64,
    pub tstar: f64,
    pub oracle: bool,
    pub engine: bool,
}

type Intervals = Vec<(f64, f64)>;

struct Oracle<'a> {
    signal: &'a Signal,
    r: f64,
    tol: f64,
    freeze: HashMap<usize, Intervals>,
}

fn validate(signal: &Signal, f: &Formula) -> Result<(), OracleError> {
    let count = signal.schema().len();
    if let Some(&index) = f.variables().iter().find(|&&i| i >= count) {
        return Err(OracleError::SchemaMismatch { index, count });
    }
    if let LengthCheck::Short { needed, have } = signal.check_length(f) {
        return Err(OracleError::ShortSignal { needed, have });
    }
    Ok(())
}

/// Truth of `f` at every lattice point, with `eps_rel` the same relative
/// tolerance the engine uses.
pub fn grid_eval(signal: &Signal, f: &Formula, spec: GridSpec, eps_rel: f64) -> Result<Grid, OracleError> {
    validate(signal, f)?;
    let coords = spec.coordinates(signal);
    let mut o = Oracle::new(signal, eps_rel);
    let mut cells = Vec::with_capacity(coords.len() * coords.len());
    for &y in &coords {
        let row = o.row(f, y);
        cells.extend(coords.iter().map(|&t| member(&row, t)));
    }
    Ok(Grid { coords, cells })
}

/// Truth set of `f` on the line `t* = y`, as sorted disjoint intervals.
pub fn row_set(signal: &Signal, f: &Formula, y: f64, eps_rel: f64) -> Result<Vec<(f64, f64)>, OracleError> {
    validate(signal, f)?;
    Ok(Oracle::new(signal, eps_rel).row(f, y))
}

/// Lattice points where `engine` (a region for `f` over `signal`) and the
/// oracle disagree, skipping points within `2·eps` of an inner engine edge.
pub fn compare(
    signal: &Signal,
    f: &Formula,
    spec: GridSpec,
    engine: &Region,
) -> Result<Vec<Disagreement>, OracleError> {
    let eps = engine.domain().eps();
    let eps_rel = eps / signal.length();
    let grid = grid_eval(signal, f, spec, eps_rel)?;
    let n = grid.coords.len();
    let band = 2.0 * eps;
    let mut out = Vec::new();
    for (j, &y) in grid.coords.iter().enumerate() {
        let near = near_edges(engine, y, band, &grid.coords);
        for (i, &t) in grid.coords.iter().enumerate() {
            if near[i] {
                continue;
            }
            let truth = grid.cells[j * n + i];
            let got = engine.contains(Point::new(t, y), Membership::Closed);
            if truth != got {
                out.push(Disagreement {
                    t,
                    tstar: y,
                    oracle: truth,
                    engine: got,
                });
            }
        }
    }
    Ok(out)
}

/// Flags lattice columns on row `y` that lie within `band` of an engine edge
/// not on the domain border.
fn near_edges(region: &Region, y: f64, band: f64, coords: &[f64]) -> Vec<bool> {
    let mut near = vec![false; coords.len()];
    let r = region.domain().size();
    let e = region.domain().eps();
    let on_border = |a: Point, b: Point| {
        (a.x.abs() <= e && b.x.abs() <= e)
            || (a.y.abs() <= e && b.y.abs() <= e)
            || ((a.x - r).abs() <= e && (b.x - r).abs() <= e)
            || ((a.y - r).abs() <= e && (b.y - r).abs() <= e)
    };
    for poly in region.polygons() {
        let Some(bb) = poly.bbox() else { continue };
        if y < bb.min.y - band || y > bb.max.y + band {
            continue;
        }
        for (a, b) in poly.edges() {
            if on_border(a, b) || y < a.y.min(b.y) - band || y > a.y.max(b.y) + band {
                continue;
            }
            let lo = a.x.min(b.x) - band;
            let hi = a.x.max(b.x) + band;
            let start = coords.partition_point(|&x| x < lo);
            for i in start..coords.len() {
                if coords[i] > hi {
                    break;
                }
                if !near[i] && segment_distance(Point::new(coords[i], y), a, b) <= band {
                    near[i] = true;
                }
            }
        }
    }
    near
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let s = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + s * d.x, a.y + s * d.y))
}

fn member(set: &Intervals, t: f64) -> bool {
    let k = set.partition_point(|&(lo, _)| lo <= t);
    k > 0 && t <= set[k - 1].1
}

impl<'a> Oracle<'a> {
    fn new(signal: &'a Signal, eps_rel: f64) -> Self {
        let r = signal.length();
        Oracle {
            signal,
            r,
            tol: eps_rel * r,
            freeze: HashMap::new(),
        }
    }

    /// Sorts, merges pieces that overlap or nearly touch, clips to `[0, r]`
    /// and drops pieces no longer than the tolerance.
    fn normalize(&self, mut v: Intervals) -> Intervals {
        v.retain(|&(lo, hi)| hi >= lo);
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Intervals = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            let (lo, hi) = (lo.max(0.0), hi.min(self.r));
            if hi < lo {
                continue;
            }
            match out.last_mut() {
                Some(last) if lo <= last.1 + self.tol => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out.retain(|&(lo, hi)| hi - lo > self.tol);
        out
    }

    fn complement(&self, v: &Intervals) -> Intervals {
        let mut out = Vec::with_capacity(v.len() + 1);
        let mut cur = 0.0;
        for &(lo, hi) in v {
            out.push((cur, lo));
            cur = hi;
        }
        out.push((cur, self.r));
        self.normalize(out)
    }

    fn union(&self, a: &Intervals, b: &Intervals) -> Intervals {
        self.normalize(a.iter().chain(b.iter()).copied().collect())
    }

    fn intersection(&self, a: &Intervals, b: &Intervals) -> Intervals {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi >= lo {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        self.normalize(out)
    }

    fn atom(&self, p: &LinearPredicate, y: f64) -> Intervals {
        let s = self.signal;
        let frozen: f64 = p.frozen.iter().map(|&(k, b)| b * s.value_unchecked(k, y)).sum();
        let ts = s.times_f64();
        // h > 0 exactly where the predicate holds
        let h = |row: usize| {
            let lhs: f64 = p.plain.iter().map(|&(k, a)| a * s.row(row)[k]).sum::<f64>() + frozen;
            match p.cmp {
                Cmp::Lt => p.bound - lhs,
                Cmp::Gt => lhs - p.bound,
            }
        };
        let mut out = Vec::new();
        for j in 0..s.segment_count() {
            let (t0, t1) = (ts[j], ts[j + 1]);
            let (h0, h1) = (h(j), h(j + 1));
            if h0 > 0.0 && h1 > 0.0 {
                out.push((t0, t1));
            } else if h0 > 0.0 || h1 > 0.0 {
                let root = t0 + (t1 - t0) * (h0 / (h0 - h1));
                out.push(if h0 > 0.0 { (t0, root) } else { (root, t1) });
            }
        }
        self.normalize(out)
    }

    fn until(&self, left: &Intervals, right: &Intervals, lo: f64, hi: f64) -> Intervals {
        let mut out = Vec::new();
        for &(jl, jr) in left {
            for &(pl, pr) in right {
                // the witness t' must lie in the component too
                let (ql, qr) = (pl.max(jl), pr.min(jr));
                if qr - ql <= self.tol {
                    continue;
                }
                out.push((jl.max(ql - hi), qr - lo));
            }
        }
        self.normalize(out)
    }

    fn eventually(&self, set: &Intervals, lo: f64, hi: f64) -> Intervals {
        self.normalize(set.iter().map(|&(pl, pr)| (pl - hi, pr - lo)).collect())
    }

    fn row(&mut self, f: &Formula, y: f64) -> Intervals {
        match f {
            Formula::True => vec![(0.0, self.r)],
            Formula::False => Vec::new(),
            Formula::Atom(p) => self.atom(p, y),
            Formula::Not(c) => {
                let c = self.row(c, y);
                self.complement(&c)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.row(a, y), self.row(b, y));
                self.union(&a, &b)
            }
            Formula::And(a, b) => {
                let (a, b) = (self.row(a, y), self.row(b, y));
                self.intersection(&a, &b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.row(a, y), self.row(b, y));
                let na = self.complement(&a);
                self.union(&na, &b)
            }
            Formula::Until { lo, hi, left, right } => {
                let (l, r) = (self.row(left, y), self.row(right, y));
                self.until(&l, &r, time_to_f64(lo), time_to_f64(hi))
            }
            Formula::Eventually { lo, hi, child } => {
                let c = self.row(child, y);
                self.eventually(&c, time_to_f64(lo), time_to_f64(hi))
            }
            Formula::Globally { lo, hi, child } => {
                let c = self.row(child, y);
                let nc = self.complement(&c);
                let fe = self.eventually(&nc, time_to_f64(lo), time_to_f64(hi));
                self.complement(&fe)
            }
            Formula::Freeze(c) => self.freeze_set(c),
        }
    }

    /// `{t | t ∈ row(c, t)}`, independent of the frozen time.
    fn freeze_set(&mut self, c: &Formula) -> Intervals {
        let key = c as *const Formula as usize;
        if let Some(v) = self.freeze.get(&key) {
            return v.clone();
        }
        let probe = |o: &mut Self, t: f64| {
            let row = o.row(c, t);
            member(&row, t)
        };
        let mut ts: Vec<f64> = (0..=FREEZE_SAMPLES)
            .map(|k| self.r * k as f64 / FREEZE_SAMPLES as f64)
            .collect();
        ts.extend_from_slice(self.signal.times_f64());
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let vals: Vec<bool> = ts.iter().map(|&t| probe(self, t)).collect();
        let mut out = Vec::new();
        let mut start = if vals[0] { Some(0.0) } else { None };
        for k in 1..ts.len() {
            if vals[k] == vals[k - 1] {
                continue;
            }
            // bisect for the switch between ts[k-1] and ts[k]
            let (mut a, mut b) = (ts[k - 1], ts[k]);
            for _ in 0..BISECTION_STEPS {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if probe(self, m) == vals[k - 1] {
                    a = m;
                } else {
                    b = m;
                }
            }
            let x = 0.5 * (a + b);
            if vals[k] {
                start = Some(x);
            } else if let Some(s) = start.take() {
                out.push((s, x));
            }
        }
        if let Some(s) = start {
            out.push((s, self.r));
        }
        let out = self.normalize(out);
        self.freeze.insert(key, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, SignalSchema};
    use crate::satset::{monitor, MonitorOptions};
    use num_rational::Ratio;

    const EPS_REL: f64 = 1e-9;

    fn ramp(v0: f64, v1: f64) -> Signal {
        let schema = SignalSchema::new(["x"]).unwrap();
        Signal::new(
            schema,
            vec![Ratio::from_integer(0), Ratio::from_integer(10)],
            vec![vec![v0], vec![v1]],
        )
        .unwrap()
    }

    #[test]
    fn constant_signal_all_true() {
        let s = ramp(1.0, 1.0);
        let f = parse("x > 0", s.schema()).unwrap();
        let g = grid_eval(&s, &f, GridSpec::new(1.0).unwrap(), EPS_REL).unwrap();
        assert_eq!(g.coords.len(), 11);
        assert!(g.cells.iter().all(|&c| c));
    }

    #[test]
    fn threshold_columns() {
        let s = ramp(-5.0, 5.0);
        let f = parse("x > 0", s.schema()).unwrap();
        let g = grid_eval(&s, &f, GridSpec::new(1.0).unwrap(), EPS_REL).unwrap();
        for j in 0..=10 {
            for i in 0..=10 {
                // t = 5 is the boundary, closed sets include it
                assert_eq!(g.get(i, j), i >= 5, "({i},{j})");
            }
        }
    }

    #[test]
    fn freeze_lookahead() {
        // x(t) = t; x(t') > x(t) + 1 for some t' ∈ [t, t+2] iff t + 1 < 10
        let s = ramp(0.0, 10.0);
        let f = parse("*(F[0,2] x > x* + 1)", s.schema()).unwrap();
        let g = grid_eval(&s, &f, GridSpec::new(0.5).unwrap(), EPS_REL).unwrap();
        for (i, &t) in g.coords.iter().enumerate() {
            if t == 9.0 {
                continue;
            }
            for j in 0..g.coords.len() {
                assert_eq!(g.get(i, j), t < 9.0, "t = {t}");
            }
        }
    }

    #[test]
    fn until_needs_left_operand_throughout() {
        let s = ramp(0.0, 10.0);
        // left holds on [0, 4], right on [5, 6]
        let f = parse("x < 4 U[0,2] (x > 5 && x < 6)", s.schema()).unwrap();
        assert!(row_set(&s, &f, 0.0, EPS_REL).unwrap().is_empty());
        let f = parse("x < 5.5 U[0,2] (x > 5 && x < 6)", s.schema()).unwrap();
        let row = row_set(&s, &f, 0.0, EPS_REL).unwrap();
        assert_eq!(row.len(), 1);
        assert!((row[0].0 - 3.0).abs() < 1e-12 && (row[0].1 - 5.5).abs() < 1e-12);
    }

    #[test]
    fn engine_agrees_on_examples() {
        let cases = [
            (ramp(1.0, 1.0), "x > 0", 1.0),
            (ramp(-5.0, 5.0), "x > 0", 1.0),
            (ramp(0.0, 10.0), "*(F[0,2] x > x* + 1)", 0.5),
        ];
        for (s, text, delta) in cases {
            let f = parse(text, s.schema()).unwrap();
            let rep = monitor(&s, &f, &MonitorOptions::default()).unwrap();
            let d = compare(&s, &f, GridSpec::new(delta).unwrap(), &rep.root().region).unwrap();
            assert!(d.is_empty(), "{text}: {d:?}");
        }
    }

    #[test]
    fn corrupted_region_is_detected() {
        let s = ramp(-5.0, 5.0);
        let f = parse("x > 0", s.schema()).unwrap();
        let rep = monitor(&s, &f, &MonitorOptions::default()).unwrap();
        let wrong = rep.root().region.complement();
        let d = compare(&s, &f, GridSpec::new(1.0).unwrap(), &wrong).unwrap();
        assert!(!d.is_empty());
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(GridSpec::new(0.0), Err(OracleError::BadDelta(_))));
        let s = ramp(0.0, 1.0);
        let f = parse("F[0,20] x > 0", s.schema()).unwrap();
        assert!(matches!(
            grid_eval(&s, &f, GridSpec::new(1.0).unwrap(), EPS_REL),
            Err(OracleError::ShortSignal { .. })
        ));
        assert_eq!(GridSpec::default_for(&s).delta(), 10.0 / 8.0);
    }

    #[test]
    fn dumps() {
        let s = ramp(-5.0, 5.0);
        let f = parse("x > 0", s.schema()).unwrap();
        let g = grid_eval(&s, &f, GridSpec::new(5.0).unwrap(), EPS_REL).unwrap();
        assert_eq!(g.to_pgm(), "P2\n3 3\n255\n0 255 255\n0 255 255\n0 255 255\n");
        assert_eq!(
            g.to_json(),
            r#"{"coords":[0.0,5.0,10.0],"rows":[[0,1,1],[0,1,1],[0,1,1]]}"#
        );
    }
}
