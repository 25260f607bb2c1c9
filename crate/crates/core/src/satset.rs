//! Satisfaction sets and the monitor.
//!
//! Every subformula is mapped to the region of `(t, t*)` points where it
//! holds. Regions returned by the public operations here are interior-disjoint
//! unions of convex polygons.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;
use stlstar_geometry::{cluster_levels, ConvexPolygon, Domain, GeometryError, Membership, Point, Region};
use thiserror::Error;

use crate::formula::{Cmp, Formula, LinearPredicate};
use crate::signal::{LengthCheck, Signal};
use crate::time::{format_time, time_to_f64, Time};

#[derive(Debug, Error)]
pub enum MonitorError {
    #[error("signal too short: formula needs length {}, signal has {}", format_time(.needed), format_time(.have))]
    ShortSignal { needed: Time, have: Time },
    #[error("formula refers to variable index {index} but the signal has {count} variables")]
    SchemaMismatch { index: usize, count: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
    /// `(0, 0)` lies within the tolerance band of the root set's boundary.
    #[serde(rename = "BOUNDARY")]
    Boundary,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Boundary => "BOUNDARY",
        })
    }
}

#[derive(Clone, Debug)]
pub struct MonitorOptions {
    /// Geometric tolerance relative to the signal length.
    pub eps_rel: f64,
    /// Keep every subformula's region in the report, not only the root's.
    pub keep_intermediate: bool,
    /// Evaluate even when the signal is shorter than the formula needs.
    pub allow_short: bool,
}

impl Default for MonitorOptions {
    fn default() -> Self {
        MonitorOptions {
            eps_rel: stlstar_geometry::DEFAULT_REL_EPS,
            keep_intermediate: false,
            allow_short: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeReport {
    pub id: usize,
    pub formula: String,
    pub region: Region,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    pub polygons_peak: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonitorReport {
    pub verdict: Verdict,
    /// Closed-membership answer at `(0, 0)`, also meaningful when the verdict
    /// is [`Verdict::Boundary`].
    pub closed: bool,
    /// Distinct subformulas of the desugared formula in evaluation order; the
    /// root comes last. Only the root unless intermediate regions were kept.
    pub nodes: Vec<NodeReport>,
    pub stats: Stats,
    /// Set when the signal was too short and the check was overridden.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub short: Option<String>,
}

impl MonitorReport {
    pub fn root(&self) -> &NodeReport {
        self.nodes.last().expect("report has a root node")
    }

    pub fn node(&self, id: usize) -> Option<&NodeReport> {
        self.nodes.iter().find(|n| n.id == id)
    }
}

/// `{(t, t*) ∈ I_i × I_j | μ(s, t, t*)}` for every pair of segments, one
/// convex piece per pair at most.
pub fn atomic_satset(signal: &Signal, p: &LinearPredicate, domain: Domain) -> Region {
    let eps = domain.eps();
    let ts = signal.times_f64();
    let m = signal.segment_count();
    // Σ a_k x_k(t) = slope·t + offset on segment j
    let affine = |coeffs: &[(usize, f64)], j: usize| -> (f64, f64) {
        coeffs.iter().fold((0.0, 0.0), |(s, o), &(k, c)| {
            let sl = signal.slope(k, j);
            (s + c * sl, o + c * (signal.row(j)[k] - sl * ts[j]))
        })
    };
    let plain: Vec<(f64, f64)> = (0..m).map(|i| affine(&p.plain, i)).collect();
    let frozen: Vec<(f64, f64)> = (0..m).map(|j| affine(&p.frozen, j)).collect();
    let sign = match p.cmp {
        Cmp::Lt => 1.0,
        Cmp::Gt => -1.0,
    };
    let mut cells = Vec::new();
    for j in 0..m {
        let (b, beta) = frozen[j];
        for i in 0..m {
            let (a, alpha) = plain[i];
            let rect = ConvexPolygon::rectangle(ts[i], ts[i + 1], ts[j], ts[j + 1], eps);
            let c = p.bound - alpha - beta;
            let piece = rect.clip_halfplane(sign * a, sign * b, sign * c, eps);
            if !piece.is_empty() {
                cells.push(piece);
            }
        }
    }
    Region::from_polygons(domain, cells)
}

pub fn negate_satset(r: &Region) -> Region {
    r.complement()
}

pub fn or_satset(a: &Region, b: &Region) -> Region {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    a.union(b).canonical()
}

/// `{(t, t*) | (t, t) ∈ r}`: vertical bands over the diagonal trace.
pub fn freeze_satset(r: &Region) -> Region {
    Region::cylindrify(r.domain(), &r.diagonal_trace())
}

/// `F[a,b]` directly by horizontal erosion.
pub fn eventually_satset(r: &Region, a: f64, b: f64) -> Result<Region, GeometryError> {
    Ok(r.erode_shift(a, b)?.canonical())
}

#[derive(Clone, Copy, Debug)]
struct Line {
    x0: f64,
    x1: f64,
}

impl Line {
    fn at(&self, y: f64, y0: f64, y1: f64) -> f64 {
        if y <= y0 {
            self.x0
        } else if y >= y1 {
            self.x1
        } else {
            self.x0 + (self.x1 - self.x0) * ((y - y0) / (y1 - y0))
        }
    }
}

/// Horizontal pieces of one stripe, `[l, r]` at both the bottom and the top.
#[derive(Clone, Copy, Debug)]
struct Span {
    la: f64,
    lb: f64,
    ra: f64,
    rb: f64,
}

/// `φ1 U[a,b] φ2` by the stripe procedure.
///
/// For each convex piece `P` of `r1 ∩ r2`, the plane is cut into horizontal
/// stripes at the vertex heights of `P` and of the `r1` pieces overlapping
/// it. Inside a stripe `P` and every `r1` piece are trapezoids. Everything
/// right of `P`'s right edge is dropped, touching `r1` pieces are joined, and
/// the rightmost joined piece `A` (the one ending at `P`'s right edge) gives
/// `A ∩ (P ⊖ [a, b])`.
pub fn until_satset(r1: &Region, r2: &Region, a: f64, b: f64) -> Result<Region, GeometryError> {
    if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= a) {
        return Err(GeometryError::InvalidShift { lo: a, hi: b });
    }
    let domain = r1.domain();
    let eps = domain.eps();
    if r1.is_empty() || r2.is_empty() {
        return Ok(Region::empty(domain));
    }
    let s1 = r1.canonical();
    let pieces: Vec<(&ConvexPolygon, stlstar_geometry::BBox)> = s1
        .polygons()
        .iter()
        .filter_map(|q| q.bbox().map(|bb| (q, bb)))
        .collect();
    let mut out = Vec::new();
    for p in s1.pairwise_intersections(&r2.canonical()) {
        let Some(bb) = p.bbox() else { continue };
        let cand: Vec<&(&ConvexPolygon, _)> = pieces
            .iter()
            .filter(|(_, qb)| qb.min.y < bb.max.y - eps && qb.max.y > bb.min.y + eps && qb.min.x <= bb.max.x + eps)
            .collect();
        let mut ys: Vec<f64> = p.vertices().iter().map(|v| v.y).collect();
        for (q, _) in &cand {
            ys.extend(
                q.vertices()
                    .iter()
                    .map(|v| v.y)
                    .filter(|&y| y > bb.min.y && y < bb.max.y),
            );
        }
        let mut levels = cluster_levels(ys, eps);
        if let Some(last) = levels.last_mut() {
            *last = bb.max.y;
        }
        for w in levels.windows(2) {
            let (y0, y1) = (w[0], w[1]);
            if y1 - y0 <= eps {
                continue;
            }
            let (pl0, pr0) = p.span_band(y0, eps);
            let (pl1, pr1) = p.span_band(y1, eps);
            if pr0 - pl0 <= eps && pr1 - pl1 <= eps {
                continue;
            }
            let ul = Line { x0: pr0, x1: pr1 };
            let pl = Line { x0: pl0, x1: pl1 };
            let mut lines: Vec<(Line, Line)> = Vec::new();
            for (q, qb) in &cand {
                if qb.min.y > y0 + eps || qb.max.y < y1 - eps {
                    continue;
                }
                let (ql0, qr0) = q.span_band(y0, eps);
                let (ql1, qr1) = q.span_band(y1, eps);
                lines.push((Line { x0: ql0, x1: ql1 }, Line { x0: qr0, x1: qr1 }));
            }
            // the cut at `ul` is only linear between crossings with it
            let mut cuts = vec![y0, y1];
            for (l, r) in &lines {
                for line in [l, r] {
                    let d0 = line.x0 - ul.x0;
                    let d1 = line.x1 - ul.x1;
                    if (d0 > eps && d1 < -eps) || (d0 < -eps && d1 > eps) {
                        cuts.push(y0 + (y1 - y0) * (d0 / (d0 - d1)));
                    }
                }
            }
            let mut sub = cluster_levels(cuts, eps);
            if let Some(last) = sub.last_mut() {
                *last = y1;
            }
            for v in sub.windows(2) {
                let (ya, yb) = (v[0], v[1]);
                if yb - ya <= eps {
                    continue;
                }
                let (ua, ub) = (ul.at(ya, y0, y1), ul.at(yb, y0, y1));
                let mut spans: Vec<Span> = lines
                    .iter()
                    .map(|(l, r)| Span {
                        la: l.at(ya, y0, y1),
                        lb: l.at(yb, y0, y1),
                        ra: r.at(ya, y0, y1).min(ua),
                        rb: r.at(yb, y0, y1).min(ub),
                    })
                    .filter(|s| (s.ra - s.la > eps || s.rb - s.lb > eps) && s.ra >= s.la - eps && s.rb >= s.lb - eps)
                    .collect();
                spans.sort_by(|s, t| (s.la + s.lb).total_cmp(&(t.la + t.lb)));
                let mut comps: Vec<Span> = Vec::new();
                for s in spans {
                    match comps.last_mut() {
                        Some(c) if s.la <= c.ra + eps && s.lb <= c.rb + eps => {
                            c.ra = c.ra.max(s.ra);
                            c.rb = c.rb.max(s.rb);
                        }
                        _ => comps.push(s),
                    }
                }
                let Some(best) = comps.iter().map(|c| c.ra + c.rb).max_by(f64::total_cmp) else {
                    continue;
                };
                let (pa, pb) = (pl.at(ya, y0, y1), pl.at(yb, y0, y1));
                let p_sub = [
                    Point::new(pa, ya),
                    Point::new(ua, ya),
                    Point::new(ub, yb),
                    Point::new(pb, yb),
                ];
                let mut shifted = Vec::with_capacity(8);
                for d in [a, b] {
                    shifted.extend(p_sub.iter().map(|q| Point::new(q.x - d, q.y)));
                }
                let eroded = ConvexPolygon::hull(&shifted, eps);
                if eroded.is_empty() {
                    continue;
                }
                // ε-level ties are all kept
                for c in comps.iter().filter(|c| c.ra + c.rb >= best - 2.0 * eps) {
                    let quad = ConvexPolygon::hull(
                        &[
                            Point::new(c.la, ya),
                            Point::new(c.ra, ya),
                            Point::new(c.rb, yb),
                            Point::new(c.lb, yb),
                        ],
                        eps,
                    );
                    let piece = quad.intersect(&eroded, eps);
                    if !piece.is_empty() {
                        out.push(piece);
                    }
                }
            }
        }
    }
    Ok(Region::from_polygons(domain, out).canonical())
}

struct Engine<'a> {
    signal: &'a Signal,
    domain: Domain,
    memo: HashMap<String, usize>,
    nodes: Vec<(String, Region)>,
}

impl Engine<'_> {
    fn eval(&mut self, f: &Formula) -> Result<usize, MonitorError> {
        let key = format!("{f:?}");
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        let region = match f {
            Formula::True => Region::full(self.domain),
            Formula::Atom(p) => atomic_satset(self.signal, p, self.domain),
            Formula::Not(c) => {
                let c = self.eval(c)?;
                negate_satset(&self.nodes[c].1)
            }
            Formula::Or(x, y) => {
                let (x, y) = (self.eval(x)?, self.eval(y)?);
                or_satset(&self.nodes[x].1, &self.nodes[y].1)
            }
            Formula::Until { lo, hi, left, right } => {
                let (lo, hi) = (time_to_f64(lo), time_to_f64(hi));
                let r = self.eval(right)?;
                if **left == Formula::True {
                    eventually_satset(&self.nodes[r].1, lo, hi)?
                } else {
                    let l = self.eval(left)?;
                    until_satset(&self.nodes[l].1, &self.nodes[r].1, lo, hi)?
                }
            }
            Formula::Freeze(c) => {
                let c = self.eval(c)?;
                freeze_satset(&self.nodes[c].1)
            }
            // sugar never reaches the engine
            _ => return self.eval(&f.desugar()),
        };
        let id = self.nodes.len();
        self.nodes.push((key.clone(), region));
        self.memo.insert(key, id);
        Ok(id)
    }
}

/// Decides `s ⊨ φ`, i.e. whether `(0, 0)` lies in the satisfaction set.
pub fn monitor(signal: &Signal, f: &Formula, opts: &MonitorOptions) -> Result<MonitorReport, MonitorError> {
    let start = Instant::now();
    let count = signal.schema().len();
    if let Some(&index) = f.variables().iter().find(|&&i| i >= count) {
        return Err(MonitorError::SchemaMismatch { index, count });
    }
    let mut short = None;
    if let LengthCheck::Short { needed, have } = signal.check_length(f) {
        if !opts.allow_short {
            return Err(MonitorError::ShortSignal { needed, have });
        }
        short = Some(format!(
            "signal length {} is below the required {}; the verdict may be wrong",
            format_time(&have),
            format_time(&needed)
        ));
    }
    let r = signal.length();
    let domain = Domain::with_eps(r, opts.eps_rel * r)?;
    let core = f.desugar();
    let mut engine = Engine {
        signal,
        domain,
        memo: HashMap::new(),
        nodes: Vec::new(),
    };
    let root = engine.eval(&core)?;

    let region = &engine.nodes[root].1;
    let origin = Point::new(0.0, 0.0);
    let closed = region.contains(origin, Membership::Closed);
    let outside = region.complement().contains(origin, Membership::Closed);
    let verdict = match (closed, outside) {
        (true, false) => Verdict::Sat,
        (false, true) => Verdict::Unsat,
        _ => Verdict::Boundary,
    };

    let polygons_peak = engine.nodes.iter().map(|(_, r)| r.len()).max().unwrap_or(0);
    let printable = printable_nodes(&core);
    let mut nodes: Vec<NodeReport> = Vec::new();
    for (id, (key, region)) in engine.nodes.into_iter().enumerate() {
        if opts.keep_intermediate || id == root {
            let formula = printable
                .get(&key)
                .map(|g| g.display(signal.schema()).to_string())
                .unwrap_or_default();
            nodes.push(NodeReport { id, formula, region });
        }
    }
    Ok(MonitorReport {
        verdict,
        closed,
        nodes,
        stats: Stats {
            polygons_peak,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        short,
    })
}

fn printable_nodes(f: &Formula) -> HashMap<String, &Formula> {
    let mut out = HashMap::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        out.entry(format!("{g:?}")).or_insert(g);
        stack.extend(g.children());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, SignalSchema};
    use num_rational::Ratio;

    fn ramp(len: i128, v0: f64, v1: f64) -> Signal {
        let schema = SignalSchema::new(["x"]).unwrap();
        Signal::new(
            schema,
            vec![Ratio::from_integer(0), Ratio::from_integer(len)],
            vec![vec![v0], vec![v1]],
        )
        .unwrap()
    }

    fn dom() -> Domain {
        Domain::new(10.0).unwrap()
    }

    fn band(x0: f64, x1: f64) -> Region {
        Region::cylindrify(dom(), &[(x0, x1)])
    }

    fn inside(r: &Region, x: f64, y: f64) -> bool {
        r.contains(Point::new(x, y), Membership::Closed)
    }

    #[test]
    fn threshold_atom_is_a_band() {
        let s = ramp(10, -5.0, 5.0);
        let f = parse("x > 0", s.schema()).unwrap();
        let Formula::Atom(p) = f else { panic!() };
        let r = atomic_satset(&s, &p, dom());
        assert_eq!(r.len(), 1);
        assert!((r.area() - 50.0).abs() < 1e-9);
        assert!(inside(&r, 7.0, 3.0) && !inside(&r, 3.0, 7.0));
    }

    #[test]
    fn constant_atom_is_full_or_empty() {
        let s = ramp(10, 1.0, 1.0);
        let p = |text: &str| match parse(text, s.schema()).unwrap() {
            Formula::Atom(p) => p,
            _ => unreachable!(),
        };
        assert!((atomic_satset(&s, &p("x > 0"), dom()).area() - 100.0).abs() < 1e-9);
        assert!(atomic_satset(&s, &p("x < 0"), dom()).is_empty());
    }

    #[test]
    fn frozen_atom_clips_along_a_line() {
        // x(t) = t on [0, 4] and [10, 13]; x* < 2/3 x + 28/3 in the cell
        // [0, 4] × [10, 13] keeps the part below t* = 2/3 t + 28/3
        let schema = SignalSchema::new(["x"]).unwrap();
        let times = [0, 4, 10, 13].map(Ratio::from_integer).to_vec();
        let values = vec![vec![0.0], vec![4.0], vec![10.0], vec![13.0]];
        let s = Signal::new(schema, times, values).unwrap();
        let Formula::Atom(p) = parse("x* < 0.6666666666666666 x + 9.333333333333334", s.schema()).unwrap() else {
            panic!()
        };
        let d = Domain::new(13.0).unwrap();
        let r = atomic_satset(&s, &p, d);
        let cell = ConvexPolygon::rectangle(0.0, 4.0, 10.0, 13.0, d.eps());
        let pieces: Vec<_> = r
            .polygons()
            .iter()
            .map(|q| q.intersect(&cell, d.eps()))
            .filter(|q| !q.is_empty())
            .collect();
        assert_eq!(pieces.len(), 1);
        // vertices (0,10), (4,10), (4,12), (0, 28/3 clipped to 10) → area 4·… hand value:
        // the line meets t = 0 at t* = 28/3 < 10 and t = 4 at t* = 12
        // region = {10 ≤ t* < 2/3 t + 28/3}: triangle (1,10),(4,10),(4,12), area 3
        assert!((pieces[0].area() - 3.0).abs() < 1e-9);
        assert!(inside(&r, 3.5, 10.5) && !inside(&r, 0.5, 12.0));
    }

    #[test]
    fn negate_and_or_examples() {
        let e = Region::empty(dom());
        assert!((negate_satset(&e).area() - 100.0).abs() < 1e-9);
        assert!(negate_satset(&Region::full(dom())).is_empty());
        let b = band(2.0, 3.0);
        assert_eq!(or_satset(&b, &e), b);
        assert!(or_satset(&e, &e).is_empty());
        assert!((or_satset(&negate_satset(&b), &b).area() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn freeze_examples() {
        assert!((freeze_satset(&Region::full(dom())).area() - 100.0).abs() < 1e-9);
        let below = ConvexPolygon::new(
            vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(10.0, 10.0)],
            dom().eps(),
        )
        .unwrap();
        assert!(freeze_satset(&Region::from_polygons(dom(), vec![below])).is_empty());
        let f = freeze_satset(&band(2.0, 3.0));
        assert_eq!(f, band(2.0, 3.0));
        assert_eq!(freeze_satset(&f), f);
    }

    #[test]
    fn until_examples() {
        let full = Region::full(dom());
        let r = until_satset(&full, &band(5.0, 6.0), 0.0, 2.0).unwrap();
        assert!((r.area() - 30.0).abs() < 1e-9, "{}", r.area());
        assert!(inside(&r, 3.5, 1.0) && !inside(&r, 2.5, 1.0));
        assert!(until_satset(&band(0.0, 4.0), &band(5.0, 6.0), 0.0, 2.0)
            .unwrap()
            .is_empty());
        assert!(until_satset(&full, &Region::empty(dom()), 0.0, 2.0).unwrap().is_empty());
        assert!(until_satset(&full, &full, 2.0, 1.0).is_err());
    }

    #[test]
    fn until_requires_continuous_left_operand() {
        // φ1 holds on [0, 4] ∪ [4.5, 10], φ2 on [7, 8]; only t ≥ 4.5 can wait
        let r1 = Region::cylindrify(dom(), &[(0.0, 4.0), (4.5, 10.0)]);
        let r = until_satset(&r1, &band(7.0, 8.0), 1.0, 3.0).unwrap();
        // t ∈ [max(4.5, 7 - 3), 8 - 1] = [4.5, 7]
        assert!((r.area() - 25.0).abs() < 1e-9, "{}", r.area());
    }

    #[test]
    fn eventually_examples() {
        let r = eventually_satset(&band(5.0, 6.0), 0.0, 2.0).unwrap();
        assert_eq!(r, band(3.0, 6.0));
        assert!(eventually_satset(&Region::empty(dom()), 0.0, 2.0).unwrap().is_empty());
        let near = eventually_satset(&band(5.0, 6.0), 0.0, 1e-6).unwrap();
        assert!((near.area() - 10.0).abs() < 1e-4);
    }

    #[test]
    fn monitor_constant_signal() {
        let s = ramp(2, 1.0, 1.0);
        let f = parse("G[0,1] x > 0", s.schema()).unwrap();
        let rep = monitor(&s, &f, &MonitorOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Sat);
        assert!(rep.closed);
        assert_eq!(rep.nodes.len(), 1);
    }

    #[test]
    fn monitor_reports_boundary_and_short() {
        // {t > t*} and its complement both touch the origin
        let s = ramp(10, 0.0, 10.0);
        let f = parse("x > x*", s.schema()).unwrap();
        let rep = monitor(&s, &f, &MonitorOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Boundary);
        assert!(rep.closed);

        // a zero-width complement is don't-care, not a boundary
        let f = parse("x > 0", s.schema()).unwrap();
        let rep = monitor(&s, &f, &MonitorOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Sat);

        let f = parse("F[0,20] x > 0", s.schema()).unwrap();
        assert!(matches!(
            monitor(&s, &f, &MonitorOptions::default()),
            Err(MonitorError::ShortSignal { .. })
        ));
        let opts = MonitorOptions {
            allow_short: true,
            ..Default::default()
        };
        let rep = monitor(&s, &f, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::Sat);
        assert!(rep.short.is_some());
    }

    #[test]
    fn monitor_keeps_intermediate_nodes() {
        let s = ramp(10, -5.0, 5.0);
        let f = parse("F[0,8] x > 2 && F[0,8] x > 2", s.schema()).unwrap();
        let opts = MonitorOptions {
            keep_intermediate: true,
            ..Default::default()
        };
        let rep = monitor(&s, &f, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::Sat);
        // memoized: atom, F, !F, (!F || !F) collapses to !F... distinct nodes only
        let formulas: Vec<&str> = rep.nodes.iter().map(|n| n.formula.as_str()).collect();
        assert_eq!(formulas.len(), 5, "{formulas:?}");
        assert_eq!(rep.root().formula, "!(!(true U[0,8] x > 2) || !(true U[0,8] x > 2))");
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["verdict"], "SAT");
        assert!(json["nodes"][0]["region"]["polygons"].is_array());
    }
}
