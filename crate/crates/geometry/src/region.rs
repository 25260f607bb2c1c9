use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::point::{orient, segment_distance, Point};
use crate::polygon::{ConvexPolygon, Membership};
use crate::slab;
use crate::GeometryError;

/// The square `[0, size]²` that every satisfaction set lives in, together
/// with the geometric tolerance used by all operations on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    size: f64,
    eps: f64,
}

/// Relative tolerance: `eps = DEFAULT_REL_EPS * size`.
pub const DEFAULT_REL_EPS: f64 = 1e-9;

impl Domain {
    pub fn new(size: f64) -> Result<Self, GeometryError> {
        Self::with_eps(size, DEFAULT_REL_EPS * size)
    }

    pub fn with_eps(size: f64, eps: f64) -> Result<Self, GeometryError> {
        if !(size.is_finite() && size > 0.0) {
            return Err(GeometryError::InvalidDomain(size));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(GeometryError::InvalidDomain(eps));
        }
        Ok(Domain { size, eps })
    }

    pub fn size(&self) -> f64 {
        self.size
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn square(&self) -> ConvexPolygon {
        ConvexPolygon::rectangle(0.0, self.size, 0.0, self.size, self.eps)
    }

    fn on_border(&self, a: Point, b: Point) -> bool {
        let e = self.eps;
        let r = self.size;
        ((a.x).abs() <= e && (b.x).abs() <= e)
            || ((a.y).abs() <= e && (b.y).abs() <= e)
            || ((a.x - r).abs() <= e && (b.x - r).abs() <= e)
            || ((a.y - r).abs() <= e && (b.y - r).abs() <= e)
    }
}

/// A finite union of convex polygons inside a [`Domain`].
///
/// Member polygons may overlap unless the region came out of an operation
/// documented as returning a canonical (interior-disjoint) decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    domain: Domain,
    polygons: Vec<ConvexPolygon>,
}

impl Region {
    pub fn empty(domain: Domain) -> Self {
        Region {
            domain,
            polygons: Vec::new(),
        }
    }

    pub fn full(domain: Domain) -> Self {
        Region {
            domain,
            polygons: vec![domain.square()],
        }
    }

    /// Clips every polygon to the domain square and drops empty ones.
    pub fn from_polygons(domain: Domain, polygons: Vec<ConvexPolygon>) -> Self {
        let square = domain.square();
        let r = domain.size;
        let polygons = polygons
            .into_iter()
            .filter_map(|p| {
                let bb = p.bbox()?;
                if bb.min.x >= 0.0 && bb.min.y >= 0.0 && bb.max.x <= r && bb.max.y <= r {
                    Some(p)
                } else {
                    Some(p.intersect(&square, domain.eps)).filter(|q| !q.is_empty())
                }
            })
            .collect();
        Region { domain, polygons }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn polygons(&self) -> &[ConvexPolygon] {
        &self.polygons
    }

    pub fn into_polygons(self) -> Vec<ConvexPolygon> {
        self.polygons
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.polygons.iter().map(ConvexPolygon::len).sum()
    }

    /// Sum of member areas; equals the region's area only for canonical
    /// regions.
    pub fn area(&self) -> f64 {
        self.polygons.iter().map(ConvexPolygon::area).sum()
    }

    /// Set union. Keeps the members of both inputs; see [`Region::canonical`].
    pub fn union(&self, other: &Region) -> Region {
        let mut polygons = self.polygons.clone();
        polygons.extend(other.polygons.iter().cloned());
        Region {
            domain: self.domain,
            polygons,
        }
    }

    /// Interior-disjoint convex decomposition with the same membership.
    pub fn canonical(&self) -> Region {
        self.combine(&[&self.polygons], |c| c[0] > 0)
    }

    /// `domain ∖ self`, canonical.
    pub fn complement(&self) -> Region {
        let square = [self.domain.square()];
        self.combine(&[&square, &self.polygons], |c| c[0] > 0 && c[1] == 0)
    }

    /// `self ∩ other`, canonical.
    pub fn intersection(&self, other: &Region) -> Region {
        self.combine(&[&self.polygons, &other.polygons], |c| c[0] > 0 && c[1] > 0)
    }

    /// `self ∖ other`, canonical.
    pub fn difference(&self, other: &Region) -> Region {
        self.combine(&[&self.polygons, &other.polygons], |c| c[0] > 0 && c[1] == 0)
    }

    fn combine<F: Fn(&[u32]) -> bool>(&self, layers: &[&[ConvexPolygon]], keep: F) -> Region {
        let eps = self.domain.eps;
        let traps = slab::sweep(layers, eps, keep);
        Region {
            domain: self.domain,
            polygons: slab::stack(&traps, eps),
        }
    }

    /// All non-empty intersections `p ∩ q` with `p` from `self` and `q` from
    /// `other`, in a deterministic order.
    pub fn pairwise_intersections(&self, other: &Region) -> Vec<ConvexPolygon> {
        let eps = self.domain.eps;
        let boxes_b: Vec<_> = other.polygons.iter().map(|q| q.bbox()).collect();
        let mut order: Vec<usize> = (0..other.polygons.len()).filter(|&j| boxes_b[j].is_some()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (boxes_b[i].unwrap(), boxes_b[j].unwrap());
            a.min.x.total_cmp(&b.min.x).then(i.cmp(&j))
        });
        let mut out = Vec::new();
        for p in &self.polygons {
            let Some(bp) = p.bbox() else { continue };
            let end = order.partition_point(|&j| boxes_b[j].unwrap().min.x <= bp.max.x);
            for &j in &order[..end] {
                let bq = boxes_b[j].unwrap();
                if !bp.overlaps(&bq, 0.0) {
                    continue;
                }
                let x = p.intersect(&other.polygons[j], eps);
                if !x.is_empty() {
                    out.push(x);
                }
            }
        }
        out
    }

    /// `{(x, y) | ∃c ∈ (lo, hi): (x + c, y) ∈ self}`, clipped to the domain.
    ///
    /// Each member becomes the hull of its translates by `-lo` and `-hi`
    /// along `x`. The output members may overlap.
    pub fn erode_shift(&self, lo: f64, hi: f64) -> Result<Region, GeometryError> {
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi >= lo) {
            return Err(GeometryError::InvalidShift { lo, hi });
        }
        let eps = self.domain.eps;
        let polygons = self
            .polygons
            .iter()
            .map(|p| {
                if hi == lo {
                    return p.translate(-lo, 0.0);
                }
                let mut pts: Vec<Point> = Vec::with_capacity(2 * p.len());
                pts.extend(p.vertices().iter().map(|v| Point::new(v.x - hi, v.y)));
                pts.extend(p.vertices().iter().map(|v| Point::new(v.x - lo, v.y)));
                ConvexPolygon::hull(&pts, eps)
            })
            .collect();
        Ok(Region::from_polygons(self.domain, polygons))
    }

    /// The set `{t | (t, t) ∈ self}` as sorted, merged, non-degenerate
    /// intervals. Stretches where the diagonal only runs along a boundary are
    /// dropped.
    pub fn diagonal_trace(&self) -> Vec<(f64, f64)> {
        let eps = self.domain.eps;
        let mut pieces: Vec<(f64, f64)> = self.polygons.iter().filter_map(|p| diagonal_chord(p, eps)).collect();
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match out.last_mut() {
                Some(last) if lo <= last.1 + eps => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out.retain(|(lo, hi)| hi - lo > eps);
        out
    }

    /// Vertical bands `[u, v] × [0, size]`, one per interval.
    pub fn cylindrify(domain: Domain, intervals: &[(f64, f64)]) -> Region {
        let polygons = intervals
            .iter()
            .map(|&(u, v)| ConvexPolygon::rectangle(u.max(0.0), v.min(domain.size), 0.0, domain.size, domain.eps))
            .filter(|p| !p.is_empty())
            .collect();
        Region { domain, polygons }
    }

    /// Repeatedly merges pairs of members that share a full edge and whose
    /// union is convex, until no such pair is left.
    pub fn merge_adjacent(&self) -> Region {
        let eps = self.domain.eps;
        let mut polys: Vec<ConvexPolygon> = self.polygons.iter().filter(|p| !p.is_empty()).cloned().collect();
        loop {
            let mut merged_any = false;
            let mut i = 0;
            while i < polys.len() {
                let mut j = i + 1;
                while j < polys.len() {
                    if let Some(m) = merge_pair(&polys[i], &polys[j], eps) {
                        polys[i] = m;
                        polys.remove(j);
                        merged_any = true;
                        j = i + 1;
                    } else {
                        j += 1;
                    }
                }
                i += 1;
            }
            if !merged_any {
                break;
            }
        }
        Region {
            domain: self.domain,
            polygons: polys,
        }
    }

    pub fn contains(&self, p: Point, mode: Membership) -> bool {
        let eps = self.domain.eps;
        match mode {
            Membership::Closed => self.polygons.iter().any(|q| q.contains(p, Membership::Closed, eps)),
            // a point on a seam between two members is still interior to the
            // union, so strict membership is tested as "not in the closure of
            // the complement"
            Membership::Strict => {
                let inside = self.polygons.iter().any(|q| q.contains(p, Membership::Closed, eps));
                inside
                    && !self
                        .complement()
                        .polygons
                        .iter()
                        .any(|q| q.contains(p, Membership::Closed, eps))
            }
        }
    }

    /// Distance from `p` to the nearest member edge that does not lie on the
    /// border of the domain square. Infinite when there is no such edge.
    pub fn inner_boundary_distance(&self, p: Point) -> f64 {
        self.polygons
            .iter()
            .flat_map(|q| q.edges())
            .filter(|&(a, b)| !self.domain.on_border(a, b))
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

fn diagonal_chord(p: &ConvexPolygon, eps: f64) -> Option<(f64, f64)> {
    let v = p.vertices();
    let f: Vec<f64> = v.iter().map(|q| q.x - q.y).collect();
    // the diagonal must pass through the interior, not just graze an edge
    let reach = eps * std::f64::consts::SQRT_2;
    let (fmin, fmax) = f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    if fmin >= -reach || fmax <= reach {
        return None;
    }
    let n = v.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let j = (i + 1) % n;
        if f[i] == 0.0 {
            lo = lo.min(v[i].x);
            hi = hi.max(v[i].x);
        }
        if (f[i] < 0.0 && f[j] > 0.0) || (f[i] > 0.0 && f[j] < 0.0) {
            let s = f[i] / (f[i] - f[j]);
            let x = v[i].x + s * (v[j].x - v[i].x);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (hi - lo > eps).then_some((lo, hi))
}

/// Union of `p` and `q` when they share a full edge and the union is convex.
fn merge_pair(p: &ConvexPolygon, q: &ConvexPolygon, eps: f64) -> Option<ConvexPolygon> {
    let (bp, bq) = (p.bbox()?, q.bbox()?);
    if !bp.overlaps(&bq, eps) {
        return None;
    }
    let (pv, qv) = (p.vertices(), q.vertices());
    let (n, m) = (pv.len(), qv.len());
    for i in 0..n {
        let (u, v) = (pv[i], pv[(i + 1) % n]);
        for j in 0..m {
            let (a, b) = (qv[j], qv[(j + 1) % m]);
            if a.dist(v) > eps || b.dist(u) > eps {
                continue;
            }
            // p's ring from v to u, then q's ring strictly between u and v
            let mut ring: Vec<Point> = (0..n).map(|k| pv[(i + 1 + k) % n]).collect();
            ring.extend((2..m).map(|k| qv[(j + k) % m]));
            let len = ring.len();
            let convex = (0..len).all(|k| {
                let (a, b, c) = (ring[(k + len - 1) % len], ring[k], ring[(k + 1) % len]);
                orient(a, b, c) >= -eps * a.dist(c)
            });
            return convex.then(|| ConvexPolygon::from_ring(ring, eps));
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    domain: f64,
    polygons: Vec<Vec<Point>>,
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RegionJson {
            domain: self.domain.size,
            polygons: self.polygons.iter().map(|p| p.vertices().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RegionJson::deserialize(d)?;
        let domain = Domain::new(raw.domain).map_err(D::Error::custom)?;
        let polygons = raw
            .polygons
            .into_iter()
            .map(|ring| ConvexPolygon::new(ring, domain.eps))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Region::from_polygons(domain, polygons))
    }
}
