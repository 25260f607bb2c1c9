use crate::point::{orient, segment_distance, BBox, Point};
use crate::GeometryError;

/// A closed convex polygon stored as a counter-clockwise vertex ring.
///
/// The ring has at least three vertices and no three consecutive collinear
/// ones, or it is empty. Degenerate shapes (area below `eps²` or width below
/// `eps`) are normalized to the empty polygon by every constructor.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

/// Membership test mode for points close to a boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Accept points within `eps` of the set.
    Closed,
    /// Require points farther than `eps` inside the set.
    Strict,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        ConvexPolygon { vertices: Vec::new() }
    }

    /// Validates a user-supplied vertex ring (either orientation).
    pub fn new(vertices: Vec<Point>, eps: f64) -> Result<Self, GeometryError> {
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { index });
        }
        let ring = dedup_ring(vertices, eps);
        if ring.len() >= 3 {
            let sign = if signed_area(&ring) < 0.0 { -1.0 } else { 1.0 };
            let n = ring.len();
            for i in 0..n {
                let (p, v, q) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
                if sign * orient(p, v, q) < -eps * p.dist(q) {
                    return Err(GeometryError::NotConvex { index: i });
                }
            }
        }
        Ok(Self::from_ring(ring, eps))
    }

    /// Builds a polygon from a ring that is convex up to `eps` noise.
    pub(crate) fn from_ring(mut ring: Vec<Point>, eps: f64) -> Self {
        ring = dedup_ring(ring, eps);
        if ring.len() < 3 {
            return Self::empty();
        }
        if signed_area(&ring) < 0.0 {
            ring.reverse();
        }
        drop_flat_vertices(&mut ring, eps);
        if ring.len() < 3 {
            return Self::empty();
        }
        let poly = ConvexPolygon { vertices: ring };
        if poly.area() < eps * eps || poly.width() <= eps {
            return Self::empty();
        }
        poly
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, eps: f64) -> Self {
        Self::from_ring(
            vec![
                Point::new(x0, y0),
                Point::new(x1, y0),
                Point::new(x1, y1),
                Point::new(x0, y1),
            ],
            eps,
        )
    }

    /// Convex hull of an arbitrary point set (Andrew's monotone chain).
    pub fn hull(points: &[Point], eps: f64) -> Self {
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return Self::empty();
        }
        let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
        for &p in &pts {
            while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::from_ring(lower, eps)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn bbox(&self) -> Option<BBox> {
        let first = *self.vertices.first()?;
        let mut bb = BBox { min: first, max: first };
        for p in &self.vertices[1..] {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    /// Edges as `(start, end)` pairs in ring order.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Minimum distance between two parallel supporting lines.
    pub fn width(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            let len = a.dist(b);
            if len == 0.0 {
                continue;
            }
            let far = self.vertices.iter().map(|&p| orient(a, b, p) / len).fold(0.0, f64::max);
            best = best.min(far);
        }
        best
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Self {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|p| Point::new(p.x + dx, p.y + dy)).collect(),
        }
    }

    /// `{(x, y) ∈ self | a·x + b·y < c}` with the cut boundary as don't-care.
    pub fn clip_halfplane(&self, a: f64, b: f64, c: f64, eps: f64) -> Self {
        if self.is_empty() {
            return Self::empty();
        }
        let norm = a.hypot(b);
        if norm == 0.0 {
            return if c > 0.0 { self.clone() } else { Self::empty() };
        }
        let (a, b, c) = (a / norm, b / norm, c / norm);
        let f: Vec<f64> = self.vertices.iter().map(|p| a * p.x + b * p.y - c).collect();
        if f.iter().all(|&v| v <= eps) {
            return self.clone();
        }
        if f.iter().all(|&v| v >= -eps) {
            return Self::empty();
        }
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (self.vertices[i], self.vertices[j]);
            let (fp, fq) = (f[i], f[j]);
            if fp <= 0.0 {
                out.push(p);
            }
            if (fp <= 0.0) != (fq <= 0.0) {
                let s = (fp / (fp - fq)).clamp(0.0, 1.0);
                out.push(Point::new(p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)));
            }
        }
        Self::from_ring(out, eps)
    }

    /// Convex intersection; empty when the polygons are disjoint up to `eps`.
    pub fn intersect(&self, other: &ConvexPolygon, eps: f64) -> Self {
        let (Some(ba), Some(bb)) = (self.bbox(), other.bbox()) else {
            return Self::empty();
        };
        if !ba.overlaps(&bb, 0.0) {
            return Self::empty();
        }
        let mut acc = self.clone();
        for (u, v) in other.edges() {
            let d = v - u;
            // keep the left side of u -> v
            acc = acc.clip_halfplane(d.y, -d.x, d.y * u.x - d.x * u.y, eps);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// Membership with `eps` tolerance; see [`Membership`].
    pub fn contains(&self, p: Point, mode: Membership, eps: f64) -> bool {
        if self.is_empty() {
            return false;
        }
        self.edges().all(|(a, b)| {
            let len = a.dist(b);
            let d = orient(a, b, p) / len;
            match mode {
                Membership::Closed => d >= -eps,
                Membership::Strict => d > eps,
            }
        })
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Horizontal extent `[left, right]` at height `y`, with `y` clamped to the
    /// polygon's vertical range. Panics on the empty polygon.
    pub fn span_at(&self, y: f64) -> (f64, f64) {
        let bb = self.bbox().expect("span of empty polygon");
        let y = y.clamp(bb.min.y, bb.max.y);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            // interpolate from the lower endpoint so shared edges agree bitwise
            let (p, q) = if (a.y, a.x) <= (b.y, b.x) { (a, b) } else { (b, a) };
            if y < p.y || y > q.y {
                continue;
            }
            let x = if q.y == p.y {
                lo = lo.min(p.x.min(q.x));
                hi = hi.max(p.x.max(q.x));
                continue;
            } else if y == p.y {
                p.x
            } else if y == q.y {
                q.x
            } else {
                p.x + (q.x - p.x) * ((y - p.y) / (q.y - p.y))
            };
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo, hi)
    }

    /// [`span_at`](Self::span_at) widened by every vertex within `eps` of
    /// `y`. Heights are only known up to `eps`, and an exact cut through an
    /// almost flat edge would otherwise see a single vertex.
    pub fn span_band(&self, y: f64, eps: f64) -> (f64, f64) {
        let (mut lo, mut hi) = self.span_at(y);
        for v in self.vertices.iter().filter(|v| (v.y - y).abs() <= eps) {
            lo = lo.min(v.x);
            hi = hi.max(v.x);
        }
        (lo, hi)
    }
}

pub(crate) fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let o = ring[0];
    let mut acc = 0.0;
    for i in 1..n - 1 {
        acc += (ring[i] - o).cross(ring[i + 1] - o);
    }
    acc / 2.0
}

fn dedup_ring(ring: Vec<Point>, eps: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(ring.len());
    for p in ring {
        if out.last().is_none_or(|q: &Point| q.dist(p) > eps) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(out[out.len() - 1]) <= eps {
        out.pop();
    }
    out
}

/// Removes vertices that are collinear with (or dent slightly into) their
/// neighbours. Assumes counter-clockwise orientation.
fn drop_flat_vertices(ring: &mut Vec<Point>, eps: f64) {
    let mut changed = true;
    while changed && ring.len() >= 3 {
        changed = false;
        let mut i = 0;
        while i < ring.len() && ring.len() >= 3 {
            let n = ring.len();
            let (p, v, q) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            let base = p.dist(q);
            if orient(p, v, q) <= eps * base {
                ring.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
    }
}
