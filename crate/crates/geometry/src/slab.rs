//! Horizontal slab decomposition of polygon sets.
//!
//! Every vertex height (and every height where two boundary lines cross)
//! becomes a slab boundary. Inside one slab each convex polygon is a trapezoid
//! bounded by two non-crossing lines, so any boolean combination of polygon
//! layers reduces to a one-dimensional coverage sweep. The resulting
//! trapezoids are interior-disjoint; vertically stacked ones are glued back
//! into larger convex polygons where the union stays convex.

use crate::point::{orient, Point};
use crate::polygon::ConvexPolygon;

/// Trapezoid with horizontal bottom `y0` and top `y1`; `l*`/`r*` are the
/// left and right boundary abscissae at those heights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Trap {
    pub y0: f64,
    pub y1: f64,
    pub l0: f64,
    pub l1: f64,
    pub r0: f64,
    pub r1: f64,
}

impl Trap {
    pub(crate) fn width0(&self) -> f64 {
        self.r0 - self.l0
    }
    pub(crate) fn width1(&self) -> f64 {
        self.r1 - self.l1
    }
}

/// A straight boundary through a slab, given by its abscissae at the bottom
/// and top heights.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Line {
    pub x0: f64,
    pub x1: f64,
}

impl Line {
    pub(crate) fn at(&self, y: f64, y0: f64, y1: f64) -> f64 {
        if y == y0 {
            self.x0
        } else if y == y1 {
            self.x1
        } else {
            self.x0 + (self.x1 - self.x0) * ((y - y0) / (y1 - y0))
        }
    }
}

/// Sorts and clusters heights: a cluster starts at its smallest member and
/// absorbs every value within `eps` of it.
pub fn cluster_levels(mut ys: Vec<f64>, eps: f64) -> Vec<f64> {
    ys.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(ys.len());
    for y in ys {
        match out.last() {
            Some(&anchor) if y - anchor <= eps => {}
            _ => out.push(y),
        }
    }
    out
}

/// Index of the cluster containing `y` (see [`cluster_levels`]).
fn level_index(levels: &[f64], y: f64) -> usize {
    levels.partition_point(|&l| l <= y).saturating_sub(1)
}

/// Heights strictly inside `(y0, y1)` where two of `lines` cross.
pub(crate) fn crossing_heights(lines: &[Line], y0: f64, y1: f64, eps: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        lines[i]
            .x0
            .total_cmp(&lines[j].x0)
            .then(lines[i].x1.total_cmp(&lines[j].x1))
    });
    let monotone = order.windows(2).all(|w| lines[w[1]].x1 >= lines[w[0]].x1 - eps);
    if monotone {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let d0 = lines[a].x0 - lines[b].x0;
            let d1 = lines[a].x1 - lines[b].x1;
            if (d0 > eps && d1 < -eps) || (d0 < -eps && d1 > eps) {
                let y = y0 + (y1 - y0) * (d0 / (d0 - d1));
                if y - y0 > eps && y1 - y > eps {
                    out.push(y);
                }
            }
        }
    }
    out
}

struct Entry {
    tag: u32,
    left: Line,
    right: Line,
}

struct Event {
    mid: f64,
    line: Line,
    tag: u32,
    delta: i32,
}

/// Boolean combination of polygon layers.
///
/// `keep` receives the per-layer coverage counts at a point and decides
/// whether the point belongs to the output. Output trapezoids are ordered by
/// height, then left to right.
pub(crate) fn sweep<F>(layers: &[&[ConvexPolygon]], eps: f64, keep: F) -> Vec<Trap>
where
    F: Fn(&[u32]) -> bool,
{
    let ys: Vec<f64> = layers
        .iter()
        .flat_map(|layer| layer.iter())
        .flat_map(|p| p.vertices().iter().map(|v| v.y))
        .collect();
    let levels = cluster_levels(ys, eps);
    if levels.len() < 2 {
        return Vec::new();
    }
    let mut slabs: Vec<Vec<Entry>> = (0..levels.len() - 1).map(|_| Vec::new()).collect();
    for (tag, layer) in layers.iter().enumerate() {
        for poly in layer.iter() {
            let Some(bb) = poly.bbox() else { continue };
            let k0 = level_index(&levels, bb.min.y);
            let k1 = level_index(&levels, bb.max.y);
            let mut below = poly.span_band(levels[k0], eps);
            for k in k0..k1 {
                let above = poly.span_band(levels[k + 1], eps);
                slabs[k].push(Entry {
                    tag: tag as u32,
                    left: Line {
                        x0: below.0,
                        x1: above.0,
                    },
                    right: Line {
                        x0: below.1,
                        x1: above.1,
                    },
                });
                below = above;
            }
        }
    }

    let mut out = Vec::new();
    let mut counts = vec![0u32; layers.len()];
    for (k, entries) in slabs.iter().enumerate() {
        if entries.is_empty() {
            continue;
        }
        let (y0, y1) = (levels[k], levels[k + 1]);
        let lines: Vec<Line> = entries.iter().flat_map(|e| [e.left, e.right]).collect();
        let mut cuts = crossing_heights(&lines, y0, y1, eps);
        cuts.push(y0);
        cuts.push(y1);
        let mut sub = cluster_levels(cuts, eps);
        // the top level must stay exactly y1 so neighbouring slabs line up
        if let Some(last) = sub.last_mut() {
            *last = y1;
        }
        if sub.len() >= 2 && sub[sub.len() - 1] - sub[sub.len() - 2] <= eps {
            sub.remove(sub.len() - 2);
        }
        for w in sub.windows(2) {
            let (ya, yb) = (w[0], w[1]);
            let mut events: Vec<Event> = Vec::with_capacity(entries.len() * 2);
            for e in entries {
                for (line, delta) in [(e.left, 1), (e.right, -1)] {
                    let la = line.at(ya, y0, y1);
                    let lb = line.at(yb, y0, y1);
                    events.push(Event {
                        mid: 0.5 * (la + lb),
                        line: Line { x0: la, x1: lb },
                        tag: e.tag,
                        delta,
                    });
                }
            }
            events.sort_by(|a, b| a.mid.total_cmp(&b.mid).then(b.delta.cmp(&a.delta)));
            counts.iter_mut().for_each(|c| *c = 0);
            let mut inside = keep(&counts);
            let mut open: Option<Line> = None;
            let mut i = 0;
            while i < events.len() {
                let anchor = events[i].mid;
                let first = events[i].line;
                let mut j = i;
                while j < events.len() && events[j].mid - anchor <= eps {
                    let ev = &events[j];
                    let c = &mut counts[ev.tag as usize];
                    *c = (*c as i64 + ev.delta as i64).max(0) as u32;
                    j += 1;
                }
                let last = events[j - 1].line;
                let now = keep(&counts);
                if !inside && now {
                    open = Some(first);
                } else if inside && !now {
                    if let Some(l) = open.take() {
                        push_trap(&mut out, ya, yb, l, last, eps);
                    }
                }
                inside = now;
                i = j;
            }
        }
    }
    out
}

fn push_trap(out: &mut Vec<Trap>, y0: f64, y1: f64, left: Line, right: Line, eps: f64) {
    let t = Trap {
        y0,
        y1,
        l0: left.x0,
        l1: left.x1,
        r0: right.x0.max(left.x0),
        r1: right.x1.max(left.x1),
    };
    if t.width0() > eps || t.width1() > eps {
        out.push(t);
    }
}

struct Stack {
    left: Vec<Point>,
    right: Vec<Point>,
    top_y: f64,
}

impl Stack {
    fn new(t: &Trap) -> Self {
        Stack {
            left: vec![Point::new(t.l0, t.y0), Point::new(t.l1, t.y1)],
            right: vec![Point::new(t.r0, t.y0), Point::new(t.r1, t.y1)],
            top_y: t.y1,
        }
    }

    fn top(&self) -> (f64, f64) {
        (self.left[self.left.len() - 1].x, self.right[self.right.len() - 1].x)
    }

    /// Glues `t` on top when the shared edge matches and both side chains
    /// stay convex.
    fn try_extend(&mut self, t: &Trap, eps: f64) -> bool {
        let (tl, tr) = self.top();
        if t.y0 != self.top_y || (tl - t.l0).abs() > eps || (tr - t.r0).abs() > eps || t.width0() <= eps {
            return false;
        }
        let cl = Point::new(t.l1, t.y1);
        let cr = Point::new(t.r1, t.y1);
        let turn_l = chain_turn(&self.left, cl, eps);
        let turn_r = chain_turn(&self.right, cr, eps);
        if turn_l.0 > turn_l.1 || turn_r.0 < -turn_r.1 {
            return false;
        }
        extend_chain(&mut self.left, cl, turn_l);
        extend_chain(&mut self.right, cr, turn_r);
        self.top_y = t.y1;
        true
    }

    fn finish(self, eps: f64) -> ConvexPolygon {
        let mut ring = Vec::with_capacity(self.left.len() + self.right.len());
        ring.push(self.left[0]);
        ring.extend(self.right.iter().copied());
        ring.extend(self.left[1..].iter().rev().copied());
        ConvexPolygon::from_ring(ring, eps)
    }
}

/// Turn at the chain's last vertex when continuing to `c`, with the
/// collinearity tolerance for that turn.
fn chain_turn(chain: &[Point], c: Point, eps: f64) -> (f64, f64) {
    let a = chain[chain.len() - 2];
    let b = chain[chain.len() - 1];
    (orient(a, b, c), eps * a.dist(c))
}

fn extend_chain(chain: &mut Vec<Point>, c: Point, (turn, tol): (f64, f64)) {
    if turn.abs() <= tol {
        chain.pop();
    }
    chain.push(c);
}

/// Glues the sweep output into convex polygons, bottom to top.
pub(crate) fn stack(traps: &[Trap], eps: f64) -> Vec<ConvexPolygon> {
    let mut out = Vec::new();
    let mut open: Vec<Stack> = Vec::new();
    let mut i = 0;
    while i < traps.len() {
        let y0 = traps[i].y0;
        let mut j = i;
        while j < traps.len() && traps[j].y0 == y0 {
            j += 1;
        }
        let mut next: Vec<Stack> = Vec::with_capacity(j - i);
        let mut pending = std::mem::take(&mut open).into_iter().peekable();
        for t in &traps[i..j] {
            while let Some(s) = pending.peek() {
                if s.top_y == y0 && s.top().1 >= t.l0 - eps {
                    break;
                }
                out.push(pending.next().unwrap().finish(eps));
            }
            let extended = pending.peek_mut().is_some_and(|s| s.try_extend(t, eps));
            if extended {
                next.push(pending.next().unwrap());
            } else {
                next.push(Stack::new(t));
            }
        }
        out.extend(pending.map(|s| s.finish(eps)));
        open = next;
        i = j;
    }
    out.extend(open.into_iter().map(|s| s.finish(eps)));
    out.retain(|p| !p.is_empty());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    #[test]
    fn clusters_anchor_on_smallest() {
        assert_eq!(
            cluster_levels(vec![1.0, 0.0, 1.0 + 1e-10, 2.0], EPS),
            vec![0.0, 1.0, 2.0]
        );
    }

    #[test]
    fn crossing_of_two_diagonals() {
        let lines = [Line { x0: 0.0, x1: 2.0 }, Line { x0: 2.0, x1: 0.0 }];
        let ys = crossing_heights(&lines, 0.0, 2.0, EPS);
        assert_eq!(ys, vec![1.0]);
    }

    #[test]
    fn overlapping_squares_union_has_union_area() {
        let a = ConvexPolygon::rectangle(0.0, 2.0, 0.0, 2.0, EPS);
        let b = ConvexPolygon::rectangle(1.0, 3.0, 1.0, 3.0, EPS);
        let layer = [a, b];
        let traps = sweep(&[&layer], EPS, |c| c[0] > 0);
        let polys = stack(&traps, EPS);
        let area: f64 = polys.iter().map(|p| p.area()).sum();
        assert!((area - 7.0).abs() < 1e-12);
    }

    #[test]
    fn stacked_rectangles_merge() {
        let a = ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0, EPS);
        let b = ConvexPolygon::rectangle(0.0, 1.0, 1.0, 2.0, EPS);
        let layer = [a, b];
        let polys = stack(&sweep(&[&layer], EPS, |c| c[0] > 0), EPS);
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].len(), 4);
    }
}
