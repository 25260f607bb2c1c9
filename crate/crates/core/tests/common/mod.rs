//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlstar_core::formula::{Cmp, Formula, LinearPredicate, SignalSchema};
use stlstar_core::{Signal, Time};
use stlstar_geometry::{ConvexPolygon, Domain, Point, Region};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One or two variables, at most 20 segments of integer length 1 or 2.
pub fn random_signal(rng: &mut impl Rng) -> Signal {
    let vars = rng.gen_range(1..=2);
    let names: Vec<String> = (0..vars).map(|i| format!("x{i}")).collect();
    let schema = SignalSchema::new(names).unwrap();
    let segments = rng.gen_range(2..=20);
    let mut t = 0i128;
    let mut times = vec![Ratio::from_integer(0)];
    for _ in 0..segments {
        t += rng.gen_range(1..=2);
        times.push(Ratio::from_integer(t));
    }
    let values = (0..=segments)
        .map(|_| (0..vars).map(|_| rng.gen_range(-3.0..3.0)).collect())
        .collect();
    Signal::new(schema, times, values).unwrap()
}

fn random_predicate(rng: &mut impl Rng, vars: usize) -> LinearPredicate {
    let coeff = |rng: &mut dyn rand::RngCore| *[-2.0, -1.0, -0.5, 0.5, 1.0, 2.0].choose(rng).unwrap();
    let mut plain = Vec::new();
    let mut frozen = Vec::new();
    for i in 0..vars {
        if rng.gen_bool(0.7) {
            plain.push((i, coeff(rng)));
        }
        if rng.gen_bool(0.4) {
            frozen.push((i, coeff(rng)));
        }
    }
    if plain.is_empty() && frozen.is_empty() {
        plain.push((rng.gen_range(0..vars), coeff(rng)));
    }
    // a·x(t) − a·x(t*) vanishes on the diagonal, where freeze evaluates;
    // such ties sit exactly on a boundary and are skipped
    for (i, b) in frozen.iter_mut() {
        if plain.iter().any(|&(j, a)| j == *i && a == -*b) {
            *b *= 1.5;
        }
    }
    LinearPredicate {
        plain,
        frozen,
        bound: rng.gen_range(-2.0..2.0),
        cmp: if rng.gen_bool(0.5) { Cmp::Lt } else { Cmp::Gt },
    }
}

/// Formula of depth at most `depth` whose required length is at most
/// `budget`.
pub fn random_formula(rng: &mut impl Rng, vars: usize, depth: usize, budget: i128) -> Formula {
    if depth <= 1 {
        return Formula::Atom(random_predicate(rng, vars));
    }
    let d = depth - 1;
    let interval = |rng: &mut dyn rand::RngCore| -> Option<(i128, i128)> {
        let lo = rng.gen_range(0..=3);
        let hi = lo + rng.gen_range(1..=3);
        (hi <= budget).then_some((lo, hi))
    };
    let t = |x: i128| -> Time { Ratio::from_integer(x) };
    match rng.gen_range(0..8) {
        0 => Formula::Atom(random_predicate(rng, vars)),
        1 => Formula::not(random_formula(rng, vars, d, budget)),
        2 => Formula::or(
            random_formula(rng, vars, d, budget),
            random_formula(rng, vars, d, budget),
        ),
        3 => Formula::and(
            random_formula(rng, vars, d, budget),
            random_formula(rng, vars, d, budget),
        ),
        4..=6 => match interval(rng) {
            None => Formula::freeze(random_formula(rng, vars, d, budget)),
            Some((lo, hi)) => {
                let rest = budget - hi;
                match rng.gen_range(4..=6) {
                    4 => Formula::until(
                        t(lo),
                        t(hi),
                        random_formula(rng, vars, d, rest),
                        random_formula(rng, vars, d, rest),
                    ),
                    5 => Formula::eventually(t(lo), t(hi), random_formula(rng, vars, d, rest)),
                    _ => Formula::globally(t(lo), t(hi), random_formula(rng, vars, d, rest)),
                }
            }
        },
        _ => Formula::freeze(random_formula(rng, vars, d, budget)),
    }
}

/// A signal and a formula it is long enough for.
pub fn random_case(seed: u64) -> (Signal, Formula) {
    let mut rng = rng(seed);
    let s = random_signal(&mut rng);
    let r = s.len_time().to_integer();
    let f = random_formula(&mut rng, s.schema().len(), 4, r);
    (s, f)
}

/// Convex hull of a few random points inside the domain square.
pub fn random_polygon(rng: &mut impl Rng, domain: Domain) -> ConvexPolygon {
    let r = domain.size();
    let cx = rng.gen_range(0.0..r);
    let cy = rng.gen_range(0.0..r);
    let spread = rng.gen_range(0.05..0.5) * r;
    let n = rng.gen_range(3..=7);
    let pts: Vec<Point> = (0..n)
        .map(|_| {
            Point::new(
                (cx + rng.gen_range(-spread..spread)).clamp(0.0, r),
                (cy + rng.gen_range(-spread..spread)).clamp(0.0, r),
            )
        })
        .collect();
    ConvexPolygon::hull(&pts, domain.eps())
}

pub fn random_region(rng: &mut impl Rng, domain: Domain, max: usize) -> Region {
    let n = rng.gen_range(0..=max);
    Region::from_polygons(domain, (0..n).map(|_| random_polygon(rng, domain)).collect())
}

pub fn random_point(rng: &mut impl Rng, domain: Domain) -> Point {
    Point::new(rng.gen_range(0.0..=domain.size()), rng.gen_range(0.0..=domain.size()))
}
