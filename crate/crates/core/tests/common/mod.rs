#![allow(dead_code)]

use std::sync::Arc;

use ctxlab::polytope::enumerate_vertices;
use ctxlab::rational::{frac, int};
use ctxlab::{EdgeDistribution, Rational, Scenario};
use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[lo, hi]`, often at an endpoint or the midpoint.
pub fn rational_in(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> Rational {
    match rng.gen_range(0..8) {
        0 | 1 => lo.clone(),
        2 | 3 => hi.clone(),
        4 => (lo + hi) / int(2),
        _ => {
            let d: i64 = rng.gen_range(1..=12);
            let k: i64 = rng.gen_range(0..=d);
            lo + (hi - lo) * frac(k, d)
        }
    }
}

/// A rational in `[0, 1]` with denominator at most 12.
pub fn unit(rng: &mut impl Rng) -> Rational {
    rational_in(rng, &Rational::zero(), &Rational::one())
}

/// Feasible values of the third slot of a triangle whose other two slots hold `a` and `b`.
fn slot_interval(a: &Rational, b: &Rational) -> (Rational, Rational) {
    let lo = (a + b - int(1)).abs();
    let hi = int(1) - (a - b).abs();
    (lo, hi)
}

/// A valid distribution built triangle by triangle, retrying on dead ends.
///
/// Exact for cones and fan-triangulated disks, where each triangle meets
/// at most two already assigned edges.
pub fn sample_valid(rng: &mut impl Rng, s: &Arc<Scenario>) -> EdgeDistribution {
    loop {
        if let Some(p) = try_sample(rng, s) {
            return p;
        }
    }
}

fn try_sample(rng: &mut impl Rng, s: &Arc<Scenario>) -> Option<EdgeDistribution> {
    let n = s.num_edges();
    let mut v: Vec<Option<Rational>> = vec![None; n];
    // cone edges first so that every boundary triangle sees two known slots
    if s.cone_of().is_some() {
        for t in 0..s.triangles().len() {
            let [x, _, z] = s.xyz(t);
            for e in [x, z] {
                if v[e].is_none() {
                    v[e] = Some(unit(rng));
                }
            }
        }
    }
    for t in 0..s.triangles().len() {
        let slots = s.xyz(t);
        let mut unknown: Vec<usize> = slots.iter().copied().filter(|&e| v[e].is_none()).collect();
        unknown.dedup();
        while unknown.len() > 1 || (unknown.len() == 1 && slots.iter().filter(|&&e| e == unknown[0]).count() > 1) {
            let e = unknown.remove(0);
            v[e] = Some(unit(rng));
            unknown.retain(|&u| v[u].is_none());
        }
        if let Some(&e) = unknown.first() {
            let known: Vec<&Rational> = slots.iter().filter(|&&k| k != e).map(|&k| v[k].as_ref().unwrap()).collect();
            let (lo, hi) = slot_interval(known[0], known[1]);
            if lo > hi {
                return None;
            }
            v[e] = Some(rational_in(rng, &lo, &hi));
        }
    }
    let values = v.into_iter().map(|x| x.unwrap_or_else(|| unit(rng))).collect();
    let p = EdgeDistribution::new(s.clone(), values).ok()?;
    p.is_valid().then_some(p)
}

/// A random convex combination of one to three of the given points.
pub fn mixture(rng: &mut impl Rng, points: &[EdgeDistribution]) -> EdgeDistribution {
    let k = rng.gen_range(1..=3.min(points.len()));
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let s = points[0].scenario().clone();
    let mut acc = vec![Rational::zero(); s.num_edges()];
    for w in weights {
        let p = &points[rng.gen_range(0..points.len())];
        for (a, x) in acc.iter_mut().zip(p.values()) {
            *a += x * frac(w, total);
        }
    }
    EdgeDistribution::new(s, acc).unwrap()
}

/// DD vertices of a small scenario.
pub fn vertices(s: &Arc<Scenario>) -> Vec<EdgeDistribution> {
    enumerate_vertices(s, false).unwrap().vertices
}
