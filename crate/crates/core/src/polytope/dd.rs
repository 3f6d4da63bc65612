//! Vertex enumeration by the double description method.
//!
//! The polytope `{x : A x ≥ b}` is homogenized to the cone
//! `{(x0, x) : x0 ≥ 0, A x - b x0 ≥ 0}`; its extreme rays with `x0 > 0` are the
//! vertices. Rays are kept as primitive integer vectors.

use std::sync::Arc;

use num::{BigInt, Signed, Zero};
use serde::Serialize;

use super::linalg::{dot, primitive, rank_int};
use crate::distribution::EdgeDistribution;
use crate::error::{Error, Result};
use crate::gf2::Bits;
use crate::limits::MAX_DD_EDGES;
use crate::rational::Rational;
use crate::scenario::Scenario;

#[derive(Clone, Debug, Serialize)]
pub struct VertexEnumeration {
    pub vertices: Vec<EdgeDistribution>,
    /// Index pairs `(i, j)`, `i < j`, of vertices spanning an edge of the polytope.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<(usize, usize)>>,
}

impl VertexEnumeration {
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.adjacency
            .iter()
            .flatten()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

/// Vertices of `{x : A x ≥ b}` (assumed bounded and nonempty), each with its tight rows.
pub fn polytope_vertices(a: &[Vec<BigInt>], b: &[BigInt]) -> Result<Vec<(Vec<Rational>, Vec<usize>)>> {
    let d = a.first().map_or(0, Vec::len);
    let dim = d + 1;
    let mut h: Vec<Vec<BigInt>> = Vec::with_capacity(a.len() + 1);
    let mut x0 = vec![BigInt::zero(); dim];
    x0[0] = BigInt::from(1);
    h.push(x0);
    for (row, bi) in a.iter().zip(b) {
        let mut r = vec![-bi.clone()];
        r.extend(row.iter().cloned());
        h.push(r);
    }
    let m = h.len();

    // greedy choice of dim independent rows
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&k| h[k].clone()).collect();
        trial.push(h[i].clone());
        if rank_int(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(Error::InvalidInput(
            "polytope is unbounded or lower-dimensional in its ambient cone".into(),
        ));
    }
    let inv = invert(&basis.iter().map(|&k| h[k].clone()).collect::<Vec<_>>());
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let mut v: Vec<BigInt> = (0..dim).map(|r| inv[r][k].clone()).collect();
            primitive(&mut v);
            let mut zeros = Bits::zeros(m);
            for (j, &row) in basis.iter().enumerate() {
                if j != k {
                    zeros.set(row, true);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for i in (0..m).filter(|i| !basis.contains(i)) {
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(&h[i], &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count_ones() + 2 < dim {
                    continue;
                }
                let blocked = (0..rays.len())
                    .any(|k| k != p && k != n && common.is_subset_of(&rays[k].zeros));
                if blocked {
                    continue;
                }
                let mut v: Vec<BigInt> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(rn, rp)| &vals[p] * rn - &vals[n] * rp)
                    .collect();
                primitive(&mut v);
                let mut zeros = common;
                zeros.set(i, true);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                r.zeros.set(i, true);
                next.push(r);
            } else if vals[k].is_positive() {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out = Vec::new();
    for r in rays {
        if !r.v[0].is_positive() {
            return Err(Error::InvalidInput("polytope is unbounded".into()));
        }
        let x0 = Rational::from_integer(r.v[0].clone());
        let x = r.v[1..]
            .iter()
            .map(|c| Rational::from_integer(c.clone()) / &x0)
            .collect();
        let tight = r.zeros.ones().filter(|&k| k > 0).map(|k| k - 1).collect();
        out.push((x, tight));
    }
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out)
}

/// Inverse of an integer matrix, scaled so that every column is integral.
fn invert(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|c| Rational::from_integer(c.clone())).collect();
            r.extend((0..n).map(|j| Rational::from_integer(BigInt::from(i32::from(i == j)))));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero()).expect("nonsingular");
        aug.swap(c, p);
        let piv = aug[c][c].clone();
        for v in aug[c].iter_mut() {
            *v = &*v / &piv;
        }
        let prow = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
    }
    // scale each column of the inverse to integers
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for k in 0..n {
        let col: Vec<Rational> = (0..n).map(|r| aug[r][n + k].clone()).collect();
        let ints = super::linalg::integer_row(&col);
        for r in 0..n {
            out[r][k] = ints[r].clone();
        }
    }
    out
}

/// All vertices of the distribution polytope of `s`, sorted by edge values.
///
/// Edges lying in no triangle get the bounds `0 ≤ p ≤ 1`. Adjacent pairs share
/// tight rows of rank `|edges| - 1`.
pub fn enumerate_vertices(s: &Arc<Scenario>, with_adjacency: bool) -> Result<VertexEnumeration> {
    let n = s.num_edges();
    if n > MAX_DD_EDGES {
        return Err(Error::Guardrail(format!(
            "vertex enumeration is limited to {MAX_DD_EDGES} edges, scenario has {n}"
        )));
    }
    let h = super::h_representation(s);
    let mut a = h.matrix().to_vec();
    let mut b = h.bounds().to_vec();
    let mut covered = vec![false; n];
    for t in 0..s.triangles().len() {
        for e in s.slots(t) {
            covered[e] = true;
        }
    }
    for e in (0..n).filter(|&e| !covered[e]) {
        let mut lo = vec![BigInt::zero(); n];
        lo[e] = BigInt::from(1);
        let mut hi = vec![BigInt::zero(); n];
        hi[e] = BigInt::from(-1);
        a.push(lo);
        b.push(BigInt::zero());
        a.push(hi);
        b.push(BigInt::from(-1));
    }
    let found = polytope_vertices(&a, &b)?;
    let adjacency = with_adjacency.then(|| {
        let mut pairs = Vec::new();
        for i in 0..found.len() {
            for j in i + 1..found.len() {
                let common: Vec<usize> = found[i]
                    .1
                    .iter()
                    .filter(|k| found[j].1.contains(k))
                    .copied()
                    .collect();
                if common.len() + 1 < n {
                    continue;
                }
                let rows: Vec<_> = common.iter().map(|&k| a[k].clone()).collect();
                if rank_int(&rows) + 1 == n {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    });
    let vertices = found
        .into_iter()
        .map(|(x, _)| EdgeDistribution::new(s.clone(), x))
        .collect::<Result<_>>()?;
    Ok(VertexEnumeration {
        vertices,
        adjacency,
    })
}
