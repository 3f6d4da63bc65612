//! The polytope of simplicial distributions and its noncontextual part.

pub mod dd;
pub mod linalg;
pub mod lp;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::distribution::{
    deterministic_enumerate, EdgeDistribution, OutcomeAssignment, Verdict,
};
use crate::error::Result;
use crate::inequality::LinearInequality;
use crate::rational::{self, int, Rational};
use crate::scenario::Scenario;

pub use dd::{enumerate_vertices, VertexEnumeration};

/// Rows `p_σ^{ab} ≥ 0` written in edge coordinates, four per triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    scenario: Arc<Scenario>,
    rows: Vec<LinearInequality>,
    matrix: Vec<Vec<BigInt>>,
    bounds: Vec<BigInt>,
}

impl Serialize for HRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

/// For outcome `ab`: `(-1)^a x + (-1)^b y + (-1)^{a+b} z ≥ [a+b even] - a - b`.
pub fn h_representation(s: &Arc<Scenario>) -> HRep {
    let n = s.num_edges();
    let mut rows = Vec::new();
    let mut matrix = Vec::new();
    let mut bounds = Vec::new();
    for (t, tri) in s.triangles().iter().enumerate() {
        let [x, y, z] = s.xyz(t);
        for (a, b) in crate::distribution::OUTCOMES {
            let sgn = |k: u8| if k % 2 == 0 { 1i64 } else { -1 };
            let mut row = vec![BigInt::zero(); n];
            row[x] += sgn(a);
            row[y] += sgn(b);
            row[z] += sgn(a + b);
            let rhs = i64::from((a + b) % 2 == 0) - i64::from(a) - i64::from(b);
            let ineq = LinearInequality::new(
                s.edges()
                    .iter()
                    .zip(&row)
                    .map(|(e, c)| (e.id.clone(), Rational::from_integer(c.clone()))),
                int(rhs),
            )
            .with_label(format!("{}:{a}{b}", tri.id));
            rows.push(ineq);
            matrix.push(row);
            bounds.push(BigInt::from(rhs));
        }
    }
    HRep {
        scenario: s.clone(),
        rows,
        matrix,
        bounds,
    }
}

impl HRep {
    pub fn scenario(&self) -> &Arc<Scenario> {
        &self.scenario
    }

    pub fn rows(&self) -> &[LinearInequality] {
        &self.rows
    }

    /// Dense integer rows in edge order.
    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn bounds(&self) -> &[BigInt] {
        &self.bounds
    }

    fn row_value(&self, i: usize, p: &[Rational]) -> Rational {
        self.matrix[i]
            .iter()
            .zip(p)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| Rational::from_integer(c.clone()) * v)
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn satisfied_by(&self, p: &EdgeDistribution) -> bool {
        (0..self.rows.len())
            .all(|i| self.row_value(i, p.values()) >= Rational::from_integer(self.bounds[i].clone()))
    }

    /// Indices of rows holding with equality at `p`.
    pub fn tight_set(&self, p: &EdgeDistribution) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| self.row_value(i, p.values()) == Rational::from_integer(self.bounds[i].clone()))
            .collect()
    }

    pub fn rank_of(&self, p: &EdgeDistribution) -> usize {
        let rows: Vec<_> = self
            .tight_set(p)
            .into_iter()
            .map(|i| self.matrix[i].clone())
            .collect();
        linalg::rank_int(&rows)
    }

    /// A valid point is a vertex iff its tight rows have full rank.
    pub fn is_vertex(&self, p: &EdgeDistribution) -> bool {
        self.rank_of(p) == self.scenario.num_edges()
    }
}

/// Result of the exact contextuality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextualityCertificate {
    pub verdict: Verdict,
    /// Positive weights on deterministic distributions reproducing the input.
    pub mixture: Option<Vec<(OutcomeAssignment, Rational)>>,
    /// A Bell inequality valid on every deterministic distribution but violated by the input.
    pub separating: Option<LinearInequality>,
}

impl Serialize for ContextualityCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            verdict: Verdict,
            #[serde(skip_serializing_if = "Option::is_none")]
            mixture: Option<BTreeMap<String, String>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            separating: Option<&'a LinearInequality>,
        }
        Json {
            verdict: self.verdict,
            mixture: self.mixture.as_ref().map(|m| {
                m.iter()
                    .map(|(a, w)| (a.bit_string(), rational::format(w)))
                    .collect()
            }),
            separating: self.separating.as_ref(),
        }
        .serialize(s)
    }
}

/// Sum of the weighted deterministic distributions, in edge coordinates.
pub fn replay_mixture(
    s: &Arc<Scenario>,
    mixture: &[(OutcomeAssignment, Rational)],
) -> Result<EdgeDistribution> {
    let mut values = vec![Rational::zero(); s.num_edges()];
    for (a, w) in mixture {
        for (v, &bit) in values.iter_mut().zip(a.bits()) {
            if !bit {
                *v += w;
            }
        }
    }
    EdgeDistribution::new(s.clone(), values)
}

/// Decides whether `p` is a mixture of deterministic distributions.
///
/// Noncontextual answers carry the mixture; contextual ones carry a separating
/// inequality from the Farkas multipliers of the infeasible program.
pub fn is_noncontextual_lp(p: &EdgeDistribution) -> Result<ContextualityCertificate> {
    let s = p.scenario();
    let dets = deterministic_enumerate(s)?;
    let n = dets.len();
    let mut a = vec![vec![int(1); n]];
    for e in 0..s.num_edges() {
        a.push(
            dets.iter()
                .map(|d| if d.bits()[e] { int(0) } else { int(1) })
                .collect(),
        );
    }
    let mut b = vec![int(1)];
    b.extend(p.values().iter().cloned());
    match lp::solve(&a, &b, None) {
        lp::LpOutcome::Optimal { x, .. } => {
            let mixture = dets
                .into_iter()
                .zip(x)
                .filter(|(_, w)| w.is_positive())
                .collect();
            Ok(ContextualityCertificate {
                verdict: Verdict::Noncontextual,
                mixture: Some(mixture),
                separating: None,
            })
        }
        lp::LpOutcome::Infeasible { farkas } => {
            // y0 + Σ y_e·x_e ≤ 0 on every deterministic point, > 0 at p
            let ineq = LinearInequality::new(
                s.edge_ids()
                    .zip(&farkas[1..])
                    .map(|(e, y)| (e.to_string(), -y)),
                farkas[0].clone(),
            )
            .normalized()
            .with_label("separating");
            Ok(ContextualityCertificate {
                verdict: Verdict::Contextual,
                mixture: None,
                separating: Some(ineq),
            })
        }
        lp::LpOutcome::Unbounded => unreachable!("feasibility programs are bounded"),
    }
}

/// Outcome assignments whose outcome has positive probability on every simplex.
pub fn support(p: &EdgeDistribution) -> Result<Vec<OutcomeAssignment>> {
    let s = p.scenario();
    let table = p.triangle_table()?;
    let mut covered = vec![false; s.num_edges()];
    for t in 0..s.triangles().len() {
        for e in s.slots(t) {
            covered[e] = true;
        }
    }
    Ok(deterministic_enumerate(s)?
        .into_iter()
        .filter(|a| {
            let bits = a.bits();
            let triangles_ok = (0..s.triangles().len()).all(|t| {
                let [x, y, _] = s.xyz(t);
                let k = 2 * usize::from(bits[x]) + usize::from(bits[y]);
                table.rows[t].1[k].is_positive()
            });
            let edges_ok = (0..s.num_edges()).filter(|&e| !covered[e]).all(|e| {
                let v = &p.values()[e];
                if bits[e] {
                    v < &int(1)
                } else {
                    v.is_positive()
                }
            });
            triangles_ok && edges_ok
        })
        .collect())
}

pub fn is_strongly_contextual(p: &EdgeDistribution) -> Result<bool> {
    Ok(support(p)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{p_pm_element, Sign};
    use crate::graph::circle;
    use crate::scenario::{classical_disk, cone};

    fn pr_box_c4() -> EdgeDistribution {
        let s = Arc::new(cone(&circle(4).unwrap()));
        let signs = ["t1", "t2", "t3", "t4"]
            .iter()
            .map(|e| (e.to_string(), if *e == "t1" { Sign::Minus } else { Sign::Plus }))
            .collect();
        p_pm_element(&s, &signs).unwrap()
    }

    #[test]
    fn triangle_rows() {
        let s = Arc::new(classical_disk(3).unwrap().scenario);
        let h = h_representation(&s);
        let [x, y, z] = s.xyz(0);
        let got: Vec<(i64, i64, i64, i64)> = h
            .matrix()
            .iter()
            .zip(h.bounds())
            .map(|(r, b)| {
                let c = |i: usize| i64::try_from(r[i].clone()).unwrap();
                (c(x), c(y), c(z), i64::try_from(b.clone()).unwrap())
            })
            .collect();
        assert_eq!(
            got,
            [(1, 1, 1, 1), (1, -1, -1, -1), (-1, 1, -1, -1), (-1, -1, 1, -1)]
        );
    }

    #[test]
    fn loop_cone_rows() {
        let s = Arc::new(cone(&circle(1).unwrap()));
        let h = h_representation(&s);
        let keys: Vec<_> = h.rows().iter().map(|r| r.key()).collect();
        let want = [
            LinearInequality::from_ints(&[("t1", 1), ("(c,v0)", 2)], 1),
            LinearInequality::from_ints(&[("t1", -1)], -1),
            LinearInequality::from_ints(&[("t1", 1), ("(c,v0)", -2)], -1),
            LinearInequality::from_ints(&[("t1", -1)], -1),
        ];
        assert_eq!(keys, want.iter().map(|r| r.key()).collect::<Vec<_>>());
    }

    #[test]
    fn vertex_tests() {
        let pr = pr_box_c4();
        let h = h_representation(pr.scenario());
        assert_eq!(h.rows().len(), 16);
        assert_eq!(h.tight_set(&pr).len(), 8);
        assert!(h.is_vertex(&pr));
        for d in deterministic_enumerate(pr.scenario()).unwrap() {
            assert!(h.is_vertex(&d.to_distribution()));
        }
        let s = Arc::new(classical_disk(3).unwrap().scenario);
        let u = EdgeDistribution::uniform(s.clone());
        let h = h_representation(&s);
        assert!(h.tight_set(&u).is_empty());
        assert!(!h.is_vertex(&u));
    }

    #[test]
    fn pr_box_is_contextual() {
        let pr = pr_box_c4();
        let cert = is_noncontextual_lp(&pr).unwrap();
        assert_eq!(cert.verdict, Verdict::Contextual);
        let sep = cert.separating.unwrap();
        assert!(!pr.satisfies(&sep).unwrap());
        for d in deterministic_enumerate(pr.scenario()).unwrap() {
            assert!(d.to_distribution().satisfies(&sep).unwrap());
        }
        assert!(is_strongly_contextual(&pr).unwrap());
    }

    #[test]
    fn uniform_is_noncontextual() {
        let s = Arc::new(cone(&circle(4).unwrap()));
        let u = EdgeDistribution::uniform(s.clone());
        let cert = is_noncontextual_lp(&u).unwrap();
        assert_eq!(cert.verdict, Verdict::Noncontextual);
        let mixture = cert.mixture.unwrap();
        assert_eq!(replay_mixture(&s, &mixture).unwrap(), u);
        let total: Rational = mixture.iter().map(|(_, w)| w.clone()).sum();
        assert_eq!(total, int(1));
        assert_eq!(support(&u).unwrap().len(), 16);
    }

    #[test]
    fn deterministic_support() {
        let s = Arc::new(cone(&circle(3).unwrap()));
        for d in deterministic_enumerate(&s).unwrap() {
            assert_eq!(support(&d.to_distribution()).unwrap(), vec![d.clone()]);
        }
    }
}
