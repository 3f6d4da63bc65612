//! Transport along collapsing maps: distributions, Bell inequalities, contextual vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{One, Zero};
use serde::Serialize;

use crate::collapse::{collapse, CollapseMap};
use crate::distribution::{
    deterministic_enumerate, g_pm_signs, p_pm_element, EdgeDistribution, Sign, Verdict,
};
use crate::error::{Error, Result};
use crate::fm::{fine_check_flower, supports_circle_method};
use crate::graph::{circle, Graph, GraphShape, UnionFind};
use crate::inequality::LinearInequality;
use crate::limits;
use crate::polytope::{h_representation, is_noncontextual_lp};
use crate::rational::Rational;
use crate::scenario::{cone, cone_edge_id, Scenario};

/// Where an edge of the source cone goes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeImage {
    Edge(String),
    /// A collapsed boundary edge; its pulled-back value is 1.
    Collapsed,
}

/// A collapsing map lifted to cones.
#[derive(Clone, Debug)]
pub struct ConePushforward {
    pub base: CollapseMap,
    pub source: Arc<Scenario>,
    pub target: Arc<Scenario>,
    pub correspondence: BTreeMap<String, EdgeImage>,
}

impl ConePushforward {
    pub fn new(base: CollapseMap) -> Self {
        let source = Arc::new(cone(&base.source));
        let target = Arc::new(cone(&base.target));
        let mut correspondence = BTreeMap::new();
        for (e, img) in &base.edge_map {
            correspondence.insert(
                e.clone(),
                match img {
                    Some(t) => EdgeImage::Edge(t.clone()),
                    None => EdgeImage::Collapsed,
                },
            );
        }
        for (v, w) in &base.vertex_map {
            correspondence.insert(cone_edge_id(v), EdgeImage::Edge(cone_edge_id(w)));
        }
        ConePushforward {
            base,
            source,
            target,
            correspondence,
        }
    }

    /// Pulls a distribution on the target cone back to the source cone.
    pub fn distribution(&self, p: &EdgeDistribution) -> Result<EdgeDistribution> {
        if p.scenario().cone_of() != Some(&self.base.target) {
            return Err(Error::ScenarioMismatch(
                "distribution does not live on the cone of the collapsed graph".into(),
            ));
        }
        if !p.is_valid() {
            return Err(Error::InvalidDistribution("input violates a triangle inequality".into()));
        }
        let values = self
            .source
            .edge_ids()
            .map(|e| match &self.correspondence[e] {
                EdgeImage::Collapsed => Ok(Rational::one()),
                EdgeImage::Edge(t) => p.value(t).cloned(),
            })
            .collect::<Result<_>>()?;
        EdgeDistribution::new(self.source.clone(), values)
    }

    /// Transports a probability-coordinate inequality on the source cone to the target cone.
    pub fn inequality(&self, ineq: &LinearInequality) -> Result<LinearInequality> {
        let mut rhs = ineq.rhs.clone();
        let mut coeffs: Vec<(String, Rational)> = Vec::new();
        for (e, c) in &ineq.coeffs {
            match self.correspondence.get(e) {
                None => return Err(Error::UnknownEdge(e.clone())),
                Some(EdgeImage::Collapsed) => rhs -= c,
                Some(EdgeImage::Edge(t)) => coeffs.push((t.clone(), c.clone())),
            }
        }
        Ok(LinearInequality::new(coeffs, rhs)
            .with_label(ineq.label.clone())
            .normalized())
    }
}

pub fn pushforward_distribution(cm: &CollapseMap, p: &EdgeDistribution) -> Result<EdgeDistribution> {
    ConePushforward::new(cm.clone()).distribution(p)
}

pub fn pushforward_inequality(cm: &CollapseMap, ineq: &LinearInequality) -> Result<LinearInequality> {
    ConePushforward::new(cm.clone()).inequality(ineq)
}

/// Transports every row, dropping rows that become constant and true.
pub fn pushforward_system(cm: &CollapseMap, rows: &[LinearInequality]) -> Result<Vec<LinearInequality>> {
    let pf = ConePushforward::new(cm.clone());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        let t = pf.inequality(r)?;
        if t.is_constant() && t.rhs <= Rational::zero() {
            continue;
        }
        if seen.insert(t.key()) {
            out.push(t);
        }
    }
    Ok(out)
}

/// The PR box on the cone of the N-circle with `p₋` exactly where `minus` is set.
pub fn pr_box(n: usize, minus: &[bool]) -> Result<EdgeDistribution> {
    if minus.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} signs, found {}", minus.len())));
    }
    if minus.iter().filter(|m| **m).count() % 2 == 0 {
        return Err(Error::InvalidInput("a PR box needs an odd number of minus signs".into()));
    }
    let g = circle(n)?;
    let s = Arc::new(cone(&g));
    let signs = g
        .edges()
        .iter()
        .zip(minus)
        .map(|(e, &m)| (e.id.clone(), if m { Sign::Minus } else { Sign::Plus }))
        .collect();
    p_pm_element(&s, &signs)
}

/// All `2^{N-1}` PR boxes of the N-circle scenario.
pub fn all_pr_boxes(n: usize) -> Result<Vec<EdgeDistribution>> {
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        let minus: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if let Ok(p) = pr_box(n, &minus) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn is_pr_box(p: &EdgeDistribution) -> bool {
    let Some(g) = p.scenario().cone_of() else {
        return false;
    };
    if g.shape() != GraphShape::Circle {
        return false;
    }
    match g_pm_signs(p) {
        Ok(Some(signs)) => signs.values().filter(|s| **s == Sign::Minus).count() % 2 == 1,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Rank test only.
    Rank,
    /// Rank test plus a contextuality decision (circle test where it applies, LP otherwise).
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedVertex {
    #[serde(flatten)]
    pub distribution: EdgeDistribution,
    pub certificate: &'static str,
}

/// Number of contextual vertices produced by [`generate_contextual_vertices`].
pub fn expected_vertex_count(g: &Graph) -> Option<u128> {
    let n = g.cycle_rank() as u32;
    let v = g.vertices().len() as u32;
    let cycles = 1u128.checked_shl(n)? - 1;
    cycles.checked_mul(1u128.checked_shl(v.checked_sub(1)?)?)
}

/// Contextual vertices of `cone(g)` obtained from the wedge of circles through a
/// spanning-tree collapse, closed under the deterministic action.
pub fn generate_contextual_vertices(g: &Graph, certify: Certification) -> Result<Vec<GeneratedVertex>> {
    let tree = g.spanning_tree()?;
    let limit = limits::generated_limit();
    let expected = expected_vertex_count(g)
        .filter(|&c| c <= limit as u128)
        .ok_or_else(|| {
            Error::Guardrail(format!(
                "more than {limit} contextual vertices would be generated"
            ))
        })? as usize;
    let cm = collapse(g, &tree)?;
    let pf = ConePushforward::new(cm);
    let loops: Vec<String> = pf.base.target.edges().iter().map(|e| e.id.clone()).collect();
    let n = loops.len();
    let mut seeds = Vec::new();
    for mask in 1u64..1 << n {
        let signs: BTreeMap<String, Sign> = loops
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }))
            .collect();
        let wedge_vertex = p_pm_element(&pf.target, &signs)?;
        seeds.push(pf.distribution(&wedge_vertex)?);
    }
    let dets = deterministic_enumerate(&pf.source)?;
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for seed in &seeds {
        for d in &dets {
            found.insert(seed.act(d)?.values().to_vec());
        }
    }
    if found.len() != expected {
        return Err(Error::InvalidInput(format!(
            "generated {} vertices, expected {expected}",
            found.len()
        )));
    }
    let h = h_representation(&pf.source);
    let circle_ok = supports_circle_method(&pf.source);
    let mut out = Vec::with_capacity(found.len());
    for values in found {
        let p = EdgeDistribution::new(pf.source.clone(), values)?;
        if !p.is_valid() || !h.is_vertex(&p) {
            return Err(Error::InvalidInput(format!("generated point is not a vertex: {p}")));
        }
        if certify == Certification::Full {
            let verdict = if circle_ok {
                fine_check_flower(&p)?.verdict
            } else {
                is_noncontextual_lp(&p)?.verdict
            };
            if verdict != Verdict::Contextual {
                return Err(Error::InvalidInput(format!("generated vertex is noncontextual: {p}")));
            }
        }
        out.push(GeneratedVertex {
            distribution: p,
            certificate: "contextual-vertex",
        });
    }
    Ok(out)
}

/// Whether the boundary edges in the support of `ineq` form closed walks: every
/// vertex they touch has even degree and they are connected.
pub fn loop_support_check(ineq: &LinearInequality, g: &Graph) -> bool {
    let support: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| !ineq.coeff(&e.id).is_zero())
        .collect();
    if support.is_empty() {
        return false;
    }
    let mut degree = vec![0usize; g.vertices().len()];
    let mut uf = UnionFind::new(g.vertices().len());
    for e in &support {
        let a = g.vertex_position(&e.d0).unwrap();
        let b = g.vertex_position(&e.d1).unwrap();
        degree[a] += 1;
        degree[b] += 1;
        uf.union(a, b);
    }
    let touched: Vec<usize> = (0..degree.len()).filter(|&v| degree[v] > 0).collect();
    let root = uf.find(touched[0]);
    touched.iter().all(|&v| degree[v] % 2 == 0 && uf.find(v) == root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, wedge_circles};
    use crate::rational::{half, int};

    #[test]
    fn pr_box_from_loop() {
        let g = circle(4).unwrap();
        let tree = g.spanning_tree().unwrap();
        let cm = collapse(&g, &tree).unwrap();
        let target = Arc::new(cone(&cm.target));
        let loop_id = cm.target.edges()[0].id.clone();
        let pm = p_pm_element(&target, &[(loop_id, Sign::Minus)].into()).unwrap();
        let q = pushforward_distribution(&cm, &pm).unwrap();
        assert!(is_pr_box(&q));
        let signs = g_pm_signs(&q).unwrap().unwrap();
        assert_eq!(signs.values().filter(|s| **s == Sign::Minus).count(), 1);
    }

    #[test]
    fn identity_pushforward() {
        let g = circle(3).unwrap();
        let cm = CollapseMap::identity(&g);
        let s = Arc::new(cone(&g));
        let p = EdgeDistribution::uniform(s);
        assert_eq!(pushforward_distribution(&cm, &p).unwrap().values(), p.values());
    }

    #[test]
    fn pr_box_counts() {
        assert_eq!(all_pr_boxes(4).unwrap().len(), 8);
        assert_eq!(all_pr_boxes(5).unwrap().len(), 16);
        assert!(pr_box(4, &[true, true, false, false]).is_err());
        let p = pr_box(1, &[true]).unwrap();
        let t = p.triangle_table().unwrap();
        assert_eq!(t.rows[0].1, [int(0), half(), int(0), half()]);
    }

    #[test]
    fn generated_counts() {
        let c4 = generate_contextual_vertices(&circle(4).unwrap(), Certification::Full).unwrap();
        assert_eq!(c4.len(), 8);
        assert!(c4.iter().all(|v| is_pr_box(&v.distribution)));
        let w2 = generate_contextual_vertices(&wedge_circles(2).unwrap(), Certification::Full).unwrap();
        assert_eq!(w2.len(), 3);
        assert_eq!(expected_vertex_count(&complete_bipartite(3, 3).unwrap()), Some(480));
    }

    #[test]
    fn loop_support() {
        let g = circle(4).unwrap();
        let chsh = LinearInequality::from_ints(&[("t1", 1), ("t2", 1), ("t3", 1), ("t4", -1)], 0);
        assert!(loop_support_check(&chsh, &g));
        let single = LinearInequality::from_ints(&[("t1", 1)], 0);
        assert!(!loop_support_check(&single, &g));
        let cone_only = LinearInequality::from_ints(&[("(c,v0)", 1)], 0);
        assert!(!loop_support_check(&cone_only, &g));
    }
}
