//! Fourier–Motzkin elimination, circle inequalities and extension problems.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::{EdgeDistribution, Verdict};
use crate::error::{Error, Result};
use crate::graph::{Circle, Edge, Graph, GraphShape};
use crate::inequality::{LinearInequality, Mode, RowKey};
use crate::polytope::{h_representation, lp};
use crate::rational::{int, Rational};
use crate::scenario::{cone_edge_id, Bouquet, ClassicalDisk, Scenario};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalitySystem {
    pub mode: Mode,
    pub variables: Vec<String>,
    pub rows: Vec<LinearInequality>,
}

impl InequalitySystem {
    /// Normalizes and deduplicates `rows`.
    pub fn new(mode: Mode, variables: Vec<String>, rows: Vec<LinearInequality>) -> Self {
        let mut seen = BTreeSet::new();
        let rows = rows
            .into_iter()
            .map(|r| r.normalized())
            .filter(|r| seen.insert(r.key()))
            .collect();
        InequalitySystem {
            mode,
            variables,
            rows,
        }
    }

    pub fn keys(&self) -> BTreeSet<RowKey> {
        self.rows.iter().map(LinearInequality::key).collect()
    }

    /// Rows that are not implied by the coordinate box.
    pub fn nontrivial_keys(&self) -> BTreeSet<RowKey> {
        self.rows
            .iter()
            .filter(|r| !r.is_box_trivial(self.mode))
            .map(LinearInequality::key)
            .collect()
    }

    pub fn to_mode(&self, mode: Mode) -> Self {
        InequalitySystem::new(
            mode,
            self.variables.clone(),
            self.rows.iter().map(|r| r.convert(self.mode, mode)).collect(),
        )
    }

    /// Concatenation; variables keep first-seen order.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.mode != other.mode {
            return Err(Error::InvalidInput("systems use different coordinate modes".into()));
        }
        let mut variables = self.variables.clone();
        for v in &other.variables {
            if !variables.contains(v) {
                variables.push(v.clone());
            }
        }
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(InequalitySystem::new(self.mode, variables, rows))
    }

    /// Whether `point` (variable → coordinate) satisfies every row.
    pub fn holds(&self, point: &BTreeMap<String, Rational>) -> bool {
        self.first_violation(point).is_none()
    }

    pub fn first_violation(&self, point: &BTreeMap<String, Rational>) -> Option<&LinearInequality> {
        self.rows
            .iter()
            .find(|r| !r.holds(|k| point.get(k).cloned().unwrap_or_else(Rational::zero)))
    }
}

/// The `2^{N-1}` rows `Σ (-1)^{a_i} τ̄_i ≥ 2 - N` with `Σ a_i ≡ N + 1 (mod 2)`.
pub fn circle_inequalities<S: AsRef<str>>(edges: &[S]) -> InequalitySystem {
    let n = edges.len();
    let mut rows = Vec::new();
    for mask in 0u64..1 << n {
        if mask.count_ones() as usize % 2 != (n + 1) % 2 {
            continue;
        }
        let signs: String = (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect();
        let row = LinearInequality::new(
            edges.iter().enumerate().map(|(i, e)| {
                (e.as_ref().to_string(), int(if mask >> i & 1 == 1 { -1 } else { 1 }))
            }),
            int(2 - n as i64),
        )
        .with_label(format!("circle a={signs}"));
        rows.push(row);
    }
    InequalitySystem::new(
        Mode::Expectation,
        edges.iter().map(|e| e.as_ref().to_string()).collect(),
        rows,
    )
}

/// The rows that bounded one variable during an elimination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub variable: String,
    /// Rows with positive coefficient on `variable`.
    pub lower: Vec<LinearInequality>,
    /// Rows with negative coefficient on `variable`.
    pub upper: Vec<LinearInequality>,
}

fn box_rows(v: &str, mode: Mode) -> [LinearInequality; 2] {
    let (lo, hi) = mode.bounds();
    [
        LinearInequality::new([(v, int(1))], lo).with_label("box"),
        LinearInequality::new([(v, int(-1))], -hi).with_label("box"),
    ]
}

/// Eliminates `v`, pairing every lower with every upper bound (the box bounds of
/// `v` included) and pruning the result.
pub fn eliminate_traced(sys: &InequalitySystem, v: &str) -> Result<(InequalitySystem, TraceStep)> {
    if !sys.variables.iter().any(|x| x == v) {
        return Err(Error::InvalidInput(format!("`{v}` is not a variable of the system")));
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut rest = Vec::new();
    for r in &sys.rows {
        let c = r.coeff(v);
        if c.is_positive() {
            lower.push(r.clone());
        } else if c.is_negative() {
            upper.push(r.clone());
        } else {
            rest.push(r.clone());
        }
    }
    let [box_lo, box_hi] = box_rows(v, sys.mode);
    for (i, p) in lower.iter().chain([&box_lo]).enumerate() {
        for (j, n) in upper.iter().chain([&box_hi]).enumerate() {
            if i == lower.len() && j == upper.len() {
                continue;
            }
            let a = p.coeff(v);
            let b = -n.coeff(v);
            let combined = p.scale(&b).add(&n.scale(&a));
            debug_assert!(combined.coeff(v).is_zero());
            rest.push(combined);
        }
    }
    let variables = sys.variables.iter().filter(|x| *x != v).cloned().collect();
    let out = prune(&InequalitySystem {
        mode: sys.mode,
        variables,
        rows: rest,
    });
    Ok((
        out,
        TraceStep {
            variable: v.to_string(),
            lower,
            upper,
        },
    ))
}

pub fn eliminate_variable(sys: &InequalitySystem, v: &str) -> Result<InequalitySystem> {
    Ok(eliminate_traced(sys, v)?.0)
}

/// Eliminates `vars` in order, returning the projected system and the trace.
pub fn eliminate_all<S: AsRef<str>>(
    sys: &InequalitySystem,
    vars: &[S],
) -> Result<(InequalitySystem, Vec<TraceStep>)> {
    let mut cur = sys.clone();
    let mut trace = Vec::new();
    for v in vars {
        let (next, step) = eliminate_traced(&cur, v.as_ref())?;
        cur = next;
        trace.push(step);
    }
    Ok((cur, trace))
}

/// Drops duplicate rows and rows already implied by the coordinate box; sorts the rest.
pub fn prune(sys: &InequalitySystem) -> InequalitySystem {
    let mut by_key: BTreeMap<RowKey, LinearInequality> = BTreeMap::new();
    for r in &sys.rows {
        let n = r.normalized();
        if n.is_box_trivial(sys.mode) {
            continue;
        }
        by_key.entry(n.key()).or_insert(n);
    }
    InequalitySystem {
        mode: sys.mode,
        variables: sys.variables.clone(),
        rows: by_key.into_values().collect(),
    }
}

/// Additionally removes rows implied by the remaining rows together with the box.
pub fn prune_redundant(sys: &InequalitySystem) -> InequalitySystem {
    let mut kept = prune(sys).rows;
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<&LinearInequality> =
            kept.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, r)| r).collect();
        if minimum_over(&sys.variables, sys.mode, &others, &kept[i])
            .is_some_and(|m| m >= kept[i].rhs)
        {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    InequalitySystem {
        mode: sys.mode,
        variables: sys.variables.clone(),
        rows: kept,
    }
}

/// Minimum of `target`'s left side over the rows and the box; `None` if infeasible.
fn minimum_over(
    vars: &[String],
    mode: Mode,
    rows: &[&LinearInequality],
    target: &LinearInequality,
) -> Option<Rational> {
    let (lo, hi) = mode.bounds();
    let k = vars.len();
    let m = rows.len() + k;
    // columns: u (shifted variables), row surplus, box slack
    let ncols = k + rows.len() + k;
    let mut a = vec![vec![Rational::zero(); ncols]; m];
    let mut b = vec![Rational::zero(); m];
    for (i, r) in rows.iter().enumerate() {
        let mut shift = Rational::zero();
        for (j, v) in vars.iter().enumerate() {
            let c = r.coeff(v);
            shift += &c * &lo;
            a[i][j] = c;
        }
        a[i][k + i] = int(-1);
        b[i] = &r.rhs - shift;
    }
    for j in 0..k {
        let i = rows.len() + j;
        a[i][j] = int(1);
        a[i][k + rows.len() + j] = int(1);
        b[i] = &hi - &lo;
    }
    let mut c = vec![Rational::zero(); ncols];
    let mut constant = Rational::zero();
    for (j, v) in vars.iter().enumerate() {
        c[j] = target.coeff(v);
        constant += target.coeff(v) * &lo;
    }
    match lp::solve(&a, &b, Some(&c)) {
        lp::LpOutcome::Optimal { value, .. } => Some(value + constant),
        _ => None,
    }
}

/// Result of a boundary-to-disk extension attempt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Extension {
    Extended { distribution: EdgeDistribution },
    Violated {
        /// The failing circle inequality in probability coordinates.
        inequality: LinearInequality,
        #[serde(with = "crate::rational::serde_str")]
        slack: Rational,
    },
}

fn boundary_point(
    boundary: &EdgeDistribution,
    edges: &[String],
) -> Result<BTreeMap<String, Rational>> {
    edges
        .iter()
        .map(|e| {
            let p = boundary.value(e)?;
            Ok((e.clone(), p * int(2) - int(1)))
        })
        .collect()
}

/// The disk's triangle rows in expectation coordinates.
pub fn triangle_system(s: &Arc<Scenario>) -> InequalitySystem {
    let h = h_representation(s);
    InequalitySystem::new(
        Mode::Probability,
        s.edge_ids().map(String::from).collect(),
        h.rows().to_vec(),
    )
    .to_mode(Mode::Expectation)
}

/// Extends boundary values to the whole disk or reports a violated circle inequality.
///
/// Interior edges are eliminated from the terminal triangle towards the initial
/// one; each then takes the midpoint of its feasible interval in reverse order.
pub fn extend_from_boundary(disk: &ClassicalDisk, boundary: &EdgeDistribution) -> Result<Extension> {
    let s = Arc::new(disk.scenario.clone());
    let point = boundary_point(boundary, &disk.boundary)?;
    let (projected, trace) = eliminate_all(&triangle_system(&s), &disk.interior_order)?;
    if let Some(row) = projected.first_violation(&point) {
        let slack = row.slack(|k| point[k].clone());
        return Ok(Extension::Violated {
            inequality: row.convert(Mode::Expectation, Mode::Probability),
            slack: slack / int(2),
        });
    }
    let mut assigned = point;
    back_substitute(&trace, Mode::Expectation, &mut assigned)?;
    let values = s
        .edge_ids()
        .map(|e| (&assigned[e] + int(1)) / int(2))
        .collect();
    let distribution = EdgeDistribution::new(s, values)?;
    if !distribution.is_valid() {
        return Err(Error::InvalidDistribution(
            "back-substitution produced an invalid distribution".into(),
        ));
    }
    Ok(Extension::Extended { distribution })
}

/// Assigns the eliminated variables, last eliminated first, to interval midpoints.
pub fn back_substitute(
    trace: &[TraceStep],
    mode: Mode,
    point: &mut BTreeMap<String, Rational>,
) -> Result<()> {
    let (lo, hi) = mode.bounds();
    for step in trace.iter().rev() {
        let v = &step.variable;
        let bound = |r: &LinearInequality, point: &BTreeMap<String, Rational>| {
            let c = r.coeff(v);
            let rest: Rational = r
                .coeffs
                .iter()
                .filter(|(k, _)| *k != v)
                .map(|(k, a)| a * &point[k])
                .fold(Rational::zero(), |x, y| x + y);
            (&r.rhs - rest) / c
        };
        let mut low = lo.clone();
        for r in &step.lower {
            low = low.max(bound(r, point));
        }
        let mut high = hi.clone();
        for r in &step.upper {
            high = high.min(bound(r, point));
        }
        if low > high {
            return Err(Error::InvalidInput(format!(
                "no feasible value for `{v}` during back-substitution"
            )));
        }
        point.insert(v.clone(), (low + high) / int(2));
    }
    Ok(())
}

/// A failing composite circle of a bouquet or a failing circle of a flower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleViolation {
    pub circle: Vec<String>,
    /// In probability coordinates.
    pub inequality: LinearInequality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BouquetVerdict {
    pub extends: bool,
    pub violated: Vec<CircleViolation>,
}

/// The composite circles of a bouquet: the outer boundaries of every pair of disks.
pub fn bouquet_circles(b: &Bouquet) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..b.disks.len() {
        for j in i + 1..b.disks.len() {
            let mut c = b.disks[i].outer.clone();
            c.extend(b.disks[j].outer.iter().rev().cloned());
            out.push(c);
        }
    }
    out
}

/// Decides extendability to a bouquet of disks from its boundary values.
pub fn check_extension_bouquet(b: &Bouquet, boundary: &EdgeDistribution) -> Result<BouquetVerdict> {
    let point = boundary_point(boundary, &b.boundary())?;
    let mut violated = Vec::new();
    for c in bouquet_circles(b) {
        let sys = circle_inequalities(&c);
        if let Some(row) = sys.first_violation(&point) {
            violated.push(CircleViolation {
                circle: c,
                inequality: row.convert(Mode::Expectation, Mode::Probability),
            });
        }
    }
    Ok(BouquetVerdict {
        extends: violated.is_empty(),
        violated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FineVerdict {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CircleViolation>,
}

/// Whether the circle test applies: the base graph is a circle or a flower.
pub fn supports_circle_method(s: &Scenario) -> bool {
    s.cone_of()
        .is_some_and(|g| !matches!(g.shape(), GraphShape::Other))
}

/// Circle-inequality test on the cone of a circle or flower graph.
pub fn fine_check_flower(p: &EdgeDistribution) -> Result<FineVerdict> {
    let g = p.scenario().cone_of().ok_or(Error::NotACone)?;
    if matches!(g.shape(), GraphShape::Other) {
        return Err(Error::UnsupportedShape(
            "the circle test needs a circle or flower base graph; use the LP method".into(),
        ));
    }
    if let Some(v) = p.validate().first() {
        return Err(Error::InvalidDistribution(format!(
            "triangle `{}` has negative probability for outcome {}",
            v.triangle, v.outcome
        )));
    }
    circle_verdict(p, &g.enumerate_circles())
}

/// Checks the circle inequalities of every given circle against `p`.
pub fn circle_verdict(p: &EdgeDistribution, circles: &[Circle]) -> Result<FineVerdict> {
    for c in circles {
        let point = boundary_point(p, &c.edges)?;
        if let Some(row) = circle_inequalities(&c.edges).first_violation(&point) {
            return Ok(FineVerdict {
                verdict: Verdict::Contextual,
                witness: Some(CircleViolation {
                    circle: c.edges.clone(),
                    inequality: row.convert(Mode::Expectation, Mode::Probability),
                }),
            });
        }
    }
    Ok(FineVerdict {
        verdict: Verdict::Noncontextual,
        witness: None,
    })
}

/// Circles of the base graph enlarged by the apex and the cone edges over the
/// flower's two terminal vertices.
pub fn augmented_flower_circles(g: &Graph) -> Result<Vec<Circle>> {
    let GraphShape::Flower { terminals, .. } = g.shape() else {
        return Err(Error::UnsupportedShape("not a flower".into()));
    };
    let apex = "c".to_string();
    let mut vertices = g.vertices().to_vec();
    vertices.push(apex.clone());
    let mut edges = g.edges().to_vec();
    for t in [&terminals.0, &terminals.1] {
        edges.push(Edge::new(cone_edge_id(t), t.clone(), apex.clone()));
    }
    Ok(Graph::new(vertices, edges)?.enumerate_circles())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::half;
    use crate::scenario::classical_disk;

    fn sys(rows: &[(&[(&str, i64)], i64)], vars: &[&str]) -> InequalitySystem {
        InequalitySystem::new(
            Mode::Expectation,
            vars.iter().map(|v| v.to_string()).collect(),
            rows.iter()
                .map(|(c, r)| LinearInequality::from_ints(c, *r))
                .collect(),
        )
    }

    #[test]
    fn circle_counts() {
        assert_eq!(circle_inequalities(&["a"]).rows.len(), 1);
        assert_eq!(circle_inequalities(&["a", "b", "c"]).rows.len(), 4);
        assert_eq!(circle_inequalities(&["a", "b", "c", "d"]).rows.len(), 8);
        assert_eq!(circle_inequalities(&["a", "b", "c", "d", "e"]).rows.len(), 16);
        // a single loop forces its expectation to +1
        let one = circle_inequalities(&["a"]);
        assert_eq!(one.rows[0].key(), LinearInequality::from_ints(&[("a", 1)], 1).key());
    }

    #[test]
    fn prune_examples() {
        let s = sys(
            &[
                (&[("a", 1), ("b", 1)], -2),
                (&[("a", 1)], -1),
                (&[("a", 1), ("b", 1), ("c", 1), ("d", -1)], -2),
                (&[("a", 2), ("b", 2), ("c", 2), ("d", -2)], -4),
            ],
            &["a", "b", "c", "d"],
        );
        assert_eq!(prune(&s).rows.len(), 1);
    }

    #[test]
    fn projection_of_a_triangle() {
        let t = circle_inequalities(&["x", "y", "z"]);
        let out = eliminate_variable(&t, "z").unwrap();
        assert!(out.rows.is_empty());
    }

    #[test]
    fn redundancy_flag() {
        let s = sys(
            &[(&[("a", 1), ("b", 1)], 0), (&[("a", 1), ("b", 1)], -1), (&[("a", 2), ("b", 1)], -1)],
            &["a", "b"],
        );
        let r = prune_redundant(&s);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].key(), LinearInequality::from_ints(&[("a", 1), ("b", 1)], 0).key());
    }

    #[test]
    fn disk_four_extensions() {
        let d = classical_disk(4).unwrap();
        let bs = Arc::new(Scenario::from_graph(&d.boundary_graph()));
        let u = EdgeDistribution::uniform(bs.clone());
        let Extension::Extended { distribution } = extend_from_boundary(&d, &u).unwrap() else {
            panic!()
        };
        assert_eq!(distribution.value("z1").unwrap(), &half());
        let vals = [1, 1, 1, 0].map(int).to_vec();
        let p = EdgeDistribution::new(bs, vals).unwrap();
        let Extension::Violated { inequality, .. } = extend_from_boundary(&d, &p).unwrap() else {
            panic!()
        };
        assert!(!p.satisfies(&inequality).unwrap());
    }

    #[test]
    fn disk_three_is_deterministic() {
        let d = classical_disk(3).unwrap();
        let bs = Arc::new(Scenario::from_graph(&d.boundary_graph()));
        let p = EdgeDistribution::new(bs, vec![int(1); 3]).unwrap();
        let Extension::Extended { distribution } = extend_from_boundary(&d, &p).unwrap() else {
            panic!()
        };
        assert!(distribution.is_deterministic());
    }
}
