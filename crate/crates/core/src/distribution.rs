//! Simplicial distributions in edge coordinates.
//!
//! A distribution stores `p_τ⁰` for every edge; `p_τ¹ = 1 - p_τ⁰`. The
//! probabilities on a triangle with slots `(x, y, z)` are
//! `p^{ab} = (p_x^a + p_y^b - p_z^{a+b+1}) / 2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{null_space, Bits};
use crate::limits;
use crate::rational::{self, half, one, Rational};
use crate::scenario::Scenario;

/// Outcome pairs in table order.
pub const OUTCOMES: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

#[derive(Clone, Debug)]
pub struct EdgeDistribution {
    scenario: Arc<Scenario>,
    values: Vec<Rational>,
}

impl PartialEq for EdgeDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && same_scenario(&self.scenario, &other.scenario)
    }
}

impl Eq for EdgeDistribution {}

pub(crate) fn same_scenario(a: &Arc<Scenario>, b: &Arc<Scenario>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_same(a: &Arc<Scenario>, b: &Arc<Scenario>) -> Result<()> {
    if same_scenario(a, b) {
        Ok(())
    } else {
        Err(Error::ScenarioMismatch(
            "operands live on different scenarios".into(),
        ))
    }
}

/// `p^a` for an edge value `p⁰`.
fn marginal(v: &Rational, a: u8) -> Rational {
    if a == 0 {
        v.clone()
    } else {
        one() - v
    }
}

fn table_entries(s: &Scenario, values: &[Rational], t: usize) -> [Rational; 4] {
    let [x, y, z] = s.xyz(t);
    OUTCOMES.map(|(a, b)| {
        (marginal(&values[x], a) + marginal(&values[y], b) - marginal(&values[z], (a + b + 1) % 2))
            * half()
    })
}

fn outcome_name(a: u8, b: u8) -> String {
    format!("{a}{b}")
}

impl EdgeDistribution {
    /// Values in edge order; each must lie in `[0, 1]`. Triangle constraints are
    /// checked by [`EdgeDistribution::validate`].
    pub fn new(scenario: Arc<Scenario>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != scenario.num_edges() {
            return Err(Error::InvalidDistribution(format!(
                "expected {} edge values, found {}",
                scenario.num_edges(),
                values.len()
            )));
        }
        for (e, v) in scenario.edges().iter().zip(&values) {
            if !rational::in_unit_interval(v) {
                return Err(Error::InvalidDistribution(format!(
                    "value {} on `{}` is outside [0, 1]",
                    rational::format(v),
                    e.id
                )));
            }
        }
        Ok(EdgeDistribution { scenario, values })
    }

    /// Like [`EdgeDistribution::new`] but also rejects triangle violations.
    pub fn new_valid(scenario: Arc<Scenario>, values: Vec<Rational>) -> Result<Self> {
        let p = Self::new(scenario, values)?;
        p.triangle_table()?;
        Ok(p)
    }

    pub fn from_map(scenario: Arc<Scenario>, map: &BTreeMap<String, Rational>) -> Result<Self> {
        for k in map.keys() {
            scenario.edge_position_or_err(k)?;
        }
        let values = scenario
            .edges()
            .iter()
            .map(|e| {
                map.get(&e.id).cloned().ok_or_else(|| {
                    Error::InvalidDistribution(format!("missing value for edge `{}`", e.id))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(scenario, values)
    }

    pub fn uniform(scenario: Arc<Scenario>) -> Self {
        let values = vec![half(); scenario.num_edges()];
        EdgeDistribution { scenario, values }
    }

    pub fn scenario(&self) -> &Arc<Scenario> {
        &self.scenario
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, edge: &str) -> Result<&Rational> {
        Ok(&self.values[self.scenario.edge_position_or_err(edge)?])
    }

    pub fn values_map(&self) -> BTreeMap<String, Rational> {
        self.scenario
            .edge_ids()
            .map(String::from)
            .zip(self.values.iter().cloned())
            .collect()
    }

    /// Expectation coordinates `2 p⁰ - 1`.
    pub fn expectations(&self) -> Vec<Rational> {
        self.values
            .iter()
            .map(|v| v * rational::int(2) - one())
            .collect()
    }

    /// The per-triangle outcome tables; fails on the first negative entry.
    pub fn triangle_table(&self) -> Result<TriangleTable> {
        let mut rows = Vec::new();
        for (t, tri) in self.scenario.triangles().iter().enumerate() {
            let entries = table_entries(&self.scenario, &self.values, t);
            for (k, (a, b)) in OUTCOMES.into_iter().enumerate() {
                if entries[k].is_negative() {
                    return Err(Error::NegativeProbability {
                        triangle: tri.id.clone(),
                        outcome: outcome_name(a, b),
                    });
                }
            }
            rows.push((tri.id.clone(), entries));
        }
        Ok(TriangleTable { rows })
    }

    /// All negative table entries, as `(triangle, outcome, value)`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (t, tri) in self.scenario.triangles().iter().enumerate() {
            let entries = table_entries(&self.scenario, &self.values, t);
            for (k, (a, b)) in OUTCOMES.into_iter().enumerate() {
                if entries[k].is_negative() {
                    out.push(Violation {
                        triangle: tri.id.clone(),
                        outcome: outcome_name(a, b),
                        value: entries[k].clone(),
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The outcome assignment when every edge value is 0 or 1.
    pub fn as_deterministic(&self) -> Option<OutcomeAssignment> {
        if !self.values.iter().all(rational::is_zero_or_one) {
            return None;
        }
        let bits = self.values.iter().map(|v| v.is_zero()).collect();
        OutcomeAssignment::new(self.scenario.clone(), bits).ok()
    }

    pub fn is_deterministic(&self) -> bool {
        self.as_deterministic().is_some()
    }

    /// `lhs - rhs` of `ineq` at this point; every variable must be an edge.
    pub fn slack(&self, ineq: &crate::inequality::LinearInequality) -> Result<Rational> {
        for k in ineq.coeffs.keys() {
            self.scenario.edge_position_or_err(k)?;
        }
        Ok(ineq.slack(|k| self.values[self.scenario.edge_position(k).unwrap()].clone()))
    }

    pub fn satisfies(&self, ineq: &crate::inequality::LinearInequality) -> Result<bool> {
        Ok(!self.slack(ineq)?.is_negative())
    }

    /// The monoid product: `(p·q)⁰ = p⁰q⁰ + p¹q¹` per edge.
    pub fn product(&self, other: &Self) -> Result<Self> {
        check_same(&self.scenario, &other.scenario)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(p, q)| p * q + (one() - p) * (one() - q))
            .collect();
        Ok(EdgeDistribution {
            scenario: self.scenario.clone(),
            values,
        })
    }

    /// Action of a deterministic distribution: flips `p⁰ ↔ p¹` where the bit is 1.
    pub fn act(&self, s: &OutcomeAssignment) -> Result<Self> {
        check_same(&self.scenario, &s.scenario)?;
        let values = self
            .values
            .iter()
            .zip(&s.bits)
            .map(|(v, &b)| if b { one() - v } else { v.clone() })
            .collect();
        Ok(EdgeDistribution {
            scenario: self.scenario.clone(),
            values,
        })
    }

    /// Distinct images under all deterministic distributions, sorted by value vector.
    pub fn orbit(&self) -> Result<Vec<Self>> {
        let mut seen = BTreeSet::new();
        for s in deterministic_enumerate(&self.scenario)? {
            seen.insert(self.act(&s)?.values);
        }
        Ok(seen
            .into_iter()
            .map(|values| EdgeDistribution {
                scenario: self.scenario.clone(),
                values,
            })
            .collect())
    }

    /// Restriction to a subscenario (every simplex of `sub` must occur in this scenario).
    pub fn restrict(&self, sub: Arc<Scenario>) -> Result<Self> {
        if !sub.is_subscenario_of(&self.scenario) {
            return Err(Error::ScenarioMismatch(
                "restriction target is not contained in the scenario".into(),
            ));
        }
        let values = sub
            .edge_ids()
            .map(|e| self.values[self.scenario.edge_position(e).unwrap()].clone())
            .collect();
        Ok(EdgeDistribution {
            scenario: sub,
            values,
        })
    }
}

impl fmt::Display for EdgeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .scenario
            .edge_ids()
            .zip(&self.values)
            .map(|(e, v)| format!("{e}={}", rational::format(v)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for EdgeDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            scenario: &'a Scenario,
            #[serde(with = "rational::serde_map")]
            values: BTreeMap<String, Rational>,
        }
        Json {
            scenario: &self.scenario,
            values: self.values_map(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub triangle: String,
    pub outcome: String,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// Per-triangle probabilities in the order `00, 01, 10, 11`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleTable {
    pub rows: Vec<(String, [Rational; 4])>,
}

impl TriangleTable {
    pub fn get(&self, triangle: &str) -> Option<&[Rational; 4]> {
        self.rows.iter().find(|(t, _)| t == triangle).map(|(_, r)| r)
    }
}

impl Serialize for TriangleTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, BTreeMap<String, String>> = self
            .rows
            .iter()
            .map(|(t, r)| {
                let entries = OUTCOMES
                    .iter()
                    .zip(r)
                    .map(|(&(a, b), v)| (outcome_name(a, b), rational::format(v)))
                    .collect();
                (t.as_str(), entries)
            })
            .collect();
        map.serialize(s)
    }
}

/// A `Z₂` label per edge with even parity on every triangle.
#[derive(Clone, Debug)]
pub struct OutcomeAssignment {
    scenario: Arc<Scenario>,
    bits: Vec<bool>,
}

impl PartialEq for OutcomeAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && same_scenario(&self.scenario, &other.scenario)
    }
}

impl Eq for OutcomeAssignment {}

impl OutcomeAssignment {
    pub fn new(scenario: Arc<Scenario>, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != scenario.num_edges() {
            return Err(Error::InvalidInput(format!(
                "expected {} bits, found {}",
                scenario.num_edges(),
                bits.len()
            )));
        }
        for (t, tri) in scenario.triangles().iter().enumerate() {
            let parity = scenario.slots(t).iter().filter(|&&e| bits[e]).count();
            if parity % 2 == 1 {
                return Err(Error::InvalidInput(format!(
                    "assignment has odd parity on triangle `{}`",
                    tri.id
                )));
            }
        }
        Ok(OutcomeAssignment { scenario, bits })
    }

    pub fn zero(scenario: Arc<Scenario>) -> Self {
        let bits = vec![false; scenario.num_edges()];
        OutcomeAssignment { scenario, bits }
    }

    pub fn scenario(&self) -> &Arc<Scenario> {
        &self.scenario
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bit(&self, edge: &str) -> Result<bool> {
        Ok(self.bits[self.scenario.edge_position_or_err(edge)?])
    }

    /// The deterministic distribution `δ^s`.
    pub fn to_distribution(&self) -> EdgeDistribution {
        let values = self
            .bits
            .iter()
            .map(|&b| if b { Rational::zero() } else { Rational::one() })
            .collect();
        EdgeDistribution {
            scenario: self.scenario.clone(),
            values,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.scenario, &other.scenario)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        Ok(OutcomeAssignment {
            scenario: self.scenario.clone(),
            bits,
        })
    }

    /// Bits in edge order as a `0`/`1` string.
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for OutcomeAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

/// Every outcome assignment of `s`.
///
/// Cones are enumerated from their cone-edge bits; other scenarios through a
/// basis of the parity system. Fails when the count exceeds the guardrail.
pub fn deterministic_enumerate(s: &Arc<Scenario>) -> Result<Vec<OutcomeAssignment>> {
    deterministic_enumerate_limited(s, limits::assignment_limit())
}

pub fn deterministic_enumerate_limited(
    s: &Arc<Scenario>,
    limit: usize,
) -> Result<Vec<OutcomeAssignment>> {
    let too_many = |dim: usize| {
        Error::Guardrail(format!(
            "2^{dim} deterministic distributions exceed the limit of {limit}; \
             use the circle-inequality method where it applies"
        ))
    };
    if let Some(g) = s.cone_of() {
        let nv = g.vertices().len();
        if nv >= usize::BITS as usize || 1usize << nv > limit {
            return Err(too_many(nv));
        }
        let cone_pos: Vec<usize> = g
            .vertices()
            .iter()
            .map(|v| s.edge_position(&crate::scenario::cone_edge_id(v)).unwrap())
            .collect();
        let mut out = Vec::with_capacity(1 << nv);
        for k in 0..1usize << nv {
            let vbit = |i: usize| (k >> (nv - 1 - i)) & 1 == 1;
            let mut bits = vec![false; s.num_edges()];
            for (i, &p) in cone_pos.iter().enumerate() {
                bits[p] = vbit(i);
            }
            for e in g.edges() {
                let a = vbit(g.vertex_position(&e.d0).unwrap());
                let b = vbit(g.vertex_position(&e.d1).unwrap());
                bits[s.edge_position(&e.id).unwrap()] = a ^ b;
            }
            out.push(OutcomeAssignment {
                scenario: s.clone(),
                bits,
            });
        }
        return Ok(out);
    }
    let n = s.num_edges();
    let rows: Vec<Bits> = (0..s.triangles().len())
        .map(|t| {
            let mut r = Bits::zeros(n);
            for e in s.slots(t) {
                r.flip(e);
            }
            r
        })
        .collect();
    let basis = null_space(&rows, n);
    let dim = basis.len();
    if dim >= usize::BITS as usize || 1usize << dim > limit {
        return Err(too_many(dim));
    }
    let mut out = Vec::with_capacity(1 << dim);
    for k in 0..1usize << dim {
        let mut v = Bits::zeros(n);
        for (i, b) in basis.iter().enumerate() {
            if (k >> (dim - 1 - i)) & 1 == 1 {
                v.xor_with(b);
            }
        }
        out.push(OutcomeAssignment {
            scenario: s.clone(),
            bits: v.to_vec(),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

fn base_graph(s: &Scenario) -> Result<&crate::graph::Graph> {
    s.cone_of().ok_or(Error::NotACone)
}

/// The element of `G±` putting `p₊` or `p₋` on each cone triangle.
///
/// Cone edges get ½; a boundary edge gets 1 under `+` and 0 under `-`.
pub fn p_pm_element(s: &Arc<Scenario>, signs: &BTreeMap<String, Sign>) -> Result<EdgeDistribution> {
    let g = base_graph(s)?;
    for k in signs.keys() {
        if g.edge(k).is_none() {
            return Err(Error::UnknownEdge(k.clone()));
        }
    }
    let mut values = vec![half(); s.num_edges()];
    for e in g.edges() {
        let sign = signs.get(&e.id).ok_or_else(|| {
            Error::InvalidInput(format!("no sign given for boundary edge `{}`", e.id))
        })?;
        values[s.edge_position(&e.id).unwrap()] = match sign {
            Sign::Plus => Rational::one(),
            Sign::Minus => Rational::zero(),
        };
    }
    Ok(EdgeDistribution {
        scenario: s.clone(),
        values,
    })
}

/// The sign pattern of a `G±` element, or `None` if `p` is not one.
pub fn g_pm_signs(p: &EdgeDistribution) -> Result<Option<BTreeMap<String, Sign>>> {
    let s = p.scenario();
    let g = base_graph(s)?;
    for v in g.vertices() {
        let pos = s.edge_position(&crate::scenario::cone_edge_id(v)).unwrap();
        if p.values[pos] != half() {
            return Ok(None);
        }
    }
    let mut signs = BTreeMap::new();
    for e in g.edges() {
        let v = &p.values[s.edge_position(&e.id).unwrap()];
        let sign = if v.is_one() {
            Sign::Plus
        } else if v.is_zero() {
            Sign::Minus
        } else {
            return Ok(None);
        };
        signs.insert(e.id.clone(), sign);
    }
    Ok(Some(signs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Noncontextual,
    Contextual,
}

/// Classifies a `G±` element: noncontextual iff the minus signs add up to an
/// even number around every circle of the base graph.
pub fn g_pm_classify(p: &EdgeDistribution) -> Result<Verdict> {
    let g = base_graph(p.scenario())?;
    let signs = g_pm_signs(p)?
        .ok_or_else(|| Error::InvalidInput("distribution is not an element of G±".into()))?;
    // try to write the minus pattern as a coboundary f(d0) + f(d1)
    let mut label: Vec<Option<bool>> = vec![None; g.vertices().len()];
    for start in 0..label.len() {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(false);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let lu = label[u].unwrap();
            for e in g.edges() {
                let (a, b) = (
                    g.vertex_position(&e.d0).unwrap(),
                    g.vertex_position(&e.d1).unwrap(),
                );
                let other = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                let want = lu ^ (signs[&e.id] == Sign::Minus);
                match label[other] {
                    None => {
                        label[other] = Some(want);
                        stack.push(other);
                    }
                    Some(l) if l != want => return Ok(Verdict::Contextual),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Verdict::Noncontextual)
}
