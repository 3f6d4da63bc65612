//! Two-dimensional measurement spaces built by gluing triangles.
//!
//! A triangle stores its three edges by face slot. Following the face maps of
//! the standard 2-simplex, the slots play the roles `x = d2`, `y = d0` and
//! `z = d1`. Slots may repeat (the cone of a loop identifies two of them).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub id: String,
    pub d0: String,
    pub d1: String,
    pub d2: String,
}

/// An edge of a scenario; `faces` is `(d0, d1)` when vertex bookkeeping is known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScenarioEdge {
    pub id: String,
    pub faces: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    edges: Vec<ScenarioEdge>,
    triangles: Vec<Triangle>,
    /// Per triangle, edge positions for the `[d0, d1, d2]` slots.
    slots: Vec<[usize; 3]>,
    edge_index: HashMap<String, usize>,
    cone_of: Option<Graph>,
}

impl Scenario {
    pub fn new(edges: Vec<ScenarioEdge>, triangles: Vec<Triangle>) -> Result<Self> {
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::InvalidScenario(format!("duplicate edge `{}`", e.id)));
            }
        }
        let mut seen = HashMap::new();
        let mut slots = Vec::with_capacity(triangles.len());
        for t in &triangles {
            if seen.insert(t.id.clone(), ()).is_some() {
                return Err(Error::InvalidScenario(format!("duplicate triangle `{}`", t.id)));
            }
            let mut s = [0; 3];
            for (k, e) in [&t.d0, &t.d1, &t.d2].into_iter().enumerate() {
                s[k] = *edge_index.get(e).ok_or_else(|| {
                    Error::InvalidScenario(format!("triangle `{}` uses unknown edge `{e}`", t.id))
                })?;
            }
            let faces: Vec<_> = s.iter().map(|&i| edges[i].faces.as_ref()).collect();
            if let (Some(y), Some(z), Some(x)) = (faces[0], faces[1], faces[2]) {
                // vertex 2 = d0 y = d0 z, vertex 1 = d1 y = d0 x, vertex 0 = d1 z = d1 x
                if y.0 != z.0 || y.1 != x.0 || z.1 != x.1 {
                    return Err(Error::InvalidScenario(format!(
                        "triangle `{}` has inconsistent vertex incidences",
                        t.id
                    )));
                }
            }
            slots.push(s);
        }
        Ok(Scenario {
            edges,
            triangles,
            slots,
            edge_index,
            cone_of: None,
        })
    }

    /// A scenario without triangles: the graph viewed as a 1-dimensional space.
    pub fn from_graph(g: &Graph) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|e| ScenarioEdge {
                id: e.id.clone(),
                faces: Some((e.d0.clone(), e.d1.clone())),
            })
            .collect();
        Scenario::new(edges, Vec::new()).expect("graph edges are unique")
    }

    pub fn edges(&self) -> &[ScenarioEdge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &str> {
        self.edges.iter().map(|e| e.id.as_str())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edge_position(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn edge_position_or_err(&self, id: &str) -> Result<usize> {
        self.edge_position(id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Edge positions `[d0, d1, d2]` of triangle `t`.
    pub fn slots(&self, t: usize) -> [usize; 3] {
        self.slots[t]
    }

    /// Edge positions in `(x, y, z)` role order: `(d2, d0, d1)`.
    pub fn xyz(&self, t: usize) -> [usize; 3] {
        let [d0, d1, d2] = self.slots[t];
        [d2, d0, d1]
    }

    /// The base graph when this scenario was built as a cone.
    pub fn cone_of(&self) -> Option<&Graph> {
        self.cone_of.as_ref()
    }

    /// True when every simplex of `self` is a simplex of `other` with the same faces.
    pub fn is_subscenario_of(&self, other: &Scenario) -> bool {
        self.edges.iter().all(|e| match other.edge_position(&e.id) {
            Some(i) => match (&e.faces, &other.edges[i].faces) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            },
            None => false,
        }) && self
            .triangles
            .iter()
            .all(|t| other.triangles.iter().any(|u| u == t))
    }
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum EdgeSpec {
    Full(Edge),
    Id(String),
}

#[derive(Deserialize, Serialize)]
struct ScenarioJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cone_of: Option<Graph>,
    #[serde(default)]
    edges: Vec<EdgeSpec>,
    #[serde(default)]
    triangles: Vec<Triangle>,
}

impl Serialize for Scenario {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let edges = self
            .edges
            .iter()
            .map(|e| match &e.faces {
                Some((d0, d1)) => EdgeSpec::Full(Edge::new(&e.id, d0, d1)),
                None => EdgeSpec::Id(e.id.clone()),
            })
            .collect();
        ScenarioJson {
            cone_of: self.cone_of.clone(),
            edges,
            triangles: self.triangles.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ScenarioJson::deserialize(d)?;
        if let Some(g) = raw.cone_of {
            let built = cone(&g);
            if !raw.triangles.is_empty() && raw.triangles != built.triangles {
                return Err(D::Error::custom(
                    "explicit triangles disagree with the cone of `cone_of`",
                ));
            }
            return Ok(built);
        }
        let edges = raw
            .edges
            .into_iter()
            .map(|e| match e {
                EdgeSpec::Full(e) => ScenarioEdge {
                    id: e.id,
                    faces: Some((e.d0, e.d1)),
                },
                EdgeSpec::Id(id) => ScenarioEdge { id, faces: None },
            })
            .collect();
        Scenario::new(edges, raw.triangles).map_err(D::Error::custom)
    }
}

/// Id of the cone edge over vertex `v`.
pub fn cone_edge_id(v: &str) -> String {
    format!("(c,{v})")
}

/// Id of the cone triangle over edge `t`.
pub fn cone_triangle_id(t: &str) -> String {
    format!("(c,{t})")
}

fn apex_name(g: &Graph) -> String {
    let mut c = "c".to_string();
    while g.has_vertex(&c) {
        c.push('\'');
    }
    c
}

/// The cone: one triangle `(c,τ)` per edge τ with `d0 = τ`, `d1 = (c, d0 τ)`,
/// `d2 = (c, d1 τ)`; edges are the graph's edges followed by one cone edge per vertex.
pub fn cone(g: &Graph) -> Scenario {
    let apex = apex_name(g);
    let mut edges: Vec<ScenarioEdge> = g
        .edges()
        .iter()
        .map(|e| ScenarioEdge {
            id: e.id.clone(),
            faces: Some((e.d0.clone(), e.d1.clone())),
        })
        .collect();
    edges.extend(g.vertices().iter().map(|v| ScenarioEdge {
        id: cone_edge_id(v),
        faces: Some((v.clone(), apex.clone())),
    }));
    let triangles = g
        .edges()
        .iter()
        .map(|e| Triangle {
            id: cone_triangle_id(&e.id),
            d0: e.id.clone(),
            d1: cone_edge_id(&e.d0),
            d2: cone_edge_id(&e.d1),
        })
        .collect();
    let mut s = Scenario::new(edges, triangles).expect("cone construction is well formed");
    s.cone_of = Some(g.clone());
    s
}

/// A fan-triangulated disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalDisk {
    pub scenario: Scenario,
    /// Boundary edges in cyclic order.
    pub boundary: Vec<String>,
    /// Interior edges ordered from the terminal triangle to the initial one.
    pub interior_order: Vec<String>,
}

impl ClassicalDisk {
    pub fn boundary_graph(&self) -> Graph {
        boundary_graph(&self.scenario, &self.boundary)
    }
}

fn boundary_graph(s: &Scenario, edges: &[String]) -> Graph {
    let mut vertices: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for id in edges {
        let e = &s.edges()[s.edge_position(id).unwrap()];
        let (d0, d1) = e.faces.clone().unwrap();
        for v in [&d0, &d1] {
            if !vertices.contains(v) {
                vertices.push(v.clone());
            }
        }
        out.push(Edge::new(id, d0, d1));
    }
    Graph::new(vertices, out).expect("boundary of a well-formed disk")
}

struct Fan {
    edges: Vec<ScenarioEdge>,
    triangles: Vec<Triangle>,
    boundary: Vec<String>,
    interior_order: Vec<String>,
}

/// Fan triangulation of an N-gon with apex `vertex(0)`; `edge_name` gets
/// `(a, b)` with `a < b` and `(a, b) = (0, 1)` is the initial triangle's first boundary edge.
fn fan(
    n: usize,
    vertex: impl Fn(usize) -> String,
    edge_name: impl Fn(usize, usize) -> String,
    triangle_name: impl Fn(usize) -> String,
) -> Fan {
    let edge = |a: usize, b: usize| ScenarioEdge {
        id: edge_name(a, b),
        faces: Some((vertex(b), vertex(a))),
    };
    let mut edges = Vec::new();
    let mut boundary = Vec::new();
    for i in 1..n {
        edges.push(edge(i - 1, i));
        boundary.push(edge_name(i - 1, i));
    }
    edges.push(edge(0, n - 1));
    boundary.push(edge_name(0, n - 1));
    for k in 2..n - 1 {
        edges.push(edge(0, k));
    }
    let triangles = (1..=n - 2)
        .map(|k| Triangle {
            id: triangle_name(k),
            d0: edge_name(k, k + 1),
            d1: edge_name(0, k + 1),
            d2: edge_name(0, k),
        })
        .collect();
    let interior_order = (2..n - 1).rev().map(|k| edge_name(0, k)).collect();
    Fan {
        edges,
        triangles,
        boundary,
        interior_order,
    }
}

/// The classical N-disk as the fan `s_k = (u0, u_k, u_{k+1})`, `k = 1..N-2`.
///
/// Boundary edges are `b1..bN` (`b_i = u_{i-1}u_i`, `bN = u0 u_{N-1}`); interior
/// edges are `z1..z_{N-3}` with `z_k = u0 u_{k+1}`.
pub fn classical_disk(n: usize) -> Result<ClassicalDisk> {
    if n < 3 {
        return Err(Error::InvalidSize("a classical disk needs N >= 3".into()));
    }
    let name = move |a: usize, b: usize| -> String {
        if a == 0 && b >= 2 && b < n - 1 {
            format!("z{}", b - 1)
        } else if a == 0 && b == n - 1 {
            format!("b{n}")
        } else {
            format!("b{b}")
        }
    };
    let f = fan(n, |i| format!("u{i}"), name, |k| format!("s{k}"));
    Ok(ClassicalDisk {
        scenario: Scenario::new(f.edges, f.triangles)?,
        boundary: f.boundary,
        interior_order: f.interior_order,
    })
}

/// Classical disks glued along one common edge `s`, a boundary edge of every initial triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bouquet {
    pub scenario: Scenario,
    pub shared: String,
    pub disks: Vec<BouquetDisk>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BouquetDisk {
    pub size: usize,
    /// Boundary edges of this disk other than the shared edge, in cyclic order from the shared edge.
    pub outer: Vec<String>,
    pub interior_order: Vec<String>,
}

impl Bouquet {
    /// Boundary edges of the glued space (every disk boundary minus the shared edge).
    pub fn boundary(&self) -> Vec<String> {
        self.disks.iter().flat_map(|d| d.outer.clone()).collect()
    }

    pub fn boundary_graph(&self) -> Graph {
        boundary_graph(&self.scenario, &self.boundary())
    }
}

pub fn bouquet(sizes: &[usize]) -> Result<Bouquet> {
    if sizes.len() < 2 {
        return Err(Error::InvalidSize("a bouquet needs at least two disks".into()));
    }
    let mut edges: Vec<ScenarioEdge> = Vec::new();
    let mut triangles = Vec::new();
    let mut disks = Vec::new();
    let shared = "s".to_string();
    for (i, &n) in sizes.iter().enumerate() {
        if n < 3 {
            return Err(Error::InvalidSize("bouquet disks need N >= 3".into()));
        }
        let i = i + 1;
        let vertex = move |k: usize| -> String {
            if k < 2 {
                format!("u{k}")
            } else {
                format!("d{i}.u{k}")
            }
        };
        let name = move |a: usize, b: usize| -> String {
            if (a, b) == (0, 1) {
                "s".into()
            } else if a == 0 && b < n - 1 {
                format!("d{i}.z{}", b - 1)
            } else if a == 0 {
                format!("d{i}.b{n}")
            } else {
                format!("d{i}.b{b}")
            }
        };
        let f = fan(n, vertex, name, move |k| format!("d{i}.s{k}"));
        for e in f.edges {
            if e.id == shared && edges.iter().any(|x| x.id == shared) {
                continue;
            }
            edges.push(e);
        }
        triangles.extend(f.triangles);
        disks.push(BouquetDisk {
            size: n,
            outer: f.boundary.into_iter().filter(|e| *e != shared).collect(),
            interior_order: f.interior_order,
        });
    }
    Ok(Bouquet {
        scenario: Scenario::new(edges, triangles)?,
        shared,
        disks,
    })
}

/// Edge-slot multiplicities per triangle: how often each edge fills a slot.
pub fn slot_multiplicity(s: &Scenario, t: usize) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for e in s.slots(t) {
        *m.entry(e).or_insert(0) += 1;
    }
    m
}
