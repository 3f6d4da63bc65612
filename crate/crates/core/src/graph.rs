//! One-dimensional measurement spaces: multigraphs with loops and parallel edges.
//!
//! Every edge has two endpoint slots `d0` and `d1` (the face maps of a
//! 1-simplex). Loops (`d0 == d1`) and parallel edges are allowed.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub d0: String,
    pub d1: String,
}

impl Edge {
    pub fn new(id: impl Into<String>, d0: impl Into<String>, d1: impl Into<String>) -> Self {
        Edge {
            id: id.into(),
            d0: d0.into(),
            d1: d1.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.d0 == self.d1
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// A graph with ordered vertex and edge sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.vertices, g.edges)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            vertices: g.vertices,
            edges: g.edges,
        }
    }
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge `{}`", e.id)));
            }
            for end in [&e.d0, &e.d1] {
                if !vertex_index.contains_key(end) {
                    return Err(Error::InvalidGraph(format!(
                        "edge `{}` references unknown vertex `{end}`",
                        e.id
                    )));
                }
            }
        }
        Ok(Graph {
            vertices,
            edges,
            vertex_index,
            edge_index,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    pub fn edge_position(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn vertex_position(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertex_index.contains_key(id)
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: &str) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.d0 == v) + usize::from(e.d1 == v))
            .sum()
    }

    /// Connected components, each in vertex order; components ordered by first vertex.
    pub fn components(&self) -> Vec<Vec<String>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for e in &self.edges {
            uf.union(self.vertex_index[&e.d0], self.vertex_index[&e.d1]);
        }
        let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let root = uf.find(i);
            let k = *slot.entry(root).or_insert_with(|| {
                groups.push((i, Vec::new()));
                groups.len() - 1
            });
            groups[k].1.push(v.clone());
        }
        groups.into_iter().map(|(_, g)| g).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Breadth-first spanning tree from the first vertex. Loops never enter the tree.
    pub fn spanning_tree(&self) -> Result<Vec<String>> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected(comps));
        }
        if self.vertices.is_empty() {
            return Ok(Vec::new());
        }
        let adjacency = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut tree = BTreeSet::new();
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(ei, w) in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    tree.insert(ei);
                    queue.push_back(w);
                }
            }
        }
        Ok(tree.into_iter().map(|i| self.edges[i].id.clone()).collect())
    }

    /// `|E| - |V| + #components`: the number of independent circles.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// All simple circles, each once up to rotation and reflection, sorted by
    /// their edge sequence.
    pub fn enumerate_circles(&self) -> Vec<Circle> {
        let adjacency = self.adjacency();
        let mut found = BTreeSet::new();
        for e in self.edges.iter().filter(|e| e.is_loop()) {
            found.insert(Circle {
                edges: vec![e.id.clone()],
                vertices: vec![e.d0.clone()],
            });
        }
        let n = self.vertices.len();
        for start in 0..n {
            let mut path_v = vec![start];
            let mut path_e: Vec<usize> = Vec::new();
            let mut on_path = vec![false; n];
            on_path[start] = true;
            self.circle_dfs(
                start,
                &adjacency,
                &mut path_v,
                &mut path_e,
                &mut on_path,
                &mut found,
            );
        }
        found.into_iter().collect()
    }

    fn circle_dfs(
        &self,
        start: usize,
        adjacency: &[Vec<(usize, usize)>],
        path_v: &mut Vec<usize>,
        path_e: &mut Vec<usize>,
        on_path: &mut [bool],
        found: &mut BTreeSet<Circle>,
    ) {
        let u = *path_v.last().unwrap();
        for &(ei, w) in &adjacency[u] {
            if path_e.contains(&ei) {
                continue;
            }
            if w == start && !path_e.is_empty() {
                let mut edges: Vec<usize> = path_e.clone();
                edges.push(ei);
                found.insert(self.normalized_circle(path_v, &edges));
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path_v.push(w);
                path_e.push(ei);
                self.circle_dfs(start, adjacency, path_v, path_e, on_path, found);
                path_e.pop();
                path_v.pop();
                on_path[w] = false;
            }
        }
    }

    fn normalized_circle(&self, vs: &[usize], es: &[usize]) -> Circle {
        let k = es.len();
        let mut best: Option<Circle> = None;
        for dir in [false, true] {
            // walk vs[i] -es[i]-> vs[i+1]; reversed walk uses the mirrored sequence
            let (v_seq, e_seq): (Vec<usize>, Vec<usize>) = if dir {
                let mut v: Vec<usize> = vec![vs[0]];
                v.extend(vs[1..].iter().rev());
                let e: Vec<usize> = es.iter().rev().copied().collect();
                (v, e)
            } else {
                (vs.to_vec(), es.to_vec())
            };
            for r in 0..k {
                let c = Circle {
                    edges: (0..k)
                        .map(|i| self.edges[e_seq[(r + i) % k]].id.clone())
                        .collect(),
                    vertices: (0..k)
                        .map(|i| self.vertices[v_seq[(r + i) % k]].clone())
                        .collect(),
                };
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
        best.unwrap()
    }

    /// For each vertex, incident non-loop edges as `(edge position, other end)` in edge order.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            let a = self.vertex_index[&e.d0];
            let b = self.vertex_index[&e.d1];
            adj[a].push((i, b));
            adj[b].push((i, a));
        }
        adj
    }

    /// Recognizes the shapes the circle-inequality checker supports.
    pub fn shape(&self) -> GraphShape {
        if self.vertices.is_empty() || !self.is_connected() {
            return GraphShape::Other;
        }
        let degrees: Vec<usize> = self.vertices.iter().map(|v| self.degree(v)).collect();
        if degrees.iter().all(|&d| d == 2) {
            return GraphShape::Circle;
        }
        if self.edges.iter().any(Edge::is_loop) {
            return GraphShape::Other;
        }
        let hubs: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] != 2).collect();
        if hubs.len() != 2 || degrees[hubs[0]] != degrees[hubs[1]] || degrees[hubs[0]] < 3 {
            return GraphShape::Other;
        }
        let k = degrees[hubs[0]];
        if self.cycle_rank() != k - 1 {
            return GraphShape::Other;
        }
        // every path leaving one hub must end at the other hub
        let adjacency = self.adjacency();
        let (v, w) = (hubs[0], hubs[1]);
        let mut petals = Vec::new();
        for &(first, next) in &adjacency[v] {
            let mut path = vec![self.edges[first].id.clone()];
            let (mut prev_edge, mut cur) = (first, next);
            while cur != w {
                if cur == v {
                    return GraphShape::Other;
                }
                let Some(&(e, nxt)) = adjacency[cur].iter().find(|(e, _)| *e != prev_edge) else {
                    return GraphShape::Other;
                };
                path.push(self.edges[e].id.clone());
                prev_edge = e;
                cur = nxt;
            }
            petals.push(path);
        }
        GraphShape::Flower {
            terminals: (self.vertices[v].clone(), self.vertices[w].clone()),
            petals,
        }
    }
}

/// A circle on a graph: `vertices[i]` and `vertices[i+1]` are the ends of `edges[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Circle {
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
}

impl Circle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphShape {
    Circle,
    /// Lines glued at both terminal vertices; each petal lists its edges from the first terminal.
    Flower {
        terminals: (String, String),
        petals: Vec<Vec<String>>,
    },
    Other,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

fn ensure_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSize(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// The N-circle: vertices `v0..`, edge `t{i}` joins `v{i-1}` to `v{i mod N}`.
/// `circle(1)` is a single loop.
pub fn circle(n: usize) -> Result<Graph> {
    ensure_positive(n, "circle length")?;
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (1..=n)
        .map(|i| Edge::new(format!("t{i}"), format!("v{}", i % n), format!("v{}", i - 1)))
        .collect();
    Graph::new(vertices, edges)
}

/// A path with N edges `t1..tN` through `v0..vN`.
pub fn line(n: usize) -> Result<Graph> {
    ensure_positive(n, "line length")?;
    let vertices = (0..=n).map(|i| format!("v{i}")).collect();
    let edges = (1..=n)
        .map(|i| Edge::new(format!("t{i}"), format!("v{i}"), format!("v{}", i - 1)))
        .collect();
    Graph::new(vertices, edges)
}

/// n loops `t1..tn` at the single vertex `v`.
pub fn wedge_circles(n: usize) -> Result<Graph> {
    ensure_positive(n, "number of circles")?;
    let edges = (1..=n)
        .map(|i| Edge::new(format!("t{i}"), "v", "v"))
        .collect();
    Graph::new(vec!["v".into()], edges)
}

/// Lines of lengths `sizes` glued at their terminal vertices `v` and `w`.
///
/// Petal `i` (1-based) runs `v -> p{i}_1 -> ... -> w` through edges `e{i}_1..e{i}_{N_i}`.
pub fn flower(sizes: &[usize]) -> Result<Graph> {
    if sizes.len() < 2 {
        return Err(Error::InvalidSize("a flower needs at least two petals".into()));
    }
    for &s in sizes {
        ensure_positive(s, "petal length")?;
    }
    let mut vertices = vec!["v".to_string(), "w".to_string()];
    let mut edges = Vec::new();
    for (i, &len) in sizes.iter().enumerate() {
        let i = i + 1;
        let node = |k: usize| -> String {
            if k == 0 {
                "v".into()
            } else if k == len {
                "w".into()
            } else {
                format!("p{i}_{k}")
            }
        };
        for k in 1..len {
            vertices.push(node(k));
        }
        for k in 1..=len {
            edges.push(Edge::new(format!("e{i}_{k}"), node(k), node(k - 1)));
        }
    }
    Graph::new(vertices, edges)
}

/// K_{m,n} with vertices `v0..`, `w0..` and edges `t{i}{j}` (`d0 = v_i`, `d1 = w_j`).
pub fn complete_bipartite(m: usize, n: usize) -> Result<Graph> {
    ensure_positive(m, "left part size")?;
    ensure_positive(n, "right part size")?;
    let wide = m > 10 || n > 10;
    let mut vertices: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
    vertices.extend((0..n).map(|j| format!("w{j}")));
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let id = if wide {
                format!("t{i}_{j}")
            } else {
                format!("t{i}{j}")
            };
            edges.push(Edge::new(id, format!("v{i}"), format!("w{j}")));
        }
    }
    Graph::new(vertices, edges)
}
