//! Collapsing a forest of edges of a graph to points.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, UnionFind};

/// A quotient map `source -> target` contracting a forest.
///
/// `edge_map` sends collapsed edges to `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseMap {
    pub source: Graph,
    pub target: Graph,
    pub edge_map: BTreeMap<String, Option<String>>,
    pub vertex_map: BTreeMap<String, String>,
}

impl CollapseMap {
    pub fn identity(g: &Graph) -> Self {
        collapse(g, &[] as &[&str]).expect("empty collapse")
    }

    pub fn collapsed_edges(&self) -> Vec<String> {
        self.source
            .edges()
            .iter()
            .filter(|e| self.edge_map[&e.id].is_none())
            .map(|e| e.id.clone())
            .collect()
    }

    pub fn is_collapsed(&self, edge: &str) -> bool {
        matches!(self.edge_map.get(edge), Some(None))
    }

    pub fn vertex(&self, v: &str) -> &str {
        &self.vertex_map[v]
    }
}

/// Contracts `edges` (which must span no circle, loops included) to points.
///
/// Each merged vertex is named after the smallest source vertex id in its class.
pub fn collapse<S: AsRef<str>>(g: &Graph, edges: &[S]) -> Result<CollapseMap> {
    let mut uf = UnionFind::new(g.vertices().len());
    let mut chosen = BTreeSet::new();
    for id in edges {
        let id = id.as_ref();
        let e = g.edge(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))?;
        if !chosen.insert(id.to_string()) {
            continue;
        }
        if e.is_loop() {
            return Err(Error::InvalidCollapse(format!("`{id}` is a loop")));
        }
        let a = g.vertex_position(&e.d0).unwrap();
        let b = g.vertex_position(&e.d1).unwrap();
        if !uf.union(a, b) {
            return Err(Error::InvalidCollapse(format!(
                "collapsing `{id}` would close a circle"
            )));
        }
    }
    let mut rep: BTreeMap<usize, &String> = BTreeMap::new();
    for (i, v) in g.vertices().iter().enumerate() {
        let root = uf.find(i);
        let slot = rep.entry(root).or_insert(v);
        if v < *slot {
            *slot = v;
        }
    }
    let mut vertex_map = BTreeMap::new();
    let mut target_vertices = Vec::new();
    for (i, v) in g.vertices().iter().enumerate() {
        let r = rep[&uf.find(i)].clone();
        if !target_vertices.contains(&r) {
            target_vertices.push(r.clone());
        }
        vertex_map.insert(v.clone(), r);
    }
    // keep target vertices in source order of their representatives
    target_vertices.sort_by_key(|v| g.vertex_position(v).unwrap());
    let mut edge_map = BTreeMap::new();
    let mut target_edges = Vec::new();
    for e in g.edges() {
        if chosen.contains(&e.id) {
            edge_map.insert(e.id.clone(), None);
        } else {
            edge_map.insert(e.id.clone(), Some(e.id.clone()));
            target_edges.push(Edge::new(&e.id, &vertex_map[&e.d0], &vertex_map[&e.d1]));
        }
    }
    Ok(CollapseMap {
        source: g.clone(),
        target: Graph::new(target_vertices, target_edges)?,
        edge_map,
        vertex_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circle, complete_bipartite, flower, GraphShape};

    #[test]
    fn collapse_square_edge() {
        let g = complete_bipartite(2, 2).unwrap();
        let cm = collapse(&g, &["t11"]).unwrap();
        assert_eq!(cm.target.vertices().len(), 3);
        assert_eq!(cm.target.edges().len(), 3);
        assert_eq!(cm.target.shape(), GraphShape::Circle);
        assert_eq!(cm.vertex("w1"), "v1");
        assert!(cm.is_collapsed("t11"));
    }

    #[test]
    fn collapse_k33_edge() {
        let g = complete_bipartite(3, 3).unwrap();
        let cm = collapse(&g, &["t22"]).unwrap();
        assert_eq!(cm.target.vertices().len(), 5);
        assert_eq!(cm.target.edges().len(), 8);
        assert_eq!(cm.vertex("w2"), "v2");
        assert_eq!(cm.target.cycle_rank(), 4);
    }

    #[test]
    fn identity_and_rejections() {
        let g = circle(3).unwrap();
        let id = CollapseMap::identity(&g);
        assert_eq!(id.target, g);
        assert!(collapse(&circle(1).unwrap(), &["t1"]).is_err());
        assert!(collapse(&g, &["t1", "t2", "t3"]).is_err());
        assert!(collapse(&g, &["nope"]).is_err());
    }

    #[test]
    fn tree_quotient_is_a_wedge() {
        for g in [
            complete_bipartite(3, 3).unwrap(),
            flower(&[2, 3, 1]).unwrap(),
            circle(6).unwrap(),
        ] {
            let tree = g.spanning_tree().unwrap();
            let cm = collapse(&g, &tree).unwrap();
            assert_eq!(cm.target.vertices().len(), 1);
            assert_eq!(cm.target.edges().len(), g.cycle_rank());
            assert!(cm.target.edges().iter().all(|e| e.is_loop()));
        }
    }

    #[test]
    fn sequential_equals_joint() {
        let g = complete_bipartite(3, 3).unwrap();
        let joint = collapse(&g, &["t00", "t11"]).unwrap();
        let first = collapse(&g, &["t00"]).unwrap();
        let second = collapse(&first.target, &["t11"]).unwrap();
        assert_eq!(joint.target, second.target);
    }
}
