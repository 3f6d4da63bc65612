use ctxlab::graph::{wedge_circles, Edge, Graph, GraphShape};
use ctxlab::scenario::{classical_disk, cone};
use ctxlab::collapse;
use proptest::prelude::*;

/// A connected multigraph: a path through every vertex plus extra edges (loops allowed).
fn connected_graph() -> impl Strategy<Value = Graph> {
    (1usize..6, prop::collection::vec((0usize..6, 0usize..6), 0..5)).prop_map(|(n, extra)| {
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges: Vec<Edge> = (1..n)
            .map(|i| Edge::new(format!("p{i}"), format!("v{i}"), format!("v{}", i - 1)))
            .collect();
        for (k, (a, b)) in extra.into_iter().enumerate() {
            edges.push(Edge::new(format!("x{k}"), format!("v{}", a % n), format!("v{}", b % n)));
        }
        Graph::new(vertices, edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cone_sizes(g in connected_graph()) {
        let s = cone(&g);
        prop_assert_eq!(s.triangles().len(), g.edges().len());
        prop_assert_eq!(s.num_edges(), g.edges().len() + g.vertices().len());
    }

    #[test]
    fn spanning_tree_quotient_is_a_wedge(g in connected_graph()) {
        let tree = g.spanning_tree().unwrap();
        prop_assert_eq!(tree.len(), g.vertices().len() - 1);
        let q = collapse(&g, &tree).unwrap().target;
        prop_assert_eq!(q.cycle_rank(), g.cycle_rank());
        prop_assert_eq!(q.vertices().len(), 1);
        if g.cycle_rank() > 0 {
            prop_assert_eq!(q.edges().len(), wedge_circles(g.cycle_rank()).unwrap().edges().len());
        } else {
            prop_assert!(q.edges().is_empty());
        }
        prop_assert!(q.edges().iter().all(Edge::is_loop));
    }

    #[test]
    fn collapse_composes(g in connected_graph(), i in 0usize..8, j in 0usize..8) {
        let tree = g.spanning_tree().unwrap();
        prop_assume!(tree.len() >= 2);
        let (a, b) = (&tree[i % tree.len()], &tree[j % tree.len()]);
        prop_assume!(a != b);
        let joint = collapse(&g, &[a, b]).unwrap();
        let first = collapse(&g, &[a]).unwrap();
        let second = collapse(&first.target, &[b]).unwrap();
        prop_assert_eq!(&joint.target, &second.target);
        for v in g.vertices() {
            prop_assert_eq!(joint.vertex(v), second.vertex(first.vertex(v)));
        }
    }
}

#[test]
fn disk_boundary_is_a_circle() {
    for n in 3..=9 {
        let b = classical_disk(n).unwrap().boundary_graph();
        assert_eq!(b.edges().len(), n);
        assert_eq!(b.vertices().len(), n);
        assert!(b.is_connected());
        assert!(b.vertices().iter().all(|v| b.degree(v) == 2));
        assert_eq!(b.shape(), GraphShape::Circle);
    }
}
