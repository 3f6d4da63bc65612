mod common;

use std::collections::{BTreeMap, BTreeSet};

use ctxlab::bell::{self, Certification, ConePushforward};
use ctxlab::distribution::{deterministic_enumerate, g_pm_classify, p_pm_element, Sign};
use ctxlab::graph::{circle, complete_bipartite, flower, wedge_circles, Graph};
use ctxlab::polytope::{h_representation, is_noncontextual_lp};
use ctxlab::rational::int;
use ctxlab::scenario::{cone, cone_edge_id};
use ctxlab::{collapse, LinearInequality, Rational, Verdict};
use proptest::prelude::*;
use std::sync::Arc;

fn collapses() -> Vec<ConePushforward> {
    let k33 = complete_bipartite(3, 3).unwrap();
    vec![
        ConePushforward::new(collapse(&circle(4).unwrap(), &["t4"]).unwrap()),
        ConePushforward::new(collapse(&circle(5).unwrap(), &["t1", "t3"]).unwrap()),
        ConePushforward::new(collapse(&flower(&[2, 2]).unwrap(), &["e1_1"]).unwrap()),
        ConePushforward::new(collapse(&k33, &["t22"]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pushforward_is_injective(k in 0usize..4, seed in any::<u64>()) {
        let pf = &collapses()[k];
        let mut rng = common::rng(seed);
        let p = common::sample_valid(&mut rng, &pf.target);
        let q = common::sample_valid(&mut rng, &pf.target);
        let (fp, fq) = (pf.distribution(&p).unwrap(), pf.distribution(&q).unwrap());
        prop_assert!(fp.is_valid());
        prop_assert_eq!(p == q, fp == fq);
    }
}

#[test]
fn wedge_vertices_push_to_contextual_vertices() {
    let g = circle(4).unwrap();
    let pf = ConePushforward::new(collapse(&g, &g.spanning_tree().unwrap()).unwrap());
    let h = h_representation(&pf.source);
    let loops: Vec<String> = pf.base.target.edges().iter().map(|e| e.id.clone()).collect();
    let signs: BTreeMap<String, Sign> = loops.iter().map(|e| (e.clone(), Sign::Minus)).collect();
    let w = p_pm_element(&pf.target, &signs).unwrap();
    assert_eq!(is_noncontextual_lp(&w).unwrap().verdict, Verdict::Contextual);
    let v = pf.distribution(&w).unwrap();
    assert!(h.is_vertex(&v));
    assert_eq!(is_noncontextual_lp(&v).unwrap().verdict, Verdict::Contextual);
}

fn g_pm(g: &Graph) -> BTreeSet<Vec<Rational>> {
    let s = Arc::new(cone(g));
    let n = g.edges().len();
    (0u32..1 << n)
        .map(|mask| {
            let signs = g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| (e.id.clone(), if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus }))
                .collect();
            p_pm_element(&s, &signs).unwrap().values().to_vec()
        })
        .collect()
}

#[test]
fn generated_vertices_are_g_pm_without_the_plus_coset() {
    for g in [
        circle(3).unwrap(),
        circle(4).unwrap(),
        wedge_circles(2).unwrap(),
        complete_bipartite(2, 2).unwrap(),
        flower(&[2, 2]).unwrap(),
    ] {
        let s = Arc::new(cone(&g));
        let plus: BTreeMap<String, Sign> = g.edges().iter().map(|e| (e.id.clone(), Sign::Plus)).collect();
        let e_plus = p_pm_element(&s, &plus).unwrap();
        let coset: BTreeSet<Vec<Rational>> = deterministic_enumerate(&s)
            .unwrap()
            .iter()
            .map(|d| e_plus.product(&d.to_distribution()).unwrap().values().to_vec())
            .collect();
        let expected: BTreeSet<_> = g_pm(&g).difference(&coset).cloned().collect();
        let generated = bell::generate_contextual_vertices(&g, Certification::Full).unwrap();
        let got: BTreeSet<_> = generated.iter().map(|v| v.distribution.values().to_vec()).collect();
        assert_eq!(got, expected);
        for v in &generated {
            assert_eq!(g_pm_classify(&v.distribution).unwrap(), Verdict::Contextual);
        }
    }
}

fn froissart_edge_row() -> LinearInequality {
    let mut c: Vec<(String, i64)> = ["t02", "t10"].iter().map(|e| (e.to_string(), 1)).collect();
    for e in ["t00", "t01", "t22", "t21", "t20", "t11"] {
        c.push((e.to_string(), -1));
    }
    for v in ["v0", "w0", "v2", "w1"] {
        c.push((cone_edge_id(v), -1));
    }
    LinearInequality::new(c.into_iter().map(|(e, k)| (e, int(k))), int(-6))
}

#[test]
fn froissart_edge_row_range_on_deterministic_points() {
    let s = Arc::new(cone(&complete_bipartite(3, 3).unwrap()));
    let row = froissart_edge_row();
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for d in deterministic_enumerate(&s).unwrap() {
        let p = d.to_distribution();
        *counts.entry(p.slack(&row).unwrap() + &row.rhs).or_default() += 1;
    }
    let expected: BTreeMap<Rational, usize> =
        [(int(-8), 4), (int(-6), 12), (int(-4), 28), (int(-2), 20)].into();
    assert_eq!(counts, expected);
    let g = complete_bipartite(3, 3).unwrap();
    assert!(!bell::loop_support_check(&row, &g));
}
