mod common;

use rand::Rng;
use snc::graph::{code_space, GraphCode, OrientedGraph, VertexSet};
use snc::split_twin::{eligible_split_vertices, FamilyStatus};
use snc::{check_preservation, generate_family, split_twin_extend, SplitPolicy, SplitTwinSpec};

use common::{first_neighborhood, matrix_of, random_graph, rng, second_neighborhood_by_squaring};

/// Every `(A, B)` with `A + B = N1(x)`.
fn partitions(g: &OrientedGraph, x: usize) -> Vec<SplitTwinSpec> {
    let out: Vec<usize> = g.out_neighborhood(x).unwrap().iter().collect();
    (0u32..1 << out.len())
        .map(|mask| {
            let a: VertexSet = out.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let b = g.out_neighborhood(x).unwrap().difference(a);
            SplitTwinSpec { x, a, b }
        })
        .collect()
}

fn all_graphs(n: usize) -> impl Iterator<Item = OrientedGraph> {
    (0..code_space(n).unwrap()).map(move |i| GraphCode::new(n, i).unwrap().decode())
}

fn check_structure(g: &OrientedGraph, spec: &SplitTwinSpec) {
    let n = g.n();
    let x = spec.x;
    let ext = split_twin_extend(g, spec).unwrap();
    let h = &ext.graph;
    assert_eq!(h.n(), n + 1);
    assert_eq!(ext.relabeling.first_twin, x);
    assert_eq!(ext.relabeling.second_twin, n);
    for u in (0..n).filter(|&u| u != x) {
        assert_eq!(h.has_edge(u, x), g.has_edge(u, x));
        assert_eq!(h.has_edge(u, n), g.has_edge(u, x));
        for w in (0..n).filter(|&w| w != x) {
            assert_eq!(h.has_edge(u, w), g.has_edge(u, w));
        }
    }
    assert_eq!(h.out_neighborhood(x).unwrap(), spec.a);
    assert_eq!(h.out_neighborhood(n).unwrap(), spec.b);
    assert!(!h.has_edge(x, n) && !h.has_edge(n, x));
    let adj = matrix_of(h);
    for u in 0..=n {
        assert!(!adj[u][u]);
        for w in 0..=n {
            assert!(!(adj[u][w] && adj[w][u]));
        }
    }
}

#[test]
fn structure_exhaustive_up_to_4() {
    for n in 2..=4 {
        for g in all_graphs(n) {
            for x in 0..n {
                for spec in partitions(&g, x) {
                    check_structure(&g, &spec);
                }
            }
        }
    }
}

/// Checks one Lemma instance directly and through the oracle; returns
/// `false` when the hypotheses do not hold.
fn preservation_instance(g: &OrientedGraph, v: usize, spec: &SplitTwinSpec) -> bool {
    let hypotheses = v != spec.x
        && !g.out_neighborhood(v).unwrap().contains(spec.x)
        && g.vertex_report(v).unwrap().margin >= 0;
    let result = check_preservation(g, v, spec);
    if !hypotheses {
        assert!(result.is_err());
        return false;
    }
    let p = result.unwrap_or_else(|e| panic!("{e}"));
    assert!(p.first_unchanged() && p.second_not_smaller() && p.after.margin >= 0);

    let h = split_twin_extend(g, spec).unwrap().graph;
    let adj_g = matrix_of(g);
    let adj_h = matrix_of(&h);
    assert_eq!(first_neighborhood(&adj_h, v).len(), first_neighborhood(&adj_g, v).len());
    assert!(second_neighborhood_by_squaring(&adj_h, v).len() >= second_neighborhood_by_squaring(&adj_g, v).len());
    true
}

#[test]
fn preservation_exhaustive_up_to_4() {
    let mut applicable = 0;
    for n in 2..=4 {
        for g in all_graphs(n) {
            for v in 0..n {
                for x in 0..n {
                    for spec in partitions(&g, x) {
                        applicable += usize::from(preservation_instance(&g, v, &spec));
                    }
                }
            }
        }
    }
    assert!(applicable > 0);
}

#[test]
fn preservation_random_5_to_9() {
    let mut rng = rng(21);
    let mut applicable = 0;
    while applicable < 10_000 {
        let n = rng.gen_range(5..=9);
        let g = random_graph(&mut rng, n);
        let v = g.report().witness;
        let eligible: Vec<usize> = eligible_split_vertices(&g, v).unwrap().iter().collect();
        if eligible.is_empty() {
            continue;
        }
        let x = eligible[rng.gen_range(0..eligible.len())];
        let specs = partitions(&g, x);
        let spec = specs[rng.gen_range(0..specs.len())];
        assert!(preservation_instance(&g, v, &spec));
        applicable += 1;
    }
}

#[test]
fn families_stay_nonnegative() {
    let mut rng = rng(22);
    for trial in 0..40 {
        let n = rng.gen_range(3..=7);
        let seed = random_graph(&mut rng, n);
        let policy = if trial % 2 == 0 {
            SplitPolicy::FirstEligible
        } else {
            SplitPolicy::Random { seed: trial }
        };
        let family = generate_family(&seed, 30, policy).unwrap();
        assert_eq!(family.status, FamilyStatus::Complete);
        let mut order = seed.n();
        for (g, cert) in &family.steps {
            order += 1;
            assert_eq!(g.n(), order);
            assert!(g.report().delta >= 0);
            assert_eq!(cert.delta, g.report().delta);
            assert_eq!(g.vertex_report(cert.tracked_after).unwrap(), cert.tracked_report);
        }
    }
}
