mod common;

use starfactor::bmatch::{quota_matching, BipGraph};
use starfactor::generators::{
    complete_bipartite, is_prime, paley_bipartite, paley_prime_for_degree, paley_regular, quadratic_residues,
    random_regular, spanning_regular_subgraph,
};
use starfactor::Graph;

fn assert_simple_regular(g: &Graph, n: usize, d: usize) {
    assert_eq!(g.vertex_count(), n);
    for v in 0..n {
        assert_eq!(g.degree(v), d, "vertex {v}");
        assert!(!g.neighbors(v).contains(&v));
        assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn random_regular_fifty_seeds() {
    for d in [3, 4, 8] {
        for seed in 0..50 {
            let g = random_regular(100, d, seed, 1000).unwrap();
            assert_simple_regular(&g, 100, d);
        }
    }
}

#[test]
fn random_regular_forced_and_seeded() {
    assert_eq!(random_regular(4, 3, 9, 100).unwrap(), Graph::complete(4));
    assert_eq!(random_regular(6, 5, 9, 100).unwrap(), Graph::complete(6));
    let a = random_regular(16, 3, 7, 100).unwrap();
    assert_simple_regular(&a, 16, 3);
    assert_eq!(a, random_regular(16, 3, 7, 100).unwrap());
    assert!(random_regular(5, 3, 0, 10).is_err());
    assert!(random_regular(4, 4, 0, 10).is_err());
}

#[test]
fn random_regular_is_not_one_fixed_graph() {
    let graphs: std::collections::BTreeSet<String> = (0..10)
        .map(|s| random_regular(30, 4, s, 1000).unwrap().to_edge_list())
        .collect();
    assert!(graphs.len() > 5);
}

/// Non-residues by squaring every element, independent of the library.
fn non_residues(p: u64) -> Vec<u64> {
    let squares: std::collections::BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
    (1..p).filter(|x| !squares.contains(x)).collect()
}

#[test]
fn paley_matches_definition() {
    for p in [5u64, 13, 17, 29] {
        let g = paley_bipartite(p).unwrap();
        let nr = non_residues(p);
        let pu = p as usize;
        assert_eq!(g.vertex_count(), 2 * pu);
        assert!(g.bipartition().is_some());
        for a in 0..pu {
            for b in 0..pu {
                let expect = nr.contains(&((a as u64 + p - b as u64) % p));
                assert_eq!(g.has_edge(a, pu + b), expect, "p={p} a={a} b={b}");
            }
            assert!(g.neighbors(a).iter().all(|&u| u >= pu));
        }
        assert_eq!(g.regular_degree(), Some((pu - 1) / 2));
        let qr = quadratic_residues(p);
        assert!(nr.iter().all(|&x| !qr[x as usize]));
    }
}

#[test]
fn paley_13_vertex_zero() {
    assert_eq!(non_residues(13), vec![2, 5, 6, 7, 8, 11]);
    let g = paley_bipartite(13).unwrap();
    let labels: Vec<usize> = g.neighbors(0).iter().map(|&u| u - 13).collect();
    assert_eq!(labels, vec![2, 5, 6, 7, 8, 11]);
}

#[test]
fn paley_rejects_non_primes() {
    for p in [0u64, 1, 2, 4, 9, 15] {
        assert!(paley_bipartite(p).is_err(), "p={p}");
    }
    let primes: Vec<u64> = (0..40).filter(|&p| is_prime(p)).collect();
    assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
}

#[test]
fn paley_prime_policy() {
    assert_eq!(paley_prime_for_degree(6), 13);
    assert_eq!(paley_prime_for_degree(7), 17);
    assert_eq!(paley_prime_for_degree(14), 29);
    let (p, g) = paley_regular(7, 3).unwrap();
    assert_eq!(p, 17);
    assert_simple_regular(&g, 34, 7);
}

#[test]
fn spanning_subgraphs() {
    let k33 = complete_bipartite(3, 3).unwrap();
    let m = spanning_regular_subgraph(&k33, 1, 0).unwrap();
    assert_eq!(m.edge_count(), 3);
    assert_simple_regular(&m, 6, 1);
    assert_eq!(spanning_regular_subgraph(&k33, 3, 0).unwrap(), k33);

    let p13 = paley_bipartite(13).unwrap();
    for seed in 0..10 {
        let h = spanning_regular_subgraph(&p13, 4, seed).unwrap();
        assert_simple_regular(&h, 26, 4);
        assert!(h.edges().all(|(u, v)| p13.has_edge(u, v)));
    }
    assert!(spanning_regular_subgraph(&p13, 7, 0).is_err());
    assert!(spanning_regular_subgraph(&Graph::complete(4), 1, 0).is_err());
}

#[test]
fn complete_bipartite_shapes() {
    let e = complete_bipartite(1, 1).unwrap();
    assert_eq!(e.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    let g = complete_bipartite(3, 8).unwrap();
    assert_eq!(g.edge_count(), 24);
    assert!((0..3).all(|v| g.degree(v) == 8));
    assert!((3..11).all(|v| g.degree(v) == 3));
    assert_eq!(complete_bipartite(64, 10_000).unwrap().min_degree().unwrap(), 64);
    assert!(complete_bipartite(0, 3).is_err());
}

#[test]
fn paley_halves_have_perfect_matchings() {
    let g = paley_bipartite(29).unwrap();
    let b = BipGraph::from_adjacency(
        29,
        (0..29)
            .map(|a| g.neighbors(a).iter().map(|&u| u - 29).collect())
            .collect(),
    )
    .unwrap();
    assert!(quota_matching(&b, 1).is_assigned());
}
