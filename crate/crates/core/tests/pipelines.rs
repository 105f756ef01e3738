mod common;

use std::collections::BTreeMap;

use rand::Rng;
use starfactor::general::{
    audit_assignment_graph, audit_fixpoint, audit_late, audit_special, choose_special, run_general, run_rules,
    spot_check_expansion, GeneralConfig, HighSplit, Overrides,
};
use starfactor::generators::{complete_bipartite, random_regular};
use starfactor::regular::{pick_centers_regular, star_factor_regular, RegularConfig};
use starfactor::verify::{is_dominating, validate_star_factor};
use starfactor::{Error, Graph, StarFactor, VertexSet};

fn assert_valid_and_dominating(g: &Graph, sf: &StarFactor) {
    let r = validate_star_factor(g, sf, 1);
    assert!(r.valid, "{:?}", r.violations);
    let centers = VertexSet::from_iter(g.vertex_count(), sf.stars.keys().copied());
    assert!(is_dominating(g, &centers));
}

#[test]
fn regular_on_k12() {
    let g = Graph::complete(12);
    let sol = star_factor_regular(&g, &RegularConfig::new(11, 1)).unwrap();
    assert_valid_and_dominating(&g, &sol.factor);
}

#[test]
fn regular_rejects_small_d() {
    let g = random_regular(20, 5, 0, 1000).unwrap();
    assert_eq!(
        star_factor_regular(&g, &RegularConfig::new(5, 0)).unwrap_err(),
        Error::Phase {
            phase: "centers",
            source: Box::new(Error::DegreeTooSmall { d: 5, min: 11 })
        }
    );
}

#[test]
fn centers_of_32_regular() {
    let g = random_regular(256, 32, 3, 1000).unwrap();
    let cfg = RegularConfig::new(32, 3);
    assert_eq!((6.0 + 6.0 * 32f64.ln()).floor(), 26.0);
    let c = pick_centers_regular(&g, &cfg).unwrap();
    for v in 0..256 {
        let k = c.centers.count_in(g.neighbors(v));
        assert!((1..=26).contains(&k), "vertex {v} sees {k}");
    }
}

#[test]
fn regular_2048_examples() {
    for (d, floor) in [(64usize, 1usize), (128, 2)] {
        let df = d as f64;
        let formula = ((df - 6.0 - 6.0 * df.ln()) / (6.0 + 6.0 * df.ln())).floor() as usize;
        assert_eq!(formula.max(1), floor);
        let g = random_regular(2048, d, 5, 1000).unwrap();
        let cfg = RegularConfig::new(d, 5);
        let sol = star_factor_regular(&g, &cfg).unwrap();
        assert_valid_and_dominating(&g, &sol.factor);
        assert!(sol.report.fallbacks.is_empty(), "{:?}", sol.report.fallbacks);
        assert!(sol.report.min_star >= floor);
        assert!(sol.report.min_star >= sol.report.quota_achieved);
        let c = pick_centers_regular(&g, &cfg).unwrap();
        assert_eq!(c.centers.to_vec(), sol.factor.stars.keys().copied().collect::<Vec<_>>());
    }
}

#[allow(clippy::needless_range_loop)]
/// Rules applied literally: full ascending passes, (a) before (b), until a
/// pass changes nothing.
fn rules_by_passes(
    gp: &Graph,
    high: &VertexSet,
    special: &VertexSet,
    rule_d: f64,
    leaf_bound: f64,
) -> (VertexSet, VertexSet, Vec<Option<usize>>) {
    let n = gp.vertex_count();
    let mut c = high.clone();
    let mut l = VertexSet::new(n);
    let mut labels = vec![None; n];
    let mut t = 0;
    loop {
        let mut changed = false;
        for v in 0..n {
            if special.contains(v) || c.contains(v) || l.contains(v) {
                continue;
            }
            let out_c = gp.neighbors(v).iter().filter(|&&u| !c.contains(u)).count() as f64;
            let out_l = gp.neighbors(v).iter().filter(|&&u| !l.contains(u)).count() as f64;
            if out_c <= rule_d {
                l.insert(v);
            } else if out_l <= leaf_bound {
                c.insert(v);
            } else {
                continue;
            }
            t += 1;
            labels[v] = Some(t);
            changed = true;
        }
        if !changed {
            return (c, l, labels);
        }
    }
}

#[test]
fn rules_match_literal_passes() {
    let mut rng = common::rng(31);
    for _ in 0..300 {
        let n = rng.gen_range(5..40);
        let g = common::random_connected(n, rng.gen_range(0.05..0.7), &mut rng);
        let high = VertexSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.1)));
        let special = VertexSet::from_iter(n, (0..n).filter(|&v| !high.contains(v) && rng.gen_bool(0.1)));
        let gp = g.without_vertices(&special);
        let cfg = GeneralConfig {
            overrides: Overrides {
                rule_d: Some(rng.gen_range(0.0..6.0)),
                ..Overrides::default()
            },
            ..GeneralConfig::new(rng.gen_range(21..60), 0)
        };
        let state = run_rules(&gp, &high, &special, &cfg);
        let (c, l, labels) = rules_by_passes(&gp, &high, &special, cfg.rule_d(), cfg.leaf_rule_bound());
        assert_eq!(state.centers, c);
        assert_eq!(state.leaves, l);
        assert_eq!(state.labels, labels);
        assert_eq!(state.t0, labels.iter().flatten().count());
        audit_fixpoint(&state, &cfg).unwrap();
        for v in state.free.iter() {
            assert!(!special.contains(v) && !c.contains(v) && !l.contains(v));
        }
    }
}

#[test]
fn rules_on_complete_graph_with_large_d() {
    let g = Graph::complete(25);
    let cfg = GeneralConfig {
        overrides: Overrides {
            rule_d: Some(24.0),
            ..Overrides::default()
        },
        ..GeneralConfig::new(24, 0)
    };
    let none = VertexSet::new(25);
    let state = run_rules(&g, &none, &none, &cfg);
    // With C empty every vertex has 24 <= D neighbours outside C, so (a) fires in id order.
    assert_eq!(state.leaves.len(), 25);
    assert!(state.free.is_empty());
    assert_eq!(state.labels, (1..=25).map(Some).collect::<Vec<_>>());
    assert_eq!(state.t0, 25);
}

#[test]
fn rules_with_everything_high() {
    let g = Graph::complete(6);
    let all = VertexSet::from_iter(6, 0..6);
    let state = run_rules(&g, &all, &VertexSet::new(6), &GeneralConfig::new(21, 0));
    assert!(state.free.is_empty() && state.leaves.is_empty());
    assert_eq!(state.t0, 0);
}

#[test]
fn special_choice_lands_in_a_satisfying_subset() {
    // 0 is high with block 1..=8; 9 sees block vertices 1..=4 and fillers 10..=13.
    let mut edges: Vec<(usize, usize)> = (1..=8).map(|v| (0, v)).collect();
    edges.extend((1..=4).map(|v| (9, v)));
    edges.extend((10..=13).map(|v| (9, v)));
    let g = Graph::from_edges(14, edges).unwrap();
    let split = HighSplit {
        high: VertexSet::from_iter(14, [0]),
        blocks: BTreeMap::from([(0, (1..=8).collect())]),
        quota_requested: 8,
        quota_achieved: 8,
        fallbacks: Vec::new(),
    };
    let cfg = GeneralConfig {
        overrides: Overrides {
            special_min: Some(2),
            ..Overrides::default()
        },
        ..GeneralConfig::new(21, 0)
    };
    assert_eq!(cfg.special_keep(), 7.0);
    // Kept set S as a bitmask over the block: >= 2 kept, and 9 keeps >= 7 of its 8 neighbours.
    let satisfying: Vec<u32> = (0u32..256)
        .filter(|m| m.count_ones() >= 2 && (m & 0b1111).count_ones() <= 1)
        .collect();
    assert!(!satisfying.is_empty());
    for seed in 0..50 {
        let s = choose_special(&g, &split, &cfg, seed).unwrap().special;
        let mask = (1..=8).filter(|&v| s.contains(v)).fold(0u32, |m, v| m | 1 << (v - 1));
        assert_eq!(s.len(), mask.count_ones() as usize);
        assert!(satisfying.contains(&mask), "seed {seed}: {mask:08b}");
    }
}

fn audit_all(g: &Graph, cfg: &GeneralConfig) -> starfactor::regular::Solution {
    let run = run_general(g, cfg).unwrap();
    audit_special(&run.pruned, &run.split, &run.state.special, cfg).unwrap();
    audit_fixpoint(&run.state, cfg).unwrap();
    audit_late(&run.state, cfg).unwrap();
    audit_assignment_graph(&run.state, &run.assignment_graph, cfg).unwrap();
    spot_check_expansion(
        &run.assignment_graph.graph,
        run.solution.report.quota_achieved,
        1000,
        cfg.seed,
    )
    .unwrap();
    assert_valid_and_dominating(g, &run.solution.factor);
    run.solution
}

#[test]
fn general_on_k25() {
    let g = Graph::complete(25);
    let sol = starfactor::general::star_factor_general(&g, &GeneralConfig::new(24, 2)).unwrap();
    assert_valid_and_dominating(&g, &sol.factor);
}

#[test]
fn general_on_k64_10000() {
    let g = complete_bipartite(64, 10_000).unwrap();
    let sol = audit_all(&g, &GeneralConfig::new(64, 2));
    assert_eq!(sol.report.high, Some(64));
    assert!(sol.factor.stars.keys().all(|&c| c < 64));
    assert!(sol.report.min_star >= 1);
}

#[test]
fn general_on_64_regular() {
    let g = random_regular(4096, 64, 9, 1000).unwrap();
    let cfg = GeneralConfig::new(64, 9);
    let bound = (64f64 / 64f64.ln()).cbrt() / 16.0;
    assert_eq!(bound.floor().max(1.0), 1.0);
    let sol = audit_all(&g, &cfg);
    assert!(sol.report.min_star >= 1);
}

#[test]
fn general_rejects_small_d() {
    let g = complete_bipartite(3, 8).unwrap();
    assert!(matches!(
        starfactor::general::star_factor_general(&g, &GeneralConfig::new(3, 0)),
        Err(Error::DegreeTooSmall { d: 3, min: 21 })
    ));
}
