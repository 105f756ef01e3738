mod common;

use proptest::prelude::*;
use rand::Rng;
use starfactor::bmatch::{
    assignment_is_sound, max_uniform_quota, maximum_matching, quota_matching, BipGraph, QuotaOutcome,
};

/// Backtracking search for `q` private right vertices per left vertex.
fn brute_feasible(adj: &[Vec<usize>], right: usize, q: usize) -> bool {
    fn go(adj: &[Vec<usize>], i: usize, need: usize, q: usize, start: usize, used: &mut [bool]) -> bool {
        if i == adj.len() {
            return true;
        }
        if need == 0 {
            return go(adj, i + 1, q, q, 0, used);
        }
        for k in start..adj[i].len() {
            let r = adj[i][k];
            if !used[r] {
                used[r] = true;
                if go(adj, i, need - 1, q, k + 1, used) {
                    return true;
                }
                used[r] = false;
            }
        }
        false
    }
    go(adj, 0, q, q, 0, &mut vec![false; right])
}

/// Hall's condition over every left subset.
fn hall_holds(adj: &[Vec<usize>], right: usize, q: usize) -> bool {
    (1u32..1 << adj.len()).all(|mask| {
        let mut seen = vec![false; right];
        let mut size = 0;
        for (i, row) in adj.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for &r in row {
                    if !seen[r] {
                        seen[r] = true;
                        size += 1;
                    }
                }
            }
        }
        size >= q * mask.count_ones() as usize
    })
}

fn random_instance(rng: &mut rand_chacha::ChaCha8Rng) -> (Vec<Vec<usize>>, usize) {
    let left = rng.gen_range(1..=10);
    let right = rng.gen_range(1..=12);
    let density = rng.gen_range(0.1..0.9);
    let adj = (0..left)
        .map(|_| (0..right).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    (adj, right)
}

fn neighbourhood(adj: &[Vec<usize>], xs: &[usize]) -> usize {
    let set: std::collections::BTreeSet<usize> = xs.iter().flat_map(|&x| adj[x].iter().copied()).collect();
    set.len()
}

#[test]
fn agrees_with_brute_force_on_500_instances() {
    let mut rng = common::rng(2024);
    let (mut feasible, mut infeasible) = (0, 0);
    for _ in 0..500 {
        let (adj, right) = random_instance(&mut rng);
        let q = rng.gen_range(1..=3);
        let b = BipGraph::from_adjacency(right, adj.clone()).unwrap();
        let expect = brute_feasible(&adj, right, q);
        assert_eq!(expect, hall_holds(&adj, right, q));
        match quota_matching(&b, q) {
            QuotaOutcome::Assigned(a) => {
                assert!(expect, "{adj:?} q={q}");
                assert!(assignment_is_sound(&b, &a));
                let owned = a.owned(adj.len());
                for (i, rs) in owned.iter().enumerate() {
                    assert_eq!(rs.len(), q);
                    assert!(rs.iter().all(|r| adj[i].contains(r)));
                }
                feasible += 1;
            }
            QuotaOutcome::Deficient(c) => {
                assert!(!expect, "{adj:?} q={q}");
                assert!(!c.violator.is_empty());
                let nx = neighbourhood(&adj, &c.violator);
                assert_eq!(nx, c.neighborhood_size);
                assert!(nx < q * c.violator.len());
                assert!(c.verify(&b));
                infeasible += 1;
            }
        }
    }
    assert!(feasible > 50 && infeasible > 50, "{feasible} / {infeasible}");
}

#[test]
fn eight_by_twenty_quota_two() {
    let mut rng = common::rng(8);
    for _ in 0..100 {
        let density = rng.gen_range(0.1..0.5);
        let adj: Vec<Vec<usize>> = (0..8)
            .map(|_| (0..20).filter(|_| rng.gen_bool(density)).collect())
            .collect();
        let b = BipGraph::from_adjacency(20, adj.clone()).unwrap();
        assert_eq!(quota_matching(&b, 2).is_assigned(), brute_feasible(&adj, 20, 2));
    }
}

#[test]
fn small_examples() {
    let k33 = BipGraph::new(3, 3, (0..3).flat_map(|l| (0..3).map(move |r| (l, r)))).unwrap();
    let a = quota_matching(&k33, 1).assignment().unwrap();
    assert_eq!(a.owned(3).iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1, 1]);
    assert_eq!(max_uniform_quota(&k33), 1);

    let fan = BipGraph::new(1, 3, [(0, 0), (0, 1), (0, 2)]).unwrap();
    assert_eq!(
        quota_matching(&fan, 3).assignment().unwrap().owned(1),
        vec![vec![0, 1, 2]]
    );
    let fan5 = BipGraph::new(1, 5, (0..5).map(|r| (0, r))).unwrap();
    assert_eq!(max_uniform_quota(&fan5), 5);

    let pinch = BipGraph::new(2, 1, [(0, 0), (1, 0)]).unwrap();
    match quota_matching(&pinch, 1) {
        QuotaOutcome::Deficient(c) => {
            assert_eq!(c.violator, vec![0, 1]);
            assert_eq!(c.neighborhood_size, 1);
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quota_is_monotone(seed in any::<u64>()) {
        let (adj, right) = random_instance(&mut common::rng(seed));
        let b = BipGraph::from_adjacency(right, adj.clone()).unwrap();
        let best = max_uniform_quota(&b);
        for q in 1..=4 {
            prop_assert_eq!(quota_matching(&b, q).is_assigned(), q <= best);
            prop_assert_eq!(brute_feasible(&adj, right, q), q <= best);
        }
    }

    #[test]
    fn maximum_matching_size(seed in any::<u64>()) {
        let (adj, right) = random_instance(&mut common::rng(seed));
        let b = BipGraph::from_adjacency(right, adj.clone()).unwrap();
        let m = maximum_matching(&b);
        let owned = m.owned(adj.len());
        prop_assert!(owned.iter().enumerate().all(|(l, rs)| rs.len() <= 1 && rs.iter().all(|r| adj[l].contains(r))));
        let size = m.owner.iter().filter(|o| o.is_some()).count();
        // Konig: the largest matching equals the smallest |X| - deficiency.
        let best = (0u32..1 << adj.len())
            .map(|mask| {
                let xs: Vec<usize> = (0..adj.len()).filter(|&i| mask >> i & 1 == 1).collect();
                adj.len() - xs.len() + neighbourhood(&adj, &xs).min(xs.len())
            })
            .min()
            .unwrap();
        prop_assert_eq!(size, best);
    }
}
