mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starfactor::resample::{resample_until_good, resample_with_observer, EventSystem};
use starfactor::{Error, Graph};

#[derive(Clone, Debug)]
struct Plan {
    vars: usize,
    /// (scope, threshold): violated when fewer than `threshold` scope variables are true.
    events: Vec<(Vec<usize>, usize)>,
}

fn build(plan: &Plan) -> EventSystem {
    let mut sys = EventSystem::new(plan.vars);
    for (scope, k) in &plan.events {
        let k = *k;
        sys.add_event(scope.clone(), move |v| v.iter().filter(|&&b| b).count() < k)
            .unwrap();
    }
    sys
}

/// Full re-evaluation every round; same draw order as the engine.
fn naive(plan: &Plan, bias: f64, seed: u64, max_rounds: usize) -> Option<(Vec<bool>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<bool> = (0..plan.vars).map(|_| rng.gen_bool(bias)).collect();
    let bad = |values: &[bool], (scope, k): &(Vec<usize>, usize)| scope.iter().filter(|&&x| values[x]).count() < *k;
    let mut rounds = 0;
    while let Some(e) = plan.events.iter().position(|e| bad(&values, e)) {
        if rounds == max_rounds {
            return None;
        }
        for &x in &plan.events[e].0 {
            values[x] = rng.gen_bool(bias);
        }
        rounds += 1;
    }
    Some((values, rounds))
}

fn plan_strategy() -> impl Strategy<Value = Plan> {
    (2usize..16).prop_flat_map(|vars| {
        let event = (proptest::collection::btree_set(0..vars, 1..=vars.min(5)), 0usize..3)
            .prop_map(|(s, k)| (s.into_iter().collect::<Vec<_>>(), k));
        proptest::collection::vec(event, 0..12).prop_map(move |events| Plan {
            events: events
                .into_iter()
                .map(|(s, k)| {
                    let k = k.min(s.len());
                    (s, k)
                })
                .collect(),
            vars,
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engine_matches_naive(plan in plan_strategy(), seed in any::<u64>(), bias in 0.2f64..0.8) {
        let sys = build(&plan);
        let got = resample_until_good(&sys, bias, seed, 500);
        match naive(&plan, bias, seed, 500) {
            Some((values, rounds)) => {
                let a = got.unwrap();
                prop_assert_eq!(&a.values, &values);
                prop_assert_eq!(a.rounds_used, rounds);
                prop_assert!(sys.violated_events(&a.values).is_empty());
            }
            None => {
                let is_exhausted = matches!(got, Err(Error::RoundsExhausted { .. }));
                prop_assert!(is_exhausted);
            }
        }
    }

    #[test]
    fn rounds_only_touch_the_resampled_scope(plan in plan_strategy(), seed in any::<u64>()) {
        let sys = build(&plan);
        let mut prev: Option<Vec<bool>> = None;
        let mut first = true;
        let mut ok = true;
        let _ = resample_with_observer(&sys, 0.5, seed, 200, |event, values| {
            if first {
                first = false;
            } else if let Some(p) = &prev {
                let scope = sys.scope(event);
                ok &= (0..values.len()).all(|x| scope.contains(&x) || p[x] == values[x]);
            }
            prev = Some(values.to_vec());
        });
        prop_assert!(ok);
    }
}

#[test]
fn observer_sees_one_scope_per_round() {
    // Chain of events over consecutive pairs; every round's diff must sit in the scope.
    let mut sys = EventSystem::new(12);
    for i in 0..11 {
        sys.add_event(vec![i, i + 1], |v| !(v[0] || v[1])).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let initial: Vec<bool> = (0..12).map(|_| rng.gen_bool(0.3)).collect();
    let mut prev = initial;
    let mut rounds = 0;
    let a = resample_with_observer(&sys, 0.3, 0, 1000, |event, values| {
        for x in 0..12 {
            if prev[x] != values[x] {
                assert!(sys.scope(event).contains(&x));
            }
        }
        prev = values.to_vec();
        rounds += 1;
    })
    .unwrap();
    assert_eq!(a.rounds_used, rounds);
    assert_eq!(a.values, prev);
}

#[test]
fn complete_33_center_events_terminate() {
    let g = Graph::complete(33);
    let n = g.vertex_count();
    let d = 32.0f64;
    let p = (2.0 + 2.0 * d.ln()) / d;
    assert!((p - 0.279).abs() < 1e-3);
    let upper = 3.0 * p * d;
    let max_rounds = (10.0 * n as f64 * (n as f64).ln()) as usize;
    let mut sys = EventSystem::new(n);
    for v in 0..n {
        sys.add_event(g.neighbors(v).to_vec(), move |vals| {
            let k = vals.iter().filter(|&&b| b).count();
            k == 0 || k as f64 > upper
        })
        .unwrap();
    }
    let mut ok = 0;
    for seed in 0..100 {
        if let Ok(a) = resample_until_good(&sys, p, seed, max_rounds) {
            for v in 0..n {
                let k = g.neighbors(v).iter().filter(|&&u| a.values[u]).count();
                assert!(k >= 1 && k as f64 <= upper);
            }
            ok += 1;
        }
    }
    assert!(ok >= 95, "{ok}/100");
}
