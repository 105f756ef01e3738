//! Sample-then-resample engine for families of "bad" events over independent
//! biased coins.
//!
//! Every variable starts with an independent draw. While some event is
//! violated, the lowest-indexed violated event has all variables in its scope
//! redrawn. Two events depend on each other exactly when their scopes
//! intersect, so after a round only the events sharing a variable with the
//! resampled scope are re-evaluated.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

type Predicate = Box<dyn Fn(&[bool]) -> bool + Send + Sync>;

struct Event {
    scope: Vec<usize>,
    violated: Predicate,
}

/// A set of bad events. Each predicate only ever sees the values of the
/// variables in its own scope, in scope order.
pub struct EventSystem {
    variable_count: usize,
    events: Vec<Event>,
}

impl EventSystem {
    pub fn new(variable_count: usize) -> Self {
        EventSystem {
            variable_count,
            events: Vec::new(),
        }
    }

    /// Adds an event and returns its index. `violated` receives the scope's
    /// current values and returns true when the event holds (is bad).
    pub fn add_event<F>(&mut self, scope: Vec<usize>, violated: F) -> Result<usize>
    where
        F: Fn(&[bool]) -> bool + Send + Sync + 'static,
    {
        if scope.is_empty() {
            return Err(Error::InvalidParameters("event scope is empty".into()));
        }
        if let Some(&bad) = scope.iter().find(|&&x| x >= self.variable_count) {
            return Err(Error::InvalidParameters(format!(
                "scope variable {bad} out of range ({} variables)",
                self.variable_count
            )));
        }
        self.events.push(Event {
            scope,
            violated: Box::new(violated),
        });
        Ok(self.events.len() - 1)
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn scope(&self, event: usize) -> &[usize] {
        &self.events[event].scope
    }

    /// Round budget used when the caller does not pick one.
    pub fn default_max_rounds(&self) -> usize {
        (50 * (self.variable_count + self.events.len())).max(1)
    }

    /// Evaluates one event against a full assignment.
    pub fn is_violated(&self, event: usize, values: &[bool]) -> bool {
        let e = &self.events[event];
        let scoped: Vec<bool> = e.scope.iter().map(|&x| values[x]).collect();
        (e.violated)(&scoped)
    }

    /// Indices of all events violated by `values`, ascending.
    pub fn violated_events(&self, values: &[bool]) -> Vec<usize> {
        (0..self.events.len())
            .filter(|&e| self.is_violated(e, values))
            .collect()
    }
}

/// A satisfying assignment and the number of resampling rounds spent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<bool>,
    pub rounds_used: usize,
}

impl Assignment {
    /// Indices of the variables set to true.
    pub fn chosen(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }
}

/// Draws every variable with probability `bias` of being true, then resamples
/// violated events until none remains or `max_rounds` rounds have been spent.
pub fn resample_until_good(sys: &EventSystem, bias: f64, seed: u64, max_rounds: usize) -> Result<Assignment> {
    resample_with_observer(sys, bias, seed, max_rounds, |_, _| {})
}

/// Same as [`resample_until_good`], calling `observer(event, values)` after
/// each round with the event that was resampled.
pub fn resample_with_observer<O>(
    sys: &EventSystem,
    bias: f64,
    seed: u64,
    max_rounds: usize,
    mut observer: O,
) -> Result<Assignment>
where
    O: FnMut(usize, &[bool]),
{
    if !(bias > 0.0 && bias < 1.0) {
        return Err(Error::InvalidParameters(format!("bias {bias} outside (0, 1)")));
    }
    if max_rounds == 0 {
        return Err(Error::InvalidParameters("max_rounds must be at least 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<bool> = (0..sys.variable_count).map(|_| rng.gen_bool(bias)).collect();

    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); sys.variable_count];
    for (idx, e) in sys.events.iter().enumerate() {
        for &x in &e.scope {
            touching[x].push(idx);
        }
    }

    let mut scratch = Vec::new();
    let eval = |idx: usize, values: &[bool], scratch: &mut Vec<bool>| {
        let e = &sys.events[idx];
        scratch.clear();
        scratch.extend(e.scope.iter().map(|&x| values[x]));
        (e.violated)(scratch)
    };

    let mut violated: BTreeSet<usize> = (0..sys.events.len())
        .filter(|&e| eval(e, &values, &mut scratch))
        .collect();

    // Last round in which an event was queued for re-evaluation; avoids
    // evaluating an event once per shared variable.
    let mut stamp = vec![usize::MAX; sys.events.len()];
    let mut rounds = 0;
    while let Some(&event) = violated.iter().next() {
        if rounds == max_rounds {
            return Err(Error::RoundsExhausted {
                rounds,
                violated: violated.into_iter().collect(),
            });
        }
        for &x in &sys.events[event].scope {
            values[x] = rng.gen_bool(bias);
        }
        for &x in &sys.events[event].scope {
            for &other in &touching[x] {
                if stamp[other] == rounds {
                    continue;
                }
                stamp[other] = rounds;
                if eval(other, &values, &mut scratch) {
                    violated.insert(other);
                } else {
                    violated.remove(&other);
                }
            }
        }
        rounds += 1;
        observer(event, &values);
    }
    Ok(Assignment {
        values,
        rounds_used: rounds,
    })
}
