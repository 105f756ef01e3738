//! Ground truth: star-factor validation and exact minimum dominating sets.

use serde::Serialize;

use crate::error::Result;
use crate::factor::StarFactor;
use crate::generators::paley_bipartite;
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    OutOfRange {
        vertex: usize,
    },
    /// The vertex occurs more than once across all centers and leaf lists.
    Duplicate {
        vertex: usize,
    },
    NonEdge {
        center: usize,
        leaf: usize,
    },
    EmptyStar {
        center: usize,
    },
    Undersized {
        center: usize,
        leaves: usize,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::OutOfRange { vertex } => write!(f, "vertex {vertex} is out of range"),
            Violation::Duplicate { vertex } => write!(f, "vertex {vertex} appears more than once"),
            Violation::NonEdge { center, leaf } => write!(f, "({center}, {leaf}) is not an edge"),
            Violation::EmptyStar { center } => write!(f, "star at {center} has no leaves"),
            Violation::Undersized { center, leaves } => {
                write!(f, "star at {center} has only {leaves} leaves")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub min_star: usize,
    pub max_star: usize,
    pub star_count: usize,
    pub coverage_gap: Vec<usize>,
}

/// Checks that `sf` partitions the vertices of `g` into stars made of graph
/// edges, each with at least `max(1, min_size)` leaves. Every problem found
/// is listed; nothing short-circuits.
pub fn validate_star_factor(g: &Graph, sf: &StarFactor, min_size: usize) -> ValidationReport {
    let n = g.vertex_count();
    let mut seen = vec![0usize; n];
    let mut violations = Vec::new();
    let mut note = |v: usize, violations: &mut Vec<Violation>| {
        if v >= n {
            violations.push(Violation::OutOfRange { vertex: v });
        } else {
            seen[v] += 1;
            if seen[v] == 2 {
                violations.push(Violation::Duplicate { vertex: v });
            }
        }
    };
    for (&c, leaves) in &sf.stars {
        note(c, &mut violations);
        for &l in leaves {
            note(l, &mut violations);
        }
    }
    for (&c, leaves) in &sf.stars {
        for &l in leaves {
            if c < n && l < n && !g.has_edge(c, l) {
                violations.push(Violation::NonEdge { center: c, leaf: l });
            }
        }
        if leaves.is_empty() {
            violations.push(Violation::EmptyStar { center: c });
        } else if leaves.len() < min_size {
            violations.push(Violation::Undersized {
                center: c,
                leaves: leaves.len(),
            });
        }
    }
    let coverage_gap: Vec<usize> = (0..n).filter(|&v| seen[v] == 0).collect();
    ValidationReport {
        valid: violations.is_empty() && coverage_gap.is_empty(),
        violations,
        min_star: sf.min_star(),
        max_star: sf.max_star(),
        star_count: sf.center_count(),
        coverage_gap,
    }
}

/// True if every vertex is in `set` or adjacent to a member.
pub fn is_dominating(g: &Graph, set: &VertexSet) -> bool {
    (0..g.vertex_count()).all(|v| set.contains(v) || g.neighbors(v).iter().any(|&u| set.contains(u)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomSetResult {
    pub size: usize,
    pub witness: Vec<usize>,
    pub nodes_explored: u64,
    /// False when the node budget ran out; `size` is then only an upper bound.
    pub exact: bool,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    /// |other \ self|
    fn gain(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (b & !a).count_ones() as usize)
            .sum()
    }
    fn first_zero(&self, n: usize) -> Option<usize> {
        for (wi, &w) in self.0.iter().enumerate() {
            if w != u64::MAX {
                let i = wi * 64 + (!w).trailing_zeros() as usize;
                return (i < n).then_some(i);
            }
        }
        None
    }
}

struct DomSearch<'a> {
    n: usize,
    closed: Vec<Bits>,
    g: &'a Graph,
    best: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl DomSearch<'_> {
    /// Lower bound on how many more vertices are needed: the fewest
    /// candidates whose best-case fresh coverage adds up to the deficit.
    fn lower_bound(&self, dominated: &Bits, excluded: &Bits) -> usize {
        let missing = self.n - dominated.count();
        let mut gains: Vec<usize> = (0..self.n)
            .filter(|&v| !excluded.get(v))
            .map(|v| dominated.gain(&self.closed[v]))
            .filter(|&x| x > 0)
            .collect();
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let mut covered = 0;
        for (k, x) in gains.iter().enumerate() {
            covered += x;
            if covered >= missing {
                return k + 1;
            }
        }
        usize::MAX
    }

    fn search(&mut self, dominated: &Bits, excluded: &mut Bits) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let Some(u) = dominated.first_zero(self.n) else {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        };
        let lb = self.lower_bound(dominated, excluded);
        if lb == usize::MAX || self.chosen.len() + lb >= self.best.len() {
            return;
        }
        let mut candidates: Vec<(usize, usize)> = std::iter::once(u)
            .chain(self.g.neighbors(u).iter().copied())
            .filter(|&w| !excluded.get(w))
            .map(|w| (dominated.gain(&self.closed[w]), w))
            .collect();
        candidates.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let saved = excluded.clone();
        for (_, w) in candidates {
            let mut next = dominated.clone();
            next.or_assign(&self.closed[w]);
            self.chosen.push(w);
            self.search(&next, excluded);
            self.chosen.pop();
            if self.aborted {
                break;
            }
            // Later siblings must not pick w again: that subtree is done.
            excluded.set(w);
        }
        *excluded = saved;
    }
}

/// Greedy dominating set: repeatedly take the vertex covering the most
/// undominated vertices (lowest id on ties).
pub fn greedy_dominating_set(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut dominated = vec![false; n];
    let mut left = n;
    let mut set = Vec::new();
    while left > 0 {
        let gain = |v: usize| usize::from(!dominated[v]) + g.neighbors(v).iter().filter(|&&u| !dominated[u]).count();
        let best = (0..n).max_by(|&a, &b| gain(a).cmp(&gain(b)).then(b.cmp(&a))).unwrap();
        set.push(best);
        for u in std::iter::once(best).chain(g.neighbors(best).iter().copied()) {
            if !dominated[u] {
                dominated[u] = true;
                left -= 1;
            }
        }
    }
    set.sort_unstable();
    set
}

/// Exact minimum dominating set by branch and bound: branch on which member
/// of the lowest undominated vertex's closed neighbourhood dominates it,
/// prune with a coverage-counting lower bound. Gives up after `budget`
/// search nodes and returns the best set found, flagged inexact.
pub fn min_dominating_set(g: &Graph, budget: u64) -> DomSetResult {
    let n = g.vertex_count();
    let closed: Vec<Bits> = (0..n)
        .map(|v| {
            let mut b = Bits::new(n);
            b.set(v);
            for &u in g.neighbors(v) {
                b.set(u);
            }
            b
        })
        .collect();
    let mut search = DomSearch {
        n,
        closed,
        g,
        best: greedy_dominating_set(g),
        chosen: Vec::new(),
        nodes: 0,
        budget,
        aborted: false,
    };
    search.search(&Bits::new(n), &mut Bits::new(n));
    let mut witness = search.best;
    witness.sort_unstable();
    DomSetResult {
        size: witness.len(),
        witness,
        nodes_explored: search.nodes,
        exact: !search.aborted,
    }
}

/// Default node budget for exact domination at desk scale.
pub const DEFAULT_DOMSET_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaleyCheck {
    pub p: u64,
    pub gamma: usize,
    pub bound: f64,
    pub passes: bool,
    pub exact: bool,
}

/// Domination number of the Paley bipartite graph for `p` against
/// `log2(p) / 3`. `passes` requires an exact gamma strictly above the bound.
pub fn paley_domination_check(p: u64, budget: u64) -> Result<PaleyCheck> {
    let g = paley_bipartite(p)?;
    let res = min_dominating_set(&g, budget);
    let bound = (p as f64).log2() / 3.0;
    Ok(PaleyCheck {
        p,
        gamma: res.size,
        bound,
        passes: res.exact && res.size as f64 > bound,
        exact: res.exact,
    })
}
