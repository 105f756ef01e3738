//! Bipartite quota matching: give every left vertex `q` private right
//! neighbours, or produce a Hall violator `X` with `|N(X)| < q|X|`.
//!
//! Splitting each left vertex into `q` copies and running ordinary augmenting
//! path matching is equivalent to treating each left vertex as a bin of
//! capacity `q`, which is what happens here. Left vertices are filled one at
//! a time, each to capacity, so when an augmenting search from `l` fails the
//! set of left vertices it reached is a deficiency certificate: all of them
//! except `l` are full, and every right vertex they see is already taken by
//! one of them.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Bipartite graph with sorted right-neighbour lists per left vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipGraph {
    right_count: usize,
    adj: Vec<Vec<usize>>,
}

impl BipGraph {
    pub fn new(left_count: usize, right_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); left_count];
        for (l, r) in edges {
            if l >= left_count || r >= right_count {
                return Err(Error::InvalidParameters(format!(
                    "edge ({l}, {r}) out of range for {left_count}x{right_count} bipartite graph"
                )));
            }
            adj[l].push(r);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(BipGraph { right_count, adj })
    }

    /// Builds from per-left adjacency lists; lists are sorted and deduplicated.
    pub fn from_adjacency(right_count: usize, mut adj: Vec<Vec<usize>>) -> Result<Self> {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            if let Some(&r) = list.last() {
                if r >= right_count {
                    return Err(Error::InvalidParameters(format!("right vertex {r} out of range")));
                }
            }
        }
        Ok(BipGraph { right_count, adj })
    }

    pub fn left_count(&self) -> usize {
        self.adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adj[left]
    }

    pub fn degree(&self, left: usize) -> usize {
        self.adj[left].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        self.adj[left].binary_search(&right).is_ok()
    }

    /// Degrees of the right vertices.
    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right_count];
        for list in &self.adj {
            for &r in list {
                deg[r] += 1;
            }
        }
        deg
    }

    /// `|N(X)|` for a set of left vertices.
    pub fn neighborhood_size(&self, lefts: &[usize]) -> usize {
        let mut seen = vec![false; self.right_count];
        let mut count = 0;
        for &l in lefts {
            for &r in &self.adj[l] {
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                }
            }
        }
        count
    }
}

/// Owner of each right vertex, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaAssignment {
    pub owner: Vec<Option<usize>>,
    pub quota: usize,
}

impl QuotaAssignment {
    /// Right vertices owned by each left vertex, ascending.
    pub fn owned(&self, left_count: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); left_count];
        for (r, o) in self.owner.iter().enumerate() {
            if let Some(l) = *o {
                out[l].push(r);
            }
        }
        out
    }
}

/// A set of left vertices whose neighbourhood is too small for the quota.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficiencyCertificate {
    pub violator: Vec<usize>,
    pub neighborhood_size: usize,
    pub quota: usize,
}

impl DeficiencyCertificate {
    /// Recomputes `|N(X)|` from the graph and checks `|N(X)| < q|X|`.
    pub fn verify(&self, b: &BipGraph) -> bool {
        !self.violator.is_empty()
            && self.violator.iter().all(|&l| l < b.left_count())
            && b.neighborhood_size(&self.violator) == self.neighborhood_size
            && self.neighborhood_size < self.quota * self.violator.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotaOutcome {
    Assigned(QuotaAssignment),
    Deficient(DeficiencyCertificate),
}

impl QuotaOutcome {
    pub fn assignment(self) -> Option<QuotaAssignment> {
        match self {
            QuotaOutcome::Assigned(a) => Some(a),
            QuotaOutcome::Deficient(_) => None,
        }
    }

    pub fn is_assigned(&self) -> bool {
        matches!(self, QuotaOutcome::Assigned(_))
    }
}

/// Tries to give every left vertex exactly `quota` private neighbours.
pub fn quota_matching(b: &BipGraph, quota: usize) -> QuotaOutcome {
    let mut m = CapMatcher::new(b);
    for l in 0..b.left_count() {
        for _ in 0..quota {
            if let Err(reached) = m.augment(l) {
                let mut violator = reached;
                violator.sort_unstable();
                let neighborhood_size = b.neighborhood_size(&violator);
                return QuotaOutcome::Deficient(DeficiencyCertificate {
                    violator,
                    neighborhood_size,
                    quota,
                });
            }
        }
    }
    QuotaOutcome::Assigned(QuotaAssignment { owner: m.owner, quota })
}

/// Matcher that records, for every reached left vertex, the right vertex it
/// was reached through, so augmenting paths can be flipped.
struct CapMatcher<'a> {
    b: &'a BipGraph,
    owner: Vec<Option<usize>>,
    left_seen: Vec<usize>,
    right_seen: Vec<usize>,
    // right vertex through which a left vertex was first reached
    entry: Vec<usize>,
    // left vertex from which a right vertex was first reached
    from: Vec<usize>,
    epoch: usize,
}

impl<'a> CapMatcher<'a> {
    fn new(b: &'a BipGraph) -> Self {
        CapMatcher {
            b,
            owner: vec![None; b.right_count],
            left_seen: vec![usize::MAX; b.left_count()],
            right_seen: vec![usize::MAX; b.right_count],
            entry: vec![usize::MAX; b.left_count()],
            from: vec![usize::MAX; b.right_count],
            epoch: 0,
        }
    }

    fn augment(&mut self, start: usize) -> std::result::Result<(), Vec<usize>> {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut reached = vec![start];
        let mut queue = VecDeque::from([start]);
        self.left_seen[start] = epoch;
        while let Some(l) = queue.pop_front() {
            for &r in &self.b.adj[l] {
                if self.right_seen[r] == epoch {
                    continue;
                }
                self.right_seen[r] = epoch;
                self.from[r] = l;
                match self.owner[r] {
                    None => {
                        let mut r = r;
                        loop {
                            let l = self.from[r];
                            self.owner[r] = Some(l);
                            if l == start {
                                return Ok(());
                            }
                            r = self.entry[l];
                        }
                    }
                    Some(o) if self.left_seen[o] != epoch => {
                        self.left_seen[o] = epoch;
                        self.entry[o] = r;
                        reached.push(o);
                        queue.push_back(o);
                    }
                    Some(_) => {}
                }
            }
        }
        Err(reached)
    }
}

/// Largest `q` for which [`quota_matching`] succeeds, by binary search over
/// `0..=min left degree`.
pub fn max_uniform_quota(b: &BipGraph) -> usize {
    let mut lo = 0;
    let mut hi = (0..b.left_count()).map(|l| b.degree(l)).min().unwrap_or(0);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if quota_matching(b, mid).is_assigned() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Maximum-cardinality matching with at most one right vertex per left
/// vertex. Left vertices that cannot be served are skipped.
pub fn maximum_matching(b: &BipGraph) -> QuotaAssignment {
    let mut m = CapMatcher::new(b);
    for l in 0..b.left_count() {
        let _ = m.augment(l);
    }
    QuotaAssignment {
        owner: m.owner,
        quota: 1,
    }
}

/// Checks that an assignment uses only edges and gives every left vertex
/// exactly its quota.
pub fn assignment_is_sound(b: &BipGraph, a: &QuotaAssignment) -> bool {
    if a.owner.len() != b.right_count() {
        return false;
    }
    let mut load = vec![0; b.left_count()];
    for (r, o) in a.owner.iter().enumerate() {
        if let Some(l) = *o {
            if l >= b.left_count() || !b.has_edge(l, r) {
                return false;
            }
            load[l] += 1;
        }
    }
    load.iter().all(|&x| x == a.quota)
}
