//! Test and extremal instances: random regular graphs from the pairing model,
//! quadratic-residue bipartite graphs, complete bipartite graphs, and spanning
//! regular subgraphs of regular bipartite graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bmatch::{quota_matching, BipGraph, QuotaOutcome};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A perfect matching on `n * d` points, `d` points per bucket. Point `i`
/// belongs to bucket `i / d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingModelDraw {
    pub buckets: usize,
    pub points_per_bucket: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl PairingModelDraw {
    /// A uniformly random perfect matching of the points.
    pub fn sample(buckets: usize, points_per_bucket: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut points: Vec<usize> = (0..buckets * points_per_bucket).collect();
        points.shuffle(rng);
        let pairs = points.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        PairingModelDraw {
            buckets,
            points_per_bucket,
            pairs,
        }
    }

    pub fn bucket(&self, point: usize) -> usize {
        point / self.points_per_bucket
    }

    /// The underlying simple graph, or `None` if the multigraph has a loop
    /// or a repeated edge.
    pub fn to_simple_graph(&self) -> Option<Graph> {
        let mut adj = vec![Vec::with_capacity(self.points_per_bucket); self.buckets];
        for &(a, b) in &self.pairs {
            let (u, v) = (self.bucket(a), self.bucket(b));
            if u == v {
                return None;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
        }
        Some(Graph::from_sorted_adjacency(adj))
    }
}

/// Below this degree a whole pairing is simple with probability at least
/// about exp(-(d^2 - 1) / 4) > 1%, so plain rejection is affordable.
const WHOLE_REJECTION_MAX_DEGREE: usize = 4;

/// Random `d`-regular simple graph on `n` vertices.
///
/// For `d <= 4` whole pairings are drawn and rejected until one is simple.
/// For larger `d` that acceptance rate collapses, so a drawn pairing keeps its
/// good pairs and only the points in loops or repeated edges are re-paired
/// among themselves; an attempt is abandoned if those points admit no valid
/// pair. Each abandoned or rejected pairing counts as one retry.
pub fn random_regular(n: usize, d: usize, seed: u64, max_retries: usize) -> Result<Graph> {
    if d >= n {
        return Err(Error::InvalidParameters(format!("degree {d} must be below n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("n * d = {} must be even", n * d)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_retries.max(1) {
        let draw = PairingModelDraw::sample(n, d, &mut rng);
        let g = if d <= WHOLE_REJECTION_MAX_DEGREE {
            draw.to_simple_graph()
        } else {
            repair_pairing(&draw, &mut rng)
        };
        if let Some(g) = g {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted {
        retries: max_retries.max(1),
    })
}

fn repair_pairing(draw: &PairingModelDraw, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let n = draw.buckets;
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(draw.points_per_bucket); n];
    let mut pending: Vec<usize> = Vec::new();
    for &(a, b) in &draw.pairs {
        let (u, v) = (draw.bucket(a), draw.bucket(b));
        if u == v || adj[u].contains(&v) {
            pending.push(a);
            pending.push(b);
        } else {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    while !pending.is_empty() {
        let suitable = pending.iter().enumerate().any(|(i, &a)| {
            pending[i + 1..].iter().any(|&b| {
                let (u, v) = (draw.bucket(a), draw.bucket(b));
                u != v && !adj[u].contains(&v)
            })
        });
        if !suitable {
            return None;
        }
        pending.shuffle(rng);
        let mut rest = Vec::new();
        for c in pending.chunks_exact(2) {
            let (u, v) = (draw.bucket(c[0]), draw.bucket(c[1]));
            if u == v || adj[u].contains(&v) {
                rest.extend_from_slice(c);
            } else {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        pending = rest;
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Some(Graph::from_sorted_adjacency(adj))
}

/// Trial-division primality.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The nonzero quadratic residues mod `p` as a membership table.
pub fn quadratic_residues(p: u64) -> Vec<bool> {
    let mut residue = vec![false; p as usize];
    for x in 1..p {
        residue[((x * x) % p) as usize] = true;
    }
    residue
}

/// Bipartite graph on two copies of Z_p (ids `0..p` and `p..2p`) with `a ~ b`
/// iff `a - b` is a quadratic non-residue mod `p`.
pub fn paley_bipartite(p: u64) -> Result<Graph> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let residue = quadratic_residues(p);
    let p = p as usize;
    let non_residue = |x: usize| x != 0 && !residue[x];
    let adj = (0..2 * p)
        .map(|v| {
            if v < p {
                (0..p)
                    .filter(|&b| non_residue((v + p - b) % p))
                    .map(|b| b + p)
                    .collect()
            } else {
                let b = v - p;
                (0..p).filter(|&a| non_residue((a + p - b) % p)).collect()
            }
        })
        .collect();
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Smallest prime `p` with `(p - 1) / 2 >= d`.
pub fn paley_prime_for_degree(d: usize) -> u64 {
    let mut p = (2 * d + 1).max(3) as u64;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// `K_{a,b}` with the `a`-side on ids `0..a`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidParameters(format!(
            "K_{{{a},{b}}} needs both sides non-empty"
        )));
    }
    let adj = (0..a + b)
        .map(|v| if v < a { (a..a + b).collect() } else { (0..a).collect() })
        .collect();
    Ok(Graph::from_sorted_adjacency(adj))
}

/// Spanning `d`-regular subgraph of a regular bipartite graph, built as the
/// union of `d` edge-disjoint perfect matchings. The seed permutes the order in
/// which right vertices are offered to the matcher.
pub fn spanning_regular_subgraph(g: &Graph, d: usize, seed: u64) -> Result<Graph> {
    let n = g.vertex_count();
    let big_d = g
        .regular_degree()
        .ok_or_else(|| Error::NotBipartiteRegular("degrees differ".into()))?;
    if d > big_d {
        return Err(Error::InvalidParameters(format!(
            "d = {d} exceeds the graph degree {big_d}"
        )));
    }
    let side = g
        .bipartition()
        .ok_or_else(|| Error::NotBipartiteRegular("graph has an odd cycle".into()))?;
    let left: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    let mut right: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
    if left.len() != right.len() {
        return Err(Error::NotBipartiteRegular(format!(
            "sides have {} and {} vertices",
            left.len(),
            right.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    right.shuffle(&mut rng);
    let mut right_index = vec![usize::MAX; n];
    for (i, &r) in right.iter().enumerate() {
        right_index[r] = i;
    }

    let mut remaining: Vec<Vec<usize>> = left
        .iter()
        .map(|&l| g.neighbors(l).iter().map(|&r| right_index[r]).collect())
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    for round in 0..d {
        let b = BipGraph::from_adjacency(right.len(), remaining.clone())?;
        let assignment = match quota_matching(&b, 1) {
            QuotaOutcome::Assigned(a) => a,
            QuotaOutcome::Deficient(c) => {
                return Err(Error::Invariant(format!(
                    "no perfect matching in round {round}; Hall violator of size {}",
                    c.violator.len()
                )))
            }
        };
        for (ri, owner) in assignment.owner.iter().enumerate() {
            let li = owner.ok_or_else(|| Error::Invariant("perfect matching left a vertex unmatched".into()))?;
            let (l, r) = (left[li], right[ri]);
            adj[l].push(r);
            adj[r].push(l);
            let pos = remaining[li].iter().position(|&x| x == ri).unwrap();
            remaining[li].swap_remove(pos);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

/// A `d`-regular spanning subgraph of the Paley bipartite graph for the
/// smallest prime `p` with `(p - 1) / 2 >= d`. Returns the prime as well.
pub fn paley_regular(d: usize, seed: u64) -> Result<(u64, Graph)> {
    if d == 0 {
        return Err(Error::InvalidParameters("degree must be positive".into()));
    }
    let p = paley_prime_for_degree(d);
    let full = paley_bipartite(p)?;
    let g = if (p as usize - 1) / 2 == d {
        full
    } else {
        spanning_regular_subgraph(&full, d, seed)?
    };
    Ok((p, g))
}
