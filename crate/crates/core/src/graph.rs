//! Simple undirected graphs stored as sorted adjacency lists, plus the
//! edge-list text format used on disk.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use crate::error::{Error, Result};

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are strictly ascending, symmetric and loop-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges (in either orientation)
    /// collapse to one; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidParameters(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidParameters(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Wraps adjacency lists that already satisfy every invariant.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        debug_assert!(adj.iter().enumerate().all(|(v, l)| {
            l.windows(2).all(|w| w[0] < w[1]) && l.iter().all(|&u| u != v && adj[u].binary_search(&v).is_ok())
        }));
        Graph { adj }
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_sorted_adjacency((0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> Result<usize> {
        self.adj.iter().map(Vec::len).min().ok_or(Error::EmptyGraph)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Returns the common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn require_regular(&self, d: usize) -> Result<()> {
        match self.adj.iter().position(|l| l.len() != d) {
            None => Ok(()),
            Some(vertex) => Err(Error::NotRegular {
                d,
                vertex,
                degree: self.adj[vertex].len(),
            }),
        }
    }

    /// The graph with every vertex of `removed` isolated. Vertex ids are kept.
    pub fn without_vertices(&self, removed: &VertexSet) -> Graph {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, list)| {
                if removed.contains(v) {
                    Vec::new()
                } else {
                    list.iter().copied().filter(|&u| !removed.contains(u)).collect()
                }
            })
            .collect();
        Graph { adj }
    }

    /// Two-colouring by BFS, `None` if the graph has an odd cycle.
    /// Each component's lowest vertex gets side `false`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                let s = side[v].unwrap();
                for &u in &self.adj[v] {
                    match side[u] {
                        None => {
                            side[u] = Some(!s);
                            queue.push_back(u);
                        }
                        Some(t) if t == s => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    /// Writes the edge list, one `u v` line per edge with `u < v`, sorted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count() * 10);
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` comments and
    /// blank lines ignored. The vertex count is one more than the largest id,
    /// and every id below it must appear in some edge.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        Graph::read_edge_list(text.as_bytes())
    }

    pub fn read_edge_list<R: Read>(reader: R) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max_id: Option<usize> = None;
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                let tok = tok.ok_or_else(|| Error::Parse {
                    line: lineno,
                    message: "expected two vertex ids".into(),
                })?;
                tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid vertex id {tok:?}"),
                })
            };
            let u = parse(fields.next())?;
            let v = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "trailing fields".into(),
                });
            }
            if u == v {
                return Err(Error::SelfLoop { line: lineno });
            }
            max_id = Some(max_id.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
        }
        let n = max_id.map_or(0, |m| m + 1);
        let g = Graph::from_edges(n, edges)?;
        if let Some(vertex) = (0..n).find(|&v| g.degree(v) == 0) {
            return Err(Error::SparseIds { vertex });
        }
        Ok(g)
    }
}

/// Subset of the vertex ids `0..n` with constant-time membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn from_iter(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut set = VertexSet::new(n);
        for v in members {
            set.insert(v);
        }
        set
    }

    /// Returns true if `v` was not already a member.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.mask[v];
        if fresh {
            self.mask[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.mask[v];
        if present {
            self.mask[v] = false;
            self.len -= 1;
        }
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Size of the ambient vertex range.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        for v in other.iter() {
            out.insert(v);
        }
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_iter(self.universe(), self.iter().filter(|&v| !other.contains(v)))
    }

    /// Number of members among `vertices`.
    pub fn count_in(&self, vertices: &[usize]) -> usize {
        vertices.iter().filter(|&&v| self.mask[v]).count()
    }
}

/// Deletes edges whose endpoints both have degree above `d` until none is
/// left. Edges are considered in lexicographic order and the scan restarts
/// after every deletion; since deletions only lower degrees, an edge that was
/// kept once stays kept, so a single ordered pass reaches the same fixpoint.
pub fn prune_high_high_edges(g: &Graph, d: usize) -> Result<Graph> {
    let min = g.min_degree()?;
    if min < d {
        return Err(Error::MinDegree {
            required: d,
            actual: min,
        });
    }
    let mut degree: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    let mut keep: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (u, v) in g.edges() {
        if degree[u] > d && degree[v] > d {
            degree[u] -= 1;
            degree[v] -= 1;
        } else {
            keep[u].push(v);
            keep[v].push(u);
        }
    }
    for list in &mut keep {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(keep))
}
