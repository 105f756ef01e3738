//! Star factors: the solver output type, its text format, and the assembly
//! helper the solvers use to attach leftovers and repair degenerate stars.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Stars keyed by center, leaves ascending. Nothing is enforced here: a value
/// read from disk may be arbitrarily broken, which is what
/// [`crate::verify::validate_star_factor`] is for.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarFactor {
    pub stars: BTreeMap<usize, Vec<usize>>,
}

impl StarFactor {
    pub fn centers(&self) -> VertexSet {
        let n = self
            .stars
            .iter()
            .flat_map(|(&c, l)| std::iter::once(c).chain(l.iter().copied()))
            .max()
            .map_or(0, |m| m + 1);
        VertexSet::from_iter(n, self.stars.keys().copied())
    }

    pub fn center_count(&self) -> usize {
        self.stars.len()
    }

    /// Smallest number of leaves in any star (0 if there are no stars).
    pub fn min_star(&self) -> usize {
        self.stars.values().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_star(&self) -> usize {
        self.stars.values().map(Vec::len).max().unwrap_or(0)
    }

    /// One line per star, `center: leaf leaf ...`, everything ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, leaves) in &self.stars {
            write!(out, "{c}:").unwrap();
            for l in leaves {
                write!(out, " {l}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`StarFactor::to_text`]. Leaf order in
    /// the file does not matter. A center listed twice is a parse error.
    pub fn parse(text: &str) -> Result<StarFactor> {
        let mut stars = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, tail) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                message: "expected `center: leaves...`".into(),
            })?;
            let id = |tok: &str| -> Result<usize> {
                tok.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("invalid vertex id {tok:?}"),
                })
            };
            let center = id(head)?;
            let mut leaves = tail.split_whitespace().map(id).collect::<Result<Vec<_>>>()?;
            leaves.sort_unstable();
            if stars.insert(center, leaves).is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("center {center} listed twice"),
                });
            }
        }
        Ok(StarFactor { stars })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Unassigned,
    Center,
    Leaf(usize),
}

/// Counts of the local fixes applied by [`StarBuilder::repair`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RepairStats {
    pub orphans: usize,
    pub leafless_centers: usize,
}

impl RepairStats {
    pub fn is_empty(&self) -> bool {
        self.orphans == 0 && self.leafless_centers == 0
    }
}

/// Incremental star-factor assembly over a fixed graph.
pub(crate) struct StarBuilder<'g> {
    g: &'g Graph,
    role: Vec<Role>,
    leaf_count: Vec<usize>,
}

impl<'g> StarBuilder<'g> {
    pub fn new(g: &'g Graph) -> Self {
        StarBuilder {
            g,
            role: vec![Role::Unassigned; g.vertex_count()],
            leaf_count: vec![0; g.vertex_count()],
        }
    }

    pub fn make_center(&mut self, v: usize) {
        debug_assert_eq!(self.role[v], Role::Unassigned);
        self.role[v] = Role::Center;
    }

    pub fn attach(&mut self, leaf: usize, center: usize) {
        debug_assert_eq!(self.role[leaf], Role::Unassigned);
        debug_assert_eq!(self.role[center], Role::Center);
        debug_assert!(self.g.has_edge(leaf, center));
        self.role[leaf] = Role::Leaf(center);
        self.leaf_count[center] += 1;
    }

    pub fn is_assigned(&self, v: usize) -> bool {
        self.role[v] != Role::Unassigned
    }

    pub fn is_center(&self, v: usize) -> bool {
        self.role[v] == Role::Center
    }

    /// Attaches `v` to its lowest-id neighbour in `graph` that is a center.
    /// `graph` must be a subgraph of the builder's graph.
    pub fn attach_to_lowest_center(&mut self, v: usize, graph: &Graph) -> bool {
        match graph.neighbors(v).iter().copied().find(|&u| self.is_center(u)) {
            Some(c) => {
                self.attach(v, c);
                true
            }
            None => false,
        }
    }

    /// Turns the current partial assignment into a valid star factor:
    /// every unassigned vertex is attached somewhere and every center ends up
    /// with at least one leaf. Each fix is local and never undoes an earlier
    /// one. Fails only if a vertex that needs fixing has no neighbours.
    pub fn repair(&mut self) -> Result<RepairStats> {
        let mut stats = RepairStats::default();
        let g = self.g;
        for v in 0..g.vertex_count() {
            if self.is_assigned(v) || self.attach_to_lowest_center(v, g) {
                continue;
            }
            let &w = g
                .neighbors(v)
                .first()
                .ok_or_else(|| Error::Invariant(format!("vertex {v} is isolated")))?;
            stats.orphans += 1;
            match self.role[w] {
                Role::Unassigned => {
                    self.role[v] = Role::Center;
                    self.attach(w, v);
                }
                Role::Leaf(x) => {
                    self.take_leaf(w, x);
                    self.attach(v, w);
                }
                Role::Center => unreachable!("attach_to_lowest_center would have succeeded"),
            }
        }
        for c in 0..g.vertex_count() {
            if self.role[c] != Role::Center || self.leaf_count[c] > 0 {
                continue;
            }
            stats.leafless_centers += 1;
            if let Some(&w) = g.neighbors(c).iter().find(|&&u| self.role[u] == Role::Center) {
                self.role[c] = Role::Leaf(w);
                self.leaf_count[w] += 1;
                continue;
            }
            let &w = g
                .neighbors(c)
                .first()
                .ok_or_else(|| Error::Invariant(format!("center {c} is isolated")))?;
            let Role::Leaf(x) = self.role[w] else {
                unreachable!("all vertices are assigned and no neighbour of {c} is a center")
            };
            if self.leaf_count[x] >= 2 {
                self.role[w] = Role::Leaf(c);
                self.leaf_count[x] -= 1;
                self.leaf_count[c] += 1;
            } else {
                self.take_leaf(w, x);
                self.role[c] = Role::Leaf(w);
                self.leaf_count[w] += 1;
            }
        }
        Ok(stats)
    }

    /// Makes the leaf `w` of center `x` a center of its own. If `x` would be
    /// left without leaves it becomes a leaf of `w` instead.
    fn take_leaf(&mut self, w: usize, x: usize) {
        self.role[w] = Role::Center;
        self.leaf_count[x] -= 1;
        if self.leaf_count[x] == 0 {
            self.role[x] = Role::Leaf(w);
            self.leaf_count[w] += 1;
        }
    }

    pub fn finish(self) -> StarFactor {
        let mut stars: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, role) in self.role.iter().enumerate() {
            match *role {
                Role::Center => {
                    stars.entry(v).or_default();
                }
                Role::Leaf(c) => stars.entry(c).or_default().push(v),
                Role::Unassigned => {}
            }
        }
        StarFactor { stars }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::validate_star_factor;

    #[test]
    fn text_round_trip() {
        let sf = StarFactor::parse("3: 5 4\n0: 1 2\n").unwrap();
        assert_eq!(sf.to_text(), "0: 1 2\n3: 4 5\n");
        assert_eq!(StarFactor::parse(&sf.to_text()).unwrap(), sf);
        assert_eq!(sf.min_star(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(StarFactor::parse("0 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            StarFactor::parse("0: 1\n0: 2"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(StarFactor::parse("0: x"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn repair_orphan_next_to_single_leaf_star() {
        // Path 0-1-2: star 0:{1}, vertex 2 has no center neighbour.
        let g = Graph::parse_edge_list("0 1\n1 2").unwrap();
        let mut b = StarBuilder::new(&g);
        b.make_center(0);
        b.attach(1, 0);
        let stats = b.repair().unwrap();
        assert_eq!(stats.orphans, 1);
        let sf = b.finish();
        assert_eq!(sf.to_text(), "1: 0 2\n");
        assert!(validate_star_factor(&g, &sf, 1).valid);
    }

    #[test]
    fn repair_leafless_center() {
        // Path 0-1-2-3 with centers 0 and 2 but 1 and 3 both given to 2.
        let g = Graph::parse_edge_list("0 1\n1 2\n2 3").unwrap();
        let mut b = StarBuilder::new(&g);
        b.make_center(0);
        b.make_center(2);
        b.attach(1, 2);
        b.attach(3, 2);
        let stats = b.repair().unwrap();
        assert_eq!(stats.leafless_centers, 1);
        let sf = b.finish();
        assert_eq!(sf.to_text(), "0: 1\n2: 3\n");
    }

    #[test]
    fn repair_everything_from_scratch() {
        let g = Graph::cycle(7).unwrap();
        let mut b = StarBuilder::new(&g);
        b.repair().unwrap();
        let sf = b.finish();
        assert!(validate_star_factor(&g, &sf, 1).valid, "{}", sf.to_text());
    }
}
