//! Star factors in graphs of minimum degree d.
//!
//! Pipeline:
//!
//! 1. drop edges between two vertices of degree above `d`;
//! 2. high-degree vertices `H` get private blocks of neighbours by quota
//!    matching, and a random half `S` of those blocks is kept;
//! 3. on `G' = G - S`, rules (a) and (b) classify vertices as leaves `L` or
//!    centers `C` (seeded with `H`) and stamp them with increasing labels;
//! 4. a random subset `T` of the unclassified vertices `F` becomes late
//!    centers carrying the largest labels;
//! 5. centers in `(C - H) ∪ T` are quota-matched to neighbours in
//!    `L ∪ (F - T)` with smaller labels, and leftovers join a neighbouring
//!    center.
//!
//! The asymptotic constants (`h`, the subset-condition bounds, the free-set
//! probability) are far outside their intended regime at practical `d`; the
//! effective values used here are derived in [`GeneralConfig`] and recorded
//! in the run report.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bmatch::BipGraph;
use crate::error::{Error, Result};
use crate::factor::StarBuilder;
use crate::graph::{prune_high_high_edges, Graph, VertexSet};
use crate::regular::{assign_leaves, Solution};
use crate::report::RunReport;
use crate::resample::{resample_until_good, EventSystem};

/// Smallest minimum degree accepted by the general pipeline.
pub const MIN_GENERAL_DEGREE: usize = 21;

/// Cap on the free-set probability. `20 ln d / d` only drops below 1 around
/// `d = 90` and stays large for a long while after.
pub const MAX_FREE_BIAS: f64 = 0.25;

/// Which variables the condition-(i) event of a high vertex looks at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialScope {
    /// Only the block assigned to the vertex.
    #[default]
    AssignedBlock,
    /// Every neighbour of the vertex in `S'`.
    FullNeighborhood,
}

/// Test and experiment knobs that replace a derived value outright.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Overrides {
    pub h_quota: Option<usize>,
    pub rule_d: Option<f64>,
    pub special_min: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralConfig {
    pub d: usize,
    pub seed: u64,
    pub max_rounds: Option<usize>,
    /// In `(0, 1]`. Lower bounds of the random-subset conditions are
    /// multiplied by it and the upper bound on late-center neighbours is
    /// divided by it.
    pub relax: f64,
    pub special_scope: SpecialScope,
    pub overrides: Overrides,
}

impl GeneralConfig {
    pub fn new(d: usize, seed: u64) -> Self {
        GeneralConfig {
            d,
            seed,
            max_rounds: None,
            relax: 1.0,
            special_scope: SpecialScope::default(),
            overrides: Overrides::default(),
        }
    }

    fn df(&self) -> f64 {
        self.d as f64
    }

    fn ln_d(&self) -> f64 {
        self.df().ln()
    }

    /// `h = d^{4/3} / (10 (ln d)^{1/3})`.
    pub fn h(&self) -> f64 {
        self.df().powf(4.0 / 3.0) / (10.0 * self.ln_d().cbrt())
    }

    /// Degree from which a vertex counts as high: `h`, but never below
    /// `d + 1`, so that every neighbour of a high vertex has degree exactly
    /// `d` after pruning.
    pub fn high_threshold(&self) -> f64 {
        self.h().max(self.df() + 1.0)
    }

    /// Private neighbours per high vertex: `max(1, floor(h / d))`.
    pub fn h_quota(&self) -> usize {
        self.overrides
            .h_quota
            .unwrap_or_else(|| ((self.h() / self.df()).floor() as usize).max(1))
    }

    /// `D = d^{2/3} (ln d)^{1/3}`.
    pub fn rule_d(&self) -> f64 {
        self.overrides
            .rule_d
            .unwrap_or_else(|| self.df().powf(2.0 / 3.0) * self.ln_d().cbrt())
    }

    /// `d / 6`.
    pub fn leaf_rule_bound(&self) -> f64 {
        self.df() / 6.0
    }

    pub fn special_bias(&self) -> f64 {
        0.5
    }

    /// `20 ln d / d`.
    pub fn p_formula(&self) -> f64 {
        20.0 * self.ln_d() / self.df()
    }

    /// Free-set probability actually used.
    pub fn p_free(&self) -> f64 {
        self.p_formula().min(MAX_FREE_BIAS)
    }

    /// `d^{1/3} / (25 (ln d)^{1/3})`.
    pub fn special_lower(&self) -> f64 {
        (self.df() / self.ln_d()).cbrt() / 25.0
    }

    /// Condition (i) as an integer count: `max(1, floor(relax * bound))`.
    pub fn special_min(&self) -> usize {
        self.overrides
            .special_min
            .unwrap_or_else(|| ((self.relax * self.special_lower()).floor() as usize).max(1))
    }

    /// Condition (ii): non-high vertices keep at least this many neighbours
    /// outside `S`.
    pub fn special_keep(&self) -> f64 {
        self.relax * self.df() / 3.0
    }

    /// `2ph = 4 d^{1/3} (ln d)^{2/3}` with the formula values of `p` and `h`.
    pub fn t_degree_cap(&self) -> f64 {
        4.0 * self.df().cbrt() * self.ln_d().powf(2.0 / 3.0)
    }

    /// Most late-center neighbours a vertex may have, as an integer.
    pub fn t_cap(&self) -> usize {
        (self.t_degree_cap() / self.relax).floor() as usize
    }

    /// `d^{1/3} / (16 (ln d)^{1/3})`.
    pub fn quota_bound(&self) -> f64 {
        (self.df() / self.ln_d()).cbrt() / 16.0
    }

    pub fn quota_target(&self) -> usize {
        self.quota_bound().floor() as usize
    }

    pub fn quota_request(&self) -> usize {
        self.quota_target().max(1)
    }

    /// Lower bound on the assignment-graph degree of rule-(b) centers:
    /// condition (ii) leaves `d/3` neighbours and rule (b) fires with at most
    /// `d/6` of them outside `L`.
    pub fn center_degree_floor(&self) -> f64 {
        (self.special_keep() - self.leaf_rule_bound()).max(0.0)
    }

    fn check(&self) -> Result<()> {
        if self.d < MIN_GENERAL_DEGREE {
            return Err(Error::DegreeTooSmall {
                d: self.d,
                min: MIN_GENERAL_DEGREE,
            });
        }
        if !(self.relax > 0.0 && self.relax <= 1.0) {
            return Err(Error::InvalidParameters(format!(
                "relax factor {} outside (0, 1]",
                self.relax
            )));
        }
        Ok(())
    }

    fn rounds_for(&self, sys: &EventSystem) -> usize {
        self.max_rounds.unwrap_or_else(|| sys.default_max_rounds())
    }
}

/// High vertices and their private neighbour blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighSplit {
    pub high: VertexSet,
    /// Block of each high vertex, ascending.
    pub blocks: BTreeMap<usize, Vec<usize>>,
    pub quota_requested: usize,
    pub quota_achieved: usize,
    pub fallbacks: Vec<String>,
}

impl HighSplit {
    /// `S'`, the union of all blocks.
    pub fn pool(&self) -> VertexSet {
        VertexSet::from_iter(self.high.universe(), self.blocks.values().flatten().copied())
    }
}

/// Finds `H` in an already pruned graph and hands each member `h_quota`
/// private neighbours.
pub fn split_high(g: &Graph, cfg: &GeneralConfig) -> Result<HighSplit> {
    let n = g.vertex_count();
    let threshold = cfg.high_threshold();
    let high = VertexSet::from_iter(n, (0..n).filter(|&v| g.degree(v) as f64 >= threshold));
    let requested = cfg.h_quota();
    let mut split = HighSplit {
        blocks: BTreeMap::new(),
        quota_requested: requested,
        quota_achieved: requested,
        fallbacks: Vec::new(),
        high,
    };
    if split.high.is_empty() {
        return Ok(split);
    }
    if let Some((v, u)) = split
        .high
        .iter()
        .flat_map(|v| g.neighbors(v).iter().map(move |&u| (v, u)))
        .find(|&(_, u)| g.degree(u) != cfg.d)
    {
        return Err(Error::Invariant(format!(
            "high vertex {v} has neighbour {u} of degree {} != d; graph is not pruned",
            g.degree(u)
        )));
    }
    let lefts = split.high.to_vec();
    let rights: Vec<usize> =
        VertexSet::from_iter(n, lefts.iter().flat_map(|&v| g.neighbors(v).iter().copied())).to_vec();
    let b = crate::regular::center_bipartite(g, &lefts, &rights)?;
    let leaves = assign_leaves(&b, requested, &mut split.fallbacks);
    split.quota_achieved = leaves.achieved;
    for (ri, owner) in leaves.assignment.owner.iter().enumerate() {
        if let Some(li) = *owner {
            split.blocks.entry(lefts[li]).or_default().push(rights[ri]);
        }
    }
    Ok(split)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialChoice {
    pub special: VertexSet,
    pub rounds: usize,
}

/// Keeps a random half `S` of the pool so that every high vertex retains at
/// least [`GeneralConfig::special_min`] kept neighbours and every other
/// vertex keeps at least [`GeneralConfig::special_keep`] neighbours outside
/// `S`.
pub fn choose_special(g: &Graph, split: &HighSplit, cfg: &GeneralConfig, seed: u64) -> Result<SpecialChoice> {
    let n = g.vertex_count();
    let pool = split.pool().to_vec();
    let mut var_of = vec![usize::MAX; n];
    for (i, &v) in pool.iter().enumerate() {
        var_of[v] = i;
    }
    let vars_in = |vertices: &[usize]| -> Vec<usize> {
        vertices
            .iter()
            .filter_map(|&u| (var_of[u] != usize::MAX).then_some(var_of[u]))
            .collect()
    };
    let min_kept = cfg.special_min();
    let keep = cfg.special_keep();
    let mut sys = EventSystem::new(pool.len());
    for v in 0..n {
        if split.high.contains(v) {
            let scope = match cfg.special_scope {
                SpecialScope::AssignedBlock => split.blocks.get(&v).map(|b| vars_in(b)).unwrap_or_default(),
                SpecialScope::FullNeighborhood => vars_in(g.neighbors(v)),
            };
            if scope.is_empty() {
                // No block: nothing the sampler can do for this vertex.
                continue;
            }
            sys.add_event(scope, move |vals| vals.iter().filter(|&&b| b).count() < min_kept)?;
        } else {
            let scope = vars_in(g.neighbors(v));
            if scope.is_empty() {
                continue;
            }
            let degree = g.degree(v);
            sys.add_event(scope, move |vals| {
                let removed = vals.iter().filter(|&&b| b).count();
                ((degree - removed) as f64) < keep
            })?;
        }
    }
    let a = resample_until_good(&sys, cfg.special_bias(), seed, cfg.rounds_for(&sys))?;
    Ok(SpecialChoice {
        special: VertexSet::from_iter(n, a.chosen().map(|i| pool[i])),
        rounds: a.rounds_used,
    })
}

/// The evolving partition of the general pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseState {
    pub high: VertexSet,
    pub special: VertexSet,
    /// Centers, `H` included.
    pub centers: VertexSet,
    pub leaves: VertexSet,
    pub free: VertexSet,
    pub late: VertexSet,
    pub labels: Vec<Option<usize>>,
    pub t0: usize,
    /// `G - S`, with the vertices of `S` left isolated.
    pub pruned: Graph,
}

impl PhaseState {
    pub fn label(&self, v: usize) -> Option<usize> {
        self.labels[v]
    }

    /// `(C - H) ∪ T`, ascending.
    pub fn assignable_centers(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&v| (self.centers.contains(v) && !self.high.contains(v)) || self.late.contains(v))
            .collect()
    }

    /// `L ∪ (F - T)`, ascending.
    pub fn assignable_leaves(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&v| self.leaves.contains(v) || (self.free.contains(v) && !self.late.contains(v)))
            .collect()
    }
}

/// Applies rules (a) and (b) to `G'` until neither fires.
///
/// Vertices are scanned in ascending id order, trying (a) before (b), and the
/// scan repeats until a full pass changes nothing. Both rule conditions only
/// become easier as `C` and `L` grow, so this is the same as repeatedly
/// taking the next eligible vertex after the previous one, wrapping around.
pub fn run_rules(gprime: &Graph, high: &VertexSet, special: &VertexSet, cfg: &GeneralConfig) -> PhaseState {
    let n = gprime.vertex_count();
    let rule_d = cfg.rule_d();
    let leaf_bound = cfg.leaf_rule_bound();
    let mut centers = high.clone();
    let mut leaves = VertexSet::new(n);
    let mut labels = vec![None; n];

    let mut outside_c: Vec<usize> = (0..n)
        .map(|v| gprime.degree(v) - high.count_in(gprime.neighbors(v)))
        .collect();
    let mut outside_l: Vec<usize> = (0..n).map(|v| gprime.degree(v)).collect();
    let open = |v: usize, centers: &VertexSet, leaves: &VertexSet| {
        !special.contains(v) && !centers.contains(v) && !leaves.contains(v)
    };
    let eligible = |v: usize, oc: &[usize], ol: &[usize]| oc[v] as f64 <= rule_d || ol[v] as f64 <= leaf_bound;

    let mut queue: BTreeSet<usize> = (0..n)
        .filter(|&v| open(v, &centers, &leaves) && eligible(v, &outside_c, &outside_l))
        .collect();
    let mut cursor = 0;
    let mut t = 0;
    while let Some(&v) = queue.range(cursor..).next().or_else(|| queue.iter().next()) {
        queue.remove(&v);
        t += 1;
        labels[v] = Some(t);
        cursor = v + 1;
        let to_leaf = outside_c[v] as f64 <= rule_d;
        if to_leaf {
            leaves.insert(v);
        } else {
            centers.insert(v);
        }
        for &u in gprime.neighbors(v) {
            if to_leaf {
                outside_l[u] -= 1;
            } else {
                outside_c[u] -= 1;
            }
            if open(u, &centers, &leaves) && eligible(u, &outside_c, &outside_l) {
                queue.insert(u);
            }
        }
    }
    let free = VertexSet::from_iter(n, (0..n).filter(|&v| open(v, &centers, &leaves)));
    PhaseState {
        high: high.clone(),
        special: special.clone(),
        centers,
        leaves,
        free,
        late: VertexSet::new(n),
        labels,
        t0: t,
        pruned: gprime.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LateChoice {
    pub late: VertexSet,
    pub rounds: usize,
}

/// Samples `T ⊆ F` so that every free vertex sees `C ∪ T` and no vertex
/// outside `H` has more than [`GeneralConfig::t_cap`] neighbours in `T`.
/// Does not touch the labels; see [`label_free`].
pub fn choose_late(state: &PhaseState, cfg: &GeneralConfig, seed: u64) -> Result<LateChoice> {
    let g = &state.pruned;
    let n = g.vertex_count();
    let free = state.free.to_vec();
    let mut var_of = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        var_of[v] = i;
    }
    let free_scope = |v: usize| -> Vec<usize> {
        g.neighbors(v)
            .iter()
            .filter_map(|&u| (var_of[u] != usize::MAX).then_some(var_of[u]))
            .collect()
    };
    let cap = cfg.t_cap();
    let mut sys = EventSystem::new(free.len());
    for v in 0..n {
        if state.special.contains(v) {
            continue;
        }
        let scope = free_scope(v);
        if state.free.contains(v) && !g.neighbors(v).iter().any(|&u| state.centers.contains(u)) {
            if scope.is_empty() {
                return Err(Error::Invariant(format!(
                    "free vertex {v} has neither center nor free neighbours"
                )));
            }
            sys.add_event(scope.clone(), |vals| !vals.iter().any(|&b| b))?;
        }
        if !state.high.contains(v) && scope.len() > cap {
            sys.add_event(scope, move |vals| vals.iter().filter(|&&b| b).count() > cap)?;
        }
    }
    if free.is_empty() {
        return Ok(LateChoice {
            late: VertexSet::new(n),
            rounds: 0,
        });
    }
    let a = resample_until_good(&sys, cfg.p_free(), seed, cfg.rounds_for(&sys))?;
    Ok(LateChoice {
        late: VertexSet::from_iter(n, a.chosen().map(|i| free[i])),
        rounds: a.rounds_used,
    })
}

/// Stores `T` in the state and labels `F - T` with `t0 + 1, ...`, then `T`
/// with the largest labels, each in ascending id order.
pub fn label_free(state: &mut PhaseState, late: VertexSet) {
    let mut t = state.t0;
    let free = state.free.to_vec();
    for &v in free.iter().filter(|&&v| !late.contains(v)) {
        t += 1;
        state.labels[v] = Some(t);
    }
    for &v in free.iter().filter(|&&v| late.contains(v)) {
        t += 1;
        state.labels[v] = Some(t);
    }
    state.late = late;
}

/// The time-respecting assignment graph: centers `(C - H) ∪ T` on the left,
/// prospective leaves `L ∪ (F - T)` on the right, `v ~ u` iff `uv` is an edge
/// of `G'` and `t(u) < t(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignGraphB {
    pub graph: BipGraph,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Builds the assignment graph and audits its degree properties.
pub fn build_b(state: &PhaseState, cfg: &GeneralConfig) -> Result<AssignGraphB> {
    let b = assignment_graph(state)?;
    audit_assignment_graph(state, &b, cfg)?;
    Ok(b)
}

/// The assignment graph without audits.
pub fn assignment_graph(state: &PhaseState) -> Result<AssignGraphB> {
    let g = &state.pruned;
    let left = state.assignable_centers();
    let right = state.assignable_leaves();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &u) in right.iter().enumerate() {
        index[u] = i;
    }
    let mut adj = Vec::with_capacity(left.len());
    for &v in &left {
        let tv = state.labels[v].ok_or_else(|| Error::Invariant(format!("center {v} has no label")))?;
        let mut row = Vec::new();
        for &u in g.neighbors(v) {
            if index[u] == usize::MAX {
                continue;
            }
            let tu = state.labels[u].ok_or_else(|| Error::Invariant(format!("leaf {u} has no label")))?;
            if tu < tv {
                row.push(index[u]);
            }
        }
        adj.push(row);
    }
    Ok(AssignGraphB {
        graph: BipGraph::from_adjacency(right.len(), adj)?,
        left,
        right,
    })
}

/// The five degree properties of the assignment graph plus time order.
pub fn audit_assignment_graph(state: &PhaseState, b: &AssignGraphB, cfg: &GeneralConfig) -> Result<()> {
    let fail = |clause: &str, msg: String| Err(Error::Invariant(format!("assignment graph clause {clause}: {msg}")));
    let rule_d = cfg.rule_d();
    let cap = cfg.t_cap();
    let mut to_rule_centers = vec![0usize; b.right.len()];
    let mut to_late = vec![0usize; b.right.len()];
    for (li, &v) in b.left.iter().enumerate() {
        let tv = state.labels[v].unwrap();
        let is_late = state.late.contains(v);
        for &ri in b.graph.neighbors(li) {
            let u = b.right[ri];
            if state.labels[u].unwrap() >= tv {
                return fail("time", format!("edge ({v}, {u}) does not decrease the label"));
            }
            if is_late {
                to_late[ri] += 1;
            } else {
                to_rule_centers[ri] += 1;
            }
        }
        let deg = b.graph.degree(li);
        if is_late {
            if deg as f64 <= rule_d / 2.0 {
                return fail(
                    "(v)",
                    format!("late center {v} has degree {deg} <= D/2 = {:.3}", rule_d / 2.0),
                );
            }
        } else if (deg as f64) < cfg.center_degree_floor() {
            return fail(
                "(iv)",
                format!("center {v} has degree {deg} < {:.3}", cfg.center_degree_floor()),
            );
        }
    }
    for (ri, &u) in b.right.iter().enumerate() {
        if state.leaves.contains(u) {
            if to_rule_centers[ri] as f64 > rule_d {
                return fail(
                    "(i)",
                    format!("leaf {u} sees {} rule centers > D = {rule_d:.3}", to_rule_centers[ri]),
                );
            }
            if to_late[ri] > cap {
                return fail("(ii)", format!("leaf {u} sees {} late centers > {cap}", to_late[ri]));
            }
        } else {
            if to_rule_centers[ri] > 0 {
                return fail("(iii)", format!("free leaf {u} is joined to a rule center"));
            }
            if to_late[ri] > cap {
                return fail(
                    "(iii)",
                    format!("free leaf {u} sees {} late centers > {cap}", to_late[ri]),
                );
            }
        }
    }
    Ok(())
}

/// Conditions (i) and (ii) on the kept set `S`.
pub fn audit_special(g: &Graph, split: &HighSplit, special: &VertexSet, cfg: &GeneralConfig) -> Result<()> {
    if !special.is_subset(&split.pool()) {
        return Err(Error::Invariant("S is not contained in the pool".into()));
    }
    for v in 0..g.vertex_count() {
        if split.high.contains(v) {
            let Some(block) = split.blocks.get(&v) else { continue };
            let kept = match cfg.special_scope {
                SpecialScope::AssignedBlock => special.count_in(block),
                SpecialScope::FullNeighborhood => special.count_in(g.neighbors(v)),
            };
            if kept < cfg.special_min() {
                return Err(Error::Invariant(format!(
                    "condition (i): high vertex {v} keeps {kept} < {}",
                    cfg.special_min()
                )));
            }
        } else {
            let outside = g.degree(v) - special.count_in(g.neighbors(v));
            if (outside as f64) < cfg.special_keep() {
                return Err(Error::Invariant(format!(
                    "condition (ii): vertex {v} has {outside} neighbours outside S < {:.3}",
                    cfg.special_keep()
                )));
            }
        }
    }
    Ok(())
}

/// Neither rule can fire on a free vertex.
pub fn audit_fixpoint(state: &PhaseState, cfg: &GeneralConfig) -> Result<()> {
    let g = &state.pruned;
    for v in state.free.iter() {
        let outside_c = g.neighbors(v).iter().filter(|&&u| !state.centers.contains(u)).count();
        let outside_l = g.neighbors(v).iter().filter(|&&u| !state.leaves.contains(u)).count();
        if outside_c as f64 <= cfg.rule_d() || outside_l as f64 <= cfg.leaf_rule_bound() {
            return Err(Error::Invariant(format!("free vertex {v} still triggers a rule")));
        }
    }
    Ok(())
}

/// Both arms of the late-center conditions.
pub fn audit_late(state: &PhaseState, cfg: &GeneralConfig) -> Result<()> {
    let g = &state.pruned;
    if !state.late.is_subset(&state.free) {
        return Err(Error::Invariant("T is not contained in F".into()));
    }
    for v in state.free.iter() {
        if !g
            .neighbors(v)
            .iter()
            .any(|&u| state.centers.contains(u) || state.late.contains(u))
        {
            return Err(Error::Invariant(format!("free vertex {v} sees no center")));
        }
    }
    for v in 0..g.vertex_count() {
        if state.special.contains(v) || state.high.contains(v) {
            continue;
        }
        let k = state.late.count_in(g.neighbors(v));
        if k > cfg.t_cap() {
            return Err(Error::Invariant(format!(
                "vertex {v} has {k} late neighbours > {}",
                cfg.t_cap()
            )));
        }
    }
    Ok(())
}

/// Samples random left subsets `X` and checks `|N(X)| >= q |X|`.
pub fn spot_check_expansion(b: &BipGraph, quota: usize, samples: usize, seed: u64) -> Result<()> {
    let left = b.left_count();
    if left == 0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..left).collect();
    for _ in 0..samples {
        let k = rng.gen_range(1..=left);
        ids.shuffle(&mut rng);
        let x = &ids[..k];
        let nx = b.neighborhood_size(x);
        if nx < quota * k {
            return Err(Error::Invariant(format!("|N(X)| = {nx} < {quota} * {k}")));
        }
    }
    Ok(())
}

/// Every intermediate product of a general-pipeline run.
#[derive(Clone, Debug)]
pub struct GeneralRun {
    pub solution: Solution,
    pub pruned: Graph,
    pub split: HighSplit,
    pub state: PhaseState,
    pub assignment_graph: AssignGraphB,
}

/// Builds the star factor for a graph of minimum degree `cfg.d`.
pub fn star_factor_general(g: &Graph, cfg: &GeneralConfig) -> Result<Solution> {
    run_general(g, cfg).map(|run| run.solution)
}

pub fn run_general(g: &Graph, cfg: &GeneralConfig) -> Result<GeneralRun> {
    cfg.check()?;
    let n = g.vertex_count();
    let pruned = prune_high_high_edges(g, cfg.d).map_err(|e| e.in_phase("prune"))?;

    let split = split_high(&pruned, cfg).map_err(|e| e.in_phase("split-high"))?;
    let special = choose_special(&pruned, &split, cfg, cfg.seed).map_err(|e| e.in_phase("special"))?;
    let gprime = pruned.without_vertices(&special.special);

    let mut state = run_rules(&gprime, &split.high, &special.special, cfg);
    let free_count = state.free.len();
    let late = choose_late(&state, cfg, cfg.seed.wrapping_add(1)).map_err(|e| e.in_phase("late-centers"))?;
    label_free(&mut state, late.late);

    let b = build_b(&state, cfg).map_err(|e| e.in_phase("assignment-graph"))?;

    let mut report = RunReport {
        mode: "general".into(),
        n,
        d: cfg.d,
        p_free: Some(cfg.p_free()),
        h: Some(cfg.h()),
        rule_d: Some(cfg.rule_d()),
        high: Some(split.high.len()),
        special: Some(special.special.len()),
        centers: Some(state.centers.len()),
        leaves: Some(state.leaves.len()),
        free: Some(free_count),
        late_centers: Some(state.late.len()),
        t0: Some(state.t0),
        quota_requested: cfg.quota_request(),
        asymptotic_target: cfg.special_lower(),
        fallbacks: split.fallbacks.iter().map(|f| format!("split-high: {f}")).collect(),
        ..Default::default()
    };
    report.resample_rounds.insert("special".into(), special.rounds);
    report.resample_rounds.insert("late_centers".into(), late.rounds);
    for (k, v) in [
        ("high_degree", cfg.high_threshold()),
        ("h_quota", cfg.h_quota() as f64),
        ("special_min", cfg.special_min() as f64),
        ("special_keep", cfg.special_keep()),
        ("leaf_rule", cfg.leaf_rule_bound()),
        ("late_neighbors_max", cfg.t_cap() as f64),
        ("center_degree_floor", cfg.center_degree_floor()),
        ("p_formula", cfg.p_formula()),
        ("relax", cfg.relax),
    ] {
        report.thresholds.insert(k.into(), v);
    }
    report.choices.insert(
        "special_scope".into(),
        serde_json::to_value(cfg.special_scope)
            .unwrap()
            .as_str()
            .unwrap()
            .into(),
    );
    report
        .choices
        .insert("leftover_target".into(), "lowest_id_center".into());

    let mut fallbacks = Vec::new();
    let leaves = assign_leaves(&b.graph, cfg.quota_request(), &mut fallbacks);
    report.quota_achieved = leaves.achieved;
    report
        .fallbacks
        .extend(fallbacks.into_iter().map(|f| format!("assignment: {f}")));

    let mut builder = StarBuilder::new(&pruned);
    for v in state.centers.iter().chain(state.late.iter()) {
        builder.make_center(v);
    }
    for (&v, block) in &split.blocks {
        for &s in block.iter().filter(|&&s| special.special.contains(s)) {
            builder.attach(s, v);
        }
    }
    for (ri, owner) in leaves.assignment.owner.iter().enumerate() {
        if let Some(li) = *owner {
            builder.attach(b.right[ri], b.left[li]);
        }
    }
    for &u in &b.right {
        if !builder.is_assigned(u) {
            builder.attach_to_lowest_center(u, &gprime);
        }
    }
    let stats = builder.repair().map_err(|e| e.in_phase("repair"))?;
    if !stats.is_empty() {
        report.fallbacks.push(format!(
            "repair: {} orphans, {} leafless centers",
            stats.orphans, stats.leafless_centers
        ));
    }
    let factor = builder.finish();
    report.record_factor(&factor);

    Ok(GeneralRun {
        solution: Solution { factor, report },
        pruned,
        split,
        state,
        assignment_graph: b,
    })
}
