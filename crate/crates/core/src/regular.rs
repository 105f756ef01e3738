//! Star factors in d-regular graphs.
//!
//! Centers are sampled independently with probability `p = (2 + 2 ln d) / d`
//! and resampled until every vertex has between 1 and `3pd` center
//! neighbours. Each center then gets `q` private non-center neighbours by
//! quota matching, and every remaining vertex joins its lowest-id center
//! neighbour.

use serde::Serialize;

use crate::bmatch::{max_uniform_quota, maximum_matching, quota_matching, BipGraph, QuotaAssignment, QuotaOutcome};
use crate::error::{Error, Result};
use crate::factor::{StarBuilder, StarFactor};
use crate::graph::{Graph, VertexSet};
use crate::report::RunReport;
use crate::resample::{resample_until_good, EventSystem};

/// Smallest degree accepted by the regular pipeline.
pub const MIN_REGULAR_DEGREE: usize = 11;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularConfig {
    pub d: usize,
    pub seed: u64,
    /// Resampling budget; `None` means 50 * (variables + events).
    pub max_rounds: Option<usize>,
}

impl RegularConfig {
    pub fn new(d: usize, seed: u64) -> Self {
        RegularConfig {
            d,
            seed,
            max_rounds: None,
        }
    }

    fn ln_d(&self) -> f64 {
        (self.d as f64).ln()
    }

    /// Center probability `(2 + 2 ln d) / d`.
    pub fn p(&self) -> f64 {
        (2.0 + 2.0 * self.ln_d()) / self.d as f64
    }

    /// `3pd = 6 + 6 ln d`, the most center neighbours a vertex may have.
    pub fn upper_threshold(&self) -> f64 {
        3.0 * self.p() * self.d as f64
    }

    /// `floor((d - 6 - 6 ln d) / (6 + 6 ln d))`, possibly zero or negative.
    pub fn quota_target(&self) -> i64 {
        let t = self.upper_threshold();
        ((self.d as f64 - t) / t).floor() as i64
    }

    /// The quota actually requested from the matcher.
    pub fn quota_request(&self) -> usize {
        self.quota_target().max(1) as usize
    }

    /// `d / (7 ln d)`, reported only.
    pub fn asymptotic_target(&self) -> f64 {
        self.d as f64 / (7.0 * self.ln_d())
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.d < MIN_REGULAR_DEGREE {
            return Err(Error::DegreeTooSmall {
                d: self.d,
                min: MIN_REGULAR_DEGREE,
            });
        }
        g.require_regular(self.d)
    }
}

/// The center set and the resampling rounds it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterChoice {
    pub centers: VertexSet,
    pub rounds: usize,
}

/// Samples a center set `C` with `0 < |N(v) ∩ C| <= 3pd` for every `v`.
pub fn pick_centers_regular(g: &Graph, cfg: &RegularConfig) -> Result<CenterChoice> {
    cfg.check(g)?;
    let n = g.vertex_count();
    let upper = cfg.upper_threshold();
    let mut sys = EventSystem::new(n);
    for v in 0..n {
        sys.add_event(g.neighbors(v).to_vec(), move |vals| {
            let k = vals.iter().filter(|&&b| b).count();
            k == 0 || k as f64 > upper
        })?;
    }
    let max_rounds = cfg.max_rounds.unwrap_or_else(|| sys.default_max_rounds());
    let a = resample_until_good(&sys, cfg.p(), cfg.seed, max_rounds)?;
    Ok(CenterChoice {
        centers: VertexSet::from_iter(n, a.chosen()),
        rounds: a.rounds_used,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub factor: StarFactor,
    pub report: RunReport,
}

/// Left = `centers` ascending, right = the rest ascending, edges from `g`.
pub(crate) fn center_bipartite(g: &Graph, centers: &[usize], others: &[usize]) -> Result<BipGraph> {
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &u) in others.iter().enumerate() {
        index[u] = i;
    }
    let adj = centers
        .iter()
        .map(|&c| {
            g.neighbors(c)
                .iter()
                .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
                .collect()
        })
        .collect();
    BipGraph::from_adjacency(others.len(), adj)
}

/// Outcome of the leaf-assignment step, including how it degraded.
pub(crate) struct LeafAssignment {
    pub assignment: QuotaAssignment,
    pub achieved: usize,
}

/// Quota matching at `requested`, falling back to the largest feasible
/// uniform quota, and to a plain maximum matching when even that is zero.
pub(crate) fn assign_leaves(b: &BipGraph, requested: usize, fallbacks: &mut Vec<String>) -> LeafAssignment {
    match quota_matching(b, requested) {
        QuotaOutcome::Assigned(assignment) => LeafAssignment {
            assignment,
            achieved: requested,
        },
        QuotaOutcome::Deficient(cert) => {
            let q = max_uniform_quota(b);
            fallbacks.push(format!(
                "quota {requested} infeasible (|X|={}, |N(X)|={}); max uniform quota is {q}",
                cert.violator.len(),
                cert.neighborhood_size
            ));
            if q >= 1 {
                let assignment = quota_matching(b, q)
                    .assignment()
                    .expect("max_uniform_quota is feasible");
                LeafAssignment {
                    assignment,
                    achieved: q,
                }
            } else {
                fallbacks.push("maximum matching with star repair".into());
                LeafAssignment {
                    assignment: maximum_matching(b),
                    achieved: 0,
                }
            }
        }
    }
}

/// Builds the star factor for a d-regular graph.
pub fn star_factor_regular(g: &Graph, cfg: &RegularConfig) -> Result<Solution> {
    let choice = pick_centers_regular(g, cfg).map_err(|e| e.in_phase("centers"))?;
    let n = g.vertex_count();
    let centers = choice.centers.to_vec();
    let others: Vec<usize> = (0..n).filter(|&v| !choice.centers.contains(v)).collect();
    let b = center_bipartite(g, &centers, &others)?;

    let mut report = RunReport {
        mode: "regular".into(),
        n,
        d: cfg.d,
        p: Some(cfg.p()),
        centers: Some(centers.len()),
        quota_requested: cfg.quota_request(),
        asymptotic_target: cfg.asymptotic_target(),
        ..Default::default()
    };
    report.resample_rounds.insert("centers".into(), choice.rounds);
    report
        .thresholds
        .insert("center_neighbors_max".into(), cfg.upper_threshold());
    report
        .thresholds
        .insert("quota_formula".into(), cfg.quota_target() as f64);

    let leaves = assign_leaves(&b, cfg.quota_request(), &mut report.fallbacks);
    report.quota_achieved = leaves.achieved;

    let mut builder = StarBuilder::new(g);
    for &c in &centers {
        builder.make_center(c);
    }
    for (ri, owner) in leaves.assignment.owner.iter().enumerate() {
        if let Some(li) = *owner {
            builder.attach(others[ri], centers[li]);
        }
    }
    for &u in &others {
        if !builder.is_assigned(u) && !builder.attach_to_lowest_center(u, g) {
            return Err(Error::Invariant(format!("vertex {u} has no center neighbour")).in_phase("leftovers"));
        }
    }
    let stats = builder.repair().map_err(|e| e.in_phase("repair"))?;
    if !stats.is_empty() {
        report.fallbacks.push(format!(
            "repaired {} leafless centers and {} orphans",
            stats.leafless_centers, stats.orphans
        ));
    }
    let factor = builder.finish();
    report.record_factor(&factor);
    Ok(Solution { factor, report })
}
