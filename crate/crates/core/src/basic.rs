//! Baseline star factor for any graph without isolated vertices: a greedy
//! maximal independent set as centers, every other vertex attached to its
//! lowest-id center neighbour, then local repair of leafless centers.

use crate::error::{Error, Result};
use crate::factor::StarBuilder;
use crate::graph::Graph;
use crate::regular::Solution;
use crate::report::RunReport;

pub fn star_factor_basic(g: &Graph) -> Result<Solution> {
    let d = g.min_degree()?;
    if d == 0 {
        return Err(Error::MinDegree { required: 1, actual: 0 });
    }
    let n = g.vertex_count();
    let mut builder = StarBuilder::new(g);
    let mut blocked = vec![false; n];
    for v in 0..n {
        if !blocked[v] {
            builder.make_center(v);
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    for v in 0..n {
        if !builder.is_assigned(v) {
            builder.attach_to_lowest_center(v, g);
        }
    }
    let stats = builder.repair()?;
    let factor = builder.finish();
    let mut report = RunReport {
        mode: "basic".into(),
        n,
        d,
        quota_requested: 1,
        quota_achieved: 1,
        asymptotic_target: 1.0,
        ..Default::default()
    };
    if !stats.is_empty() {
        report
            .choices
            .insert("repair".into(), format!("{} leafless centers", stats.leafless_centers));
    }
    report.record_factor(&factor);
    Ok(Solution { factor, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::validate_star_factor;

    #[test]
    fn small_graphs() {
        for g in [
            Graph::complete(2),
            Graph::complete(5),
            Graph::cycle(5).unwrap(),
            Graph::cycle(9).unwrap(),
        ] {
            let sol = star_factor_basic(&g).unwrap();
            assert!(
                validate_star_factor(&g, &sol.factor, 1).valid,
                "{}",
                sol.factor.to_text()
            );
        }
    }

    #[test]
    fn rejects_isolated_vertices() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(star_factor_basic(&g).is_err());
    }
}
