//! Vertex-link shellability in an iterated subdivision.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{is_shellable, CheckOutcome, SearchBudget, ShellingCertificate};
use crate::complex::SimplicialComplex;
use crate::constructions::sd_m;
use crate::error::{Result, TopologyError};
use crate::simplex::{Simplex, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkAggregate {
    AllPositive,
    AnyNegative,
    AnyUnknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexLink {
    pub vertex: Vertex,
    pub outcome: CheckOutcome<ShellingCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlLinksReport {
    /// The subdivided complex whose vertex links were checked.
    pub subdivision: SimplicialComplex,
    pub per_vertex: Vec<VertexLink>,
    pub aggregate: LinkAggregate,
}

/// Checks `is_shellable(link(v))` for every vertex `v` of `sd^m M`. The link
/// of an isolated vertex is empty and counts as shellable.
pub fn pl_links_check(m: &SimplicialComplex, rounds: i64, budget: &SearchBudget) -> Result<PlLinksReport> {
    if !m.is_pure()? {
        return Err(TopologyError::NotPure);
    }
    let subdivision = sd_m(m, rounds)?;
    let check = |v: Vertex| -> Result<VertexLink> {
        let link = subdivision.link_unchecked(&Simplex::from([v]));
        let outcome = if link.is_empty() {
            let cert = ShellingCertificate { removal_order: Vec::new(), target: link };
            CheckOutcome { verdict: super::Verdict::Positive(cert), stats: Default::default() }
        } else {
            is_shellable(&link, &SearchBudget { jobs: 1, ..budget.clone() })?
        };
        Ok(VertexLink { vertex: v, outcome })
    };
    let vertices = subdivision.vertices();
    let per_vertex: Vec<VertexLink> = if budget.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(budget.jobs).build().expect("thread pool");
        pool.install(|| vertices.par_iter().map(|&v| check(v)).collect::<Result<_>>())?
    } else {
        vertices.iter().map(|&v| check(v)).collect::<Result<_>>()?
    };
    let aggregate = if per_vertex.iter().any(|l| l.outcome.is_negative()) {
        LinkAggregate::AnyNegative
    } else if per_vertex.iter().any(|l| l.outcome.is_unknown()) {
        LinkAggregate::AnyUnknown
    } else {
        LinkAggregate::AllPositive
    };
    Ok(PlLinksReport { subdivision, per_vertex, aggregate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_links_are_cycles() {
        let s = SimplicialComplex::boundary_of_simplex(2);
        let report = pl_links_check(&s, 0, &SearchBudget::default()).unwrap();
        assert_eq!(report.aggregate, LinkAggregate::AllPositive);
        assert_eq!(report.per_vertex.len(), 4);
        for l in &report.per_vertex {
            let link = s.link(&Simplex::from([l.vertex])).unwrap();
            assert_eq!(link.num_facets(), 3);
        }
    }

    #[test]
    fn bowtie_vertex_fails() {
        // two triangles glued at a vertex: that vertex's link is two edges
        let c = SimplicialComplex::from_facets([[0, 1, 2], [0, 3, 4]]);
        let report = pl_links_check(&c, 0, &SearchBudget::exhaustive()).unwrap();
        assert_eq!(report.aggregate, LinkAggregate::AnyNegative);
        let bad: Vec<Vertex> = report.per_vertex.iter().filter(|l| l.outcome.is_negative()).map(|l| l.vertex).collect();
        assert_eq!(bad, vec![0]);
    }

    #[test]
    fn not_pure_is_an_error() {
        let c = SimplicialComplex::from_facets(vec![vec![0, 1, 2], vec![5]]);
        assert!(matches!(pl_links_check(&c, 1, &SearchBudget::default()), Err(TopologyError::NotPure)));
    }
}
