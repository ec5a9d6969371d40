//! Endocollapsibility: some facet, removed as an open cell, leaves a complex
//! that collapses onto the boundary (onto a vertex when there is none).

use serde::{Deserialize, Serialize};

use super::collapse::{check_collapse, collapses_onto_with, collapsible_with};
use super::{CheckOutcome, CollapseCertificate, Meter, SearchBudget, Strategy, Verdict};
use crate::complex::SimplicialComplex;
use crate::error::{Result, TopologyError};
use crate::simplex::Simplex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoCertificate {
    pub removed_facet: Simplex,
    /// Collapse of the punctured complex onto the boundary or a vertex.
    pub collapse: CollapseCertificate,
}

fn boundary_or_empty(c: &SimplicialComplex) -> Result<SimplicialComplex> {
    if c.dim() < 1 {
        return Ok(SimplicialComplex::empty());
    }
    c.boundary()
}

fn require_pseudomanifold(c: &SimplicialComplex) -> Result<()> {
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    if !c.is_pseudomanifold() {
        return Err(TopologyError::NotPseudomanifold("a ridge lies in three or more facets, or C is not pure".into()));
    }
    Ok(())
}

pub fn verify_endocollapse(c: &SimplicialComplex, cert: &EndoCertificate) -> bool {
    let Ok(boundary) = boundary_or_empty(c) else { return false };
    let Ok(punctured) = c.remove_open_facet(&cert.removed_facet) else { return false };
    let target_ok = if boundary.is_empty() {
        cert.collapse.target.facets().len() == 1 && cert.collapse.target.vertex_count() == 1
    } else {
        cert.collapse.target == boundary
    };
    target_ok && check_collapse(&punctured, &cert.collapse).is_ok()
}

fn attempt(
    punctured: &SimplicialComplex,
    boundary: &SimplicialComplex,
    budget: &SearchBudget,
    meter: &mut Meter,
) -> Result<Verdict<CollapseCertificate>> {
    if boundary.is_empty() {
        collapsible_with(punctured, budget, meter)
    } else {
        collapses_onto_with(punctured, boundary, budget, meter)
    }
}

/// Facets are tried in sorted order: greedy runs on every facet first, then
/// exhaustive search facet by facet.
pub fn is_endocollapsible(c: &SimplicialComplex, budget: &SearchBudget) -> Result<CheckOutcome<EndoCertificate>> {
    require_pseudomanifold(c)?;
    let boundary = boundary_or_empty(c)?;
    let mut meter = Meter::new(budget);
    let mut phases = Vec::new();
    if budget.runs_greedy() {
        phases.push(SearchBudget { strategy: Strategy::GreedyRestarts, ..budget.clone() });
    }
    if budget.runs_exhaustive() {
        phases.push(SearchBudget { strategy: Strategy::Exhaustive, ..budget.clone() });
    }
    for phase in &phases {
        let mut all_negative = phase.strategy == Strategy::Exhaustive;
        for f in c.facets() {
            if meter.out_of_time() {
                return Ok(meter.finish(Verdict::Unknown));
            }
            let punctured = c.remove_open_facet(f)?;
            match attempt(&punctured, &boundary, phase, &mut meter)? {
                Verdict::Positive(collapse) => {
                    let cert = EndoCertificate { removed_facet: f.clone(), collapse };
                    return Ok(meter.finish(Verdict::Positive(cert)));
                }
                Verdict::Negative => {}
                Verdict::Unknown => all_negative = false,
            }
        }
        if all_negative {
            return Ok(meter.finish(Verdict::Negative));
        }
    }
    Ok(meter.finish(Verdict::Unknown))
}
