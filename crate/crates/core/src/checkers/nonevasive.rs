//! Non-evasiveness: a point is non-evasive, and a larger complex is
//! non-evasive when for some vertex both the link and the deletion are.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{deadline_for, run_restarts, CheckOutcome, Cutoff, Meter, RunRng, SearchBudget, Verdict};
use crate::complex::SimplicialComplex;
use crate::error::{Result, TopologyError};
use crate::homology::betti_z2;
use crate::iso::{canonical_labeling, CanonicalKey};
use crate::simplex::{Simplex, Vertex};

/// A decision tree witnessing non-evasiveness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonevasiveTree {
    Point { vertex: Vertex },
    Split { vertex: Vertex, link: Box<NonevasiveTree>, deletion: Box<NonevasiveTree> },
}

impl NonevasiveTree {
    pub fn vertex(&self) -> Vertex {
        match self {
            NonevasiveTree::Point { vertex } | NonevasiveTree::Split { vertex, .. } => *vertex,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            NonevasiveTree::Point { .. } => 1,
            NonevasiveTree::Split { link, deletion, .. } => 1 + link.size() + deletion.size(),
        }
    }
}

pub fn verify_nonevasive(c: &SimplicialComplex, tree: &NonevasiveTree) -> bool {
    match tree {
        NonevasiveTree::Point { vertex } => c.facets() == [Simplex::from([*vertex])],
        NonevasiveTree::Split { vertex, link, deletion } => {
            c.vertex_count() >= 2
                && c.contains_face(&Simplex::from([*vertex]))
                && verify_nonevasive(&c.link_unchecked(&Simplex::from([*vertex])), link)
                && verify_nonevasive(&c.delete_vertex(*vertex), deletion)
        }
    }
}

const CANON_LIMIT: usize = 24;

/// Necessary conditions: non-evasive implies collapsible implies acyclic.
fn screen(c: &SimplicialComplex) -> Option<bool> {
    if c.is_empty() || !c.is_connected() {
        return Some(false);
    }
    if c.vertex_count() == 1 {
        return Some(true);
    }
    if betti_z2(c).expect("nonempty").iter().any(|&b| b != 0) {
        return Some(false);
    }
    None
}

/// Connected acyclic graphs: every tree is non-evasive by peeling leaves.
fn tree_certificate(c: &SimplicialComplex) -> NonevasiveTree {
    let mut g = c.clone();
    let mut leaves = Vec::new();
    while g.vertex_count() > 1 {
        let leaf = g
            .vertices()
            .into_iter()
            .find(|&v| g.facets().iter().filter(|f| f.contains_vertex(v)).count() == 1)
            .expect("a tree has a leaf");
        let nbr = g.link_unchecked(&Simplex::from([leaf])).vertices()[0];
        leaves.push((leaf, nbr));
        g = g.delete_vertex(leaf);
    }
    let mut tree = NonevasiveTree::Point { vertex: g.vertices()[0] };
    for (leaf, nbr) in leaves.into_iter().rev() {
        tree = NonevasiveTree::Split {
            vertex: leaf,
            link: Box::new(NonevasiveTree::Point { vertex: nbr }),
            deletion: Box::new(tree),
        };
    }
    tree
}

struct Search {
    /// Canonical key to the canonical label of a good vertex, or `None`.
    memo: HashMap<CanonicalKey, Option<u32>>,
}

impl Search {
    fn decide(&mut self, c: &SimplicialComplex, meter: &mut Meter) -> Result<Option<NonevasiveTree>, Cutoff> {
        meter.tick()?;
        match screen(c) {
            Some(false) => return Ok(None),
            Some(true) => return Ok(Some(NonevasiveTree::Point { vertex: c.vertices()[0] })),
            None => {}
        }
        if c.dim() == 1 {
            return Ok(Some(tree_certificate(c)));
        }
        let labeling = canonical_labeling(c, CANON_LIMIT);
        if let Some(known) = self.memo.get(&labeling.key) {
            meter.hit();
            return match known {
                None => Ok(None),
                Some(cv) => {
                    let v = labeling.from_canonical(*cv).expect("vertex of the complex");
                    Ok(Some(self.split(c, v, meter)?.expect("memoized vertex works")))
                }
            };
        }
        for v in candidate_order(c) {
            if let Some(tree) = self.split(c, v, meter)? {
                let cv = labeling.to_canonical(v);
                self.memo.insert(labeling.key, cv);
                return Ok(Some(tree));
            }
        }
        self.memo.insert(labeling.key, None);
        Ok(None)
    }

    fn split(&mut self, c: &SimplicialComplex, v: Vertex, meter: &mut Meter) -> Result<Option<NonevasiveTree>, Cutoff> {
        let link = c.link_unchecked(&Simplex::from([v]));
        let Some(lt) = self.decide(&link, meter)? else { return Ok(None) };
        let Some(dt) = self.decide(&c.delete_vertex(v), meter)? else { return Ok(None) };
        Ok(Some(NonevasiveTree::Split { vertex: v, link: Box::new(lt), deletion: Box::new(dt) }))
    }
}

/// Vertices with the smallest stars first: their links are cheapest and
/// deleting them changes the least.
fn candidate_order(c: &SimplicialComplex) -> Vec<Vertex> {
    let mut degree: HashMap<Vertex, usize> = HashMap::new();
    for f in c.facets() {
        for &v in f.vertices() {
            *degree.entry(v).or_default() += 1;
        }
    }
    let mut vs = c.vertices();
    vs.sort_by_key(|v| (degree[v], *v));
    vs
}

/// One descent without backtracking: take the first vertex whose link and
/// deletion pass the acyclicity screen and whose link is non-evasive.
fn greedy(
    c: &SimplicialComplex,
    mut rng: RunRng,
    deadline: std::time::Instant,
    steps: &AtomicU64,
) -> Option<NonevasiveTree> {
    steps.fetch_add(1, Ordering::Relaxed);
    if std::time::Instant::now() > deadline {
        return None;
    }
    match screen(c) {
        Some(false) => return None,
        Some(true) => return Some(NonevasiveTree::Point { vertex: c.vertices()[0] }),
        None => {}
    }
    if c.dim() == 1 {
        return Some(tree_certificate(c));
    }
    let mut order = candidate_order(c);
    if let Some(r) = rng.as_mut() {
        order.shuffle(r);
    }
    for v in order {
        let link = c.link_unchecked(&Simplex::from([v]));
        let rest = c.delete_vertex(v);
        if screen(&link) == Some(false) || screen(&rest) == Some(false) {
            continue;
        }
        let sub = rng.clone();
        let Some(lt) = greedy(&link, sub.clone(), deadline, steps) else { continue };
        let dt = greedy(&rest, sub, deadline, steps)?;
        return Some(NonevasiveTree::Split { vertex: v, link: Box::new(lt), deletion: Box::new(dt) });
    }
    None
}

pub fn is_nonevasive(c: &SimplicialComplex, budget: &SearchBudget) -> Result<CheckOutcome<NonevasiveTree>> {
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    let mut meter = Meter::new(budget);
    if screen(c) == Some(false) {
        return Ok(meter.finish(Verdict::Negative));
    }
    if budget.runs_greedy() {
        let found = run_restarts(budget, deadline_for(budget), &mut meter, |rng, dl, n| greedy(c, rng, dl, n));
        if let Some(tree) = found {
            return Ok(meter.finish(Verdict::Positive(tree)));
        }
    }
    if !budget.runs_exhaustive() {
        return Ok(meter.finish(Verdict::Unknown));
    }
    let mut search = Search { memo: HashMap::new() };
    let verdict = match search.decide(c, &mut meter) {
        Ok(Some(tree)) => Verdict::Positive(tree),
        Ok(None) => Verdict::Negative,
        Err(Cutoff) => Verdict::Unknown,
    };
    Ok(meter.finish(verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| Simplex::from(*f)))
    }

    #[test]
    fn simplices_and_trees() {
        for d in 0..5 {
            let c = SimplicialComplex::simplex(d);
            for budget in [SearchBudget::exhaustive(), SearchBudget::greedy(1, 3)] {
                let out = is_nonevasive(&c, &budget).unwrap();
                assert!(verify_nonevasive(&c, out.certificate().unwrap()));
            }
        }
        let star = sc(&[&[0, 1], &[0, 2], &[0, 3], &[3, 4]]);
        let tree = tree_certificate(&star);
        assert!(verify_nonevasive(&star, &tree));
    }

    #[test]
    fn cycles_and_spheres_are_evasive() {
        let c = sc(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(is_nonevasive(&c, &SearchBudget::exhaustive()).unwrap().is_negative());
        let s = SimplicialComplex::boundary_of_simplex(2);
        assert!(is_nonevasive(&s, &SearchBudget::exhaustive()).unwrap().is_negative());
    }

    #[test]
    fn cone_over_anything_is_nonevasive() {
        let base = SimplicialComplex::boundary_of_simplex(1);
        let c = crate::constructions::cone(&base, 10).unwrap();
        let out = is_nonevasive(&c, &SearchBudget::exhaustive()).unwrap();
        assert!(verify_nonevasive(&c, out.certificate().unwrap()));
    }

    #[test]
    fn bad_trees_are_rejected() {
        let edge = sc(&[&[0, 1]]);
        let point = NonevasiveTree::Point { vertex: 0 };
        assert!(!verify_nonevasive(&edge, &point));
        let wrong = NonevasiveTree::Split {
            vertex: 5,
            link: Box::new(NonevasiveTree::Point { vertex: 1 }),
            deletion: Box::new(NonevasiveTree::Point { vertex: 1 }),
        };
        assert!(!verify_nonevasive(&edge, &wrong));
    }
}
