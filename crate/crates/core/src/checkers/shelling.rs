//! Shellability, relative shellings and conforming shellings.
//!
//! Searches build shellings forward: a facet may be added when it meets the
//! union of the placed facets in a nonempty pure codimension-one complex. For
//! simplicial facets such an intersection is automatically shellable, so the
//! removal-order certificate is the reversed construction order.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::collapse::ReplayError;
use super::{deadline_for, run_restarts, CheckOutcome, Cutoff, IndexedSet, Meter, RunRng, SearchBudget, Verdict};
use crate::complex::SimplicialComplex;
use crate::constructions::{join, join_offset};
use crate::error::{Result, TopologyError};
use crate::simplex::Simplex;

/// Facets removed one by one from a complex, ending at `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingCertificate {
    pub removal_order: Vec<Simplex>,
    pub target: SimplicialComplex,
}

impl ShellingCertificate {
    /// Certificate for a shelling given in construction order `F1, F2, ..`.
    pub fn from_shelling_order(order: &[Simplex]) -> Self {
        let (first, rest) = order.split_first().expect("nonempty shelling");
        ShellingCertificate {
            removal_order: rest.iter().rev().cloned().collect(),
            target: SimplicialComplex::from_antichain(vec![first.clone()]),
        }
    }

    /// Target facets followed by the removed facets in reverse.
    pub fn shelling_order(&self) -> Vec<Simplex> {
        self.target.facets().iter().cloned().chain(self.removal_order.iter().rev().cloned()).collect()
    }

    /// The complex this certificate starts from.
    pub fn source(&self) -> SimplicialComplex {
        SimplicialComplex::from_facets(self.shelling_order())
    }
}

/// Replays a removal order. Each removed facet must meet the remaining
/// complex in a nonempty pure codimension-one subcomplex (in dimension 0 any
/// order is a shelling), and the residue must equal the target.
pub fn check_shelling(c: &SimplicialComplex, cert: &ShellingCertificate) -> Result<(), ReplayError> {
    let whole = |reason: &str| Err(ReplayError { step: None, reason: reason.into() });
    if c.is_empty() || !c.is_pure().unwrap_or(false) {
        return whole("complex is empty or not pure");
    }
    let mut current: BTreeSet<Simplex> = c.facets().iter().cloned().collect();
    for (i, f) in cert.removal_order.iter().enumerate() {
        let fail = |reason: &str| Err(ReplayError { step: Some(i), reason: reason.into() });
        if !current.remove(f) {
            return fail("not a facet of the remaining complex");
        }
        if current.is_empty() || f.len() == 1 {
            continue;
        }
        let meets: Vec<Simplex> = current.iter().map(|g| f.intersection(g)).filter(|x| !x.is_empty()).collect();
        let ridges: Vec<&Simplex> = meets.iter().filter(|x| x.len() + 1 == f.len()).collect();
        if ridges.is_empty() {
            return fail("facet does not meet the rest in a codimension-one face");
        }
        if !meets.iter().all(|x| ridges.iter().any(|r| x.is_face_of(r))) {
            return fail("intersection with the rest is not pure");
        }
    }
    let target: BTreeSet<Simplex> = cert.target.facets().iter().cloned().collect();
    if current != target {
        return whole("residue differs from target");
    }
    Ok(())
}

pub fn verify_shelling(c: &SimplicialComplex, cert: &ShellingCertificate) -> bool {
    check_shelling(c, cert).is_ok()
}

type Bits = Vec<u64>;

fn get(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut Bits, i: usize, on: bool) {
    if on {
        bits[i / 64] |= 1 << (i % 64);
    } else {
        bits[i / 64] &= !(1 << (i % 64));
    }
}

/// Facet adjacency with intersections stored as bitmasks over each facet's
/// own vertex positions.
pub(crate) struct ShellGraph {
    facets: Vec<Simplex>,
    adj: Vec<Vec<(u32, u64)>>,
}

impl ShellGraph {
    pub(crate) fn new(c: &SimplicialComplex) -> Self {
        let facets = c.facets().to_vec();
        let mut by_vertex: std::collections::HashMap<u32, Vec<u32>> = Default::default();
        for (i, f) in facets.iter().enumerate() {
            for &v in f.vertices() {
                by_vertex.entry(v).or_default().push(i as u32);
            }
        }
        let adj = facets
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let neighbours: BTreeSet<u32> = f
                    .vertices()
                    .iter()
                    .flat_map(|v| by_vertex[v].iter().copied())
                    .filter(|&j| j as usize != i)
                    .collect();
                neighbours
                    .into_iter()
                    .map(|j| {
                        let g = &facets[j as usize];
                        let mask = f
                            .vertices()
                            .iter()
                            .enumerate()
                            .filter(|(_, v)| g.contains_vertex(**v))
                            .fold(0u64, |m, (p, _)| m | 1 << p);
                        (j, mask)
                    })
                    .collect()
            })
            .collect();
        ShellGraph { facets, adj }
    }

    fn n(&self) -> usize {
        self.facets.len()
    }

    fn empty_bits(&self) -> Bits {
        vec![0; self.n().div_ceil(64).max(1)]
    }

    /// Number of shared ridges if facet `i` can be added to `placed`.
    fn addable(&self, i: usize, placed: &Bits, any_placed: bool) -> Option<u32> {
        if !any_placed {
            return Some(0);
        }
        let len = self.facets[i].len() as u32;
        let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let mut ridge_gaps = 0u64;
        for &(j, m) in &self.adj[i] {
            if get(placed, j as usize) && m.count_ones() + 1 == len {
                ridge_gaps |= full & !m;
            }
        }
        if ridge_gaps == 0 {
            return None;
        }
        for &(j, m) in &self.adj[i] {
            if get(placed, j as usize) && full & !m & ridge_gaps == 0 {
                return None;
            }
        }
        Some(ridge_gaps.count_ones())
    }

    fn candidates(&self, placed: &Bits, any_placed: bool) -> Vec<u32> {
        let mut c: Vec<(u32, u32)> = (0..self.n())
            .filter(|&i| !get(placed, i))
            .filter_map(|i| self.addable(i, placed, any_placed).map(|s| (i as u32, s)))
            .collect();
        // most shared ridges first, then facet order
        c.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        c.into_iter().map(|(i, _)| i).collect()
    }

    /// Memoized DFS from `start`; returns the added facets in order.
    fn exhaustive(&self, start: &[u32], meter: &mut Meter) -> Result<Option<Vec<u32>>, Cutoff> {
        struct Frame {
            cands: Vec<u32>,
            next: usize,
        }
        let mut placed = self.empty_bits();
        for &s in start {
            set(&mut placed, s as usize, true);
        }
        let mut count = start.len();
        if count == self.n() {
            return Ok(Some(Vec::new()));
        }
        let mut dead: HashSet<Bits> = HashSet::new();
        let mut path: Vec<u32> = Vec::new();
        let mut stack = vec![Frame { cands: self.candidates(&placed, count > 0), next: 0 }];
        while let Some(top) = stack.last_mut() {
            if top.next < top.cands.len() {
                let f = top.cands[top.next];
                top.next += 1;
                meter.tick()?;
                set(&mut placed, f as usize, true);
                count += 1;
                path.push(f);
                if count == self.n() {
                    return Ok(Some(path));
                }
                if dead.contains(&placed) {
                    meter.hit();
                    set(&mut placed, f as usize, false);
                    count -= 1;
                    path.pop();
                    continue;
                }
                stack.push(Frame { cands: self.candidates(&placed, true), next: 0 });
            } else {
                stack.pop();
                if let Some(f) = path.pop() {
                    dead.insert(placed.clone());
                    set(&mut placed, f as usize, false);
                    count -= 1;
                }
            }
        }
        Ok(None)
    }

    /// Greedy construction preferring facets that close the most ridges.
    fn greedy(&self, start: &[u32], mut rng: RunRng, deadline: Instant, steps: &AtomicU64) -> Option<Vec<u32>> {
        let mut placed = self.empty_bits();
        let mut order = Vec::new();
        let start: Vec<u32> = if start.is_empty() {
            let first = match rng.as_mut() {
                None => 0,
                Some(r) => rand::Rng::gen_range(r, 0..self.n() as u32),
            };
            order.push(first);
            vec![first]
        } else {
            start.to_vec()
        };
        for &s in &start {
            set(&mut placed, s as usize, true);
        }
        let max_len = self.facets.iter().map(Simplex::len).max().unwrap_or(0);
        let mut buckets = vec![IndexedSet::default(); max_len + 1];
        let mut score: Vec<Option<u32>> = vec![None; self.n()];
        let refresh = |i: usize, placed: &Bits, buckets: &mut Vec<IndexedSet>, score: &mut Vec<Option<u32>>| {
            if let Some(s) = score[i] {
                buckets[s as usize].remove(i as u32);
            }
            score[i] = if get(placed, i) { None } else { self.addable(i, placed, true) };
            if let Some(s) = score[i] {
                buckets[s as usize].insert(i as u32);
            }
        };
        let touched: BTreeSet<u32> = start.iter().flat_map(|&s| self.adj[s as usize].iter().map(|&(j, _)| j)).collect();
        for j in touched {
            refresh(j as usize, &placed, &mut buckets, &mut score);
        }
        let mut count = start.len();
        while count < self.n() {
            steps.fetch_add(1, Ordering::Relaxed);
            if order.len() % 256 == 255 && Instant::now() > deadline {
                return None;
            }
            let b = buckets.iter().rposition(|b| !b.is_empty())?;
            let f = buckets[b].pick(&mut rng).expect("nonempty bucket") as usize;
            buckets[b].remove(f as u32);
            score[f] = None;
            set(&mut placed, f, true);
            count += 1;
            order.push(f as u32);
            for &(j, _) in &self.adj[f] {
                refresh(j as usize, &placed, &mut buckets, &mut score);
            }
        }
        Some(order)
    }

    fn search(&self, start: &[u32], budget: &SearchBudget, meter: &mut Meter) -> Verdict<Vec<u32>> {
        if budget.runs_greedy() {
            let deadline = deadline_for(budget);
            let found = run_restarts(budget, deadline, meter, |rng, dl, n| self.greedy(start, rng, dl, n));
            if let Some(order) = found {
                return Verdict::Positive(order);
            }
        }
        if budget.runs_exhaustive() {
            return match self.exhaustive(start, meter) {
                Ok(Some(order)) => Verdict::Positive(order),
                Ok(None) => Verdict::Negative,
                Err(Cutoff) => Verdict::Unknown,
            };
        }
        Verdict::Unknown
    }
}

fn require_pure(c: &SimplicialComplex) -> Result<()> {
    if c.is_pure()? {
        Ok(())
    } else {
        Err(TopologyError::NotPure)
    }
}

/// Searches for a shelling of a pure complex. The certificate removes facets
/// down to the first facet of the shelling.
pub fn is_shellable(c: &SimplicialComplex, budget: &SearchBudget) -> Result<CheckOutcome<ShellingCertificate>> {
    let mut meter = Meter::new(budget);
    shellable_with(c, budget, &mut meter).map(|v| meter.finish(v))
}

pub(crate) fn shellable_with(
    c: &SimplicialComplex,
    budget: &SearchBudget,
    meter: &mut Meter,
) -> Result<Verdict<ShellingCertificate>> {
    require_pure(c)?;
    if c.dim() == 0 {
        return Ok(Verdict::Positive(ShellingCertificate::from_shelling_order(c.facets())));
    }
    let graph = ShellGraph::new(c);
    Ok(match graph.search(&[], budget, meter) {
        Verdict::Positive(order) => {
            let facets: Vec<Simplex> = order.iter().map(|&i| graph.facets[i as usize].clone()).collect();
            Verdict::Positive(ShellingCertificate::from_shelling_order(&facets))
        }
        Verdict::Negative => Verdict::Negative,
        Verdict::Unknown => Verdict::Unknown,
    })
}

/// `C ↘ₛ D` for pure complexes of equal dimension with `D ⊆ C`.
pub fn shells_to(
    c: &SimplicialComplex,
    d: &SimplicialComplex,
    budget: &SearchBudget,
) -> Result<CheckOutcome<ShellingCertificate>> {
    require_pure(c)?;
    require_pure(d)?;
    if c.dim() != d.dim() {
        return Err(TopologyError::DimensionMismatch(c.dim(), d.dim()));
    }
    if !c.contains_complex(d) {
        return Err(TopologyError::NotASubcomplex);
    }
    let mut meter = Meter::new(budget);
    let graph = ShellGraph::new(c);
    let start: Vec<u32> =
        d.facets().iter().map(|f| graph.facets.binary_search(f).expect("facet of c") as u32).collect();
    if c.dim() == 0 {
        let removal = c.facets().iter().filter(|f| !d.facets().contains(f)).cloned().collect();
        return Ok(meter.finish(Verdict::Positive(ShellingCertificate { removal_order: removal, target: d.clone() })));
    }
    let verdict = match graph.search(&start, budget, &mut meter) {
        Verdict::Positive(order) => Verdict::Positive(ShellingCertificate {
            removal_order: order.iter().rev().map(|&i| graph.facets[i as usize].clone()).collect(),
            target: d.clone(),
        }),
        Verdict::Negative => Verdict::Negative,
        Verdict::Unknown => Verdict::Unknown,
    };
    Ok(meter.finish(verdict))
}

/// True iff every intermediate restriction `R(C_i, |D|)` of the shelling is
/// pure. The restriction is the subcomplex of `C_i` of faces lying in `d`.
pub fn is_conforming(c: &SimplicialComplex, cert: &ShellingCertificate, d: &SimplicialComplex) -> Result<bool> {
    check_shelling(c, cert).map_err(|e| TopologyError::InvalidCertificate(e.to_string()))?;
    if !c.contains_complex(d) {
        return Err(TopologyError::NotASubcomplex);
    }
    let restriction_is_pure = |current: &[Simplex]| {
        let gens = current.iter().flat_map(|f| d.facets().iter().map(move |g| f.intersection(g)));
        let r = SimplicialComplex::from_facets(gens.collect::<Vec<_>>());
        r.is_empty() || r.is_pure().unwrap_or(false)
    };
    let mut current: Vec<Simplex> = c.facets().to_vec();
    if !restriction_is_pure(&current) {
        return Ok(false);
    }
    for f in &cert.removal_order {
        current.retain(|g| g != f);
        if !restriction_is_pure(&current) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shelling of `A * B` in lexicographic order of facet pairs, from shellings
/// of `A` and `B` that end at single facets. Labels follow [`join`].
pub fn join_shelling(a: &ShellingCertificate, b: &ShellingCertificate) -> Result<ShellingCertificate> {
    let (ca, cb) = (a.source(), b.source());
    for (c, cert, name) in [(&ca, a, "first"), (&cb, b, "second")] {
        if cert.target.num_facets() != 1 {
            return Err(TopologyError::InvalidCertificate(format!("{name} certificate does not end at a facet")));
        }
        check_shelling(c, cert).map_err(|e| TopologyError::InvalidCertificate(format!("{name}: {e}")))?;
    }
    let shift = join_offset(&ca);
    let order: Vec<Simplex> = a
        .shelling_order()
        .iter()
        .flat_map(|f| b.shelling_order().into_iter().map(move |g| f.union(&g.map(|v| v + shift))))
        .collect();
    debug_assert_eq!(SimplicialComplex::from_facets(order.clone()), join(&ca, &cb));
    Ok(ShellingCertificate::from_shelling_order(&order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vertex;
    use itertools::Itertools;

    fn sc(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| Simplex::from(*f)))
    }

    /// Independent oracle: the definition checked over a construction order.
    fn is_shelling_order(order: &[Simplex]) -> bool {
        (1..order.len()).all(|i| {
            let f = &order[i];
            if f.len() == 1 {
                return true;
            }
            let meets: Vec<Simplex> = order[..i].iter().map(|g| f.intersection(g)).filter(|x| !x.is_empty()).collect();
            let ridges: Vec<&Simplex> = meets.iter().filter(|x| x.len() + 1 == f.len()).collect();
            !ridges.is_empty() && meets.iter().all(|x| ridges.iter().any(|r| x.is_face_of(r)))
        })
    }

    #[test]
    fn every_order_shells_the_tetrahedron_boundary() {
        let s = SimplicialComplex::boundary_of_simplex(2);
        let mut n = 0;
        for perm in s.facets().iter().cloned().permutations(4) {
            assert!(is_shelling_order(&perm));
            assert!(verify_shelling(&s, &ShellingCertificate::from_shelling_order(&perm)));
            n += 1;
        }
        assert_eq!(n, 24);
    }

    #[test]
    fn hexagon_orders_match_oracle() {
        let hex = SimplicialComplex::from_facets((0..6u32).map(|i| Simplex::from([i, (i + 1) % 6])));
        let mut good = 0;
        for perm in hex.facets().iter().cloned().permutations(6) {
            let ok = verify_shelling(&hex, &ShellingCertificate::from_shelling_order(&perm));
            assert_eq!(ok, is_shelling_order(&perm));
            good += ok as usize;
        }
        // start anywhere (6 ways), then grow an arc left or right: 6 * 2^4
        assert_eq!(good, 96);
    }

    #[test]
    fn disjoint_triangles_never_shell() {
        let c = sc(&[&[0, 1, 2], &[5, 6, 7]]);
        let cert = ShellingCertificate::from_shelling_order(c.facets());
        assert_eq!(check_shelling(&c, &cert).unwrap_err().step, Some(0));
        assert!(is_shellable(&c, &SearchBudget::exhaustive()).unwrap().is_negative());
    }

    #[test]
    fn sphere_is_shellable() {
        let s = SimplicialComplex::boundary_of_simplex(2);
        for budget in [SearchBudget::exhaustive(), SearchBudget::greedy(9, 2)] {
            let out = is_shellable(&s, &budget).unwrap();
            assert!(verify_shelling(&s, out.certificate().unwrap()));
        }
        assert_eq!(is_shellable(&sc(&[&[0, 1], &[2]]), &SearchBudget::default()), Err(TopologyError::NotPure));
    }

    #[test]
    fn points_shell_in_any_order() {
        let pts = sc(&[&[0], &[3], &[4]]);
        let out = is_shellable(&pts, &SearchBudget::default()).unwrap();
        assert!(verify_shelling(&pts, out.certificate().unwrap()));
    }

    #[test]
    fn bowtie_is_not_shellable() {
        // two triangles sharing only a vertex
        let c = sc(&[&[0, 1, 2], &[0, 3, 4]]);
        assert!(is_shellable(&c, &SearchBudget::exhaustive()).unwrap().is_negative());
    }

    #[test]
    fn relative_shellings() {
        let disk = sc(&[&[0, 1, 9], &[1, 2, 9], &[0, 2, 9]]);
        let one = sc(&[&[0, 1, 9]]);
        let out = shells_to(&disk, &one, &SearchBudget::exhaustive()).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.removal_order.len(), 2);
        assert!(verify_shelling(&disk, cert));
        let same = shells_to(&disk, &disk, &SearchBudget::default()).unwrap();
        assert!(same.certificate().unwrap().removal_order.is_empty());
        assert_eq!(
            shells_to(&disk, &sc(&[&[0, 1]]), &SearchBudget::default()).map(|_| ()),
            Err(TopologyError::DimensionMismatch(2, 1))
        );
        assert_eq!(
            shells_to(&disk, &sc(&[&[0, 1, 5]]), &SearchBudget::default()).map(|_| ()),
            Err(TopologyError::NotASubcomplex)
        );
    }

    #[test]
    fn conforming_trivial_and_errors() {
        let c = sc(&[&[1, 2, 3], &[2, 3, 4]]);
        let out = is_shellable(&c, &SearchBudget::exhaustive()).unwrap();
        let cert = out.certificate().unwrap();
        assert!(is_conforming(&c, cert, &c).unwrap());
        let bad = ShellingCertificate { removal_order: vec![], target: sc(&[&[1, 2, 3]]) };
        assert!(matches!(is_conforming(&c, &bad, &c), Err(TopologyError::InvalidCertificate(_))));
    }

    #[test]
    fn join_of_point_pairs_is_a_square() {
        let s0 = SimplicialComplex::boundary_of_simplex(0);
        let cert = is_shellable(&s0, &SearchBudget::default()).unwrap().certificate().unwrap().clone();
        let j = join_shelling(&cert, &cert).unwrap();
        let square = join(&s0, &s0);
        assert_eq!(square.num_facets(), 4);
        assert!(verify_shelling(&square, &j));
    }
}
