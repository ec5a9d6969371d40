//! Collapsibility and relative collapses.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{deadline_for, run_restarts, CheckOutcome, Cutoff, IndexedSet, Meter, RunRng, SearchBudget, Verdict};
use crate::complex::SimplicialComplex;
use crate::error::{Result, TopologyError};
use crate::homology::betti_z2;
use crate::iso::{canonical_key, CanonicalKey};
use crate::simplex::Simplex;

/// Ordered elementary collapses `(free_face, coface)` from a source complex
/// down to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseCertificate {
    pub steps: Vec<(Simplex, Simplex)>,
    pub target: SimplicialComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayError {
    /// Failing step, or `None` when the residue differs from the target.
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

/// Replays `cert` on `source` face by face with a plain set of faces.
pub fn check_collapse(source: &SimplicialComplex, cert: &CollapseCertificate) -> Result<(), ReplayError> {
    let mut faces: HashSet<Simplex> = source.all_faces().into_iter().collect();
    let universe = source.vertices();
    for (i, (free, coface)) in cert.steps.iter().enumerate() {
        let fail = |reason: &str| Err(ReplayError { step: Some(i), reason: reason.to_string() });
        if free.is_empty() || !faces.contains(free) || !faces.contains(coface) {
            return fail("face not present");
        }
        if coface.len() != free.len() + 1 || !free.is_face_of(coface) {
            return fail("coface is not a codimension-one coface");
        }
        let cofaces =
            universe.iter().filter(|&&v| !free.contains_vertex(v) && faces.contains(&free.with_vertex(v))).count();
        if cofaces != 1 {
            return fail("face is not free");
        }
        faces.remove(free);
        faces.remove(coface);
    }
    let target: HashSet<Simplex> = cert.target.all_faces().into_iter().collect();
    if faces != target {
        return Err(ReplayError { step: None, reason: "residue differs from target".into() });
    }
    Ok(())
}

pub fn verify_collapse(source: &SimplicialComplex, cert: &CollapseCertificate) -> bool {
    check_collapse(source, cert).is_ok()
}

/// Hasse diagram restricted to codimension-one incidences.
pub(crate) struct Lattice {
    faces: Vec<Simplex>,
    cofaces: Vec<Vec<u32>>,
    ridges: Vec<Vec<u32>>,
}

impl Lattice {
    pub(crate) fn new(c: &SimplicialComplex) -> Self {
        let faces = c.all_faces();
        let index: HashMap<&Simplex, u32> = faces.iter().enumerate().map(|(i, f)| (f, i as u32)).collect();
        let mut cofaces = vec![Vec::new(); faces.len()];
        let mut ridges = vec![Vec::new(); faces.len()];
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for r in f.ridges() {
                let j = index[&r];
                cofaces[j as usize].push(i as u32);
                ridges[i].push(j);
            }
        }
        Lattice { faces, cofaces, ridges }
    }
}

/// Mutable collapse state over a [`Lattice`].
pub(crate) struct State<'a> {
    lat: &'a Lattice,
    alive: Vec<bool>,
    count: Vec<u32>,
    protected: Vec<bool>,
    alive_n: usize,
}

impl<'a> State<'a> {
    pub(crate) fn new(lat: &'a Lattice, protected: &HashSet<Simplex>) -> Self {
        let n = lat.faces.len();
        State {
            lat,
            alive: vec![true; n],
            count: lat.cofaces.iter().map(|c| c.len() as u32).collect(),
            protected: lat.faces.iter().map(|f| protected.contains(f)).collect(),
            alive_n: n,
        }
    }

    fn is_free(&self, s: u32) -> bool {
        let s = s as usize;
        self.alive[s] && !self.protected[s] && self.count[s] == 1
    }

    fn coface_of(&self, s: u32) -> u32 {
        *self.lat.cofaces[s as usize].iter().find(|&&c| self.alive[c as usize]).expect("free face has a coface")
    }

    fn free_pairs(&self) -> Vec<(u32, u32)> {
        (0..self.alive.len() as u32).filter(|&s| self.is_free(s)).map(|s| (s, self.coface_of(s))).collect()
    }

    fn apply(&mut self, (s, c): (u32, u32)) {
        self.alive[s as usize] = false;
        self.alive[c as usize] = false;
        self.alive_n -= 2;
        for &r in &self.lat.ridges[s as usize] {
            self.count[r as usize] -= 1;
        }
        for &r in &self.lat.ridges[c as usize] {
            self.count[r as usize] -= 1;
        }
    }

    fn undo(&mut self, (s, c): (u32, u32)) {
        self.alive[s as usize] = true;
        self.alive[c as usize] = true;
        self.alive_n += 2;
        for &r in &self.lat.ridges[s as usize] {
            self.count[r as usize] += 1;
        }
        for &r in &self.lat.ridges[c as usize] {
            self.count[r as usize] += 1;
        }
    }

    fn residual(&self) -> SimplicialComplex {
        SimplicialComplex::from_antichain(
            (0..self.alive.len())
                .filter(|&i| self.alive[i] && self.count[i] == 0)
                .map(|i| self.lat.faces[i].clone())
                .collect(),
        )
    }

    fn bitset(&self) -> Vec<u64> {
        let mut bits = vec![0u64; self.alive.len().div_ceil(64)];
        for (i, &a) in self.alive.iter().enumerate() {
            if a {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        bits
    }

    fn steps(&self, path: &[(u32, u32)]) -> Vec<(Simplex, Simplex)> {
        path.iter().map(|&(s, c)| (self.lat.faces[s as usize].clone(), self.lat.faces[c as usize].clone())).collect()
    }
}

#[derive(Hash, PartialEq, Eq)]
enum MemoKey {
    Canonical(CanonicalKey),
    Exact(Vec<u64>),
}

/// Vertex count up to which memo keys are exact canonical forms.
const EXACT_CANON_LIMIT: usize = 20;

/// Search problem: collapse `source` until exactly `goal_faces` faces remain,
/// never touching `protected`.
pub(crate) struct CollapseProblem<'a> {
    pub(crate) source: &'a SimplicialComplex,
    pub(crate) protected: HashSet<Simplex>,
    pub(crate) goal_faces: usize,
    /// Residues may be identified up to isomorphism (no protected part).
    pub(crate) canonical_memo: bool,
}

impl CollapseProblem<'_> {
    fn key(&self, st: &State) -> MemoKey {
        if self.canonical_memo {
            MemoKey::Canonical(canonical_key(&st.residual(), EXACT_CANON_LIMIT))
        } else {
            MemoKey::Exact(st.bitset())
        }
    }

    /// Greedy collapse preferring the highest-dimensional free pairs.
    fn greedy(
        &self,
        lat: &Lattice,
        mut rng: RunRng,
        deadline: Instant,
        steps: &AtomicU64,
    ) -> Option<Vec<(Simplex, Simplex)>> {
        let mut st = State::new(lat, &self.protected);
        let dims = lat.faces.iter().map(|f| f.len()).max().unwrap_or(0) + 1;
        let mut buckets = vec![IndexedSet::default(); dims];
        for s in 0..lat.faces.len() as u32 {
            if st.is_free(s) {
                buckets[lat.faces[s as usize].len()].insert(s);
            }
        }
        let mut path = Vec::new();
        loop {
            steps.fetch_add(1, Ordering::Relaxed);
            if st.alive_n == self.goal_faces {
                return Some(st.steps(&path));
            }
            if path.len() % 1024 == 1023 && Instant::now() > deadline {
                return None;
            }
            let bucket = buckets.iter().rposition(|b| !b.is_empty())?;
            let s = buckets[bucket].pick(&mut rng).expect("nonempty bucket");
            let c = st.coface_of(s);
            st.apply((s, c));
            path.push((s, c));
            buckets[bucket].remove(s);
            for &r in lat.ridges[s as usize].iter().chain(&lat.ridges[c as usize]) {
                let b = lat.faces[r as usize].len();
                if st.is_free(r) {
                    buckets[b].insert(r);
                } else {
                    buckets[b].remove(r);
                }
            }
        }
    }

    /// Memoized depth-first search over all collapse orders.
    fn exhaustive(&self, lat: &Lattice, meter: &mut Meter) -> Result<Option<Vec<(Simplex, Simplex)>>, Cutoff> {
        struct Frame {
            pairs: Vec<(u32, u32)>,
            next: usize,
            key: MemoKey,
        }
        let mut st = State::new(lat, &self.protected);
        if st.alive_n == self.goal_faces {
            return Ok(Some(Vec::new()));
        }
        let mut dead: HashSet<MemoKey> = HashSet::new();
        let mut path: Vec<(u32, u32)> = Vec::new();
        let mut stack = vec![Frame { pairs: st.free_pairs(), next: 0, key: self.key(&st) }];
        while let Some(top) = stack.last_mut() {
            if top.next < top.pairs.len() {
                let p = top.pairs[top.next];
                top.next += 1;
                meter.tick()?;
                st.apply(p);
                path.push(p);
                if st.alive_n == self.goal_faces {
                    return Ok(Some(st.steps(&path)));
                }
                let key = self.key(&st);
                if dead.contains(&key) {
                    meter.hit();
                    st.undo(p);
                    path.pop();
                    continue;
                }
                stack.push(Frame { pairs: st.free_pairs(), next: 0, key });
            } else {
                let done = stack.pop().expect("nonempty stack");
                dead.insert(done.key);
                if let Some(p) = path.pop() {
                    st.undo(p);
                }
            }
        }
        Ok(None)
    }

    pub(crate) fn run(&self, budget: &SearchBudget, meter: &mut Meter) -> Verdict<Vec<(Simplex, Simplex)>> {
        let lat = Lattice::new(self.source);
        if budget.runs_greedy() {
            let deadline = deadline_for(budget);
            let found = run_restarts(budget, deadline, meter, |rng, dl, n| self.greedy(&lat, rng, dl, n));
            if let Some(steps) = found {
                return Verdict::Positive(steps);
            }
        }
        if budget.runs_exhaustive() {
            return match self.exhaustive(&lat, meter) {
                Ok(Some(steps)) => Verdict::Positive(steps),
                Ok(None) => Verdict::Negative,
                Err(Cutoff) => Verdict::Unknown,
            };
        }
        Verdict::Unknown
    }
}

fn padded(mut b: Vec<usize>, len: usize) -> Vec<usize> {
    b.resize(len, 0);
    b
}

/// Collapse onto a single vertex.
pub fn is_collapsible(c: &SimplicialComplex, budget: &SearchBudget) -> Result<CheckOutcome<CollapseCertificate>> {
    let mut meter = Meter::new(budget);
    collapsible_with(c, budget, &mut meter).map(|v| meter.finish(v))
}

pub(crate) fn collapsible_with(
    c: &SimplicialComplex,
    budget: &SearchBudget,
    meter: &mut Meter,
) -> Result<Verdict<CollapseCertificate>> {
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    // collapses preserve homotopy type
    if !c.is_connected() || betti_z2(c)?.iter().any(|&b| b != 0) {
        return Ok(Verdict::Negative);
    }
    let problem = CollapseProblem { source: c, protected: HashSet::new(), goal_faces: 1, canonical_memo: true };
    Ok(match problem.run(budget, meter) {
        Verdict::Positive(steps) => {
            let removed: HashSet<&Simplex> = steps.iter().flat_map(|(a, b)| [a, b]).collect();
            let last = c.faces(0).into_iter().find(|v| !removed.contains(v)).expect("one vertex remains");
            Verdict::Positive(CollapseCertificate { steps, target: SimplicialComplex::from_antichain(vec![last]) })
        }
        Verdict::Negative => Verdict::Negative,
        Verdict::Unknown => Verdict::Unknown,
    })
}

/// `C ↘ D`: collapse `c` onto its subcomplex `d` without removing faces of `d`.
pub fn collapses_onto(
    c: &SimplicialComplex,
    d: &SimplicialComplex,
    budget: &SearchBudget,
) -> Result<CheckOutcome<CollapseCertificate>> {
    let mut meter = Meter::new(budget);
    collapses_onto_with(c, d, budget, &mut meter).map(|v| meter.finish(v))
}

pub(crate) fn collapses_onto_with(
    c: &SimplicialComplex,
    d: &SimplicialComplex,
    budget: &SearchBudget,
    meter: &mut Meter,
) -> Result<Verdict<CollapseCertificate>> {
    if !c.contains_complex(d) {
        return Err(TopologyError::NotASubcomplex);
    }
    let certificate = |steps| Verdict::Positive(CollapseCertificate { steps, target: d.clone() });
    if c == d {
        return Ok(certificate(Vec::new()));
    }
    if d.is_empty() {
        // the last vertex can never be removed
        return Ok(Verdict::Negative);
    }
    let (bc, bd) = (betti_z2(c)?, betti_z2(d)?);
    let len = bc.len().max(bd.len());
    if padded(bc, len) != padded(bd, len) || c.components().len() != d.components().len() {
        return Ok(Verdict::Negative);
    }
    let protected: HashSet<Simplex> = d.all_faces().into_iter().collect();
    let problem = CollapseProblem { source: c, goal_faces: protected.len(), protected, canonical_memo: false };
    Ok(match problem.run(budget, meter) {
        Verdict::Positive(steps) => certificate(steps),
        Verdict::Negative => Verdict::Negative,
        Verdict::Unknown => Verdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::Strategy;
    use crate::Vertex;

    fn sc(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| Simplex::from(*f)))
    }

    #[test]
    fn simplices_collapse() {
        for d in 0..5 {
            let c = SimplicialComplex::simplex(d);
            for budget in [SearchBudget::exhaustive(), SearchBudget::greedy(3, 4)] {
                let out = is_collapsible(&c, &budget).unwrap();
                let cert = out.certificate().expect("positive");
                assert!(verify_collapse(&c, cert));
            }
        }
    }

    #[test]
    fn spheres_and_disconnected_are_negative() {
        let out = is_collapsible(&SimplicialComplex::boundary_of_simplex(2), &SearchBudget::exhaustive()).unwrap();
        assert!(out.is_negative());
        let out = is_collapsible(&sc(&[&[0, 1], &[2]]), &SearchBudget::exhaustive()).unwrap();
        assert!(out.is_negative());
        assert!(is_collapsible(&SimplicialComplex::empty(), &SearchBudget::default()).is_err());
    }

    #[test]
    fn greedy_alone_never_refutes() {
        // contractible, no free faces: exhaustive refutes at the root, greedy cannot
        let dunce = crate::zoo::get("dunce_hat").unwrap().complex;
        let out = is_collapsible(&dunce, &SearchBudget::greedy(0, 3)).unwrap();
        assert!(out.is_unknown());
        assert!(is_collapsible(&dunce, &SearchBudget::exhaustive()).unwrap().is_negative());
    }

    #[test]
    fn relative_collapses() {
        let tri = SimplicialComplex::simplex(2);
        let edge = sc(&[&[0, 1]]);
        let out = collapses_onto(&tri, &edge, &SearchBudget::exhaustive()).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.target, edge);
        assert!(verify_collapse(&tri, cert));
        let same = collapses_onto(&tri, &tri, &SearchBudget::default()).unwrap();
        assert!(same.certificate().unwrap().steps.is_empty());
        assert_eq!(
            collapses_onto(&tri, &sc(&[&[0, 9]]), &SearchBudget::default()).map(|_| ()),
            Err(TopologyError::NotASubcomplex)
        );
        // a disk does not collapse onto its boundary circle
        let bd = tri.boundary().unwrap();
        assert!(collapses_onto(&tri, &bd, &SearchBudget::exhaustive()).unwrap().is_negative());
    }

    #[test]
    fn replay_rejects_bad_certificates() {
        let e = sc(&[&[1, 2]]);
        let good =
            CollapseCertificate { steps: vec![(Simplex::from([1]), Simplex::from([1, 2]))], target: sc(&[&[2]]) };
        assert!(verify_collapse(&e, &good));
        let wrong_target = CollapseCertificate { target: sc(&[&[1]]), ..good.clone() };
        assert_eq!(check_collapse(&e, &wrong_target).unwrap_err().step, None);

        let tri = SimplicialComplex::simplex(2);
        let out = is_collapsible(&tri, &SearchBudget { strategy: Strategy::Exhaustive, ..Default::default() }).unwrap();
        let mut cert = out.certificate().unwrap().clone();
        cert.steps.reverse();
        assert_eq!(check_collapse(&tri, &cert).unwrap_err().step, Some(0));
    }

    #[test]
    fn node_budget_yields_unknown() {
        // a 3-ball with a budget too small to finish
        let c = crate::constructions::sd(&SimplicialComplex::simplex(3)).unwrap();
        let budget = SearchBudget::exhaustive().with_nodes(3);
        assert!(is_collapsible(&c, &budget).unwrap().is_unknown());
    }
}
