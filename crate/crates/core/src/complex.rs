//! The simplicial complex value type and its face algebra.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TopologyError};
use crate::simplex::{Simplex, Vertex};

/// A finite simplicial complex stored by its facets.
///
/// Facets are kept sorted and form an antichain, so two complexes are equal
/// exactly when their facet sets agree. Lower faces are implicit.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "FacetList", into = "FacetList")]
pub struct SimplicialComplex {
    facets: Vec<Simplex>,
}

/// Serialized form; deserializing re-maximalizes the facet list.
#[derive(Serialize, Deserialize)]
struct FacetList {
    facets: Vec<Simplex>,
}

impl From<FacetList> for SimplicialComplex {
    fn from(f: FacetList) -> Self {
        SimplicialComplex::from_facets(f.facets)
    }
}

impl From<SimplicialComplex> for FacetList {
    fn from(c: SimplicialComplex) -> Self {
        FacetList { facets: c.facets }
    }
}

/// Number of faces per dimension, starting at dimension 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }
}

impl SimplicialComplex {
    /// Builds a complex from arbitrary generating simplices; faces of other
    /// generators and duplicates are dropped. Empty generators are ignored.
    pub fn from_facets<I, S>(simplices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Simplex>,
    {
        let mut cands: Vec<Simplex> = simplices.into_iter().map(Into::into).filter(|s| !s.is_empty()).collect();
        cands.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        cands.dedup();
        let mut kept: Vec<Simplex> = Vec::with_capacity(cands.len());
        let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for s in cands {
            let covered = by_vertex
                .get(&s.vertices()[0])
                .is_some_and(|ids| ids.iter().any(|&i| kept[i].len() > s.len() && s.is_face_of(&kept[i])));
            if !covered {
                for &v in s.vertices() {
                    by_vertex.entry(v).or_default().push(kept.len());
                }
                kept.push(s);
            }
        }
        kept.sort_unstable();
        SimplicialComplex { facets: kept }
    }

    /// Builds a complex from a list already known to be an antichain.
    pub(crate) fn from_antichain(mut facets: Vec<Simplex>) -> Self {
        facets.sort_unstable();
        facets.dedup();
        SimplicialComplex { facets }
    }

    /// The complex with no faces at all.
    pub fn empty() -> Self {
        SimplicialComplex { facets: Vec::new() }
    }

    /// The full simplex on `0..=d`.
    pub fn simplex(d: usize) -> Self {
        Self::from_antichain(vec![Simplex::new(0..=d as Vertex)])
    }

    /// The boundary of the `(d + 1)`-simplex, a `d`-sphere on `0..=d+1`.
    pub fn boundary_of_simplex(d: usize) -> Self {
        let full = Simplex::new(0..=(d as Vertex + 1));
        Self::from_antichain(full.ridges().collect())
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(Simplex::dim).max().unwrap_or(-1)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let set: BTreeSet<Vertex> = self.facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        set.into_iter().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.facets.iter().filter_map(|f| f.vertices().last().copied()).max()
    }

    pub fn contains_face(&self, s: &Simplex) -> bool {
        if s.is_empty() {
            return !self.is_empty();
        }
        self.facets.iter().any(|f| s.is_face_of(f))
    }

    /// Every simplex of `other` is a face of `self`.
    pub fn contains_complex(&self, other: &SimplicialComplex) -> bool {
        let index = FacetIndex::new(self);
        other.facets.iter().all(|f| index.contains_face(f))
    }

    /// All `k`-dimensional faces of the closure, sorted. Out-of-range `k`
    /// yields an empty list.
    pub fn faces(&self, k: isize) -> Vec<Simplex> {
        if k < -1 || k > self.dim() {
            return Vec::new();
        }
        let set: BTreeSet<Simplex> = self.facets.iter().flat_map(|f| f.faces_of_dim(k)).collect();
        set.into_iter().collect()
    }

    /// All nonempty faces, sorted by dimension then lexicographically.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let set: BTreeSet<Simplex> = self.facets.iter().flat_map(|f| f.nonempty_faces()).collect();
        let mut out: Vec<Simplex> = set.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn num_faces(&self) -> usize {
        self.f_vector().0.iter().sum()
    }

    pub fn f_vector(&self) -> FVector {
        let d = self.dim();
        FVector((0..=d).map(|k| self.faces(k).len()).collect())
    }

    pub fn is_pure(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(TopologyError::EmptyComplex);
        }
        let d = self.dim();
        Ok(self.facets.iter().all(|f| f.dim() == d))
    }

    fn require_face(&self, sigma: &Simplex) -> Result<()> {
        if self.contains_face(sigma) {
            Ok(())
        } else {
            Err(TopologyError::FaceNotInComplex(sigma.clone()))
        }
    }

    /// `{ tau : tau ∩ sigma = ∅, tau ∪ sigma ∈ C }` on the original labels.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        self.require_face(sigma)?;
        Ok(self.link_unchecked(sigma))
    }

    pub(crate) fn link_unchecked(&self, sigma: &Simplex) -> SimplicialComplex {
        let facets = self
            .facets
            .iter()
            .filter(|f| sigma.is_face_of(f))
            .map(|f| Simplex::new(f.vertices().iter().copied().filter(|v| !sigma.contains_vertex(*v))))
            .filter(|s| !s.is_empty())
            .collect();
        SimplicialComplex::from_antichain(facets)
    }

    /// Closed star: the closure of all facets containing `sigma`.
    pub fn star(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        self.require_face(sigma)?;
        Ok(SimplicialComplex::from_antichain(self.facets.iter().filter(|f| sigma.is_face_of(f)).cloned().collect()))
    }

    /// All faces not containing `tau`. Deleting a non-face is the identity.
    pub fn delete(&self, tau: &Simplex) -> SimplicialComplex {
        let mut gens = Vec::with_capacity(self.facets.len());
        let mut touched = false;
        for f in &self.facets {
            if tau.is_face_of(f) {
                touched = true;
                gens.extend(tau.vertices().iter().map(|&v| f.without_vertex(v)));
            } else {
                gens.push(f.clone());
            }
        }
        if touched {
            SimplicialComplex::from_facets(gens)
        } else {
            self.clone()
        }
    }

    /// Deletion of a single vertex, `C - v`.
    pub fn delete_vertex(&self, v: Vertex) -> SimplicialComplex {
        self.delete(&Simplex::from([v]))
    }

    /// Closure of the codimension-one faces lying in exactly one facet.
    pub fn boundary(&self) -> Result<SimplicialComplex> {
        if !self.is_pure()? {
            return Err(TopologyError::NotPure);
        }
        if self.dim() < 1 {
            return Err(TopologyError::InvalidArgument("boundary needs dimension >= 1".into()));
        }
        let mut count: BTreeMap<Simplex, usize> = BTreeMap::new();
        for f in &self.facets {
            for r in f.ridges() {
                *count.entry(r).or_default() += 1;
            }
        }
        Ok(SimplicialComplex::from_antichain(count.into_iter().filter(|(_, n)| *n == 1).map(|(r, _)| r).collect()))
    }

    /// Every available elementary collapse `(free_face, coface)`, sorted.
    pub fn free_faces(&self) -> Vec<(Simplex, Simplex)> {
        let index = FacetIndex::new(self);
        let mut out = Vec::new();
        for f in &self.facets {
            if f.len() < 2 {
                continue;
            }
            for r in f.ridges() {
                if index.facets_containing(&r).len() == 1 {
                    out.push((r, f.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// Each (d-1)-face lies in at most two facets, and the complex is pure.
    pub fn is_pseudomanifold(&self) -> bool {
        if !self.is_pure().unwrap_or(false) {
            return false;
        }
        let mut count: HashMap<Simplex, usize> = HashMap::new();
        for f in &self.facets {
            for r in f.ridges() {
                *count.entry(r).or_default() += 1;
            }
        }
        count.values().all(|&n| n <= 2)
    }

    /// Connected components as vertex-disjoint subcomplexes, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<SimplicialComplex> {
        let verts = self.vertices();
        let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in &self.facets {
            let a = pos[&f.vertices()[0]];
            for v in &f.vertices()[1..] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, pos[v]));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Simplex>> = BTreeMap::new();
        for f in &self.facets {
            let root = find(&mut parent, pos[&f.vertices()[0]]);
            groups.entry(root).or_default().push(f.clone());
        }
        groups.into_values().map(SimplicialComplex::from_antichain).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subcomplex induced on a vertex set.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> SimplicialComplex {
        SimplicialComplex::from_facets(
            self.facets.iter().map(|f| Simplex::new(f.vertices().iter().copied().filter(|v| keep.contains(v)))),
        )
    }

    pub fn relabel<F: FnMut(Vertex) -> Vertex>(&self, mut f: F) -> SimplicialComplex {
        SimplicialComplex::from_facets(self.facets.iter().map(|s| s.map(&mut f)).collect::<Vec<_>>())
    }

    /// Relabels vertices onto `0..n` preserving order; returns the complex and
    /// the old label of each new vertex.
    pub fn compact(&self) -> (SimplicialComplex, Vec<Vertex>) {
        let verts = self.vertices();
        let pos: HashMap<Vertex, Vertex> = verts.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
        let facets = self.facets.iter().map(|s| s.map(|v| pos[&v])).collect();
        (SimplicialComplex::from_antichain(facets), verts)
    }

    /// Disjoint union, shifting the second complex past the first's labels.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.max_vertex().map_or(0, |m| m + 1);
        let mut facets = self.facets.clone();
        facets.extend(other.facets.iter().map(|s| s.map(|v| v + shift)));
        SimplicialComplex::from_antichain(facets)
    }

    /// The complex with the open simplex `sigma` removed (only `sigma` itself,
    /// its proper faces stay). `sigma` must be a facet.
    pub fn remove_open_facet(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        if !self.facets.contains(sigma) {
            return Err(TopologyError::FaceNotInComplex(sigma.clone()));
        }
        let gens: Vec<Simplex> = self.facets.iter().filter(|f| *f != sigma).cloned().chain(sigma.ridges()).collect();
        Ok(SimplicialComplex::from_facets(gens))
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.facets.iter()).finish()
    }
}

/// Vertex-to-facet incidence, for coface queries.
pub(crate) struct FacetIndex<'a> {
    complex: &'a SimplicialComplex,
    by_vertex: HashMap<Vertex, Vec<usize>>,
}

impl<'a> FacetIndex<'a> {
    pub(crate) fn new(complex: &'a SimplicialComplex) -> Self {
        let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (i, f) in complex.facets.iter().enumerate() {
            for &v in f.vertices() {
                by_vertex.entry(v).or_default().push(i);
            }
        }
        FacetIndex { complex, by_vertex }
    }

    pub(crate) fn facets_containing(&self, s: &Simplex) -> Vec<usize> {
        let Some(smallest) = s.vertices().iter().filter_map(|v| self.by_vertex.get(v)).min_by_key(|l| l.len()) else {
            return Vec::new();
        };
        if s.vertices().iter().any(|v| !self.by_vertex.contains_key(v)) {
            return Vec::new();
        }
        smallest.iter().copied().filter(|&i| s.is_face_of(&self.complex.facets[i])).collect()
    }

    pub(crate) fn contains_face(&self, s: &Simplex) -> bool {
        if s.is_empty() {
            return !self.complex.is_empty();
        }
        !self.facets_containing(s).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| Simplex::from(*f)))
    }

    #[test]
    fn maximalizes_generators() {
        let c = sc(&[&[1, 2], &[1, 2, 3], &[3], &[4]]);
        assert_eq!(c.facets(), &[Simplex::from([1, 2, 3]), Simplex::from([4])]);
    }

    #[test]
    fn faces_of_triangle_and_sphere() {
        let tri = sc(&[&[1, 2, 3]]);
        assert_eq!(tri.faces(1), vec![Simplex::from([1, 2]), Simplex::from([1, 3]), Simplex::from([2, 3])]);
        assert_eq!(SimplicialComplex::boundary_of_simplex(2).faces(2).len(), 4);
        assert!(tri.faces(5).is_empty());
        assert!(tri.faces(-2).is_empty());
        assert_eq!(tri.faces(-1), vec![Simplex::empty()]);
    }

    #[test]
    fn purity() {
        assert!(SimplicialComplex::boundary_of_simplex(2).is_pure().unwrap());
        assert!(!sc(&[&[1, 2], &[3]]).is_pure().unwrap());
        assert_eq!(SimplicialComplex::empty().is_pure(), Err(TopologyError::EmptyComplex));
    }

    #[test]
    fn links() {
        let s2 = SimplicialComplex::boundary_of_simplex(2);
        assert_eq!(s2.link(&Simplex::from([0])).unwrap(), sc(&[&[1, 2], &[1, 3], &[2, 3]]));
        let d3 = SimplicialComplex::simplex(3);
        assert_eq!(d3.link(&Simplex::from([0, 1])).unwrap(), sc(&[&[2, 3]]));
        assert!(d3.link(&Simplex::from([0, 1, 2, 3])).unwrap().is_empty());
        assert_eq!(d3.link(&Simplex::from([0, 9])), Err(TopologyError::FaceNotInComplex(Simplex::from([0, 9]))));
    }

    #[test]
    fn stars() {
        let tri = sc(&[&[1, 2, 3]]);
        assert_eq!(tri.star(&Simplex::from([1])).unwrap(), tri);
        let hexagon = sc(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]]);
        assert_eq!(hexagon.star(&Simplex::from([0])).unwrap(), sc(&[&[0, 1], &[0, 5]]));
        assert!(hexagon.star(&Simplex::from([0, 3])).is_err());
    }

    #[test]
    fn deletions() {
        let tri = sc(&[&[1, 2, 3]]);
        assert_eq!(tri.delete_vertex(1), sc(&[&[2, 3]]));
        let s2 = SimplicialComplex::boundary_of_simplex(2);
        assert_eq!(s2.delete_vertex(3), sc(&[&[0, 1, 2]]));
        assert_eq!(tri.delete(&Simplex::from([7])), tri);
        assert_eq!(tri.delete(&Simplex::from([1, 2])), sc(&[&[1, 3], &[2, 3]]));
    }

    #[test]
    fn boundaries() {
        let d3 = SimplicialComplex::simplex(3);
        assert_eq!(d3.boundary().unwrap(), SimplicialComplex::boundary_of_simplex(2));
        assert!(SimplicialComplex::boundary_of_simplex(2).boundary().unwrap().is_empty());
        assert_eq!(sc(&[&[1, 2, 3], &[4, 5]]).boundary(), Err(TopologyError::NotPure));
    }

    #[test]
    fn free_faces_of_edge() {
        let e = sc(&[&[1, 2]]);
        assert_eq!(
            e.free_faces(),
            vec![(Simplex::from([1]), Simplex::from([1, 2])), (Simplex::from([2]), Simplex::from([1, 2]))]
        );
        assert!(SimplicialComplex::boundary_of_simplex(1).free_faces().is_empty());
        // an edge shared with a bigger triangle is not free
        let c = sc(&[&[1, 2, 3], &[3, 4]]);
        assert!(c.free_faces().contains(&(Simplex::from([4]), Simplex::from([3, 4]))));
        assert!(!c.free_faces().iter().any(|(s, _)| *s == Simplex::from([3])));
    }

    #[test]
    fn components_and_open_facet_removal() {
        let c = sc(&[&[1, 2], &[2, 3], &[5, 6, 7]]);
        assert_eq!(c.components().len(), 2);
        let d3 = SimplicialComplex::simplex(3);
        let hollow = d3.remove_open_facet(&Simplex::from([0, 1, 2, 3])).unwrap();
        assert_eq!(hollow, SimplicialComplex::boundary_of_simplex(2));
    }

    #[test]
    fn pseudomanifold_detection() {
        assert!(SimplicialComplex::boundary_of_simplex(2).is_pseudomanifold());
        assert!(!sc(&[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5]]).is_pseudomanifold());
    }
}
