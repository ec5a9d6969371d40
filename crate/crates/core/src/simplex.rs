use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Vertex identifier. Complexes use dense non-negative integers.
pub type Vertex = u32;

/// A simplex as a strictly increasing list of vertex identifiers.
///
/// The empty simplex (dimension -1) is representable; it only shows up in
/// chain bookkeeping and as the link of a facet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(SmallVec<[Vertex; 8]>);

impl Simplex {
    /// Builds a simplex from arbitrary vertices, sorting and dropping duplicates.
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        let mut v: SmallVec<[Vertex; 8]> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// Wraps an already strictly increasing vertex list.
    pub(crate) fn from_sorted(v: SmallVec<[Vertex; 8]>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn empty() -> Self {
        Simplex(SmallVec::new())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dimension, `-1` for the empty simplex.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True iff `self` is a (not necessarily proper) face of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                match w.cmp(v) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Simplex(out)
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        Simplex::from_sorted(self.0.iter().merge(other.0.iter()).dedup().copied().collect())
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn with_vertex(&self, v: Vertex) -> Simplex {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Simplex(out)
    }

    pub fn without_vertex(&self, v: Vertex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// Codimension-one faces, each obtained by dropping one vertex.
    pub fn ridges(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// All faces of dimension `k` (vertex subsets of size `k + 1`).
    pub fn faces_of_dim(&self, k: isize) -> impl Iterator<Item = Simplex> + '_ {
        let size = (k + 1).max(0) as usize;
        let valid = k >= -1 && size <= self.0.len();
        self.0
            .iter()
            .copied()
            .combinations(if valid { size } else { 0 })
            .filter(move |_| valid)
            .map(|c| Simplex(c.into_iter().collect()))
    }

    /// All nonempty faces, including `self`.
    pub fn nonempty_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len() as isize).flat_map(move |k| self.faces_of_dim(k))
    }

    /// Applies a vertex relabeling.
    pub fn map<F: FnMut(Vertex) -> Vertex>(&self, f: F) -> Simplex {
        Simplex::new(self.0.iter().copied().map(f))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(" "))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

impl FromIterator<Vertex> for Simplex {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        Simplex::new(iter)
    }
}

impl<const N: usize> From<[Vertex; N]> for Simplex {
    fn from(v: [Vertex; N]) -> Self {
        Simplex::new(v)
    }
}

impl From<&[Vertex]> for Simplex {
    fn from(v: &[Vertex]) -> Self {
        Simplex::new(v.iter().copied())
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0.into_vec()
    }
}

impl From<Vec<Vertex>> for Simplex {
    fn from(v: Vec<Vertex>) -> Self {
        Simplex::new(v)
    }
}
