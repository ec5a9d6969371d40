//! Named complexes with their expected property profiles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Result, TopologyError};
use crate::homology::betti_z2;
use crate::simplex::{Simplex, Vertex};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Stated in the literature.
    Published,
    /// Established by running the checkers on the facet list.
    Computed,
    /// Immediate from the definitions.
    Elementary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub verdict: Expected,
    pub source: Source,
}

/// Properties used as keys of [`ZooEntry::expected`].
pub mod property {
    pub const COLLAPSIBLE: &str = "collapsible";
    pub const SHELLABLE: &str = "shellable";
    pub const NONEVASIVE: &str = "nonevasive";
    pub const ENDOCOLLAPSIBLE: &str = "endocollapsible";
    /// Non-evasiveness of the product with an interval.
    pub const PRODUCT_INTERVAL_NONEVASIVE: &str = "product_interval_nonevasive";
}

/// Structural facts checked whenever an entry is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub dim: isize,
    pub pure: bool,
    pub betti: Vec<usize>,
    pub f_vector: Option<Vec<usize>>,
    pub no_free_faces: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZooEntry {
    pub name: String,
    pub complex: SimplicialComplex,
    pub expected: BTreeMap<String, Expectation>,
    pub profile: Profile,
    pub source_note: String,
}

impl ZooEntry {
    pub fn expectation(&self, property: &str) -> Option<Expectation> {
        self.expected.get(property).copied()
    }

    /// Re-checks the declared profile against the facet list.
    pub fn validate(&self) -> Result<()> {
        let c = &self.complex;
        let fail = |what: String| Err(TopologyError::Reconstruction(format!("{}: {what}", self.name)));
        if c.is_empty() {
            return fail("empty".into());
        }
        let antichain = c
            .facets()
            .iter()
            .enumerate()
            .all(|(i, f)| c.facets().iter().enumerate().all(|(j, g)| i == j || !f.is_face_of(g)));
        if !antichain {
            return fail("facets are not an antichain".into());
        }
        if c.dim() != self.profile.dim {
            return fail(format!("dimension {} instead of {}", c.dim(), self.profile.dim));
        }
        if c.is_pure()? != self.profile.pure {
            return fail("purity differs".into());
        }
        let betti = betti_z2(c)?;
        if betti != self.profile.betti {
            return fail(format!("betti numbers {betti:?} instead of {:?}", self.profile.betti));
        }
        if let Some(f) = &self.profile.f_vector {
            if &c.f_vector().0 != f {
                return fail(format!("f-vector {:?} instead of {f:?}", c.f_vector().0));
            }
        }
        if self.profile.no_free_faces && !c.free_faces().is_empty() {
            return fail("has free faces".into());
        }
        Ok(())
    }
}

impl fmt::Display for ZooEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, {} facets)", self.name, self.complex.dim(), self.complex.num_facets())
    }
}

/// Catalog names; parametrized families take a trailing integer.
pub const CATALOG: [&str; 8] =
    ["simplex_d", "boundary_sphere_d", "dunce_hat", "bings_house", "rudin_ball", "welker_c", "path_n", "cycle_n"];

/// Sample instantiation of every catalog family.
#[rustfmt::skip]
pub fn list() -> Vec<&'static str> {
    vec![
        "simplex_0", "simplex_1", "simplex_2", "simplex_3", "simplex_4",
        "boundary_sphere_1", "boundary_sphere_2", "boundary_sphere_3", "boundary_sphere_4", "dunce_hat",
        "bings_house", "rudin_ball", "welker_c", "path_2", "path_5",
        "cycle_3", "cycle_6",
    ]
}

#[rustfmt::skip]
const RUDIN: [[Vertex; 4]; 41] = [
    [1, 9, 2, 5], [1, 10, 2, 5], [1, 10, 5, 11], [1, 10, 7, 11], [1, 13, 5, 11], [1, 13, 7, 11],
    [2, 10, 3, 6], [2, 11, 3, 6], [2, 11, 6, 12], [2, 11, 8, 12], [2, 14, 6, 12], [2, 14, 8, 12],
    [3, 11, 4, 7], [3, 12, 4, 7], [3, 12, 5, 9], [3, 12, 7, 9], [3, 13, 5, 9], [3, 13, 7, 9],
    [4, 9, 1, 8], [4, 9, 6, 10], [4, 9, 8, 10], [4, 12, 1, 8], [4, 14, 6, 10], [4, 14, 8, 10],
    [9, 10, 2, 5], [9, 10, 2, 6], [9, 10, 5, 11], [9, 10, 11, 12], [9, 13, 5, 11], [10, 11, 3, 6],
    [10, 11, 3, 7], [10, 11, 6, 12], [10, 14, 6, 12], [11, 12, 4, 7], [11, 12, 4, 8], [11, 12, 7, 9],
    [11, 13, 7, 9], [12, 9, 1, 5], [12, 9, 1, 8], [12, 9, 8, 10], [12, 14, 8, 10],
];

#[rustfmt::skip]
const DUNCE_HAT: [[Vertex; 3]; 17] = [
    [1, 3, 5], [2, 3, 5], [2, 4, 5], [1, 2, 4], [1, 3, 4], [3, 4, 8], [1, 2, 8], [1, 7, 8], [1, 2, 7],
    [2, 3, 7], [3, 6, 7], [1, 3, 6], [1, 5, 6], [4, 5, 6], [4, 6, 8], [6, 7, 8], [2, 3, 8],
];

pub fn rudin_ball() -> SimplicialComplex {
    SimplicialComplex::from_facets(RUDIN)
}

pub fn dunce_hat() -> SimplicialComplex {
    SimplicialComplex::from_facets(DUNCE_HAT)
}

/// Bing's house with two rooms on the integer grid `[0,6]x[0,3]x[0,2]`, each
/// unit square split along its main diagonal.
pub fn bings_house() -> SimplicialComplex {
    const NX: u32 = 7;
    const NY: u32 = 4;
    let id = |p: [u32; 3]| p[0] + NX * (p[1] + NY * p[2]);
    let mut tris: Vec<Simplex> = Vec::new();
    // unit square at `p` spanned by axes `a < b`
    let mut square = |p: [u32; 3], a: usize, b: usize| {
        let mut pa = p;
        pa[a] += 1;
        let mut pb = p;
        pb[b] += 1;
        let mut pab = pa;
        pab[b] += 1;
        tris.push(Simplex::from([id(p), id(pa), id(pab)]));
        tris.push(Simplex::from([id(p), id(pb), id(pab)]));
    };
    for x in 0..6 {
        for y in 0..3 {
            if (x, y) != (1, 1) {
                square([x, y, 0], 0, 1);
            }
            if (x, y) != (1, 1) && (x, y) != (4, 1) {
                square([x, y, 1], 0, 1);
            }
            if (x, y) != (4, 1) {
                square([x, y, 2], 0, 1);
            }
        }
    }
    for z in 0..2 {
        for y in 0..3 {
            square([0, y, z], 1, 2);
            square([6, y, z], 1, 2);
        }
        for x in 0..6 {
            square([x, 0, z], 0, 2);
            square([x, 3, z], 0, 2);
        }
    }
    // tunnel through the lower room and through the upper room
    for (x0, z) in [(1, 0), (4, 1)] {
        square([x0, 1, z], 1, 2);
        square([x0 + 1, 1, z], 1, 2);
        square([x0, 1, z], 0, 2);
        square([x0, 2, z], 0, 2);
    }
    // wall in each room between the tunnel and the outer wall
    square([0, 1, 0], 0, 2);
    square([5, 1, 1], 0, 2);
    SimplicialComplex::from_facets(tris)
}

fn path(n: u32) -> SimplicialComplex {
    if n == 1 {
        return SimplicialComplex::simplex(0);
    }
    SimplicialComplex::from_facets((0..n - 1).map(|i| [i, i + 1]))
}

fn cycle(n: u32) -> SimplicialComplex {
    SimplicialComplex::from_facets((0..n).map(|i| [i, (i + 1) % n]))
}

fn parse_family(name: &str) -> Option<(&str, u32)> {
    let (family, n) = name.rsplit_once('_')?;
    Some((family, n.parse().ok()?))
}

struct Builder {
    entry: ZooEntry,
}

impl Builder {
    fn new(name: &str, complex: SimplicialComplex, note: &str) -> Self {
        let betti = betti_z2(&complex).unwrap_or_default();
        let profile = Profile {
            dim: complex.dim(),
            pure: complex.is_pure().unwrap_or(false),
            betti,
            f_vector: None,
            no_free_faces: false,
        };
        Builder {
            entry: ZooEntry {
                name: name.into(),
                complex,
                expected: BTreeMap::new(),
                profile,
                source_note: note.into(),
            },
        }
    }

    fn expect(mut self, property: &str, verdict: Expected, source: Source) -> Self {
        self.entry.expected.insert(property.into(), Expectation { verdict, source });
        self
    }

    fn betti(mut self, b: &[usize]) -> Self {
        self.entry.profile.betti = b.to_vec();
        self
    }

    fn f_vector(mut self, f: &[usize]) -> Self {
        self.entry.profile.f_vector = Some(f.to_vec());
        self
    }

    fn no_free_faces(mut self) -> Self {
        self.entry.profile.no_free_faces = true;
        self
    }

    fn build(self) -> Result<ZooEntry> {
        self.entry.validate()?;
        Ok(self.entry)
    }
}

/// Looks up a catalog entry, e.g. `simplex_3`, `cycle_6` or `rudin_ball`.
pub fn get(name: &str) -> Result<ZooEntry> {
    use property::*;
    use Expected::{Negative as N, Positive as P};
    use Source::*;
    let unknown = || TopologyError::UnknownName(name.to_string());
    match name {
        "dunce_hat" => {
            return Builder::new(name, dunce_hat(), "8-vertex dunce hat triangulation (Hachimori's library)")
                .betti(&[0, 0, 0])
                .f_vector(&[8, 24, 17])
                .no_free_faces()
                .expect(COLLAPSIBLE, N, Elementary)
                .expect(NONEVASIVE, N, Elementary)
                .expect(SHELLABLE, N, Computed)
                .build()
        }
        "bings_house" => {
            return Builder::new(name, bings_house(), "Bing's house with two rooms, grid triangulation")
                .betti(&[0, 0, 0])
                .no_free_faces()
                .expect(COLLAPSIBLE, N, Elementary)
                .expect(NONEVASIVE, N, Elementary)
                .build()
        }
        "rudin_ball" => {
            return Builder::new(name, rudin_ball(), "Rudin's unshellable ball, 14 vertices and 41 tetrahedra")
                .betti(&[0, 0, 0, 0])
                .f_vector(&[14, 66, 94, 41])
                .expect(SHELLABLE, N, Published)
                .expect(COLLAPSIBLE, P, Computed)
                .build()
        }
        "welker_c" => {
            return Builder::new(
                name,
                welker_c(),
                "evasive collapsible 2-complex whose product with an interval is non-evasive",
            )
            .betti(&[0, 0, 0])
            .expect(COLLAPSIBLE, P, Published)
            .expect(NONEVASIVE, N, Published)
            .expect(PRODUCT_INTERVAL_NONEVASIVE, P, Published)
            .build()
            .and_then(|e| welker_profile(&e.complex).map(|()| e))
        }
        _ => {}
    }
    let (family, n) = parse_family(name).ok_or_else(unknown)?;
    let elementary = format!("{family} with parameter {n}");
    match family {
        "simplex" if n <= 12 => {
            let d = n as usize;
            let mut b = Builder::new(name, SimplicialComplex::simplex(d), &elementary)
                .expect(COLLAPSIBLE, P, Elementary)
                .expect(SHELLABLE, P, Elementary)
                .expect(NONEVASIVE, P, Elementary);
            if d >= 1 {
                b = b.expect(ENDOCOLLAPSIBLE, P, Elementary);
            }
            b.build()
        }
        "boundary_sphere" if (1..=12).contains(&n) => {
            let s = SimplicialComplex::boundary_of_simplex(n as usize - 1);
            let mut b = Builder::new(name, s, &elementary)
                .expect(COLLAPSIBLE, N, Elementary)
                .expect(NONEVASIVE, N, Elementary)
                .expect(SHELLABLE, P, Elementary);
            if n >= 2 {
                b = b.expect(ENDOCOLLAPSIBLE, P, Elementary);
            }
            b.build()
        }
        "path" if (1..=10_000).contains(&n) => Builder::new(name, path(n), &elementary)
            .expect(COLLAPSIBLE, P, Elementary)
            .expect(SHELLABLE, P, Elementary)
            .expect(NONEVASIVE, P, Elementary)
            .build(),
        "cycle" if (3..=10_000).contains(&n) => Builder::new(name, cycle(n), &elementary)
            .expect(COLLAPSIBLE, N, Elementary)
            .expect(NONEVASIVE, N, Elementary)
            .expect(SHELLABLE, P, Elementary)
            .expect(ENDOCOLLAPSIBLE, P, Elementary)
            .build(),
        _ => Err(unknown()),
    }
}

/// Found by `examples/search_evasive.rs` (7 vertices, seed 2): grown from a
/// triangle by expansions, so it is collapsible.
#[rustfmt::skip]
const WELKER_C: &[[Vertex; 3]] = &[
    [0, 1, 2], [0, 1, 3], [0, 1, 4], [0, 2, 6], [0, 3, 4], [0, 4, 5], [0, 5, 6], [1, 2, 3],
    [1, 2, 6], [1, 3, 5], [1, 5, 6], [2, 3, 4], [2, 4, 5], [3, 4, 6], [4, 5, 6],
];

pub fn welker_c() -> SimplicialComplex {
    SimplicialComplex::from_facets(WELKER_C.iter().copied())
}

/// Structural half of the profile that needs no search: 2-dimensional, and
/// every vertex link is a graph containing a cycle, so no link is
/// collapsible and the complex is evasive.
pub fn welker_profile(c: &SimplicialComplex) -> Result<()> {
    let fail = |what: &str| Err(TopologyError::Reconstruction(format!("welker_c: {what}")));
    if c.dim() != 2 {
        return fail("not 2-dimensional");
    }
    for v in c.vertices() {
        let link = c.link_unchecked(&Simplex::from([v]));
        // a graph has a cycle iff it has more edges than a spanning forest
        let edges = link.faces(1).len();
        let forest = link.vertex_count() - link.components().len();
        if edges <= forest {
            return fail("some vertex link is a forest");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_sample_validates() {
        for name in list() {
            let e = get(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(e.name, name);
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["simplex", "cycle_2", "torus", "simplex_x", "path_0"] {
            assert!(matches!(get(bad), Err(TopologyError::UnknownName(_))), "{bad}");
        }
    }

    #[test]
    fn rudin_boundary_is_a_sphere() {
        let b = rudin_ball().boundary().unwrap();
        assert_eq!(b.f_vector().euler_characteristic(), 2);
        assert!(b.is_pseudomanifold());
        assert_eq!(betti_z2(&b).unwrap(), vec![0, 0, 1]);
        assert_eq!(rudin_ball().vertex_count(), 14);
    }

    #[test]
    fn house_counts() {
        let h = bings_house();
        assert_eq!(h.f_vector().euler_characteristic(), 1);
        assert!(h.free_faces().is_empty());
    }
}
