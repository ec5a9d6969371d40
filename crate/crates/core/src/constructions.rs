//! Complex-building operators: barycentric subdivision, cones, joins,
//! suspensions, staircase products with intervals and cubes, derived
//! neighborhoods and tubing.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::checkers::CollapseCertificate;
use crate::complex::SimplicialComplex;
use crate::error::{Result, TopologyError};
use crate::simplex::{Simplex, Vertex};

/// A vertex of a barycentric subdivision: the barycenter of `chain_of`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainVertex {
    pub chain_of: Simplex,
    pub fresh_id: Vertex,
}

/// `sd C` together with the face each new vertex stands for.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// Indexed by fresh id.
    pub vertices: Vec<ChainVertex>,
}

impl Subdivision {
    /// `R(sd C, |D|)`: the subcomplex of `sd C` induced on barycenters of faces
    /// of `d`, which is `sd D` written in the labels of `sd C`.
    pub fn restrict(&self, d: &SimplicialComplex) -> SimplicialComplex {
        let keep: BTreeSet<Vertex> =
            self.vertices.iter().filter(|cv| d.contains_face(&cv.chain_of)).map(|cv| cv.fresh_id).collect();
        self.complex.induced(&keep)
    }

    pub fn label(&self, v: Vertex) -> String {
        format!("b[{}]", self.vertices[v as usize].chain_of)
    }
}

/// Barycentric subdivision with provenance. Fresh ids follow the faces of `c`
/// ordered by dimension then lexicographically, so the result is deterministic.
pub fn sd_with_provenance(c: &SimplicialComplex) -> Result<Subdivision> {
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    let faces = c.all_faces();
    let id: HashMap<&Simplex, Vertex> = faces.iter().enumerate().map(|(i, f)| (f, i as Vertex)).collect();
    let mut facets = Vec::new();
    for f in c.facets() {
        for perm in f.vertices().iter().copied().permutations(f.len()) {
            let chain = (1..=perm.len()).map(|k| id[&Simplex::new(perm[..k].iter().copied())]);
            facets.push(Simplex::new(chain));
        }
    }
    let vertices =
        faces.iter().enumerate().map(|(i, f)| ChainVertex { chain_of: f.clone(), fresh_id: i as Vertex }).collect();
    Ok(Subdivision { complex: SimplicialComplex::from_antichain(facets), vertices })
}

pub fn sd(c: &SimplicialComplex) -> Result<SimplicialComplex> {
    Ok(sd_with_provenance(c)?.complex)
}

/// The `m`-fold barycentric subdivision; `m = 0` is the identity.
pub fn sd_m(c: &SimplicialComplex, m: i64) -> Result<SimplicialComplex> {
    if m < 0 {
        return Err(TopologyError::InvalidArgument(format!("subdivision count must be >= 0, got {m}")));
    }
    let mut cur = c.clone();
    for _ in 0..m {
        cur = sd(&cur)?;
    }
    Ok(cur)
}

/// `C * apex`.
pub fn cone(c: &SimplicialComplex, apex: Vertex) -> Result<SimplicialComplex> {
    if c.vertices().contains(&apex) {
        return Err(TopologyError::InvalidArgument(format!("apex {apex} is already a vertex")));
    }
    if c.is_empty() {
        return Ok(SimplicialComplex::from_facets([Simplex::from([apex])]));
    }
    Ok(SimplicialComplex::from_antichain(c.facets().iter().map(|f| f.with_vertex(apex)).collect()))
}

/// Cone with apex one past the largest vertex.
pub fn cone_fresh(c: &SimplicialComplex) -> SimplicialComplex {
    let apex = c.max_vertex().map_or(0, |m| m + 1);
    cone(c, apex).expect("fresh apex")
}

/// Offset applied to the second factor of [`join`].
pub fn join_offset(a: &SimplicialComplex) -> Vertex {
    a.max_vertex().map_or(0, |m| m + 1)
}

/// `A * B`; the vertices of `b` are shifted past those of `a`.
pub fn join(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let shift = join_offset(a);
    let facets = a.facets().iter().cartesian_product(b.facets()).map(|(f, g)| f.union(&g.map(|v| v + shift))).collect();
    SimplicialComplex::from_antichain(facets)
}

/// Join with two fresh points.
pub fn suspension(c: &SimplicialComplex) -> SimplicialComplex {
    join(c, &SimplicialComplex::boundary_of_simplex(0))
}

/// A vertex of a product with a cube: a base vertex and one 0/1 height per
/// interval factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductVertex {
    pub base: Vertex,
    pub heights: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct Product {
    pub complex: SimplicialComplex,
    /// Indexed by fresh id.
    pub vertices: Vec<ProductVertex>,
}

impl Product {
    /// Fresh id of `(base, heights)`, if present.
    pub fn id_of(&self, base: Vertex, heights: &[u8]) -> Option<Vertex> {
        self.vertices.iter().position(|pv| pv.base == base && pv.heights == heights).map(|i| i as Vertex)
    }

    /// Subcomplex induced on the vertices whose last height is `h`.
    pub fn level(&self, h: u8) -> SimplicialComplex {
        let keep: BTreeSet<Vertex> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, pv)| pv.heights.last() == Some(&h))
            .map(|(i, _)| i as Vertex)
            .collect();
        self.complex.induced(&keep)
    }

    pub fn label(&self, v: Vertex) -> String {
        let pv = &self.vertices[v as usize];
        format!("({},{})", pv.base, pv.heights.iter().join(","))
    }
}

/// Id of `(v, h)` in the staircase product: `2 * rank(v) + h`.
fn staircase_id(rank: &HashMap<Vertex, Vertex>, v: Vertex, h: u8) -> Vertex {
    2 * rank[&v] + h as Vertex
}

fn staircase_cell(rank: &HashMap<Vertex, Vertex>, sigma: &[Vertex], low_upto: usize, high_from: usize) -> Simplex {
    Simplex::new(
        sigma[..=low_upto]
            .iter()
            .map(|&v| staircase_id(rank, v, 0))
            .chain(sigma[high_from..].iter().map(|&v| staircase_id(rank, v, 1))),
    )
}

/// `C x I` triangulated by the staircase rule: each facet `[v0 < .. < vd]`
/// yields the `d + 1` simplices `{(v0,0)..(vi,0),(vi,1)..(vd,1)}`.
pub fn product_interval_with_provenance(c: &SimplicialComplex) -> Result<Product> {
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    let verts = c.vertices();
    let rank: HashMap<Vertex, Vertex> = verts.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
    let mut facets = Vec::new();
    for f in c.facets() {
        let s = f.vertices();
        for i in 0..s.len() {
            facets.push(staircase_cell(&rank, s, i, i));
        }
    }
    let vertices = verts.iter().flat_map(|&v| [0u8, 1].map(|h| ProductVertex { base: v, heights: vec![h] })).collect();
    Ok(Product { complex: SimplicialComplex::from_antichain(facets), vertices })
}

pub fn product_interval(c: &SimplicialComplex) -> Result<SimplicialComplex> {
    Ok(product_interval_with_provenance(c)?.complex)
}

/// `C x I^n` as the `n`-fold staircase product.
pub fn product_cube_with_provenance(c: &SimplicialComplex, n: i64) -> Result<Product> {
    if n < 0 {
        return Err(TopologyError::InvalidArgument(format!("cube dimension must be >= 0, got {n}")));
    }
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    let mut cur = Product { complex: c.clone(), vertices: Vec::new() };
    // identity provenance for n = 0 keeps labels as in `c`
    let max = c.max_vertex().unwrap_or(0);
    cur.vertices = (0..=max).map(|v| ProductVertex { base: v, heights: Vec::new() }).collect();
    for _ in 0..n {
        let next = product_interval_with_provenance(&cur.complex)?;
        let vertices = next
            .vertices
            .iter()
            .map(|pv| {
                let prev = &cur.vertices[pv.base as usize];
                let mut heights = prev.heights.clone();
                heights.extend(&pv.heights);
                ProductVertex { base: prev.base, heights }
            })
            .collect();
        cur = Product { complex: next.complex, vertices };
    }
    Ok(cur)
}

pub fn product_cube(c: &SimplicialComplex, n: i64) -> Result<SimplicialComplex> {
    Ok(product_cube_with_provenance(c, n)?.complex)
}

/// `N^m(D, C)`: the faces of `sd^m C` meeting `sd^m D`, labeled as in
/// `sd^m C`.
pub fn derived_neighborhood(d: &SimplicialComplex, c: &SimplicialComplex, m: i64) -> Result<SimplicialComplex> {
    if m < 1 {
        return Err(TopologyError::InvalidArgument(format!("neighborhood order must be >= 1, got {m}")));
    }
    if !c.contains_complex(d) {
        return Err(TopologyError::NotASubcomplex);
    }
    if d.is_empty() {
        return Ok(SimplicialComplex::empty());
    }
    let (mut big, mut small) = (c.clone(), d.clone());
    for _ in 0..m - 1 {
        let sub = sd_with_provenance(&big)?;
        small = sub.restrict(&small);
        big = sub.complex;
    }
    let sub = sd_with_provenance(&big)?;
    // a chain meets sd D iff one of its faces lies in D
    let in_d: HashSet<Vertex> =
        sub.vertices.iter().filter(|cv| small.contains_face(&cv.chain_of)).map(|cv| cv.fresh_id).collect();
    Ok(SimplicialComplex::from_antichain(
        sub.complex.facets().iter().filter(|f| f.vertices().iter().any(|v| in_d.contains(v))).cloned().collect(),
    ))
}

/// Result of [`tubing_collapse`].
#[derive(Clone, Debug)]
pub struct Tubing {
    /// The staircase product `C x I` the collapse starts from.
    pub product: Product,
    /// The tubed complex, a subcomplex of `product`.
    pub complex: SimplicialComplex,
    pub certificate: CollapseCertificate,
}

/// Collapses `C x I` onto the tubing of `tau`: prisms over faces containing
/// `tau` are pushed in from the bottom, prisms over faces outside the closed
/// star of `tau` from the top, and the rest is kept.
pub fn tubing_collapse(c: &SimplicialComplex, tau: &Simplex) -> Result<Tubing> {
    if !c.contains_face(tau) {
        return Err(TopologyError::FaceNotInComplex(tau.clone()));
    }
    let product = product_interval_with_provenance(c)?;
    let verts = c.vertices();
    let rank: HashMap<Vertex, Vertex> = verts.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
    let cell = |s: &[Vertex], lo: usize, hi: usize| staircase_cell(&rank, s, lo, hi);

    let mut faces = c.all_faces();
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut steps = Vec::new();
    for sigma in &faces {
        let s = sigma.vertices();
        let k = s.len() - 1;
        if tau.is_face_of(sigma) {
            let bottom = Simplex::new(s.iter().map(|&v| staircase_id(&rank, v, 0)));
            steps.push((bottom, cell(s, k, k)));
            for i in (0..k).rev() {
                steps.push((cell(s, i, i + 1), cell(s, i, i)));
            }
        } else if !c.contains_face(&sigma.union(tau)) {
            let top = Simplex::new(s.iter().map(|&v| staircase_id(&rank, v, 1)));
            steps.push((top, cell(s, 0, 0)));
            for i in 0..k {
                steps.push((cell(s, i, i + 1), cell(s, i + 1, i + 1)));
            }
        }
    }
    let removed: HashSet<&Simplex> = steps.iter().flat_map(|(a, b)| [a, b]).collect();
    let remaining: Vec<Simplex> = product.complex.all_faces().into_iter().filter(|f| !removed.contains(f)).collect();
    let complex = SimplicialComplex::from_facets(remaining);
    let certificate = CollapseCertificate { steps, target: complex.clone() };
    Ok(Tubing { product, complex, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    fn sc(facets: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(facets.iter().map(|f| Simplex::from(*f)))
    }

    fn cycle(n: u32) -> SimplicialComplex {
        SimplicialComplex::from_facets((0..n).map(|i| Simplex::from([i, (i + 1) % n])))
    }

    #[test]
    fn sd_of_edge_is_two_edges() {
        let s = sd_with_provenance(&sc(&[&[1, 2]])).unwrap();
        assert_eq!(s.complex.num_facets(), 2);
        assert_eq!(s.vertices.len(), 3);
        assert_eq!(s.vertices[2].chain_of, Simplex::from([1, 2]));
        assert_eq!(s.complex, sc(&[&[0, 2], &[1, 2]]));
    }

    #[test]
    fn sd_of_triangle_and_its_boundary() {
        let t = sd(&SimplicialComplex::simplex(2)).unwrap();
        assert_eq!(t.f_vector().0, vec![7, 12, 6]);
        assert!(t.is_pure().unwrap());
        assert!(is_isomorphic(&sd(&cycle(3)).unwrap(), &cycle(6)));
    }

    #[test]
    fn sd_iterates() {
        let c = SimplicialComplex::simplex(2);
        assert_eq!(sd_m(&c, 0).unwrap(), c);
        assert_eq!(sd_m(&c, 2).unwrap().num_facets(), 36);
        assert!(sd_m(&c, -1).is_err());
        assert_eq!(sd(&SimplicialComplex::empty()), Err(TopologyError::EmptyComplex));
    }

    #[test]
    fn cones() {
        let disk = cone(&cycle(3), 10).unwrap();
        assert_eq!(disk.num_facets(), 3);
        assert_eq!(disk.link(&Simplex::from([10])).unwrap(), cycle(3));
        assert_eq!(cone(&sc(&[&[4]]), 0).unwrap(), sc(&[&[0, 4]]));
        assert!(cone(&cycle(3), 1).is_err());
    }

    #[test]
    fn joins() {
        let pt = sc(&[&[0]]);
        assert_eq!(join(&pt, &pt), sc(&[&[0, 1]]));
        let disk = join(&cycle(3), &pt);
        assert_eq!(disk.num_facets(), 3);
        let s3 = join(&cycle(3), &cycle(3));
        assert_eq!(s3.num_facets(), 9);
        assert_eq!(s3.dim(), 3);
        assert_eq!(crate::betti_z2(&s3).unwrap(), vec![0, 0, 0, 1]);
    }

    #[test]
    fn suspensions() {
        assert_eq!(suspension(&cycle(3)).num_facets(), 6);
        assert_eq!(suspension(&sc(&[&[0]])), sc(&[&[0, 1], &[0, 2]]));
    }

    #[test]
    fn staircase_products() {
        assert_eq!(product_interval(&sc(&[&[5]])).unwrap(), sc(&[&[0, 1]]));
        let sq = product_interval(&sc(&[&[0, 1]])).unwrap();
        assert_eq!(sq, sc(&[&[0, 1, 3], &[0, 2, 3]]));
        let p = product_interval_with_provenance(&SimplicialComplex::simplex(2)).unwrap();
        assert_eq!(p.complex.num_facets(), 3);
        assert!(is_isomorphic(&p.level(0), &SimplicialComplex::simplex(2)));
        assert!(is_isomorphic(&p.level(1), &SimplicialComplex::simplex(2)));
    }

    #[test]
    fn cube_products() {
        let pt = sc(&[&[0]]);
        assert_eq!(product_cube(&pt, 2).unwrap().num_facets(), 2);
        assert_eq!(product_cube(&cycle(4), 0).unwrap(), cycle(4));
        assert!(product_cube(&pt, -1).is_err());
        let p = product_cube_with_provenance(&sc(&[&[3, 7]]), 2).unwrap();
        assert_eq!(p.vertices.len(), 8);
        assert!(p.vertices.iter().all(|pv| pv.heights.len() == 2 && (pv.base == 3 || pv.base == 7)));
    }

    #[test]
    fn neighborhoods() {
        let n = derived_neighborhood(&sc(&[&[0]]), &sc(&[&[0, 1]]), 1).unwrap();
        assert_eq!(n, sc(&[&[0, 2]]));
        let path = sc(&[&[1, 2], &[2, 3]]);
        let n = derived_neighborhood(&sc(&[&[1, 2]]), &path, 1).unwrap();
        assert_eq!(n.num_facets(), 3);
        // every triangle of sd of a triangle touches the boundary
        let n = derived_neighborhood(&cycle(3), &SimplicialComplex::simplex(2).relabel(|v| v), 1).unwrap();
        assert_eq!(n.num_facets(), 6);
        assert_eq!(derived_neighborhood(&sc(&[&[0, 5]]), &path, 1), Err(TopologyError::NotASubcomplex));
        assert!(derived_neighborhood(&sc(&[&[1]]), &path, 0).is_err());
    }

    #[test]
    fn tubing_edge_at_vertex() {
        let t = tubing_collapse(&sc(&[&[1, 2]]), &Simplex::from([1])).unwrap();
        assert_eq!(t.certificate.steps.len(), 3);
        // (2,0) - (2,1) - (1,1)
        assert_eq!(t.complex, sc(&[&[1, 3], &[2, 3]]));
    }

    #[test]
    fn tubing_triangle_at_facet() {
        let tri = SimplicialComplex::simplex(2);
        let t = tubing_collapse(&tri, &Simplex::from([0, 1, 2])).unwrap();
        assert!(t.complex.contains_complex(&t.product.level(1)));
        let bottom_rim = t.product.level(0);
        assert!(!t.complex.contains_complex(&bottom_rim));
        assert!(t.complex.contains_complex(&bottom_rim.boundary().unwrap()));
        assert_eq!(
            tubing_collapse(&tri, &Simplex::from([0, 7])).map(|_| ()),
            Err(TopologyError::FaceNotInComplex(Simplex::from([0, 7])))
        );
    }
}
