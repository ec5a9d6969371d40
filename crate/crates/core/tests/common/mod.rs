//! Brute-force oracles and random instance generators shared by the
//! integration tests and the acceptance suite. Nothing here uses the search
//! code under test.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use topocert::{Simplex, SimplicialComplex, Vertex};

/// Every nonempty face, as an explicit set.
pub fn closure(c: &SimplicialComplex) -> BTreeSet<Simplex> {
    c.facets().iter().flat_map(|f| f.nonempty_faces()).collect()
}

/// Whether `f` meets the union of `earlier` in a nonempty pure complex of
/// codimension one (any intersection is fine for points).
pub fn attachable(earlier: &[Simplex], f: &Simplex) -> bool {
    if f.len() == 1 {
        return true;
    }
    let before: BTreeSet<Simplex> = earlier.iter().flat_map(|g| g.nonempty_faces()).collect();
    let present: Vec<Simplex> = f.nonempty_faces().filter(|s| before.contains(s)).collect();
    let ridges: Vec<&Simplex> = present.iter().filter(|s| s.len() + 1 == f.len()).collect();
    !ridges.is_empty() && present.iter().all(|s| ridges.iter().any(|r| s.is_face_of(r)))
}

/// Definition of a shelling checked on a construction order.
pub fn is_shelling_order(order: &[Simplex]) -> bool {
    (1..order.len()).all(|i| attachable(&order[..i], &order[i]))
}

pub fn brute_shellable(c: &SimplicialComplex) -> bool {
    c.facets().iter().cloned().permutations(c.num_facets()).any(|p| is_shelling_order(&p))
}

/// Free pairs of an explicit face set.
fn free_pairs(faces: &BTreeSet<Simplex>) -> Vec<(Simplex, Simplex)> {
    let mut out = Vec::new();
    for s in faces {
        let cofaces: Vec<&Simplex> = faces.iter().filter(|t| t.len() > s.len() && s.is_face_of(t)).collect();
        if cofaces.len() == 1 && cofaces[0].len() == s.len() + 1 {
            out.push((s.clone(), cofaces[0].clone()));
        }
    }
    out
}

/// Exhaustive search over collapse sequences; visited face sets are skipped.
pub fn brute_collapses_to(faces: BTreeSet<Simplex>, done: &dyn Fn(&BTreeSet<Simplex>) -> bool) -> bool {
    fn go(
        faces: &mut BTreeSet<Simplex>,
        done: &dyn Fn(&BTreeSet<Simplex>) -> bool,
        seen: &mut HashSet<Vec<Simplex>>,
    ) -> bool {
        if done(faces) {
            return true;
        }
        if !seen.insert(faces.iter().cloned().collect()) {
            return false;
        }
        for (a, b) in free_pairs(faces) {
            faces.remove(&a);
            faces.remove(&b);
            let ok = go(faces, done, seen);
            faces.insert(a);
            faces.insert(b);
            if ok {
                return true;
            }
        }
        false
    }
    let mut faces = faces;
    go(&mut faces, done, &mut HashSet::new())
}

pub fn brute_collapsible(c: &SimplicialComplex) -> bool {
    brute_collapses_to(closure(c), &|f| f.len() == 1)
}

/// Random pure complex of dimension `dim` with up to `max_facets` facets on
/// `n` vertices.
pub fn random_pure<R: Rng>(rng: &mut R, n: Vertex, dim: usize, max_facets: usize) -> SimplicialComplex {
    loop {
        let k = rng.gen_range(1..=max_facets);
        let verts: Vec<Vertex> = (0..n).collect();
        let facets: Vec<Simplex> = (0..k).map(|_| Simplex::new(verts.choose_multiple(rng, dim + 1).copied())).collect();
        let c = SimplicialComplex::from_facets(facets);
        if c.is_pure().unwrap() && c.dim() == dim as isize {
            return c;
        }
    }
}

/// Random complex (not necessarily pure) of dimension at most 2.
pub fn random_small<R: Rng>(rng: &mut R, n: Vertex, max_generators: usize) -> SimplicialComplex {
    let k = rng.gen_range(1..=max_generators);
    let verts: Vec<Vertex> = (0..n).collect();
    let gens: Vec<Simplex> = (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=3);
            Simplex::new(verts.choose_multiple(rng, size).copied())
        })
        .collect();
    SimplicialComplex::from_facets(gens)
}

/// Applies random elementary expansions to `d` (dimension at most 2), so the
/// result collapses onto `d`.
pub fn expand<R: Rng>(rng: &mut R, d: &SimplicialComplex, steps: usize) -> SimplicialComplex {
    let mut faces = closure(d);
    let mut next = d.max_vertex().map_or(0, |m| m + 1);
    for _ in 0..steps {
        let list: Vec<Simplex> = faces.iter().cloned().collect();
        match rng.gen_range(0..3) {
            // new pendant edge
            0 => {
                let v = list.iter().filter(|s| s.len() == 1).collect::<Vec<_>>();
                let Some(v) = v.choose(rng) else { continue };
                let e = v.with_vertex(next);
                faces.insert(Simplex::from([next]));
                faces.insert(e);
                next += 1;
            }
            // new triangle over an edge with a fresh apex
            1 => {
                let edges = list.iter().filter(|s| s.len() == 2).collect::<Vec<_>>();
                let Some(e) = edges.choose(rng) else { continue };
                let t = e.with_vertex(next);
                faces.extend(t.nonempty_faces());
                next += 1;
            }
            // close a 2-path a-b-c into a triangle, adding the edge ac
            _ => {
                let edges: Vec<&Simplex> = list.iter().filter(|s| s.len() == 2).collect();
                let mut options = Vec::new();
                for (e, f) in edges.iter().tuple_combinations() {
                    let shared = e.intersection(f);
                    if shared.len() == 1 {
                        let t = e.union(f);
                        let ac = t.without_vertex(shared.vertices()[0]);
                        if !faces.contains(&ac) && !faces.contains(&t) {
                            options.push((ac, t));
                        }
                    }
                }
                let Some((ac, t)) = options.choose(rng).cloned() else { continue };
                faces.insert(ac);
                faces.insert(t);
            }
        }
    }
    SimplicialComplex::from_facets(faces)
}

/// Random pure complex that shells down to `start`.
pub fn grow_shellable<R: Rng>(rng: &mut R, n: Vertex, start: &SimplicialComplex, extra: usize) -> SimplicialComplex {
    let dim = start.dim() as usize;
    let mut order: Vec<Simplex> = start.facets().to_vec();
    let verts: Vec<Vertex> = (0..n).collect();
    let mut tries = 0;
    while order.len() < start.num_facets() + extra && tries < 2000 {
        tries += 1;
        let f = Simplex::new(verts.choose_multiple(rng, dim + 1).copied());
        if order.contains(&f) {
            continue;
        }
        if attachable(&order, &f) {
            order.push(f);
        }
    }
    SimplicialComplex::from_facets(order)
}
