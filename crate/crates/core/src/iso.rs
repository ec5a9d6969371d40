//! Vertex color refinement, canonical keys for memo tables, and an exact
//! isomorphism test by individualization and refinement.
//!
//! A [`CanonicalKey`] is always the facet list of some relabeling of the
//! complex, so equal keys imply isomorphic complexes. Below a vertex-count
//! threshold the key is a genuine canonical form; above it ties are broken by
//! the original labels, which only costs memo hits.

use std::collections::HashMap;

use crate::complex::SimplicialComplex;
use crate::simplex::Vertex;

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a.rotate_left(17) ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Compact incidence structure on vertices `0..n`.
#[derive(Clone)]
struct Incidence {
    n: usize,
    facets: Vec<Vec<u32>>,
    incident: Vec<Vec<usize>>,
    labels: Vec<Vertex>,
}

impl Incidence {
    fn new(c: &SimplicialComplex) -> Self {
        let (compact, labels) = c.compact();
        let facets: Vec<Vec<u32>> = compact.facets().iter().map(|f| f.vertices().to_vec()).collect();
        let n = labels.len();
        let mut incident = vec![Vec::new(); n];
        for (i, f) in facets.iter().enumerate() {
            for &v in f {
                incident[v as usize].push(i);
            }
        }
        Incidence { n, facets, incident, labels }
    }

    fn initial_colors(&self) -> Vec<u64> {
        (0..self.n)
            .map(|v| {
                let mut sizes: Vec<usize> = self.incident[v].iter().map(|&f| self.facets[f].len()).collect();
                sizes.sort_unstable();
                sizes.iter().fold(0x5151u64, |h, &s| mix(h, s as u64))
            })
            .collect()
    }

    fn classes(colors: &[u64]) -> usize {
        let mut c = colors.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Refines until the partition stops splitting. Returns the number of rounds.
    fn refine(&self, colors: &mut Vec<u64>) -> usize {
        let mut classes = Self::classes(colors);
        let mut rounds = 0;
        loop {
            let next: Vec<u64> = (0..self.n)
                .map(|v| {
                    let mut sigs: Vec<u64> = self.incident[v]
                        .iter()
                        .map(|&f| {
                            let mut others: Vec<u64> = self.facets[f]
                                .iter()
                                .filter(|&&w| w as usize != v)
                                .map(|&w| colors[w as usize])
                                .collect();
                            others.sort_unstable();
                            others.iter().fold(0xF00Du64, |h, &c| mix(h, c))
                        })
                        .collect();
                    sigs.sort_unstable();
                    sigs.iter().fold(colors[v], |h, &s| mix(h, s))
                })
                .collect();
            rounds += 1;
            let next_classes = Self::classes(&next);
            *colors = next;
            if next_classes == classes || next_classes == self.n {
                return rounds;
            }
            classes = next_classes;
        }
    }

    /// Smallest non-singleton color class, chosen label-independently.
    fn target_cell(colors: &[u64]) -> Option<Vec<usize>> {
        let mut cells: HashMap<u64, Vec<usize>> = HashMap::new();
        for (v, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        cells.into_iter().filter(|(_, vs)| vs.len() > 1).min_by_key(|(c, vs)| (vs.len(), *c)).map(|(_, vs)| vs)
    }

    /// Vertex order by color, ties broken by compact index.
    fn ranking(colors: &[u64]) -> Vec<u32> {
        let mut order: Vec<usize> = (0..colors.len()).collect();
        order.sort_by_key(|&v| (colors[v], v));
        let mut rank = vec![0u32; colors.len()];
        for (r, v) in order.into_iter().enumerate() {
            rank[v] = r as u32;
        }
        rank
    }

    fn key_for(&self, rank: &[u32]) -> CanonicalKey {
        let mut fs: Vec<Vec<u32>> = self
            .facets
            .iter()
            .map(|f| {
                let mut g: Vec<u32> = f.iter().map(|&v| rank[v as usize]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        fs.sort_unstable();
        let mut flat = Vec::with_capacity(fs.iter().map(|f| f.len() + 1).sum());
        for f in fs {
            flat.push(f.len() as u32);
            flat.extend(f);
        }
        CanonicalKey(flat)
    }
}

fn individualize(colors: &mut [u64], v: usize, depth: usize) {
    colors[v] = mix(colors[v], 0xA11CE ^ depth as u64);
}

/// Memo key: the facet list of a relabeled copy of the complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u32>);

/// Canonical key plus the relabeling that produced it.
pub struct CanonicalLabeling {
    pub key: CanonicalKey,
    /// `(original vertex, canonical vertex)` pairs.
    pub map: Vec<(Vertex, u32)>,
}

impl CanonicalLabeling {
    pub fn to_canonical(&self, v: Vertex) -> Option<u32> {
        self.map.iter().find(|(o, _)| *o == v).map(|(_, c)| *c)
    }

    pub fn from_canonical(&self, c: u32) -> Option<Vertex> {
        self.map.iter().find(|(_, k)| *k == c).map(|(o, _)| *o)
    }
}

const LEAF_CAP: usize = 512;

/// Canonical key; exact when the complex has at most `exact_limit` vertices
/// and the search tree stays under a fixed leaf budget.
pub fn canonical_key(c: &SimplicialComplex, exact_limit: usize) -> CanonicalKey {
    canonical_labeling(c, exact_limit).key
}

pub fn canonical_labeling(c: &SimplicialComplex, exact_limit: usize) -> CanonicalLabeling {
    let inc = Incidence::new(c);
    let mut colors = inc.initial_colors();
    inc.refine(&mut colors);
    let rank = if inc.n <= exact_limit {
        let mut best: Option<(CanonicalKey, Vec<u32>)> = None;
        let mut leaves = 0;
        search_min(&inc, colors, 0, &mut best, &mut leaves);
        best.expect("search visits at least one leaf").1
    } else {
        Incidence::ranking(&colors)
    };
    let map = inc.labels.iter().enumerate().map(|(i, &o)| (o, rank[i])).collect();
    CanonicalLabeling { key: inc.key_for(&rank), map }
}

fn search_min(
    inc: &Incidence,
    colors: Vec<u64>,
    depth: usize,
    best: &mut Option<(CanonicalKey, Vec<u32>)>,
    leaves: &mut usize,
) {
    match Incidence::target_cell(&colors) {
        None => {
            *leaves += 1;
            let rank = Incidence::ranking(&colors);
            let key = inc.key_for(&rank);
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                *best = Some((key, rank));
            }
        }
        Some(cell) => {
            for v in cell {
                if *leaves >= LEAF_CAP && best.is_some() {
                    return;
                }
                let mut next = colors.clone();
                individualize(&mut next, v, depth);
                inc.refine(&mut next);
                search_min(inc, next, depth + 1, best, leaves);
            }
        }
    }
}

fn histogram(colors: &[u64]) -> Vec<u64> {
    let mut h = colors.to_vec();
    h.sort_unstable();
    h
}

/// True iff some vertex bijection maps the facets of `a` onto those of `b`.
pub fn is_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    if a.num_facets() != b.num_facets() || a.vertex_count() != b.vertex_count() || a.f_vector() != b.f_vector() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let (ia, ib) = (Incidence::new(a), Incidence::new(b));
    let (mut ca, mut cb) = (ia.initial_colors(), ib.initial_colors());
    let (ra, rb) = (ia.refine(&mut ca), ib.refine(&mut cb));
    if ra != rb || histogram(&ca) != histogram(&cb) {
        return false;
    }
    let target: std::collections::HashSet<Vec<u32>> = ib.facets.iter().cloned().collect();
    match_search(&ia, &ib, &target, ca, cb, 0)
}

fn match_search(
    ia: &Incidence,
    ib: &Incidence,
    target: &std::collections::HashSet<Vec<u32>>,
    ca: Vec<u64>,
    cb: Vec<u64>,
    depth: usize,
) -> bool {
    let Some(cell) = Incidence::target_cell(&ca) else {
        // discrete: colors determine the bijection
        let pos: HashMap<u64, u32> = cb.iter().enumerate().map(|(v, &c)| (c, v as u32)).collect();
        return ia.facets.iter().all(|f| {
            let mut g: Vec<u32> = f.iter().map(|&v| pos[&ca[v as usize]]).collect();
            g.sort_unstable();
            target.contains(&g)
        });
    };
    let u = cell[0];
    let color = ca[u];
    let mut na = ca.clone();
    individualize(&mut na, u, depth);
    let ra = ia.refine(&mut na);
    let ha = histogram(&na);
    for v in (0..ib.n).filter(|&v| cb[v] == color) {
        let mut nb = cb.clone();
        individualize(&mut nb, v, depth);
        let rb = ib.refine(&mut nb);
        if ra == rb && histogram(&nb) == ha && match_search(ia, ib, target, na.clone(), nb, depth + 1) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Simplex;

    fn cycle(n: u32, offset: u32) -> SimplicialComplex {
        SimplicialComplex::from_facets((0..n).map(|i| Simplex::from([offset + i, offset + (i + 1) % n])))
    }

    #[test]
    fn relabeled_triangle() {
        let a = SimplicialComplex::simplex(2);
        let b = SimplicialComplex::from_facets([Simplex::from([7, 9, 11])]);
        assert!(is_isomorphic(&a, &b));
        assert!(!is_isomorphic(&a, &SimplicialComplex::boundary_of_simplex(1)));
    }

    #[test]
    fn cycles_vs_two_triangles() {
        // 6-cycle vs disjoint union of two 3-cycles: same degrees, not isomorphic
        let two = cycle(3, 0).disjoint_union(&cycle(3, 0));
        assert!(!is_isomorphic(&cycle(6, 0), &two));
        assert!(is_isomorphic(&cycle(6, 0), &cycle(6, 100)));
    }

    #[test]
    fn canonical_keys_agree_on_isomorphic_inputs() {
        let a = cycle(8, 0);
        let b = a.relabel(|v| (v * 3) % 8 + 40);
        assert_eq!(canonical_key(&a, 64), canonical_key(&b, 64));
        assert_ne!(canonical_key(&a, 64), canonical_key(&cycle(4, 0).disjoint_union(&cycle(4, 0)), 64));
    }

    #[test]
    fn labeling_round_trips() {
        let a = SimplicialComplex::from_facets([Simplex::from([3, 5, 8]), Simplex::from([5, 8, 10])]);
        let lab = canonical_labeling(&a, 64);
        for v in a.vertices() {
            let c = lab.to_canonical(v).unwrap();
            assert_eq!(lab.from_canonical(c), Some(v));
        }
    }
}
