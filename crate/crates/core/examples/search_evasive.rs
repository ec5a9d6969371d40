//! Random search for a collapsible 2-complex in which every vertex link
//! contains a cycle (so the complex is evasive) while its product with an
//! interval is non-evasive.
//!
//! Usage: `cargo run --release --example search_evasive -- [vertices] [tries] [seed]`

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topocert::checkers::is_nonevasive;
use topocert::constructions::product_interval;
use topocert::zoo::welker_profile;
use topocert::{SearchBudget, Simplex, SimplicialComplex};

/// Grows a complex from a triangle by elementary expansions only.
fn grow(rng: &mut ChaCha8Rng, max_vertices: u32, steps: usize) -> SimplicialComplex {
    let mut tris: BTreeSet<[u32; 3]> = BTreeSet::from([[0, 1, 2]]);
    let mut edges: BTreeSet<[u32; 2]> = BTreeSet::from([[0, 1], [0, 2], [1, 2]]);
    let mut n = 3;
    for _ in 0..steps {
        let close = n >= max_vertices || rng.gen_bool(0.7);
        if close {
            // a-b-c with ab, bc edges and ac missing: add the triangle and ac
            let list: Vec<[u32; 2]> = edges.iter().copied().collect();
            let mut options = Vec::new();
            for &[a, b] in &list {
                for &[x, y] in &list {
                    for (p, q, r) in [
                        (
                            a,
                            b,
                            if x == b {
                                y
                            } else if y == b {
                                x
                            } else {
                                u32::MAX
                            },
                        ),
                        (
                            b,
                            a,
                            if x == a {
                                y
                            } else if y == a {
                                x
                            } else {
                                u32::MAX
                            },
                        ),
                    ] {
                        if r != u32::MAX && r != p && !edges.contains(&sorted2(p, r)) {
                            options.push((p, q, r));
                        }
                    }
                }
            }
            if let Some(&(p, q, r)) = options.choose(rng) {
                edges.insert(sorted2(p, r));
                tris.insert(sorted3(p, q, r));
            }
        } else {
            let list: Vec<[u32; 2]> = edges.iter().copied().collect();
            let [a, b] = *list.choose(rng).unwrap();
            edges.insert(sorted2(a, n));
            edges.insert(sorted2(b, n));
            tris.insert(sorted3(a, b, n));
            n += 1;
        }
    }
    SimplicialComplex::from_facets(tris.iter().map(|t| Simplex::from(*t)))
}

fn sorted2(a: u32, b: u32) -> [u32; 2] {
    [a.min(b), a.max(b)]
}

fn sorted3(a: u32, b: u32, c: u32) -> [u32; 3] {
    let mut t = [a, b, c];
    t.sort();
    t
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let max_vertices: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let tries: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let seed: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = SearchBudget::default().with_seconds(60.0);
    let mut seen = BTreeSet::new();
    for t in 0..tries {
        let steps = rng.gen_range(5..40);
        let c = grow(&mut rng, max_vertices, steps);
        if welker_profile(&c).is_err() || !seen.insert(topocert::canonical_key(&c, 16)) {
            continue;
        }
        let p = product_interval(&c).unwrap();
        let out = is_nonevasive(&p, &budget).unwrap();
        eprintln!(
            "try {t}: {} vertices, {} triangles: product {}",
            c.vertex_count(),
            c.num_facets(),
            out.verdict_name()
        );
        if out.is_positive() {
            println!("{:?}", c.facets().iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>());
            return;
        }
    }
}
