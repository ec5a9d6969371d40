//! Reduced simplicial homology over the two-element field.

use std::collections::HashMap;

use crate::complex::SimplicialComplex;
use crate::error::{Result, TopologyError};
use crate::simplex::Simplex;

/// Dense GF(2) column reduction; returns the rank of the matrix whose columns
/// are given as lists of row indices.
fn rank_gf2(columns: impl Iterator<Item = Vec<usize>>, rows: usize) -> usize {
    let words = rows.div_ceil(64).max(1);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for col in columns {
        let mut bits = vec![0u64; words];
        for r in col {
            bits[r / 64] ^= 1 << (r % 64);
        }
        while let Some(low) = highest_bit(&bits) {
            match pivots.get(&low) {
                Some(p) => bits.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                None => {
                    pivots.insert(low, bits);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn highest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().rev().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Reduced Betti numbers `b~_0 .. b~_d` over Z/2.
pub fn betti_z2(c: &SimplicialComplex) -> Result<Vec<usize>> {
    if c.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    let d = c.dim() as usize;
    let faces: Vec<Vec<Simplex>> = (0..=d).map(|k| c.faces(k as isize)).collect();
    let index: Vec<HashMap<&Simplex, usize>> =
        faces.iter().map(|fs| fs.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    // rank of the boundary map C_k -> C_{k-1}; the augmentation C_0 -> Z/2 has rank 1
    let mut ranks = vec![0usize; d + 2];
    ranks[0] = 1;
    for k in 1..=d {
        let prev = &index[k - 1];
        ranks[k] = rank_gf2(faces[k].iter().map(|s| s.ridges().map(|r| prev[&r]).collect()), faces[k - 1].len());
    }
    Ok((0..=d).map(|k| faces[k].len() - ranks[k] - ranks[k + 1]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplices_are_acyclic() {
        for d in 0..5 {
            assert!(betti_z2(&SimplicialComplex::simplex(d)).unwrap().iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn spheres() {
        assert_eq!(betti_z2(&SimplicialComplex::boundary_of_simplex(2)).unwrap(), vec![0, 0, 1]);
        assert_eq!(betti_z2(&SimplicialComplex::boundary_of_simplex(0)).unwrap(), vec![1]);
        assert_eq!(betti_z2(&SimplicialComplex::boundary_of_simplex(1)).unwrap(), vec![0, 1]);
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(betti_z2(&SimplicialComplex::empty()), Err(TopologyError::EmptyComplex));
    }

    #[test]
    fn wide_matrix() {
        // 70-cycle exercises multi-word bitsets
        let n = 70u32;
        let c = SimplicialComplex::from_facets((0..n).map(|i| Simplex::from([i, (i + 1) % n])));
        assert_eq!(betti_z2(&c).unwrap(), vec![0, 1]);
    }
}
