//! Chain complexes with exact homology via Smith normal form.
//!
//! Boundary matrices are built from sorted vertex tuples with alternating
//! signs. Homology in degree `d` is `rank C_d - rank ∂_d - rank ∂_{d+1}`
//! free part plus the nontrivial invariant factors of `∂_{d+1}` as torsion.

use crate::complexes::{BoundedComplex, Simplex};
use crate::exactlin::{hnf, snf, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary matrices do not compose to zero")]
    NotAComplex,
    #[error("boundary matrix dimensions do not match basis counts")]
    DimensionMismatch,
    #[error("the second complex is not a subcomplex of the first")]
    NotASubcomplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
}

/// Per-degree basis counts and boundary maps; `boundaries[d]` maps degree
/// `d+1` chains to degree `d` chains.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    basis_counts: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplexData {
    pub fn new(
        basis_counts: Vec<usize>,
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self, HomologyError> {
        if boundaries.len() + 1 != basis_counts.len() && !(basis_counts.is_empty() && boundaries.is_empty()) {
            return Err(HomologyError::DimensionMismatch);
        }
        for (d, b) in boundaries.iter().enumerate() {
            if b.rows() != basis_counts[d] || b.cols() != basis_counts[d + 1] {
                return Err(HomologyError::DimensionMismatch);
            }
        }
        for w in boundaries.windows(2) {
            if !w[0].mul(&w[1]).is_zero() {
                return Err(HomologyError::NotAComplex);
            }
        }
        Ok(ChainComplexData {
            basis_counts,
            boundaries,
        })
    }

    pub fn basis_count(&self, d: usize) -> usize {
        self.basis_counts.get(d).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.basis_counts.len().checked_sub(1)
    }

    /// The boundary map out of degree `d` (into degree `d-1`).
    pub fn boundary_from(&self, d: usize) -> Option<&IntMatrix> {
        if d == 0 {
            None
        } else {
            self.boundaries.get(d - 1)
        }
    }

    /// Betti number and invariant-factor torsion in degree `d`.
    pub fn homology(&self, d: usize, ring: Ring) -> (usize, Vec<BigInt>) {
        let c_d = self.basis_count(d);
        if c_d == 0 {
            return (0, Vec::new());
        }
        let rank_out = self
            .boundary_from(d)
            .map_or(0, |b| hnf(b).0.nonzero_row_count());
        let (rank_in, torsion) = match self.boundary_from(d + 1) {
            None => (0, Vec::new()),
            Some(b) => {
                let s = snf(b);
                let torsion = s
                    .invariant_factors()
                    .into_iter()
                    .filter(|x| !x.is_one())
                    .collect();
                (s.rank, torsion)
            }
        };
        let betti = c_d - rank_out - rank_in;
        match ring {
            Ring::Z => (betti, torsion),
            Ring::Q => (betti, Vec::new()),
        }
    }
}

trait NonzeroRows {
    fn nonzero_row_count(&self) -> usize;
}

impl NonzeroRows for IntMatrix {
    fn nonzero_row_count(&self) -> usize {
        (0..self.rows())
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .count()
    }
}

/// Boundary matrices for explicit per-dimension simplex lists (sorted vertex
/// index tuples).
pub fn chain_complex_from_simplices(dims: &[Vec<Simplex>]) -> ChainComplexData {
    let mut counts: Vec<usize> = dims.iter().map(Vec::len).collect();
    while counts.last() == Some(&0) {
        counts.pop();
    }
    let mut boundaries = Vec::new();
    for d in 1..counts.len() {
        let lower = &dims[d - 1];
        let upper = &dims[d];
        let mut b = IntMatrix::zero(lower.len(), upper.len());
        for (j, s) in upper.iter().enumerate() {
            for (omit, sign) in (0..s.len()).map(|i| (i, if i % 2 == 0 { 1 } else { -1 })) {
                let mut face: Simplex = s.clone();
                face.remove(omit);
                let i = lower
                    .binary_search(&face)
                    .expect("face of a simplex is a simplex");
                b.set(i, j, BigInt::from(sign));
            }
        }
        boundaries.push(b);
    }
    ChainComplexData::new(counts, boundaries).expect("simplicial boundaries compose to zero")
}

/// The simplicial chain complex of a bounded complex.
pub fn chain_complex_of(x: &BoundedComplex) -> ChainComplexData {
    chain_complex_from_simplices(x.dims())
}

/// The relative simplicial chain complex of a pair `(X, A)` with `A ⊆ X`:
/// basis simplices of `X` not in `A`, boundaries projected away from `A`.
pub fn relative_chain_complex(
    x: &BoundedComplex,
    a: &BoundedComplex,
) -> Result<ChainComplexData, HomologyError> {
    // A must be a subcomplex of X
    for d in 0..a.dims().len() {
        for s in a.simplices(d) {
            if !x.contains_lines(&a.lines_of(s)) {
                return Err(HomologyError::NotASubcomplex);
            }
        }
    }
    let in_a = |s: &Simplex| a.contains_lines(&x.lines_of(s));
    let mut rel_dims: Vec<Vec<Simplex>> = Vec::new();
    for d in 0..x.dims().len() {
        rel_dims.push(
            x.simplices(d)
                .iter()
                .filter(|s| !in_a(s))
                .cloned()
                .collect(),
        );
    }
    let mut counts: Vec<usize> = rel_dims.iter().map(Vec::len).collect();
    while counts.last() == Some(&0) {
        counts.pop();
    }
    let mut boundaries = Vec::new();
    for d in 1..counts.len() {
        let lower = &rel_dims[d - 1];
        let upper = &rel_dims[d];
        let mut b = IntMatrix::zero(lower.len(), upper.len());
        for (j, s) in upper.iter().enumerate() {
            for omit in 0..s.len() {
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                let mut face: Simplex = s.clone();
                face.remove(omit);
                if let Ok(i) = lower.binary_search(&face) {
                    b.set(i, j, BigInt::from(sign));
                }
            }
        }
        boundaries.push(b);
    }
    ChainComplexData::new(counts, boundaries)
}
