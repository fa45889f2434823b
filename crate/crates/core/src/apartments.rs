//! Apartment classes in the flag complex of proper nonzero summands.
//!
//! A rational basis `(w_1, ..., w_n)` determines the alternating sum, over
//! all permutations, of the flags of saturated spans of its prefixes. These
//! chains live in the top degree of the flag complex, where there are no
//! higher cells: two cycles represent the same class exactly when they are
//! equal as chains, which makes the verifier below exact.
//!
//! Determinant reduction rewrites a rational apartment as a sum of integral
//! ones: a primitive lattice point of the half-open fundamental
//! parallelepiped replaces each slot with nonzero coefficient, strictly
//! decreasing the determinant.

use crate::complexes::Summand;
use crate::exactlin::IntMatrix;
use crate::symbols::{canonicalize, SymbolSum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApartmentError {
    #[error("vectors are not rationally independent")]
    NotIndependent,
    #[error("apartment vectors must be primitive")]
    NotPrimitive,
    #[error("dimension mismatch")]
    DimensionMismatch,
    /// Retained for reporting: the assembled subcomplex could not decide the
    /// question. The flag complex has no cells above the degree of apartment
    /// chains, so chain equality is a complete test and this variant is
    /// never produced by [`verify_in_tits`].
    #[error("assembled flag complex too small to decide")]
    InconclusiveComplexTooSmall,
}

/// An ordered list of `n` independent primitive vectors in `Z^n`, together
/// with its determinant. Integral exactly when `|det| = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalApartment {
    vectors: Vec<Vec<BigInt>>,
    det: BigInt,
}

impl RationalApartment {
    pub fn new(vectors: Vec<Vec<BigInt>>) -> Result<Self, ApartmentError> {
        let n = vectors.len();
        if n < 2 || vectors.iter().any(|v| v.len() != n) {
            return Err(ApartmentError::DimensionMismatch);
        }
        for v in &vectors {
            let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !content.is_one() {
                return Err(ApartmentError::NotPrimitive);
            }
        }
        let det = IntMatrix::from_rows_with_cols(vectors.clone(), n).det();
        if det.is_zero() {
            return Err(ApartmentError::NotIndependent);
        }
        Ok(RationalApartment { vectors, det })
    }

    pub fn from_i64(vs: &[&[i64]]) -> Result<Self, ApartmentError> {
        Self::new(
            vs.iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_integral(&self) -> bool {
        self.det.abs().is_one()
    }
}

/// A flag of summands with strictly increasing ranks.
pub type Flag = Vec<Summand>;

/// A formal rational combination of flags.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TitsChain {
    terms: BTreeMap<Flag, BigRational>,
}

impl TitsChain {
    pub fn zero() -> Self {
        TitsChain::default()
    }

    pub fn add_term(&mut self, flag: Flag, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(flag);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let new = o.get() + coeff;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    pub fn add(&self, other: &TitsChain) -> TitsChain {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> TitsChain {
        let mut out = TitsChain::zero();
        for (f, x) in &self.terms {
            out.add_term(f.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &TitsChain) -> TitsChain {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Flag, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, flag: &Flag) -> BigRational {
        self.terms
            .get(flag)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Simplicial boundary in the augmented chain complex: the face map drops
    /// one subspace; a single-element flag maps to the empty flag.
    pub fn boundary(&self) -> TitsChain {
        let mut out = TitsChain::zero();
        for (flag, c) in &self.terms {
            for i in 0..flag.len() {
                let mut face = flag.clone();
                face.remove(i);
                let sign = if i % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                out.add_term(face, c * sign);
            }
        }
        out
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }
}

fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<(Vec<usize>, i8)>) {
        if k == items.len() {
            let mut sign = 1i8;
            for i in 0..items.len() {
                for j in i + 1..items.len() {
                    if items[i] > items[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((items.clone(), sign));
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, out);
            items.swap(k, i);
        }
    }
    out.sort();
    out
}

/// The chain of an apartment: the alternating sum over permutations of the
/// flags of saturated spans of proper prefixes. Transposing two vectors
/// negates the chain; negating a vector leaves it unchanged.
pub fn apartment_chain(a: &RationalApartment) -> TitsChain {
    let n = a.rank();
    let dim = n;
    let mut chain = TitsChain::zero();
    for (perm, sign) in permutations_with_sign(n) {
        let mut flag: Flag = Vec::with_capacity(n - 1);
        let mut prefix: Vec<Vec<BigInt>> = Vec::with_capacity(n - 1);
        for &i in perm.iter().take(n - 1) {
            prefix.push(a.vectors[i].clone());
            flag.push(Summand::from_vectors(&prefix, dim));
        }
        chain.add_term(
            flag,
            BigRational::from_integer(BigInt::from(sign)),
        );
    }
    chain
}

/// The chain of a symbol sum: coefficients times the apartment chains of the
/// canonical representatives.
pub fn symbol_sum_chain(s: &SymbolSum) -> Result<TitsChain, ApartmentError> {
    let mut out = TitsChain::zero();
    for (frame, coeff) in s.iter() {
        let a = RationalApartment::new(frame.vectors().to_vec())?;
        out = out.add(&apartment_chain(&a).scale(coeff));
    }
    Ok(out)
}

/// Whether two chains represent the same class of the top homology of the
/// flag complex. Apartment chains are cycles, and the complex has no cells
/// in the next degree up, so classes agree exactly when the chains agree.
pub fn verify_in_tits(lhs: &TitsChain, rhs: &TitsChain) -> Result<bool, ApartmentError> {
    debug_assert!(lhs.is_cycle() && rhs.is_cycle());
    Ok(lhs.sub(rhs).is_zero())
}

/// All lattice points of the half-open fundamental parallelepiped
/// `{Σ q_i w_i : q_i ∈ [0, 1)}` of the column lattice, except the origin,
/// with their rational coordinate vectors.
fn parallelepiped_points(vectors: &[Vec<BigInt>]) -> Vec<(Vec<BigInt>, Vec<BigRational>)> {
    let n = vectors.len();
    // columns are the apartment vectors
    let mut w = IntMatrix::zero(n, n);
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..n {
            w.set(i, j, v[i].clone());
        }
    }
    let snf = crate::exactlin::snf(&w);
    let u_inv = snf.u.inverse_unimodular().expect("unimodular");
    let divisors: Vec<BigInt> = (0..n).map(|i| snf.s.at(i, i).clone()).collect();
    let mut points = Vec::new();
    let mut y = vec![BigInt::zero(); n];
    loop {
        if y.iter().any(|x| !x.is_zero()) {
            // q0 = V · diag(1/d_i) · y
            let q0: Vec<BigRational> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            BigRational::new(snf.v.at(i, j) * &y[j], divisors[j].clone())
                        })
                        .sum()
                })
                .collect();
            let q: Vec<BigRational> = q0.iter().map(|x| x - x.floor()).collect();
            if q.iter().any(|x| !x.is_zero()) {
                // v = x0 - W * floor(q0), an integer vector of the
                // parallelepiped
                let x0 = u_inv.mul_vec(&y);
                let floors: Vec<BigInt> = q0.iter().map(|x| x.floor().to_integer()).collect();
                let shift = w.mul_vec(&floors);
                let v: Vec<BigInt> = x0.iter().zip(&shift).map(|(a, b)| a - b).collect();
                debug_assert!(v.iter().any(|x| !x.is_zero()));
                points.push((v, q));
            }
        }
        // odometer over Π [0, d_i)
        let mut i = n;
        loop {
            if i == 0 {
                return points;
            }
            i -= 1;
            y[i] += 1;
            if y[i] < divisors[i] {
                break;
            }
            y[i] = BigInt::zero();
        }
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Deterministic choice of the reduction point: among the primitive nonzero
/// parallelepiped points, minimize the number of nonzero coordinates, then
/// take the lexicographically smallest vector.
fn choose_reduction_point(vectors: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<BigRational>) {
    let mut best: Option<(usize, Vec<BigInt>, Vec<BigRational>)> = None;
    for (v, q) in parallelepiped_points(vectors) {
        if !content(&v).is_one() {
            continue;
        }
        let support = q.iter().filter(|x| !x.is_zero()).count();
        let replace = match &best {
            None => true,
            Some((s, bv, _)) => (support, &v) < (*s, bv),
        };
        if replace {
            best = Some((support, v, q));
        }
    }
    let (_, v, q) = best.expect("a primitive parallelepiped point exists when |det| > 1");
    (v, q)
}

/// Rewrite a rational apartment as a sum of integral frame symbols.
///
/// When `|det| = 1` the result is the single canonical symbol with its
/// orientation sign. Otherwise a primitive parallelepiped point `v = Σ q_i
/// w_i` replaces each slot `i` with `q_i ≠ 0`; every replacement has
/// determinant `q_i · det`, strictly smaller in magnitude, and the recursion
/// bottoms out at integral apartments.
pub fn ash_rudolph_reduce(a: &RationalApartment) -> SymbolSum {
    let mut trace = Vec::new();
    reduce_inner(a.vectors(), &mut trace)
}

/// As [`ash_rudolph_reduce`], also returning the `(parent, child)` absolute
/// determinants of every recursion edge.
pub fn ash_rudolph_reduce_traced(a: &RationalApartment) -> (SymbolSum, Vec<(BigInt, BigInt)>) {
    let mut trace = Vec::new();
    let sum = reduce_inner(a.vectors(), &mut trace);
    (sum, trace)
}

fn reduce_inner(vectors: &[Vec<BigInt>], trace: &mut Vec<(BigInt, BigInt)>) -> SymbolSum {
    let n = vectors.len();
    let det = IntMatrix::from_rows_with_cols(vectors.to_vec(), n).det();
    if det.abs().is_one() {
        let sym = canonicalize(vectors).expect("integral apartment is a basis");
        return SymbolSum::singleton(&sym);
    }
    let (v, q) = choose_reduction_point(vectors);
    let mut out = SymbolSum::zero();
    for i in 0..n {
        if q[i].is_zero() {
            continue;
        }
        let mut child: Vec<Vec<BigInt>> = vectors.to_vec();
        child[i] = v.clone();
        let child_det = IntMatrix::from_rows_with_cols(child.clone(), n).det();
        debug_assert!(child_det.abs() < det.abs() && !child_det.is_zero());
        trace.push((det.abs(), child_det.abs()));
        out = out.add(&reduce_inner(&child, trace));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::r1_boundary;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn vecs(vs: &[&[i64]]) -> Vec<Vec<BigInt>> {
        vs.iter()
            .map(|v| v.iter().map(|&x| bi(x)).collect())
            .collect()
    }

    #[test]
    fn apartment_chain_rank_two() {
        let a = RationalApartment::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let chain = apartment_chain(&a);
        assert_eq!(chain.len(), 2);
        let e1 = Summand::from_vectors(&vecs(&[&[1, 0]]), 2);
        let e2 = Summand::from_vectors(&vecs(&[&[0, 1]]), 2);
        assert_eq!(chain.coeff_of(&vec![e1]), BigRational::one());
        assert_eq!(chain.coeff_of(&vec![e2]), -BigRational::one());
        assert!(chain.is_cycle());
    }

    #[test]
    fn apartment_chain_rank_three_cycle() {
        let a = RationalApartment::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let chain = apartment_chain(&a);
        assert_eq!(chain.len(), 6);
        // boundary computes to zero
        assert!(chain.boundary().is_zero());
    }

    #[test]
    fn apartment_chain_alternating() {
        let a = RationalApartment::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let b = RationalApartment::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).unwrap();
        let ca = apartment_chain(&a);
        let cb = apartment_chain(&b);
        assert_eq!(cb, ca.scale(&-BigRational::one()));
    }

    #[test]
    fn apartment_chain_flags_are_saturated_spans() {
        let c = RationalApartment::from_i64(&[&[1, 2], &[1, 0]]).unwrap();
        let chain = apartment_chain(&c);
        let span_12 = Summand::from_vectors(&vecs(&[&[1, 2]]), 2);
        let span_10 = Summand::from_vectors(&vecs(&[&[1, 0]]), 2);
        assert_eq!(chain.coeff_of(&vec![span_12]), BigRational::one());
        assert_eq!(chain.coeff_of(&vec![span_10]), -BigRational::one());
        // the constructor rejects non-primitive vectors outright
        assert_eq!(
            RationalApartment::from_i64(&[&[2, 0], &[0, 1]]),
            Err(ApartmentError::NotPrimitive)
        );
    }

    #[test]
    fn r1_relations_vanish_in_tits() {
        // n = 2 worked instance
        let rel = r1_boundary(&vecs(&[&[1, 1], &[1, 0], &[0, 1]])).unwrap();
        let chain = symbol_sum_chain(&rel).unwrap();
        assert!(verify_in_tits(&chain, &TitsChain::zero()).unwrap());

        // n = 3 with an inert vector
        let rel =
            r1_boundary(&vecs(&[&[1, 1, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let chain = symbol_sum_chain(&rel).unwrap();
        assert!(verify_in_tits(&chain, &TitsChain::zero()).unwrap());
    }

    #[test]
    fn verify_reflexive_and_r2() {
        let s = canonicalize(&vecs(&[&[1, 0], &[0, 1]])).unwrap();
        let sum = SymbolSum::singleton(&s);
        let c = symbol_sum_chain(&sum).unwrap();
        assert!(verify_in_tits(&c, &c).unwrap());

        // R2: negating a vector gives literally the same chain
        let neg = canonicalize(&vecs(&[&[-1, 0], &[0, 1]])).unwrap();
        let c2 = symbol_sum_chain(&SymbolSum::singleton(&neg)).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn reduce_integral_is_singleton() {
        let a = RationalApartment::from_i64(&[&[1, 1], &[0, 1]]).unwrap();
        let out = ash_rudolph_reduce(&a);
        assert_eq!(out.len(), 1);
        let (_, coeff) = out.iter().next().unwrap();
        assert!(coeff.to_integer().abs().is_one());
    }

    #[test]
    fn reduce_continued_fraction_instance() {
        // (e1, (5,3)): |det| = 3
        let a = RationalApartment::from_i64(&[&[1, 0], &[5, 3]]).unwrap();
        let (out, trace) = ash_rudolph_reduce_traced(&a);
        assert!(!out.is_zero());
        for (frame, coeff) in out.iter() {
            let m = IntMatrix::from_rows_with_cols(frame.vectors().to_vec(), 2);
            assert!(m.det().abs().is_one());
            assert!(coeff.is_integer());
        }
        for (parent, child) in &trace {
            assert!(child < parent);
        }
        // class equality against the input apartment
        let lhs = apartment_chain(&a);
        let rhs = symbol_sum_chain(&out).unwrap();
        assert!(verify_in_tits(&lhs, &rhs).unwrap());
    }

    #[test]
    fn reduce_rank_three_class_equality() {
        let a = RationalApartment::from_i64(&[&[1, 0, 0], &[0, 1, 1], &[1, 2, -1]]).unwrap();
        assert_eq!(a.det().abs(), bi(3).abs());
        let out = ash_rudolph_reduce(&a);
        for (frame, _) in out.iter() {
            let m = IntMatrix::from_rows_with_cols(frame.vectors().to_vec(), 3);
            assert!(m.det().abs().is_one());
        }
        let lhs = apartment_chain(&a);
        let rhs = symbol_sum_chain(&out).unwrap();
        assert!(verify_in_tits(&lhs, &rhs).unwrap());
    }
}
