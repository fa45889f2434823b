//! Stabilizers of frames and augmented frames, orientation characters, and
//! twisted coinvariant dimensions.
//!
//! Stabilizers are found by brute force over signed line-to-line
//! assignments: the images of a determining basis pin down the candidate
//! matrix, which is kept when it is unimodular and permutes the full line
//! set. Coinvariant dimensions come from the rank of the character-twisted
//! averaging sum `Σ_g χ(g)·g^{⊗k}` acting on the `k`-th tensor power of the
//! standard representation.

use crate::complexes::internal_core_decomposition;
use crate::exactlin::IntMatrix;
use crate::lattice::{classify, is_partial_frame, Line, LineSetSimplex, SimplexKind};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoinvariantError {
    #[error("simplex does not span the full lattice")]
    NotFullSpan,
    #[error("matrix does not stabilize the simplex")]
    NotAStabilizer,
    #[error("no witness exists for the given parameters")]
    NoWitness,
    #[error("invalid partition")]
    InvalidPartition,
    #[error("simplex is not a frame or augmented frame: {0}")]
    NotAFrame(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    SL,
}

/// A finite group of unimodular matrices, stored as its full element list.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    degree: usize,
    elements: Vec<IntMatrix>,
}

impl FiniteMatrixGroup {
    pub fn from_elements(degree: usize, mut elements: Vec<IntMatrix>) -> Self {
        elements.sort_by(|a, b| a.row_vecs().cmp(&b.row_vecs()));
        elements.dedup();
        FiniteMatrixGroup { degree, elements }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn contains(&self, g: &IntMatrix) -> bool {
        self.elements.iter().any(|h| h == g)
    }

    /// Closure under products and inverses, with the identity present.
    /// Quadratic in the order; meant for tests at desk scale.
    pub fn verify_group_axioms(&self) -> bool {
        let set: HashSet<&IntMatrix> = self.elements.iter().collect();
        if !set.contains(&IntMatrix::identity(self.degree)) {
            return false;
        }
        for g in &self.elements {
            let Ok(inv) = g.inverse_unimodular() else {
                return false;
            };
            if !set.contains(&inv) {
                return false;
            }
            for h in &self.elements {
                if !set.contains(&g.mul(h)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn restrict_to_sl(&self) -> FiniteMatrixGroup {
        FiniteMatrixGroup::from_elements(
            self.degree,
            self.elements
                .iter()
                .filter(|g| g.det().is_one())
                .cloned()
                .collect(),
        )
    }
}

/// Validate that `s` (ambient `m = 0`) is a frame or augmented frame of the
/// full lattice and return the determining ordered basis: the frame itself,
/// or the augmented frame minus the sum line of its core.
fn determining_basis(s: &LineSetSimplex) -> Result<Vec<Line>, CoinvariantError> {
    let n = s.ambient().dim();
    if s.ambient().m != 0 {
        return Err(CoinvariantError::NotAFrame(
            "stabilizers are computed in absolute context (m = 0)".into(),
        ));
    }
    if s.len() == n {
        if !is_partial_frame(s) {
            return Err(CoinvariantError::NotFullSpan);
        }
        return Ok(s.lines().to_vec());
    }
    if s.len() == n + 1 {
        let class = classify(s).map_err(|e| CoinvariantError::NotAFrame(e.to_string()))?;
        if class.kind != SimplexKind::InternallyAdditive {
            return Err(CoinvariantError::NotFullSpan);
        }
        let core = class.core.expect("internal core");
        let (v0, _, _) =
            internal_core_decomposition(&core).expect("internal core has a sum relation");
        let sum_line = Line::from_vector_scaled(v0).expect("core sum is nonzero");
        let basis: Vec<Line> = s.lines().iter().filter(|l| **l != sum_line).cloned().collect();
        if basis.len() != n {
            return Err(CoinvariantError::NotFullSpan);
        }
        return Ok(basis);
    }
    Err(CoinvariantError::NotAFrame(format!(
        "expected {} or {} lines, got {}",
        n,
        n + 1,
        s.len()
    )))
}

fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    // ordered selections of n distinct items from 0..k
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; k];
    fn rec(
        k: usize,
        n: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(k, n, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(k, n, &mut used, &mut current, &mut out);
    out
}

/// The full setwise stabilizer of a frame or augmented frame of `Z^n` inside
/// `GL_n(Z)` or `SL_n(Z)`.
pub fn stabilizer(
    s: &LineSetSimplex,
    kind: GroupKind,
) -> Result<FiniteMatrixGroup, CoinvariantError> {
    let n = s.ambient().dim();
    let basis = determining_basis(s)?;
    let basis_matrix = IntMatrix::from_rows_with_cols(
        basis.iter().map(|l| l.rep().to_vec()).collect(),
        n,
    )
    .transpose();
    let basis_inv = basis_matrix
        .inverse_unimodular()
        .map_err(|_| CoinvariantError::NotFullSpan)?;
    let lines = s.lines();
    let line_set: HashSet<&Line> = lines.iter().collect();
    let mut elements = Vec::new();
    for assignment in injections(lines.len(), n) {
        for signs in 0..(1u32 << n) {
            let cols: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    let rep = lines[assignment[i]].rep();
                    if signs >> i & 1 == 1 {
                        rep.iter().map(|x| -x.clone()).collect()
                    } else {
                        rep.to_vec()
                    }
                })
                .collect();
            let image_matrix =
                IntMatrix::from_rows_with_cols(cols, n).transpose();
            if !image_matrix.det().abs().is_one() {
                continue;
            }
            let g = image_matrix.mul(&basis_inv);
            if kind == GroupKind::SL && !g.det().is_one() {
                continue;
            }
            // the candidate must permute the whole line set
            let mut ok = true;
            for l in lines {
                match l.apply(&g) {
                    Ok(img) if line_set.contains(&img) => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                elements.push(g);
            }
        }
    }
    Ok(FiniteMatrixGroup::from_elements(n, elements))
}

/// A matrix carrying the line set of `a` onto the line set of `b`, if one
/// exists in the requested group.
pub fn orbit_witness(
    a: &LineSetSimplex,
    b: &LineSetSimplex,
    kind: GroupKind,
) -> Result<Option<IntMatrix>, CoinvariantError> {
    let n = a.ambient().dim();
    if b.ambient().dim() != n || a.len() != b.len() {
        return Ok(None);
    }
    let basis = determining_basis(a)?;
    let _ = determining_basis(b)?;
    let basis_matrix = IntMatrix::from_rows_with_cols(
        basis.iter().map(|l| l.rep().to_vec()).collect(),
        n,
    )
    .transpose();
    let basis_inv = basis_matrix
        .inverse_unimodular()
        .map_err(|_| CoinvariantError::NotFullSpan)?;
    let targets = b.lines();
    let target_set: HashSet<&Line> = targets.iter().collect();
    let a_lines = a.lines();
    for assignment in injections(targets.len(), n) {
        for signs in 0..(1u32 << n) {
            let cols: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    let rep = targets[assignment[i]].rep();
                    if signs >> i & 1 == 1 {
                        rep.iter().map(|x| -x.clone()).collect()
                    } else {
                        rep.to_vec()
                    }
                })
                .collect();
            let image_matrix = IntMatrix::from_rows_with_cols(cols, n).transpose();
            if !image_matrix.det().abs().is_one() {
                continue;
            }
            let g = image_matrix.mul(&basis_inv);
            if kind == GroupKind::SL && !g.det().is_one() {
                continue;
            }
            let mut ok = true;
            for l in a_lines {
                match l.apply(&g) {
                    Ok(img) if target_set.contains(&img) => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// The sign by which `g` permutes the ordered vertex list of a simplex it
/// stabilizes setwise.
pub fn orientation_character(
    g: &IntMatrix,
    ordered: &[Line],
) -> Result<i8, CoinvariantError> {
    let mut perm = Vec::with_capacity(ordered.len());
    for l in ordered {
        let img = l.apply(g).map_err(|_| CoinvariantError::NotAStabilizer)?;
        match ordered.iter().position(|x| *x == img) {
            Some(p) if !perm.contains(&p) => perm.push(p),
            _ => return Err(CoinvariantError::NotAStabilizer),
        }
    }
    let mut sign = 1i8;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// The character twist applied to the averaging sum.
#[derive(Clone, Debug)]
pub enum Twist {
    Trivial,
    /// Orientation character of the reference ordered simplex.
    Orientation(Vec<Line>),
}

/// Specification of a twisted coinvariant computation: group, tensor power
/// of the standard representation, twist, and determinant restriction.
#[derive(Clone, Debug)]
pub struct CoinvariantSpec {
    pub group: FiniteMatrixGroup,
    pub tensor_power: usize,
    pub twist: Twist,
    pub det_restriction: GroupKind,
}

/// The `k`-fold Kronecker power of `g`, accumulated sparsely into `acc`
/// scaled by `scale`.
fn accumulate_tensor_power(acc: &mut IntMatrix, g: &IntMatrix, k: usize, scale: &BigInt) {
    let n = g.rows();
    let dim = n.pow(k as u32);
    debug_assert_eq!(acc.rows(), dim);
    // nonzero entries of g
    let nonzero: Vec<(usize, usize, BigInt)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let v = g.at(i, j);
            if v.is_zero() {
                None
            } else {
                Some((i, j, v.clone()))
            }
        })
        .collect();
    // iterate over k-tuples of nonzero entries
    let mut stack: Vec<usize> = vec![0; k];
    loop {
        let mut row = 0usize;
        let mut col = 0usize;
        let mut val = scale.clone();
        for &t in &stack {
            let (i, j, ref v) = nonzero[t];
            row = row * n + i;
            col = col * n + j;
            val *= v;
        }
        let cur = acc.at(row, col) + val;
        acc.set(row, col, cur);
        // odometer
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            stack[pos] += 1;
            if stack[pos] < nonzero.len() {
                break;
            }
            stack[pos] = 0;
        }
    }
}

/// The character-twisted averaging sum `Σ_g χ(g)·g^{⊗k}` over the (possibly
/// determinant-restricted) group.
pub fn averaging_sum(spec: &CoinvariantSpec) -> Result<IntMatrix, CoinvariantError> {
    let n = spec.group.degree();
    let k = spec.tensor_power;
    let dim = n.pow(k as u32);
    let mut acc = IntMatrix::zero(dim, dim);
    for g in spec.group.elements() {
        if spec.det_restriction == GroupKind::SL && !g.det().is_one() {
            continue;
        }
        let chi = match &spec.twist {
            Twist::Trivial => 1i8,
            Twist::Orientation(reference) => orientation_character(g, reference)?,
        };
        if k == 0 {
            let cur = acc.at(0, 0) + BigInt::from(chi);
            acc.set(0, 0, cur);
        } else {
            accumulate_tensor_power(&mut acc, g, k, &BigInt::from(chi));
        }
    }
    Ok(acc)
}

/// Dimension of the twisted coinvariants: the rank of the averaging
/// projector, computed from the integer averaging sum.
pub fn coinvariant_dim(spec: &CoinvariantSpec) -> Result<usize, CoinvariantError> {
    Ok(averaging_sum(spec)?.rank())
}

/// An element of `SL_n(Z)` stabilizing the augmented frame
/// `(v_0 = v_1 + v_2, v_1, ..., v_n)` setwise, reversing its orientation,
/// and fixing the vectors at the given (1-based) indices.
pub fn phi_witness(
    sigma: &[Vec<BigInt>],
    indices: &[usize],
) -> Result<IntMatrix, CoinvariantError> {
    let n = sigma.len().saturating_sub(1);
    let k = indices.len();
    if n < 3 + k {
        return Err(CoinvariantError::NoWitness);
    }
    if sigma.iter().any(|v| v.len() != n) || indices.iter().any(|&i| i < 1 || i > n) {
        return Err(CoinvariantError::NoWitness);
    }
    let v0_check: Vec<BigInt> = sigma[1].iter().zip(&sigma[2]).map(|(a, b)| a + b).collect();
    if v0_check != sigma[0] {
        return Err(CoinvariantError::NoWitness);
    }
    let basis = IntMatrix::from_rows_with_cols(sigma[1..].to_vec(), n).transpose();
    let basis_inv = basis
        .inverse_unimodular()
        .map_err(|_| CoinvariantError::NoWitness)?;
    let free: Vec<usize> = (3..=n).filter(|j| !indices.contains(j)).collect();
    let mut inner = IntMatrix::identity(n);
    match free.as_slice() {
        [] => return Err(CoinvariantError::NoWitness),
        [j] => {
            // no second index: swap the first two vectors and negate v_j
            if indices.contains(&1) || indices.contains(&2) {
                return Err(CoinvariantError::NoWitness);
            }
            inner.set(0, 0, BigInt::zero());
            inner.set(1, 1, BigInt::zero());
            inner.set(0, 1, BigInt::one());
            inner.set(1, 0, BigInt::one());
            inner.set(j - 1, j - 1, BigInt::from(-1));
        }
        [j, jp, ..] => {
            // swap v_j and v_{j'} with one sign flip
            inner.set(j - 1, j - 1, BigInt::zero());
            inner.set(jp - 1, jp - 1, BigInt::zero());
            inner.set(j - 1, jp - 1, BigInt::one());
            inner.set(jp - 1, j - 1, BigInt::from(-1));
        }
    }
    let phi = basis.mul(&inner).mul(&basis_inv);
    debug_assert!(phi.det().is_one());
    Ok(phi)
}

/// A Young projector on `V^{⊗k}`: the integer symmetrizer together with the
/// normalization making it idempotent.
#[derive(Clone, Debug)]
pub struct YoungProjector {
    symmetrizer: IntMatrix,
    pub hook_dimension: BigInt,
    pub k_factorial: BigInt,
}

impl YoungProjector {
    pub fn symmetrizer(&self) -> &IntMatrix {
        &self.symmetrizer
    }

    /// Rank of the projector, i.e. the dimension of its image.
    pub fn rank(&self) -> usize {
        self.symmetrizer.rank()
    }

    /// `P = (f/k!)·C` is idempotent iff `f·C² = k!·C`.
    pub fn is_idempotent(&self) -> bool {
        let c2 = self.symmetrizer.mul(&self.symmetrizer);
        let lhs = scale_matrix(&c2, &self.hook_dimension);
        let rhs = scale_matrix(&self.symmetrizer, &self.k_factorial);
        lhs == rhs
    }
}

fn scale_matrix(m: &IntMatrix, c: &BigInt) -> IntMatrix {
    let mut out = IntMatrix::zero(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m.at(i, j) * c);
        }
    }
    out
}

/// Permutation action of `S_k` on index tuples: basis tuple `t` maps to
/// `t ∘ π^{-1}` (place permutation), giving a left action on `V^{⊗k}`.
fn permutation_matrix_on_tensor(perm: &[usize], n: usize) -> IntMatrix {
    let k = perm.len();
    let dim = n.pow(k as u32);
    let mut m = IntMatrix::zero(dim, dim);
    let mut tuple = vec![0usize; k];
    loop {
        // index of the source tuple
        let src = tuple.iter().fold(0usize, |acc, &x| acc * n + x);
        // image tuple: position p receives the factor from position perm^{-1}(p),
        // i.e. image[perm[p]] = tuple[p]
        let mut image = vec![0usize; k];
        for p in 0..k {
            image[perm[p]] = tuple[p];
        }
        let dst = image.iter().fold(0usize, |acc, &x| acc * n + x);
        m.set(dst, src, BigInt::one());
        let mut pos = k;
        loop {
            if pos == 0 {
                return m;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&i| outer[i]).collect()
}

fn perm_sign(perm: &[usize]) -> i8 {
    let mut sign = 1i8;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn subgroup_of_products(blocks: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    // all permutations preserving each block, as permutations of 0..k
    let mut result = vec![(0..k).collect::<Vec<usize>>()];
    for block in blocks {
        let mut next = Vec::new();
        let block_perms = all_permutations(block.len());
        for base in &result {
            for bp in &block_perms {
                let mut p = base.clone();
                for (slot, &target) in bp.iter().enumerate() {
                    p[block[slot]] = base[block[target]];
                }
                next.push(p);
            }
        }
        result = next;
    }
    result.sort();
    result.dedup();
    result
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn rec(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, out);
            items.swap(k, i);
        }
    }
    rec(&mut items, 0, &mut out);
    out
}

/// The Young projector for a partition of `k` with at most `n` parts, acting
/// on `V^{⊗k}` for `V = Q^n`.
pub fn young_projector(lambda: &[usize], n: usize) -> Result<YoungProjector, CoinvariantError> {
    let k: usize = lambda.iter().sum();
    if lambda.is_empty()
        || lambda.windows(2).any(|w| w[0] < w[1])
        || lambda.iter().any(|&p| p == 0)
        || lambda.len() > n
    {
        return Err(CoinvariantError::InvalidPartition);
    }
    // canonical tableau: fill rows left to right
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut next = 0usize;
    for &len in lambda {
        rows.push((next..next + len).collect());
        next += len;
    }
    let mut cols: Vec<Vec<usize>> = Vec::new();
    for c in 0..lambda[0] {
        let col: Vec<usize> = rows.iter().filter_map(|r| r.get(c).copied()).collect();
        if col.len() > 1 {
            cols.push(col);
        }
    }
    let row_group = subgroup_of_products(&rows, k);
    let col_group = subgroup_of_products(&cols, k);
    let dim = n.pow(k as u32);
    let mut sym = IntMatrix::zero(dim, dim);
    for p in &row_group {
        for q in &col_group {
            let sign = perm_sign(q);
            let pq = compose(p, q);
            let m = permutation_matrix_on_tensor(&pq, n);
            for i in 0..dim {
                for j in 0..dim {
                    if !m.at(i, j).is_zero() {
                        let cur = sym.at(i, j) + BigInt::from(sign);
                        sym.set(i, j, cur);
                    }
                }
            }
        }
    }
    // hook length formula for the symmetric-group dimension
    let mut hook_product = BigInt::one();
    for (r, &len) in lambda.iter().enumerate() {
        for c in 0..len {
            let arm = len - c - 1;
            let leg = lambda[r + 1..].iter().filter(|&&l| l > c).count();
            hook_product *= BigInt::from((arm + leg + 1) as u64);
        }
    }
    let mut k_factorial = BigInt::one();
    for i in 1..=k {
        k_factorial *= BigInt::from(i as u64);
    }
    let hook_dimension = &k_factorial / &hook_product;
    Ok(YoungProjector {
        symmetrizer: sym,
        hook_dimension,
        k_factorial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Ambient;

    fn line(v: &[i64]) -> Line {
        Line::from_i64(v).unwrap()
    }

    fn standard_frame(n: usize) -> LineSetSimplex {
        let lines: Vec<Line> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                line(&v)
            })
            .collect();
        LineSetSimplex::new(lines, Ambient::new(n, 0)).unwrap()
    }

    fn standard_augmented_frame(n: usize) -> LineSetSimplex {
        let mut lines: Vec<Line> = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                line(&v)
            })
            .collect();
        let mut v = vec![0i64; n];
        v[0] = 1;
        v[1] = 1;
        lines.push(line(&v));
        LineSetSimplex::new(lines, Ambient::new(n, 0)).unwrap()
    }

    #[test]
    fn frame_stabilizer_orders() {
        // 2^n · n!
        for (n, expected) in [(2usize, 8usize), (3, 48)] {
            let g = stabilizer(&standard_frame(n), GroupKind::GL).unwrap();
            assert_eq!(g.order(), expected, "n = {n}");
        }
    }

    #[test]
    fn augmented_frame_stabilizer_orders() {
        // 12 · 2^{n-2} · (n-2)!
        for (n, expected) in [(2usize, 12usize), (3, 24), (4, 96)] {
            let g = stabilizer(&standard_augmented_frame(n), GroupKind::GL).unwrap();
            assert_eq!(g.order(), expected, "n = {n}");
        }
    }

    #[test]
    fn sl_frame_stabilizer_z2() {
        let g = stabilizer(&standard_frame(2), GroupKind::SL).unwrap();
        assert_eq!(g.order(), 4);
        // oracle: filter the full GL list by determinant
        let gl = stabilizer(&standard_frame(2), GroupKind::GL).unwrap();
        let filtered = gl.restrict_to_sl();
        assert_eq!(filtered.order(), 4);
        assert_eq!(g.elements(), filtered.elements());
    }

    #[test]
    fn stabilizer_is_a_group() {
        let g = stabilizer(&standard_augmented_frame(3), GroupKind::GL).unwrap();
        assert!(g.verify_group_axioms());
    }

    #[test]
    fn stabilizer_rejects_non_spanning() {
        let s = LineSetSimplex::new(vec![line(&[1, 0, 0])], Ambient::new(3, 0)).unwrap();
        assert!(stabilizer(&s, GroupKind::GL).is_err());
    }

    #[test]
    fn orbit_witness_examples() {
        let a = standard_frame(2);
        let g = orbit_witness(&a, &a, GroupKind::GL).unwrap().unwrap();
        // some stabilizing element; the identity qualifies but any witness
        // must map the frame to itself
        for l in a.lines() {
            assert!(a.lines().contains(&l.apply(&g).unwrap()));
        }

        let b = LineSetSimplex::new(
            vec![line(&[1, 1]), line(&[0, 1])],
            Ambient::new(2, 0),
        )
        .unwrap();
        let g = orbit_witness(&a, &b, GroupKind::GL).unwrap().unwrap();
        for l in a.lines() {
            assert!(b.lines().contains(&l.apply(&g).unwrap()));
        }
    }

    #[test]
    fn orientation_character_examples() {
        let frame = standard_frame(2);
        let ordered: Vec<Line> = frame.lines().to_vec();
        let id = IntMatrix::identity(2);
        assert_eq!(orientation_character(&id, &ordered), Ok(1));
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(orientation_character(&swap, &ordered), Ok(-1));
        let neg = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert_eq!(orientation_character(&neg, &ordered), Ok(1));
        let shear = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            orientation_character(&shear, &ordered),
            Err(CoinvariantError::NotAStabilizer)
        );
    }

    #[test]
    fn coinvariant_dims_vanish() {
        // frame stabilizer of Z^3 with orientation twist over GL: dimension 0
        let frame = standard_frame(3);
        let g = stabilizer(&frame, GroupKind::GL).unwrap();
        let spec = CoinvariantSpec {
            group: g,
            tensor_power: 0,
            twist: Twist::Orientation(frame.lines().to_vec()),
            det_restriction: GroupKind::GL,
        };
        assert_eq!(coinvariant_dim(&spec).unwrap(), 0);

        // independent oracle: the character sum over the 48 signed
        // permutations is zero
        let gl = stabilizer(&frame, GroupKind::GL).unwrap();
        let mut total = 0i64;
        for g in gl.elements() {
            total += orientation_character(g, frame.lines()).unwrap() as i64;
        }
        assert_eq!(total, 0);

        // augmented-frame stabilizer, SL restriction: dimension 0
        let aug = standard_augmented_frame(3);
        let g = stabilizer(&aug, GroupKind::SL).unwrap();
        let spec = CoinvariantSpec {
            group: g,
            tensor_power: 0,
            twist: Twist::Orientation(aug.lines().to_vec()),
            det_restriction: GroupKind::SL,
        };
        assert_eq!(coinvariant_dim(&spec).unwrap(), 0);
    }

    #[test]
    fn averaging_is_idempotent_up_to_order() {
        let aug = standard_augmented_frame(3);
        let group = stabilizer(&aug, GroupKind::SL).unwrap();
        let order = group.order();
        let spec = CoinvariantSpec {
            group,
            tensor_power: 1,
            twist: Twist::Orientation(aug.lines().to_vec()),
            det_restriction: GroupKind::SL,
        };
        let m = averaging_sum(&spec).unwrap();
        // (M/|G|)^2 = M/|G|  ⟺  M² = |G|·M
        let m2 = m.mul(&m);
        assert_eq!(m2, scale_matrix(&m, &BigInt::from(order as u64)));
    }

    #[test]
    fn phi_witness_cases() {
        // n = 5, k = 1, indices (4): two free indices among {3, 5}
        let mut sigma = Vec::new();
        let n = 5;
        let mut v0 = vec![BigInt::zero(); n];
        v0[0] = BigInt::one();
        v0[1] = BigInt::one();
        sigma.push(v0);
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            sigma.push(v);
        }
        let phi = phi_witness(&sigma, &[4]).unwrap();
        assert!(phi.det().is_one());
        assert_eq!(phi.mul_vec(&sigma[4]), sigma[4]);
        assert_eq!(phi.mul_vec(&sigma[0]), sigma[0]);
        let lines: Vec<Line> = sigma
            .iter()
            .map(|v| Line::from_vector(v.clone()).unwrap())
            .collect();
        assert_eq!(orientation_character(&phi, &lines), Ok(-1));

        // n = 4, k = 1, indices (3): only j = 4 free, case 2
        let mut sigma = Vec::new();
        let n = 4;
        let mut v0 = vec![BigInt::zero(); n];
        v0[0] = BigInt::one();
        v0[1] = BigInt::one();
        sigma.push(v0);
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            sigma.push(v);
        }
        let phi = phi_witness(&sigma, &[3]).unwrap();
        assert!(phi.det().is_one());
        assert_eq!(phi.mul_vec(&sigma[3]), sigma[3]);
        assert_eq!(phi.mul_vec(&sigma[0]), sigma[0]);
        // swaps v_1 and v_2
        assert_eq!(phi.mul_vec(&sigma[1]), sigma[2]);
        let lines: Vec<Line> = sigma
            .iter()
            .map(|v| Line::from_vector(v.clone()).unwrap())
            .collect();
        assert_eq!(orientation_character(&phi, &lines), Ok(-1));

        // n = 3, k = 0
        let mut sigma = Vec::new();
        let n = 3;
        let mut v0 = vec![BigInt::zero(); n];
        v0[0] = BigInt::one();
        v0[1] = BigInt::one();
        sigma.push(v0);
        for i in 0..n {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::one();
            sigma.push(v);
        }
        let phi = phi_witness(&sigma, &[]).unwrap();
        assert!(phi.det().is_one());
        assert_eq!(phi.mul_vec(&sigma[0]), sigma[0]);

        // n below the bound: no witness
        assert_eq!(
            phi_witness(&sigma, &[1, 2]),
            Err(CoinvariantError::NoWitness)
        );
    }

    #[test]
    fn young_projector_examples() {
        // λ = (1): identity on V
        let p = young_projector(&[1], 3).unwrap();
        assert_eq!(p.rank(), 3);
        assert!(p.is_idempotent());

        // λ = (2), n = 2: symmetric square, rank 3
        let p = young_projector(&[2], 2).unwrap();
        assert_eq!(p.rank(), 3);
        assert!(p.is_idempotent());

        // λ = (1,1), n = 3: exterior square, rank 3
        let p = young_projector(&[1, 1], 3).unwrap();
        assert_eq!(p.rank(), 3);
        assert!(p.is_idempotent());

        assert!(young_projector(&[1, 2], 3).is_err());
        assert!(young_projector(&[1, 1, 1], 2).is_err());
    }

    #[test]
    fn young_projector_commutes_with_diagonal_action() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = young_projector(&[2], 3).unwrap();
        for _ in 0..5 {
            let g = crate::sampling::random_unimodular(&mut rng, 3, 6, 2);
            let mut gg = IntMatrix::zero(9, 9);
            accumulate_tensor_power(&mut gg, &g, 2, &BigInt::one());
            assert_eq!(
                gg.mul(p.symmetrizer()),
                p.symmetrizer().mul(&gg)
            );
        }
    }
}
