//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Hermite and Smith normal forms with their transformation matrices,
//! sublattice saturation, summand-basis tests and unimodular completion.
//! These back every summand test in [`crate::lattice`] and every homology
//! computation in [`crate::homology`].
//!
//! Conventions: Hermite normal form is row-style echelon with positive pivots
//! and the entries above each pivot reduced into `[0, pivot)`. Smith normal
//! form uses elementary operations with pivoting on the least-magnitude
//! nonzero entry.

mod io;

pub use io::SparseMatrixJson;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactLinError {
    #[error("vectors do not form a basis of a direct summand")]
    NotASummandBasis,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("malformed matrix data: {0}")]
    Malformed(String),
}

/// A dense matrix over `Z` with arbitrary-precision entries.
///
/// Dimensions are fixed at construction; all operations return new values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Build from row vectors. All rows must have equal length; a matrix with
    /// zero rows needs `cols` supplied via [`IntMatrix::from_rows_with_cols`].
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        assert!(!rows.is_empty(), "use from_rows_with_cols for empty input");
        let cols = rows[0].len();
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product `A·v` with `v` as a column.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix, computed from its Hermite form.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix, ExactLinError> {
        if !self.is_square() {
            return Err(ExactLinError::NotUnimodular);
        }
        let (h, u) = hnf(self);
        if h != IntMatrix::identity(self.rows) {
            return Err(ExactLinError::NotUnimodular);
        }
        Ok(u)
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        (0..h.rows).filter(|&i| !h.row(i).iter().all(Zero::is_zero)).count()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c).clone();
            self.set(i, c, v);
        }
    }

    /// `row_i -= q * row_j`
    fn row_sub_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(i, c) - q * self.at(j, c);
            self.set(i, c, v);
        }
    }

    /// `col_i -= q * col_j`
    fn col_sub_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, i) - q * self.at(r, j);
            self.set(r, i, v);
        }
    }

    /// `row_i += row_j`
    fn row_add(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let v = self.at(i, c) + self.at(j, c);
            self.set(i, c, v);
        }
    }

    /// `(row_i, row_j) <- (a·row_i + b·row_j, c·row_i + d·row_j)`; the 2x2
    /// coefficient matrix must be unimodular for the callers' invariants.
    fn combine_rows(&mut self, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        for k in 0..self.cols {
            let x = self.at(i, k).clone();
            let y = self.at(j, k).clone();
            self.set(i, k, a * &x + b * &y);
            self.set(j, k, c * &x + d * &y);
        }
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular, `U·A = H`, `H` in echelon form with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut pr = 0;
    for pc in 0..a.cols {
        if pr == h.rows {
            break;
        }
        let Some(first) = (pr..h.rows).find(|&r| !h.at(r, pc).is_zero()) else {
            continue;
        };
        h.swap_rows(pr, first);
        u.swap_rows(pr, first);
        for r in pr + 1..h.rows {
            if h.at(r, pc).is_zero() {
                continue;
            }
            let a_ = h.at(pr, pc).clone();
            let b_ = h.at(r, pc).clone();
            let eg = a_.extended_gcd(&b_);
            let ad = &a_ / &eg.gcd;
            let bd = &b_ / &eg.gcd;
            h.combine_rows(pr, r, &eg.x, &eg.y, &(-&bd), &ad);
            u.combine_rows(pr, r, &eg.x, &eg.y, &(-&bd), &ad);
        }
        if h.at(pr, pc).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let p = h.at(pr, pc).clone();
        for r in 0..pr {
            let q = h.at(r, pc).div_floor(&p);
            if !q.is_zero() {
                h.row_sub_mul(r, pr, &q);
                u.row_sub_mul(r, pr, &q);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form `U·A·V = S` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.at(i, i).clone()).collect()
    }
}

pub fn snf(a: &IntMatrix) -> SnfResult {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_magnitude_nonzero(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            let pivot = s.at(t, t).clone();
            for r in t + 1..s.rows {
                if !s.at(r, t).is_zero() {
                    let q = s.at(r, t).div_floor(&pivot);
                    if !q.is_zero() {
                        s.row_sub_mul(r, t, &q);
                        u.row_sub_mul(r, t, &q);
                    }
                    if !s.at(r, t).is_zero() {
                        clean = false;
                    }
                }
            }
            let pivot = s.at(t, t).clone();
            for c in t + 1..s.cols {
                if !s.at(t, c).is_zero() {
                    let q = s.at(t, c).div_floor(&pivot);
                    if !q.is_zero() {
                        s.col_sub_mul(c, t, &q);
                        v.col_sub_mul(c, t, &q);
                    }
                    if !s.at(t, c).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                let (pi, pj) = min_magnitude_nonzero(&s, t).expect("nonzero entry survives");
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear; the pivot must also divide the rest of
            // the submatrix for the divisibility chain.
            let pivot = s.at(t, t).clone();
            let offender = (t + 1..s.rows)
                .flat_map(|r| (t + 1..s.cols).map(move |c| (r, c)))
                .find(|&(r, c)| !s.at(r, c).mod_floor(&pivot).is_zero());
            match offender {
                Some((r, _)) => {
                    s.row_add(t, r);
                    u.row_add(t, r);
                }
                None => break,
            }
        }
        if s.at(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SnfResult {
        rank: t,
        s,
        u,
        v,
    }
}

fn min_magnitude_nonzero(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in from..m.rows {
        for c in from..m.cols {
            let v = m.at(r, c);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if m.at(br, bc).abs() <= v.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Basis of the right kernel `{x in Z^cols : A·x = 0}`, returned as the rows
/// of the output. Kernels of integer matrices are saturated, so the rows span
/// a direct summand.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&a.transpose());
    let zero_rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    IntMatrix::from_rows_with_cols(zero_rows, a.cols)
}

/// Basis of the saturation `span_Q(rows of B) ∩ Z^cols`, i.e. of the smallest
/// direct summand containing the row lattice. The result is the Hermite basis
/// of that summand, so `saturate` is idempotent on the nose.
pub fn saturate(b: &IntMatrix) -> IntMatrix {
    let sat = kernel(&kernel(b));
    let (h, _) = hnf(&sat);
    // kernel output has full row rank, so no zero rows to strip
    h
}

/// True iff the vectors are independent and span a direct summand of `Z^len`,
/// i.e. the Smith form of the matrix they span is an identity block.
pub fn is_summand_basis(vectors: &[Vec<BigInt>], len: usize) -> bool {
    if vectors.is_empty() {
        return true;
    }
    if vectors.iter().any(|v| v.len() != len) || vectors.len() > len {
        return false;
    }
    let m = IntMatrix::from_rows_with_cols(vectors.to_vec(), len);
    let r = snf(&m);
    r.rank == vectors.len() && r.invariant_factors().iter().all(|d| d.is_one())
}

/// Complete a summand basis to a basis of `Z^len`.
///
/// Returns a unimodular matrix whose first `k` *columns* are the input
/// vectors. Errors with [`ExactLinError::NotASummandBasis`] if the input is
/// not a summand basis.
pub fn unimodular_complete(vectors: &[Vec<BigInt>], len: usize) -> Result<IntMatrix, ExactLinError> {
    if !is_summand_basis(vectors, len) {
        return Err(ExactLinError::NotASummandBasis);
    }
    let k = vectors.len();
    if k == 0 {
        return Ok(IntMatrix::identity(len));
    }
    let a = IntMatrix::from_rows_with_cols(vectors.to_vec(), len);
    let r = snf(&a);
    // A = U^{-1} S V^{-1} with S = [I_k | 0], so the first k rows of
    // diag(U^{-1}, I)·V^{-1} recover A; transpose to get column form.
    let u_inv = r.u.inverse_unimodular()?;
    let v_inv = r.v.inverse_unimodular()?;
    let mut block = IntMatrix::identity(len);
    for i in 0..k {
        for j in 0..k {
            block.set(i, j, u_inv.at(i, j).clone());
        }
    }
    let b = block.mul(&v_inv);
    debug_assert!((0..k).all(|i| b.row(i) == &vectors[i][..]));
    Ok(b.transpose())
}

/// Solve `A·x = b` over `Q` by Gaussian elimination.
///
/// Returns `None` if the system is inconsistent. When the solution space is
/// positive-dimensional an arbitrary solution (free variables set to zero) is
/// returned.
pub fn solve_right_rational(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows, b.len(), "dimension mismatch in solve");
    let rows = a.rows;
    let cols = a.cols;
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = a
                .row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            row.push(BigRational::from_integer(b[i].clone()));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut pr = 0;
    for pc in 0..cols {
        let Some(sel) = (pr..rows).find(|&r| !m[r][pc].is_zero()) else {
            continue;
        };
        m.swap(pr, sel);
        let inv = m[pr][pc].recip();
        for c in pc..=cols {
            let v = &m[pr][c] * &inv;
            m[pr][c] = v;
        }
        for r in 0..rows {
            if r != pr && !m[r][pc].is_zero() {
                let f = m[r][pc].clone();
                for c in pc..=cols {
                    let v = &m[r][c] - &f * &m[pr][c];
                    m[r][c] = v;
                }
            }
        }
        pivot_cols.push(pc);
        pr += 1;
        if pr == rows {
            break;
        }
    }
    // consistency: no row of the form (0 ... 0 | nonzero)
    for r in pr..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = m[i][cols].clone();
    }
    Some(x)
}

/// Solve `x·B = a` over `Q` for a row vector `x`.
pub fn solve_left_rational(b: &IntMatrix, a: &[BigInt]) -> Option<Vec<BigRational>> {
    solve_right_rational(&b.transpose(), a)
}
