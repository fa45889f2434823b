//! Lines, partial frames, partial augmented frames, and the classification of
//! simplices into standard, internally additive and externally additive types.
//!
//! A *line* is a primitive vector up to sign, stored canonically with its
//! first nonzero coordinate positive. A set of lines together with an ambient
//! context `(n, m)` — where `e_1, ..., e_m` are implicit relative lines in
//! `Z^{m+n}` — is the raw datum of a simplex of `B_n^m` or `BA_n^m`.

use crate::exactlin::is_summand_basis;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vector is zero or not primitive")]
    NotPrimitive,
    #[error("line lies in the span of the relative basis vectors")]
    LineInRelativeSpan,
    #[error("lines are not distinct")]
    DuplicateLine,
    #[error("line has wrong dimension: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a simplex: {0}")]
    NotASimplex(String),
}

/// Flip the sign of `v` if needed so its first nonzero coordinate is positive.
pub(crate) fn sign_canonical(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut v {
                *x = -std::mem::take(x);
            }
        }
    }
    v
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Total order on coordinate vectors comparing the last coordinate first.
/// This sorts the standard basis as `e_1 < e_2 < ... < e_n`, which is the
/// order the canonical frame symbols assume.
pub fn colex_cmp(a: &[BigInt], b: &[BigInt]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// A line `⟨v⟩ = {v, -v}` for a primitive integer vector `v`, stored as the
/// canonical representative (first nonzero coordinate positive).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Line {
    rep: Vec<BigInt>,
}

impl PartialOrd for Line {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Line {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        colex_cmp(&self.rep, &other.rep)
    }
}

impl std::fmt::Debug for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨")?;
        for (i, x) in self.rep.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "⟩")
    }
}

impl Line {
    /// The line spanned by a primitive vector. Errors if `v` is zero or has
    /// coordinate gcd greater than one.
    pub fn from_vector(v: Vec<BigInt>) -> Result<Line, LatticeError> {
        let c = content(&v);
        if c.is_zero() || !c.is_one() {
            return Err(LatticeError::NotPrimitive);
        }
        Ok(Line {
            rep: sign_canonical(v),
        })
    }

    /// The line through a nonzero vector, dividing by the content first.
    pub fn from_vector_scaled(v: Vec<BigInt>) -> Option<Line> {
        let c = content(&v);
        if c.is_zero() {
            return None;
        }
        let scaled = v.into_iter().map(|x| x / &c).collect();
        Some(Line {
            rep: sign_canonical(scaled),
        })
    }

    pub fn from_i64(v: &[i64]) -> Result<Line, LatticeError> {
        Self::from_vector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    pub fn neg_rep(&self) -> Vec<BigInt> {
        self.rep.iter().map(|x| -x.clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    /// Sup-norm of the canonical representative.
    pub fn sup_norm(&self) -> BigInt {
        self.rep
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Image under an integer matrix, as a line (the image of a primitive
    /// vector under a unimodular map is primitive).
    pub fn apply(&self, m: &crate::exactlin::IntMatrix) -> Result<Line, LatticeError> {
        Line::from_vector(m.mul_vec(&self.rep))
    }
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.rep.iter().map(|x| x.to_string()).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let v: Result<Vec<BigInt>, _> = strings.iter().map(|s| BigInt::from_str(s)).collect();
        let v = v.map_err(serde::de::Error::custom)?;
        Line::from_vector(v).map_err(serde::de::Error::custom)
    }
}

/// Ambient context for simplices: lines live in `Z^{m+n}` and `e_1, ..., e_m`
/// are the implicit relative lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ambient {
    pub n: usize,
    pub m: usize,
}

impl Ambient {
    pub fn new(n: usize, m: usize) -> Self {
        Ambient { n, m }
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    /// The standard basis vector `e_i` (zero-based) of `Z^{m+n}`.
    pub fn basis_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim()];
        v[i] = BigInt::from(1);
        v
    }

    /// The implicit relative vectors `e_1, ..., e_m`.
    pub fn relative_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.m).map(|i| self.basis_vector(i)).collect()
    }

    /// Whether `v` lies in `Span_Z(e_1, ..., e_m)`.
    pub fn in_relative_span(&self, v: &[BigInt]) -> bool {
        self.m > 0 && v[self.m..].iter().all(Zero::is_zero)
    }
}

/// A finite set of distinct lines in an ambient context — the raw datum of a
/// simplex. Lines are kept sorted; none may lie in the relative span.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LineSetSimplex {
    lines: Vec<Line>,
    ambient: Ambient,
}

impl LineSetSimplex {
    pub fn new(mut lines: Vec<Line>, ambient: Ambient) -> Result<Self, LatticeError> {
        for l in &lines {
            if l.dim() != ambient.dim() {
                return Err(LatticeError::DimensionMismatch {
                    expected: ambient.dim(),
                    got: l.dim(),
                });
            }
            if ambient.in_relative_span(l.rep()) {
                return Err(LatticeError::LineInRelativeSpan);
            }
        }
        lines.sort();
        if lines.windows(2).any(|w| w[0] == w[1]) {
            return Err(LatticeError::DuplicateLine);
        }
        Ok(LineSetSimplex { lines, ambient })
    }

    pub fn empty(ambient: Ambient) -> Self {
        LineSetSimplex {
            lines: Vec::new(),
            ambient,
        }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, l: &Line) -> bool {
        self.lines.binary_search(l).is_ok()
    }

    pub fn without(&self, l: &Line) -> Self {
        LineSetSimplex {
            lines: self.lines.iter().filter(|x| *x != l).cloned().collect(),
            ambient: self.ambient,
        }
    }

    pub fn with(&self, l: Line) -> Result<Self, LatticeError> {
        let mut lines = self.lines.clone();
        lines.push(l);
        Self::new(lines, self.ambient)
    }

    /// Representatives of the simplex lines preceded by `e_1, ..., e_m`.
    pub fn vectors_with_relative(&self) -> Vec<Vec<BigInt>> {
        let mut vs = self.ambient.relative_vectors();
        vs.extend(self.lines.iter().map(|l| l.rep().to_vec()));
        vs
    }
}

impl Serialize for LineSetSimplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            lines: &'a [Line],
            n: usize,
            m: usize,
        }
        Repr {
            lines: &self.lines,
            n: self.ambient.n,
            m: self.ambient.m,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LineSetSimplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            lines: Vec<Line>,
            n: usize,
            m: usize,
        }
        let r = Repr::deserialize(deserializer)?;
        LineSetSimplex::new(r.lines, Ambient::new(r.n, r.m)).map_err(serde::de::Error::custom)
    }
}

/// The spec-level trichotomy of simplices of `BA_n^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplexKind {
    Standard,
    InternallyAdditive,
    ExternallyAdditive,
}

/// Classification of a simplex, carrying the additive core where one exists
/// (three lines for internally additive, two for externally additive).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexClass {
    pub kind: SimplexKind,
    pub core: Option<Vec<Line>>,
}

/// True iff the lines of `s` together with `e_1, ..., e_m` form a basis of a
/// direct summand of `Z^{m+n}`.
pub fn is_partial_frame(s: &LineSetSimplex) -> bool {
    is_summand_basis(&s.vectors_with_relative(), s.ambient().dim())
}

/// Whether `a = ±b ± c` for some choice of signs (b, c fixed vectors).
fn signed_sum_matches(a: &[BigInt], b: &[BigInt], c: &[BigInt]) -> bool {
    for sign in [1i64, -1] {
        let sum: Vec<BigInt> = b
            .iter()
            .zip(c)
            .map(|(x, y)| x + BigInt::from(sign) * y)
            .collect();
        let canon = sign_canonical(sum);
        if canon == a {
            return true;
        }
    }
    false
}

/// True iff `s` (with the implicit relative lines) is a partial augmented
/// frame: a partial frame, or a set which becomes one after removing a line
/// `l_0` participating in a signed three-term relation `±v_0 ± v_1 ± v_2 = 0`
/// whose partners may be other lines of `s` or implicit `e_i`.
pub fn is_partial_augmented_frame(s: &LineSetSimplex) -> bool {
    if is_partial_frame(s) {
        return true;
    }
    for l0 in s.lines() {
        let rest = s.without(l0);
        if !is_partial_frame(&rest) {
            continue;
        }
        let mut partners: Vec<Vec<BigInt>> = rest.lines().iter().map(|l| l.rep().to_vec()).collect();
        partners.extend(s.ambient().relative_vectors());
        let k = partners.len();
        for i in 0..k {
            for j in i + 1..k {
                if signed_sum_matches(l0.rep(), &partners[i], &partners[j]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Classify a nonempty simplex of `BA_n^m` as standard, internally additive
/// or externally additive, returning the additive core where applicable.
pub fn classify(s: &LineSetSimplex) -> Result<SimplexClass, LatticeError> {
    if s.is_empty() {
        return Err(LatticeError::NotASimplex("empty line set".into()));
    }
    if is_partial_frame(s) {
        return Ok(SimplexClass {
            kind: SimplexKind::Standard,
            core: None,
        });
    }
    if !is_partial_augmented_frame(s) {
        return Err(LatticeError::NotASimplex(
            "not a partial augmented frame".into(),
        ));
    }
    // internally additive: a signed relation among three lines of s
    let lines = s.lines();
    for a in 0..lines.len() {
        for b in 0..lines.len() {
            if b == a {
                continue;
            }
            for c in b + 1..lines.len() {
                if c == a {
                    continue;
                }
                if signed_sum_matches(lines[a].rep(), lines[b].rep(), lines[c].rep())
                    && is_partial_frame(&s.without(&lines[a]))
                {
                    let mut core = vec![lines[a].clone(), lines[b].clone(), lines[c].clone()];
                    core.sort();
                    return Ok(SimplexClass {
                        kind: SimplexKind::InternallyAdditive,
                        core: Some(core),
                    });
                }
            }
        }
    }
    // externally additive: a signed relation of two lines of s with some e_i
    for a in 0..lines.len() {
        for b in 0..lines.len() {
            if b == a {
                continue;
            }
            for i in 0..s.ambient().m {
                let ei = s.ambient().basis_vector(i);
                if signed_sum_matches(lines[a].rep(), lines[b].rep(), &ei)
                    && is_partial_frame(&s.without(&lines[a]))
                {
                    let mut core = vec![lines[a].clone(), lines[b].clone()];
                    core.sort();
                    return Ok(SimplexClass {
                        kind: SimplexKind::ExternallyAdditive,
                        core: Some(core),
                    });
                }
            }
        }
    }
    Err(LatticeError::NotASimplex(
        "augmented frame without locatable core".into(),
    ))
}
