//! Bounded enumeration of the complexes `B_n^m`, `BA_n^m` and `BA'_n`,
//! together with links, restricted links, the span map to the poset of proper
//! nonzero summands, and poset realizations.
//!
//! A bounded complex is the *full* subcomplex induced by the vertices whose
//! canonical representatives lie inside a sup-norm ball, so membership of any
//! candidate simplex is decided by the predicates of [`crate::lattice`] alone
//! and results are monotone in the ball. Vertices are kept in lexicographic
//! order of their canonical representatives and simplices as sorted index
//! tuples, which makes every enumeration deterministic.

use crate::exactlin::{self, solve_left_rational, IntMatrix};
use crate::lattice::{
    classify, is_partial_augmented_frame, is_partial_frame, sign_canonical, Ambient, LatticeError,
    Line, LineSetSimplex, SimplexKind,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("invalid complex specification: {0}")]
    InvalidSpec(String),
    #[error("simplex does not belong to the complex")]
    SimplexNotInComplex,
    #[error("simplex is not standard")]
    NotStandard,
    #[error("span is all of the ambient lattice")]
    FullSpan,
    #[error("not a simplex: {0}")]
    NotASimplex(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    B,
    BA,
    BAprime,
}

/// Specification of a bounded complex: the variant, the ambient `(n, m)`, and
/// the sup-norm ball bounding canonical vertex representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedComplexSpec {
    pub variant: Variant,
    pub n: usize,
    pub m: usize,
    pub ball: u64,
}

impl BoundedComplexSpec {
    pub fn new(variant: Variant, n: usize, m: usize, ball: u64) -> Self {
        BoundedComplexSpec { variant, n, m, ball }
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        if self.ball == 0 {
            return Err(ComplexError::InvalidSpec("ball must be at least 1".into()));
        }
        match self.variant {
            Variant::B => Ok(()),
            Variant::BA => {
                if self.n >= 1 && self.m + self.n >= 2 {
                    Ok(())
                } else {
                    Err(ComplexError::InvalidSpec(format!(
                        "BA is only defined for n >= 1 and m+n >= 2, got n={}, m={}",
                        self.n, self.m
                    )))
                }
            }
            Variant::BAprime => {
                if self.m != 0 {
                    Err(ComplexError::InvalidSpec(
                        "BAprime is only defined relative to m = 0".into(),
                    ))
                } else if self.n < 2 {
                    Err(ComplexError::InvalidSpec(
                        "BAprime requires n >= 2".into(),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::new(self.n, self.m)
    }

    /// Largest simplex dimension the variant can support.
    pub fn dim_cap(&self) -> Option<usize> {
        match self.variant {
            Variant::B => self.n.checked_sub(1),
            Variant::BA => Some(self.n),
            Variant::BAprime => self.n.checked_sub(1),
        }
    }

    /// Content hash of the spec, used as a cache key by the CLI.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("spec serializes");
        let mut h = Sha256::new();
        h.update(canonical.as_bytes());
        hex_string(&h.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A simplex as a sorted tuple of vertex indices.
pub type Simplex = Vec<u32>;

/// A finite full subcomplex: vertices inside a ball, simplices listed per
/// dimension. `base` records lines implicitly joined to every simplex (empty
/// for a full complex, the carrier simplex for a link).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedComplex {
    spec: BoundedComplexSpec,
    base: Vec<Line>,
    vertices: Vec<Line>,
    dims: Vec<Vec<Simplex>>,
    max_dim: usize,
}

impl BoundedComplex {
    pub fn spec(&self) -> &BoundedComplexSpec {
        &self.spec
    }

    pub fn base(&self) -> &[Line] {
        &self.base
    }

    pub fn vertices(&self) -> &[Line] {
        &self.vertices
    }

    pub fn vertex_index(&self, l: &Line) -> Option<u32> {
        self.vertices.binary_search(l).ok().map(|i| i as u32)
    }

    /// Simplices of dimension `d` (as sorted index tuples).
    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.dims.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn dims(&self) -> &[Vec<Simplex>] {
        &self.dims
    }

    /// Largest dimension that was enumerated (inclusive cap).
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn top_dim(&self) -> Option<usize> {
        (0..self.dims.len()).rev().find(|&d| !self.dims[d].is_empty())
    }

    pub fn simplex_count(&self) -> usize {
        self.dims.iter().map(Vec::len).sum()
    }

    pub fn lines_of(&self, simplex: &[u32]) -> Vec<Line> {
        simplex
            .iter()
            .map(|&i| self.vertices[i as usize].clone())
            .collect()
    }

    pub fn lineset_of(&self, simplex: &[u32]) -> LineSetSimplex {
        LineSetSimplex::new(self.lines_of(simplex), self.spec.ambient())
            .expect("stored simplices are valid")
    }

    pub fn contains_index_simplex(&self, simplex: &[u32]) -> bool {
        let d = match simplex.len() {
            0 => return true,
            k => k - 1,
        };
        self.dims
            .get(d)
            .is_some_and(|list| list.binary_search_by(|s| s.as_slice().cmp(simplex)).is_ok())
    }

    pub fn contains_lines(&self, lines: &[Line]) -> bool {
        let mut idx: Vec<u32> = Vec::with_capacity(lines.len());
        for l in lines {
            match self.vertex_index(l) {
                Some(i) => idx.push(i),
                None => return false,
            }
        }
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != lines.len() {
            return false;
        }
        self.contains_index_simplex(&idx)
    }

    /// Re-derives the membership predicate for an arbitrary candidate set of
    /// lines (regardless of whether they are vertices of this bounded part).
    pub fn predicate(&self, lines: &[Line]) -> bool {
        simplex_predicate(self.spec.variant, self.spec.ambient(), &self.base, lines)
    }

    /// Rebuild from the spec and compare; true iff the stored data is exactly
    /// the deterministic enumeration.
    pub fn revalidate(&self) -> bool {
        let rebuilt = build_full_subcomplex(
            self.spec,
            self.base.clone(),
            self.vertices.clone(),
            self.max_dim,
        );
        rebuilt == *self
    }
}

fn simplex_predicate(
    variant: Variant,
    ambient: Ambient,
    base: &[Line],
    tau: &[Line],
) -> bool {
    let mut all: Vec<Line> = base.to_vec();
    all.extend_from_slice(tau);
    let Ok(s) = LineSetSimplex::new(all, ambient) else {
        return false;
    };
    match variant {
        Variant::B => is_partial_frame(&s),
        Variant::BA => is_partial_augmented_frame(&s),
        Variant::BAprime => {
            if !is_partial_augmented_frame(&s) {
                return false;
            }
            let reps: Vec<Vec<BigInt>> = s.lines().iter().map(|l| l.rep().to_vec()).collect();
            let m = IntMatrix::from_rows_with_cols(reps, ambient.dim());
            m.rank() < ambient.dim()
        }
    }
}

/// All canonical representatives of lines in `Z^dim` with sup-norm at most
/// `ball`: primitive vectors whose first nonzero coordinate is positive.
pub(crate) fn canonical_vectors_in_ball(dim: usize, ball: u64) -> Vec<Vec<BigInt>> {
    let b = ball as i64;
    let mut out = Vec::new();
    let mut v = vec![-b; dim];
    if dim == 0 {
        return out;
    }
    loop {
        // canonical: first nonzero coordinate positive
        if let Some(&first) = v.iter().find(|&&x| x != 0) {
            if first > 0 {
                let g = v.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x.abs()));
                if g == 1 {
                    out.push(v.iter().map(|&x| BigInt::from(x)).collect());
                }
            }
        }
        // increment odometer
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if v[i] < b {
                v[i] += 1;
                for x in &mut v[i + 1..] {
                    *x = -b;
                }
                break;
            }
        }
    }
}

/// Enumerate the bounded complex of `spec` up to dimension `max_dim`.
pub fn enumerate(spec: &BoundedComplexSpec, max_dim: usize) -> Result<BoundedComplex, ComplexError> {
    spec.validate()?;
    let ambient = spec.ambient();
    let mut vertices = Vec::new();
    for v in canonical_vectors_in_ball(ambient.dim(), spec.ball) {
        let Ok(line) = Line::from_vector(v) else {
            continue;
        };
        if ambient.in_relative_span(line.rep()) {
            continue;
        }
        if simplex_predicate(spec.variant, ambient, &[], std::slice::from_ref(&line)) {
            vertices.push(line);
        }
    }
    vertices.sort();
    Ok(build_full_subcomplex(*spec, Vec::new(), vertices, max_dim))
}

/// Build the full subcomplex induced by `vertices` relative to `base`, using
/// the membership predicate of the spec's variant. Simplices are found by
/// ordered extension with predicate pruning.
pub fn build_full_subcomplex(
    spec: BoundedComplexSpec,
    base: Vec<Line>,
    mut vertices: Vec<Line>,
    max_dim: usize,
) -> BoundedComplex {
    vertices.sort();
    vertices.dedup();
    let ambient = spec.ambient();
    let cap = spec
        .dim_cap()
        .map(|c| c.saturating_sub(base.len()))
        .unwrap_or(0);
    let cap = cap.min(max_dim);
    let mut dims: Vec<Vec<Simplex>> = Vec::new();
    if vertices.is_empty() || spec.dim_cap().is_none() {
        return BoundedComplex {
            spec,
            base,
            vertices,
            dims,
            max_dim,
        };
    }
    dims.push((0..vertices.len() as u32).map(|i| vec![i]).collect());
    for d in 1..=cap {
        let prev = &dims[d - 1];
        let mut next: Vec<Simplex> = Vec::new();
        for simplex in prev {
            let last = *simplex.last().expect("nonempty") as usize;
            let mut lines = Vec::with_capacity(simplex.len() + 1);
            for &i in simplex {
                lines.push(vertices[i as usize].clone());
            }
            for cand in last + 1..vertices.len() {
                lines.push(vertices[cand].clone());
                if simplex_predicate(spec.variant, ambient, &base, &lines) {
                    let mut s = simplex.clone();
                    s.push(cand as u32);
                    next.push(s);
                }
                lines.pop();
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        dims.push(next);
    }
    BoundedComplex {
        spec,
        base,
        vertices,
        dims,
        max_dim,
    }
}

/// The link of `s` in `X`: the full subcomplex on the vertices `t` with
/// `s ∪ {t} ∈ X`, carrying `s`'s lines in its `base`.
pub fn link(x: &BoundedComplex, s: &LineSetSimplex) -> Result<BoundedComplex, ComplexError> {
    if !s.is_empty() && !x.contains_lines(s.lines()) {
        return Err(ComplexError::SimplexNotInComplex);
    }
    let mut base = x.base.to_vec();
    base.extend_from_slice(s.lines());
    let link_vertices: Vec<Line> = x
        .vertices
        .iter()
        .filter(|t| !s.lines().contains(t))
        .filter(|t| {
            simplex_predicate(
                x.spec.variant,
                x.spec.ambient(),
                &base,
                std::slice::from_ref(*t),
            )
        })
        .cloned()
        .collect();
    let max_dim = x.max_dim.saturating_sub(s.len());
    Ok(build_full_subcomplex(x.spec, base, link_vertices, max_dim))
}

/// The restricted link of a *standard* simplex `s` in a `BA` complex: the
/// full subcomplex of the link spanned by vertices outside
/// `Span_Z(e_1, ..., e_m, v_1, ..., v_p)`.
pub fn plink(x: &BoundedComplex, s: &LineSetSimplex) -> Result<BoundedComplex, ComplexError> {
    if x.spec.variant != Variant::BA {
        return Err(ComplexError::InvalidSpec(
            "restricted links are defined for the BA variant".into(),
        ));
    }
    if !s.is_empty() {
        if !x.contains_lines(s.lines()) {
            return Err(ComplexError::SimplexNotInComplex);
        }
        let mut carrier = x.base.to_vec();
        carrier.extend_from_slice(s.lines());
        let carrier_simplex = LineSetSimplex::new(carrier, x.spec.ambient())?;
        if classify(&carrier_simplex)?.kind != SimplexKind::Standard {
            return Err(ComplexError::NotStandard);
        }
    }
    let full_link = link(x, s)?;
    let mut span_vectors = x.spec.ambient().relative_vectors();
    span_vectors.extend(x.base.iter().chain(s.lines()).map(|l| l.rep().to_vec()));
    let filtered: Vec<Line> = full_link
        .vertices
        .iter()
        .filter(|t| !in_rational_span(&span_vectors, t.rep(), x.spec.ambient().dim()))
        .cloned()
        .collect();
    Ok(build_full_subcomplex(
        x.spec,
        full_link.base.clone(),
        filtered,
        full_link.max_dim,
    ))
}

/// Construct the restricted link of a single vertex directly from the spec,
/// enumerating up to `max_dim`. Equivalent to `plink(enumerate(spec, ..), w)`
/// but without building the ambient complex first.
pub fn plink_of_vertex(
    spec: &BoundedComplexSpec,
    w: &Line,
    max_dim: usize,
) -> Result<BoundedComplex, ComplexError> {
    spec.validate()?;
    if spec.variant != Variant::BA {
        return Err(ComplexError::InvalidSpec(
            "restricted links are defined for the BA variant".into(),
        ));
    }
    let ambient = spec.ambient();
    if !simplex_predicate(spec.variant, ambient, &[], std::slice::from_ref(w)) {
        return Err(ComplexError::SimplexNotInComplex);
    }
    let base = vec![w.clone()];
    let mut span_vectors = ambient.relative_vectors();
    span_vectors.push(w.rep().to_vec());
    let mut vertices = Vec::new();
    for v in canonical_vectors_in_ball(ambient.dim(), spec.ball) {
        let Ok(line) = Line::from_vector(v) else {
            continue;
        };
        if line == *w || ambient.in_relative_span(line.rep()) {
            continue;
        }
        if in_rational_span(&span_vectors, line.rep(), ambient.dim()) {
            continue;
        }
        if simplex_predicate(spec.variant, ambient, &base, std::slice::from_ref(&line)) {
            vertices.push(line);
        }
    }
    Ok(build_full_subcomplex(*spec, base, vertices, max_dim))
}

fn in_rational_span(span_vectors: &[Vec<BigInt>], v: &[BigInt], dim: usize) -> bool {
    if span_vectors.is_empty() {
        return v.iter().all(Zero::is_zero);
    }
    let m = IntMatrix::from_rows_with_cols(span_vectors.to_vec(), dim);
    solve_left_rational(&m, v).is_some()
}

/// A unimodular change of coordinates fixing `e_1, ..., e_m` that carries the
/// simplex to its standard model:
///
/// * standard `{⟨v_1⟩, ..., ⟨v_k⟩}` to `{⟨e_{m+1}⟩, ..., ⟨e_{m+k}⟩}`;
/// * internally additive to `{⟨e_{m+1}⟩, ..., ⟨e_{m+k-1}⟩, ⟨e_{m+1}+e_{m+2}⟩}`;
/// * externally additive with core relation `v_0 = v_1 ± e_i` to
///   `{⟨e_{m+1}⟩, ..., ⟨e_{m+k-1}⟩, ⟨e_{m+1}+e_i⟩}` (an automorphism fixing
///   the relative basis pointwise cannot trade the core's `e_i` away).
pub fn link_iso(s: &LineSetSimplex) -> Result<IntMatrix, ComplexError> {
    let class = classify(s).map_err(|e| ComplexError::NotASimplex(e.to_string()))?;
    let ambient = s.ambient();
    let dim = ambient.dim();
    let ordered: Vec<Vec<BigInt>> = match class.kind {
        SimplexKind::Standard => s.lines().iter().map(|l| l.rep().to_vec()).collect(),
        SimplexKind::InternallyAdditive => {
            let core = class.core.as_ref().expect("internal core");
            let (_, v1, v2) = internal_core_decomposition(core)
                .ok_or_else(|| ComplexError::NotASimplex("core without sum relation".into()))?;
            let mut ordered = vec![v1, v2];
            ordered.extend(
                s.lines()
                    .iter()
                    .filter(|l| !core.contains(l))
                    .map(|l| l.rep().to_vec()),
            );
            ordered
        }
        SimplexKind::ExternallyAdditive => {
            let core = class.core.as_ref().expect("external core");
            let (_, v1, _) = external_core_decomposition(core, ambient)
                .ok_or_else(|| ComplexError::NotASimplex("core without e_i relation".into()))?;
            let mut ordered = vec![v1];
            ordered.extend(
                s.lines()
                    .iter()
                    .filter(|l| !core.contains(l))
                    .map(|l| l.rep().to_vec()),
            );
            ordered
        }
    };
    let mut vectors = ambient.relative_vectors();
    vectors.extend(ordered);
    let completed = exactlin::unimodular_complete(&vectors, dim)
        .map_err(|e| ComplexError::NotASimplex(e.to_string()))?;
    Ok(completed
        .inverse_unimodular()
        .expect("completion is unimodular"))
}

/// Split an internally additive core into `(v0, v1, v2)` representatives with
/// `v0 = v1 + v2`, `v1` lexicographically smallest among the valid choices.
pub(crate) fn internal_core_decomposition(
    core: &[Line],
) -> Option<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> {
    for a in 0..core.len() {
        let mut found: Option<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> = None;
        for b in 0..core.len() {
            if b == a {
                continue;
            }
            for c in 0..core.len() {
                if c == a || c <= b {
                    continue;
                }
                for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                    let v1: Vec<BigInt> = core[b].rep().iter().map(|x| x * s1).collect();
                    let v2: Vec<BigInt> = core[c].rep().iter().map(|x| x * s2).collect();
                    let sum: Vec<BigInt> = v1.iter().zip(&v2).map(|(x, y)| x + y).collect();
                    if sign_canonical(sum.clone()) == core[a].rep() {
                        let (v1, v2) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
                        let cand = (sum, v1, v2);
                        if found.as_ref().is_none_or(|f| cand.1 < f.1) {
                            found = Some(cand);
                        }
                    }
                }
            }
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Split an externally additive core into the additive line, the rep `v1`
/// and the index `i` with `v0 = v1 + e_i` (signs normalized so the relative
/// vector appears positively).
pub(crate) fn external_core_decomposition(
    core: &[Line],
    ambient: Ambient,
) -> Option<(Line, Vec<BigInt>, usize)> {
    for a in 0..core.len() {
        for b in 0..core.len() {
            if b == a {
                continue;
            }
            for s1 in [1i64, -1] {
                let v1: Vec<BigInt> = core[b].rep().iter().map(|x| x * s1).collect();
                let diff: Vec<BigInt> = core[a].rep().iter().zip(&v1).map(|(x, y)| x - y).collect();
                for i in 0..ambient.m {
                    let ei = ambient.basis_vector(i);
                    if diff == ei {
                        return Some((core[a].clone(), v1, i));
                    }
                    let neg: Vec<BigInt> = ei.iter().map(|x| -x.clone()).collect();
                    if diff == neg {
                        // flip the whole relation so e_i appears positively
                        let v1_f: Vec<BigInt> = v1.iter().map(|x| -x.clone()).collect();
                        return Some((core[a].clone(), v1_f, i));
                    }
                }
            }
        }
    }
    None
}

/// A direct summand of `Z^dim`, stored as the Hermite basis of its
/// saturation; the canonical form makes equality and ordering exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    basis: IntMatrix,
}

impl std::fmt::Debug for Summand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Summand(rank {} in Z^{})", self.rank(), self.ambient_dim())
    }
}

impl PartialOrd for Summand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Summand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |s: &Summand| {
            (
                s.rank(),
                s.basis.row_vecs(),
            )
        };
        key(self).cmp(&key(other))
    }
}

impl Summand {
    pub fn from_vectors(vectors: &[Vec<BigInt>], dim: usize) -> Summand {
        let m = IntMatrix::from_rows_with_cols(vectors.to_vec(), dim);
        Summand {
            basis: exactlin::saturate(&m),
        }
    }

    pub fn zero(dim: usize) -> Summand {
        Summand {
            basis: IntMatrix::from_rows_with_cols(Vec::new(), dim),
        }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_proper(&self) -> bool {
        self.rank() < self.ambient_dim()
    }

    /// Height in the poset of proper nonzero summands.
    pub fn height(&self) -> usize {
        self.rank().saturating_sub(1)
    }

    /// Exact membership; saturated spans make the rational test sufficient.
    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero);
        }
        solve_left_rational(&self.basis, v).is_some()
    }

    pub fn contains(&self, other: &Summand) -> bool {
        (0..other.basis.rows()).all(|i| self.contains_vector(other.basis.row(i)))
    }
}

impl Serialize for Summand {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .basis
            .row_vecs()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_string()).collect())
            .collect();
        (&rows, self.ambient_dim()).serialize(serializer)
    }
}

/// The saturated span of a simplex of `BA'_n` as an element of the poset of
/// proper nonzero summands. Errors with [`ComplexError::FullSpan`] when the
/// span is everything.
pub fn span_map(s: &LineSetSimplex) -> Result<Summand, ComplexError> {
    if s.is_empty() {
        return Err(ComplexError::NotASimplex("empty simplex has no span".into()));
    }
    let dim = s.ambient().dim();
    let reps: Vec<Vec<BigInt>> = s.lines().iter().map(|l| l.rep().to_vec()).collect();
    let summand = Summand::from_vectors(&reps, dim);
    if summand.rank() == dim {
        return Err(ComplexError::FullSpan);
    }
    Ok(summand)
}

/// The poset of proper nonzero summands generated by the simplices of a
/// bounded `BA'` complex.
#[derive(Clone, Debug)]
pub struct TitsPosetTruncation {
    pub ambient_dim: usize,
    pub elements: Vec<Summand>,
}

pub fn tits_truncation(x: &BoundedComplex) -> Result<TitsPosetTruncation, ComplexError> {
    if x.spec.variant != Variant::BAprime {
        return Err(ComplexError::InvalidSpec(
            "the span poset is generated from a BAprime complex".into(),
        ));
    }
    let mut elements = Vec::new();
    for d in 0..x.dims.len() {
        for s in x.simplices(d) {
            let ls = x.lineset_of(s);
            elements.push(span_map(&ls)?);
        }
    }
    elements.sort();
    elements.dedup();
    Ok(TitsPosetTruncation {
        ambient_dim: x.spec.ambient().dim(),
        elements,
    })
}

impl TitsPosetTruncation {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[b].contains(&self.elements[a])
    }
}

/// The subposet of simplices of `x` whose span is contained in `v`, ordered
/// by inclusion of simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoset {
    pub simplices: Vec<LineSetSimplex>,
}

impl FiberPoset {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.simplices[a]
            .lines()
            .iter()
            .all(|l| self.simplices[b].contains(l))
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

pub fn fiber(v: &Summand, x: &BoundedComplex) -> FiberPoset {
    let mut simplices = Vec::new();
    for d in 0..x.dims.len() {
        for s in x.simplices(d) {
            let lines = x.lines_of(s);
            if lines.iter().all(|l| v.contains_vector(l.rep())) {
                simplices.push(x.lineset_of(s));
            }
        }
    }
    FiberPoset { simplices }
}

/// The realization of the poset of simplices of `X`: the barycentric
/// subdivision. Vertices are the simplices of `X` (labelled by `(dim, index)`
/// into `X`'s lists, with height equal to the simplex dimension) and
/// `d`-simplices are chains of `d+1` nested simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetRealization {
    pub vertex_labels: Vec<(usize, usize)>,
    pub heights: Vec<usize>,
    pub dims: Vec<Vec<Simplex>>,
}

pub fn poset_realization(x: &BoundedComplex) -> PosetRealization {
    let mut vertex_labels = Vec::new();
    let mut heights = Vec::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    for d in 0..x.dims.len() {
        for (i, s) in x.simplices(d).iter().enumerate() {
            vertex_labels.push((d, i));
            heights.push(d);
            members.push(s.clone());
        }
    }
    let nv = vertex_labels.len();
    // strict face relation, computed once
    let mut above: Vec<Vec<u32>> = vec![Vec::new(); nv];
    for a in 0..nv {
        for b in 0..nv {
            if heights[a] < heights[b] && members[a].iter().all(|v| members[b].contains(v)) {
                above[a].push(b as u32);
            }
        }
    }
    let mut dims: Vec<Vec<Simplex>> = Vec::new();
    if nv == 0 {
        return PosetRealization {
            vertex_labels,
            heights,
            dims,
        };
    }
    dims.push((0..nv as u32).map(|i| vec![i]).collect());
    loop {
        let prev = &dims[dims.len() - 1];
        let mut next = Vec::new();
        for chain in prev {
            let top = *chain.last().expect("nonempty") as usize;
            for &b in &above[top] {
                let mut c = chain.clone();
                c.push(b);
                next.push(c);
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        dims.push(next);
    }
    PosetRealization {
        vertex_labels,
        heights,
        dims,
    }
}

/// Serialized form of a bounded complex.
#[derive(Serialize, Deserialize)]
pub struct ComplexJson {
    pub spec: BoundedComplexSpec,
    pub hash: String,
    pub max_dim: usize,
    pub base: Vec<Line>,
    pub vertices: Vec<Line>,
    pub simplices: Vec<Vec<Simplex>>,
}

impl From<&BoundedComplex> for ComplexJson {
    fn from(x: &BoundedComplex) -> Self {
        ComplexJson {
            spec: x.spec,
            hash: x.spec.content_hash(),
            max_dim: x.max_dim,
            base: x.base.clone(),
            vertices: x.vertices.clone(),
            simplices: x.dims.clone(),
        }
    }
}

impl TryFrom<ComplexJson> for BoundedComplex {
    type Error = ComplexError;

    fn try_from(j: ComplexJson) -> Result<Self, Self::Error> {
        j.spec.validate()?;
        Ok(BoundedComplex {
            spec: j.spec,
            base: j.base,
            vertices: j.vertices,
            dims: j.simplices,
            max_dim: j.max_dim,
        })
    }
}

impl Serialize for BoundedComplex {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoundedComplex {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = ComplexJson::deserialize(deserializer)?;
        BoundedComplex::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};

    fn line(v: &[i64]) -> Line {
        Line::from_i64(v).unwrap()
    }

    fn lineset(vs: &[&[i64]], n: usize, m: usize) -> LineSetSimplex {
        LineSetSimplex::new(vs.iter().map(|v| line(v)).collect(), Ambient::new(n, m)).unwrap()
    }

    #[test]
    fn farey_fragment_ball_one() {
        let spec = BoundedComplexSpec::new(Variant::B, 2, 0, 1);
        let x = enumerate(&spec, 1).unwrap();
        let expected = vec![line(&[1, -1]), line(&[1, 0]), line(&[0, 1]), line(&[1, 1])];
        assert_eq!(x.vertices(), &expected[..]);
        // edges exactly where ad - bc = ±1
        for e in x.simplices(1) {
            let a = &x.vertices()[e[0] as usize];
            let b = &x.vertices()[e[1] as usize];
            let det = a.rep()[0].clone() * &b.rep()[1] - a.rep()[1].clone() * &b.rep()[0];
            assert!(det.abs().is_one());
        }
        assert_eq!(x.simplices(1).len(), 5);
    }

    #[test]
    fn ba_one_one_ball_two_is_path() {
        let spec = BoundedComplexSpec::new(Variant::BA, 1, 1, 2);
        let x = enumerate(&spec, 2).unwrap();
        // vertices v_a = a e_1 + e_2 for a in -2..=2
        assert_eq!(x.vertices().len(), 5);
        // path graph: 4 edges, no triangles
        assert_eq!(x.simplices(1).len(), 4);
        assert!(x.simplices(2).is_empty());
        for e in x.simplices(1) {
            assert_eq!(
                classify(&x.lineset_of(e)).unwrap().kind,
                SimplexKind::ExternallyAdditive
            );
        }
    }

    #[test]
    fn ba_prime_ball_one_has_no_edges() {
        let spec = BoundedComplexSpec::new(Variant::BAprime, 2, 0, 1);
        let x = enumerate(&spec, 2).unwrap();
        assert_eq!(x.vertices().len(), 4);
        assert!(x.simplices(1).is_empty());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(enumerate(&BoundedComplexSpec::new(Variant::BA, 0, 2, 1), 1).is_err());
        assert!(enumerate(&BoundedComplexSpec::new(Variant::BA, 1, 0, 1), 1).is_err());
        assert!(enumerate(&BoundedComplexSpec::new(Variant::B, 2, 0, 0), 1).is_err());
        assert!(enumerate(&BoundedComplexSpec::new(Variant::BAprime, 2, 1, 1), 1).is_err());
    }

    #[test]
    fn b_one_ball_one_single_vertex() {
        let spec = BoundedComplexSpec::new(Variant::B, 1, 0, 1);
        let x = enumerate(&spec, 1).unwrap();
        assert_eq!(x.vertices(), &[line(&[1])]);
        assert!(x.simplices(1).is_empty());
    }

    #[test]
    fn link_of_maximal_simplex_is_empty() {
        let spec = BoundedComplexSpec::new(Variant::B, 2, 0, 1);
        let x = enumerate(&spec, 1).unwrap();
        let s = lineset(&[&[1, 0], &[0, 1]], 2, 0);
        let l = link(&x, &s).unwrap();
        assert!(l.vertices().is_empty());
    }

    #[test]
    fn link_of_empty_simplex_is_x() {
        let spec = BoundedComplexSpec::new(Variant::B, 2, 0, 1);
        let x = enumerate(&spec, 1).unwrap();
        let l = link(&x, &LineSetSimplex::empty(Ambient::new(2, 0))).unwrap();
        assert_eq!(l.vertices(), x.vertices());
        assert_eq!(l.dims(), x.dims());
    }

    #[test]
    fn link_vertices_in_bounded_ba2() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 1);
        let x = enumerate(&spec, 2).unwrap();
        let s = lineset(&[&[1, 0]], 2, 0);
        let l = link(&x, &s).unwrap();
        for v in [&[0i64, 1][..], &[1, 1], &[1, -1]] {
            assert!(l.vertices().contains(&line(v)), "missing {v:?}");
        }
        // predicate recheck oracle
        for t in l.vertices() {
            assert!(x.contains_lines(&[line(&[1, 0]), t.clone()]));
        }
    }

    #[test]
    fn link_rejects_foreign_simplex() {
        let spec = BoundedComplexSpec::new(Variant::B, 2, 0, 1);
        let x = enumerate(&spec, 1).unwrap();
        let s = lineset(&[&[5, 1]], 2, 0);
        assert_eq!(link(&x, &s), Err(ComplexError::SimplexNotInComplex));
    }

    #[test]
    fn plink_excludes_span_lines() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 2);
        let x = enumerate(&spec, 2).unwrap();
        let s = lineset(&[&[1, 0]], 2, 0);
        let full = link(&x, &s).unwrap();
        let restricted = plink(&x, &s).unwrap();
        // the only vertex of the link in Span(e_1) would be ⟨e_1⟩ itself,
        // which the link already excludes; the plink drops nothing else here
        // except span lines
        for v in full.vertices() {
            let in_span = v.rep()[1].is_zero();
            assert_eq!(restricted.vertices().contains(v), !in_span);
        }
    }

    #[test]
    fn plink_rejects_additive_simplex() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 1);
        let x = enumerate(&spec, 2).unwrap();
        let s = lineset(&[&[0, 1], &[1, 0], &[1, 1]], 2, 0);
        assert_eq!(plink(&x, &s), Err(ComplexError::NotStandard));
    }

    #[test]
    fn plink_equals_link_for_empty_simplex_m0() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 1);
        let x = enumerate(&spec, 2).unwrap();
        let empty = LineSetSimplex::empty(Ambient::new(2, 0));
        let l = link(&x, &empty).unwrap();
        let p = plink(&x, &empty).unwrap();
        assert_eq!(l, p);
    }

    #[test]
    fn ba_with_relative_excludes_relative_sum_vertex() {
        // the vertex ⟨e_1 + e_2⟩ is excluded from BA_n^2
        let spec = BoundedComplexSpec::new(Variant::BA, 1, 2, 1);
        let x = enumerate(&spec, 1).unwrap();
        assert!(!x.vertices().contains(&line(&[1, 1, 0])));
    }

    #[test]
    fn link_iso_standard_identity_like() {
        let s = lineset(&[&[1, 0]], 2, 0);
        let g = link_iso(&s).unwrap();
        assert!(g.is_unimodular());
        let img = line(&[1, 0]).apply(&g).unwrap();
        assert_eq!(img, line(&[1, 0]));
    }

    #[test]
    fn link_iso_sends_line_to_first_basis_vector() {
        let s = lineset(&[&[1, 1]], 2, 0);
        let g = link_iso(&s).unwrap();
        assert!(g.is_unimodular());
        assert_eq!(line(&[1, 1]).apply(&g).unwrap(), line(&[1, 0]));
    }

    #[test]
    fn link_iso_additive_model_fixed() {
        let s = lineset(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]], 3, 0);
        let g = link_iso(&s).unwrap();
        assert!(g.is_unimodular());
        let images: Vec<Line> = s.lines().iter().map(|l| l.apply(&g).unwrap()).collect();
        let mut expected = vec![line(&[1, 0, 0]), line(&[0, 1, 0]), line(&[1, 1, 0])];
        expected.sort();
        let mut got = images;
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn span_map_examples() {
        let s = lineset(&[&[1, 0, 0]], 3, 0);
        let v = span_map(&s).unwrap();
        assert_eq!(v.rank(), 1);
        assert!(v.contains_vector(&[BigInt::from(1), BigInt::from(0), BigInt::from(0)]));

        let s = lineset(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]], 3, 0);
        let v = span_map(&s).unwrap();
        assert_eq!(v.rank(), 2);

        let s = lineset(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 3, 0);
        assert_eq!(span_map(&s), Err(ComplexError::FullSpan));
    }

    #[test]
    fn fiber_examples() {
        let spec = BoundedComplexSpec::new(Variant::BAprime, 3, 0, 1);
        let x = enumerate(&spec, 2).unwrap();

        let e1_span = Summand::from_vectors(&[vec![1.into(), 0.into(), 0.into()]], 3);
        let f = fiber(&e1_span, &x);
        assert_eq!(f.len(), 1);
        assert_eq!(f.simplices[0].lines(), &[line(&[1, 0, 0])]);

        let zero = Summand::zero(3);
        assert!(fiber(&zero, &x).is_empty());
    }

    #[test]
    fn fiber_rank_two_matches_bounded_ba2() {
        // fiber over Span(e_1, e_2) in Z^3 is the bounded BA_2 in those
        // coordinates: compare simplex sets through the coordinate embedding
        let spec3 = BoundedComplexSpec::new(Variant::BAprime, 3, 0, 1);
        let x3 = enumerate(&spec3, 2).unwrap();
        let v = Summand::from_vectors(
            &[
                vec![1.into(), 0.into(), 0.into()],
                vec![0.into(), 1.into(), 0.into()],
            ],
            3,
        );
        let f = fiber(&v, &x3);

        let spec2 = BoundedComplexSpec::new(Variant::BA, 2, 0, 1);
        let x2 = enumerate(&spec2, 2).unwrap();
        let embed = |l: &Line| {
            let mut v = l.rep().to_vec();
            v.push(BigInt::zero());
            Line::from_vector(v).unwrap()
        };
        let mut expected: Vec<Vec<Line>> = Vec::new();
        for d in 0..x2.dims().len() {
            for s in x2.simplices(d) {
                expected.push(x2.lines_of(s).iter().map(embed).collect());
            }
        }
        let mut got: Vec<Vec<Line>> = f.simplices.iter().map(|s| s.lines().to_vec()).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn poset_realization_counts() {
        // a single edge subdivides into a path with 3 vertices and 2 edges
        let spec = BoundedComplexSpec::new(Variant::B, 1, 1, 1);
        let x = enumerate(&spec, 1).unwrap();
        // B_1^1 ball 1: vertices a e_1 + e_2 with a in {-1, 0, 1}; all pairs
        // are edges (any two distinct such lines complete a basis with e_1)
        assert_eq!(x.vertices().len(), 3);

        // build a 1-edge complex by hand instead: take the Farey fragment
        let spec = BoundedComplexSpec::new(Variant::B, 2, 0, 1);
        let x = enumerate(&spec, 1).unwrap();
        let r = poset_realization(&x);
        assert_eq!(r.vertex_labels.len(), x.simplex_count());
        // chains of length 2: one per (vertex, incident edge) pair
        let incidences: usize = x.simplices(1).len() * 2;
        assert_eq!(r.dims[1].len(), incidences);
        for (v, &(d, _)) in r.vertex_labels.iter().enumerate() {
            assert_eq!(r.heights[v], d);
        }
    }

    #[test]
    fn dimension_bound_property() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 2);
        let x = enumerate(&spec, 5).unwrap();
        assert!(x.top_dim().unwrap() <= 2);
        let spec = BoundedComplexSpec::new(Variant::B, 2, 0, 2);
        let x = enumerate(&spec, 5).unwrap();
        assert!(x.top_dim().unwrap() <= 1);
    }

    #[test]
    fn complex_json_round_trip_and_revalidate() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 2);
        let x = enumerate(&spec, 2).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        let back: BoundedComplex = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(back.revalidate());
    }
}
