//! Level-based retractions of restricted links.
//!
//! Given an integer functional `F` and a carrier vector `w` with
//! `F(w) = N > 0`, the vertex map sends `⟨v⟩` (with `v` chosen `F`-nonnegative)
//! to `⟨v - ⌊F(v)/N⌋·w⟩`, landing in the sublevel complex where `|F| < N`.
//! On the restricted link of `⟨w⟩` the map fails to be simplicial exactly on
//! the *carrying* internally additive simplices, where the floor of a sum
//! exceeds the sum of floors; those triangles are subdivided through a fresh
//! center vertex before mapping.

use crate::complexes::{build_full_subcomplex, BoundedComplex, Simplex};
use crate::lattice::{classify, Line, LineSetSimplex, SimplexKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RetractionError {
    #[error("invalid level functional: {0}")]
    InvalidFunctional(String),
    #[error("simplex is not internally additive")]
    NotInternallyAdditive,
    #[error("carrier line is not part of the complex context")]
    CarrierMissing,
    #[error("not a simplex: {0}")]
    NotASimplex(String),
}

/// An integer covector `F` on `Z^{m+n}` together with the carrier vector `w`
/// satisfying `F(w) = N > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFunctional {
    f: Vec<BigInt>,
    w: Vec<BigInt>,
    threshold: BigInt,
}

impl LevelFunctional {
    pub fn new(f: Vec<BigInt>, w: Vec<BigInt>) -> Result<Self, RetractionError> {
        if f.len() != w.len() {
            return Err(RetractionError::InvalidFunctional(
                "functional and carrier have different dimensions".into(),
            ));
        }
        let w_line = Line::from_vector(w.clone()).map_err(|_| {
            RetractionError::InvalidFunctional("carrier vector must be primitive".into())
        })?;
        let _ = w_line;
        let threshold: BigInt = f.iter().zip(&w).map(|(a, b)| a * b).sum();
        if !threshold.is_positive() {
            return Err(RetractionError::InvalidFunctional(
                "carrier must have positive level".into(),
            ));
        }
        Ok(LevelFunctional { f, w, threshold })
    }

    /// The functional `N·(last coordinate)` with carrier `e_dim`; satisfies
    /// `F(e_i) = 0` for every other coordinate, as the restricted-link
    /// retraction requires.
    pub fn scaled_last_coordinate(dim: usize, scale: u64) -> Self {
        assert!(dim >= 1 && scale >= 1);
        let mut f = vec![BigInt::zero(); dim];
        f[dim - 1] = BigInt::from(scale);
        let mut w = vec![BigInt::zero(); dim];
        w[dim - 1] = BigInt::from(1);
        LevelFunctional::new(f, w).expect("valid by construction")
    }

    pub fn functional(&self) -> &[BigInt] {
        &self.f
    }

    pub fn carrier(&self) -> &[BigInt] {
        &self.w
    }

    pub fn carrier_line(&self) -> Line {
        Line::from_vector(self.w.clone()).expect("carrier is primitive")
    }

    pub fn threshold(&self) -> &BigInt {
        &self.threshold
    }

    pub fn eval(&self, v: &[BigInt]) -> BigInt {
        self.f.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `r(⟨v⟩) = |F(v)|`, well-defined on lines.
    pub fn level(&self, l: &Line) -> BigInt {
        self.eval(l.rep()).abs()
    }

    /// Whether `F(e_i) = 0` for `1 <= i <= m`.
    pub fn vanishes_on_relative(&self, m: usize) -> bool {
        self.f[..m].iter().all(Zero::is_zero)
    }
}

/// `R(phi)`-style complexity: the maximum level over a vertex set.
pub fn max_level<'a>(lines: impl IntoIterator<Item = &'a Line>, ctx: &LevelFunctional) -> BigInt {
    lines
        .into_iter()
        .map(|l| ctx.level(l))
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// The representative of `l` with `F(v) >= 0`; the canonical representative
/// when `F` vanishes on the line.
pub fn f_nonneg_rep(l: &Line, ctx: &LevelFunctional) -> Vec<BigInt> {
    if ctx.eval(l.rep()).is_negative() {
        l.neg_rep()
    } else {
        l.rep().to_vec()
    }
}

/// The vertex map `⟨v⟩ ↦ ⟨v - ⌊F(v)/N⌋·w⟩` for `F`-nonnegative `v`.
/// Fixes every line with `|F| < N`. Undefined on the carrier line itself
/// (which never lies in the complexes being retracted).
pub fn pihat(l: &Line, ctx: &LevelFunctional) -> Line {
    let v = f_nonneg_rep(l, ctx);
    let q = ctx.eval(&v).div_floor(ctx.threshold());
    if q.is_zero() {
        return l.clone();
    }
    let shifted: Vec<BigInt> = v
        .iter()
        .zip(ctx.carrier())
        .map(|(x, w)| x - &q * w)
        .collect();
    Line::from_vector_scaled(shifted).expect("pihat is undefined on the carrier line")
}

/// The carrying defect `⌊(a+b)/N⌋ - ⌊a/N⌋ - ⌊b/N⌋ ∈ {0, 1}` for `a, b >= 0`.
pub fn omega(n: &BigInt, a: &BigInt, b: &BigInt) -> u8 {
    debug_assert!(n.is_positive() && !a.is_negative() && !b.is_negative());
    let d = (a + b).div_floor(n) - a.div_floor(n) - b.div_floor(n);
    if d.is_zero() {
        0
    } else {
        debug_assert!(d == BigInt::from(1));
        1
    }
}

/// `omega` on machine integers, for exhaustive sweeps.
pub fn omega_u64(n: u64, a: u64, b: u64) -> u64 {
    (a + b) / n - a / n - b / n
}

/// The `F`-anchored decomposition of an internally additive core: the triple
/// of `F`-nonnegative representatives `(v0, v1, v2)` with `v0 = v1 + v2` and
/// `v1` lexicographically smallest among valid choices.
fn anchored_core(
    core: &[Line],
    ctx: &LevelFunctional,
) -> Option<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> {
    let choices: Vec<Vec<Vec<BigInt>>> = core
        .iter()
        .map(|l| {
            let fv = ctx.eval(l.rep());
            if fv.is_positive() {
                vec![l.rep().to_vec()]
            } else if fv.is_negative() {
                vec![l.neg_rep()]
            } else {
                vec![l.rep().to_vec(), l.neg_rep()]
            }
        })
        .collect();
    let mut best: Option<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> = None;
    for a in &choices[0] {
        for b in &choices[1] {
            for c in &choices[2] {
                for (i, j, k) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
                    let picks = [a, b, c];
                    let (v0, x, y) = (picks[i], picks[j], picks[k]);
                    let sum: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                    if &sum == v0 {
                        let (v1, v2) = if x <= y {
                            (x.clone(), y.clone())
                        } else {
                            (y.clone(), x.clone())
                        };
                        let cand = (v0.clone(), v1, v2);
                        if best.as_ref().is_none_or(|f| cand.1 < f.1) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
    }
    best
}

/// Whether an internally additive simplex is *carrying*:
/// `⌊F(v0)/N⌋ ≠ ⌊F(v1)/N⌋ + ⌊F(v2)/N⌋` for the core normalized to
/// `v0 = v1 + v2` with all representatives `F`-nonnegative.
pub fn is_carrying(s: &LineSetSimplex, ctx: &LevelFunctional) -> Result<bool, RetractionError> {
    let class = classify(s).map_err(|e| RetractionError::NotASimplex(e.to_string()))?;
    if class.kind != SimplexKind::InternallyAdditive {
        return Err(RetractionError::NotInternallyAdditive);
    }
    let core = class.core.expect("internal core");
    let (_, v1, v2) =
        anchored_core(&core, ctx).expect("internally additive cores admit a sum arrangement");
    Ok(omega(ctx.threshold(), &ctx.eval(&v1), &ctx.eval(&v2)) == 1)
}

/// A vertex of the subdivided complex: an original vertex or the center of a
/// carrying triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum YVertex {
    Old(u32),
    Tau(u32),
}

/// The subdivision of a complex along its carrying triangles: each carrying
/// 2-simplex receives a center vertex, and every simplex containing such a
/// triangle is replaced by its three images through the center.
#[derive(Clone, Debug)]
pub struct SubdividedComplex {
    base: BoundedComplex,
    ctx: LevelFunctional,
    carrying_cells: Vec<Simplex>,
    dims: Vec<Vec<Vec<YVertex>>>,
}

impl SubdividedComplex {
    pub fn base(&self) -> &BoundedComplex {
        &self.base
    }

    pub fn carrying_cells(&self) -> &[Simplex] {
        &self.carrying_cells
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertices().len() + self.carrying_cells.len()
    }

    pub fn simplices(&self, d: usize) -> &[Vec<YVertex>] {
        self.dims.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn dims(&self) -> &[Vec<Vec<YVertex>>] {
        &self.dims
    }

    pub fn ctx(&self) -> &LevelFunctional {
        &self.ctx
    }
}

/// Subdivide `x` along its carrying triangles relative to `ctx`.
///
/// `x` is expected to be (a bounded part of) the restricted link of the
/// carrier line; the sublevel subcomplex is untouched by the subdivision.
pub fn subdivide(x: &BoundedComplex, ctx: &LevelFunctional) -> SubdividedComplex {
    let mut carrying_cells: Vec<Simplex> = Vec::new();
    for s in x.simplices(2) {
        let ls = x.lineset_of(s);
        if let Ok(SimplexKind::InternallyAdditive) = classify(&ls).map(|c| c.kind) {
            if is_carrying(&ls, ctx).unwrap_or(false) {
                carrying_cells.push(s.clone());
            }
        }
    }
    let contains_cell = |simplex: &Simplex, cell: &Simplex| cell.iter().all(|v| simplex.contains(v));
    let mut dims: Vec<Vec<Vec<YVertex>>> = vec![Vec::new(); x.dims().len()];
    for d in 0..x.dims().len() {
        for s in x.simplices(d) {
            if !carrying_cells.iter().any(|c| contains_cell(s, c)) {
                dims[d].push(s.iter().map(|&v| YVertex::Old(v)).collect());
            }
        }
    }
    // simplices through each center: {tau_c} ∪ U for U in X with c ⊄ U and
    // U ∪ c in X (U may share part of the triangle, or be empty)
    for (ci, cell) in carrying_cells.iter().enumerate() {
        let tau = YVertex::Tau(ci as u32);
        dims[0].push(vec![tau]);
        for d in 0..x.dims().len() {
            for u in x.simplices(d) {
                if contains_cell(u, cell) {
                    continue;
                }
                let mut union = u.clone();
                for &v in cell {
                    if !union.contains(&v) {
                        union.push(v);
                    }
                }
                union.sort_unstable();
                if !x.contains_index_simplex(&union) {
                    continue;
                }
                let mut ys: Vec<YVertex> = u.iter().map(|&v| YVertex::Old(v)).collect();
                ys.push(tau);
                ys.sort();
                if d + 1 >= dims.len() {
                    dims.resize(d + 2, Vec::new());
                }
                dims[d + 1].push(ys);
            }
        }
    }
    for list in &mut dims {
        list.sort();
        list.dedup();
    }
    while dims.last().is_some_and(Vec::is_empty) {
        dims.pop();
    }
    SubdividedComplex {
        base: x.clone(),
        ctx: ctx.clone(),
        carrying_cells,
        dims,
    }
}

/// How a simplex of the restricted link of `⟨w⟩` sits relative to the carrier:
/// the five cases of the retraction analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CarrierClass {
    WStandard,
    ExternallyAdditive,
    WAdditive,
    InternalNonCarrying,
    Carrying,
}

/// Classify a simplex of the restricted link relative to the carrier line.
pub fn carrier_class(
    s: &LineSetSimplex,
    ctx: &LevelFunctional,
) -> Result<CarrierClass, RetractionError> {
    let w_line = ctx.carrier_line();
    let joined = s
        .with(w_line.clone())
        .map_err(|e| RetractionError::NotASimplex(e.to_string()))?;
    let class = classify(&joined).map_err(|e| RetractionError::NotASimplex(e.to_string()))?;
    Ok(match class.kind {
        SimplexKind::Standard => CarrierClass::WStandard,
        SimplexKind::ExternallyAdditive => CarrierClass::ExternallyAdditive,
        SimplexKind::InternallyAdditive => {
            let core = class.core.expect("internal core");
            if core.contains(&w_line) {
                CarrierClass::WAdditive
            } else if is_carrying(s, ctx)? {
                CarrierClass::Carrying
            } else {
                CarrierClass::InternalNonCarrying
            }
        }
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClassCounts {
    pub w_standard: usize,
    pub externally_additive: usize,
    pub w_additive: usize,
    pub internal_non_carrying: usize,
    pub carrying: usize,
}

impl ClassCounts {
    fn bump(&mut self, class: CarrierClass) {
        match class {
            CarrierClass::WStandard => self.w_standard += 1,
            CarrierClass::ExternallyAdditive => self.externally_additive += 1,
            CarrierClass::WAdditive => self.w_additive += 1,
            CarrierClass::InternalNonCarrying => self.internal_non_carrying += 1,
            CarrierClass::Carrying => self.carrying += 1,
        }
    }
}

/// A reported failure: a simplex whose image is not a simplex of the
/// sublevel complex. This is a defect of the construction, never an expected
/// state.
#[derive(Clone, Debug, Serialize)]
pub struct Defect {
    pub simplex: Vec<YVertex>,
    pub image: Vec<Line>,
}

/// The result of applying the vertex map across a complex: the vertex images,
/// which simplices collapsed, per-class counts, and any defects.
#[derive(Clone, Debug, Serialize)]
pub struct SimplicialMapReport {
    pub vertex_images: Vec<(YVertex, Line)>,
    pub collapsed: Vec<Vec<YVertex>>,
    pub class_counts: ClassCounts,
    pub defects: Vec<Defect>,
    /// Images that satisfy the simplex predicate but leave the bounded
    /// vertex set — a truncation artifact, counted separately.
    pub outside_ball: usize,
    pub simplices_checked: usize,
}

impl SimplicialMapReport {
    pub fn is_simplicial(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Map the subdivided complex to the sublevel complex `X^{<N}`: original
/// vertices through the vertex map, centers through
/// `⟨v_1 - ⌊F(v_1)/N⌋·w - w⟩` with `v_1` the lexicographically smaller of the
/// two core summands.
pub fn retract(y: &SubdividedComplex, ctx: &LevelFunctional) -> SimplicialMapReport {
    let x = y.base();
    let m = x.spec().ambient().m;
    assert!(
        ctx.vanishes_on_relative(m),
        "the restricted-link retraction needs F(e_i) = 0 for i <= m"
    );
    let mut tau_images = Vec::with_capacity(y.carrying_cells().len());
    for cell in y.carrying_cells() {
        let ls = x.lineset_of(cell);
        let class = classify(&ls).expect("carrying cells are simplices");
        let core = class.core.expect("carrying cells are internally additive");
        let (_, v1, _) = anchored_core(&core, ctx).expect("anchored decomposition");
        let q1 = ctx.eval(&v1).div_floor(ctx.threshold());
        let image: Vec<BigInt> = v1
            .iter()
            .zip(ctx.carrier())
            .map(|(a, w)| a - (&q1 + 1) * w)
            .collect();
        let line = Line::from_vector_scaled(image).expect("center image is nonzero");
        debug_assert!(ctx.level(&line) < *ctx.threshold());
        tau_images.push(line);
    }
    let image_of = |v: &YVertex| -> Line {
        match v {
            YVertex::Old(i) => pihat(&x.vertices()[*i as usize], ctx),
            YVertex::Tau(c) => tau_images[*c as usize].clone(),
        }
    };
    let mut report = SimplicialMapReport {
        vertex_images: Vec::new(),
        collapsed: Vec::new(),
        class_counts: ClassCounts::default(),
        defects: Vec::new(),
        outside_ball: 0,
        simplices_checked: 0,
    };
    for (i, _) in x.vertices().iter().enumerate() {
        let v = YVertex::Old(i as u32);
        report.vertex_images.push((v, image_of(&v)));
    }
    for c in 0..y.carrying_cells().len() {
        let v = YVertex::Tau(c as u32);
        report.vertex_images.push((v, image_of(&v)));
    }
    // class counts over the original complex
    for d in 0..x.dims().len() {
        for s in x.simplices(d) {
            if let Ok(class) = carrier_class(&x.lineset_of(s), ctx) {
                report.class_counts.bump(class);
            }
        }
    }
    for d in 0..y.dims().len() {
        for s in y.simplices(d) {
            report.simplices_checked += 1;
            let mut image: Vec<Line> = s.iter().map(&image_of).collect();
            image.sort();
            image.dedup();
            if image.len() < s.len() {
                report.collapsed.push(s.clone());
            }
            // sublevel membership of every image vertex
            let sublevel_ok = image.iter().all(|l| ctx.level(l) < *ctx.threshold());
            if !sublevel_ok || !x.predicate(&image) {
                report.defects.push(Defect {
                    simplex: s.clone(),
                    image,
                });
                continue;
            }
            if !image.iter().all(|l| x.vertex_index(l).is_some()) {
                report.outside_ball += 1;
            }
        }
    }
    report
}

/// Vertexwise retraction of a full link (of a simplex of a `B` complex, or of
/// an additive simplex of a `BA` complex); here no subdivision is needed and
/// the vertex map itself must be simplicial.
pub fn retract_link_simple(
    x: &BoundedComplex,
    ctx: &LevelFunctional,
) -> Result<SimplicialMapReport, RetractionError> {
    let w_line = ctx.carrier_line();
    if !x.base().contains(&w_line) {
        return Err(RetractionError::CarrierMissing);
    }
    let mut report = SimplicialMapReport {
        vertex_images: Vec::new(),
        collapsed: Vec::new(),
        class_counts: ClassCounts::default(),
        defects: Vec::new(),
        outside_ball: 0,
        simplices_checked: 0,
    };
    for (i, v) in x.vertices().iter().enumerate() {
        report
            .vertex_images
            .push((YVertex::Old(i as u32), pihat(v, ctx)));
    }
    for d in 0..x.dims().len() {
        for s in x.simplices(d) {
            report.simplices_checked += 1;
            let mut image: Vec<Line> = s
                .iter()
                .map(|&i| pihat(&x.vertices()[i as usize], ctx))
                .collect();
            image.sort();
            image.dedup();
            let ys: Vec<YVertex> = s.iter().map(|&i| YVertex::Old(i)).collect();
            if image.len() < s.len() {
                report.collapsed.push(ys.clone());
            }
            let sublevel_ok = image.iter().all(|l| ctx.level(l) < *ctx.threshold());
            if !sublevel_ok || !x.predicate(&image) {
                report.defects.push(Defect { simplex: ys, image });
                continue;
            }
            if !image.iter().all(|l| x.vertex_index(l).is_some()) {
                report.outside_ball += 1;
            }
        }
    }
    Ok(report)
}

/// The sublevel complex `X^{<N}`: the full subcomplex on vertices with
/// `|F| < N`.
pub fn sublevel_complex(x: &BoundedComplex, ctx: &LevelFunctional) -> BoundedComplex {
    let vertices: Vec<Line> = x
        .vertices()
        .iter()
        .filter(|l| ctx.level(l) < *ctx.threshold())
        .cloned()
        .collect();
    build_full_subcomplex(*x.spec(), x.base().to_vec(), vertices, x.max_dim())
}

/// The four-component measure `(max r, #maximizers, case, -dim)` attached to
/// a simplex, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MorseTuple {
    pub max_level: BigInt,
    pub max_count: usize,
    pub case: i8,
    pub neg_dim: i64,
}

/// Compute the measure of a simplex under the vertex-level function
/// `r = |F|`. The case component is `-2` for an additive simplex whose
/// maximum is realized by a unique vertex, `-1` for an internally additive
/// simplex with exactly two core vertices at the maximum, `0` for standard,
/// `1` otherwise.
pub fn pl_morse(s: &LineSetSimplex, ctx: &LevelFunctional) -> Result<MorseTuple, RetractionError> {
    let class = classify(s).map_err(|e| RetractionError::NotASimplex(e.to_string()))?;
    let levels: Vec<BigInt> = s.lines().iter().map(|l| ctx.level(l)).collect();
    let max_level = levels.iter().max().cloned().expect("nonempty simplex");
    let max_count = levels.iter().filter(|x| **x == max_level).count();
    let case = match class.kind {
        SimplexKind::Standard => 0,
        _ if max_count == 1 => -2,
        SimplexKind::InternallyAdditive => {
            let core = class.core.as_ref().expect("internal core");
            let core_max = core
                .iter()
                .filter(|l| ctx.level(l) == max_level)
                .count();
            if core_max == 2 {
                -1
            } else {
                1
            }
        }
        _ => 1,
    };
    Ok(MorseTuple {
        max_level,
        max_count,
        case,
        neg_dim: -((s.len() as i64) - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{enumerate, plink_of_vertex, BoundedComplexSpec, Variant};
    use crate::lattice::Ambient;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn line(v: &[i64]) -> Line {
        Line::from_i64(v).unwrap()
    }

    /// The running example of the carrying analysis: Z^4 with F the
    /// e_4-coefficient, w = e_3 + 10 e_4, N = 10.
    fn example_ctx() -> LevelFunctional {
        LevelFunctional::new(
            vec![bi(0), bi(0), bi(0), bi(1)],
            vec![bi(0), bi(0), bi(1), bi(10)],
        )
        .unwrap()
    }

    #[test]
    fn f_nonneg_rep_examples() {
        let ctx = LevelFunctional::new(vec![bi(0), bi(1)], vec![bi(1), bi(1)]).unwrap();
        assert_eq!(
            f_nonneg_rep(&line(&[1, -3]), &ctx),
            vec![bi(-1), bi(3)]
        );
        // F = 0: canonical representative regardless of sign choice
        assert_eq!(f_nonneg_rep(&line(&[-1, 0]), &ctx), vec![bi(1), bi(0)]);
        assert_eq!(f_nonneg_rep(&line(&[2, 5]), &ctx), vec![bi(2), bi(5)]);
    }

    #[test]
    fn pihat_worked_example() {
        let ctx = example_ctx();
        assert_eq!(*ctx.threshold(), bi(10));
        // ⟨e1+e2+18e4⟩ maps to ⟨e1+e2-e3+8e4⟩
        let v0 = line(&[1, 1, 0, 18]);
        assert_eq!(pihat(&v0, &ctx), line(&[1, 1, -1, 8]));
        // ⟨e1+9e4⟩ is fixed
        let v1 = line(&[1, 0, 0, 9]);
        assert_eq!(pihat(&v1, &ctx), v1);
        // F = 0 lines are fixed
        let v2 = line(&[0, 1, 0, 0]);
        assert_eq!(pihat(&v2, &ctx), v2);
    }

    #[test]
    fn pihat_idempotent_on_samples() {
        let ctx = example_ctx();
        for v in [
            &[1i64, 1, 0, 18][..],
            &[1, 0, 0, 9],
            &[0, 1, 0, 25],
            &[2, -1, 3, -31],
            &[1, 0, -1, 10],
        ] {
            let l = line(v);
            let once = pihat(&l, &ctx);
            assert!(ctx.level(&once) < *ctx.threshold());
            assert_eq!(pihat(&once, &ctx), once);
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&bi(10), &bi(9), &bi(1)), 1);
        assert_eq!(omega(&bi(10), &bi(3), &bi(4)), 0);
        for k in 0..5 {
            assert_eq!(omega(&bi(10), &bi(10 * k), &bi(7)), 0);
            assert_eq!(omega(&bi(10), &bi(0), &bi(k)), 0);
            assert_eq!(omega(&bi(10), &bi(k), &bi(0)), 0);
        }
        // both routes agree
        for n in 1..=6u64 {
            for a in 0..n * n {
                for b in 0..n * n {
                    assert_eq!(
                        omega(&bi(n as i64), &bi(a as i64), &bi(b as i64)) as u64,
                        omega_u64(n, a, b)
                    );
                }
            }
        }
    }

    #[test]
    fn carrying_worked_example() {
        let ctx = example_ctx();
        // v1 = e1+9e4, v2 = e2+9e4, v0 = e1+e2+18e4: floor(18/10) = 1 ≠ 0+0
        let s = LineSetSimplex::new(
            vec![
                line(&[1, 0, 0, 9]),
                line(&[0, 1, 0, 9]),
                line(&[1, 1, 0, 18]),
            ],
            Ambient::new(4, 0),
        )
        .unwrap();
        assert_eq!(is_carrying(&s, &ctx), Ok(true));

        // F(v1) = 3, F(v2) = 4 with N = 10: not carrying
        let s = LineSetSimplex::new(
            vec![
                line(&[1, 0, 0, 3]),
                line(&[0, 1, 0, 4]),
                line(&[1, 1, 0, 7]),
            ],
            Ambient::new(4, 0),
        )
        .unwrap();
        assert_eq!(is_carrying(&s, &ctx), Ok(false));

        // a core containing an F = 0 vertex is never carrying
        let s = LineSetSimplex::new(
            vec![
                line(&[1, 0, 0, 0]),
                line(&[0, 1, 0, 13]),
                line(&[1, 1, 0, 13]),
            ],
            Ambient::new(4, 0),
        )
        .unwrap();
        assert_eq!(is_carrying(&s, &ctx), Ok(false));

        // non-internal simplices are rejected
        let s = LineSetSimplex::new(
            vec![line(&[1, 0, 0, 0]), line(&[0, 1, 0, 0])],
            Ambient::new(4, 0),
        )
        .unwrap();
        assert_eq!(is_carrying(&s, &ctx), Err(RetractionError::NotInternallyAdditive));
    }

    /// A small bounded piece of the restricted link of ⟨w⟩ containing exactly
    /// the worked carrying triangle.
    fn carrying_patch() -> (BoundedComplex, LevelFunctional) {
        let ctx = example_ctx();
        let spec = BoundedComplexSpec::new(Variant::BA, 4, 0, 18);
        let vertices = vec![
            line(&[1, 0, 0, 9]),
            line(&[0, 1, 0, 9]),
            line(&[1, 1, 0, 18]),
        ];
        let x = build_full_subcomplex(spec, vec![ctx.carrier_line()], vertices, 3);
        (x, ctx)
    }

    #[test]
    fn subdivision_of_carrying_triangle() {
        let (x, ctx) = carrying_patch();
        let tri = vec![
            x.vertex_index(&line(&[1, 0, 0, 9])).unwrap(),
            x.vertex_index(&line(&[0, 1, 0, 9])).unwrap(),
            x.vertex_index(&line(&[1, 1, 0, 18])).unwrap(),
        ];
        let mut tri_sorted = tri.clone();
        tri_sorted.sort_unstable();
        assert!(x.contains_index_simplex(&tri_sorted));

        let y = subdivide(&x, &ctx);
        assert_eq!(y.carrying_cells().len(), 1);
        assert_eq!(y.vertex_count(), x.vertices().len() + 1);
        // the triangle is replaced by three triangles through the center
        let with_tau: Vec<_> = y
            .simplices(2)
            .iter()
            .filter(|s| s.iter().any(|v| matches!(v, YVertex::Tau(_))))
            .collect();
        assert_eq!(with_tau.len(), 3);
        assert!(!y
            .simplices(2)
            .iter()
            .any(|s| s.iter().all(|v| matches!(v, YVertex::Old(i) if tri_sorted.contains(i)))));
    }

    #[test]
    fn subdivision_without_carrying_is_identity_shaped() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 0, 2);
        let plink = plink_of_vertex(&spec, &line(&[0, 1]), 1).unwrap();
        let ctx = LevelFunctional::scaled_last_coordinate(2, 2);
        let y = subdivide(&plink, &ctx);
        assert!(y.carrying_cells().is_empty());
        assert_eq!(y.vertex_count(), plink.vertices().len());
        for d in 0..y.dims().len() {
            assert_eq!(y.simplices(d).len(), plink.simplices(d).len());
        }
    }

    #[test]
    fn retract_carrying_triangle_images() {
        let (x, ctx) = carrying_patch();
        let y = subdivide(&x, &ctx);
        let report = retract(&y, &ctx);
        assert!(report.is_simplicial(), "defects: {:?}", report.defects);
        assert_eq!(report.class_counts.carrying, 1);

        // the three subdivided images: two ⟨w⟩-additive simplices and one
        // internally additive simplex of the sublevel complex
        let tau_triangles: Vec<Vec<Line>> = y
            .simplices(2)
            .iter()
            .filter(|s| s.iter().any(|v| matches!(v, YVertex::Tau(_))))
            .map(|s| {
                let mut img: Vec<Line> = s
                    .iter()
                    .map(|v| match v {
                        YVertex::Old(i) => pihat(&x.vertices()[*i as usize], &ctx),
                        YVertex::Tau(_) => report
                            .vertex_images
                            .iter()
                            .find(|(yv, _)| matches!(yv, YVertex::Tau(_)))
                            .unwrap()
                            .1
                            .clone(),
                    })
                    .collect();
                img.sort();
                img.dedup();
                img
            })
            .collect();
        let mut w_additive = 0;
        let mut internal = 0;
        for img in &tau_triangles {
            let ls = LineSetSimplex::new(img.clone(), x.spec().ambient()).unwrap();
            match carrier_class(&ls, &ctx).unwrap() {
                CarrierClass::WAdditive => w_additive += 1,
                CarrierClass::InternalNonCarrying => internal += 1,
                other => panic!("unexpected class {other:?}"),
            }
        }
        assert_eq!((w_additive, internal), (2, 1));
    }

    #[test]
    fn retract_identity_on_sublevel() {
        let spec = BoundedComplexSpec::new(Variant::BA, 2, 1, 3);
        let ctx = LevelFunctional::scaled_last_coordinate(3, 2);
        let x = plink_of_vertex(&spec, &ctx.carrier_line(), 2).unwrap();
        let y = subdivide(&x, &ctx);
        let report = retract(&y, &ctx);
        assert!(report.is_simplicial(), "defects: {:?}", report.defects);
        assert_eq!(report.outside_ball, 0);
        for (yv, img) in &report.vertex_images {
            if let YVertex::Old(i) = yv {
                let v = &x.vertices()[*i as usize];
                if ctx.level(v) < *ctx.threshold() {
                    assert_eq!(img, v);
                }
            }
        }
    }

    #[test]
    fn w_additive_edge_collapses() {
        // with F = 2·(last coord) and w = e_2 in Z^2 ambient BA_2: the edge
        // {⟨v⟩, ⟨v+w⟩} with F(v+w) >= N collapses to a vertex
        let ctx = LevelFunctional::scaled_last_coordinate(2, 2);
        let v = line(&[1, 1]);
        let v_plus_w = line(&[1, 2]);
        assert_eq!(pihat(&v_plus_w, &ctx), pihat(&v, &ctx));
    }

    #[test]
    fn retract_link_simple_b_variant() {
        // link of ⟨w⟩ in bounded B_3, w = (1, 0, 2), F = last coordinate
        let spec = BoundedComplexSpec::new(Variant::B, 3, 0, 2);
        let x = enumerate(&spec, 2).unwrap();
        let w = line(&[1, 0, 2]);
        let ctx = LevelFunctional::new(vec![bi(0), bi(0), bi(1)], w.rep().to_vec()).unwrap();
        let lk = crate::complexes::link(&x, &LineSetSimplex::new(vec![w], Ambient::new(3, 0)).unwrap())
            .unwrap();
        let report = retract_link_simple(&lk, &ctx).unwrap();
        assert!(report.is_simplicial(), "defects: {:?}", report.defects);
        // identity on the sublevel part
        for (yv, img) in &report.vertex_images {
            if let YVertex::Old(i) = yv {
                let v = &lk.vertices()[*i as usize];
                if ctx.level(v) < *ctx.threshold() {
                    assert_eq!(img, v);
                }
            }
        }
    }

    #[test]
    fn pl_morse_examples() {
        let ctx = LevelFunctional::scaled_last_coordinate(3, 1);
        // standard edge with all levels zero: (0, 2, 0, -1)
        let s = LineSetSimplex::new(
            vec![line(&[1, 0, 0]), line(&[0, 1, 0])],
            Ambient::new(3, 0),
        )
        .unwrap();
        let t = pl_morse(&s, &ctx).unwrap();
        assert_eq!(
            (t.max_level.clone(), t.max_count, t.case, t.neg_dim),
            (bi(0), 2, 0, -1)
        );

        // additive simplex with a unique maximizer: case -2
        let s = LineSetSimplex::new(
            vec![line(&[1, 0, 1]), line(&[0, 1, 2]), line(&[1, 1, 3])],
            Ambient::new(3, 0),
        )
        .unwrap();
        let t = pl_morse(&s, &ctx).unwrap();
        assert_eq!(t.case, -2);
        assert_eq!(t.max_count, 1);

        // internally additive with two core vertices at the maximum: case -1
        let s = LineSetSimplex::new(
            vec![line(&[1, 0, 0]), line(&[0, 1, 2]), line(&[1, 1, 2])],
            Ambient::new(3, 0),
        )
        .unwrap();
        let t = pl_morse(&s, &ctx).unwrap();
        assert_eq!(t.case, -1);
        assert_eq!(t.max_count, 2);
    }

    #[test]
    fn morse_tuple_lexicographic_order() {
        let a = MorseTuple {
            max_level: bi(1),
            max_count: 5,
            case: 1,
            neg_dim: -4,
        };
        let b = MorseTuple {
            max_level: bi(2),
            max_count: 1,
            case: -2,
            neg_dim: 0,
        };
        assert!(a < b);
    }
}
