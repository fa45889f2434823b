//! Exact-arithmetic machinery for frame and augmented-frame complexes over `Z^n`.
//!
//! The crate provides:
//!
//! * [`exactlin`] — Hermite/Smith normal forms, saturation, unimodular
//!   completion over arbitrary-precision integers;
//! * [`lattice`] — lines, partial frames, partial augmented frames and the
//!   standard / internally additive / externally additive trichotomy;
//! * [`complexes`] — bounded enumeration of the complexes `B_n^m`, `BA_n^m`
//!   and `BA'_n`, links, restricted links, and the span map to the poset of
//!   proper summands;
//! * [`retractions`] — the level-based retraction of restricted links, the
//!   carrying cocycle, and the subdivision needed at carrying triangles;
//! * [`symbols`] / [`apartments`] — frame symbols with their three relation
//!   families, boundary relations, apartment chains in the flag complex and
//!   determinant reduction of rational apartments;
//! * [`homology`] / [`coinvariants`] — chain complexes with SNF homology,
//!   stabilizers of frames and augmented frames, orientation characters and
//!   twisted coinvariant dimensions via averaging projectors;
//! * [`cli`] — the batch command-line surface.
//!
//! All values are immutable after construction and safe to share between
//! threads; every operation is a pure function of its inputs.

pub mod apartments;
pub mod cli;
pub mod coinvariants;
pub mod complexes;
pub mod exactlin;
pub mod homology;
pub mod lattice;
pub mod retractions;
pub mod sampling;
pub mod symbols;
