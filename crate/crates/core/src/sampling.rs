//! Seeded random generators for the property suites: bounded-entry unimodular
//! matrices, frames, augmented frames and rational apartments. Everything is
//! driven by a caller-supplied RNG so runs are reproducible from a seed.

use crate::apartments::RationalApartment;
use crate::exactlin::IntMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

/// A random unimodular matrix built from `steps` random elementary row
/// operations with shear coefficients bounded by `coeff_bound`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize, coeff_bound: i64) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        match rng.gen_range(0..4) {
            0 | 1 => {
                let q = BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound));
                let rj = rows[j].clone();
                for (x, y) in rows[i].iter_mut().zip(&rj) {
                    *x += &q * y;
                }
            }
            2 => rows.swap(i, j),
            _ => {
                for x in rows[i].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
    }
    IntMatrix::from_rows_with_cols(rows, n)
}

fn max_entry(m: &IntMatrix) -> BigInt {
    let mut best = BigInt::zero();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let a = m.at(i, j).abs();
            if a > best {
                best = a;
            }
        }
    }
    best
}

/// A random basis of `Z^n` (as a vector list) with all entries bounded by
/// `entry_bound` in absolute value.
pub fn random_frame_vectors<R: Rng>(rng: &mut R, n: usize, entry_bound: u64) -> Vec<Vec<BigInt>> {
    let bound = BigInt::from(entry_bound);
    loop {
        let extra = rng.gen_range(0..3);
        let m = random_unimodular(rng, n, 2 * n + extra, 1);
        if max_entry(&m) <= bound {
            return (0..n).map(|j| m.col_vec(j)).collect();
        }
    }
}

/// A random ordered augmented frame `(v_0 = v_1 + v_2, v_1, ..., v_n)` with
/// every vector's entries bounded by `entry_bound`.
pub fn random_augmented_frame<R: Rng>(rng: &mut R, n: usize, entry_bound: u64) -> Vec<Vec<BigInt>> {
    let bound = BigInt::from(entry_bound);
    loop {
        let mut frame = random_frame_vectors(rng, n, entry_bound);
        // random pair to carry the relation
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n);
        if a == b {
            b = (b + 1) % n;
        }
        frame.swap(0, a.min(b));
        frame.swap(1, a.max(b));
        let v0: Vec<BigInt> = frame[0].iter().zip(&frame[1]).map(|(x, y)| x + y).collect();
        if v0.iter().any(|x| x.abs() > bound) {
            continue;
        }
        let mut ordered = vec![v0];
        ordered.extend(frame);
        return ordered;
    }
}

/// A random rational apartment of rank `n` with `2 <= |det| <= max_det` and
/// primitive vectors with entries bounded by `entry_bound`.
pub fn random_rational_apartment<R: Rng>(
    rng: &mut R,
    n: usize,
    entry_bound: i64,
    max_det: u64,
) -> RationalApartment {
    loop {
        let vectors: Vec<Vec<BigInt>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-entry_bound..=entry_bound)))
                    .collect()
            })
            .collect();
        let Ok(a) = RationalApartment::new(vectors) else {
            continue;
        };
        let d = a.det().abs();
        if d >= BigInt::from(2) && d <= BigInt::from(max_det) {
            return a;
        }
    }
}
