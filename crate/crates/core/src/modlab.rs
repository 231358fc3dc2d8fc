//! Finite checkers for flatness and projectivity of finitely presented
//! modules, and the Sahaev matrix chain condition.
//!
//! A module is presented as `R^n / K` with `K` the row span of a generator
//! matrix. The flatness checker searches for an `n × n` matrix `e` with all
//! rows in `K` and `gens · e = gens`; such an `e` exhibits the quotient as
//! projective, hence flat, and its absence after an exhaustive search over a
//! finite ring certifies the quotient is not flat. A second, independent
//! route checks the quotient-flatness containment
//! `y·(^mF) ∩ ^ℓK ⊆ y·(^mK)` for a given matrix `y` by exhaustive
//! enumeration. The two routes agree and are cross-checked in the
//! acceptance suite.
//!
//! Membership of a row in `K` is decided by exact elimination: a Hermite
//! reduction over the integers for `Z` and `Z/n` (the `Z/n` case stacks
//! `n·I` alongside the lifted generators), Gaussian elimination over `Q`,
//! and coordinatewise recursion for product rings.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ring::{BaseRingElement, QSpan, RingSpec};
use crate::Error;

/// Default bound on the number of candidate matrices examined by the
/// flatness search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A rectangular matrix over a base ring, row-major and normalized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MatrixOverRing {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    entries: Vec<BaseRingElement>,
}

impl MatrixOverRing {
    pub fn new(
        ring: &RingSpec,
        rows: usize,
        cols: usize,
        entries: Vec<BaseRingElement>,
    ) -> Result<MatrixOverRing, Error> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch);
        }
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(MatrixOverRing { ring: ring.clone(), rows, cols, entries })
    }

    pub fn from_rows(
        ring: &RingSpec,
        rows: Vec<Vec<BaseRingElement>>,
    ) -> Result<MatrixOverRing, Error> {
        let row_count = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch);
        }
        MatrixOverRing::new(ring, row_count, cols, rows.into_iter().flatten().collect())
    }

    pub fn zero(ring: &RingSpec, rows: usize, cols: usize) -> MatrixOverRing {
        MatrixOverRing {
            ring: ring.clone(),
            rows,
            cols,
            entries: (0..rows * cols).map(|_| BaseRingElement::zero(ring)).collect(),
        }
    }

    pub fn identity(ring: &RingSpec, n: usize) -> MatrixOverRing {
        let mut m = MatrixOverRing::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = BaseRingElement::one(ring);
        }
        m
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &BaseRingElement {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[BaseRingElement] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[BaseRingElement]> {
        self.entries.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BaseRingElement::is_zero)
    }

    pub fn transpose(&self) -> MatrixOverRing {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).clone());
            }
        }
        MatrixOverRing { ring: self.ring.clone(), rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &MatrixOverRing) -> Result<MatrixOverRing, Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch);
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BaseRingElement::zero(&self.ring);
                for t in 0..self.cols {
                    acc = acc.add_unchecked(&self.entry(i, t).mul_unchecked(other.entry(t, j)));
                }
                entries.push(acc);
            }
        }
        Ok(MatrixOverRing { ring: self.ring.clone(), rows: self.rows, cols: other.cols, entries })
    }
}

/// A finitely presented module `R^n / K`, with `K` generated by the rows of
/// an `ℓ × n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    gens: MatrixOverRing,
}

impl Presentation {
    pub fn new(gens: MatrixOverRing) -> Presentation {
        Presentation { gens }
    }

    pub fn ring(&self) -> &RingSpec {
        self.gens.ring()
    }

    /// Ambient rank `n`.
    pub fn rank(&self) -> usize {
        self.gens.cols()
    }

    pub fn gens(&self) -> &MatrixOverRing {
        &self.gens
    }
}

// ---------------------------------------------------------------------------
// submodule membership by exact elimination

/// Hermite-style integer row reduction: returns echelon rows spanning the
/// same `Z`-row-span.
fn integer_echelon(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut echelon: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        loop {
            // pick the row (at or past pivot_row) with the smallest nonzero
            // magnitude in this column and reduce the others against it
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(pivot_row) {
                if !row[col].is_zero()
                    && best.is_none_or(|b: usize| row[col].abs() < rows[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut any_nonzero = false;
            for i in pivot_row + 1..rows.len() {
                if !rows[i][col].is_zero() {
                    let q = &rows[i][col] / &rows[pivot_row][col];
                    if !q.is_zero() {
                        let pivot_values = rows[pivot_row].clone();
                        for (cell, pivot_cell) in rows[i].iter_mut().zip(&pivot_values) {
                            *cell -= &q * pivot_cell;
                        }
                    }
                    if !rows[i][col].is_zero() {
                        any_nonzero = true;
                    }
                }
            }
            if !any_nonzero {
                echelon.push(rows[pivot_row].clone());
                pivot_row += 1;
                break;
            }
        }
    }
    echelon
}

/// Does `target` lie in the `Z`-row-span of the echelon rows?
fn integer_span_contains(echelon: &[Vec<BigInt>], mut target: Vec<BigInt>, cols: usize) -> bool {
    for row in echelon {
        let col = row.iter().position(|c| !c.is_zero()).expect("echelon row is nonzero");
        if target[col].is_zero() {
            continue;
        }
        if (&target[col] % &row[col]).is_zero() {
            let q = &target[col] / &row[col];
            for c in 0..cols {
                let delta = &q * &row[c];
                target[c] -= delta;
            }
        } else {
            return false;
        }
    }
    target.iter().all(Zero::is_zero)
}

/// Decide whether `row` lies in the left `R`-submodule of `R^n` generated by
/// the rows of `gens`.
pub fn submodule_membership(
    gens: &MatrixOverRing,
    row: &[BaseRingElement],
) -> Result<bool, Error> {
    if row.len() != gens.cols() {
        return Err(Error::DimensionMismatch);
    }
    if row.iter().any(|e| e.ring() != gens.ring()) {
        return Err(Error::RingMismatch);
    }
    let cols = gens.cols();
    match gens.ring() {
        RingSpec::Integers => {
            let lift = |r: &[BaseRingElement]| -> Vec<BigInt> {
                r.iter().map(|e| e.integer_value().expect("integer entry").clone()).collect()
            };
            let echelon =
                integer_echelon(gens.row_vectors().map(lift).collect(), cols);
            Ok(integer_span_contains(&echelon, lift(row), cols))
        }
        RingSpec::IntegersMod(n) => {
            // membership mod n is integer membership with n·I stacked in
            let lift = |r: &[BaseRingElement]| -> Vec<BigInt> {
                r.iter().map(|e| BigInt::from(e.residue_value().expect("residue entry"))).collect()
            };
            let mut rows: Vec<Vec<BigInt>> = gens.row_vectors().map(lift).collect();
            for i in 0..cols {
                let mut unit = alloc::vec![BigInt::zero(); cols];
                unit[i] = BigInt::from(*n);
                rows.push(unit);
            }
            let echelon = integer_echelon(rows, cols);
            Ok(integer_span_contains(&echelon, lift(row), cols))
        }
        RingSpec::Rationals => {
            let lift = |r: &[BaseRingElement]| -> Vec<BigRational> {
                r.iter().map(|e| e.rational_value().expect("rational entry").clone()).collect()
            };
            let mut span = QSpan::new(cols);
            for r in gens.row_vectors() {
                span.insert(lift(r));
            }
            Ok(span.contains(lift(row)))
        }
        RingSpec::Product { base, copies } => {
            // coordinatewise: a combination exists exactly when one exists
            // in every coordinate, since the coefficients split too
            for c in 0..*copies {
                let coord_rows: Vec<Vec<BaseRingElement>> = gens
                    .row_vectors()
                    .map(|r| r.iter().map(|e| e.coords().expect("product entry")[c].clone()).collect())
                    .collect();
                let coord_gens = MatrixOverRing::from_rows(base, coord_rows)?;
                let coord_row: Vec<BaseRingElement> =
                    row.iter().map(|e| e.coords().expect("product entry")[c].clone()).collect();
                if !submodule_membership(&coord_gens, &coord_row)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        RingSpec::Monomial(_) => Err(Error::UnsupportedRing("submodule membership")),
    }
}

// ---------------------------------------------------------------------------
// enumeration helpers for finite rings

/// All elements of the submodule generated by the rows of `gens`, for a
/// finite ring, by worklist closure under `s + r·g`.
fn enumerate_submodule(
    gens: &MatrixOverRing,
    guard: u64,
) -> Result<Vec<Vec<BaseRingElement>>, Error> {
    let ring = gens.ring();
    let scalars = ring.enumerate()?;
    let cols = gens.cols();
    let zero: Vec<BaseRingElement> = (0..cols).map(|_| BaseRingElement::zero(ring)).collect();
    let mut seen: BTreeSet<Vec<BaseRingElement>> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut worklist = alloc::vec![zero];
    while let Some(current) = worklist.pop() {
        for g in gens.row_vectors() {
            for r in &scalars {
                let candidate: Vec<BaseRingElement> = current
                    .iter()
                    .zip(g)
                    .map(|(c, gi)| c.add_unchecked(&r.mul_unchecked(gi)))
                    .collect();
                if seen.insert(candidate.clone()) {
                    if seen.len() as u64 > guard {
                        return Err(Error::SizeGuardExceeded { limit: guard });
                    }
                    worklist.push(candidate);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All `rows × cols` matrices over a finite ring, guarded.
fn all_matrices(
    ring: &RingSpec,
    rows: usize,
    cols: usize,
    guard: u64,
) -> Result<Vec<MatrixOverRing>, Error> {
    let scalars = ring.enumerate()?;
    let positions = rows * cols;
    let count = (scalars.len() as u64)
        .checked_pow(u32::try_from(positions).map_err(|_| Error::SizeGuardExceeded { limit: guard })?)
        .ok_or(Error::SizeGuardExceeded { limit: guard })?;
    if count > guard {
        return Err(Error::SizeGuardExceeded { limit: guard });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut odometer = alloc::vec![0usize; positions];
    loop {
        let entries: Vec<BaseRingElement> =
            odometer.iter().map(|i| scalars[*i].clone()).collect();
        out.push(MatrixOverRing::new(ring, rows, cols, entries)?);
        let mut pos = 0;
        loop {
            if pos == positions {
                return Ok(out);
            }
            odometer[pos] += 1;
            if odometer[pos] < scalars.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// the flatness search

/// Verdict of the flatness search for `R^n / K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatnessVerdict {
    /// An `e` with rows in `K` and `gens·e = gens` was found; the quotient
    /// is projective, hence flat. Nothing beyond `gens·e = gens` and row
    /// membership is asserted of `e` (in particular not idempotency).
    Flat { witness: MatrixOverRing },
    /// Exhaustive search over the finite ring found no such `e`; the stored
    /// matrix is the generator matrix violating the containment condition.
    NotFlat { witness: MatrixOverRing },
    /// The budget was exhausted, or the ring is infinite with a nonzero
    /// `K`; no verdict.
    Inconclusive,
}

/// Search for an `n × n` matrix `e`, rows in `K`, with `gens · e = gens`.
/// `K = 0` is flat over any ring; otherwise finite rings are searched
/// exhaustively within the budget, and infinite rings yield `Inconclusive`
/// rather than a wrong answer.
pub fn flatness_check(p: &Presentation, budget: u64) -> Result<FlatnessVerdict, Error> {
    let n = p.rank();
    let ring = p.ring().clone();
    if p.gens().is_zero() {
        return Ok(FlatnessVerdict::Flat { witness: MatrixOverRing::zero(&ring, n, n) });
    }
    if !ring.is_finite() {
        return Ok(FlatnessVerdict::Inconclusive);
    }
    let submodule = match enumerate_submodule(p.gens(), budget) {
        Ok(s) => s,
        Err(Error::SizeGuardExceeded { .. }) => return Ok(FlatnessVerdict::Inconclusive),
        Err(e) => return Err(e),
    };
    let candidate_count = (submodule.len() as u64).checked_pow(n as u32);
    if candidate_count.is_none() || candidate_count.unwrap() > budget {
        return Ok(FlatnessVerdict::Inconclusive);
    }
    let mut odometer = alloc::vec![0usize; n];
    loop {
        let rows: Vec<Vec<BaseRingElement>> =
            odometer.iter().map(|i| submodule[*i].clone()).collect();
        let e = MatrixOverRing::from_rows(&ring, rows)?;
        if p.gens().mul(&e)? == *p.gens() {
            return Ok(FlatnessVerdict::Flat { witness: e });
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(FlatnessVerdict::NotFlat { witness: p.gens().clone() });
            }
            odometer[pos] += 1;
            if odometer[pos] < submodule.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// the quotient-flatness containment

/// Outcome of the containment `y·(^mF) ∩ ^ℓK ⊆ y·(^mK)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContainmentOutcome {
    Holds,
    /// A matrix in `y·(^mF) ∩ ^ℓK` that is not in `y·(^mK)`.
    Violated { witness: MatrixOverRing },
}

/// Exhaustively check the containment for one coefficient matrix `y`
/// (`ℓ × m`) against the presentation's `K ⊆ F = R^n`, over a finite ring.
pub fn flat_quotient_condition(
    p: &Presentation,
    y: &MatrixOverRing,
    guard: u64,
) -> Result<ContainmentOutcome, Error> {
    if y.ring() != p.ring() {
        return Err(Error::RingMismatch);
    }
    if !p.ring().is_finite() {
        return Err(Error::UnsupportedRing("the containment check needs a finite ring"));
    }
    let n = p.rank();
    let m = y.cols();
    let submodule = enumerate_submodule(p.gens(), guard)?;

    // y·(^m K): all images of m-tuples from K
    let k_count = (submodule.len() as u64)
        .checked_pow(u32::try_from(m).map_err(|_| Error::SizeGuardExceeded { limit: guard })?)
        .ok_or(Error::SizeGuardExceeded { limit: guard })?;
    if k_count > guard {
        return Err(Error::SizeGuardExceeded { limit: guard });
    }
    let mut yk_images: BTreeSet<MatrixOverRing> = BTreeSet::new();
    let mut odometer = alloc::vec![0usize; m];
    'outer: loop {
        let rows: Vec<Vec<BaseRingElement>> =
            odometer.iter().map(|i| submodule[*i].clone()).collect();
        let b = MatrixOverRing::from_rows(p.ring(), rows)?;
        yk_images.insert(y.mul(&b)?);
        let mut pos = 0;
        loop {
            if pos == m {
                break 'outer;
            }
            odometer[pos] += 1;
            if odometer[pos] < submodule.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }

    for a in all_matrices(p.ring(), m, n, guard)? {
        let image = y.mul(&a)?;
        let mut in_k = true;
        for row in image.row_vectors() {
            if !submodule_membership(p.gens(), row)? {
                in_k = false;
                break;
            }
        }
        if in_k && !yk_images.contains(&image) {
            return Ok(ContainmentOutcome::Violated { witness: image });
        }
    }
    Ok(ContainmentOutcome::Holds)
}

// ---------------------------------------------------------------------------
// the matrix chain condition

/// Which half of the chain condition a pair violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainCondition {
    /// `y_k · y_{k+1} = y_k` failed to hold.
    ForwardAbsorption,
    /// `y_{k+1} · y_k ≠ y_{k+1}` failed to hold (the reverse product
    /// stabilized).
    ReverseSeparation,
}

/// Outcome of checking a finite prefix of a matrix chain. A valid prefix of
/// any finite length certifies nothing about the ring by itself; only the
/// existence of an infinite chain would.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainOutcome {
    ValidPrefix,
    Violation { index: usize, condition: ChainCondition },
}

/// Check `y_k y_{k+1} = y_k` and `y_{k+1} y_k ≠ y_{k+1}` for each
/// consecutive pair, literally as stated; the first failing pair is
/// reported.
pub fn matrix_chain_check(seq: &[MatrixOverRing]) -> Result<ChainOutcome, Error> {
    if let Some(first) = seq.first() {
        if first.rows() != first.cols() {
            return Err(Error::DimensionMismatch);
        }
        for m in seq {
            if m.ring() != first.ring() {
                return Err(Error::RingMismatch);
            }
            if m.rows() != first.rows() || m.cols() != first.cols() {
                return Err(Error::DimensionMismatch);
            }
        }
    }
    for (k, pair) in seq.windows(2).enumerate() {
        if pair[0].mul(&pair[1])? != pair[0] {
            return Ok(ChainOutcome::Violation { index: k, condition: ChainCondition::ForwardAbsorption });
        }
        if pair[1].mul(&pair[0])? == pair[1] {
            return Ok(ChainOutcome::Violation { index: k, condition: ChainCondition::ReverseSeparation });
        }
    }
    Ok(ChainOutcome::ValidPrefix)
}

/// The coordinatewise staircase over a product ring: `y_k` is the `1 × 1`
/// matrix whose entry has `k` leading ones. Valid prefixes of every length
/// up to the number of coordinates.
pub fn staircase_sequence(base: &RingSpec, copies: usize, length: usize) -> Result<Vec<MatrixOverRing>, Error> {
    let ring = RingSpec::product(base.clone(), copies)?;
    let mut out = Vec::with_capacity(length);
    for k in 0..length {
        let coords: Vec<BaseRingElement> = (0..copies)
            .map(|i| {
                if i < k {
                    BaseRingElement::one(base)
                } else {
                    BaseRingElement::zero(base)
                }
            })
            .collect();
        let entry = BaseRingElement::from_coords(&ring, coords)?;
        out.push(MatrixOverRing::new(&ring, 1, 1, alloc::vec![entry])?);
    }
    Ok(out)
}
