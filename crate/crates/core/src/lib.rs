//! Exact arithmetic for truncated noncommutative power series and the
//! algebraic machinery built on top of them:
//!
//! - [`ring`]: commutative base rings with canonical normal forms and
//!   decidable zero-testing (integers, residue rings, rationals, finite
//!   products, and three built-in monomial quotient families).
//! - [`series`]: sparse word-indexed power series over a finite alphabet,
//!   truncated at an explicit degree carried by every value.
//! - [`freegroup`]: free-group words and group-ring elements, the Magnus
//!   embedding `g ↦ 1 + letter`, Fox derivatives, the induced bi-ordering,
//!   and desk-scale injectivity sweeps.
//! - [`coproduct`]: two-factor ring coproducts in alternating-tensor normal
//!   form, evaluation into the two-letter series ring, support-based
//!   decomposition, and multiplication maps on closed-form families.
//! - [`witnesses`]: explicit elements that multiply to zero but are provably
//!   nonzero in a tensor product, each packaged with the certificate that
//!   proves nonzero-ness at a finite window.
//! - [`modlab`]: finite checkers for flatness and projectivity of finitely
//!   presented modules, and the Sahaev matrix chain condition.
//!
//! All values are immutable after construction and safe to share across
//! threads. The crate is `no_std` (it requires `alloc`); everything is exact,
//! no floating point anywhere.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coproduct;
pub mod freegroup;
pub mod modlab;
pub mod ring;
pub mod sample;
pub mod series;
pub mod witnesses;

use core::fmt;

/// Errors shared across the crate. Operations that can fail for a
/// mathematical reason (a non-unit, an undecided comparison) return dedicated
/// result values instead; `Error` is reserved for contract violations and
/// unsupported inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two operands live in different base rings.
    RingMismatch,
    /// Two series use different alphabets.
    AlphabetMismatch,
    /// Coproduct operands disagree on degree or subring specs.
    CoproductSpecMismatch,
    /// The operation is not defined for this ring kind.
    UnsupportedRing(&'static str),
    /// `beta_image` received a combination of family forms it cannot
    /// multiply in closed form.
    UnsupportedFamilyCombination,
    /// Families indexed by different numbers of indices.
    ArityMismatch { left: usize, right: usize },
    /// A window parameter is below the smallest usable size.
    WindowTooSmall { required: usize, got: usize },
    /// An enumeration would exceed the configured size guard.
    SizeGuardExceeded { limit: u64 },
    /// A matrix or presentation has inconsistent dimensions.
    DimensionMismatch,
    /// Invalid construction parameters (e.g. modulus below 2).
    InvalidSpec(&'static str),
    /// A literal value has no image in the requested ring.
    NotAnElement(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RingMismatch => write!(f, "operands belong to different rings"),
            Error::AlphabetMismatch => write!(f, "series use different alphabets"),
            Error::CoproductSpecMismatch => {
                write!(f, "coproduct elements disagree on ring, degree, or subring specs")
            }
            Error::UnsupportedRing(what) => write!(f, "unsupported ring kind for {what}"),
            Error::UnsupportedFamilyCombination => {
                write!(f, "no closed form for this combination of family expressions")
            }
            Error::ArityMismatch { left, right } => {
                write!(f, "family index arities differ: {left} vs {right}")
            }
            Error::WindowTooSmall { required, got } => {
                write!(f, "window of size {got} is too small (need at least {required})")
            }
            Error::SizeGuardExceeded { limit } => {
                write!(f, "enumeration exceeds the size guard of {limit}; use a smaller instance")
            }
            Error::DimensionMismatch => write!(f, "inconsistent matrix dimensions"),
            Error::InvalidSpec(what) => write!(f, "invalid specification: {what}"),
            Error::NotAnElement(what) => write!(f, "not an element of the ring: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub use ring::{BaseRingElement, MonomialFamily, RingSpec};
pub use series::{Alphabet, NcSeries, Word};
