//! Commutative base rings with canonical normal forms.
//!
//! Every element carries its [`RingSpec`] and a normalized representation,
//! so equality of elements is structural equality and zero-testing is exact.
//! The supported rings are the integers, residue rings `Z/n`, the rationals,
//! finite products, and three built-in monomial quotient families over `Q`:
//!
//! - `Idempotent { rank }`: `Q[e_0..e_{rank-1}]` with `e_i e_j = δ_ij e_i`,
//! - `SquareZero { rank }`: `Q ⊕ Q x_0 ⊕ … ⊕ Q x_{rank-1}` with `x_i x_j = 0`,
//! - `MonomialSubring`: the subring of `Q[x,y]` generated by `{ x^i y : i ≥ 0 }`.
//!
//! Each family's products reduce by a fixed terminating, confluent rewriting
//! rule at the monomial level, so normal forms are unique and arithmetic is
//! zero-divisor-aware throughout. No operation assumes the ring is a domain.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Description of a commutative base ring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingSpec {
    /// Arbitrary-precision integers.
    Integers,
    /// Integers modulo `n`, `n ≥ 2`; residues normalized into `[0, n)`.
    IntegersMod(u64),
    /// Rationals as reduced fractions with positive denominators.
    Rationals,
    /// A finite direct product of copies of `base`, with coordinatewise
    /// operations.
    Product { base: Box<RingSpec>, copies: usize },
    /// One of the built-in monomial quotient families over `Q`.
    Monomial(MonomialFamily),
}

/// The three built-in monomial quotient families. Each admits a fixed
/// terminating, confluent rewriting system on monomials, so elements have a
/// unique sorted normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonomialFamily {
    /// `Q[e_0..e_{rank-1}]` modulo `e_i e_j - δ_ij e_i`.
    Idempotent { rank: usize },
    /// `Q ⊕ (free Q-module on x_0..x_{rank-1})` with all products of basis
    /// elements zero.
    SquareZero { rank: usize },
    /// The subring of `Q[x,y]` spanned by `1` and the monomials `x^i y^k`
    /// with `k ≥ 1`.
    MonomialSubring,
}

impl RingSpec {
    /// Residue ring constructor; rejects moduli below 2.
    pub fn integers_mod(n: u64) -> Result<RingSpec, Error> {
        if n < 2 {
            return Err(Error::InvalidSpec("modulus must be at least 2"));
        }
        Ok(RingSpec::IntegersMod(n))
    }

    /// Product ring constructor; rejects zero copies.
    pub fn product(base: RingSpec, copies: usize) -> Result<RingSpec, Error> {
        if copies == 0 {
            return Err(Error::InvalidSpec("product ring needs at least one copy"));
        }
        Ok(RingSpec::Product { base: Box::new(base), copies })
    }

    pub fn idempotent(rank: usize) -> RingSpec {
        RingSpec::Monomial(MonomialFamily::Idempotent { rank })
    }

    pub fn square_zero(rank: usize) -> RingSpec {
        RingSpec::Monomial(MonomialFamily::SquareZero { rank })
    }

    pub fn monomial_subring() -> RingSpec {
        RingSpec::Monomial(MonomialFamily::MonomialSubring)
    }

    /// True when the ring has finitely many elements.
    pub fn is_finite(&self) -> bool {
        match self {
            RingSpec::Integers | RingSpec::Rationals | RingSpec::Monomial(_) => false,
            RingSpec::IntegersMod(_) => true,
            RingSpec::Product { base, .. } => base.is_finite(),
        }
    }

    /// Number of elements, when finite and within `u64` range.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            RingSpec::IntegersMod(n) => Some(*n),
            RingSpec::Product { base, copies } => {
                let b = base.cardinality()?;
                b.checked_pow(u32::try_from(*copies).ok()?)
            }
            _ => None,
        }
    }

    /// All elements of a finite ring, in a fixed deterministic order.
    pub fn enumerate(&self) -> Result<Vec<BaseRingElement>, Error> {
        match self {
            RingSpec::IntegersMod(n) => Ok((0..*n)
                .map(|v| BaseRingElement { ring: self.clone(), repr: Repr::Mod(v) })
                .collect()),
            RingSpec::Product { base, copies } => {
                let coords = base.enumerate()?;
                let mut out: Vec<Vec<Repr>> = alloc::vec![Vec::new()];
                for _ in 0..*copies {
                    let mut next = Vec::with_capacity(out.len() * coords.len());
                    for prefix in &out {
                        for c in &coords {
                            let mut t = prefix.clone();
                            t.push(c.repr.clone());
                            next.push(t);
                        }
                    }
                    out = next;
                }
                Ok(out
                    .into_iter()
                    .map(|t| BaseRingElement { ring: self.clone(), repr: Repr::Tuple(t) })
                    .collect())
            }
            _ => Err(Error::UnsupportedRing("enumeration of an infinite ring")),
        }
    }
}

/// A monomial in one of the built-in families. `One` is the unit monomial in
/// every family; `Gen(j)` is `e_j` or `x_j`; `Xy { x, y }` is `x^x y^y` with
/// `y ≥ 1` in the monomial subring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    One,
    Gen(usize),
    Xy { x: u64, y: u64 },
}

type Poly = BTreeMap<Monomial, BigRational>;

/// Normalized representation of a ring element. Kept crate-private so all
/// construction goes through normalizing constructors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Repr {
    Int(BigInt),
    Mod(u64),
    Rat(BigRational),
    Tuple(Vec<Repr>),
    Poly(Poly),
}

/// An exact element of a declared base ring, always in normal form: two
/// elements are equal exactly when their rings and representations agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseRingElement {
    ring: RingSpec,
    repr: Repr,
}

// ---------------------------------------------------------------------------
// repr-level arithmetic (same-spec inputs)

fn zero_repr(spec: &RingSpec) -> Repr {
    match spec {
        RingSpec::Integers => Repr::Int(BigInt::zero()),
        RingSpec::IntegersMod(_) => Repr::Mod(0),
        RingSpec::Rationals => Repr::Rat(BigRational::zero()),
        RingSpec::Product { base, copies } => {
            Repr::Tuple(core::iter::repeat_with(|| zero_repr(base)).take(*copies).collect())
        }
        RingSpec::Monomial(_) => Repr::Poly(Poly::new()),
    }
}

fn one_repr(spec: &RingSpec) -> Repr {
    match spec {
        RingSpec::Integers => Repr::Int(BigInt::one()),
        RingSpec::IntegersMod(_) => Repr::Mod(1),
        RingSpec::Rationals => Repr::Rat(BigRational::one()),
        RingSpec::Product { base, copies } => {
            Repr::Tuple(core::iter::repeat_with(|| one_repr(base)).take(*copies).collect())
        }
        RingSpec::Monomial(_) => {
            let mut p = Poly::new();
            p.insert(Monomial::One, BigRational::one());
            Repr::Poly(p)
        }
    }
}

fn is_zero_repr(repr: &Repr) -> bool {
    match repr {
        Repr::Int(v) => v.is_zero(),
        Repr::Mod(v) => *v == 0,
        Repr::Rat(v) => v.is_zero(),
        Repr::Tuple(t) => t.iter().all(is_zero_repr),
        Repr::Poly(p) => p.is_empty(),
    }
}

fn add_repr(spec: &RingSpec, a: &Repr, b: &Repr) -> Repr {
    match (spec, a, b) {
        (RingSpec::Integers, Repr::Int(x), Repr::Int(y)) => Repr::Int(x + y),
        (RingSpec::IntegersMod(n), Repr::Mod(x), Repr::Mod(y)) => {
            Repr::Mod(((u128::from(*x) + u128::from(*y)) % u128::from(*n)) as u64)
        }
        (RingSpec::Rationals, Repr::Rat(x), Repr::Rat(y)) => Repr::Rat(x + y),
        (RingSpec::Product { base, .. }, Repr::Tuple(xs), Repr::Tuple(ys)) => {
            Repr::Tuple(xs.iter().zip(ys).map(|(x, y)| add_repr(base, x, y)).collect())
        }
        (RingSpec::Monomial(_), Repr::Poly(p), Repr::Poly(q)) => {
            let mut out = p.clone();
            for (m, c) in q {
                let entry = out.entry(*m).or_insert_with(BigRational::zero);
                *entry += c;
                if entry.is_zero() {
                    out.remove(m);
                }
            }
            Repr::Poly(out)
        }
        _ => unreachable!("repr does not match ring spec"),
    }
}

fn neg_repr(spec: &RingSpec, a: &Repr) -> Repr {
    match (spec, a) {
        (RingSpec::Integers, Repr::Int(x)) => Repr::Int(-x),
        (RingSpec::IntegersMod(n), Repr::Mod(x)) => Repr::Mod(if *x == 0 { 0 } else { n - x }),
        (RingSpec::Rationals, Repr::Rat(x)) => Repr::Rat(-x),
        (RingSpec::Product { base, .. }, Repr::Tuple(xs)) => {
            Repr::Tuple(xs.iter().map(|x| neg_repr(base, x)).collect())
        }
        (RingSpec::Monomial(_), Repr::Poly(p)) => {
            Repr::Poly(p.iter().map(|(m, c)| (*m, -c)).collect())
        }
        _ => unreachable!("repr does not match ring spec"),
    }
}

/// Product of two monomials under the family's rewriting rule; `None` means
/// the product rewrites to zero.
fn mul_monomial(family: MonomialFamily, a: Monomial, b: Monomial) -> Option<Monomial> {
    match (a, b) {
        (Monomial::One, m) | (m, Monomial::One) => Some(m),
        (Monomial::Gen(i), Monomial::Gen(j)) => match family {
            MonomialFamily::Idempotent { .. } => {
                if i == j {
                    Some(Monomial::Gen(i))
                } else {
                    None
                }
            }
            MonomialFamily::SquareZero { .. } => None,
            MonomialFamily::MonomialSubring => unreachable!("Gen monomial in monomial subring"),
        },
        (Monomial::Xy { x: x1, y: y1 }, Monomial::Xy { x: x2, y: y2 }) => {
            Some(Monomial::Xy { x: x1 + x2, y: y1 + y2 })
        }
        _ => unreachable!("mixed monomial kinds"),
    }
}

fn mul_repr(spec: &RingSpec, a: &Repr, b: &Repr) -> Repr {
    match (spec, a, b) {
        (RingSpec::Integers, Repr::Int(x), Repr::Int(y)) => Repr::Int(x * y),
        (RingSpec::IntegersMod(n), Repr::Mod(x), Repr::Mod(y)) => {
            Repr::Mod(((u128::from(*x) * u128::from(*y)) % u128::from(*n)) as u64)
        }
        (RingSpec::Rationals, Repr::Rat(x), Repr::Rat(y)) => Repr::Rat(x * y),
        (RingSpec::Product { base, .. }, Repr::Tuple(xs), Repr::Tuple(ys)) => {
            Repr::Tuple(xs.iter().zip(ys).map(|(x, y)| mul_repr(base, x, y)).collect())
        }
        (RingSpec::Monomial(family), Repr::Poly(p), Repr::Poly(q)) => {
            let mut out = Poly::new();
            for (m1, c1) in p {
                for (m2, c2) in q {
                    if let Some(m) = mul_monomial(*family, *m1, *m2) {
                        let entry = out.entry(m).or_insert_with(BigRational::zero);
                        *entry += c1 * c2;
                        if entry.is_zero() {
                            out.remove(&m);
                        }
                    }
                }
            }
            Repr::Poly(out)
        }
        _ => unreachable!("repr does not match ring spec"),
    }
}

fn invert_mod(a: u64, n: u64) -> Option<u64> {
    // extended Euclid on i128; n ≥ 2 and a < n
    let (mut r0, mut r1) = (i128::from(n), i128::from(a));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(i128::from(n)) as u64)
}

fn invert_repr(spec: &RingSpec, a: &Repr) -> Option<Repr> {
    match (spec, a) {
        (RingSpec::Integers, Repr::Int(x)) => {
            if x.is_one() || (-x).is_one() {
                Some(Repr::Int(x.clone()))
            } else {
                None
            }
        }
        (RingSpec::IntegersMod(n), Repr::Mod(x)) => invert_mod(*x, *n).map(Repr::Mod),
        (RingSpec::Rationals, Repr::Rat(x)) => {
            if x.is_zero() {
                None
            } else {
                Some(Repr::Rat(x.recip()))
            }
        }
        (RingSpec::Product { base, .. }, Repr::Tuple(xs)) => {
            let mut out = Vec::with_capacity(xs.len());
            for x in xs {
                out.push(invert_repr(base, x)?);
            }
            Some(Repr::Tuple(out))
        }
        (RingSpec::Monomial(family), Repr::Poly(p)) => {
            let c0 = p.get(&Monomial::One)?.clone();
            if c0.is_zero() {
                return None;
            }
            match family {
                MonomialFamily::MonomialSubring => {
                    // units are the nonzero scalars of a graded domain
                    if p.len() == 1 {
                        let mut out = Poly::new();
                        out.insert(Monomial::One, c0.recip());
                        Some(Repr::Poly(out))
                    } else {
                        None
                    }
                }
                MonomialFamily::SquareZero { .. } => {
                    // (c0 + v)^{-1} = c0^{-1} - c0^{-2} v since v^2 = 0
                    let inv0 = c0.recip();
                    let mut out = Poly::new();
                    out.insert(Monomial::One, inv0.clone());
                    for (m, c) in p {
                        if *m != Monomial::One {
                            out.insert(*m, -(&inv0 * &inv0) * c);
                        }
                    }
                    Some(Repr::Poly(out))
                }
                MonomialFamily::Idempotent { .. } => {
                    // via the splitting u ↦ (c0, c0 + c_j): all factors must
                    // be nonzero; d_j = -c_j / (c0 (c0 + c_j))
                    let mut out = Poly::new();
                    out.insert(Monomial::One, c0.recip());
                    for (m, c) in p {
                        if *m == Monomial::One {
                            continue;
                        }
                        let split = &c0 + c;
                        if split.is_zero() {
                            return None;
                        }
                        out.insert(*m, -c / (&c0 * split));
                    }
                    Some(Repr::Poly(out))
                }
            }
        }
        _ => unreachable!("repr does not match ring spec"),
    }
}

// ---------------------------------------------------------------------------
// public element API

impl BaseRingElement {
    pub fn zero(spec: &RingSpec) -> BaseRingElement {
        BaseRingElement { ring: spec.clone(), repr: zero_repr(spec) }
    }

    pub fn one(spec: &RingSpec) -> BaseRingElement {
        BaseRingElement { ring: spec.clone(), repr: one_repr(spec) }
    }

    /// Canonical image of an integer in any ring.
    pub fn from_integer(spec: &RingSpec, value: impl Into<BigInt>) -> BaseRingElement {
        let value = value.into();
        let repr = match spec {
            RingSpec::Integers => Repr::Int(value),
            RingSpec::IntegersMod(n) => {
                let m = BigInt::from(*n);
                let mut r = &value % &m;
                if r.is_negative() {
                    r += &m;
                }
                Repr::Mod(u64::try_from(r).expect("residue fits the modulus"))
            }
            RingSpec::Rationals => Repr::Rat(BigRational::from_integer(value)),
            RingSpec::Product { base, copies } => {
                let coord = BaseRingElement::from_integer(base, value).repr;
                Repr::Tuple(core::iter::repeat_with(|| coord.clone()).take(*copies).collect())
            }
            RingSpec::Monomial(_) => {
                let mut p = Poly::new();
                if !value.is_zero() {
                    p.insert(Monomial::One, BigRational::from_integer(value));
                }
                Repr::Poly(p)
            }
        };
        BaseRingElement { ring: spec.clone(), repr }
    }

    /// Image of a rational number, when the denominator is invertible in the
    /// ring.
    pub fn from_rational(spec: &RingSpec, value: &BigRational) -> Result<BaseRingElement, Error> {
        if value.denom().is_one() {
            return Ok(BaseRingElement::from_integer(spec, value.numer().clone()));
        }
        match spec {
            RingSpec::Integers => {
                Err(Error::NotAnElement("fraction with non-unit denominator over the integers"))
            }
            RingSpec::Rationals => Ok(BaseRingElement {
                ring: spec.clone(),
                repr: Repr::Rat(value.clone()),
            }),
            RingSpec::IntegersMod(_) => {
                let num = BaseRingElement::from_integer(spec, value.numer().clone());
                let den = BaseRingElement::from_integer(spec, value.denom().clone());
                match den.invert() {
                    Some(inv) => Ok(num.mul_unchecked(&inv)),
                    None => Err(Error::NotAnElement("denominator is not a unit in the residue ring")),
                }
            }
            RingSpec::Product { base, copies } => {
                let coord = BaseRingElement::from_rational(base, value)?.repr;
                Ok(BaseRingElement {
                    ring: spec.clone(),
                    repr: Repr::Tuple(
                        core::iter::repeat_with(|| coord.clone()).take(*copies).collect(),
                    ),
                })
            }
            RingSpec::Monomial(_) => {
                let mut p = Poly::new();
                if !value.is_zero() {
                    p.insert(Monomial::One, value.clone());
                }
                Ok(BaseRingElement { ring: spec.clone(), repr: Repr::Poly(p) })
            }
        }
    }

    /// The basis element `e_j` of an idempotent family.
    pub fn idempotent_generator(spec: &RingSpec, j: usize) -> Result<BaseRingElement, Error> {
        match spec {
            RingSpec::Monomial(MonomialFamily::Idempotent { rank }) if j < *rank => {
                Ok(Self::basis(spec, Monomial::Gen(j)))
            }
            RingSpec::Monomial(MonomialFamily::Idempotent { .. }) => {
                Err(Error::InvalidSpec("generator index outside the declared window"))
            }
            _ => Err(Error::UnsupportedRing("idempotent generator")),
        }
    }

    /// The basis element `x_j` of a square-zero family.
    pub fn square_zero_generator(spec: &RingSpec, j: usize) -> Result<BaseRingElement, Error> {
        match spec {
            RingSpec::Monomial(MonomialFamily::SquareZero { rank }) if j < *rank => {
                Ok(Self::basis(spec, Monomial::Gen(j)))
            }
            RingSpec::Monomial(MonomialFamily::SquareZero { .. }) => {
                Err(Error::InvalidSpec("generator index outside the declared window"))
            }
            _ => Err(Error::UnsupportedRing("square-zero generator")),
        }
    }

    /// The monomial `x^xdeg y^ydeg` of the monomial subring (`ydeg ≥ 1`, or
    /// the unit when both degrees are zero).
    pub fn subring_monomial(xdeg: u64, ydeg: u64) -> Result<BaseRingElement, Error> {
        let spec = RingSpec::monomial_subring();
        if ydeg == 0 {
            if xdeg == 0 {
                return Ok(BaseRingElement::one(&spec));
            }
            return Err(Error::NotAnElement("x powers alone lie outside the subring"));
        }
        Ok(Self::basis(&spec, Monomial::Xy { x: xdeg, y: ydeg }))
    }

    fn basis(spec: &RingSpec, m: Monomial) -> BaseRingElement {
        let mut p = Poly::new();
        p.insert(m, BigRational::one());
        BaseRingElement { ring: spec.clone(), repr: Repr::Poly(p) }
    }

    /// Assemble a product-ring element from its coordinates.
    pub fn from_coords(spec: &RingSpec, coords: Vec<BaseRingElement>) -> Result<BaseRingElement, Error> {
        match spec {
            RingSpec::Product { base, copies } => {
                if coords.len() != *copies {
                    return Err(Error::DimensionMismatch);
                }
                let mut t = Vec::with_capacity(coords.len());
                for c in coords {
                    if c.ring != **base {
                        return Err(Error::RingMismatch);
                    }
                    t.push(c.repr);
                }
                Ok(BaseRingElement { ring: spec.clone(), repr: Repr::Tuple(t) })
            }
            _ => Err(Error::UnsupportedRing("coordinates of a non-product ring")),
        }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        is_zero_repr(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        self.repr == one_repr(&self.ring)
    }

    fn check_same_ring(&self, other: &BaseRingElement) -> Result<(), Error> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Normalized sum; errors when the operands live in different rings.
    pub fn add(&self, other: &BaseRingElement) -> Result<BaseRingElement, Error> {
        self.check_same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    /// Normalized difference.
    pub fn sub(&self, other: &BaseRingElement) -> Result<BaseRingElement, Error> {
        self.check_same_ring(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    /// Normalized product, with the family rewriting rules applied to a
    /// fixpoint for monomial quotients.
    pub fn mul(&self, other: &BaseRingElement) -> Result<BaseRingElement, Error> {
        self.check_same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> BaseRingElement {
        BaseRingElement { ring: self.ring.clone(), repr: neg_repr(&self.ring, &self.repr) }
    }

    /// Multiplicative inverse, or `None` when the element is not a unit.
    /// Non-units are a value, not an error.
    pub fn invert(&self) -> Option<BaseRingElement> {
        invert_repr(&self.ring, &self.repr)
            .map(|repr| BaseRingElement { ring: self.ring.clone(), repr })
    }

    pub(crate) fn add_unchecked(&self, other: &BaseRingElement) -> BaseRingElement {
        debug_assert_eq!(self.ring, other.ring);
        BaseRingElement {
            ring: self.ring.clone(),
            repr: add_repr(&self.ring, &self.repr, &other.repr),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &BaseRingElement) -> BaseRingElement {
        debug_assert_eq!(self.ring, other.ring);
        BaseRingElement {
            ring: self.ring.clone(),
            repr: mul_repr(&self.ring, &self.repr, &other.repr),
        }
    }

    // -- structural accessors ------------------------------------------------

    /// Integer value, for elements of `Integers`.
    pub fn integer_value(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Int(v) => Some(v),
            _ => None,
        }
    }

    /// Residue in `[0, n)`, for elements of `IntegersMod(n)`.
    pub fn residue_value(&self) -> Option<u64> {
        match &self.repr {
            Repr::Mod(v) => Some(*v),
            _ => None,
        }
    }

    /// Rational value, for elements of `Rationals`.
    pub fn rational_value(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(v) => Some(v),
            _ => None,
        }
    }

    /// Coordinates of a product-ring element.
    pub fn coords(&self) -> Option<Vec<BaseRingElement>> {
        match (&self.ring, &self.repr) {
            (RingSpec::Product { base, .. }, Repr::Tuple(t)) => Some(
                t.iter()
                    .map(|r| BaseRingElement { ring: (**base).clone(), repr: r.clone() })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Monomial-coefficient view of a monomial-family element, sorted.
    pub fn monomials(&self) -> Option<Vec<(Monomial, BigRational)>> {
        match &self.repr {
            Repr::Poly(p) => Some(p.iter().map(|(m, c)| (*m, c.clone())).collect()),
            _ => None,
        }
    }

    /// Coefficient of one monomial in a monomial-family element.
    pub fn monomial_coefficient(&self, m: Monomial) -> Option<BigRational> {
        match &self.repr {
            Repr::Poly(p) => Some(p.get(&m).cloned().unwrap_or_else(BigRational::zero)),
            _ => None,
        }
    }

    /// Build a monomial-family element from monomial-coefficient pairs.
    pub fn from_monomials(
        spec: &RingSpec,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<BaseRingElement, Error> {
        let family = match spec {
            RingSpec::Monomial(f) => *f,
            _ => return Err(Error::UnsupportedRing("monomial construction")),
        };
        let mut p = Poly::new();
        for (m, c) in terms {
            let valid = match (family, m) {
                (_, Monomial::One) => true,
                (MonomialFamily::Idempotent { rank }, Monomial::Gen(j)) => j < rank,
                (MonomialFamily::SquareZero { rank }, Monomial::Gen(j)) => j < rank,
                (MonomialFamily::MonomialSubring, Monomial::Xy { y, .. }) => y >= 1,
                _ => false,
            };
            if !valid {
                return Err(Error::NotAnElement("monomial outside the family"));
            }
            let entry = p.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                p.remove(&m);
            }
        }
        Ok(BaseRingElement { ring: spec.clone(), repr: Repr::Poly(p) })
    }
}

// ---------------------------------------------------------------------------
// ideal membership for the monomial families

/// Decides membership of `elem` in the ideal generated by `gens`, for the
/// built-in monomial families.
///
/// For the idempotent and square-zero families the ideal is a
/// finite-dimensional `Q`-subspace spanned by the generators together with
/// their products with basis monomials, so membership reduces to exact linear
/// algebra over `Q`. For the monomial subring the generators must be single
/// monomials; membership is then a per-monomial divisibility check inside the
/// subring.
pub fn ideal_membership(
    elem: &BaseRingElement,
    gens: &[BaseRingElement],
) -> Result<bool, Error> {
    if gens.is_empty() {
        return Err(Error::InvalidSpec("ideal membership needs at least one generator"));
    }
    let family = match elem.ring() {
        RingSpec::Monomial(f) => *f,
        _ => return Err(Error::UnsupportedRing("ideal membership")),
    };
    for g in gens {
        if g.ring() != elem.ring() {
            return Err(Error::RingMismatch);
        }
    }
    match family {
        MonomialFamily::Idempotent { rank } | MonomialFamily::SquareZero { rank } => {
            // span of { g, m·g : m basis monomial } in coordinates (1, gens)
            let dim = rank + 1;
            let coords = |e: &BaseRingElement| -> Vec<BigRational> {
                let mut v = alloc::vec![BigRational::zero(); dim];
                if let Repr::Poly(p) = &e.repr {
                    for (m, c) in p {
                        match m {
                            Monomial::One => v[0] = c.clone(),
                            Monomial::Gen(j) => v[j + 1] = c.clone(),
                            Monomial::Xy { .. } => unreachable!("xy monomial in finite family"),
                        }
                    }
                }
                v
            };
            let mut span = QSpan::new(dim);
            for g in gens {
                span.insert(coords(g));
                for j in 0..rank {
                    let m = BaseRingElement::basis(elem.ring(), Monomial::Gen(j));
                    span.insert(coords(&m.mul_unchecked(g)));
                }
            }
            Ok(span.contains(coords(elem)))
        }
        MonomialFamily::MonomialSubring => {
            let mut gen_monomials = Vec::new();
            for g in gens {
                match &g.repr {
                    Repr::Poly(p) if p.len() == 1 => {
                        gen_monomials.push(*p.keys().next().expect("nonempty"));
                    }
                    Repr::Poly(p) if p.is_empty() => {} // zero generates nothing
                    _ => {
                        return Err(Error::UnsupportedRing(
                            "ideal membership in the monomial subring needs monomial generators",
                        ))
                    }
                }
            }
            let divides = |g: Monomial, m: Monomial| -> bool {
                let (ga, gb) = match g {
                    Monomial::One => return true,
                    Monomial::Xy { x, y } => (x, y),
                    Monomial::Gen(_) => unreachable!(),
                };
                let (ma, mb) = match m {
                    Monomial::One => return false,
                    Monomial::Xy { x, y } => (x, y),
                    Monomial::Gen(_) => unreachable!(),
                };
                // quotient x^(ma-ga) y^(mb-gb) must itself lie in the subring
                (ma == ga && mb == gb) || (ma >= ga && mb > gb)
            };
            if let Repr::Poly(p) = &elem.repr {
                Ok(p.keys().all(|m| gen_monomials.iter().any(|g| divides(*g, *m))))
            } else {
                unreachable!("monomial element without poly repr")
            }
        }
    }
}

/// Incremental row-echelon span over `Q`, used for exact membership tests.
pub(crate) struct QSpan {
    dim: usize,
    rows: Vec<Vec<BigRational>>, // echelon rows, pivot normalized to 1
}

impl QSpan {
    pub(crate) fn new(dim: usize) -> QSpan {
        QSpan { dim, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        for row in &self.rows {
            let pivot = row.iter().position(|c| !c.is_zero()).expect("echelon row is nonzero");
            if !v[pivot].is_zero() {
                let factor = v[pivot].clone();
                for i in pivot..self.dim {
                    let delta = &factor * &row[i];
                    v[i] -= delta;
                }
            }
        }
        v
    }

    pub(crate) fn insert(&mut self, v: Vec<BigRational>) {
        let mut v = self.reduce(v);
        if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
            let lead = v[pivot].clone();
            for c in v.iter_mut() {
                *c /= lead.clone();
            }
            // back-substitute so the rows stay in reduced echelon form; a
            // single reduction pass is then order-independent
            for row in &mut self.rows {
                if !row[pivot].is_zero() {
                    let factor = row[pivot].clone();
                    for i in pivot..self.dim {
                        let delta = &factor * &v[i];
                        row[i] -= delta;
                    }
                }
            }
            self.rows.push(v);
            self.rows.sort_by_key(|row| {
                row.iter().position(|c| !c.is_zero()).expect("nonzero row")
            });
        }
    }

    pub(crate) fn contains(&self, v: Vec<BigRational>) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

// ---------------------------------------------------------------------------
// display

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::One => write!(f, "1"),
            Monomial::Gen(j) => write!(f, "g{j}"),
            Monomial::Xy { x, y } => {
                match (x, y) {
                    (0, 1) => write!(f, "y"),
                    (0, y) => write!(f, "y^{y}"),
                    (1, 1) => write!(f, "x*y"),
                    (1, y) => write!(f, "x*y^{y}"),
                    (x, 1) => write!(f, "x^{x}*y"),
                    (x, y) => write!(f, "x^{x}*y^{y}"),
                }
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "z"),
            RingSpec::IntegersMod(n) => write!(f, "zmod:{n}"),
            RingSpec::Rationals => write!(f, "q"),
            RingSpec::Product { base, copies } => write!(f, "prod:{base}^{copies}"),
            RingSpec::Monomial(MonomialFamily::Idempotent { rank }) => write!(f, "idem:{rank}"),
            RingSpec::Monomial(MonomialFamily::SquareZero { rank }) => write!(f, "sqzero:{rank}"),
            RingSpec::Monomial(MonomialFamily::MonomialSubring) => write!(f, "monsub"),
        }
    }
}

impl BaseRingElement {
    fn family_letter(&self) -> char {
        match self.ring {
            RingSpec::Monomial(MonomialFamily::Idempotent { .. }) => 'e',
            _ => 'x',
        }
    }
}

impl fmt::Display for BaseRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Int(v) => write!(f, "{v}"),
            Repr::Mod(v) => write!(f, "{v}"),
            Repr::Rat(v) => write!(f, "{v}"),
            Repr::Tuple(_) => {
                let coords = self.coords().expect("tuple repr has coords");
                write!(f, "(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Repr::Poly(p) => {
                if p.is_empty() {
                    return write!(f, "0");
                }
                let letter = self.family_letter();
                let mono = |m: &Monomial| -> alloc::string::String {
                    match m {
                        Monomial::Gen(j) => alloc::format!("{letter}{j}"),
                        other => alloc::format!("{other}"),
                    }
                };
                for (i, (m, c)) in p.iter().enumerate() {
                    let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
                    if i == 0 {
                        if sign == "-" {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {sign} ")?;
                    }
                    if *m == Monomial::One {
                        write!(f, "{mag}")?;
                    } else if mag.is_one() {
                        write!(f, "{}", mono(m))?;
                    } else {
                        write!(f, "{mag}*{}", mono(m))?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zmod(n: u64) -> RingSpec {
        RingSpec::integers_mod(n).unwrap()
    }

    fn int(spec: &RingSpec, v: i64) -> BaseRingElement {
        BaseRingElement::from_integer(spec, v)
    }

    fn rat(p: i64, q: i64) -> BaseRingElement {
        BaseRingElement::from_rational(&RingSpec::Rationals, &BigRational::new(p.into(), q.into()))
            .unwrap()
    }

    #[test]
    fn add_wraps_modulus() {
        let r = zmod(4);
        assert_eq!(int(&r, 3).add(&int(&r, 3)).unwrap(), int(&r, 2));
    }

    #[test]
    fn add_cancels_square_zero_basis() {
        let r = RingSpec::square_zero(2);
        let x = BaseRingElement::square_zero_generator(&r, 0).unwrap();
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn add_rationals() {
        assert_eq!(rat(1, 2).add(&rat(1, 3)).unwrap(), rat(5, 6));
    }

    #[test]
    fn idempotent_products() {
        let r = RingSpec::idempotent(4);
        let e1 = BaseRingElement::idempotent_generator(&r, 1).unwrap();
        let e2 = BaseRingElement::idempotent_generator(&r, 2).unwrap();
        assert_eq!(e1.mul(&e1).unwrap(), e1);
        assert!(e1.mul(&e2).unwrap().is_zero());
    }

    #[test]
    fn square_zero_products_vanish() {
        let r = RingSpec::square_zero(2);
        let x = BaseRingElement::square_zero_generator(&r, 0).unwrap();
        let y = BaseRingElement::square_zero_generator(&r, 1).unwrap();
        assert!(x.mul(&y).unwrap().is_zero());
    }

    #[test]
    fn inversion_examples() {
        let r = zmod(4);
        assert_eq!(int(&r, 3).invert(), Some(int(&r, 3)));
        assert_eq!(int(&r, 2).invert(), None);
        assert_eq!(rat(2, 3).invert(), Some(rat(3, 2)));
    }

    #[test]
    fn non_units_have_no_inverse_exhaustively() {
        for n in 2..=64u64 {
            let r = zmod(n);
            for a in 0..n {
                let u = int(&r, a as i64);
                match u.invert() {
                    Some(v) => assert!(u.mul(&v).unwrap().is_one(), "bad inverse mod {n}"),
                    None => {
                        for b in 0..n {
                            assert!(
                                !u.mul(&int(&r, b as i64)).unwrap().is_one(),
                                "missed inverse {b} of {a} mod {n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_inverse_roundtrip() {
        let r = RingSpec::idempotent(3);
        let e0 = BaseRingElement::idempotent_generator(&r, 0).unwrap();
        let u = BaseRingElement::from_integer(&r, 2).add(&e0).unwrap();
        let v = u.invert().expect("2 + e0 splits as (2, 3, 2, 2)");
        assert!(u.mul(&v).unwrap().is_one());
        // 1 - e0 has split coordinate 1 + (-1) = 0
        let w = BaseRingElement::one(&r).sub(&e0).unwrap();
        assert_eq!(w.invert(), None);
    }

    #[test]
    fn ideal_membership_examples() {
        let r = RingSpec::idempotent(4);
        let e = |j| BaseRingElement::idempotent_generator(&r, j).unwrap();
        assert!(!ideal_membership(&e(3), &[e(0), e(1)]).unwrap());
        assert!(ideal_membership(&e(1), &[e(1)]).unwrap());

        let s = RingSpec::square_zero(2);
        let x = BaseRingElement::square_zero_generator(&s, 0).unwrap();
        let y = BaseRingElement::square_zero_generator(&s, 1).unwrap();
        let xy = x.add(&y).unwrap();
        assert!(ideal_membership(&xy, &[x.clone(), y.clone()]).unwrap());
        assert!(!ideal_membership(&x, std::slice::from_ref(&y)).unwrap());
        // the ideal (x+y) is only the line Q(x+y): multiplying by the
        // augmentation ideal kills everything
        assert!(!ideal_membership(&x, &[xy]).unwrap());
    }

    #[test]
    fn ideal_membership_monomial_subring() {
        let m = |x, y| BaseRingElement::subring_monomial(x, y).unwrap();
        // x^5 y^2 = (x^3 y)(x^2 y)
        assert!(ideal_membership(&m(5, 2), &[m(3, 1)]).unwrap());
        // x^3 y not divisible by x^4 y
        assert!(!ideal_membership(&m(3, 1), &[m(4, 1)]).unwrap());
        // x^4 y / (x^3 y) = x, which is outside the subring
        assert!(!ideal_membership(&m(4, 1), &[m(3, 1)]).unwrap());
        let sum = m(3, 2).add(&m(0, 2)).unwrap();
        assert!(ideal_membership(&sum, &[m(0, 1)]).unwrap());
        // x^3 y / y = x^3 lies outside the subring
        assert!(!ideal_membership(&m(3, 1), &[m(0, 1)]).unwrap());
    }

    #[test]
    fn mismatched_rings_error() {
        let a = int(&RingSpec::Integers, 1);
        let b = int(&zmod(4), 1);
        assert_eq!(a.add(&b), Err(crate::Error::RingMismatch));
    }

    #[test]
    fn ideal_membership_rejects_unsupported_inputs() {
        let z = RingSpec::Integers;
        assert_eq!(
            ideal_membership(&int(&z, 2), &[int(&z, 2)]),
            Err(crate::Error::UnsupportedRing("ideal membership"))
        );
        let r = RingSpec::idempotent(2);
        let e0 = BaseRingElement::idempotent_generator(&r, 0).unwrap();
        assert_eq!(
            ideal_membership(&e0, &[]),
            Err(crate::Error::InvalidSpec("ideal membership needs at least one generator"))
        );
        // non-monomial generators in the subring of Q[x,y]
        let m = BaseRingElement::subring_monomial(1, 1).unwrap();
        let sum = m.add(&BaseRingElement::one(&RingSpec::monomial_subring())).unwrap();
        assert!(ideal_membership(&m, &[sum]).is_err());
    }

    #[test]
    fn ring_axioms_hold_on_random_triples() {
        let specs = [
            RingSpec::Integers,
            zmod(4),
            zmod(12),
            RingSpec::Rationals,
            RingSpec::product(RingSpec::Rationals, 3).unwrap(),
            RingSpec::idempotent(4),
            RingSpec::square_zero(3),
            RingSpec::monomial_subring(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for spec in &specs {
            for _ in 0..10_000 {
                let a = sample::random_element(spec, &mut rng);
                let b = sample::random_element(spec, &mut rng);
                let c = sample::random_element(spec, &mut rng);
                let ab = a.add_unchecked(&b);
                assert_eq!(ab.add_unchecked(&c), a.add_unchecked(&b.add_unchecked(&c)));
                assert_eq!(ab, b.add_unchecked(&a));
                let prod = a.mul_unchecked(&b);
                assert_eq!(prod.mul_unchecked(&c), a.mul_unchecked(&b.mul_unchecked(&c)));
                assert_eq!(prod, b.mul_unchecked(&a));
                assert_eq!(
                    a.mul_unchecked(&b.add_unchecked(&c)),
                    prod.add_unchecked(&a.mul_unchecked(&c))
                );
            }
        }
    }

    #[test]
    fn monomial_reduction_is_confluent() {
        // fold products of random basis monomials left-to-right and
        // right-to-left; the normal forms must agree
        let specs =
            [RingSpec::idempotent(4), RingSpec::square_zero(3), RingSpec::monomial_subring()];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for spec in &specs {
            for _ in 0..2_000 {
                let factors: Vec<BaseRingElement> =
                    (0..4).map(|_| sample::random_element(spec, &mut rng)).collect();
                let left = factors
                    .iter()
                    .fold(BaseRingElement::one(spec), |acc, f| acc.mul_unchecked(f));
                let right = factors
                    .iter()
                    .rev()
                    .fold(BaseRingElement::one(spec), |acc, f| f.mul_unchecked(&acc));
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn inverse_is_two_sided_on_random_units() {
        let specs = [zmod(9), RingSpec::Rationals, RingSpec::idempotent(3), RingSpec::square_zero(2)];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        for spec in &specs {
            let mut found = 0;
            for _ in 0..2_000 {
                let u = sample::random_element(spec, &mut rng);
                if let Some(v) = u.invert() {
                    found += 1;
                    assert!(u.mul(&v).unwrap().is_one());
                    assert!(v.mul(&u).unwrap().is_one());
                }
            }
            assert!(found > 0, "no units sampled for {spec}");
        }
    }
}
