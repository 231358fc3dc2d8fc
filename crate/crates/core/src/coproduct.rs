//! Two-factor ring coproducts in alternating-tensor normal form.
//!
//! An element is a scalar plus, for each alternating pattern over the two
//! factor letters, a list of elementary tensors; each tensor slot is a
//! single-letter series with zero constant term (a member of the factor's
//! augmentation ideal). Multiplication either concatenates tensors or merges
//! the boundary slots when the adjacent letters coincide, so products stay in
//! normal form. Evaluation into the two-letter series ring multiplies the
//! slots out; distinct patterns evaluate to series with disjoint supports,
//! which is what `decompose_by_support` exploits in the reverse direction.
//!
//! Tensor lists are deliberately not reduced to a canonical basis: equality
//! of the underlying tensor-product elements over a general base ring is
//! exactly the subtle point, so structural equality here means equality of
//! normal-form lists, and semantic comparisons go through evaluation or
//! through the certificates in [`crate::witnesses`].
//!
//! The same module houses closed-form families (finite-support tables,
//! monomial formulas `c·x^{αi+β}y^γ`, and basis families) together with the
//! coordinatewise multiplication maps on them, plus symbolic equality of the
//! resulting exponent forms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::freegroup::GroupRingElement;
use crate::ring::{BaseRingElement, Monomial, MonomialFamily, RingSpec};
use crate::series::{laurent_embed, Alphabet, NcSeries, Word};
use crate::Error;

/// Which subring of the single-letter series ring a coproduct factor is.
///
/// At a fixed truncation degree every variant admits every zero-constant
/// truncated series (polynomials in `1 + letter` already span all truncated
/// polynomials), so the distinction is structural: it governs how slots are
/// constructed and documented, not which truncated series pass a filter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubringKind {
    /// The full truncated series ring.
    FullSeries,
    /// The Laurent group ring generated by `(1 + letter)^{±1}`.
    LaurentGroupRing,
    /// Polynomials in the letter only.
    PolynomialOnly,
    /// Polynomials in `h = 1 + letter` plus negative powers of `h` with
    /// coefficients from the declared ideal window.
    IdealAugmented { ideal: Vec<BaseRingElement> },
}

/// One factor of a coproduct: a subring kind together with its letter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubringSpec {
    kind: SubringKind,
    letter: u8,
}

impl SubringSpec {
    pub fn new(kind: SubringKind, letter: u8) -> SubringSpec {
        SubringSpec { kind, letter }
    }

    pub fn full(letter: u8) -> SubringSpec {
        SubringSpec::new(SubringKind::FullSeries, letter)
    }

    pub fn laurent(letter: u8) -> SubringSpec {
        SubringSpec::new(SubringKind::LaurentGroupRing, letter)
    }

    pub fn polynomial(letter: u8) -> SubringSpec {
        SubringSpec::new(SubringKind::PolynomialOnly, letter)
    }

    pub fn ideal_augmented(letter: u8, ideal: Vec<BaseRingElement>) -> SubringSpec {
        SubringSpec::new(SubringKind::IdealAugmented { ideal }, letter)
    }

    pub fn kind(&self) -> &SubringKind {
        &self.kind
    }

    pub fn letter(&self) -> u8 {
        self.letter
    }

    /// Membership of a truncated series in this factor: the series must live
    /// over the factor's single letter. For slots of the augmentation ideal
    /// the constant term must additionally vanish; that check lives at the
    /// tensor constructor.
    pub fn admits(&self, series: &NcSeries) -> bool {
        series.alphabet() == &Alphabet::single(self.letter)
    }
}

/// A finite alternating string over the two factor letters, indexing one
/// summand of the coproduct's bimodule decomposition. Ordered graded-then-lex
/// like words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlternatingType {
    pattern: Vec<u8>,
}

impl AlternatingType {
    pub fn empty() -> AlternatingType {
        AlternatingType { pattern: Vec::new() }
    }

    pub fn new(pattern: impl IntoIterator<Item = u8>) -> Result<AlternatingType, Error> {
        let pattern: Vec<u8> = pattern.into_iter().collect();
        if pattern.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec("pattern letters must alternate"));
        }
        Ok(AlternatingType { pattern })
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }
}

impl Ord for AlternatingType {
    fn cmp(&self, other: &AlternatingType) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.pattern.cmp(&other.pattern))
    }
}

impl PartialOrd for AlternatingType {
    fn partial_cmp(&self, other: &AlternatingType) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AlternatingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.pattern {
            write!(f, "{}", *l as char)?;
        }
        Ok(())
    }
}

/// An element of the coproduct: scalar part plus per-type lists of
/// elementary tensors. Slots are single-letter, constant-term-free series at
/// the element's degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductElement {
    ring: RingSpec,
    degree: usize,
    left: SubringSpec,
    right: SubringSpec,
    scalar: BaseRingElement,
    components: BTreeMap<AlternatingType, Vec<Vec<NcSeries>>>,
}

impl CoproductElement {
    pub fn zero(
        ring: &RingSpec,
        degree: usize,
        left: SubringSpec,
        right: SubringSpec,
    ) -> CoproductElement {
        CoproductElement {
            ring: ring.clone(),
            degree,
            left,
            right,
            scalar: BaseRingElement::zero(ring),
            components: BTreeMap::new(),
        }
    }

    pub fn one(
        ring: &RingSpec,
        degree: usize,
        left: SubringSpec,
        right: SubringSpec,
    ) -> CoproductElement {
        CoproductElement::scalar_element(ring, degree, left, right, BaseRingElement::one(ring))
            .expect("scalar from the same ring")
    }

    pub fn scalar_element(
        ring: &RingSpec,
        degree: usize,
        left: SubringSpec,
        right: SubringSpec,
        scalar: BaseRingElement,
    ) -> Result<CoproductElement, Error> {
        if scalar.ring() != ring {
            return Err(Error::RingMismatch);
        }
        let mut out = CoproductElement::zero(ring, degree, left, right);
        out.scalar = scalar;
        Ok(out)
    }

    /// Append one elementary tensor. The pattern is read off the slot
    /// alphabets and must alternate; each slot must be a constant-term-free
    /// series at the element's degree over one of the two factor letters.
    /// Tensors with a zero slot are dropped, keeping the normal form.
    pub fn with_tensor(mut self, slots: Vec<NcSeries>) -> Result<CoproductElement, Error> {
        if slots.is_empty() {
            return Err(Error::InvalidSpec("an elementary tensor needs at least one slot"));
        }
        let mut pattern = Vec::with_capacity(slots.len());
        for slot in &slots {
            if slot.ring() != &self.ring {
                return Err(Error::RingMismatch);
            }
            if slot.degree() != self.degree {
                return Err(Error::CoproductSpecMismatch);
            }
            let letter = if self.left.admits(slot) {
                self.left.letter()
            } else if self.right.admits(slot) {
                self.right.letter()
            } else {
                return Err(Error::AlphabetMismatch);
            };
            if !slot.coefficient(&Word::empty()).is_zero() {
                return Err(Error::NotAnElement("tensor slot has a constant term"));
            }
            pattern.push(letter);
        }
        let tensor_type = AlternatingType::new(pattern)?;
        if slots.iter().any(NcSeries::is_zero) {
            return Ok(self);
        }
        self.components.entry(tensor_type).or_default().push(slots);
        Ok(self)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn left_spec(&self) -> &SubringSpec {
        &self.left
    }

    pub fn right_spec(&self) -> &SubringSpec {
        &self.right
    }

    pub fn scalar(&self) -> &BaseRingElement {
        &self.scalar
    }

    pub fn components(&self) -> &BTreeMap<AlternatingType, Vec<Vec<NcSeries>>> {
        &self.components
    }

    pub fn is_scalar(&self) -> bool {
        self.components.is_empty()
    }

    fn check_same_shape(&self, other: &CoproductElement) -> Result<(), Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.degree != other.degree || self.left != other.left || self.right != other.right {
            return Err(Error::CoproductSpecMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &CoproductElement) -> Result<CoproductElement, Error> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.scalar = out.scalar.add_unchecked(&other.scalar);
        for (t, tensors) in &other.components {
            out.components.entry(t.clone()).or_default().extend(tensors.iter().cloned());
        }
        Ok(out)
    }

    /// Multiply by a central scalar: scales the scalar part and the first
    /// slot of every tensor.
    pub fn scale(&self, scalar: &BaseRingElement) -> Result<CoproductElement, Error> {
        if scalar.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let mut out =
            CoproductElement::zero(&self.ring, self.degree, self.left.clone(), self.right.clone());
        out.scalar = self.scalar.mul_unchecked(scalar);
        for tensors in self.components.values() {
            for slots in tensors {
                let mut scaled = slots.clone();
                scaled[0] = scaled[0].scale(scalar)?;
                out = out.with_tensor(scaled)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> CoproductElement {
        let minus_one = BaseRingElement::one(&self.ring).neg();
        self.scale(&minus_one).expect("same ring")
    }

    pub fn sub(&self, other: &CoproductElement) -> Result<CoproductElement, Error> {
        self.add(&other.neg())
    }

    /// Coproduct multiplication: bilinear over tensors. Tensors whose
    /// boundary letters differ concatenate; equal boundary letters merge the
    /// two boundary slots by single-letter series multiplication (the product
    /// of constant-term-free series is again constant-term-free).
    pub fn mul(&self, other: &CoproductElement) -> Result<CoproductElement, Error> {
        self.check_same_shape(other)?;
        let mut out =
            CoproductElement::zero(&self.ring, self.degree, self.left.clone(), self.right.clone());
        out.scalar = self.scalar.mul_unchecked(&other.scalar);

        // scalar × tensor and tensor × scalar
        if !other.scalar.is_zero() {
            for tensors in self.components.values() {
                for slots in tensors {
                    let mut scaled = slots.clone();
                    let last = scaled.len() - 1;
                    scaled[last] = scaled[last].scale(&other.scalar)?;
                    out = out.with_tensor(scaled)?;
                }
            }
        }
        if !self.scalar.is_zero() {
            for tensors in other.components.values() {
                for slots in tensors {
                    let mut scaled = slots.clone();
                    scaled[0] = scaled[0].scale(&self.scalar)?;
                    out = out.with_tensor(scaled)?;
                }
            }
        }

        for (t1, tensors1) in &self.components {
            for (t2, tensors2) in &other.components {
                let merge = t1.pattern().last() == t2.pattern().first();
                for slots1 in tensors1 {
                    for slots2 in tensors2 {
                        let mut slots =
                            Vec::with_capacity(slots1.len() + slots2.len() - usize::from(merge));
                        if merge {
                            slots.extend_from_slice(&slots1[..slots1.len() - 1]);
                            let boundary =
                                slots1[slots1.len() - 1].mul(&slots2[0])?;
                            slots.push(boundary);
                            slots.extend_from_slice(&slots2[1..]);
                        } else {
                            slots.extend_from_slice(slots1);
                            slots.extend_from_slice(slots2);
                        }
                        out = out.with_tensor(slots)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The two-letter alphabet this element evaluates into.
    pub fn target_alphabet(&self) -> Alphabet {
        let (l, r) = (self.left.letter(), self.right.letter());
        Alphabet::new([l.min(r), l.max(r)]).expect("two distinct letters")
    }

    /// Evaluate into the two-letter series ring: each tensor becomes the
    /// product of its slots, summed with the scalar. A ring homomorphism by
    /// construction.
    pub fn evaluate(&self) -> NcSeries {
        let alphabet = self.target_alphabet();
        let mut out = NcSeries::constant(&self.ring, &alphabet, self.degree, &self.scalar);
        for tensors in self.components.values() {
            for slots in tensors {
                let mut product = NcSeries::one(&self.ring, &alphabet, self.degree);
                for slot in slots {
                    let embedded = slot.embed_into(&alphabet).expect("factor letter");
                    product = product.mul(&embedded).expect("same spec");
                }
                out = out.add(&product).expect("same spec");
            }
        }
        out
    }
}

/// Result of partitioning a series by the alternating block structure of its
/// support words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportDecomposition {
    /// Per-type series; absent types are zero.
    Components(BTreeMap<AlternatingType, NcSeries>),
    /// Some support word has more alternating blocks than the cap allows.
    NotInImage { word: Word },
}

/// Decompose a two-letter series by support: a word `a^{i1} b^{j1} a^{i2} …`
/// belongs to the type spelled by its block letters. Patterns longer than
/// `2·ncap + 1` report [`SupportDecomposition::NotInImage`] instead of
/// guessing.
pub fn decompose_by_support(u: &NcSeries, ncap: usize) -> SupportDecomposition {
    let max_pattern = 2 * ncap + 1;
    let mut parts: BTreeMap<AlternatingType, Vec<(Word, BaseRingElement)>> = BTreeMap::new();
    for (word, coeff) in u.terms() {
        let mut pattern: Vec<u8> = Vec::new();
        for l in word.letters() {
            if pattern.last() != Some(l) {
                pattern.push(*l);
            }
        }
        if pattern.len() > max_pattern {
            return SupportDecomposition::NotInImage { word: word.clone() };
        }
        let t = AlternatingType::new(pattern).expect("block letters alternate");
        parts.entry(t).or_default().push((word.clone(), coeff.clone()));
    }
    let components = parts
        .into_iter()
        .map(|(t, terms)| {
            let series = NcSeries::from_terms(u.ring(), u.alphabet(), u.degree(), terms)
                .expect("terms from a valid series");
            (t, series)
        })
        .collect();
    SupportDecomposition::Components(components)
}

/// Convert a rank-2 group-ring element into the coproduct: generator 0 maps
/// into the left factor and generator 1 into the right, each syllable
/// `g^e` becoming `1 + ((1+letter)^e - 1)`.
pub fn group_ring_to_coproduct(
    f: &GroupRingElement,
    degree: usize,
    left: &SubringSpec,
    right: &SubringSpec,
) -> Result<CoproductElement, Error> {
    if f.rank_bound() > 2 {
        return Err(Error::InvalidSpec("coproduct conversion needs rank at most 2"));
    }
    let ring = f.ring();
    let mut out = CoproductElement::zero(ring, degree, left.clone(), right.clone());
    for (word, coeff) in f.terms() {
        let mut image = CoproductElement::one(ring, degree, left.clone(), right.clone());
        for (gen, exp) in word.syllables() {
            let letter = if *gen == 0 { left.letter() } else { right.letter() };
            let power = laurent_embed(ring, letter, *exp, degree);
            let tail = power.sub(&NcSeries::one(ring, &Alphabet::single(letter), degree))?;
            let syllable = CoproductElement::one(ring, degree, left.clone(), right.clone())
                .with_tensor(alloc::vec![tail])?;
            image = image.mul(&syllable)?;
        }
        out = out.add(&image.scale(coeff)?)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// closed-form families and their multiplication maps

/// The closed-form monomial family `c · x^{α_1 i_1 + … + α_k i_k + β} y^γ`
/// over the monomial subring, one entry per multi-index `(i_1, …, i_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialFormula {
    pub coeff: BigRational,
    pub x_coeffs: Vec<u64>,
    pub x_const: u64,
    pub y_degree: u64,
}

/// Closed-form description of an element of a product `∏ R` indexed by
/// multi-indices over `ℕ`. Infinite products only ever appear through these
/// descriptions; there is no general infinite-product type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyForm {
    /// Finitely many nonzero entries, keyed by multi-index.
    FiniteSupport(BTreeMap<Vec<u64>, BaseRingElement>),
    /// A monomial formula valid for all indices.
    MonomialFormula(MonomialFormula),
    /// The family of ring basis elements selected by the index list
    /// (a window of `(e_j : j ∈ X)`); entry `i` is basis element
    /// `indices[i]`.
    BasisFamily(Vec<usize>),
}

/// A family expression: a ring, an index arity, and a closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyExpr {
    ring: RingSpec,
    arity: usize,
    form: FamilyForm,
}

impl FamilyExpr {
    pub fn zero(ring: &RingSpec, arity: usize) -> FamilyExpr {
        FamilyExpr { ring: ring.clone(), arity, form: FamilyForm::FiniteSupport(BTreeMap::new()) }
    }

    pub fn finite_support(
        ring: &RingSpec,
        arity: usize,
        entries: impl IntoIterator<Item = (Vec<u64>, BaseRingElement)>,
    ) -> Result<FamilyExpr, Error> {
        let mut map = BTreeMap::new();
        for (index, value) in entries {
            if index.len() != arity {
                return Err(Error::ArityMismatch { left: arity, right: index.len() });
            }
            if value.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !value.is_zero() {
                map.insert(index, value);
            }
        }
        Ok(FamilyExpr { ring: ring.clone(), arity, form: FamilyForm::FiniteSupport(map) })
    }

    /// The arity-1 family `(c · x^{αi+β} y^γ : i ∈ ℕ)`. A zero `y`-degree
    /// forces a constant formula (`α = β = 0`), since bare `x` powers lie
    /// outside the subring.
    pub fn monomial_formula(
        coeff: BigRational,
        x_coeff: u64,
        x_const: u64,
        y_degree: u64,
    ) -> Result<FamilyExpr, Error> {
        if y_degree == 0 && (x_coeff != 0 || x_const != 0) {
            return Err(Error::NotAnElement("x powers alone lie outside the subring"));
        }
        Ok(FamilyExpr {
            ring: RingSpec::monomial_subring(),
            arity: 1,
            form: FamilyForm::MonomialFormula(MonomialFormula {
                coeff,
                x_coeffs: alloc::vec![x_coeff],
                x_const,
                y_degree,
            }),
        })
    }

    /// The window of a basis family `(e_j : j ∈ X)` over an idempotent or
    /// square-zero ring: entry `i` is the basis element with index
    /// `indices[i]`.
    pub fn basis_family(ring: &RingSpec, indices: Vec<usize>) -> Result<FamilyExpr, Error> {
        let rank = match ring {
            RingSpec::Monomial(MonomialFamily::Idempotent { rank })
            | RingSpec::Monomial(MonomialFamily::SquareZero { rank }) => *rank,
            _ => return Err(Error::UnsupportedRing("basis family")),
        };
        if indices.iter().any(|j| *j >= rank) {
            return Err(Error::InvalidSpec("basis index outside the declared window"));
        }
        Ok(FamilyExpr { ring: ring.clone(), arity: 1, form: FamilyForm::BasisFamily(indices) })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn form(&self) -> &FamilyForm {
        &self.form
    }

    /// True when every entry is zero (for basis families: the empty window).
    pub fn is_zero_family(&self) -> bool {
        match &self.form {
            FamilyForm::FiniteSupport(map) => map.is_empty(),
            FamilyForm::MonomialFormula(formula) => formula.coeff.is_zero(),
            FamilyForm::BasisFamily(indices) => indices.is_empty(),
        }
    }

    /// Evaluate one entry at a concrete multi-index. Basis families are only
    /// materialized up to their window length.
    pub fn entry(&self, index: &[u64]) -> Result<BaseRingElement, Error> {
        if index.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: index.len() });
        }
        match &self.form {
            FamilyForm::FiniteSupport(map) => Ok(map
                .get(index)
                .cloned()
                .unwrap_or_else(|| BaseRingElement::zero(&self.ring))),
            FamilyForm::MonomialFormula(formula) => {
                if formula.coeff.is_zero() {
                    return Ok(BaseRingElement::zero(&self.ring));
                }
                let xdeg = formula
                    .x_coeffs
                    .iter()
                    .zip(index)
                    .map(|(a, i)| a * i)
                    .sum::<u64>()
                    + formula.x_const;
                let monomial = if formula.y_degree == 0 {
                    Monomial::One
                } else {
                    Monomial::Xy { x: xdeg, y: formula.y_degree }
                };
                BaseRingElement::from_monomials(
                    &self.ring,
                    [(monomial, formula.coeff.clone())],
                )
            }
            FamilyForm::BasisFamily(indices) => {
                let i = index[0] as usize;
                if i >= indices.len() {
                    return Err(Error::WindowTooSmall { required: i + 1, got: indices.len() });
                }
                let j = indices[i];
                match &self.ring {
                    RingSpec::Monomial(MonomialFamily::Idempotent { .. }) => {
                        BaseRingElement::idempotent_generator(&self.ring, j)
                    }
                    RingSpec::Monomial(MonomialFamily::SquareZero { .. }) => {
                        BaseRingElement::square_zero_generator(&self.ring, j)
                    }
                    _ => Err(Error::UnsupportedRing("basis family")),
                }
            }
        }
    }
}

/// A formal elementary tensor of families: the domain-side object of the
/// multiplication maps, kept uncollapsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTensor {
    factors: Vec<FamilyExpr>,
}

impl FamilyTensor {
    pub fn new(factors: Vec<FamilyExpr>) -> Result<FamilyTensor, Error> {
        if let Some(first) = factors.first() {
            if factors.iter().any(|f| f.ring() != first.ring()) {
                return Err(Error::RingMismatch);
            }
        }
        Ok(FamilyTensor { factors })
    }

    pub fn factors(&self) -> &[FamilyExpr] {
        &self.factors
    }

    /// The image under the coordinatewise multiplication map.
    pub fn image(&self) -> Result<FamilyExpr, Error> {
        beta_image(&self.factors)
    }
}

/// The coordinatewise multiplication map on families: the entry of the image
/// at `(i_1, …, i_n)` is the ring product of the factor entries. Monomial
/// formulas multiply symbolically (exponents add as affine forms in the
/// indices, so the result is valid for all indices); finite-support and
/// basis windows multiply entrywise. Mixing monomial formulas with the other
/// forms has no closed form here and reports a typed error.
pub fn beta_image(factors: &[FamilyExpr]) -> Result<FamilyExpr, Error> {
    let first = match factors.first() {
        Some(f) => f,
        None => return Err(Error::InvalidSpec("the multiplication map needs a factor")),
    };
    let ring = first.ring().clone();
    if factors.iter().any(|f| f.ring() != &ring) {
        return Err(Error::RingMismatch);
    }
    let arity = factors.iter().map(FamilyExpr::arity).sum();
    if factors.iter().any(FamilyExpr::is_zero_family) {
        return Ok(FamilyExpr::zero(&ring, arity));
    }
    let all_formulas = factors
        .iter()
        .all(|f| matches!(f.form(), FamilyForm::MonomialFormula(_)));
    if all_formulas {
        let mut coeff = BigRational::from_integer(1.into());
        let mut x_coeffs = Vec::with_capacity(arity);
        let mut x_const = 0u64;
        let mut y_degree = 0u64;
        for f in factors {
            if let FamilyForm::MonomialFormula(formula) = f.form() {
                coeff *= &formula.coeff;
                x_coeffs.extend_from_slice(&formula.x_coeffs);
                x_const += formula.x_const;
                y_degree += formula.y_degree;
            }
        }
        return Ok(FamilyExpr {
            ring,
            arity,
            form: FamilyForm::MonomialFormula(MonomialFormula {
                coeff,
                x_coeffs,
                x_const,
                y_degree,
            }),
        });
    }
    if factors.iter().any(|f| matches!(f.form(), FamilyForm::MonomialFormula(_))) {
        return Err(Error::UnsupportedFamilyCombination);
    }
    // concrete windows: enumerate the index grid
    let mut ranges: Vec<Vec<Vec<u64>>> = Vec::new();
    for f in factors {
        let indices: Vec<Vec<u64>> = match f.form() {
            FamilyForm::FiniteSupport(map) => map.keys().cloned().collect(),
            FamilyForm::BasisFamily(indices) => {
                (0..indices.len() as u64).map(|i| alloc::vec![i]).collect()
            }
            FamilyForm::MonomialFormula(_) => unreachable!("handled above"),
        };
        ranges.push(indices);
    }
    let mut entries: Vec<(Vec<u64>, BaseRingElement)> =
        alloc::vec![(Vec::new(), BaseRingElement::one(&ring))];
    for (f, range) in factors.iter().zip(&ranges) {
        let mut next = Vec::new();
        for (prefix, acc) in &entries {
            for index in range {
                let value = f.entry(index)?;
                let product = acc.mul_unchecked(&value);
                if product.is_zero() {
                    continue;
                }
                let mut key = prefix.clone();
                key.extend_from_slice(index);
                next.push((key, product));
            }
        }
        entries = next;
    }
    FamilyExpr::finite_support(&ring, arity, entries)
}

/// Equality of families: symbolic for monomial formulas (coefficient and
/// exponent affine forms agree, hence valid for all indices), entrywise for
/// finite and windowed forms.
pub fn family_equal(u: &FamilyExpr, v: &FamilyExpr) -> Result<bool, Error> {
    if u.ring() != v.ring() {
        return Err(Error::RingMismatch);
    }
    if u.arity() != v.arity() {
        return Err(Error::ArityMismatch { left: u.arity(), right: v.arity() });
    }
    if u.is_zero_family() || v.is_zero_family() {
        return Ok(u.is_zero_family() && v.is_zero_family());
    }
    match (u.form(), v.form()) {
        (FamilyForm::MonomialFormula(a), FamilyForm::MonomialFormula(b)) => Ok(a == b),
        (FamilyForm::FiniteSupport(a), FamilyForm::FiniteSupport(b)) => Ok(a == b),
        (FamilyForm::BasisFamily(a), FamilyForm::BasisFamily(b)) => Ok(a == b),
        (FamilyForm::MonomialFormula(_), _) | (_, FamilyForm::MonomialFormula(_)) => {
            // a nonzero formula has infinitely many nonzero entries; the
            // other concrete forms have finite windows
            Ok(false)
        }
        (FamilyForm::BasisFamily(indices), FamilyForm::FiniteSupport(map))
        | (FamilyForm::FiniteSupport(map), FamilyForm::BasisFamily(indices)) => {
            let basis = FamilyExpr::basis_family(u.ring(), indices.clone())?;
            if map.len() != indices.len() {
                return Ok(false);
            }
            for (key, value) in map {
                if key[0] >= indices.len() as u64 || &basis.entry(key)? != value {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::magnus;
    use crate::sample;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn full_ab() -> (SubringSpec, SubringSpec) {
        (SubringSpec::full(b'a'), SubringSpec::full(b'b'))
    }

    fn letter_slot(ring: &RingSpec, letter: u8, degree: usize) -> NcSeries {
        NcSeries::letter(ring, &Alphabet::single(letter), degree, letter)
    }

    fn word(s: &str) -> Word {
        Word::from_letters(s.bytes())
    }

    fn int_series(degree: usize, terms: &[(&str, i64)]) -> NcSeries {
        NcSeries::from_terms(
            &z(),
            &Alphabet::ab(),
            degree,
            terms.iter().map(|(w, c)| (word(w), BaseRingElement::from_integer(&z(), *c))),
        )
        .unwrap()
    }

    fn rational(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn boundary_merge_produces_aba_type() {
        let (left, right) = full_ab();
        let degree = 4;
        let a = letter_slot(&z(), b'a', degree);
        let b = letter_slot(&z(), b'b', degree);
        let u = CoproductElement::zero(&z(), degree, left.clone(), right.clone())
            .with_tensor(alloc::vec![a.clone(), b.clone()])
            .unwrap();
        let v = CoproductElement::zero(&z(), degree, left, right)
            .with_tensor(alloc::vec![b.clone(), a.clone()])
            .unwrap();
        let product = u.mul(&v).unwrap();
        let aba = AlternatingType::new(*b"aba").unwrap();
        assert_eq!(product.components().len(), 1);
        let tensors = &product.components()[&aba];
        assert_eq!(tensors.len(), 1);
        let b_squared = b.mul(&b).unwrap();
        assert_eq!(tensors[0], alloc::vec![a.clone(), b_squared, a.clone()]);
        // evaluation is multiplicative on this pair
        assert_eq!(
            product.evaluate(),
            u.evaluate().mul(&v.evaluate()).unwrap()
        );
    }

    #[test]
    fn scalar_one_is_neutral() {
        let (left, right) = full_ab();
        let one = CoproductElement::one(&z(), 3, left.clone(), right.clone());
        let u = CoproductElement::zero(&z(), 3, left, right)
            .with_tensor(alloc::vec![letter_slot(&z(), b'a', 3)])
            .unwrap();
        assert_eq!(one.mul(&u).unwrap(), u);
        assert_eq!(u.mul(&one).unwrap(), u);
    }

    #[test]
    fn same_letter_slots_merge() {
        let (left, right) = full_ab();
        let a = letter_slot(&z(), b'a', 3);
        let u = CoproductElement::zero(&z(), 3, left.clone(), right.clone())
            .with_tensor(alloc::vec![a.clone()])
            .unwrap();
        let product = u.mul(&u).unwrap();
        let a_type = AlternatingType::new(*b"a").unwrap();
        assert_eq!(product.components().len(), 1);
        assert_eq!(product.components()[&a_type], alloc::vec![alloc::vec![a.mul(&a).unwrap()]]);
    }

    #[test]
    fn evaluate_examples() {
        let (left, right) = full_ab();
        let scalar = CoproductElement::scalar_element(
            &z(),
            2,
            left.clone(),
            right.clone(),
            BaseRingElement::from_integer(&z(), 7),
        )
        .unwrap();
        assert_eq!(scalar.evaluate(), int_series(2, &[("", 7)]));

        let ab = CoproductElement::zero(&z(), 2, left.clone(), right.clone())
            .with_tensor(alloc::vec![letter_slot(&z(), b'a', 2), letter_slot(&z(), b'b', 2)])
            .unwrap();
        assert_eq!(ab.evaluate(), int_series(2, &[("ab", 1)]));

        let a_minus_a2 = letter_slot(&z(), b'a', 3)
            .sub(&letter_slot(&z(), b'a', 3).pow(2))
            .unwrap();
        let u = CoproductElement::zero(&z(), 3, left, right)
            .with_tensor(alloc::vec![a_minus_a2, letter_slot(&z(), b'b', 3)])
            .unwrap();
        assert_eq!(u.evaluate(), int_series(3, &[("ab", 1), ("aab", -1)]));
    }

    #[test]
    fn decompose_examples() {
        let u = int_series(2, &[("", 1), ("a", 1), ("ab", 1), ("ba", -1)]);
        match decompose_by_support(&u, 1) {
            SupportDecomposition::Components(parts) => {
                assert_eq!(parts.len(), 4);
                assert_eq!(parts[&AlternatingType::empty()], int_series(2, &[("", 1)]));
                assert_eq!(
                    parts[&AlternatingType::new(*b"a").unwrap()],
                    int_series(2, &[("a", 1)])
                );
                assert_eq!(
                    parts[&AlternatingType::new(*b"ab").unwrap()],
                    int_series(2, &[("ab", 1)])
                );
                assert_eq!(
                    parts[&AlternatingType::new(*b"ba").unwrap()],
                    int_series(2, &[("ba", -1)])
                );
            }
            other => panic!("unexpected {other:?}"),
        }

        let u = int_series(5, &[("aabbb", 1)]);
        match decompose_by_support(&u, 1) {
            SupportDecomposition::Components(parts) => {
                assert_eq!(parts.len(), 1);
                assert_eq!(
                    parts[&AlternatingType::new(*b"ab").unwrap()],
                    int_series(5, &[("aabbb", 1)])
                );
            }
            other => panic!("unexpected {other:?}"),
        }

        let u = int_series(3, &[("aba", 1)]);
        match decompose_by_support(&u, 1) {
            SupportDecomposition::Components(parts) => {
                assert_eq!(
                    parts[&AlternatingType::new(*b"aba").unwrap()],
                    int_series(3, &[("aba", 1)])
                );
            }
            other => panic!("unexpected {other:?}"),
        }

        // ababa needs ncap ≥ 2
        let u = int_series(5, &[("ababa", 1)]);
        assert_eq!(
            decompose_by_support(&u, 1),
            SupportDecomposition::NotInImage { word: word("ababa") }
        );
    }

    #[test]
    fn evaluation_is_multiplicative_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0301);
        // torsion and zero divisors in the coefficients must not disturb the
        // homomorphism, so sweep a few coefficient rings
        let rings = [z(), RingSpec::integers_mod(4).unwrap(), RingSpec::idempotent(3)];
        for ring in &rings {
            for kind in 0..4 {
                for _ in 0..100 {
                    let degree = rng.gen_range(1..=4);
                    let (left, right) = sample::subring_pair(ring, kind, &mut rng);
                    let u = sample::random_coproduct_element(ring, degree, &left, &right, &mut rng);
                    let v = sample::random_coproduct_element(ring, degree, &left, &right, &mut rng);
                    let lhs = u.mul(&v).unwrap().evaluate();
                    let rhs = u.evaluate().mul(&v.evaluate()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn distinct_types_have_disjoint_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0302);
        let ring = z();
        let (left, right) = full_ab();
        for _ in 0..500 {
            let degree = rng.gen_range(1..=4);
            let u = sample::random_coproduct_element(&ring, degree, &left, &right, &mut rng);
            let mut seen: BTreeMap<Word, AlternatingType> = BTreeMap::new();
            for (t, tensors) in u.components() {
                let mut pure =
                    CoproductElement::zero(&ring, degree, left.clone(), right.clone());
                for slots in tensors {
                    pure = pure.with_tensor(slots.clone()).unwrap();
                }
                for w in pure.evaluate().support() {
                    if let Some(previous) = seen.get(&w) {
                        panic!("word {w} appears under types {previous} and {t}");
                    }
                    seen.insert(w, t.clone());
                }
            }
        }
    }

    #[test]
    fn decomposition_inverts_evaluation_componentwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0303);
        let ring = z();
        for kind in 0..4 {
            for _ in 0..250 {
                let degree = rng.gen_range(1..=4);
                let (left, right) = sample::subring_pair(&ring, kind, &mut rng);
                let u = sample::random_coproduct_element(&ring, degree, &left, &right, &mut rng);
                let ncap = degree + 1;
                let decomposition = match decompose_by_support(&u.evaluate(), ncap) {
                    SupportDecomposition::Components(parts) => parts,
                    SupportDecomposition::NotInImage { word } => {
                        panic!("pattern of {word} exceeded the cap")
                    }
                };
                // expected: evaluate each pure-type component separately
                let mut expected: BTreeMap<AlternatingType, NcSeries> = BTreeMap::new();
                if !u.scalar().is_zero() {
                    expected.insert(
                        AlternatingType::empty(),
                        NcSeries::constant(&ring, &u.target_alphabet(), degree, u.scalar()),
                    );
                }
                for (t, tensors) in u.components() {
                    let mut pure =
                        CoproductElement::zero(&ring, degree, left.clone(), right.clone());
                    for slots in tensors {
                        pure = pure.with_tensor(slots.clone()).unwrap();
                    }
                    let series = pure.evaluate();
                    if !series.is_zero() {
                        expected.insert(t.clone(), series);
                    }
                }
                assert_eq!(decomposition, expected);
            }
        }
    }

    #[test]
    fn laurent_subring_evaluation_matches_magnus() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0304);
        let ring = z();
        let left = SubringSpec::laurent(b'a');
        let right = SubringSpec::laurent(b'b');
        for _ in 0..200 {
            let degree = rng.gen_range(0..=4);
            let f = sample::random_group_ring_element(&ring, 2, &mut rng);
            let element = group_ring_to_coproduct(&f, degree, &left, &right).unwrap();
            assert_eq!(element.evaluate(), magnus(&f, &Alphabet::ab(), degree).unwrap());
        }
    }

    #[test]
    fn beta_image_of_monomial_formulas_is_symbolic() {
        let m1 = FamilyExpr::monomial_formula(rational(1), 2, 1, 1).unwrap();
        let image = beta_image(&[m1.clone(), m1]).unwrap();
        match image.form() {
            FamilyForm::MonomialFormula(formula) => {
                assert_eq!(formula.coeff, rational(1));
                assert_eq!(formula.x_coeffs, alloc::vec![2, 2]);
                assert_eq!(formula.x_const, 2);
                assert_eq!(formula.y_degree, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        // spot-check one entry: (i,j) = (1,2) gives x^{2+4+2} y^2
        assert_eq!(
            image.entry(&[1, 2]).unwrap(),
            BaseRingElement::subring_monomial(8, 2).unwrap()
        );
    }

    #[test]
    fn beta_image_of_delta_families() {
        let q = RingSpec::Rationals;
        let one = BaseRingElement::one(&q);
        let delta = FamilyExpr::finite_support(&q, 1, [(alloc::vec![0], one.clone())]).unwrap();
        let image = beta_image(&[delta.clone(), delta]).unwrap();
        let expected =
            FamilyExpr::finite_support(&q, 2, [(alloc::vec![0, 0], one)]).unwrap();
        assert!(family_equal(&image, &expected).unwrap());
    }

    #[test]
    fn beta_image_of_idempotent_basis_is_diagonal() {
        let ring = RingSpec::idempotent(4);
        let family = FamilyExpr::basis_family(&ring, alloc::vec![0, 1, 2, 3]).unwrap();
        let image = beta_image(&[family.clone(), family]).unwrap();
        let expected = FamilyExpr::finite_support(
            &ring,
            2,
            (0..4u64).map(|i| {
                (
                    alloc::vec![i, i],
                    BaseRingElement::idempotent_generator(&ring, i as usize).unwrap(),
                )
            }),
        )
        .unwrap();
        assert!(family_equal(&image, &expected).unwrap());
    }

    #[test]
    fn family_equality_examples() {
        let via_m1_m2 = beta_image(&[
            FamilyExpr::monomial_formula(rational(1), 2, 1, 1).unwrap(),
            FamilyExpr::monomial_formula(rational(1), 2, 1, 1).unwrap(),
        ])
        .unwrap();
        let via_m3_m4 = beta_image(&[
            FamilyExpr::monomial_formula(rational(1), 2, 0, 1).unwrap(),
            FamilyExpr::monomial_formula(rational(1), 2, 2, 1).unwrap(),
        ])
        .unwrap();
        assert!(family_equal(&via_m1_m2, &via_m3_m4).unwrap());

        let even = FamilyExpr::monomial_formula(rational(1), 2, 0, 1).unwrap();
        let odd = FamilyExpr::monomial_formula(rational(1), 2, 1, 1).unwrap();
        assert!(!family_equal(&even, &odd).unwrap());

        let ring = RingSpec::monomial_subring();
        assert!(family_equal(&FamilyExpr::zero(&ring, 1), &FamilyExpr::zero(&ring, 1)).unwrap());
    }

    #[test]
    fn evaluation_components_match_family_products() {
        // under 𝔞 ≅ ∏ R (series coefficient of letter^{i+1} ↦ entry i), the
        // evaluation of a pure tensor computes the coordinatewise product
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0305);
        let ring = RingSpec::Rationals;
        let (left, right) = full_ab();
        for window in 1..=4usize {
            for _ in 0..100 {
                let degree = 2 * window;
                let slot_a = sample::random_subring_slot(&ring, &left, degree, &mut rng);
                let slot_b = sample::random_subring_slot(&ring, &right, degree, &mut rng);
                let fam_a = slot_family(&slot_a, b'a', window);
                let fam_b = slot_family(&slot_b, b'b', window);

                // n = 1: the single-slot tensor
                let single = CoproductElement::zero(&ring, degree, left.clone(), right.clone())
                    .with_tensor(alloc::vec![slot_a.clone()])
                    .unwrap()
                    .evaluate();
                for i in 0..window as u64 {
                    let w = Word::from_letters(std::iter::repeat_n(b'a', i as usize + 1));
                    assert_eq!(single.coefficient(&w), fam_a.entry(&[i]).unwrap());
                }

                // n = 2: the ab tensor against the two-family product
                let pair = CoproductElement::zero(&ring, degree, left.clone(), right.clone())
                    .with_tensor(alloc::vec![slot_a.clone(), slot_b.clone()])
                    .unwrap()
                    .evaluate();
                let image = beta_image(&[fam_a.clone(), fam_b.clone()]).unwrap();
                for i in 0..window as u64 {
                    for j in 0..window as u64 {
                        let w = Word::from_letters(
                            std::iter::repeat_n(b'a', i as usize + 1)
                                .chain(std::iter::repeat_n(b'b', j as usize + 1)),
                        );
                        assert_eq!(pair.coefficient(&w), image.entry(&[i, j]).unwrap());
                    }
                }
            }
        }
    }

    fn slot_family(slot: &NcSeries, letter: u8, window: usize) -> FamilyExpr {
        let entries = (0..window as u64).map(|i| {
            let w = Word::from_letters(std::iter::repeat_n(letter, i as usize + 1));
            (alloc::vec![i], slot.coefficient(&w))
        });
        FamilyExpr::finite_support(slot.ring(), 1, entries).unwrap()
    }

    #[test]
    fn shape_mismatches_are_typed() {
        let (left, right) = full_ab();
        let u = CoproductElement::one(&z(), 2, left.clone(), right.clone());
        let v = CoproductElement::one(&z(), 3, left.clone(), right.clone());
        assert_eq!(u.mul(&v), Err(Error::CoproductSpecMismatch));
        let w = CoproductElement::one(&z(), 2, SubringSpec::laurent(b'a'), right);
        assert_eq!(u.mul(&w), Err(Error::CoproductSpecMismatch));
    }
}
