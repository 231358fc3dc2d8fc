//! Explicit elements that multiply to zero but are nonzero in a tensor
//! product, with finite certificates for both halves.
//!
//! Each built-in witness packages a zero-image check (an exact ring or
//! series identity) and a nonzero certificate. Nonzero-ness of a tensor is
//! never decided by a general tensor-product algorithm; it is certified
//! either by a nonzero image in a residue quotient or by refuting candidate
//! finite decompositions at a window. At finite windows some of these
//! tensors genuinely become zero (the window ideal is finitely generated),
//! so the refutation form is the faithful one: every claimed decomposition
//! from the window fails against a fresh index.
//!
//! The built-in witnesses, under their stable report names:
//!
//! - `wd2-zp2`: `p ⊗ p` over `Z/p²` dies in the ring, survives in
//!   `I ⊗ J` (residue certificate), and its embedded series image vanishes.
//! - `wd2-qxy`: `x0 ⊗ x1 - x1 ⊗ x0` over the square-zero pair ring,
//!   certified the same way.
//! - `mu-idempotent`: the even/odd split of the idempotent basis family
//!   multiplies to the zero family, while every candidate finite
//!   decomposition is refuted by a fresh basis index.
//! - `gmb2`: over a square-zero ring, any claimed window decomposition of
//!   the tautological pair family misses a coordinate.
//! - `beta2-domain`: equal monomial-formula products over the monomial
//!   subring, with the quotient to a square-zero ring reducing nonzero-ness
//!   to the `gmb2` refutation.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coproduct::{
    beta_image, family_equal, CoproductElement, FamilyExpr, FamilyForm, SubringSpec,
};
use crate::ring::{ideal_membership, BaseRingElement, Monomial, RingSpec};
use crate::series::{laurent_embed, Alphabet, NcSeries};
use crate::Error;

pub const DEFAULT_IDEMPOTENT_WINDOW: usize = 6;
pub const DEFAULT_SQUARE_ZERO_WINDOW: usize = 4;
pub const DEFAULT_CANDIDATES: usize = 500;
pub const DEFAULT_EMBED_DEGREE: usize = 6;

/// Outcome of one witness run. A witness passes only when both halves
/// succeed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// Stable identifier of the witness.
    pub name: String,
    /// The zero-image half: an exact identity verified to hold.
    pub zero_image_verified: bool,
    /// The nonzero half: the certificate checked out.
    pub nonzero_verified: bool,
    /// Description of the certificate that was checked.
    pub nonzero_certificate: String,
    /// Finite window sizes used by the run.
    pub windows: Vec<usize>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.zero_image_verified && self.nonzero_verified
    }
}

// ---------------------------------------------------------------------------
// formal tensor expressions with scalar or family factors

/// One side of an elementary tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorFactor {
    Scalar(BaseRingElement),
    Family(FamilyExpr),
}

/// `coeff · (left ⊗ right)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSummand {
    pub coeff: BaseRingElement,
    pub left: TensorFactor,
    pub right: TensorFactor,
}

/// A finite sum of elementary tensors over one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorExpression {
    summands: Vec<TensorSummand>,
    ring: RingSpec,
}

impl TensorExpression {
    pub fn new(summands: Vec<TensorSummand>) -> Result<TensorExpression, Error> {
        let ring = match summands.first() {
            Some(s) => s.coeff.ring().clone(),
            None => return Err(Error::InvalidSpec("a tensor expression needs a summand")),
        };
        for s in &summands {
            if s.coeff.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            for factor in [&s.left, &s.right] {
                match factor {
                    TensorFactor::Scalar(v) if v.ring() == &ring => {}
                    TensorFactor::Family(f) if f.ring() == &ring => {}
                    _ => return Err(Error::RingMismatch),
                }
            }
        }
        Ok(TensorExpression { summands, ring })
    }

    pub fn summands(&self) -> &[TensorSummand] {
        &self.summands
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// Collapse the tensors into the ring: `Σ coeff·left·right`. Defined for
    /// scalar factors.
    pub fn multiply_out(&self) -> Result<BaseRingElement, Error> {
        let mut out = BaseRingElement::zero(&self.ring);
        for s in &self.summands {
            let (l, r) = match (&s.left, &s.right) {
                (TensorFactor::Scalar(l), TensorFactor::Scalar(r)) => (l, r),
                _ => return Err(Error::UnsupportedFamilyCombination),
            };
            out = out.add(&s.coeff.mul(l)?.mul(r)?)?;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// the ideal-pair witnesses (`wd2-zp2`, `wd2-qxy`)

/// Which concrete ideal pair the witness uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealTensorVariant {
    /// `R = Z/p²`, `I = J = pR`, element `p ⊗ p`.
    ModPrimeSquare { p: u64 },
    /// `R` the rank-2 square-zero ring, `I = J = (x0, x1)`, element
    /// `x0 ⊗ x1 - x1 ⊗ x0`.
    SquareZeroPair,
}

impl IdealTensorVariant {
    pub fn report_name(&self) -> &'static str {
        match self {
            IdealTensorVariant::ModPrimeSquare { .. } => "wd2-zp2",
            IdealTensorVariant::SquareZeroPair => "wd2-qxy",
        }
    }

    fn ring(&self) -> Result<RingSpec, Error> {
        match self {
            IdealTensorVariant::ModPrimeSquare { p } => {
                if *p < 2 || !is_prime(*p) {
                    return Err(Error::InvalidSpec("the modulus base must be prime"));
                }
                RingSpec::integers_mod(p * p)
            }
            IdealTensorVariant::SquareZeroPair => Ok(RingSpec::square_zero(2)),
        }
    }

    fn ideal_generators(&self, ring: &RingSpec) -> Result<Vec<BaseRingElement>, Error> {
        match self {
            IdealTensorVariant::ModPrimeSquare { p } => {
                Ok(alloc::vec![BaseRingElement::from_integer(ring, *p as i64)])
            }
            IdealTensorVariant::SquareZeroPair => Ok(alloc::vec![
                BaseRingElement::square_zero_generator(ring, 0)?,
                BaseRingElement::square_zero_generator(ring, 1)?,
            ]),
        }
    }

    /// The kernel element as a formal tensor expression.
    pub fn kernel_element(&self) -> Result<TensorExpression, Error> {
        let ring = self.ring()?;
        let one = BaseRingElement::one(&ring);
        match self {
            IdealTensorVariant::ModPrimeSquare { p } => {
                let p_elem = BaseRingElement::from_integer(&ring, *p as i64);
                TensorExpression::new(alloc::vec![TensorSummand {
                    coeff: one,
                    left: TensorFactor::Scalar(p_elem.clone()),
                    right: TensorFactor::Scalar(p_elem),
                }])
            }
            IdealTensorVariant::SquareZeroPair => {
                let x0 = BaseRingElement::square_zero_generator(&ring, 0)?;
                let x1 = BaseRingElement::square_zero_generator(&ring, 1)?;
                TensorExpression::new(alloc::vec![
                    TensorSummand {
                        coeff: one.clone(),
                        left: TensorFactor::Scalar(x0.clone()),
                        right: TensorFactor::Scalar(x1.clone()),
                    },
                    TensorSummand {
                        coeff: one.neg(),
                        left: TensorFactor::Scalar(x1),
                        right: TensorFactor::Scalar(x0),
                    },
                ])
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Image of a tensor expression in `(I/mI) ⊗_{R/m} (J/mJ)` for the variant's
/// maximal ideal `m`, as a coordinate vector over the residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueVector {
    /// Coordinates over `Z/p` on the basis `p̄ ⊗ p̄`.
    ModP { p: u64, coords: Vec<u64> },
    /// Coordinates over `Q` on the basis pairs `x̄_i ⊗ x̄_j`, row-major.
    Rational { coords: Vec<BigRational> },
}

impl ResidueVector {
    pub fn is_zero(&self) -> bool {
        match self {
            ResidueVector::ModP { coords, .. } => coords.iter().all(|c| *c == 0),
            ResidueVector::Rational { coords } => coords.iter().all(Zero::is_zero),
        }
    }

    fn render(&self) -> String {
        match self {
            ResidueVector::ModP { p, coords } => {
                format!("residue vector over Z/{p}: {coords:?}")
            }
            ResidueVector::Rational { coords } => {
                let rendered: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                format!("residue vector over Q: [{}]", rendered.join(", "))
            }
        }
    }
}

/// Compute the residue vector of a tensor expression whose factors lie in
/// the variant's ideals. The map sends `u ⊗ v` to `ū ⊗ v̄`; coefficients act
/// through their residue scalars, so the result is well defined on
/// rewriting-equivalent representatives.
pub fn residue_vector(
    variant: &IdealTensorVariant,
    expr: &TensorExpression,
) -> Result<ResidueVector, Error> {
    let ring = variant.ring()?;
    if expr.ring() != &ring {
        return Err(Error::RingMismatch);
    }
    match variant {
        IdealTensorVariant::ModPrimeSquare { p } => {
            let coordinate = |u: &BaseRingElement| -> Result<u64, Error> {
                let value = u.residue_value().expect("residue ring element");
                if !value.is_multiple_of(*p) {
                    return Err(Error::NotAnElement("tensor factor outside the ideal"));
                }
                Ok((value / p) % p)
            };
            let mut total = 0u64;
            for s in expr.summands() {
                let (l, r) = scalar_factors(s)?;
                let scaled_left = s.coeff.mul(l)?;
                total = (total + coordinate(&scaled_left)? * coordinate(r)?) % p;
            }
            Ok(ResidueVector::ModP { p: *p, coords: alloc::vec![total] })
        }
        IdealTensorVariant::SquareZeroPair => {
            let rank = 2;
            let coordinate = |u: &BaseRingElement| -> Result<Vec<BigRational>, Error> {
                let constant =
                    u.monomial_coefficient(Monomial::One).expect("square-zero element");
                if !constant.is_zero() {
                    return Err(Error::NotAnElement("tensor factor outside the ideal"));
                }
                Ok((0..rank)
                    .map(|j| u.monomial_coefficient(Monomial::Gen(j)).expect("element"))
                    .collect())
            };
            let mut coords = alloc::vec![BigRational::zero(); rank * rank];
            for s in expr.summands() {
                let (l, r) = scalar_factors(s)?;
                // the coefficient acts through its residue scalar
                let scalar = s
                    .coeff
                    .monomial_coefficient(Monomial::One)
                    .expect("square-zero element");
                let lc = coordinate(l)?;
                let rc = coordinate(r)?;
                for (i, li) in lc.iter().enumerate() {
                    for (j, rj) in rc.iter().enumerate() {
                        coords[i * rank + j] += &scalar * li * rj;
                    }
                }
            }
            Ok(ResidueVector::Rational { coords })
        }
    }
}

fn scalar_factors(s: &TensorSummand) -> Result<(&BaseRingElement, &BaseRingElement), Error> {
    match (&s.left, &s.right) {
        (TensorFactor::Scalar(l), TensorFactor::Scalar(r)) => Ok((l, r)),
        _ => Err(Error::UnsupportedFamilyCombination),
    }
}

/// Embed the kernel element into the coproduct of the two ideal-augmented
/// subrings as `Σ coeff · (h^{-1}·a·left) ⊗ (right·b·k^{-1})` and return it
/// together with the element's evaluation alphabet.
pub fn embedded_kernel_element(
    variant: &IdealTensorVariant,
    degree: usize,
) -> Result<CoproductElement, Error> {
    let ring = variant.ring()?;
    let ideal = variant.ideal_generators(&ring)?;
    let left = SubringSpec::ideal_augmented(b'a', ideal.clone());
    let right = SubringSpec::ideal_augmented(b'b', ideal);
    let expr = variant.kernel_element()?;

    let h_inv_a = laurent_embed(&ring, b'a', -1, degree)
        .mul(&NcSeries::letter(&ring, &Alphabet::single(b'a'), degree, b'a'))?;
    let b_k_inv = NcSeries::letter(&ring, &Alphabet::single(b'b'), degree, b'b')
        .mul(&laurent_embed(&ring, b'b', -1, degree))?;

    let mut out = CoproductElement::zero(&ring, degree, left.clone(), right.clone());
    for s in expr.summands() {
        let (l, r) = scalar_factors(s)?;
        let slot_a = h_inv_a.scale(&s.coeff.mul(l)?)?;
        let slot_b = b_k_inv.scale(r)?;
        out = out.with_tensor(alloc::vec![slot_a, slot_b])?;
    }
    Ok(out)
}

/// Run an ideal-pair witness: the zero half multiplies the tensor expression
/// into the ring and evaluates the embedded coproduct element to the zero
/// series; the nonzero half computes the residue vector and checks it is
/// nonzero.
pub fn ideal_tensor_witness(
    variant: &IdealTensorVariant,
    embed_degree: usize,
) -> Result<WitnessReport, Error> {
    let expr = variant.kernel_element()?;
    let collapses_to_zero = expr.multiply_out()?.is_zero();
    let embedded = embedded_kernel_element(variant, embed_degree)?;
    let embedded_image_zero = embedded.evaluate().is_zero();
    let residue = residue_vector(variant, &expr)?;
    Ok(WitnessReport {
        name: variant.report_name().to_string(),
        zero_image_verified: collapses_to_zero && embedded_image_zero,
        nonzero_verified: !residue.is_zero(),
        nonzero_certificate: residue.render(),
        windows: alloc::vec![embed_degree],
    })
}

// ---------------------------------------------------------------------------
// the idempotent family witness (`mu-idempotent`)

/// Deterministic RNG for candidate generation, derived from a label and the
/// window so reports are reproducible byte for byte.
fn candidate_rng(label: u64, window: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(label ^ ((window as u64) << 32))
}

/// The even/odd split of the idempotent basis family: the coordinatewise
/// product of the two halves is the zero family, while `candidates` random
/// finite decompositions of the even half are each refuted by a fresh even
/// index outside the candidate's support.
pub fn idempotent_family_witness(
    window: usize,
    candidates: usize,
) -> Result<WitnessReport, Error> {
    if window < 2 {
        return Err(Error::WindowTooSmall { required: 2, got: window });
    }
    let ring = RingSpec::idempotent(window);
    let evens: Vec<usize> = (0..window).step_by(2).collect();
    let odds: Vec<usize> = (1..window).step_by(2).collect();
    let m1 = FamilyExpr::basis_family(&ring, evens.clone())?;
    let m2 = FamilyExpr::basis_family(&ring, odds)?;
    let zero_half = beta_image(&[m1, m2])?.is_zero_family();

    let mut rng = candidate_rng(0x6d75_6964, window);
    let mut refuted = 0usize;
    for _ in 0..candidates {
        let generator_count = rng.gen_range(0..=3usize);
        let gens: Vec<BaseRingElement> = (0..generator_count)
            .map(|_| random_augmentation_element(&ring, &evens, &mut rng))
            .collect();
        if refute_window_decomposition(window, &gens)? {
            refuted += 1;
        }
    }
    Ok(WitnessReport {
        name: "mu-idempotent".to_string(),
        zero_image_verified: zero_half,
        nonzero_verified: refuted == candidates,
        nonzero_certificate: format!(
            "{refuted}/{candidates} candidate decompositions refuted by a fresh even index"
        ),
        windows: alloc::vec![window],
    })
}

/// A random element of the span of the selected basis indices.
fn random_augmentation_element(
    ring: &RingSpec,
    indices: &[usize],
    rng: &mut impl Rng,
) -> BaseRingElement {
    let mut out = BaseRingElement::zero(ring);
    for &j in indices {
        if rng.gen_bool(0.5) {
            let coeff = BigRational::from_integer(rng.gen_range(-4i64..=4).into());
            let term = BaseRingElement::from_monomials(ring, [(Monomial::Gen(j), coeff)])
                .expect("valid basis index");
            out = out.add(&term).expect("same ring");
        }
    }
    out
}

/// Refute one candidate decomposition: pick the smallest even index outside
/// every generator's support, lift the generators into a ring window
/// containing it, and verify the fresh basis element is not in their ideal.
/// The empty candidate is refuted by any nonzero basis element.
pub fn refute_window_decomposition(
    window: usize,
    gens: &[BaseRingElement],
) -> Result<bool, Error> {
    if gens.is_empty() {
        return Ok(true);
    }
    let mut touched: Vec<usize> = Vec::new();
    for g in gens {
        for (m, _) in g.monomials().ok_or(Error::UnsupportedRing("idempotent refutation"))? {
            if let Monomial::Gen(j) = m {
                touched.push(j);
            }
        }
    }
    let fresh = (0..).step_by(2).find(|j| !touched.contains(j)).expect("freshness");
    let extended_rank = window.max(fresh + 1);
    let extended = RingSpec::idempotent(extended_rank);
    let lifted: Vec<BaseRingElement> = gens
        .iter()
        .map(|g| {
            BaseRingElement::from_monomials(&extended, g.monomials().expect("monomials"))
                .expect("lift into the larger window")
        })
        .collect();
    let target = BaseRingElement::idempotent_generator(&extended, fresh)?;
    let nonzero_gens: Vec<BaseRingElement> =
        lifted.into_iter().filter(|g| !g.is_zero()).collect();
    if nonzero_gens.is_empty() {
        return Ok(true);
    }
    Ok(!ideal_membership(&target, &nonzero_gens)?)
}

// ---------------------------------------------------------------------------
// the square-zero refutation (`gmb2`)

/// An element of `R ⊗_Q R` for a square-zero ring `R`: rational coordinates
/// on the basis `(1 ∪ X) ⊗ (1 ∪ X)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairTensor {
    coords: alloc::collections::BTreeMap<(Monomial, Monomial), BigRational>,
}

impl PairTensor {
    pub fn new() -> PairTensor {
        PairTensor::default()
    }

    pub fn with_term(mut self, left: Monomial, right: Monomial, coeff: BigRational) -> PairTensor {
        if !coeff.is_zero() {
            let entry = self.coords.entry((left, right)).or_insert_with(BigRational::zero);
            *entry += coeff;
            if entry.is_zero() {
                self.coords.remove(&(left, right));
            }
        }
        self
    }

    pub fn coefficient(&self, left: Monomial, right: Monomial) -> BigRational {
        self.coords.get(&(left, right)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Left action of the basis element `x_j`: `x_j·(1 ⊗ m) = x_j ⊗ m`,
    /// everything with a nonunit left factor dies.
    fn left_mul_basis(&self, j: usize) -> PairTensor {
        let mut out = PairTensor::new();
        for ((l, r), c) in &self.coords {
            if *l == Monomial::One {
                out = out.with_term(Monomial::Gen(j), *r, c.clone());
            }
        }
        out
    }

    fn right_mul_basis(&self, j: usize) -> PairTensor {
        let mut out = PairTensor::new();
        for ((l, r), c) in &self.coords {
            if *r == Monomial::One {
                out = out.with_term(*l, Monomial::Gen(j), c.clone());
            }
        }
        out
    }

    fn add(&self, other: &PairTensor) -> PairTensor {
        let mut out = self.clone();
        for ((l, r), c) in &other.coords {
            out = out.with_term(*l, *r, c.clone());
        }
        out
    }
}

/// A candidate decomposition of the tautological pair family over a window:
/// finitely many excluded rows `X₀` and columns `Y₀`, with one window matrix
/// per excluded index. The candidate claims the target equals
/// `Σ x₀·A^{(x₀)} + Σ B^{(y₀)}·y₀`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SquareZeroCandidate {
    pub row_terms: Vec<(usize, Vec<Vec<PairTensor>>)>,
    pub col_terms: Vec<(usize, Vec<Vec<PairTensor>>)>,
}

impl SquareZeroCandidate {
    pub fn excluded_rows(&self) -> Vec<usize> {
        self.row_terms.iter().map(|(j, _)| *j).collect()
    }

    pub fn excluded_cols(&self) -> Vec<usize> {
        self.col_terms.iter().map(|(j, _)| *j).collect()
    }
}

/// Refute a candidate decomposition on the `window × window` grid: returns a
/// coordinate `(x, y)` with `x` outside the excluded rows and `y` outside
/// the excluded columns where the candidate's coefficient of `x ⊗ y` is zero
/// while the target's is one. Fails only when no such coordinate exists,
/// i.e. the window is too small for the exclusion sets.
pub fn square_zero_refutation(
    window: usize,
    candidate: &SquareZeroCandidate,
) -> Result<(usize, usize), Error> {
    let excluded_rows = candidate.excluded_rows();
    let excluded_cols = candidate.excluded_cols();
    for terms in candidate.row_terms.iter().chain(&candidate.col_terms) {
        if terms.1.len() != window || terms.1.iter().any(|row| row.len() != window) {
            return Err(Error::DimensionMismatch);
        }
    }
    let free_row = (0..window).find(|x| !excluded_rows.contains(x));
    let free_col = (0..window).find(|y| !excluded_cols.contains(y));
    let (x, y) = match (free_row, free_col) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::WindowTooSmall {
                required: excluded_rows.len().max(excluded_cols.len()) + 1,
                got: window,
            })
        }
    };

    let mut entry = PairTensor::new();
    for (x0, matrix) in &candidate.row_terms {
        entry = entry.add(&matrix[x][y].left_mul_basis(*x0));
    }
    for (y0, matrix) in &candidate.col_terms {
        entry = entry.add(&matrix[x][y].right_mul_basis(*y0));
    }
    let candidate_coeff = entry.coefficient(Monomial::Gen(x), Monomial::Gen(y));
    let target_coeff = BigRational::one(); // coefficient of x ⊗ y in the target entry x ⊗ y
    debug_assert!(candidate_coeff.is_zero());
    if candidate_coeff == target_coeff {
        return Err(Error::InvalidSpec("refutation coordinate did not separate"));
    }
    Ok((x, y))
}

fn random_pair_tensor(window: usize, rng: &mut impl Rng) -> PairTensor {
    let mut out = PairTensor::new();
    for _ in 0..rng.gen_range(0..=2) {
        let pick = |rng: &mut dyn rand::RngCore| -> Monomial {
            if rng.gen_range(0..3) == 0 {
                Monomial::One
            } else {
                Monomial::Gen(rng.gen_range(0..window))
            }
        };
        let l = pick(rng);
        let r = pick(rng);
        let coeff = BigRational::from_integer(rng.gen_range(-3i64..=3).into());
        out = out.with_term(l, r, coeff);
    }
    out
}

fn random_square_zero_candidate(window: usize, rng: &mut ChaCha8Rng) -> SquareZeroCandidate {
    let mut candidate = SquareZeroCandidate::default();
    let rows = rng.gen_range(0..window);
    let cols = rng.gen_range(0..window);
    for _ in 0..rows {
        let x0 = rng.gen_range(0..window);
        let m = (0..window)
            .map(|_| (0..window).map(|_| random_pair_tensor(window, rng)).collect())
            .collect();
        candidate.row_terms.push((x0, m));
    }
    for _ in 0..cols {
        let y0 = rng.gen_range(0..window);
        let m = (0..window)
            .map(|_| (0..window).map(|_| random_pair_tensor(window, rng)).collect())
            .collect();
        candidate.col_terms.push((y0, m));
    }
    candidate
}

/// Run the square-zero refutation against `candidates` random candidate
/// decompositions at the window.
pub fn square_zero_refutation_report(
    window: usize,
    candidates: usize,
) -> Result<WitnessReport, Error> {
    if window < 2 {
        return Err(Error::WindowTooSmall { required: 2, got: window });
    }
    // zero half: the tautological family multiplies to the zero family,
    // since all basis products vanish in a square-zero ring
    let ring = RingSpec::square_zero(window);
    let family = FamilyExpr::basis_family(&ring, (0..window).collect())?;
    let zero_half = beta_image(&[family.clone(), family])?.is_zero_family();

    let mut rng = candidate_rng(0x676d_6232, window);
    let mut refuted = 0usize;
    for _ in 0..candidates {
        let candidate = random_square_zero_candidate(window, &mut rng);
        if square_zero_refutation(window, &candidate).is_ok() {
            refuted += 1;
        }
    }
    Ok(WitnessReport {
        name: "gmb2".to_string(),
        zero_image_verified: zero_half,
        nonzero_verified: refuted == candidates,
        nonzero_certificate: format!(
            "{refuted}/{candidates} candidate window decompositions missed a coordinate"
        ),
        windows: alloc::vec![window],
    })
}

// ---------------------------------------------------------------------------
// the monomial-subring domain witness (`beta2-domain`)

/// Image of an even-step monomial formula family under the quotient that
/// kills even `x`-powers and all `y`-degrees above one: odd-exponent entries
/// map to the square-zero basis family, everything else to zero.
pub fn square_zero_quotient_family(
    f: &FamilyExpr,
    window: usize,
) -> Result<FamilyExpr, Error> {
    let target = RingSpec::square_zero(window);
    let formula = match f.form() {
        FamilyForm::MonomialFormula(formula) => formula,
        _ => return Err(Error::UnsupportedFamilyCombination),
    };
    if f.arity() != 1 {
        return Err(Error::ArityMismatch { left: 1, right: f.arity() });
    }
    if formula.coeff.is_zero() || formula.y_degree != 1 {
        return Ok(FamilyExpr::zero(&target, 1));
    }
    let step = formula.x_coeffs[0];
    if step % 2 != 0 {
        return Err(Error::UnsupportedFamilyCombination);
    }
    if formula.x_const % 2 == 0 {
        // even exponents throughout: everything lies in the killed ideal
        return Ok(FamilyExpr::zero(&target, 1));
    }
    if !formula.coeff.is_one() {
        // the witness only needs coefficient-one families
        return Err(Error::UnsupportedFamilyCombination);
    }
    let mut indices = Vec::new();
    let mut i = 0u64;
    loop {
        let exponent = formula.x_coeffs[0] * i + formula.x_const;
        let index = ((exponent - 1) / 2) as usize;
        if index >= window {
            break;
        }
        indices.push(index);
        i += 1;
    }
    FamilyExpr::basis_family(&target, indices)
}

/// The domain witness over the monomial subring: the two formula products
/// agree symbolically (`x^{2i+2j+2} y²` both ways), while the quotient to
/// the square-zero window sends one side to the tautological basis pair,
/// whose nonzero-ness is certified by the window refutation.
pub fn monomial_family_witness(
    window: usize,
    candidates: usize,
) -> Result<WitnessReport, Error> {
    let one = BigRational::one();
    let m1 = FamilyExpr::monomial_formula(one.clone(), 2, 1, 1)?;
    let m2 = m1.clone();
    let m3 = FamilyExpr::monomial_formula(one.clone(), 2, 0, 1)?;
    let m4 = FamilyExpr::monomial_formula(one, 2, 2, 1)?;
    let zero_half = family_equal(&beta_image(&[m1.clone(), m2.clone()])?, &beta_image(&[m3.clone(), m4.clone()])?)?;

    let q1 = square_zero_quotient_family(&m1, window)?;
    let q3 = square_zero_quotient_family(&m3, window)?;
    let q4 = square_zero_quotient_family(&m4, window)?;
    let quotient_shape_ok = !q1.is_zero_family() && q3.is_zero_family() && q4.is_zero_family();

    let refutation = square_zero_refutation_report(window, candidates)?;
    Ok(WitnessReport {
        name: "beta2-domain".to_string(),
        zero_image_verified: zero_half,
        nonzero_verified: quotient_shape_ok && refutation.nonzero_verified,
        nonzero_certificate: format!(
            "quotient sends the even families to zero and the odd family to the basis window; {}",
            refutation.nonzero_certificate
        ),
        windows: alloc::vec![window],
    })
}

/// Run every built-in witness at its default windows, in report-name order.
pub fn run_all_default() -> Result<Vec<WitnessReport>, Error> {
    Ok(alloc::vec![
        ideal_tensor_witness(&IdealTensorVariant::ModPrimeSquare { p: 2 }, DEFAULT_EMBED_DEGREE)?,
        ideal_tensor_witness(&IdealTensorVariant::SquareZeroPair, DEFAULT_EMBED_DEGREE)?,
        idempotent_family_witness(DEFAULT_IDEMPOTENT_WINDOW, DEFAULT_CANDIDATES)?,
        square_zero_refutation_report(DEFAULT_SQUARE_ZERO_WINDOW, DEFAULT_CANDIDATES)?,
        monomial_family_witness(DEFAULT_SQUARE_ZERO_WINDOW, DEFAULT_CANDIDATES)?,
    ])
}
