//! Acceptance suite: one test per criterion, each printing a `PASS`/`FAIL`
//! line with its headline numbers. Run with
//! `cargo test --test acceptance -- --nocapture` to see every line.
//!
//! Everything here is exact arithmetic: no tolerances anywhere, a criterion
//! passes only with zero failing instances. Random inputs come from fixed
//! seeds, so runs are reproducible.

use std::time::{Duration, Instant};

use amalg_core::coproduct::{decompose_by_support, AlternatingType, CoproductElement, SupportDecomposition};
use amalg_core::freegroup::{
    fox_derivative, fox_strip, injectivity_sweep, magnus, order_compare, reduced_words, GroupWord, OrderResult,
};
use amalg_core::modlab::{
    flat_quotient_condition, flatness_check, matrix_chain_check, staircase_sequence,
    submodule_membership, ChainCondition, ChainOutcome, ContainmentOutcome, FlatnessVerdict,
    MatrixOverRing, Presentation, DEFAULT_BUDGET,
};
use amalg_core::sample;
use amalg_core::witnesses::run_all_default;
use amalg_core::{Alphabet, BaseRingElement, NcSeries, RingSpec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn conclude(number: u32, label: &str, ok: bool, detail: &str, elapsed: Duration) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {number} ({label}): {verdict} [{detail}; {elapsed:.2?}]");
    assert!(ok, "criterion {number} ({label}) failed: {detail}");
}

#[test]
fn criterion_1_magnus_injectivity_sweep() {
    let start = Instant::now();
    let report = injectivity_sweep(&RingSpec::Integers, 2, 4, 4).unwrap();
    let elapsed = start.elapsed();
    let ok = report.words == 161
        && report.all_distinct()
        && elapsed < Duration::from_secs(10);
    conclude(
        1,
        "magnus injectivity sweep",
        ok,
        &format!("{} words, {} distinct images", report.words, report.distinct),
        elapsed,
    );
}

#[test]
fn criterion_2_homomorphism_suites() {
    let start = Instant::now();
    let ring = RingSpec::Integers;
    let alphabet = Alphabet::ab();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    let mut failures = 0usize;

    for _ in 0..1_000 {
        let degree = rng.gen_range(0..=5);
        let f = sample::random_group_ring_element(&ring, 2, &mut rng);
        let g = sample::random_group_ring_element(&ring, 2, &mut rng);
        let lhs = magnus(&f.mul(&g).unwrap(), &alphabet, degree).unwrap();
        let rhs = magnus(&f, &alphabet, degree)
            .unwrap()
            .mul(&magnus(&g, &alphabet, degree).unwrap())
            .unwrap();
        if lhs != rhs {
            failures += 1;
        }
    }

    for kind in 0..4 {
        for _ in 0..250 {
            let degree = rng.gen_range(1..=4);
            let (left, right) = sample::subring_pair(&ring, kind, &mut rng);
            let u = sample::random_coproduct_element(&ring, degree, &left, &right, &mut rng);
            let v = sample::random_coproduct_element(&ring, degree, &left, &right, &mut rng);
            if u.mul(&v).unwrap().evaluate() != u.evaluate().mul(&v.evaluate()).unwrap() {
                failures += 1;
            }
        }
    }

    let specs = [
        RingSpec::Integers,
        RingSpec::integers_mod(4).unwrap(),
        RingSpec::Rationals,
        RingSpec::idempotent(3),
    ];
    for _ in 0..1_000 {
        let spec = &specs[rng.gen_range(0..specs.len())];
        let degree = rng.gen_range(0..=5);
        let u = sample::random_series(spec, &alphabet, degree, &mut rng);
        let v = sample::random_series(spec, &alphabet, degree, &mut rng);
        let w = sample::random_series(spec, &alphabet, degree, &mut rng);
        let left = u.mul(&v).unwrap().mul(&w).unwrap();
        let right = u.mul(&v.mul(&w).unwrap()).unwrap();
        if left != right {
            failures += 1;
        }
    }

    let elapsed = start.elapsed();
    let ok = failures == 0 && elapsed < Duration::from_secs(30);
    conclude(
        2,
        "homomorphism suites",
        ok,
        &format!("3 × 1000 random instances, {failures} failures"),
        elapsed,
    );
}

#[test]
fn criterion_3_fox_transport_identity() {
    let start = Instant::now();
    let ring = RingSpec::Integers;
    let alphabet = Alphabet::ab();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003);
    let mut failures = 0usize;
    for _ in 0..500 {
        let f = sample::random_group_ring_element(&ring, 2, &mut rng);
        let degree = rng.gen_range(1..=5);
        let (_, parts) = fox_strip(&magnus(&f, &alphabet, degree).unwrap());
        for (gen, part) in parts.iter().enumerate() {
            let derivative = magnus(&fox_derivative(&f, gen), &alphabet, degree - 1).unwrap();
            if *part != derivative {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    conclude(
        3,
        "fox transport identity",
        failures == 0,
        &format!("500 random elements, both strip parts, {failures} failures"),
        elapsed,
    );
}

#[test]
fn criterion_4_ordering_axioms() {
    let start = Instant::now();
    let words = reduced_words(2, 4);
    assert_eq!(words.len(), 161);
    let identity = GroupWord::identity();
    let cap = 16; // 4 × the maximum letter length of the enumerated words
    let product_cap = 32;
    let conjugate_cap = 48;

    let mut pairs = 0usize;
    let mut failures = 0usize;
    let mut undecided = 0usize;

    let record = |r: OrderResult, undecided: &mut usize| -> OrderResult {
        if matches!(r, OrderResult::Undecided { .. }) {
            *undecided += 1;
        }
        r
    };

    // totality and antisymmetry over all ordered pairs
    let mut table = vec![vec![OrderResult::Eq; words.len()]; words.len()];
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            pairs += 1;
            let r = record(order_compare(u, v, cap), &mut undecided);
            table[i][j] = r;
            let consistent = match r {
                OrderResult::Eq => u == v,
                OrderResult::Gt | OrderResult::Lt => u != v,
                OrderResult::Undecided { .. } => false,
            };
            if !consistent {
                failures += 1;
            }
        }
    }
    for (i, row) in table.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let flipped = match entry {
                OrderResult::Lt => OrderResult::Gt,
                OrderResult::Gt => OrderResult::Lt,
                other => *other,
            };
            if table[j][i] != flipped {
                failures += 1;
            }
        }
    }

    // the positive cone is closed under multiplication
    let positives: Vec<&GroupWord> = words
        .iter()
        .filter(|w| order_compare(w, &identity, cap) == OrderResult::Gt)
        .collect();
    for u in &positives {
        for v in &positives {
            let r = record(order_compare(&u.mul(v), &identity, product_cap), &mut undecided);
            if r != OrderResult::Gt {
                failures += 1;
            }
        }
    }

    // conjugation preserves positivity
    for u in &positives {
        for g in &words {
            let conjugate = g.mul(u).mul(&g.inverse());
            let r = record(order_compare(&conjugate, &identity, conjugate_cap), &mut undecided);
            if r != OrderResult::Gt {
                failures += 1;
            }
        }
    }

    // translation consistency on both sides, probe words h and k^{-1}
    let probes = [GroupWord::generator(0), GroupWord::generator(1).inverse()];
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if i >= j {
                continue;
            }
            let base = table[i][j];
            for w in &probes {
                let right = record(order_compare(&u.mul(w), &v.mul(w), product_cap), &mut undecided);
                let left = record(order_compare(&w.mul(u), &w.mul(v), product_cap), &mut undecided);
                if right != base || left != base {
                    failures += 1;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    let ok = failures == 0 && undecided == 0;
    conclude(
        4,
        "ordering axioms",
        ok,
        &format!(
            "{pairs} totality pairs over 161 words, {} cone pairs, {failures} failures, {undecided} undecided",
            positives.len() * positives.len()
        ),
        elapsed,
    );
}

#[test]
fn criterion_5_support_disjointness_roundtrip() {
    let start = Instant::now();
    let ring = RingSpec::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0005);
    let mut failures = 0usize;
    for kind in 0..4 {
        for _ in 0..1_000 {
            let degree = rng.gen_range(1..=4);
            let (left, right) = sample::subring_pair(&ring, kind, &mut rng);
            let u = sample::random_coproduct_element(&ring, degree, &left, &right, &mut rng);
            let decomposition = match decompose_by_support(&u.evaluate(), degree + 1) {
                SupportDecomposition::Components(parts) => parts,
                SupportDecomposition::NotInImage { .. } => {
                    failures += 1;
                    continue;
                }
            };
            let mut expected = std::collections::BTreeMap::new();
            if !u.scalar().is_zero() {
                expected.insert(
                    AlternatingType::empty(),
                    NcSeries::constant(&ring, &u.target_alphabet(), degree, u.scalar()),
                );
            }
            for (t, tensors) in u.components() {
                let mut pure = CoproductElement::zero(&ring, degree, left.clone(), right.clone());
                for slots in tensors {
                    pure = pure.with_tensor(slots.clone()).unwrap();
                }
                let series = pure.evaluate();
                if !series.is_zero() {
                    expected.insert(t.clone(), series);
                }
            }
            if decomposition != expected {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    conclude(
        5,
        "support disjointness and decomposition roundtrip",
        failures == 0,
        &format!("1000 elements × 4 subring specs, {failures} failures"),
        elapsed,
    );
}

#[test]
fn criterion_6_witness_suite() {
    let start = Instant::now();
    let reports = run_all_default().unwrap();
    let elapsed = start.elapsed();
    let all_passed = reports.len() == 5 && reports.iter().all(|r| r.passed());
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    let ok = all_passed && elapsed < Duration::from_secs(20);
    conclude(6, "witness suite", ok, &names.join(", ").to_string(), elapsed);
}

#[test]
fn criterion_7_flatness_oracle_agreement() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut failures = 0usize;
    for n in [4u64, 6, 8, 9, 12] {
        let ring = RingSpec::integers_mod(n).unwrap();
        for d in 0..n {
            let gens = MatrixOverRing::new(
                &ring,
                1,
                1,
                vec![BaseRingElement::from_integer(&ring, d as i64)],
            )
            .unwrap();
            let p = Presentation::new(gens);
            let flat = matches!(
                flatness_check(&p, DEFAULT_BUDGET).unwrap(),
                FlatnessVerdict::Flat { .. }
            );
            let mut contained_for_all_y = true;
            for y in 0..n {
                let y = MatrixOverRing::new(
                    &ring,
                    1,
                    1,
                    vec![BaseRingElement::from_integer(&ring, y as i64)],
                )
                .unwrap();
                if flat_quotient_condition(&p, &y, DEFAULT_BUDGET).unwrap()
                    != ContainmentOutcome::Holds
                {
                    contained_for_all_y = false;
                    break;
                }
            }
            checked += 1;
            if flat != contained_for_all_y {
                failures += 1;
            }
        }
    }

    // the two pinned instances
    let z4 = RingSpec::integers_mod(4).unwrap();
    let p4 = Presentation::new(
        MatrixOverRing::new(&z4, 1, 1, vec![BaseRingElement::from_integer(&z4, 2)]).unwrap(),
    );
    let not_flat = matches!(
        flatness_check(&p4, DEFAULT_BUDGET).unwrap(),
        FlatnessVerdict::NotFlat { .. }
    );

    let z6 = RingSpec::integers_mod(6).unwrap();
    let gens6 =
        MatrixOverRing::new(&z6, 1, 1, vec![BaseRingElement::from_integer(&z6, 3)]).unwrap();
    let p6 = Presentation::new(gens6.clone());
    let flat_with_certificate = match flatness_check(&p6, DEFAULT_BUDGET).unwrap() {
        FlatnessVerdict::Flat { witness } => {
            gens6.mul(&witness).unwrap() == gens6
                && witness
                    .row_vectors()
                    .all(|row| submodule_membership(&gens6, row).unwrap())
        }
        _ => false,
    };

    let elapsed = start.elapsed();
    let ok = failures == 0 && not_flat && flat_with_certificate;
    conclude(
        7,
        "flatness oracle agreement",
        ok,
        &format!("{checked} cyclic presentations, {failures} disagreements"),
        elapsed,
    );
}

#[test]
fn criterion_8_matrix_chain_prefix() {
    let start = Instant::now();
    let staircase = staircase_sequence(&RingSpec::Rationals, 8, 8).unwrap();
    let staircase_ok = matrix_chain_check(&staircase).unwrap() == ChainOutcome::ValidPrefix;

    let ring = RingSpec::product(RingSpec::Rationals, 8).unwrap();
    let idempotent = {
        let coords: Vec<BaseRingElement> = (0..8)
            .map(|i| {
                if i == 0 {
                    BaseRingElement::one(&RingSpec::Rationals)
                } else {
                    BaseRingElement::zero(&RingSpec::Rationals)
                }
            })
            .collect();
        let entry = BaseRingElement::from_coords(&ring, coords).unwrap();
        MatrixOverRing::new(&ring, 1, 1, vec![entry]).unwrap()
    };
    let rejected = matrix_chain_check(&[idempotent.clone(), idempotent]).unwrap()
        == ChainOutcome::Violation { index: 0, condition: ChainCondition::ReverseSeparation };

    let elapsed = start.elapsed();
    conclude(
        8,
        "matrix chain prefix",
        staircase_ok && rejected,
        "length-8 staircase valid, constant idempotent rejected at index 0",
        elapsed,
    );
}

#[test]
fn acceptance_word_count_formula() {
    // the word counts behind criterion 1: 4·3^(ℓ-1) reduced words of length ℓ
    let mut expected = 1usize;
    for len in 1..=4usize {
        expected += 4 * 3usize.pow(len as u32 - 1);
    }
    assert_eq!(expected, 161);
    assert_eq!(reduced_words(2, 4).len(), expected);
}
