//! Acceptance gate for the whole workspace: one test per release criterion,
//! so the harness output reads as a per-criterion pass/fail ledger. Each test
//! is self-contained and asserts exact equality; nothing here is tolerant.
//!
//! Expected single-core runtime is a few minutes, dominated by the two
//! exhaustive cross-validation sweeps (criteria 3 and 5).

use std::time::{Duration, Instant};

use num_bigint::BigInt;

use twobridge::conjecture::verify_conjecture;
use twobridge::cyclotomic::{CycInt, CycLaurent};
use twobridge::families::{
    bundled_appendix, cluster_shift, genus_one_fraction, genus_one_sigma, genus_one_twisted,
    odd_prime_divisors, recursion_q, root_fractions, torus_twisted, verify_family_point,
};
use twobridge::laurent::IntLaurent;
use twobridge::oracle::{
    denominator, shifted_generator_matrix, symbolic_det, twisted_alexander_oracle,
};
use twobridge::product::{alexander, d_e_polynomials, twisted_alexander_product};
use twobridge::two_bridge::{
    check_sigma_properties, sigma_sequence, vertex_labeling, TwoBridgeFraction,
};

fn frac(p: i64, q: i64) -> TwoBridgeFraction {
    TwoBridgeFraction::new(p, q).unwrap()
}

fn poly(terms: &[(i64, i64)]) -> IntLaurent {
    IntLaurent::from_terms(terms.iter().copied())
}

/// Cyclotomic Laurent polynomial from (t-exponent, lambda-exponent, coefficient)
/// triples, reduced mod the ell-th cyclotomic polynomial as it is built.
fn cyc(ell: u32, terms: &[(i64, i64, i64)]) -> CycLaurent {
    let mut p = CycLaurent::zero(ell);
    for &(t_exp, lambda_exp, c) in terms {
        let coeff =
            &CycInt::lambda_pow(ell, lambda_exp) * &CycInt::from_integer(ell, BigInt::from(c));
        p.add_term(t_exp, coeff);
    }
    p
}

fn canonical(p: &IntLaurent, ell: u32) -> IntLaurent {
    p.canonical_unit_normalize(ell).unwrap()
}

fn one_plus_t() -> IntLaurent {
    poly(&[(0, 1), (1, 1)])
}

#[test]
fn criterion_1_reference_fixtures() {
    assert_eq!(
        alexander(frac(11, 19)),
        poly(&[(-1, -1), (0, 5), (1, -7), (2, 5), (3, -1)])
    );
    assert_eq!(alexander(frac(5, 9)), poly(&[(-1, -2), (0, 5), (1, -2)]));
    assert_eq!(
        alexander(frac(5, 39)),
        poly(&[
            (-1, -2),
            (0, 5),
            (1, -5),
            (2, 5),
            (3, -5),
            (4, 5),
            (5, -5),
            (6, 5),
            (7, -2)
        ])
    );

    let (d, e) = d_e_polynomials(frac(5, 9), 3).unwrap();
    assert_eq!(d, cyc(3, &[(-1, 0, -1), (1, 1, -1)]));
    assert_eq!(e, cyc(3, &[(0, 1, -1)]));

    // The (5,39) coefficient polynomials, with every sign pinned by the
    // q-direction recursion from the (5,9) seed.
    let (d, e) = d_e_polynomials(frac(5, 39), 3).unwrap();
    assert_eq!(
        d,
        cyc(
            3,
            &[
                (-1, 0, -1),
                (1, 1, -1),
                (3, 0, 1),
                (3, 1, 1),
                (5, 0, -1),
                (7, 1, -1)
            ]
        )
    );
    assert_eq!(
        e,
        cyc(3, &[(0, 1, -1), (2, 0, 1), (2, 1, 1), (4, 0, -1), (6, 1, -1)])
    );

    let (d, e) = d_e_polynomials(frac(5, 13), 13).unwrap();
    assert_eq!(
        d,
        cyc(
            13,
            &[
                (-1, 3, 1),
                (-1, -5, 1),
                (-1, 6, 1),
                (1, 1, 1),
                (1, -2, 1),
                (1, -4, 1)
            ]
        )
    );
    assert_eq!(
        e,
        cyc(
            13,
            &[
                (-2, -5, 1),
                (0, 0, 1),
                (0, -2, 1),
                (0, 3, 1),
                (0, -4, 1),
                (0, 6, 1),
                (2, 1, 1)
            ]
        )
    );
}

#[test]
fn criterion_2_worked_example_5_13() {
    let start = Instant::now();

    let result = twisted_alexander_product(frac(5, 13), 13).unwrap();
    let core = poly(&[(6, 1), (5, -2), (3, 1), (1, -2), (0, 1)]);
    let f = (&one_plus_t().pow(6) * &core.pow(2)).shifted(-12);

    let report = verify_conjecture(&result, &f).unwrap();
    assert!(report.form_holds, "factorization clause failed");
    assert!(report.congruence_holds, "congruence clause failed");
    assert!(report.strong, "clauses hold but with different units");

    let target = &f * &f.subst_neg_t();
    assert_eq!(canonical(&report.g, 13), canonical(&target, 13));

    assert!(
        start.elapsed() < Duration::from_secs(1),
        "worked example took {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_3_oracle_equivalence_sweep() {
    let mut compared = 0usize;
    for q in (3..=63i64).step_by(2) {
        for ell in odd_prime_divisors(q) {
            if ell > 13 {
                continue;
            }
            for p in (1..q).step_by(2) {
                let Ok(fraction) = TwoBridgeFraction::new(p, q) else {
                    continue;
                };
                let product = twisted_alexander_product(fraction, ell).unwrap();
                let product_canonical = canonical(&product.twisted, ell);
                for m in 1..ell {
                    let oracle = twisted_alexander_oracle(fraction, ell, m).unwrap();
                    assert_eq!(
                        canonical(&oracle.twisted, ell),
                        product_canonical,
                        "pipelines disagree for {fraction}, ell = {ell}, m = {m}"
                    );
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 1000, "sweep shrank unexpectedly: {compared} comparisons");
}

#[test]
fn criterion_4_denominator_identity() {
    for ell in [3u32, 5, 7, 11, 13] {
        let closed_form = denominator(ell);
        for m in 1..ell {
            let det = symbolic_det(&shifted_generator_matrix(ell, m).unwrap());
            assert_eq!(det, closed_form, "denominator mismatch at ell = {ell}, m = {m}");
        }
    }
}

#[test]
fn criterion_5_closed_form_families() {
    // Torus knots: the closed form against the general pipeline, for every
    // odd q <= 63 and every odd prime ell dividing q, with no upper bound
    // on ell (q = 59 and q = 61 exercise the largest cyclotomic rings).
    for q in (3..=63i64).step_by(2) {
        for ell in odd_prime_divisors(q) {
            let closed = torus_twisted(q, ell).unwrap();
            let direct = twisted_alexander_product(frac(1, q), ell).unwrap();
            assert_eq!(
                canonical(&closed, ell),
                canonical(&direct.twisted, ell),
                "torus mismatch at q = {q}, ell = {ell}"
            );
        }
    }

    // Genus-one knots, both signs, all 4rs -+ 1 <= 63, all prime ell | q:
    // segment patterns and the closed form against the general pipeline.
    for sign in [-1i8, 1] {
        for r in 1..=16i64 {
            for s in 1..=16i64 {
                let q = 4 * r * s + i64::from(sign);
                if q > 63 {
                    continue;
                }
                let fraction = genus_one_fraction(r, s, sign).unwrap();
                assert_eq!(fraction.q(), q);
                assert_eq!(
                    genus_one_sigma(r, s, sign).unwrap(),
                    sigma_sequence(fraction),
                    "sigma pattern mismatch at ({r},{s},{sign})"
                );
                for ell in odd_prime_divisors(q) {
                    let closed = genus_one_twisted(r, s, sign, ell).unwrap();
                    let direct = twisted_alexander_product(fraction, ell).unwrap();
                    assert_eq!(
                        canonical(&closed, ell),
                        canonical(&direct.twisted, ell),
                        "genus-one mismatch at ({r},{s},{sign}), ell = {ell}"
                    );
                }
            }
        }
    }
}

#[test]
fn criterion_6_q_direction_recursion() {
    let mut checked = 0usize;
    for p in [1i64, 3, 5, 7] {
        for ell in [3u32, 5, 7] {
            for root in root_fractions(p, ell).unwrap() {
                for k in 0..=5u32 {
                    let (d, e, delta) = recursion_q(root, ell, k).unwrap();
                    let target = frac(p, root.q() + 2 * i64::from(ell) * i64::from(k) * p);
                    let (d_direct, e_direct) = d_e_polynomials(target, ell).unwrap();
                    assert_eq!(d, d_direct, "d mismatch at {root} + {k} steps, ell = {ell}");
                    assert_eq!(e, e_direct, "e mismatch at {root} + {k} steps, ell = {ell}");
                    assert_eq!(
                        delta,
                        alexander(target),
                        "Delta mismatch at {root} + {k} steps, ell = {ell}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 162, "root enumeration shrank unexpectedly");
}

#[test]
fn criterion_7_cluster_shift() {
    let mut coprime_roots = 0usize;
    let mut restricted_roots = 0usize;
    for row in bundled_appendix() {
        for j in [1u32, 2] {
            let report = cluster_shift(row.fraction, row.ell, j).unwrap();
            assert!(
                report.delta_congruent,
                "Delta not congruent mod {} for {} at j = {j}",
                row.ell, row.fraction
            );
            assert!(
                report.twisted_congruent,
                "twisted not congruent mod {} for {} at j = {j}",
                row.ell, row.fraction
            );
            if report.coefficient_coprime {
                assert_eq!(
                    report.exact_ratio,
                    Some(true),
                    "exact ratio failed for {} at j = {j}",
                    row.fraction
                );
                coprime_roots += 1;
            } else {
                assert_eq!(report.exact_ratio, None);
                restricted_roots += 1;
            }
        }
    }
    // Both regimes must actually occur: 20 rows have gcd(a1, ell) = 1 and 4
    // (the j-restricted ones) do not, each checked at two j values.
    assert_eq!(coprime_roots, 40);
    assert_eq!(restricted_roots, 8);
}

#[test]
fn criterion_8_appendix_sweep() {
    let mut points = 0usize;
    for row in bundled_appendix() {
        let jmax = if row.j_zero_only { 0 } else { 2 };
        for j in 0..=jmax {
            for k in 0..=3u32 {
                let report = verify_family_point(row, j, k).unwrap();
                assert!(
                    report.strong,
                    "strong form failed for root {} ell = {} at (k = {k}, j = {j}): \
                     form {:?}, congruence {:?}",
                    row.fraction, row.ell, report.form_unit, report.congruence_unit
                );
                assert!(report.g_is_even);
                assert!(report.unit_used.is_some());
                points += 1;
            }
        }
    }
    assert_eq!(points, 256, "family point enumeration shrank unexpectedly");
}

/// Minimal deterministic PRNG for the randomized normalization battery.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % ((hi - lo + 1) as u64)) as i64
    }
}

#[test]
fn criterion_9_property_suites() {
    // Structural properties of every sigma sequence with q <= 199.
    let mut fractions = 0usize;
    for q in (3..=199i64).step_by(2) {
        for p in (1..q).step_by(2) {
            let Ok(fraction) = TwoBridgeFraction::new(p, q) else {
                continue;
            };
            let report = check_sigma_properties(fraction);
            assert!(report.all_pass(), "structural check failed for {fraction}");
            fractions += 1;
        }
    }
    assert!(fractions > 4000, "sweep shrank unexpectedly: {fractions}");

    // Cyclotomic norm identities: the product of (1 - lambda^i) over all
    // nonzero residues is ell, the product of (1 + lambda^i) is 1.
    for ell in [3u32, 5, 7, 11, 13] {
        let mut minus = CycLaurent::one(ell);
        let mut plus = CycLaurent::one(ell);
        for i in 1..i64::from(ell) {
            minus = &minus * &cyc(ell, &[(0, 0, 1), (0, i, -1)]);
            plus = &plus * &cyc(ell, &[(0, 0, 1), (0, i, 1)]);
        }
        assert_eq!(minus, cyc(ell, &[(0, 0, i64::from(ell))]));
        assert_eq!(plus, CycLaurent::one(ell));
    }

    // Canonical normalization: idempotent, and constant on the orbit of
    // multiplication by +/- t^(r * ell), over a deterministic random battery.
    let mut rng = XorShift(0x9e3779b97f4a7c15);
    for _ in 0..200 {
        let mut p = IntLaurent::zero();
        for _ in 0..rng.range(1, 7) {
            p.add_term(rng.range(-15, 15), BigInt::from(rng.range(-50, 50)));
        }
        if p.is_zero() {
            continue;
        }
        for ell in [3u32, 5, 7, 11, 13] {
            let base = canonical(&p, ell);
            assert_eq!(canonical(&base, ell), base);
            for r in -2..=2i64 {
                let shifted = p.shifted(r * i64::from(ell));
                assert_eq!(canonical(&shifted, ell), base);
                assert_eq!(canonical(&-&shifted, ell), base);
            }
        }
    }

    // Reading d and e off the labeled graph agrees with the coefficient
    // formulas for every fraction in the sweep with an admissible coloring.
    let mut labeled = 0usize;
    for q in (3..=199i64).step_by(2) {
        for ell in odd_prime_divisors(q) {
            if ell > 13 {
                continue;
            }
            for p in (1..q).step_by(2) {
                let Ok(fraction) = TwoBridgeFraction::new(p, q) else {
                    continue;
                };
                let direct = d_e_polynomials(fraction, ell).unwrap();
                let read_off = vertex_labeling(fraction, ell).read_off();
                assert_eq!(direct, read_off, "labeling mismatch for {fraction}, ell = {ell}");
                labeled += 1;
            }
        }
    }
    assert!(labeled > 1000, "labeling sweep shrank unexpectedly: {labeled}");
}
