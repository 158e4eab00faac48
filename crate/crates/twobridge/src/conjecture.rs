//! Shape verification for twisted polynomials.
//!
//! A twisted polynomial is conjectured to factor as
//! Delta/(t - 1) * f(t) * f(-t) for an integer Laurent polynomial f that is
//! congruent to (Delta/(1 + t))^((ell-1)/2) mod ell. Neither side of either
//! clause is canonically normalized: the twisted polynomial is defined up to
//! +/- t^(r*ell) and the Alexander polynomial up to +/- t^r, so each clause
//! is checked up to a unit +/- t^(r*ell) and the witness unit is reported.
//!
//! The two clauses hold in the strong form when a single unit witnesses both
//! simultaneously, and in the weak form when each clause needs its own unit.
//! Every verification here reports which form it found.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::laurent::IntLaurent;
use crate::product::TwistedResult;
use crate::two_bridge::TwoBridgeFraction;
use crate::{Error, Result};

/// A comparison unit +/- t^(r*ell).
///
/// `exponent` stores r*ell itself, so applying the unit never needs to know
/// ell. Two units are the same witness iff they compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Unit {
    /// +1 or -1.
    pub sign: i8,
    /// The exponent r*ell of the t power, always a multiple of ell.
    pub exponent: i64,
}

impl Unit {
    /// Multiply a polynomial by this unit.
    pub fn apply(&self, p: &IntLaurent) -> IntLaurent {
        let shifted = p.shifted(self.exponent);
        if self.sign < 0 {
            -&shifted
        } else {
            shifted
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "+" };
        write!(out, "{sign}t^{}", self.exponent)
    }
}

/// How far the unit search is allowed to reach: |r| <= 2 + span/ell.
///
/// A unit shifting further than the exponent spread of the compared values
/// cannot produce overlapping supports, so this window loses nothing.
fn unit_window(span: i64, ell: u32) -> i64 {
    2 + span / i64::from(ell)
}

/// The quotient g with g * Delta = twisted * (t - 1), exactly.
///
/// The conjectured shape says g = f(t) * f(-t); this extracts g without
/// knowing f. Inexact division means the shape already fails at the
/// divisibility of the twisted polynomial by Delta/(t - 1).
pub fn quotient_g(result: &TwistedResult) -> Result<IntLaurent> {
    if result.delta.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let t_minus_1 = IntLaurent::from_terms([(0i64, -1), (1, 1)]);
    (&result.twisted * &t_minus_1).exact_div(&result.delta)
}

/// First clause: does g equal f(t) * f(-t) up to a unit +/- t^(r*ell)?
///
/// The candidate shift is forced by the lowest exponents of the two sides,
/// so no search loop is needed; the shift merely has to be a multiple of
/// ell inside the window, with one of the two signs matching.
pub fn check_form(g: &IntLaurent, f: &IntLaurent, ell: u32) -> (bool, Option<Unit>) {
    let target = f * &f.subst_neg_t();
    if g.is_zero() || target.is_zero() {
        return (g.is_zero() && target.is_zero(), None);
    }
    let ell_i = i64::from(ell);
    let shift = g.min_exp().expect("nonzero") - target.min_exp().expect("nonzero");
    if shift % ell_i != 0 || (shift / ell_i).abs() > unit_window(g.span(), ell) {
        return (false, None);
    }
    for sign in [1i8, -1] {
        let unit = Unit {
            sign,
            exponent: shift,
        };
        if unit.apply(&target) == *g {
            return (true, Some(unit));
        }
    }
    (false, None)
}

/// Exact division by 1 + t in the mod-ell coefficient ring, lowest term
/// first. Returns None when a nonzero remainder survives.
fn div_one_plus_t_mod_ell(p: &IntLaurent, ell: u32) -> Option<IntLaurent> {
    let mut rem = p.mod_ell_reduce(ell);
    let mut quot = IntLaurent::zero();
    let modulus = BigInt::from(ell);
    while !rem.is_zero() {
        let lo = rem.min_exp().expect("nonzero");
        let hi = rem.max_exp().expect("nonzero");
        if lo > hi - 1 {
            return None;
        }
        let c = rem.coeff(lo);
        rem.add_term(lo, -&c);
        rem.add_term(lo + 1, -&c);
        rem = rem.mod_ell_reduce(ell);
        quot.add_term(lo, c.mod_floor(&modulus));
    }
    Some(quot)
}

/// Raise a mod-ell reduced polynomial to a power, reducing along the way.
fn pow_mod_ell(p: &IntLaurent, n: u32, ell: u32) -> IntLaurent {
    let mut out = IntLaurent::one();
    for _ in 0..n {
        out = (&out * p).mod_ell_reduce(ell);
    }
    out
}

/// Second clause: is f congruent to (delta/(1 + t))^((ell-1)/2) mod ell,
/// up to a unit +/- t^(r*ell)?
///
/// The division delta/(1 + t) happens in the mod-ell coefficient ring; its
/// failure is a distinct verdict (`NotDivisibleModEll`) rather than a plain
/// false, because the conjecture presumes that divisibility.
pub fn check_congruence(f: &IntLaurent, delta: &IntLaurent, ell: u32) -> Result<(bool, Option<Unit>)> {
    let h = div_one_plus_t_mod_ell(delta, ell).ok_or(Error::NotDivisibleModEll { ell })?;
    let target = pow_mod_ell(&h, (ell - 1) / 2, ell);
    let f_red = f.mod_ell_reduce(ell);
    if f_red.is_zero() || target.is_zero() {
        return Ok((f_red.is_zero() && target.is_zero(), None));
    }
    let ell_i = i64::from(ell);
    let shift = f_red.min_exp().expect("nonzero") - target.min_exp().expect("nonzero");
    if shift % ell_i != 0 || (shift / ell_i).abs() > unit_window(f_red.span().max(target.span()), ell) {
        return Ok((false, None));
    }
    for sign in [1i8, -1] {
        let unit = Unit {
            sign,
            exponent: shift,
        };
        if unit.apply(&target).mod_ell_reduce(ell) == f_red {
            return Ok((true, Some(unit)));
        }
    }
    Ok((false, None))
}

/// Whether g is invariant under t -> -t.
///
/// Any product f(t) * f(-t) is, so this is a necessary consequence of the
/// first clause and serves as an independent cross-check on it.
pub fn g_evenness(g: &IntLaurent) -> bool {
    g.subst_neg_t() == *g
}

/// Everything one verification run learned about one knot and one f.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub fraction: TwoBridgeFraction,
    pub ell: u32,
    /// The Alexander polynomial, in its alternating-sum form.
    pub delta: IntLaurent,
    /// The twisted polynomial, in its product-quotient form.
    pub twisted: IntLaurent,
    /// The f(t) under test.
    pub f: IntLaurent,
    /// The quotient twisted * (t - 1) / delta.
    pub g: IntLaurent,
    pub form_holds: bool,
    pub form_unit: Option<Unit>,
    pub congruence_holds: bool,
    pub congruence_unit: Option<Unit>,
    pub g_is_even: bool,
    /// True when one unit witnesses both clauses at once.
    pub strong: bool,
    /// The shared witness when `strong`.
    pub unit_used: Option<Unit>,
}

impl ConjectureReport {
    /// True when both clauses hold, under any units.
    pub fn weak(&self) -> bool {
        self.form_holds && self.congruence_holds
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |held: bool, unit: Option<Unit>| match (held, unit) {
            (true, Some(u)) => format!("holds (unit {u})"),
            (true, None) => "holds".to_string(),
            (false, _) => "FAILS".to_string(),
        };
        writeln!(out, "knot {} with ell = {}", self.fraction, self.ell)?;
        writeln!(out, "  g = {}", self.g)?;
        writeln!(
            out,
            "  factorization clause: {}",
            verdict(self.form_holds, self.form_unit)
        )?;
        writeln!(
            out,
            "  congruence clause:    {}",
            verdict(self.congruence_holds, self.congruence_unit)
        )?;
        writeln!(out, "  g(-t) = g(t):         {}", self.g_is_even)?;
        write!(
            out,
            "  strong form:          {}",
            if self.strong { "holds" } else { "FAILS" }
        )
    }
}

/// Run both clauses against a computed twisted polynomial and a given f.
///
/// Strong means the same unit witnesses both clauses; the units are unique
/// when they exist (the compared rings have no zero divisors), so this is
/// simply equality of the two witnesses.
pub fn verify_conjecture(result: &TwistedResult, f: &IntLaurent) -> Result<ConjectureReport> {
    let g = quotient_g(result)?;
    let (form_holds, form_unit) = check_form(&g, f, result.ell);
    let (congruence_holds, congruence_unit) = check_congruence(f, &result.delta, result.ell)?;
    let g_is_even = g_evenness(&g);
    let strong = form_holds && congruence_holds && form_unit.is_some() && form_unit == congruence_unit;
    Ok(ConjectureReport {
        fraction: result.fraction,
        ell: result.ell,
        delta: result.delta.clone(),
        twisted: result.twisted.clone(),
        f: f.clone(),
        g,
        form_holds,
        form_unit,
        congruence_holds,
        congruence_unit,
        g_is_even,
        strong,
        unit_used: if strong { form_unit } else { None },
    })
}

/// Shared check used by the verifiers: a passing form clause must leave a
/// literally zero difference once the witness unit is applied.
pub fn reassert_form(g: &IntLaurent, f: &IntLaurent, unit: Unit) -> bool {
    let target = f * &f.subst_neg_t();
    (g - &unit.apply(&target)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::twisted_alexander_product;

    fn frac(p: i64, q: i64) -> TwoBridgeFraction {
        TwoBridgeFraction::new(p, q).unwrap()
    }

    fn one_plus_t() -> IntLaurent {
        IntLaurent::from_terms([(0i64, 1), (1, 1)])
    }

    #[test]
    fn quotient_for_trefoil() {
        let result = twisted_alexander_product(frac(1, 3), 3).unwrap();
        let g = quotient_g(&result).unwrap();
        assert_eq!(g, IntLaurent::from_terms([(0i64, 1), (2, -1)]));
        assert!(g_evenness(&g));
    }

    #[test]
    fn form_with_trivial_unit() {
        let g = IntLaurent::from_terms([(0i64, 1), (2, -1)]);
        let (ok, unit) = check_form(&g, &one_plus_t(), 3);
        assert!(ok);
        let unit = unit.unwrap();
        assert_eq!(
            unit,
            Unit {
                sign: 1,
                exponent: 0
            }
        );
        assert!(reassert_form(&g, &one_plus_t(), unit));
    }

    #[test]
    fn form_absorbs_a_unit() {
        let base = IntLaurent::from_terms([(0i64, 1), (2, -1)]);
        let g = -&base.shifted(3);
        let (ok, unit) = check_form(&g, &one_plus_t(), 3);
        assert!(ok);
        assert_eq!(
            unit.unwrap(),
            Unit {
                sign: -1,
                exponent: 3
            }
        );
    }

    #[test]
    fn form_rejects_wrong_shape() {
        let g = one_plus_t();
        let (ok, unit) = check_form(&g, &one_plus_t(), 3);
        assert!(!ok);
        assert!(unit.is_none());

        let shifted_off_lattice = IntLaurent::from_terms([(1i64, 1), (3, -1)]);
        let (ok, _) = check_form(&shifted_off_lattice, &one_plus_t(), 3);
        assert!(!ok);
    }

    #[test]
    fn congruence_for_five_ninths_family_seed() {
        // Delta of K_{5/9} reduces to t^-1 (1 + t)^2 mod 3, so h = t^-1 (1+t)
        // and f = t^-1 + 1 matches with the trivial unit.
        let delta = IntLaurent::from_terms([(-1i64, -2), (0, 5), (1, -2)]);
        let f = IntLaurent::from_terms([(-1i64, 1), (0, 1)]);
        let (ok, unit) = check_congruence(&f, &delta, 3).unwrap();
        assert!(ok);
        assert_eq!(
            unit.unwrap(),
            Unit {
                sign: 1,
                exponent: 0
            }
        );
    }

    #[test]
    fn congruence_distinguishes_indivisible_delta() {
        // Delta = 1 is not divisible by 1 + t in any mod-ell ring.
        let err = check_congruence(&IntLaurent::one(), &IntLaurent::one(), 3).unwrap_err();
        assert_eq!(err, Error::NotDivisibleModEll { ell: 3 });
    }

    #[test]
    fn congruence_finds_negative_unit() {
        let delta = IntLaurent::from_terms([(-1i64, -2), (0, 5), (1, -2)]);
        let f = IntLaurent::from_terms([(2i64, -1), (3, -1)]);
        let (ok, unit) = check_congruence(&f, &delta, 3).unwrap();
        assert!(ok);
        assert_eq!(
            unit.unwrap(),
            Unit {
                sign: -1,
                exponent: 3
            }
        );
    }

    #[test]
    fn evenness_examples() {
        assert!(g_evenness(&IntLaurent::from_terms([(0i64, 1), (2, -1)])));
        assert!(!g_evenness(&one_plus_t()));
        assert!(g_evenness(&IntLaurent::zero()));
    }

    #[test]
    fn mod_ell_division_by_one_plus_t() {
        // (1 + t)(1 + 2t + t^3) = 1 + 3t + 2t^2 + t^3 + t^4 == 1 + 2t^2 + t^3 + t^4 mod 3.
        let p = IntLaurent::from_terms([(0i64, 1), (2, 2), (3, 1), (4, 1)]);
        let q = div_one_plus_t_mod_ell(&p, 3).unwrap();
        assert_eq!(q, IntLaurent::from_terms([(0i64, 1), (1, 2), (3, 1)]));

        assert!(div_one_plus_t_mod_ell(&IntLaurent::one(), 3).is_none());
        assert!(div_one_plus_t_mod_ell(&IntLaurent::zero(), 3).unwrap().is_zero());
    }

    #[test]
    fn trefoil_report_is_strong() {
        // For the trefoil with f = 1 + t both clauses hold with the
        // trivial unit: g = 1 - t^2 and Delta = 1 - t + t^2 == (1+t)^2 mod 3.
        let result = twisted_alexander_product(frac(1, 3), 3).unwrap();
        let report = verify_conjecture(&result, &one_plus_t()).unwrap();
        assert!(report.form_holds);
        assert!(report.congruence_holds);
        assert!(report.strong);
        assert!(report.g_is_even);
        assert_eq!(
            report.unit_used.unwrap(),
            Unit {
                sign: 1,
                exponent: 0
            }
        );
        let text = report.to_string();
        assert!(text.contains("strong form:          holds"));
    }

    #[test]
    fn unit_display() {
        let plus = Unit {
            sign: 1,
            exponent: 0,
        };
        let minus = Unit {
            sign: -1,
            exponent: -6,
        };
        assert_eq!(plus.to_string(), "+t^0");
        assert_eq!(minus.to_string(), "-t^-6");
    }
}
