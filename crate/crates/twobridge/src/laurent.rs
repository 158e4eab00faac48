//! Exact Laurent polynomials in one variable t over arbitrary-precision
//! integers.
//!
//! [`IntLaurent`] stores a finite map from integer exponent to nonzero
//! coefficient. Invariants: no zero coefficient is ever stored, and the zero
//! polynomial is the empty map. Two polynomials are equal iff their term maps
//! are equal, so the representation is canonical.
//!
//! Beyond ring arithmetic this module provides the three operations the
//! twisted-polynomial pipelines are built on: exact division (with a hard
//! error on a nonzero remainder), canonical unit normalization (dividing out
//! the unit ambiguity +/- t^(r*ell) of twisted Alexander polynomials), and
//! coefficientwise mod-ell reduction to least nonnegative residues.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A Laurent polynomial in t with `BigInt` coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IntLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl IntLaurent {
    // ---- Constructors ----

    /// The zero polynomial.
    pub fn zero() -> Self {
        IntLaurent {
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// The constant polynomial c.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c.into())
    }

    /// The monomial c * t^exp. Returns zero if c is zero.
    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        IntLaurent { terms }
    }

    /// The variable t.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Build from (exponent, coefficient) pairs. Duplicate exponents are
    /// accumulated; zero totals are dropped.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    // ---- Queries ----

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff_ref(0).is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with a nonzero coefficient, or `None` for zero.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient, or `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Exponent spread max - min; 0 for the zero polynomial.
    pub fn span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Number of stored (nonzero) terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of t^exp, zero if absent.
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Borrowed coefficient of t^exp if present.
    pub fn coeff_ref(&self, exp: i64) -> Option<&BigInt> {
        self.terms.get(&exp)
    }

    /// Iterate terms in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Sum of all coefficients, i.e. the value at t = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    // ---- Term surgery ----

    /// Add c * t^exp in place, dropping the entry if the total vanishes.
    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// The polynomial times t^k.
    pub fn shifted(&self, k: i64) -> Self {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The polynomial times the scalar c.
    pub fn scaled(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntLaurent {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Substitute t -> -t: negates coefficients at odd exponents.
    pub fn subst_neg_t(&self) -> Self {
        IntLaurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    // ---- Division and normal forms ----

    /// Exact division: returns q with self = q * den, or `InexactDivision`
    /// if no such Laurent polynomial exists.
    ///
    /// Long division from the lowest exponent: each round cancels the current
    /// lowest term of the remainder, so the remainder's low end strictly
    /// rises while its high end never grows, forcing termination.
    pub fn exact_div(&self, den: &IntLaurent) -> Result<IntLaurent> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let den_lo = den.min_exp().expect("nonzero");
        let den_hi = den.max_exp().expect("nonzero");
        let den_lead = den.coeff_ref(den_lo).expect("nonzero").clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let lo = rem.min_exp().expect("nonzero");
            let hi = rem.max_exp().expect("nonzero");
            let e = lo - den_lo;
            if e > hi - den_hi {
                return Err(Error::InexactDivision);
            }
            let (c, r) = rem.coeff_ref(lo).expect("nonzero").div_rem(&den_lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (de, dc) in den.iter() {
                rem.add_term(de + e, -(dc * &c));
            }
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Multiply by the unique unit +/- t^(r*ell) that puts the lowest
    /// exponent into [0, ell) with a positive lowest coefficient.
    ///
    /// Two twisted Alexander polynomials represent the same invariant iff
    /// they normalize to the same value, so this is the comparison form used
    /// everywhere an identity asserts equality "up to +/- t^(r*ell)".
    pub fn canonical_unit_normalize(&self, ell: u32) -> Result<IntLaurent> {
        let lo = self.min_exp().ok_or(Error::ZeroPolynomial)?;
        let r = lo.div_euclid(i64::from(ell));
        let shifted = self.shifted(-r * i64::from(ell));
        let lead = shifted
            .coeff_ref(shifted.min_exp().expect("nonzero"))
            .expect("nonzero");
        if lead.is_negative() {
            Ok(-&shifted)
        } else {
            Ok(shifted)
        }
    }

    /// Reduce every coefficient to its least nonnegative residue mod ell,
    /// dropping terms that vanish.
    ///
    /// Congruence mod ell is decided by comparing reduced forms, never raw
    /// coefficients.
    pub fn mod_ell_reduce(&self, ell: u32) -> IntLaurent {
        let m = BigInt::from(ell);
        let mut out = Self::zero();
        for (e, c) in self.iter() {
            out.add_term(e, c.mod_floor(&m));
        }
        out
    }
}

// ---- Ring operators (on references, to keep clones explicit) ----

impl std::ops::Neg for &IntLaurent {
    type Output = IntLaurent;
    fn neg(self) -> IntLaurent {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl std::ops::Add for &IntLaurent {
    type Output = IntLaurent;
    fn add(self, rhs: &IntLaurent) -> IntLaurent {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &IntLaurent {
    type Output = IntLaurent;
    fn sub(self, rhs: &IntLaurent) -> IntLaurent {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, -c);
        }
        out
    }
}

impl std::ops::Mul for &IntLaurent {
    type Output = IntLaurent;
    fn mul(self, rhs: &IntLaurent) -> IntLaurent {
        if self.is_zero() || rhs.is_zero() {
            return IntLaurent::zero();
        }
        let slots = self.span() + rhs.span() + 1;
        let products = self.num_terms() as i64 * rhs.num_terms() as i64;
        if products >= slots {
            self.mul_dense(rhs)
        } else {
            self.mul_sparse(rhs)
        }
    }
}

impl IntLaurent {
    /// Schoolbook product through a dense coefficient vector. Wins when the
    /// factors mostly fill their exponent ranges (determinant entries do).
    fn mul_dense(&self, rhs: &IntLaurent) -> IntLaurent {
        let lo = self.min_exp().unwrap() + rhs.min_exp().unwrap();
        let len = (self.span() + rhs.span() + 1) as usize;
        let mut acc = vec![BigInt::zero(); len];
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                acc[(e1 + e2 - lo) as usize] += c1 * c2;
            }
        }
        IntLaurent {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect(),
        }
    }

    /// Schoolbook product through the term map. Wins for sparse factors
    /// with wide exponent ranges, like (1 + t^q)^k.
    fn mul_sparse(&self, rhs: &IntLaurent) -> IntLaurent {
        let mut out = Self::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

// ---- Display ----

impl fmt::Display for IntLaurent {
    /// Ascending exponents, explicit signs, magnitude always printed, the
    /// exponent written except at t^0: e.g. `-1*t^-1 + 5 - 7*t^1`. The format
    /// is deterministic so outputs are diff-stable.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        for (i, (e, c)) in self.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(out, "-")?;
                }
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            if e == 0 {
                write!(out, "{mag}")?;
            } else {
                write!(out, "{mag}*t^{e}")?;
            }
        }
        Ok(())
    }
}

// ---- Serialization ----
//
// A polynomial serializes as its sorted term list, each term an (exponent,
// coefficient) pair with the coefficient as a decimal string so that
// arbitrary-precision values round-trip bit-exactly through JSON.

impl Serialize for IntLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i64, String)> = self.iter().map(|(e, c)| (e, c.to_string())).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut p = IntLaurent::zero();
        for (e, c) in v {
            let c: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad integer literal {c:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}
