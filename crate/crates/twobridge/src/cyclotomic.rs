//! Exact arithmetic in the ring of integers of the ell-th cyclotomic field,
//! and Laurent polynomials in t over that ring.
//!
//! [`CycInt`] is a residue mod the ell-th cyclotomic polynomial
//! Phi_ell(x) = x^(ell-1) + ... + x + 1, stored in the power basis
//! 1, x, ..., x^(ell-2) with arbitrary-precision coordinates. Reduction mod
//! Phi_ell (rather than mod x^ell - 1) is essential: Z[x]/Phi_ell is an
//! integral domain where the product identities over primitive roots hold,
//! while Z[x]/(x^ell - 1) has zero divisors. Equality is coordinatewise, so
//! the representation is canonical.
//!
//! [`CycLaurent`] maps integer t-exponents to nonzero `CycInt` coefficients
//! and houses the d, e and determinant-factor polynomials of the twisted
//! pipeline. Conjugation (lambda -> lambda^-1) and the Galois substitutions
//! (lambda -> lambda^i, gcd(i, ell) = 1) act coefficientwise and are ring
//! automorphisms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::laurent::IntLaurent;
use crate::{Error, Result};

/// An element of Z[x] / Phi_ell(x), the cyclotomic integers of order ell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    ell: u32,
    /// Length ell - 1; coords[k] is the coefficient of lambda^k.
    coords: Vec<BigInt>,
}

impl CycInt {
    // ---- Constructors ----

    /// The zero element of the order-ell ring.
    pub fn zero(ell: u32) -> Self {
        debug_assert!(ell >= 3 && ell % 2 == 1);
        CycInt {
            ell,
            coords: vec![BigInt::zero(); (ell - 1) as usize],
        }
    }

    /// The unit element.
    pub fn one(ell: u32) -> Self {
        Self::from_integer(ell, BigInt::one())
    }

    /// The rational integer c embedded in the ring.
    pub fn from_integer(ell: u32, c: impl Into<BigInt>) -> Self {
        let mut v = Self::zero(ell);
        v.coords[0] = c.into();
        v
    }

    /// lambda^k for any integer k (k is reduced mod ell; lambda^ell = 1).
    pub fn lambda_pow(ell: u32, k: i64) -> Self {
        let k = k.rem_euclid(i64::from(ell)) as usize;
        let n = (ell - 1) as usize;
        let mut v = Self::zero(ell);
        if k < n {
            v.coords[k] = BigInt::one();
        } else {
            // lambda^(ell-1) = -(1 + lambda + ... + lambda^(ell-2)).
            for c in v.coords.iter_mut() {
                *c = -BigInt::one();
            }
        }
        v
    }

    // ---- Queries ----

    /// The cyclotomic order ell.
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Coordinates in the power basis 1, lambda, ..., lambda^(ell-2).
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// True iff this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The value as a rational integer, if all higher coordinates vanish.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    // ---- Ring operations ----

    /// Sum, or `MismatchedEll` if the operands live in different rings.
    pub fn checked_add(&self, rhs: &CycInt) -> Result<CycInt> {
        self.require_same_ell(rhs)?;
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt {
            ell: self.ell,
            coords,
        })
    }

    /// Product with canonical Phi_ell reduction, or `MismatchedEll`.
    pub fn checked_mul(&self, rhs: &CycInt) -> Result<CycInt> {
        self.require_same_ell(rhs)?;
        let n = (self.ell - 1) as usize;
        // Raw exponents reach 2(ell-2); reduce mod ell first (lambda^ell = 1),
        // then eliminate the lambda^(ell-1) slot through Phi_ell.
        let mut scratch = vec![BigInt::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                scratch[i + j] += a * b;
            }
        }
        Ok(Self::reduce_scratch(self.ell, scratch))
    }

    fn require_same_ell(&self, rhs: &CycInt) -> Result<()> {
        if self.ell == rhs.ell {
            Ok(())
        } else {
            Err(Error::MismatchedEll {
                left: self.ell,
                right: rhs.ell,
            })
        }
    }

    /// Canonicalize a raw coefficient vector indexed by lambda-exponent.
    fn reduce_scratch(ell: u32, mut scratch: Vec<BigInt>) -> CycInt {
        let n = (ell - 1) as usize;
        // Wrap exponents >= ell around (lambda^ell = 1)...
        for i in (n + 1..scratch.len()).rev() {
            if !scratch[i].is_zero() {
                let c = std::mem::take(&mut scratch[i]);
                scratch[i - n - 1] += c;
            }
        }
        scratch.truncate(n + 1);
        scratch.resize(n + 1, BigInt::zero());
        // ...then fold the lambda^(ell-1) slot through Phi_ell.
        let top = scratch.pop().expect("scratch has ell slots");
        if !top.is_zero() {
            for c in scratch.iter_mut() {
                *c -= &top;
            }
        }
        CycInt {
            ell,
            coords: scratch,
        }
    }

    // ---- Galois action ----

    /// Apply lambda -> lambda^i; a ring automorphism when gcd(i, ell) = 1.
    pub fn substitute(&self, i: i64) -> Result<CycInt> {
        let ell = i64::from(self.ell);
        let r = i.rem_euclid(ell);
        if r.gcd(&ell) != 1 {
            return Err(Error::NotCoprime {
                a: i,
                b: ell,
                g: r.gcd(&ell),
            });
        }
        let n = (self.ell - 1) as usize;
        let mut scratch = vec![BigInt::zero(); n + 1];
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = (r * k as i64).rem_euclid(ell) as usize;
            scratch[target] += c;
        }
        Ok(Self::reduce_scratch(self.ell, scratch))
    }

    /// Complex conjugation lambda -> lambda^-1 (an involution).
    pub fn conjugate(&self) -> CycInt {
        self.substitute(i64::from(self.ell) - 1)
            .expect("ell - 1 is coprime to ell")
    }
}

impl std::ops::Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            ell: self.ell,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Panics on mismatched ell; use `checked_add` where that is a data error.
impl std::ops::Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("mismatched cyclotomic orders")
    }
}

/// Panics on mismatched ell; use `checked_add` with a negation otherwise.
impl std::ops::Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_add(&-rhs)
            .expect("mismatched cyclotomic orders")
    }
}

/// Panics on mismatched ell; use `checked_mul` where that is a data error.
impl std::ops::Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("mismatched cyclotomic orders")
    }
}

impl fmt::Display for CycInt {
    /// Polynomial in L = lambda, ascending powers: e.g. `-1 - 1*L^1`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(out, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            if k == 0 {
                write!(out, "{mag}")?;
            } else {
                write!(out, "{mag}*L^{k}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        (self.ell, coords).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (ell, coords): (u32, Vec<String>) = Deserialize::deserialize(d)?;
        if ell < 3 || ell % 2 == 0 || coords.len() != (ell - 1) as usize {
            return Err(D::Error::custom("bad cyclotomic coordinate vector"));
        }
        let coords = coords
            .iter()
            .map(|c| c.parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| D::Error::custom("bad integer literal in coordinates"))?;
        Ok(CycInt { ell, coords })
    }
}

/// A Laurent polynomial in t with `CycInt` coefficients.
///
/// Invariants: no stored zero coefficient; every coefficient carries the same
/// ell as the polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycLaurent {
    ell: u32,
    terms: BTreeMap<i64, CycInt>,
}

impl CycLaurent {
    // ---- Constructors ----

    /// The zero polynomial over the order-ell ring.
    pub fn zero(ell: u32) -> Self {
        CycLaurent {
            ell,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial 1.
    pub fn one(ell: u32) -> Self {
        Self::monomial(0, CycInt::one(ell))
    }

    /// The monomial c * t^exp (zero if c is zero).
    pub fn monomial(exp: i64, c: CycInt) -> Self {
        let mut p = Self::zero(c.ell());
        p.add_term(exp, c);
        p
    }

    /// Embed an integer Laurent polynomial.
    pub fn from_int_laurent(ell: u32, p: &IntLaurent) -> Self {
        let mut out = Self::zero(ell);
        for (e, c) in p.iter() {
            out.add_term(e, CycInt::from_integer(ell, c.clone()));
        }
        out
    }

    // ---- Queries ----

    /// The cyclotomic order ell.
    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest t-exponent, or `None` for zero.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest t-exponent, or `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Borrowed coefficient of t^exp if present.
    pub fn coeff_ref(&self, exp: i64) -> Option<&CycInt> {
        self.terms.get(&exp)
    }

    /// Iterate terms in ascending t-exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &CycInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    // ---- Term surgery ----

    /// Add c * t^exp in place, dropping the entry if the total vanishes.
    pub fn add_term(&mut self, exp: i64, c: CycInt) {
        debug_assert_eq!(c.ell(), self.ell, "coefficient ring must match");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = &*slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(sum);
                }
            }
        }
    }

    // ---- Galois action ----

    /// Apply lambda -> lambda^i to every coefficient; a ring automorphism
    /// when gcd(i, ell) = 1, else `NotCoprime`.
    pub fn substitute(&self, i: i64) -> Result<CycLaurent> {
        let mut out = Self::zero(self.ell);
        for (e, c) in self.iter() {
            out.add_term(e, c.substitute(i)?);
        }
        Ok(out)
    }

    /// Apply lambda -> lambda^-1 to every coefficient.
    pub fn conjugate_lambda(&self) -> CycLaurent {
        let mut out = Self::zero(self.ell);
        for (e, c) in self.iter() {
            out.add_term(e, c.conjugate());
        }
        out
    }

    /// Extract the polynomial as an integer Laurent polynomial, or report
    /// the first t-exponent whose coefficient is not a rational integer.
    ///
    /// Failing here after a full pipeline assembly means an identity that
    /// guarantees rationality was violated upstream.
    pub fn lambda_free_part(&self) -> Result<IntLaurent> {
        let mut out = IntLaurent::zero();
        for (e, c) in self.iter() {
            match c.as_integer() {
                Some(v) => out.add_term(e, v.clone()),
                None => return Err(Error::NotLambdaFree { exp: e }),
            }
        }
        Ok(out)
    }
}

impl std::ops::Neg for &CycLaurent {
    type Output = CycLaurent;
    fn neg(self) -> CycLaurent {
        let mut out = CycLaurent::zero(self.ell);
        for (e, c) in self.iter() {
            out.add_term(e, -c);
        }
        out
    }
}

/// Panics on mismatched ell (an invariant bug, not a data error).
impl std::ops::Add for &CycLaurent {
    type Output = CycLaurent;
    fn add(self, rhs: &CycLaurent) -> CycLaurent {
        assert_eq!(self.ell, rhs.ell, "mismatched cyclotomic orders");
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c.clone());
        }
        out
    }
}

/// Panics on mismatched ell (an invariant bug, not a data error).
impl std::ops::Sub for &CycLaurent {
    type Output = CycLaurent;
    fn sub(self, rhs: &CycLaurent) -> CycLaurent {
        self + &-rhs
    }
}

/// Panics on mismatched ell (an invariant bug, not a data error).
impl std::ops::Mul for &CycLaurent {
    type Output = CycLaurent;
    fn mul(self, rhs: &CycLaurent) -> CycLaurent {
        assert_eq!(self.ell, rhs.ell, "mismatched cyclotomic orders");
        let mut out = CycLaurent::zero(self.ell);
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for CycLaurent {
    /// Ascending t-exponents with parenthesized cyclotomic coefficients:
    /// e.g. `(-1)*t^-1 + (-1*L^1)*t^1`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        for (i, (e, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(out, " + ")?;
            }
            if e == 0 {
                write!(out, "({c})")?;
            } else {
                write!(out, "({c})*t^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CycLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(i64, Vec<String>)> = self
            .iter()
            .map(|(e, c)| (e, c.coords().iter().map(|x| x.to_string()).collect()))
            .collect();
        (self.ell, terms).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (ell, terms): (u32, Vec<(i64, Vec<String>)>) = Deserialize::deserialize(d)?;
        let mut out = CycLaurent::zero(ell);
        for (e, coords) in terms {
            let json = serde_json::to_value((ell, coords)).map_err(D::Error::custom)?;
            let c: CycInt = serde_json::from_value(json).map_err(D::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}
