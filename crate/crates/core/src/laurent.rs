//! Laurent polynomials in one variable `q` with `i64` coefficients.
//!
//! All arithmetic is checked. The `checked_*` methods report overflow as an
//! [`ArithmeticError`]; the operator impls panic on overflow instead of
//! wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithmeticError {
    #[error("integer overflow in Laurent polynomial arithmetic")]
    Overflow,
    #[error("cannot evaluate at 0")]
    ZeroArgument,
    #[error("evaluation of {poly} at {at} is not an integer")]
    NonIntegral { poly: String, at: i64 },
    #[error("cannot parse Laurent polynomial {0:?}")]
    Parse(String),
}

/// A finitely supported map from exponent to nonzero coefficient, kept sorted
/// by exponent so that equal polynomials are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, i64)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`
    pub fn monomial(c: i64, e: i32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn q_inv() -> Self {
        Self::monomial(1, -1)
    }

    /// `q + q^-1`
    pub fn q_plus_q_inv() -> Self {
        LaurentPoly {
            terms: vec![(-1, 1), (1, 1)],
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Result<Self, ArithmeticError> {
        let mut v: Vec<(i32, i64)> = terms.into_iter().collect();
        v.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(i32, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = last.1.checked_add(c).ok_or(ArithmeticError::Overflow)?,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Ok(LaurentPoly { terms: out })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> &[(i32, i64)] {
        &self.terms
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.terms
            .binary_search_by_key(&e, |t| t.0)
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn constant_term(&self) -> i64 {
        self.coeff(0)
    }

    /// True iff every exponent is at least 1 (the zero polynomial included).
    pub fn in_qzq(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 1)
    }

    /// True iff every exponent has the given parity.
    pub fn parity_check(&self, parity: i32) -> bool {
        self.terms.iter().all(|t| (t.0 - parity).rem_euclid(2) == 0)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.iter().all(|t| t.1 > 0)
    }

    /// `p(q) -> p(q^-1)`
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|&(e, c)| (-e, c)).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect(),
        }
    }

    pub fn checked_neg(&self) -> Result<Self, ArithmeticError> {
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| c.checked_neg().map(|c| (e, c)).ok_or(ArithmeticError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(LaurentPoly { terms })
    }

    pub fn checked_scalar_mul(&self, k: i64) -> Result<Self, ArithmeticError> {
        if k == 0 {
            return Ok(Self::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| c.checked_mul(k).map(|c| (e, c)).ok_or(ArithmeticError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(LaurentPoly { terms })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithmeticError> {
        let mut out = self.clone();
        out.add_scaled_assign(1, 0, other)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithmeticError> {
        let mut out = self.clone();
        out.add_scaled_assign(-1, 0, other)?;
        Ok(out)
    }

    /// `self += k * q^shift * other`
    pub fn add_scaled_assign(&mut self, k: i64, shift: i32, other: &Self) -> Result<(), ArithmeticError> {
        if k == 0 || other.is_zero() {
            return Ok(());
        }
        let mut merged = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().copied().peekable();
        let mut b = other.terms.iter().map(|&(e, c)| (e + shift, c)).peekable();
        loop {
            let next = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => a.next().unwrap(),
                (None, Some(_)) => {
                    let (e, c) = b.next().unwrap();
                    (e, c.checked_mul(k).ok_or(ArithmeticError::Overflow)?)
                }
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => a.next().unwrap(),
                    Ordering::Greater => {
                        let (e, c) = b.next().unwrap();
                        (e, c.checked_mul(k).ok_or(ArithmeticError::Overflow)?)
                    }
                    Ordering::Equal => {
                        let (e, c1) = a.next().unwrap();
                        let (_, c2) = b.next().unwrap();
                        let c = c2
                            .checked_mul(k)
                            .and_then(|c2| c1.checked_add(c2))
                            .ok_or(ArithmeticError::Overflow)?;
                        (e, c)
                    }
                },
            };
            if next.1 != 0 {
                merged.push(next);
            }
        }
        self.terms = merged;
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithmeticError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        // Dense accumulation over the exponent window.
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.max_exponent().unwrap() + other.max_exponent().unwrap();
        let mut acc = vec![0i64; (hi - lo + 1) as usize];
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                let slot = &mut acc[(e1 + e2 - lo) as usize];
                let prod = c1.checked_mul(c2).ok_or(ArithmeticError::Overflow)?;
                *slot = slot.checked_add(prod).ok_or(ArithmeticError::Overflow)?;
            }
        }
        Ok(LaurentPoly {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|t| t.1 != 0)
                .map(|(i, c)| (lo + i as i32, c))
                .collect(),
        })
    }

    /// Exact evaluation at a nonzero integer. Polynomials with negative
    /// exponents may only be evaluated at 1 or -1.
    pub fn eval_int(&self, x: i64) -> Result<i64, ArithmeticError> {
        if x == 0 {
            return Err(ArithmeticError::ZeroArgument);
        }
        if self.min_exponent().is_some_and(|e| e < 0) && x.abs() != 1 {
            return Err(ArithmeticError::NonIntegral {
                poly: self.to_string(),
                at: x,
            });
        }
        let mut total: i64 = 0;
        for &(e, c) in &self.terms {
            let power = if x.abs() == 1 {
                if x == -1 && e.rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                }
            } else {
                x.checked_pow(e as u32).ok_or(ArithmeticError::Overflow)?
            };
            total = c
                .checked_mul(power)
                .and_then(|t| total.checked_add(t))
                .ok_or(ArithmeticError::Overflow)?;
        }
        Ok(total)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("Laurent polynomial coefficient overflow")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("Laurent polynomial coefficient overflow")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("Laurent polynomial coefficient overflow")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.checked_neg().expect("Laurent polynomial coefficient overflow")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Text form `c*q^e + ...` with exponents descending, e.g. `q^2 + 2 - 3*q^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, &(e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => f.write_str("q")?,
                _ => write!(f, "{mag}*q")?,
            }
            if e != 0 && e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = ArithmeticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ArithmeticError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let bytes = compact.as_bytes();
        // Split into signed terms; a '-' right after '^' belongs to the exponent.
        let mut pieces: Vec<(i64, &str)> = Vec::new();
        let mut start = 0;
        let mut sign = 1i64;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            sign = if bytes[0] == b'-' { -1 } else { 1 };
            start = 1;
        }
        let mut i = start;
        while i <= bytes.len() {
            let boundary = i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^');
            if boundary {
                pieces.push((sign, &compact[start..i]));
                if i < bytes.len() {
                    sign = if bytes[i] == b'-' { -1 } else { 1 };
                }
                start = i + 1;
            }
            i += 1;
        }
        let mut terms = Vec::new();
        for (sign, piece) in pieces {
            if piece.is_empty() {
                return Err(err());
            }
            let (coeff_str, var) = match piece.find('q') {
                None => (piece, None),
                Some(pos) => (&piece[..pos], Some(&piece[pos + 1..])),
            };
            let coeff: i64 = match (coeff_str, var.is_some()) {
                ("", true) => 1,
                (c, true) => c.strip_suffix('*').ok_or_else(err)?.parse().map_err(|_| err())?,
                (c, false) => c.parse().map_err(|_| err())?,
            };
            let exp: i32 = match var {
                None => 0,
                Some("") => 1,
                Some(rest) => rest.strip_prefix('^').ok_or_else(err)?.parse().map_err(|_| err())?,
            };
            terms.push((exp, coeff.checked_mul(sign).ok_or(ArithmeticError::Overflow)?));
        }
        LaurentPoly::from_terms(terms)
    }
}

/// JSON form: an object mapping decimal exponent strings to coefficients, in
/// increasing exponent order.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            map.serialize_entry(&e.to_string(), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping exponent strings to integer coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                while let Some((k, c)) = access.next_entry::<String, i64>()? {
                    let e: i32 = k.parse().map_err(|_| de::Error::custom(format!("bad exponent key {k:?}")))?;
                    if c == 0 {
                        return Err(de::Error::custom("zero coefficient stored"));
                    }
                    terms.push((e, c));
                }
                let n = terms.len();
                let p = LaurentPoly::from_terms(terms).map_err(de::Error::custom)?;
                if p.terms.len() != n {
                    return Err(de::Error::custom("repeated exponent"));
                }
                Ok(p)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}
