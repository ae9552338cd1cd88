//! Exact fields: the rationals, prime fields and finite extensions of prime fields.
//!
//! A [`FieldDescriptor`] is a field *context*; [`FieldElement`]s are plain values
//! and every operation goes through the descriptor. Extension fields are always
//! presented over their prime field by an explicit monic irreducible modulus, so
//! equality of elements is equality of reduced coefficient vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rationals,
    Prime {
        p: u64,
    },
    /// `F_p[y]/(modulus)`; the modulus is monic, constant term first.
    Extension {
        p: u64,
        modulus: Vec<u64>,
    },
}

/// A field value. `Finite` holds the coefficient vector over the prime field,
/// of length 1 for a prime field and `deg(modulus)` for an extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Finite(Vec<u64>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod_u64(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldDescriptor::Prime { p })
    }

    /// Checked constructor: `p` prime and `modulus` monic irreducible over `F_p`
    /// of degree at least 2.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 3 {
            return Err(Error::InvalidField(
                "extension modulus must have degree at least 2".into(),
            ));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(
                "extension modulus must be monic".into(),
            ));
        }
        let base = FieldDescriptor::Prime { p };
        let f = super::poly::Poly::from_u64(&base, &modulus);
        if !super::poly::is_irreducible(&f)? {
            return Err(Error::InvalidField(format!(
                "modulus {f} is reducible over F_{p}"
            )));
        }
        Ok(FieldDescriptor::Extension { p, modulus })
    }

    /// `F_{p^k}` presented by [`super::poly::find_irreducible`]`(p, k)`; the prime
    /// field itself when `k = 1`.
    pub fn finite(p: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let base = Self::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let f = super::poly::find_irreducible(p, k)?;
        let modulus = f
            .coeffs()
            .iter()
            .map(|c| base.to_u64(c))
            .collect::<Vec<_>>();
        Ok(FieldDescriptor::Extension { p, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::Prime { p } | FieldDescriptor::Extension { p, .. } => *p,
        }
    }

    /// Degree over the prime field (1 for the rationals).
    pub fn degree(&self) -> u32 {
        match self {
            FieldDescriptor::Extension { modulus, .. } => (modulus.len() - 1) as u32,
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldDescriptor::Rationals)
    }

    /// Number of elements, `None` for the rationals or when it overflows `u64`.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Prime { p } => Some(*p),
            FieldDescriptor::Extension { p, modulus } => p.checked_pow((modulus.len() - 1) as u32),
        }
    }

    fn width(&self) -> usize {
        self.degree() as usize
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => FieldElement::Rational(BigRational::zero()),
            _ => FieldElement::Finite(vec![0; self.width()]),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => {
                FieldElement::Rational(BigRational::from_integer(n.clone()))
            }
            _ => {
                let p = BigInt::from(self.characteristic());
                let r = n.mod_floor(&p).to_u64().unwrap();
                let mut v = vec![0; self.width()];
                v[0] = r;
                FieldElement::Finite(v)
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        let inv = self
            .inv(&den)
            .ok_or_else(|| Error::NotInvertible(format!("denominator {} in {self}", q.denom())))?;
        Ok(self.mul(&num, &inv))
    }

    /// Embeds a prime-field residue.
    pub fn from_u64(&self, n: u64) -> FieldElement {
        match self {
            FieldDescriptor::Rationals => {
                FieldElement::Rational(BigRational::from_integer(n.into()))
            }
            _ => {
                let mut v = vec![0; self.width()];
                v[0] = n % self.characteristic();
                FieldElement::Finite(v)
            }
        }
    }

    /// Prime-field residue of an element lying in the prime field.
    pub fn to_u64(&self, x: &FieldElement) -> u64 {
        match x {
            FieldElement::Finite(v) => v[0],
            FieldElement::Rational(q) => q.to_integer().to_u64().unwrap_or(0),
        }
    }

    /// Checks that `x` has the right shape and reduced coefficients.
    pub fn contains(&self, x: &FieldElement) -> bool {
        match (self, x) {
            (FieldDescriptor::Rationals, FieldElement::Rational(_)) => true,
            (FieldDescriptor::Rationals, _) | (_, FieldElement::Rational(_)) => false,
            (_, FieldElement::Finite(v)) => {
                v.len() == self.width() && v.iter().all(|&c| c < self.characteristic())
            }
        }
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Finite(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, x: &FieldElement) -> bool {
        *x == self.one()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (a, b) {
            (FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x + y),
            (FieldElement::Finite(x), FieldElement::Finite(y)) => {
                let p = self.characteristic();
                FieldElement::Finite(x.iter().zip(y).map(|(s, t)| (s + t) % p).collect())
            }
            _ => panic!("mixed field elements in {self}"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match a {
            FieldElement::Rational(x) => FieldElement::Rational(-x),
            FieldElement::Finite(x) => {
                let p = self.characteristic();
                FieldElement::Finite(x.iter().map(|&c| (p - c) % p).collect())
            }
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (_, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            (FieldDescriptor::Prime { p }, FieldElement::Finite(x), FieldElement::Finite(y)) => {
                FieldElement::Finite(vec![mul_mod(x[0], y[0], *p)])
            }
            (
                FieldDescriptor::Extension { p, modulus },
                FieldElement::Finite(x),
                FieldElement::Finite(y),
            ) => FieldElement::Finite(mul_reduce(x, y, modulus, *p)),
            _ => panic!("mixed field elements in {self}"),
        }
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u128) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (_, FieldElement::Rational(x)) => Some(FieldElement::Rational(x.recip())),
            (FieldDescriptor::Prime { p }, FieldElement::Finite(x)) => {
                Some(FieldElement::Finite(vec![pow_mod_u64(x[0], p - 2, *p)]))
            }
            (FieldDescriptor::Extension { .. }, FieldElement::Finite(_)) => {
                let q = self.size().expect("extension field size fits in u64") as u128;
                Some(self.pow(a, q - 2))
            }
            _ => None,
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// `x^(p^(sub_degree * k))`: the k-th power of the Frobenius of the subfield of
    /// size `p^sub_degree`.
    pub fn frobenius_power(
        &self,
        x: &FieldElement,
        k: i64,
        sub_degree: u32,
    ) -> Result<FieldElement> {
        if !self.is_finite() {
            return Err(Error::InvalidField("Frobenius needs a finite field".into()));
        }
        if k < 0 {
            return Err(Error::InvalidArgument(format!(
                "negative Frobenius power {k}; reduce it modulo the degree"
            )));
        }
        if sub_degree == 0 || self.degree() % sub_degree != 0 {
            return Err(Error::InvalidArgument(format!(
                "no subfield of degree {sub_degree} in {self}"
            )));
        }
        let p = self.characteristic() as u128;
        let steps = (k as u64 * sub_degree as u64) % self.degree() as u64;
        let mut y = x.clone();
        for _ in 0..steps {
            y = self.pow(&y, p);
        }
        Ok(y)
    }

    /// Canonical index of a finite-field element: `sum c_i p^i`.
    pub fn index_of(&self, x: &FieldElement) -> u64 {
        match x {
            FieldElement::Finite(v) => {
                let p = self.characteristic();
                v.iter().rev().fold(0, |acc, &c| acc * p + c)
            }
            FieldElement::Rational(_) => panic!("index_of on the rationals"),
        }
    }

    pub fn element_at(&self, mut idx: u64) -> FieldElement {
        let p = self.characteristic();
        let mut v = vec![0; self.width()];
        for c in v.iter_mut() {
            *c = idx % p;
            idx /= p;
        }
        FieldElement::Finite(v)
    }

    /// All elements in index order. Panics on the rationals.
    pub fn elements(&self) -> Vec<FieldElement> {
        let q = self.size().expect("elements() on an infinite field");
        (0..q).map(|i| self.element_at(i)).collect()
    }

    pub fn format_element(&self, x: &FieldElement) -> String {
        match x {
            FieldElement::Rational(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Finite(v) if v.len() == 1 => v[0].to_string(),
            FieldElement::Finite(v) => {
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "y".to_string(),
                        (1, c) => format!("{c}y"),
                        (i, 1) => format!("y^{i}"),
                        (i, c) => format!("{c}y^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }

    /// The JSON form of an element: `"num/den"` strings for rationals, a
    /// decimal string for prime-field residues, a coefficient array over `F_p`
    /// for extension elements.
    pub fn element_to_json(&self, x: &FieldElement) -> serde_json::Value {
        match x {
            FieldElement::Rational(q) => {
                serde_json::Value::String(format!("{}/{}", q.numer(), q.denom()))
            }
            FieldElement::Finite(v) if matches!(self, FieldDescriptor::Prime { .. }) => {
                serde_json::Value::String(v[0].to_string())
            }
            FieldElement::Finite(v) => serde_json::json!(v),
        }
    }

    pub fn element_from_json(&self, value: &serde_json::Value) -> Result<FieldElement> {
        let bad = || Error::Serialization(format!("cannot read {value} as an element of {self}"));
        match (self, value) {
            (FieldDescriptor::Rationals, serde_json::Value::String(s)) => {
                Ok(FieldElement::Rational(parse_rational(s).ok_or_else(bad)?))
            }
            (FieldDescriptor::Rationals, serde_json::Value::Number(n)) => {
                let k = n.as_i64().ok_or_else(bad)?;
                Ok(self.from_i64(k))
            }
            (FieldDescriptor::Rationals, _) => Err(bad()),
            (_, serde_json::Value::String(s)) => {
                let q = parse_rational(s).ok_or_else(bad)?;
                self.from_rational(&q)
            }
            (_, serde_json::Value::Number(n)) => Ok(self.from_i64(n.as_i64().ok_or_else(bad)?)),
            (_, serde_json::Value::Array(items)) => {
                if items.len() > self.width() {
                    return Err(bad());
                }
                let p = self.characteristic() as i64;
                let mut v = vec![0u64; self.width()];
                for (slot, item) in v.iter_mut().zip(items) {
                    let c = item.as_i64().ok_or_else(bad)?;
                    *slot = c.rem_euclid(p) as u64;
                }
                Ok(FieldElement::Finite(v))
            }
            _ => Err(bad()),
        }
    }
}

fn mul_reduce(x: &[u64], y: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * d];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(a, b, p)) % p;
        }
    }
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (t, &m) in modulus[..d].iter().enumerate() {
            let sub = mul_mod(c, m, p);
            prod[k - d + t] = (prod[k - d + t] + p - sub) % p;
        }
    }
    prod.truncate(d);
    prod
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Convenience: a rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rational_is_integer(q: &BigRational) -> bool {
    q.denom().is_one() || q.denom().abs().is_one()
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime { p } => write!(f, "F_{p}"),
            FieldDescriptor::Extension { p, modulus } => {
                write!(f, "F_{}^{}", p, modulus.len() - 1)
            }
        }
    }
}
