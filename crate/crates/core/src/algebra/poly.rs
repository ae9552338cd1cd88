//! Dense univariate polynomials over a [`FieldDescriptor`].
//!
//! Coefficients are stored constant term first with no trailing zeros; the zero
//! polynomial has an empty coefficient vector. Binary operations on polynomials
//! over different fields panic; the checked entry points ([`poly_compose`],
//! [`poly_resultant`]) report the mismatch as an error instead.

use std::fmt;

use serde_json::Value;

use super::field::{prime_divisors, FieldDescriptor, FieldElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    base: FieldDescriptor,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(base: &FieldDescriptor) -> Self {
        Poly {
            base: base.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(base: &FieldDescriptor, c: FieldElement) -> Self {
        Self::new(base, vec![c])
    }

    pub fn one(base: &FieldDescriptor) -> Self {
        Self::constant(base, base.one())
    }

    pub fn x(base: &FieldDescriptor) -> Self {
        Self::new(base, vec![base.zero(), base.one()])
    }

    /// `c x^k`.
    pub fn monomial(base: &FieldDescriptor, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![base.zero(); k + 1];
        coeffs[k] = c;
        Self::new(base, coeffs)
    }

    pub fn new(base: &FieldDescriptor, coeffs: Vec<FieldElement>) -> Self {
        let mut p = Poly {
            base: base.clone(),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn from_i64(base: &FieldDescriptor, coeffs: &[i64]) -> Self {
        Self::new(base, coeffs.iter().map(|&c| base.from_i64(c)).collect())
    }

    pub fn from_u64(base: &FieldDescriptor, coeffs: &[u64]) -> Self {
        Self::new(base, coeffs.iter().map(|&c| base.from_u64(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn base(&self) -> &FieldDescriptor {
        &self.base
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.base.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention that the zero polynomial has degree -1.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.base.is_one(c))
    }

    fn check(&self, other: &Poly) {
        assert_eq!(
            self.base, other.base,
            "polynomials over different fields ({} vs {})",
            self.base, other.base
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.base.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Poly::new(&self.base, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(
            &self.base,
            self.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::new(
            &self.base,
            self.coeffs.iter().map(|a| self.base.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.base);
        }
        let k = &self.base;
        let mut out = vec![k.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Poly::new(k, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.base);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor);
        let k = &self.base;
        let lead = divisor.leading().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = k.inv(lead).expect("nonzero leading coefficient");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(k), self.clone()));
        }
        let mut quot = vec![k.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = k.mul(&rem[i + dd], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = k.sub(&rem[i + j], &k.mul(&c, d));
            }
            quot[i] = c;
        }
        Ok((Poly::new(k, quot), Poly::new(k, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!(
                "{self} by {divisor} leaves {r}"
            )));
        }
        Ok(q)
    }

    /// `self(inner(x))`, by Horner's rule.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.check(inner);
        let mut acc = Poly::zero(&self.base);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(&self.base, c.clone()));
        }
        acc
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let k = &self.base;
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let k = &self.base;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(c, &k.from_u64(i as u64)))
            .collect();
        Poly::new(k, coeffs)
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&self.base.inv(l).unwrap()),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.base).rem(modulus)?;
        let mut b = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(modulus)?;
            }
            b = b.mul(&b).rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Maps every coefficient through `f` into `target`.
    pub fn map_coeffs(
        &self,
        target: &FieldDescriptor,
        f: impl Fn(&FieldElement) -> FieldElement,
    ) -> Poly {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| self.base.element_to_json(c))
                .collect(),
        )
    }

    pub fn from_json(base: &FieldDescriptor, value: &Value) -> Result<Poly> {
        let items = value.as_array().ok_or_else(|| {
            Error::Serialization(format!("polynomial must be an array, got {value}"))
        })?;
        let coeffs = items
            .iter()
            .map(|v| base.element_from_json(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(base, coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let k = &self.base;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let s = k.format_element(c);
            let s = if s.contains('+') { format!("({s})") } else { s };
            match i {
                0 => write!(f, "{s}")?,
                1 if k.is_one(c) => write!(f, "x")?,
                1 => write!(f, "{s}*x")?,
                _ if k.is_one(c) => write!(f, "x^{i}")?,
                _ => write!(f, "{s}*x^{i}")?,
            }
        }
        Ok(())
    }
}

fn same_field(a: &Poly, b: &Poly) -> Result<()> {
    if a.base != b.base {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.base, b.base)));
    }
    Ok(())
}

/// `outer(inner(x))`, expanded.
pub fn poly_compose(outer: &Poly, inner: &Poly) -> Result<Poly> {
    same_field(outer, inner)?;
    Ok(outer.compose(inner))
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det(k: &FieldDescriptor, mut m: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = m.len();
    if n == 0 {
        return k.one();
    }
    let mut sign_negative = false;
    let mut prev = k.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !k.is_zero(&m[r][col])) else {
            return k.zero();
        };
        if piv != col {
            m.swap(piv, col);
            sign_negative = !sign_negative;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let t = k.sub(
                    &k.mul(&m[r][c], &m[col][col]),
                    &k.mul(&m[r][col], &m[col][c]),
                );
                m[r][c] = k.div(&t, &prev).expect("Bareiss pivot is nonzero");
            }
            m[r][col] = k.zero();
        }
        prev = m[col][col].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_negative {
        k.neg(&det)
    } else {
        det
    }
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n): n shifted rows of
/// `f` followed by m shifted rows of `g`, highest coefficient first.
pub fn sylvester_matrix(f: &Poly, g: &Poly) -> Vec<Vec<FieldElement>> {
    let k = f.base();
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![k.zero(); size];
        for i in 0..=m {
            row[shift + i] = f.coeff(m - i);
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![k.zero(); size];
        for i in 0..=n {
            row[shift + i] = g.coeff(n - i);
        }
        rows.push(row);
    }
    rows
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn poly_resultant(f: &Poly, g: &Poly) -> Result<FieldElement> {
    same_field(f, g)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = f.base();
    if g.is_zero() {
        return Ok(if f.degree() == Some(0) {
            k.one()
        } else {
            k.zero()
        });
    }
    Ok(bareiss_det(k, sylvester_matrix(f, g)))
}

/// Rabin's test over a finite field `F_q`: `f` of degree m is irreducible iff
/// `x^(q^m) = x mod f` and `gcd(x^(q^(m/l)) - x, f) = 1` for each prime `l | m`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let k = f.base();
    let q = k
        .size()
        .ok_or_else(|| Error::InvalidField("irreducibility test needs a finite field".into()))?
        as u128;
    let m = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(m) => m,
    };
    let x = Poly::x(k);
    let frob_iter = |times: usize| -> Result<Poly> {
        let mut y = x.rem(f)?;
        for _ in 0..times {
            y = y.pow_mod(q, f)?;
        }
        Ok(y)
    };
    if frob_iter(m)? != x.rem(f)? {
        return Ok(false);
    }
    for l in prime_divisors(m as u64) {
        let h = frob_iter(m / l as usize)?.sub(&x);
        if h.gcd(f).degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The lexicographically smallest monic irreducible polynomial of degree `m`
/// over `F_p`, comparing coefficient vectors constant term first.
pub fn find_irreducible(p: u64, m: u32) -> Result<Poly> {
    find_irreducible_over(&FieldDescriptor::prime(p)?, m)
}

/// Same search over an arbitrary finite field, elements ordered by
/// [`FieldDescriptor::index_of`].
pub fn find_irreducible_over(base: &FieldDescriptor, m: u32) -> Result<Poly> {
    let q = base
        .size()
        .ok_or_else(|| Error::InvalidField("need a finite field".into()))?;
    if m == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let m = m as usize;
    let total = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    // Counter digits: the constant coefficient is the most significant.
    for counter in 0..total {
        let mut coeffs = vec![base.zero(); m + 1];
        let mut c = counter;
        for i in (0..m).rev() {
            coeffs[i] = base.element_at((c % q as u128) as u64);
            c /= q as u128;
        }
        coeffs[m] = base.one();
        let f = Poly::new(base, coeffs);
        if is_irreducible(&f)? {
            return Ok(f);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no irreducible of degree {m} over {base}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn f2() -> FieldDescriptor {
        FieldDescriptor::prime(2).unwrap()
    }

    #[test]
    fn composition_examples() {
        let f = Poly::from_i64(&q(), &[-2, 0, 1]);
        assert_eq!(poly_compose(&f, &Poly::x(&q())).unwrap(), f);
        let g = Poly::from_i64(&f2(), &[1, 1, 1]);
        let inner = Poly::from_i64(&f2(), &[1, 1]);
        assert_eq!(poly_compose(&g, &inner).unwrap(), g);
        let sq = Poly::from_i64(&q(), &[0, 0, 1]);
        let shift = Poly::from_i64(&q(), &[1, 1]);
        assert_eq!(
            poly_compose(&sq, &shift).unwrap(),
            Poly::from_i64(&q(), &[1, 2, 1])
        );
        assert!(poly_compose(&f, &inner).is_err());
    }

    #[test]
    fn resultant_examples() {
        let f = Poly::from_i64(&q(), &[-2, 0, 1]);
        assert_eq!(
            poly_resultant(&f, &f.derivative()).unwrap(),
            FieldElement::Rational(rat(-8, 1))
        );
        let g = Poly::from_i64(&f2(), &[1, 1, 1]);
        assert_eq!(g.derivative(), Poly::one(&f2()));
        assert_eq!(poly_resultant(&g, &g.derivative()).unwrap(), f2().one());
        // f'(1) * f'(-1) = 2 * (-2)
        let h = Poly::from_i64(&q(), &[-1, 0, 1]);
        assert_eq!(
            poly_resultant(&h, &h.derivative()).unwrap(),
            FieldElement::Rational(rat(-4, 1))
        );
        let rep = Poly::from_i64(&q(), &[1, -2, 1]);
        assert_eq!(
            poly_resultant(&rep, &Poly::from_i64(&q(), &[-2, 2])).unwrap(),
            q().zero()
        );
        assert_eq!(
            poly_resultant(&Poly::zero(&q()), &h).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn irreducible_search() {
        assert_eq!(find_irreducible(2, 1).unwrap(), Poly::x(&f2()));
        assert_eq!(
            find_irreducible(2, 2).unwrap(),
            Poly::from_i64(&f2(), &[1, 1, 1])
        );
        let f3 = FieldDescriptor::prime(3).unwrap();
        assert_eq!(
            find_irreducible(3, 2).unwrap(),
            Poly::from_i64(&f3, &[1, 0, 1])
        );
        // (1,0,1,1) precedes (1,1,0,1) constant-first
        assert_eq!(
            find_irreducible(2, 3).unwrap(),
            Poly::from_i64(&f2(), &[1, 0, 1, 1])
        );
    }

    /// Exhaustive oracle: a quadratic or cubic is irreducible iff it has no root.
    #[test]
    fn rabin_test_agrees_with_root_search_in_low_degree() {
        for p in [2u64, 3, 5] {
            let k = FieldDescriptor::prime(p).unwrap();
            for deg in 2..=3usize {
                let count = p.pow(deg as u32);
                for idx in 0..count {
                    let mut c = idx;
                    let mut coeffs = Vec::new();
                    for _ in 0..deg {
                        coeffs.push(k.from_u64(c % p));
                        c /= p;
                    }
                    coeffs.push(k.one());
                    let f = Poly::new(&k, coeffs);
                    let has_root = k.elements().iter().any(|x| k.is_zero(&f.eval(x)));
                    assert_eq!(is_irreducible(&f).unwrap(), !has_root, "{f} over F_{p}");
                }
            }
        }
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_i64(&q(), &[-1, 0, 1]);
        let b = Poly::from_i64(&q(), &[1, 1]);
        assert_eq!(a.exact_div(&b).unwrap(), Poly::from_i64(&q(), &[-1, 1]));
        assert!(a.exact_div(&Poly::from_i64(&q(), &[2, 1])).is_err());
        assert_eq!(a.gcd(&Poly::from_i64(&q(), &[2, 2])), b);
        assert!(a.div_rem(&Poly::zero(&q())).is_err());
    }

    #[test]
    fn zero_polynomial_has_degree_minus_one() {
        let z = Poly::from_i64(&q(), &[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree_i64(), -1);
        assert_eq!(z.degree(), None);
    }
}
