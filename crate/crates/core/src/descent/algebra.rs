//! Table arithmetic on a small finite étale algebra `E = F[z]/(f)`.

use crate::algebra::{FieldDescriptor, Poly};
use crate::error::{Error, Result};
use crate::etale::{EtaleAlgebra, Orientation};
use crate::groups::FiniteGroup;

/// Largest algebra handled by table arithmetic.
pub const MAX_ALGEBRA_SIZE: usize = 1024;

const NO_INVERSE: u16 = u16::MAX;

/// Elements are indices `sum_k c_k q^k` of coordinate vectors in the basis
/// `1, z, ..., z^(m-1)`, each `c_k` a field index. So `0` is zero, `1` is
/// one, and the constants are exactly the indices below `q`.
///
/// `act[g]` is a left action of Γ: `σ_g` when the point's conjugates compose
/// like the table, `σ_(g^-1)` when they compose oppositely.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    source: EtaleAlgebra,
    q: usize,
    m: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    act: Vec<Vec<u16>>,
    component_degrees: Vec<usize>,
}

/// Degrees of the irreducible factors of a squarefree `f`, by distinct-degree
/// factorization.
fn factor_degrees(f: &Poly, q: u128) -> Result<Vec<usize>> {
    let k = f.base();
    let x = Poly::x(k);
    let mut rest = f.clone();
    let mut frob = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree().unwrap_or(0) > 0 {
        d += 1;
        frob = frob.pow_mod(q, &rest)?;
        let g = frob.sub(&x).gcd(&rest);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            out.extend(std::iter::repeat_n(d, gd / d));
            rest = rest.exact_div(&g)?;
            frob = frob.rem(&rest)?;
        }
    }
    Ok(out)
}

impl FiniteAlgebra {
    pub fn new(alg: &EtaleAlgebra) -> Result<Self> {
        let k = &alg.field;
        let q = k.size().ok_or_else(|| {
            Error::Unsupported("table arithmetic needs a finite base field".into())
        })? as usize;
        let m = alg.dimension();
        let size = q
            .checked_pow(m as u32)
            .filter(|&s| s <= MAX_ALGEBRA_SIZE)
            .ok_or_else(|| {
                Error::size(
                    "étale algebra",
                    (q as u128).pow(m as u32),
                    MAX_ALGEBRA_SIZE as u128,
                )
            })?;
        let fadd: Vec<usize> = (0..q * q)
            .map(|i| {
                k.index_of(&k.add(&k.element_at((i / q) as u64), &k.element_at((i % q) as u64)))
                    as usize
            })
            .collect();
        let fmul: Vec<usize> = (0..q * q)
            .map(|i| {
                k.index_of(&k.mul(&k.element_at((i / q) as u64), &k.element_at((i % q) as u64)))
                    as usize
            })
            .collect();
        let digits = |mut a: usize| -> Vec<usize> {
            (0..m)
                .map(|_| {
                    let d = a % q;
                    a /= q;
                    d
                })
                .collect()
        };
        let index = |c: &[usize]| c.iter().rev().fold(0, |acc, &d| acc * q + d);
        // z^j mod f for j < 2m - 1, as coordinate vectors.
        let zpow: Vec<Vec<usize>> = (0..(2 * m).saturating_sub(1))
            .map(|j| {
                let r = alg.reduce(&Poly::monomial(k, k.one(), j));
                (0..m).map(|i| k.index_of(&r.coeff(i)) as usize).collect()
            })
            .collect();
        let all: Vec<Vec<usize>> = (0..size).map(digits).collect();
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                let s: Vec<usize> = (0..m).map(|i| fadd[all[a][i] * q + all[b][i]]).collect();
                add[a * size + b] = index(&s) as u16;
                let mut conv = vec![0usize; zpow.len()];
                for i in 0..m {
                    for j in 0..m {
                        conv[i + j] = fadd[conv[i + j] * q + fmul[all[a][i] * q + all[b][j]]];
                    }
                }
                let mut out = vec![0usize; m];
                for (j, cj) in conv.iter().enumerate() {
                    for i in 0..m {
                        out[i] = fadd[out[i] * q + fmul[cj * q + zpow[j][i]]];
                    }
                }
                mul[a * size + b] = index(&out) as u16;
            }
        }
        let neg = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| add[a * size + b] == 0)
                    .expect("additive inverse") as u16
            })
            .collect();
        let inv: Vec<u16> = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| mul[a * size + b] == 1)
                    .map_or(NO_INVERSE, |b| b as u16)
            })
            .collect();
        let group = &alg.group;
        let act = (0..group.order())
            .map(|g| {
                let s = match alg.orientation {
                    Orientation::Literal => g,
                    Orientation::Opposite => group.inv_idx(g),
                };
                let images: Vec<usize> = (0..m)
                    .map(|j| {
                        index(
                            &(0..m)
                                .map(|i| {
                                    k.index_of(
                                        &alg.apply(s, &Poly::monomial(k, k.one(), j)).coeff(i),
                                    ) as usize
                                })
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect();
                // σ is F-linear: σ(sum c_j z^j) = sum c_j σ(z^j).
                (0..size)
                    .map(|a| {
                        all[a].iter().zip(&images).fold(0u16, |acc, (&c, &img)| {
                            let scaled = mul[c * size + img];
                            add[acc as usize * size + scaled as usize]
                        })
                    })
                    .collect()
            })
            .collect();
        let component_degrees = factor_degrees(&alg.modulus, q as u128)?;
        Ok(FiniteAlgebra {
            source: alg.clone(),
            q,
            m,
            add,
            mul,
            neg,
            inv,
            act,
            component_degrees,
        })
    }

    pub fn source(&self) -> &EtaleAlgebra {
        &self.source
    }

    pub fn base_field(&self) -> &FieldDescriptor {
        &self.source.field
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.source.group
    }

    /// `|F|`.
    pub fn base_size(&self) -> usize {
        self.q
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.q.pow(self.m as u32)
    }

    /// Degrees over F of the field factors of E.
    pub fn component_degrees(&self) -> &[usize] {
        &self.component_degrees
    }

    pub fn is_field(&self) -> bool {
        self.component_degrees.len() == 1
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size() + b as usize]
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size() + b as usize]
    }

    pub fn inv(&self, a: u16) -> Option<u16> {
        let i = self.inv[a as usize];
        (i != NO_INVERSE).then_some(i)
    }

    pub fn is_unit(&self, a: u16) -> bool {
        self.inv[a as usize] != NO_INVERSE
    }

    pub fn units(&self) -> Vec<u16> {
        (0..self.size() as u16)
            .filter(|&a| self.is_unit(a))
            .collect()
    }

    /// `a^e` for an integer exponent; negative powers need a unit.
    pub fn pow(&self, a: u16, e: i64) -> Option<u16> {
        let base = if e < 0 { self.inv(a)? } else { a };
        let mut out = 1u16;
        for _ in 0..e.unsigned_abs() {
            out = self.mul(out, base);
        }
        Some(out)
    }

    /// The left action of `g` on E.
    pub fn act(&self, g: usize, a: u16) -> u16 {
        self.act[g][a as usize]
    }

    /// Whether `a` lies in F (the constants).
    pub fn is_base(&self, a: u16) -> bool {
        (a as usize) < self.q
    }

    pub fn element(&self, a: u16) -> Poly {
        let k = self.base_field();
        let mut a = a as usize;
        let coeffs = (0..self.m)
            .map(|_| {
                let c = k.element_at((a % self.q) as u64);
                a /= self.q;
                c
            })
            .collect();
        Poly::new(k, coeffs)
    }

    pub fn index_of(&self, x: &Poly) -> Result<u16> {
        if x.base() != self.base_field() {
            return Err(Error::FieldMismatch(format!(
                "{x} is not over {}",
                self.base_field()
            )));
        }
        let r = self.source.reduce(x);
        let k = self.base_field();
        Ok((0..self.m).rev().fold(0usize, |acc, i| {
            acc * self.q + k.index_of(&r.coeff(i)) as usize
        }) as u16)
    }

    pub fn format(&self, a: u16) -> String {
        self.element(a).to_string()
    }
}
