//! Symbolic presentation of the family: integer polynomial relations among the
//! coefficients of `(f, h, d, e)`, plus an inversion variable for the
//! resultant and, for the total space, the root `z` of f.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{coefficient_counts, FamilyPoint};
use crate::algebra::poly::bareiss_det;
use crate::algebra::{FieldDescriptor, FieldElement, Poly};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

/// Largest `|Γ|` for which the presentation is expanded.
pub const MAX_PRESENTATION_ORDER: usize = 4;

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
type Monomial = Vec<(usize, u32)>;

/// Sparse multivariate polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut acc: BTreeMap<usize, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *acc.entry(v).or_default() += e;
    }
    acc.into_iter().collect()
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = MPoly::zero();
        if c != 0 {
            p.terms.insert(Vec::new(), BigInt::from(c));
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut p = MPoly::zero();
        p.terms.insert(vec![(i, 1)], BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Value at a point of `F^n`.
    pub fn eval(&self, k: &FieldDescriptor, values: &[FieldElement]) -> FieldElement {
        self.terms.iter().fold(k.zero(), |acc, (m, c)| {
            let t = m.iter().fold(k.from_bigint(c), |t, &(v, e)| {
                k.mul(&t, &k.pow(&values[v], e as u128))
            });
            k.add(&acc, &t)
        })
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .map(|&(v, e)| {
                        if e == 1 {
                            names[v].clone()
                        } else {
                            format!("{}^{e}", names[v])
                        }
                    })
                    .collect();
                match (vars.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => vars.join("*"),
                    (false, false) => format!("{c}*{}", vars.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Univariate polynomial with `MPoly` coefficients, constant term first.
type UPoly = Vec<MPoly>;

fn u_add(a: &UPoly, b: &UPoly) -> UPoly {
    (0..a.len().max(b.len()))
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn u_neg(a: &UPoly) -> UPoly {
    a.iter().map(MPoly::neg).collect()
}

fn u_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![MPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn u_compose(outer: &UPoly, inner: &UPoly) -> UPoly {
    let mut acc: UPoly = Vec::new();
    for c in outer.iter().rev() {
        acc = u_add(&u_mul(&acc, inner), &vec![c.clone()]);
    }
    acc
}

/// Determinant by Laplace expansion along rows, memoized on the set of
/// columns still available.
fn symbolic_det(m: &[Vec<MPoly>]) -> MPoly {
    fn go(m: &[Vec<MPoly>], row: usize, cols: u32, memo: &mut HashMap<u32, MPoly>) -> MPoly {
        if row == m.len() {
            return MPoly::constant(1);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MPoly::zero();
        let mut sign = 1;
        for c in 0..m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(m, row + 1, cols & !(1 << c), memo);
                let t = m[row][c].mul(&minor);
                acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(m, 0, (1u32 << m.len()) - 1, &mut HashMap::new())
}

/// Sylvester matrix of `f` (formal degree `a.len()-1`) and `g`.
fn symbolic_sylvester(a: &UPoly, b: &UPoly) -> Vec<Vec<MPoly>> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    let mut rows = Vec::with_capacity(n);
    for shift in 0..db {
        let mut r = vec![MPoly::zero(); n];
        for (k, c) in a.iter().rev().enumerate() {
            r[shift + k] = c.clone();
        }
        rows.push(r);
    }
    for shift in 0..da {
        let mut r = vec![MPoly::zero(); n];
        for (k, c) in b.iter().rev().enumerate() {
            r[shift + k] = c.clone();
        }
        rows.push(r);
    }
    rows
}

/// Variables and relations; `adjoined` names the extra root variable of the
/// total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub variables: Vec<String>,
    pub relations: Vec<MPoly>,
    pub adjoined: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    coeff: String,
    monomial: Vec<(String, u32)>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    variables: Vec<String>,
    relations: Vec<Vec<RawTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjoined: Option<String>,
}

impl Presentation {
    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Relation values at a point.
    pub fn evaluate(
        &self,
        k: &FieldDescriptor,
        values: &[FieldElement],
    ) -> Result<Vec<FieldElement>> {
        if values.len() != self.variables.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} variables",
                values.len(),
                self.variables.len()
            )));
        }
        Ok(self.relations.iter().map(|r| r.eval(k, values)).collect())
    }

    pub fn vanishes_at(&self, k: &FieldDescriptor, values: &[FieldElement]) -> Result<bool> {
        Ok(self.evaluate(k, values)?.iter().all(|v| k.is_zero(v)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawPresentation {
            variables: self.variables.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms()
                        .map(|(m, c)| RawTerm {
                            coeff: c.to_string(),
                            monomial: m
                                .iter()
                                .map(|&(v, e)| (self.variables[v].clone(), e))
                                .collect(),
                        })
                        .collect()
                })
                .collect(),
            adjoined: self.adjoined.clone(),
        };
        serde_json::to_value(raw).expect("presentation serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: RawPresentation = serde_json::from_value(v.clone())?;
        let index: HashMap<&str, usize> = raw
            .variables
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut relations = Vec::with_capacity(raw.relations.len());
        for r in &raw.relations {
            let mut p = MPoly::zero();
            for t in r {
                let c: BigInt = t
                    .coeff
                    .parse()
                    .map_err(|_| Error::Serialization(format!("bad coefficient {}", t.coeff)))?;
                let mut mono = Monomial::new();
                for (name, e) in &t.monomial {
                    let i = *index
                        .get(name.as_str())
                        .ok_or_else(|| Error::Serialization(format!("unknown variable {name}")))?;
                    mono = mono_mul(&mono, &vec![(i, *e)]);
                }
                p.add_term(mono, c);
            }
            relations.push(p);
        }
        Ok(Presentation {
            variables: raw.variables,
            relations,
            adjoined: raw.adjoined,
        })
    }
}

struct Layout {
    names: Vec<String>,
    f: UPoly,
    h: Vec<UPoly>,
    d: Vec<UPoly>,
    e: Vec<Vec<UPoly>>,
    u: MPoly,
}

fn layout(m: usize) -> Layout {
    let (hc, dc, ec) = coefficient_counts(m);
    let mut names = Vec::new();
    let mut fresh = |name: String| {
        names.push(name);
        MPoly::var(names.len() - 1)
    };
    let mut f: UPoly = (0..m).map(|k| fresh(format!("f{k}"))).collect();
    f.push(MPoly::constant(1));
    let h: Vec<UPoly> = (0..m)
        .map(|i| (0..hc).map(|k| fresh(format!("h{i}_{k}"))).collect())
        .collect();
    let d: Vec<UPoly> = (0..m)
        .map(|i| (0..dc).map(|k| fresh(format!("d{i}_{k}"))).collect())
        .collect();
    let e: Vec<Vec<UPoly>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..ec).map(|k| fresh(format!("e{i}_{j}_{k}"))).collect())
                .collect()
        })
        .collect();
    let u = fresh("u".into());
    Layout {
        names,
        f,
        h,
        d,
        e,
        u,
    }
}

fn padded(p: &UPoly, len: usize) -> Vec<MPoly> {
    (0..len)
        .map(|k| p.get(k).cloned().unwrap_or_default())
        .collect()
}

/// Presentations of the base (coefficients of `(f, h, d, e)` and `u`) and of
/// the total space (the base plus `z` with `f(z) = 0`). Relations, in order:
/// `u·Res(f, f') - 1`; the coefficients of `f∘h_i - f·d_i` for each i; the
/// coefficients of `h_i∘h_j - h_{ij} - f·e_{i,j}` for each pair.
pub fn emit_presentation(gamma: &FiniteGroup) -> Result<(Presentation, Presentation)> {
    let m = gamma.order();
    if m > MAX_PRESENTATION_ORDER {
        return Err(Error::size(
            "symbolic presentation (group order)",
            m as u128,
            MAX_PRESENTATION_ORDER as u128,
        ));
    }
    let l = layout(m);
    let mut relations = Vec::new();
    // f' with formal degree m-1; its leading coefficient is the integer m.
    let df: UPoly = (1..=m)
        .map(|k| l.f[k].mul(&MPoly::constant(k as i64)))
        .collect();
    let res = symbolic_det(&symbolic_sylvester(&l.f, &df));
    relations.push(l.u.mul(&res).sub(&MPoly::constant(1)));
    let b_len = m * (m - 1) + 1;
    for i in 0..m {
        let diff = u_add(&u_compose(&l.f, &l.h[i]), &u_neg(&u_mul(&l.f, &l.d[i])));
        relations.extend(padded(&diff, b_len));
    }
    let c_len = (m - 1) * (m - 1) + 1;
    for i in 0..m {
        for j in 0..m {
            let k = gamma.mul_idx(i, j);
            let lhs = u_add(&u_compose(&l.h[i], &l.h[j]), &u_neg(&l.h[k]));
            let diff = u_add(&lhs, &u_neg(&u_mul(&l.f, &l.e[i][j])));
            relations.extend(padded(&diff, c_len));
        }
    }
    let base = Presentation {
        variables: l.names.clone(),
        relations: relations.clone(),
        adjoined: None,
    };
    let mut names = l.names;
    names.push("z".into());
    let z = MPoly::var(names.len() - 1);
    let fz =
        l.f.iter()
            .rev()
            .fold(MPoly::zero(), |acc, c| acc.mul(&z).add(c));
    relations.push(fz);
    let total = Presentation {
        variables: names,
        relations,
        adjoined: Some("z".into()),
    };
    Ok((base, total))
}

/// Coordinates of a point in the variable order of [`emit_presentation`],
/// with `u = Res(f, f')^-1` (zero when the resultant vanishes). Fails when a
/// polynomial exceeds its coefficient budget.
pub fn point_coordinates(pt: &FamilyPoint) -> Result<Vec<FieldElement>> {
    let m = pt.group.order();
    let k = &pt.field;
    let (hc, dc, ec) = coefficient_counts(m);
    let take = |p: &Poly, n: usize| -> Result<Vec<FieldElement>> {
        if p.degree().is_some_and(|d| d >= n) {
            return Err(Error::Verification(format!(
                "{p} has more than {n} coefficients"
            )));
        }
        Ok((0..n).map(|i| p.coeff(i)).collect())
    };
    let mut out: Vec<FieldElement> = (0..m).map(|i| pt.f.coeff(i)).collect();
    for h in &pt.h {
        out.extend(take(h, hc)?);
    }
    for d in &pt.d {
        out.extend(take(d, dc)?);
    }
    for row in &pt.e {
        for e in row {
            out.extend(take(e, ec)?);
        }
    }
    out.push(k.inv(&formal_resultant(pt)).unwrap_or_else(|| k.zero()));
    Ok(out)
}

/// `Res(f, f')` with `f'` taken at its formal degree `m - 1`, matching the
/// symbolic relation. For monic f it agrees with the true resultant up to
/// sign, so it vanishes exactly when f is inseparable.
fn formal_resultant(pt: &FamilyPoint) -> FieldElement {
    let k = &pt.field;
    let m = pt.group.order();
    let f: Vec<FieldElement> = (0..=m).map(|i| pt.f.coeff(i)).collect();
    let df: Vec<FieldElement> = (1..=m)
        .map(|i| k.mul(&f[i], &k.from_u64(i as u64)))
        .collect();
    let n = 2 * m - 1;
    let mut rows = Vec::with_capacity(n);
    for (coeffs, copies) in [(&f, m - 1), (&df, m)] {
        for shift in 0..copies {
            let mut r = vec![k.zero(); n];
            for (j, c) in coeffs.iter().rev().enumerate() {
                r[shift + j] = c.clone();
            }
            rows.push(r);
        }
    }
    bareiss_det(k, rows)
}

/// Inverse of [`point_coordinates`] (the value of `u` is dropped); the
/// orientation is recomputed from the conjugates.
pub fn point_from_coordinates(
    field: &FieldDescriptor,
    group: &FiniteGroup,
    values: &[FieldElement],
) -> Result<FamilyPoint> {
    let m = group.order();
    let (hc, dc, ec) = coefficient_counts(m);
    let total = m + m * hc + m * dc + m * m * ec + 1;
    if values.len() != total {
        return Err(Error::InvalidArgument(format!(
            "expected {total} coordinates, got {}",
            values.len()
        )));
    }
    let mut it = values.iter().cloned();
    let mut take = |n: usize| Poly::new(field, it.by_ref().take(n).collect());
    let mut fc = take(m).coeffs().to_vec();
    fc.resize(m, field.zero());
    fc.push(field.one());
    let f = Poly::new(field, fc);
    let h: Vec<Poly> = (0..m).map(|_| take(hc)).collect();
    let d: Vec<Poly> = (0..m).map(|_| take(dc)).collect();
    let e: Vec<Vec<Poly>> = (0..m).map(|_| (0..m).map(|_| take(ec)).collect()).collect();
    let orientation = super::orientation_of(&f, &h, group)?;
    Ok(FamilyPoint {
        field: field.clone(),
        group: group.clone(),
        f,
        h,
        d,
        e,
        orientation,
    })
}
