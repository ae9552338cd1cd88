//! Points of the family of étale algebras with a Γ-action.
//!
//! A point over a field F is a tuple `(f, h, d, e)` with `f` monic of degree
//! `m = |Γ|` and
//!
//! * (a) `Res(f, f')` invertible (f separable),
//! * (b) `f ∘ h_i = f · d_i` (each `h_i` permutes the roots of f),
//! * (c) `h_i ∘ h_j - h_{ij} = f · e_{i,j}` (the `h_i` compose like Γ).
//!
//! Degree bounds: `deg h_i ≤ m-1`, `deg d_i ≤ m² - 2m`, `deg e_{i,j} ≤ m² - 3m + 1`,
//! a negative bound meaning the polynomial is zero. The `h_i` are stored
//! reduced modulo f, so for `m = 1` the identity conjugate is the constant
//! `-f(0)` rather than `x`.

mod algebra;
mod presentation;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{poly_resultant, FieldDescriptor, Poly};
use crate::error::{Error, Result};
use crate::groups::{catalog_group, FiniteGroup};

pub use algebra::{
    embed_field, fiber_algebra, invariant_subalgebra, tensor_split, tensor_split_over_self,
    EtaleAlgebra, TensorSplit,
};
pub use presentation::{
    emit_presentation, point_coordinates, point_from_coordinates, MPoly, Presentation,
};

/// How `z ↦ h_i(z)` composes relative to the stored table. Condition (c)
/// makes `σ_j ∘ σ_i = σ_{ij}`, so the algebra action follows the table only
/// when the relevant products agree; otherwise it follows the opposite table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Literal,
    Opposite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoint {
    pub field: FieldDescriptor,
    pub group: FiniteGroup,
    pub f: Poly,
    pub h: Vec<Poly>,
    pub d: Vec<Poly>,
    pub e: Vec<Vec<Poly>>,
    pub orientation: Orientation,
}

/// Number of stored coefficients of `(h_i, d_i, e_{i,j})` for `|Γ| = m`.
pub fn coefficient_counts(m: usize) -> (usize, usize, usize) {
    let m1 = m.saturating_sub(1);
    (m, m1 * m1, m1 * m.saturating_sub(2))
}

pub(super) fn orientation_of(f: &Poly, h: &[Poly], group: &FiniteGroup) -> Result<Orientation> {
    let m = group.order();
    for i in 0..m {
        for j in 0..m {
            // σ_i ∘ σ_j sends z to h_j(h_i(z)).
            let lhs = h[j].compose(&h[i]).rem(f)?;
            if lhs != h[group.mul_idx(i, j)] {
                return Ok(Orientation::Opposite);
            }
        }
    }
    Ok(Orientation::Literal)
}

/// Fill in `d` and `e` by exact division; a remainder means the `h_i` are not
/// roots of f or do not compose like Γ.
fn complete_point(
    field: FieldDescriptor,
    group: FiniteGroup,
    f: Poly,
    h: Vec<Poly>,
) -> Result<FamilyPoint> {
    let m = group.order();
    if f.degree() != Some(m) || !f.is_monic() {
        return Err(Error::InvalidArgument(format!(
            "f must be monic of degree |Γ| = {m}, got {f}"
        )));
    }
    if h.len() != m {
        return Err(Error::InvalidArgument(format!(
            "need {m} conjugates, got {}",
            h.len()
        )));
    }
    let h: Vec<Poly> = h.iter().map(|p| p.rem(&f)).collect::<Result<_>>()?;
    let x_mod_f = Poly::x(&field).rem(&f)?;
    if h[0] != x_mod_f {
        return Err(Error::Verification(format!(
            "identity conjugate {} is not x mod f",
            h[0]
        )));
    }
    for i in 0..m {
        for j in 0..i {
            if h[i] == h[j] {
                return Err(Error::Verification(format!(
                    "conjugates {j} and {i} coincide mod f"
                )));
            }
        }
    }
    let d = h
        .iter()
        .enumerate()
        .map(|(i, hi)| {
            f.compose(hi)
                .exact_div(&f)
                .map_err(|_| Error::Verification(format!("h_{i} = {hi} is not a root of f")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut e = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let diff = h[i].compose(&h[j]).sub(&h[group.mul_idx(i, j)]);
            row.push(diff.exact_div(&f).map_err(|_| {
                Error::Verification(format!(
                    "h_{i} ∘ h_{j} differs from h_{} modulo f",
                    group.mul_idx(i, j)
                ))
            })?);
        }
        e.push(row);
    }
    let orientation = orientation_of(&f, &h, &group)?;
    Ok(FamilyPoint {
        field,
        group,
        f,
        h,
        d,
        e,
        orientation,
    })
}

/// The point attached to `F_{q^m} / F_q`, `q = p^k`, with Γ = Z/m acting by
/// powers of Frobenius: `f` is the least monic irreducible of degree m over
/// `F_q` and `h_i = x^(q^i) mod f`.
pub fn construct_point_finite_field(p: u64, k: u32, m: usize) -> Result<FamilyPoint> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "extension degree must be at least 1".into(),
        ));
    }
    let field = FieldDescriptor::finite(p, k)?;
    let q = field.size().expect("finite field") as u128;
    let f = crate::algebra::find_irreducible_over(&field, m as u32)?;
    let x = Poly::x(&field);
    let mut h = Vec::with_capacity(m);
    let mut cur = x.rem(&f)?;
    for _ in 0..m {
        h.push(cur.clone());
        cur = cur.pow_mod(q, &f)?;
    }
    complete_point(field, FiniteGroup::cyclic(m), f, h)
}

/// A point over the rationals from caller-supplied conjugates of `x` in
/// `Q[x]/(f)`. `assignment[g]` is the index in `conjugates` of the conjugate
/// attached to group element `g`.
pub fn construct_point_rational(
    f: Poly,
    conjugates: Vec<Poly>,
    gamma: FiniteGroup,
    assignment: &[usize],
) -> Result<FamilyPoint> {
    let field = FieldDescriptor::rationals();
    if *f.base() != field || conjugates.iter().any(|c| *c.base() != field) {
        return Err(Error::FieldMismatch(
            "rational points need polynomials over Q".into(),
        ));
    }
    let m = gamma.order();
    let mut seen = vec![false; conjugates.len()];
    if assignment.len() != m
        || conjugates.len() != m
        || assignment
            .iter()
            .any(|&a| a >= m || std::mem::replace(&mut seen[a], true))
    {
        return Err(Error::InvalidArgument(
            "assignment must be a bijection from Γ onto the conjugates".into(),
        ));
    }
    let h = assignment.iter().map(|&a| conjugates[a].clone()).collect();
    complete_point(field, gamma, f, h)
}

/// `n`-th cyclotomic polynomial over the rationals.
pub fn cyclotomic_polynomial(n: u64) -> Result<Poly> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let q = FieldDescriptor::rationals();
    let mut xn = vec![0i64; n as usize + 1];
    xn[0] = -1;
    xn[n as usize] = 1;
    let mut acc = Poly::from_i64(&q, &xn);
    for d in (1..n).filter(|d| n % d == 0) {
        acc = acc.exact_div(&cyclotomic_polynomial(d)?)?;
    }
    Ok(acc)
}

/// `Q(ζ_n)` with Γ = (Z/n)^×, when that group is cyclic: Γ = Z/φ(n) with
/// generator acting by `ζ ↦ ζ^g` for the least generator g of (Z/n)^×.
pub fn cyclotomic_point(n: u64) -> Result<FamilyPoint> {
    let f = cyclotomic_polynomial(n)?;
    let m = f.degree().expect("nonzero") as u64;
    let field = FieldDescriptor::rationals();
    let order_of = |g: u64| {
        let mut x = g % n;
        let mut k = 1;
        while x != 1 % n {
            x = x * g % n;
            k += 1;
        }
        k
    };
    let g = (1..n.max(2))
        .filter(|g| num_integer::gcd(*g, n) == 1)
        .find(|&g| order_of(g) == m)
        .ok_or_else(|| Error::Unsupported(format!("(Z/{n})^x is not cyclic")))?;
    let mut h = Vec::with_capacity(m as usize);
    let mut e = 1 % n.max(2);
    for _ in 0..m {
        let mut coeffs = vec![0i64; e as usize + 1];
        coeffs[e as usize] = 1;
        h.push(Poly::from_i64(&field, &coeffs).rem(&f)?);
        e = e * g % n;
    }
    complete_point(field, FiniteGroup::cyclic(m as usize), f, h)
}

/// The split algebra `F^Γ = F[z]/(prod (z - a_g))` with Γ acting by left
/// translation of the points `a_g` (the `g`-th element of F). Works for any
/// finite Γ once `|F| ≥ |Γ|`, nonabelian groups included.
pub fn construct_point_split(field: &FieldDescriptor, gamma: FiniteGroup) -> Result<FamilyPoint> {
    let m = gamma.order();
    let size = field.size().unwrap_or(u64::MAX);
    if size < m as u64 {
        return Err(Error::InvalidArgument(format!(
            "{field} has fewer than {m} elements"
        )));
    }
    let pts: Vec<_> = (0..m as u64).map(|i| field.element_at(i)).collect();
    let x = Poly::x(field);
    let f = pts.iter().fold(Poly::one(field), |acc, a| {
        acc.mul(&x.sub(&Poly::constant(field, a.clone())))
    });
    // Lagrange basis: lagrange[g](a_k) = [g == k].
    let lagrange: Vec<Poly> = (0..m)
        .map(|g| {
            let (num, den) = (0..m).filter(|&k| k != g).fold(
                (Poly::one(field), field.one()),
                |(num, den), k| {
                    (
                        num.mul(&x.sub(&Poly::constant(field, pts[k].clone()))),
                        field.mul(&den, &field.sub(&pts[g], &pts[k])),
                    )
                },
            );
            num.scale(&field.inv(&den).expect("distinct points"))
        })
        .collect();
    let h = (0..m)
        .map(|gamma_idx| {
            (0..m).fold(Poly::zero(field), |acc, g| {
                let target = pts[gamma.mul_idx(gamma_idx, g)].clone();
                acc.add(&lagrange[g].scale(&target))
            })
        })
        .collect();
    complete_point(field.clone(), gamma, f, h)
}

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub condition: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub checks: Vec<Check>,
}

impl PointReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn record(&mut self, condition: impl Into<String>, witness: Option<String>) {
        self.checks.push(Check {
            condition: condition.into(),
            passed: witness.is_none(),
            witness,
        });
    }
}

impl std::fmt::Display for PointReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{}: {}",
                c.condition,
                if c.passed { "pass" } else { "FAIL" }
            )?;
            if let Some(w) = &c.witness {
                write!(f, " ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn bound_ok(p: &Poly, count: usize) -> bool {
    p.degree().is_none_or(|d| d < count)
}

/// Check every defining identity of the point, reporting failures with the
/// offending polynomial as witness. Also checks the degree bounds, that
/// `h_0 ≡ x`, that the stored orientation is right and that the invariant
/// subalgebra of the fiber is one-dimensional.
pub fn verify_family_point(pt: &FamilyPoint) -> PointReport {
    let mut rep = PointReport::default();
    let m = pt.group.order();
    let f = &pt.f;
    let shape_ok =
        pt.h.len() == m && pt.d.len() == m && pt.e.len() == m && pt.e.iter().all(|r| r.len() == m);
    let fields_ok = std::iter::once(f)
        .chain(&pt.h)
        .chain(&pt.d)
        .chain(pt.e.iter().flatten())
        .all(|p| *p.base() == pt.field);
    if !shape_ok || !fields_ok {
        rep.record(
            "shape",
            Some(format!("expected {m} conjugates over {}", pt.field)),
        );
        return rep;
    }
    if f.degree() != Some(m) || !f.is_monic() {
        rep.record("shape", Some(format!("f = {f} is not monic of degree {m}")));
        return rep;
    }
    let (hc, dc, ec) = coefficient_counts(m);
    let bad_degree =
        pt.h.iter()
            .map(|p| (p, hc))
            .chain(pt.d.iter().map(|p| (p, dc)))
            .chain(pt.e.iter().flatten().map(|p| (p, ec)))
            .find(|(p, c)| !bound_ok(p, *c));
    rep.record(
        "degree bounds",
        bad_degree.map(|(p, c)| format!("{p} has more than {c} coefficients")),
    );

    let x_mod_f = Poly::x(&pt.field).rem(f).expect("f nonzero");
    rep.record(
        "identity",
        (pt.h[0] != x_mod_f).then(|| format!("h_0 = {}", pt.h[0])),
    );

    let res = poly_resultant(f, &f.derivative()).expect("f nonzero");
    rep.record(
        "a: separable",
        pt.field.is_zero(&res).then(|| "Res(f, f') = 0".to_string()),
    );
    for i in 0..m {
        let diff = f.compose(&pt.h[i]).sub(&f.mul(&pt.d[i]));
        rep.record(
            format!("b[{i}]"),
            (!diff.is_zero()).then(|| format!("f∘h - f·d = {diff}")),
        );
    }
    for i in 0..m {
        for j in 0..m {
            let k = pt.group.mul_idx(i, j);
            let diff = pt.h[i]
                .compose(&pt.h[j])
                .sub(&pt.h[k])
                .sub(&f.mul(&pt.e[i][j]));
            rep.record(
                format!("c[{i},{j}]"),
                (!diff.is_zero()).then(|| format!("h_i∘h_j - h_ij - f·e = {diff}")),
            );
        }
    }
    if !rep.passed() {
        return rep;
    }
    let orientation = orientation_of(f, &pt.h, &pt.group).expect("f nonzero");
    rep.record(
        "orientation",
        (orientation != pt.orientation).then(|| format!("action is {orientation:?}")),
    );
    let alg = EtaleAlgebra::from_point_unchecked(pt);
    let dim = invariant_subalgebra(&alg).len();
    rep.record(
        "d: invariants",
        (dim != 1).then(|| format!("dim E^Γ = {dim}")),
    );
    rep
}

/// The `"group"` value: a catalog name when the table is literally the
/// catalog's, else the full table.
fn group_to_json(g: &FiniteGroup) -> Value {
    match catalog_group(g.name()) {
        Ok(c) if c.table() == g.table() => Value::String(g.name().to_string()),
        _ => serde_json::to_value(g).expect("group serializes"),
    }
}

pub fn group_from_json(v: &Value) -> Result<FiniteGroup> {
    match v {
        Value::String(name) => catalog_group(name),
        other => Ok(serde_json::from_value(other.clone())?),
    }
}

impl FamilyPoint {
    pub fn degree(&self) -> usize {
        self.group.order()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field,
            "group": group_to_json(&self.group),
            "f": self.f.to_json(),
            "h": self.h.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "d": self.d.iter().map(Poly::to_json).collect::<Vec<_>>(),
            "e": self.e.iter().map(|r| r.iter().map(Poly::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "orientation": self.orientation,
        })
    }

    /// Read a point without verifying it; see [`verify_family_point`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Serialization(format!("missing \"{k}\"")))
        };
        let field: FieldDescriptor = serde_json::from_value(get("field")?.clone())?;
        let group = group_from_json(get("group")?)?;
        let polys = |val: &Value| -> Result<Vec<Poly>> {
            val.as_array()
                .ok_or_else(|| Error::Serialization("expected an array of polynomials".into()))?
                .iter()
                .map(|p| Poly::from_json(&field, p))
                .collect()
        };
        let f = Poly::from_json(&field, get("f")?)?;
        let h = polys(get("h")?)?;
        let d = polys(get("d")?)?;
        let e = get("e")?
            .as_array()
            .ok_or_else(|| Error::Serialization("\"e\" must be a matrix".into()))?
            .iter()
            .map(polys)
            .collect::<Result<Vec<_>>>()?;
        let orientation = match v.get("orientation") {
            Some(o) => serde_json::from_value(o.clone())?,
            None => Orientation::Literal,
        };
        Ok(FamilyPoint {
            field,
            group,
            f,
            h,
            d,
            e,
            orientation,
        })
    }
}

impl Serialize for FamilyPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FamilyPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        FamilyPoint::from_json(&v).map_err(serde::de::Error::custom)
    }
}
