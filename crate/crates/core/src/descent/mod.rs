//! Points of `SL_n`, `PGL_n`, split tori and their products over a finite
//! étale algebra, the semilinear Γ-action on them, pinned outer
//! automorphisms, twisted fixed-point groups and restriction of scalars.

mod algebra;
pub mod matrix;
mod restriction;
mod twist;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupOps;
use crate::root_data::{are_isomorphic, lattice, BasedAut, BasedRootDatum};

pub use algebra::{FiniteAlgebra, MAX_ALGEBRA_SIZE};
pub use restriction::{norm, restriction_matrix};
pub use twist::{
    explicit_group, induced_cocycle, inner_cocycles, inner_h1_classes, is_quasi_split_class,
    is_quasi_split_twist, twisted_fixed_points, ExplicitGroup, QuasiSplitReport, TwistSpec,
};

/// Largest group enumerated element by element.
pub const MAX_ENUMERATION: u128 = 1_000_000;

/// Bound on candidate prefixes tried while enumerating matrix groups.
const RAW_SEARCH_LIMIT: u128 = 1 << 24;

pub type Elem = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Sl {
        n: usize,
    },
    Pgl {
        n: usize,
    },
    /// The split torus with character lattice `Z^rank`. A Γ-action on the
    /// lattice enters through `alpha` as an [`Outer::Lattice`].
    Torus {
        rank: usize,
    },
    Product {
        factors: Vec<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec::Product {
            factors: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Sl { n } | GroupSpec::Pgl { n } if *n < 2 => Err(Error::InvalidArgument(
                format!("SL/PGL need n >= 2, got {n}"),
            )),
            GroupSpec::Product { factors } => factors.iter().try_for_each(GroupSpec::validate),
            _ => Ok(()),
        }
    }

    /// Number of algebra entries per element.
    pub fn width(&self) -> usize {
        match self {
            GroupSpec::Sl { n } | GroupSpec::Pgl { n } => n * n,
            GroupSpec::Torus { rank } => *rank,
            GroupSpec::Product { factors } => factors.iter().map(GroupSpec::width).sum(),
        }
    }

    /// The adjoint group, where inner automorphisms live.
    pub fn adjoint(&self) -> GroupSpec {
        match self {
            GroupSpec::Sl { n } | GroupSpec::Pgl { n } => GroupSpec::Pgl { n: *n },
            GroupSpec::Torus { .. } => GroupSpec::trivial(),
            GroupSpec::Product { factors } => GroupSpec::Product {
                factors: factors.iter().map(GroupSpec::adjoint).collect(),
            },
        }
    }

    /// Whether every factor is a torus.
    pub fn is_torus(&self) -> bool {
        match self {
            GroupSpec::Torus { .. } => true,
            GroupSpec::Product { factors } => factors.iter().all(GroupSpec::is_torus),
            _ => false,
        }
    }

    /// The supported group with the given based root datum, if any.
    pub fn from_datum(b: &BasedRootDatum) -> Result<GroupSpec> {
        let sl = |n| GroupSpec::Sl { n };
        let pgl = |n| GroupSpec::Pgl { n };
        let torus = |rank| GroupSpec::Torus { rank };
        let product = |factors: Vec<GroupSpec>| GroupSpec::Product { factors };
        for (name, d) in crate::root_data::named_reference_data()? {
            if d.rank() != b.rank() || !are_isomorphic(b, &d) {
                continue;
            }
            return Ok(match name {
                "trivial" => GroupSpec::trivial(),
                "Gm" => torus(1),
                "Gm^2" => torus(2),
                "SL2" => sl(2),
                "PGL2" => pgl(2),
                "SL3" => sl(3),
                "PGL3" => pgl(3),
                "SL2xGm" => product(vec![sl(2), torus(1)]),
                "PGL2xGm" => product(vec![pgl(2), torus(1)]),
                "SL2xSL2" => product(vec![sl(2), sl(2)]),
                "SL2xPGL2" => product(vec![sl(2), pgl(2)]),
                "PGL2xPGL2" => product(vec![pgl(2), pgl(2)]),
                other => return Err(Error::Unsupported(format!("no matrix model for {other}"))),
            });
        }
        Err(Error::Unsupported(format!(
            "no matrix model for {}",
            b.name()
        )))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Sl { n } => write!(f, "SL{n}"),
            GroupSpec::Pgl { n } => write!(f, "PGL{n}"),
            GroupSpec::Torus { rank: 1 } => write!(f, "Gm"),
            GroupSpec::Torus { rank } => write!(f, "Gm^{rank}"),
            GroupSpec::Product { factors } if factors.is_empty() => write!(f, "trivial"),
            GroupSpec::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `sl3`, `pgl2`, `gm`, `gm^2`, `trivial`, or factors joined by `x`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "trivial" {
            return Ok(GroupSpec::trivial());
        }
        let parse_one = |t: &str| -> Result<GroupSpec> {
            let bad = || Error::InvalidArgument(format!("unknown group '{t}'"));
            let num = |r: &str| {
                r.trim_start_matches('^')
                    .parse::<usize>()
                    .map_err(|_| bad())
            };
            let spec = if let Some(r) = t.strip_prefix("pgl") {
                GroupSpec::Pgl { n: num(r)? }
            } else if let Some(r) = t.strip_prefix("sl") {
                GroupSpec::Sl { n: num(r)? }
            } else if let Some(r) = t.strip_prefix("gm") {
                GroupSpec::Torus {
                    rank: if r.is_empty() { 1 } else { num(r)? },
                }
            } else {
                return Err(bad());
            };
            spec.validate()?;
            Ok(spec)
        };
        let parts: Vec<&str> = s.split('x').collect();
        if parts.len() == 1 {
            parse_one(parts[0])
        } else {
            Ok(GroupSpec::Product {
                factors: parts.into_iter().map(parse_one).collect::<Result<_>>()?,
            })
        }
    }
}

/// A pinned automorphism defined over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outer {
    Identity,
    /// `x ↦ J (x^T)^-1 J^-1` with the alternating antidiagonal J.
    Flip,
    /// A lattice automorphism `A` of the character lattice, acting on torus
    /// points by `(A·t)(χ) = t(A^-1 χ)`.
    Lattice {
        matrix: Vec<Vec<i64>>,
    },
    /// Factor `i` is sent to factor `permutation[i]` through `parts[i]`.
    Product {
        permutation: Vec<usize>,
        parts: Vec<Outer>,
    },
}

fn int_inverse(a: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let m = lattice::inverse_unimodular(a)
        .ok_or_else(|| Error::InvalidArgument(format!("lattice map {a:?} is not unimodular")))?;
    Ok(m)
}

impl Outer {
    /// Rewrites trivial pieces as [`Outer::Identity`].
    pub fn normalized(&self) -> Outer {
        match self {
            Outer::Lattice { matrix } if *matrix == lattice::identity(matrix.len()) => {
                Outer::Identity
            }
            Outer::Product { permutation, parts } => {
                let parts: Vec<Outer> = parts.iter().map(Outer::normalized).collect();
                if permutation.iter().enumerate().all(|(i, &p)| i == p)
                    && parts.iter().all(|p| *p == Outer::Identity)
                {
                    Outer::Identity
                } else {
                    Outer::Product {
                        permutation: permutation.clone(),
                        parts,
                    }
                }
            }
            other => other.clone(),
        }
    }

    pub fn validate(&self, spec: &GroupSpec) -> Result<()> {
        let bad = || Error::InvalidArgument(format!("{self:?} is not an automorphism of {spec}"));
        match (self, spec) {
            (Outer::Identity, _) => Ok(()),
            (Outer::Flip, GroupSpec::Sl { .. } | GroupSpec::Pgl { .. }) => Ok(()),
            (Outer::Lattice { matrix }, GroupSpec::Torus { rank }) => {
                if matrix.len() != *rank || matrix.iter().any(|r| r.len() != *rank) {
                    return Err(bad());
                }
                int_inverse(matrix).map(|_| ())
            }
            (Outer::Product { permutation, parts }, GroupSpec::Product { factors }) => {
                let n = factors.len();
                let mut seen = vec![false; n];
                if permutation.len() != n || parts.len() != n {
                    return Err(bad());
                }
                for (i, &p) in permutation.iter().enumerate() {
                    if p >= n || std::mem::replace(&mut seen[p], true) || factors[p] != factors[i] {
                        return Err(bad());
                    }
                    parts[i].validate(&factors[i])?;
                }
                Ok(())
            }
            _ => Err(bad()),
        }
    }

    fn product_form(&self, n: usize) -> (Vec<usize>, Vec<Outer>) {
        match self {
            Outer::Product { permutation, parts } => (permutation.clone(), parts.clone()),
            _ => ((0..n).collect(), vec![Outer::Identity; n]),
        }
    }

    /// `self ∘ other` on `spec`.
    pub fn compose(&self, other: &Outer, spec: &GroupSpec) -> Outer {
        let out = match (self, other, spec) {
            (Outer::Identity, x, _) | (x, Outer::Identity, _) => x.clone(),
            (Outer::Flip, Outer::Flip, _) => Outer::Identity,
            (Outer::Lattice { matrix: a }, Outer::Lattice { matrix: b }, _) => Outer::Lattice {
                matrix: lattice::mat_mul(a, b),
            },
            (_, _, GroupSpec::Product { factors }) => {
                let (pa, qa) = self.product_form(factors.len());
                let (pb, qb) = other.product_form(factors.len());
                Outer::Product {
                    permutation: (0..factors.len()).map(|i| pa[pb[i]]).collect(),
                    parts: (0..factors.len())
                        .map(|i| qa[pb[i]].compose(&qb[i], &factors[i]))
                        .collect(),
                }
            }
            _ => unreachable!("validated outer automorphisms compose"),
        };
        out.normalized()
    }

    pub fn inverse(&self) -> Outer {
        match self {
            Outer::Identity | Outer::Flip => self.clone(),
            Outer::Lattice { matrix } => Outer::Lattice {
                matrix: int_inverse(matrix).expect("validated lattice map"),
            },
            Outer::Product { permutation, parts } => {
                let n = permutation.len();
                let mut inv_perm = vec![0; n];
                let mut inv_parts = vec![Outer::Identity; n];
                for i in 0..n {
                    inv_perm[permutation[i]] = i;
                    inv_parts[permutation[i]] = parts[i].inverse();
                }
                Outer::Product {
                    permutation: inv_perm,
                    parts: inv_parts,
                }
            }
        }
    }

    /// The induced automorphism of the adjoint group.
    pub fn on_adjoint(&self) -> Outer {
        match self {
            Outer::Lattice { .. } => Outer::Identity,
            Outer::Product { permutation, parts } => Outer::Product {
                permutation: permutation.clone(),
                parts: parts.iter().map(Outer::on_adjoint).collect(),
            }
            .normalized(),
            other => other.clone(),
        }
    }
}

/// The pinned automorphism attached to a based automorphism of the root
/// datum of `spec`. Semisimple factors take the simple roots in order, `n-1`
/// each for type `A_(n-1)`; torus factors share the radical.
pub fn pinned_outer(spec: &GroupSpec, aut: &BasedAut) -> Result<Outer> {
    let perm = &aut.base_permutation;
    let unsupported =
        || Error::Unsupported(format!("no pinned automorphism of {spec} for {aut:?}"));
    let type_a = |perm: &[usize], n: usize| -> Result<Outer> {
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            Ok(Outer::Identity)
        } else if n >= 3 && perm.iter().enumerate().all(|(i, &p)| p == n - 2 - i) {
            Ok(Outer::Flip)
        } else {
            Err(unsupported())
        }
    };
    match spec {
        GroupSpec::Sl { n } | GroupSpec::Pgl { n } if perm.len() == n - 1 => type_a(perm, *n),
        GroupSpec::Torus { rank } if perm.is_empty() && aut.matrix.len() == *rank => {
            Ok(Outer::Lattice {
                matrix: aut.matrix.clone(),
            }
            .normalized())
        }
        GroupSpec::Product { factors } => {
            // simple-root block of each semisimple factor
            let mut blocks: Vec<Option<(usize, usize)>> = Vec::new();
            let mut start = 0;
            let mut torus_rank = 0;
            for f in factors {
                match f {
                    GroupSpec::Sl { n } | GroupSpec::Pgl { n } => {
                        blocks.push(Some((start, n - 1)));
                        start += n - 1;
                    }
                    GroupSpec::Torus { rank } => {
                        blocks.push(None);
                        torus_rank += rank;
                    }
                    GroupSpec::Product { .. } => return Err(unsupported()),
                }
            }
            if start != perm.len() || start + torus_rank != aut.matrix.len() {
                return Err(unsupported());
            }
            let block_of = |root: usize| {
                blocks
                    .iter()
                    .position(|b| b.is_some_and(|(s, l)| root >= s && root < s + l))
            };
            let mut permutation: Vec<usize> = (0..factors.len()).collect();
            let mut parts = vec![Outer::Identity; factors.len()];
            for (i, b) in blocks.iter().enumerate() {
                let Some((s, l)) = *b else { continue };
                let j = block_of(perm[s]).ok_or_else(unsupported)?;
                let (t, _) = blocks[j].expect("semisimple block");
                let local: Vec<usize> = (s..s + l).map(|r| perm[r].wrapping_sub(t)).collect();
                if factors[j] != factors[i] || local.iter().any(|&x| x >= l) {
                    return Err(unsupported());
                }
                permutation[i] = j;
                parts[i] = type_a(&local, l + 1)?;
            }
            let tori: Vec<usize> = (0..factors.len())
                .filter(|&i| blocks[i].is_none())
                .collect();
            match (tori.as_slice(), torus_rank) {
                ([], _) => {}
                ([i], 1) => {
                    // The matrix is block diagonal over Q (root span, radical);
                    // on the root span it permutes a basis.
                    let det = lattice::det_i64(&aut.matrix);
                    parts[*i] = Outer::Lattice {
                        matrix: vec![vec![det * permutation_sign(perm)]],
                    }
                    .normalized();
                }
                _ => return Err(unsupported()),
            }
            let out = Outer::Product { permutation, parts }.normalized();
            out.validate(spec)?;
            Ok(out)
        }
        _ => Err(unsupported()),
    }
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut sign = 1;
    let mut seen = vec![false; p.len()];
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// An automorphism `x ↦ Inn(inner)(outer(σ_semilinear(x)))` of `G(E)`;
/// `inner` is an element of the adjoint group and `semilinear` indexes Γ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutElement {
    pub inner: Elem,
    #[serde(default = "identity_outer")]
    pub outer: Outer,
    #[serde(default)]
    pub semilinear: usize,
}

fn identity_outer() -> Outer {
    Outer::Identity
}

/// `G(E)` for a supported group over a finite étale algebra. Elements are
/// implicit; [`GroupOps::elements`] enumerates them when `|G(E)| ≤ 10^6`.
#[derive(Clone, Debug)]
pub struct PointGroup {
    spec: GroupSpec,
    algebra: Arc<FiniteAlgebra>,
}

impl PointGroup {
    pub fn new(spec: GroupSpec, algebra: Arc<FiniteAlgebra>) -> Result<Self> {
        spec.validate()?;
        if !algebra.is_field() && contains_pgl(&spec.adjoint()) {
            return Err(Error::Unsupported(format!(
                "{spec} over a non-field algebra (canonical scaling needs unit entries)"
            )));
        }
        Ok(PointGroup { spec, algebra })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    /// The adjoint group over the same algebra.
    pub fn adjoint(&self) -> PointGroup {
        PointGroup {
            spec: self.spec.adjoint(),
            algebra: self.algebra.clone(),
        }
    }

    /// `|G(E)|` from the structure of E as a product of fields.
    pub fn order(&self) -> u128 {
        let q = self.algebra.base_size() as u128;
        let fields: Vec<u128> = self
            .algebra
            .component_degrees()
            .iter()
            .map(|&d| q.pow(d as u32))
            .collect();
        spec_order(&self.spec, &fields)
    }

    pub fn is_enumerable(&self) -> bool {
        self.order() <= MAX_ENUMERATION
    }

    /// Membership: the right shape, entries in range and the defining
    /// condition (det 1, a canonical unit-determinant representative, units).
    pub fn contains(&self, x: &[u16]) -> bool {
        x.len() == self.spec.width()
            && x.iter().all(|&a| (a as usize) < self.algebra.size())
            && self.contains_in(&self.spec, x)
    }

    fn contains_in(&self, spec: &GroupSpec, x: &[u16]) -> bool {
        let e = &*self.algebra;
        match spec {
            GroupSpec::Sl { n } => matrix::det(e, *n, x) == 1,
            GroupSpec::Pgl { n } => {
                e.is_unit(matrix::det(e, *n, x)) && matrix::canonical_scale(e, x) == x
            }
            GroupSpec::Torus { .. } => x.iter().all(|&a| e.is_unit(a)),
            GroupSpec::Product { factors } => split(factors, x)
                .into_iter()
                .zip(factors)
                .all(|(s, f)| self.contains_in(f, s)),
        }
    }

    /// The embedding `G(F) -> G(E)` on entries.
    pub fn embed_base(&self, x: &[u16]) -> Elem {
        x.to_vec()
    }

    /// Whether every entry lies in F.
    pub fn is_base_point(&self, x: &[u16]) -> bool {
        x.iter().all(|&a| self.algebra.is_base(a))
    }

    pub fn format(&self, x: &[u16]) -> String {
        let entries: Vec<String> = x.iter().map(|&a| self.algebra.format(a)).collect();
        format!("[{}]", entries.join(", "))
    }

    fn mul_in(&self, spec: &GroupSpec, a: &[u16], b: &[u16]) -> Elem {
        let e = &*self.algebra;
        match spec {
            GroupSpec::Sl { n } => matrix::mul(e, *n, a, b),
            GroupSpec::Pgl { n } => matrix::canonical_scale(e, &matrix::mul(e, *n, a, b)),
            GroupSpec::Torus { .. } => a.iter().zip(b).map(|(&x, &y)| e.mul(x, y)).collect(),
            GroupSpec::Product { factors } => split(factors, a)
                .into_iter()
                .zip(split(factors, b))
                .zip(factors)
                .flat_map(|((x, y), f)| self.mul_in(f, x, y))
                .collect(),
        }
    }

    fn inv_in(&self, spec: &GroupSpec, a: &[u16]) -> Elem {
        let e = &*self.algebra;
        match spec {
            GroupSpec::Sl { n } => matrix::inverse(e, *n, a).expect("group element"),
            GroupSpec::Pgl { n } => {
                matrix::canonical_scale(e, &matrix::inverse(e, *n, a).expect("group element"))
            }
            GroupSpec::Torus { .. } => a.iter().map(|&x| e.inv(x).expect("unit")).collect(),
            GroupSpec::Product { factors } => split(factors, a)
                .into_iter()
                .zip(factors)
                .flat_map(|(x, f)| self.inv_in(f, x))
                .collect(),
        }
    }

    fn identity_in(spec: &GroupSpec) -> Elem {
        match spec {
            GroupSpec::Sl { n } | GroupSpec::Pgl { n } => matrix::identity(*n),
            GroupSpec::Torus { rank } => vec![1; *rank],
            GroupSpec::Product { factors } => factors.iter().flat_map(Self::identity_in).collect(),
        }
    }

    /// Entrywise `σ_g`.
    pub fn apply_semilinear(&self, g: usize, x: &[u16]) -> Elem {
        x.iter().map(|&a| self.algebra.act(g, a)).collect()
    }

    pub fn apply_outer(&self, theta: &Outer, x: &[u16]) -> Elem {
        self.outer_in(&self.spec, theta, x)
    }

    fn outer_in(&self, spec: &GroupSpec, theta: &Outer, x: &[u16]) -> Elem {
        let e = &*self.algebra;
        match (theta, spec) {
            (Outer::Identity, _) => x.to_vec(),
            (Outer::Flip, GroupSpec::Sl { n } | GroupSpec::Pgl { n }) => {
                let j = matrix::alternating_antidiagonal(e, *n);
                let j_inv = matrix::inverse(e, *n, &j).expect("J is invertible");
                let xt = matrix::transpose(*n, &matrix::inverse(e, *n, x).expect("group element"));
                let y = matrix::mul(e, *n, &matrix::mul(e, *n, &j, &xt), &j_inv);
                if matches!(spec, GroupSpec::Pgl { .. }) {
                    matrix::canonical_scale(e, &y)
                } else {
                    y
                }
            }
            (Outer::Lattice { matrix }, GroupSpec::Torus { rank }) => {
                let b = int_inverse(matrix).expect("validated lattice map");
                (0..*rank)
                    .map(|i| {
                        (0..*rank).fold(1u16, |acc, j| {
                            e.mul(acc, e.pow(x[j], b[j][i]).expect("torus entries are units"))
                        })
                    })
                    .collect()
            }
            (Outer::Product { permutation, parts }, GroupSpec::Product { factors }) => {
                let pieces = split(factors, x);
                let mut out: Vec<Elem> = vec![Vec::new(); factors.len()];
                for i in 0..factors.len() {
                    out[permutation[i]] = self.outer_in(&factors[i], &parts[i], pieces[i]);
                }
                out.concat()
            }
            _ => panic!("{theta:?} does not act on {spec}"),
        }
    }

    /// `x ↦ g x g^-1` for `g` in the adjoint group.
    pub fn apply_inner(&self, g: &[u16], x: &[u16]) -> Elem {
        self.inner_in(&self.spec, g, x)
    }

    fn inner_in(&self, spec: &GroupSpec, g: &[u16], x: &[u16]) -> Elem {
        let e = &*self.algebra;
        match spec {
            GroupSpec::Sl { n } | GroupSpec::Pgl { n } => {
                if g == matrix::identity(*n).as_slice() {
                    return x.to_vec();
                }
                let g_inv = matrix::inverse(e, *n, g).expect("adjoint element");
                let y = matrix::mul(e, *n, &matrix::mul(e, *n, g, x), &g_inv);
                if matches!(spec, GroupSpec::Pgl { .. }) {
                    matrix::canonical_scale(e, &y)
                } else {
                    y
                }
            }
            GroupSpec::Torus { .. } => x.to_vec(),
            GroupSpec::Product { factors } => {
                let adj: Vec<GroupSpec> = factors.iter().map(GroupSpec::adjoint).collect();
                split(&adj, g)
                    .into_iter()
                    .zip(split(factors, x))
                    .zip(factors)
                    .flat_map(|((gi, xi), f)| self.inner_in(f, gi, xi))
                    .collect()
            }
        }
    }

    pub fn aut_identity(&self) -> AutElement {
        AutElement {
            inner: Self::identity_in(&self.spec.adjoint()),
            outer: Outer::Identity,
            semilinear: 0,
        }
    }

    pub fn inner_aut(&self, g: Elem) -> AutElement {
        AutElement {
            inner: g,
            ..self.aut_identity()
        }
    }

    /// `x ↦ θ(σ_g(x))`, the Γ-action twisted by a pinned automorphism.
    pub fn galois_aut(&self, g: usize, theta: &Outer) -> AutElement {
        AutElement {
            outer: theta.normalized(),
            semilinear: g,
            ..self.aut_identity()
        }
    }

    pub fn validate_aut(&self, a: &AutElement) -> Result<()> {
        let adj = self.adjoint();
        if !adj.contains(&a.inner) {
            return Err(Error::InvalidArgument(format!(
                "inner part {} is not in the adjoint group {}",
                adj.format(&a.inner),
                adj.spec
            )));
        }
        if a.semilinear >= self.algebra.group().order() {
            return Err(Error::InvalidArgument(format!(
                "no Γ element {}",
                a.semilinear
            )));
        }
        a.outer.validate(&self.spec)
    }

    pub fn apply_aut(&self, a: &AutElement, x: &[u16]) -> Elem {
        let y = self.apply_semilinear(a.semilinear, x);
        let y = self.apply_outer(&a.outer, &y);
        self.apply_inner(&a.inner, &y)
    }

    /// `a ∘ b`.
    pub fn compose_aut(&self, a: &AutElement, b: &AutElement) -> AutElement {
        let adj = self.adjoint();
        let moved = adj.apply_outer(
            &a.outer.on_adjoint(),
            &adj.apply_semilinear(a.semilinear, &b.inner),
        );
        AutElement {
            inner: adj.mul(&a.inner, &moved),
            outer: a.outer.compose(&b.outer, &self.spec),
            semilinear: self.algebra.group().mul_idx(a.semilinear, b.semilinear),
        }
    }

    pub fn inverse_aut(&self, a: &AutElement) -> AutElement {
        let adj = self.adjoint();
        let s_inv = self.algebra.group().inv_idx(a.semilinear);
        let theta_inv = a.outer.inverse();
        // a^-1 = (θσ)^-1 ∘ Inn(g^-1) = Inn((θσ)^-1(g^-1)) ∘ (θσ)^-1
        let g_inv = adj.inv(&a.inner);
        let moved = adj.apply_semilinear(s_inv, &adj.apply_outer(&theta_inv.on_adjoint(), &g_inv));
        AutElement {
            inner: moved,
            outer: theta_inv.normalized(),
            semilinear: s_inv,
        }
    }

    fn enumerate_in(&self, spec: &GroupSpec) -> Result<Vec<Elem>> {
        let e = &*self.algebra;
        match spec {
            GroupSpec::Sl { n } => enumerate_matrices(e, *n, false),
            GroupSpec::Pgl { n } => enumerate_matrices(e, *n, true),
            GroupSpec::Torus { rank } => {
                let units = e.units();
                Ok(cartesian(&vec![
                    units
                        .iter()
                        .map(|&u| vec![u])
                        .collect::<Vec<_>>();
                    *rank
                ]))
            }
            GroupSpec::Product { factors } => {
                let parts = factors
                    .iter()
                    .map(|f| self.enumerate_in(f))
                    .collect::<Result<Vec<_>>>()?;
                Ok(cartesian(&parts))
            }
        }
    }
}

fn contains_pgl(spec: &GroupSpec) -> bool {
    match spec {
        GroupSpec::Pgl { .. } => true,
        GroupSpec::Product { factors } => factors.iter().any(contains_pgl),
        _ => false,
    }
}

fn spec_order(spec: &GroupSpec, fields: &[u128]) -> u128 {
    let sl = |n: usize, q: u128| -> u128 {
        let mut o = q.saturating_pow((n * (n - 1) / 2) as u32);
        for k in 2..=n {
            o = o.saturating_mul(q.saturating_pow(k as u32) - 1);
        }
        o
    };
    match spec {
        // |PGL_n(F_q)| = |SL_n(F_q)|
        GroupSpec::Sl { n } | GroupSpec::Pgl { n } => fields
            .iter()
            .fold(1u128, |acc, &q| acc.saturating_mul(sl(*n, q))),
        GroupSpec::Torus { rank } => fields
            .iter()
            .fold(1u128, |acc, &q| acc.saturating_mul(q - 1))
            .saturating_pow(*rank as u32),
        GroupSpec::Product { factors } => factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(spec_order(f, fields))),
    }
}

fn split<'a>(factors: &[GroupSpec], x: &'a [u16]) -> Vec<&'a [u16]> {
    let mut out = Vec::with_capacity(factors.len());
    let mut start = 0;
    for f in factors {
        let w = f.width();
        out.push(&x[start..start + w]);
        start += w;
    }
    out
}

fn cartesian(parts: &[Vec<Elem>]) -> Vec<Elem> {
    parts.iter().fold(vec![Vec::new()], |acc, choices| {
        acc.iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(c);
                    v
                })
            })
            .collect()
    })
}

/// `SL_n(E)`, or canonical representatives of `PGL_n(E)`: the first `n-1`
/// rows run over all choices and the last row is solved for from the linear
/// form `det = sum_j r_j C_j`.
fn enumerate_matrices(e: &FiniteAlgebra, n: usize, projective: bool) -> Result<Vec<Elem>> {
    let size = e.size();
    let prefix_len = n * (n - 1);
    let prefixes = (size as u128)
        .checked_pow(prefix_len as u32)
        .unwrap_or(u128::MAX);
    if prefixes > RAW_SEARCH_LIMIT {
        return Err(Error::size(
            "matrix enumeration prefixes",
            prefixes,
            RAW_SEARCH_LIMIT,
        ));
    }
    let targets: Vec<u16> = if projective { e.units() } else { vec![1] };
    let mut out = Vec::new();
    let mut a = vec![0u16; n * n];
    let mut digits = vec![0usize; prefix_len];
    'prefix: loop {
        for (slot, &d) in a.iter_mut().zip(&digits) {
            *slot = d as u16;
        }
        let first_ok = !projective || a[..n].iter().find(|&&x| x != 0) == Some(&1);
        if first_ok {
            let c = matrix::last_row_cofactors(e, n, &a);
            if let Some(j0) = c.iter().position(|&x| e.is_unit(x)) {
                let c0_inv = e.inv(c[j0]).expect("unit");
                let others: Vec<usize> = (0..n).filter(|&j| j != j0).collect();
                let mut free = vec![0usize; n - 1];
                loop {
                    let partial = others
                        .iter()
                        .zip(&free)
                        .fold(0u16, |acc, (&j, &v)| e.add(acc, e.mul(v as u16, c[j])));
                    for &t in &targets {
                        let mut row = vec![0u16; n];
                        for (&j, &v) in others.iter().zip(&free) {
                            row[j] = v as u16;
                        }
                        row[j0] = e.mul(e.sub(t, partial), c0_inv);
                        let mut m = a.clone();
                        m[prefix_len..].copy_from_slice(&row);
                        out.push(m);
                    }
                    if !odometer(&mut free, size) {
                        break;
                    }
                }
            } else if !c.iter().all(|&x| x == 0) {
                // no unit cofactor (E not a field): test every last row
                let mut row = vec![0usize; n];
                loop {
                    let d = row
                        .iter()
                        .zip(&c)
                        .fold(0u16, |acc, (&r, &cj)| e.add(acc, e.mul(r as u16, cj)));
                    if (projective && e.is_unit(d)) || (!projective && d == 1) {
                        let mut m = a.clone();
                        for (slot, &r) in m[prefix_len..].iter_mut().zip(&row) {
                            *slot = r as u16;
                        }
                        out.push(m);
                    }
                    if !odometer(&mut row, size) {
                        break;
                    }
                }
            }
        }
        if !odometer(&mut digits, size) {
            break 'prefix;
        }
    }
    out.sort();
    Ok(out)
}

/// Advance a little-endian counter; false once it wraps.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

impl GroupOps for PointGroup {
    type Elem = Elem;

    fn identity(&self) -> Elem {
        Self::identity_in(&self.spec)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul_in(&self.spec, a, b)
    }

    fn inv(&self, a: &Elem) -> Elem {
        self.inv_in(&self.spec, a)
    }

    fn elements(&self) -> Result<Vec<Elem>> {
        let order = self.order();
        if order > MAX_ENUMERATION {
            return Err(Error::size(
                format!("{} over the algebra", self.spec),
                order,
                MAX_ENUMERATION,
            ));
        }
        let mut out = self.enumerate_in(&self.spec)?;
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
