//! Twisted Γ-actions on `G(E)` and their fixed-point groups.

use std::collections::HashSet;

use super::{matrix, AutElement, Elem, GroupSpec, Outer, PointGroup};
use crate::error::{Error, Result};
use crate::groups::{
    h1_classes_generic, subgroup, z1_cocycles_generic, FiniteGroup, GroupOps, H1Class, SEARCH_LIMIT,
};

/// A twisted action `γ ↦ c(γ) ∘ θ_(alpha(γ)) ∘ σ_γ` on `G(E)`.
#[derive(Clone, Debug)]
pub struct TwistSpec {
    pub group: PointGroup,
    /// One pinned automorphism per element of Γ; a homomorphism.
    pub alpha: Vec<Outer>,
    /// One automorphism per element of Γ, satisfying the cocycle identity for
    /// the action through `alpha`.
    pub cocycle: Vec<AutElement>,
}

impl TwistSpec {
    pub fn new(group: PointGroup, alpha: Vec<Outer>, cocycle: Vec<AutElement>) -> Result<Self> {
        let t = TwistSpec {
            group,
            alpha: alpha.iter().map(Outer::normalized).collect(),
            cocycle,
        };
        t.validate()?;
        Ok(t)
    }

    /// Untwisted: trivial alpha and trivial cocycle.
    pub fn trivial(group: PointGroup) -> Self {
        let m = group.algebra().group().order();
        TwistSpec {
            alpha: vec![Outer::Identity; m],
            cocycle: vec![group.aut_identity(); m],
            group,
        }
    }

    /// Inner cocycle given by adjoint-group values.
    pub fn inner(group: PointGroup, alpha: Vec<Outer>, values: Vec<Elem>) -> Result<Self> {
        let cocycle = values.into_iter().map(|g| group.inner_aut(g)).collect();
        Self::new(group, alpha, cocycle)
    }

    pub fn gamma(&self) -> &FiniteGroup {
        self.group.algebra().group()
    }

    /// `a_γ = θ_(alpha(γ)) ∘ σ_γ`.
    pub fn galois(&self, g: usize) -> AutElement {
        self.group.galois_aut(g, &self.alpha[g])
    }

    /// `*_c(γ) = c(γ) ∘ a_γ`.
    pub fn twisted(&self, g: usize) -> AutElement {
        self.group.compose_aut(&self.cocycle[g], &self.galois(g))
    }

    pub fn validate(&self) -> Result<()> {
        let gamma = self.gamma();
        let m = gamma.order();
        let spec = self.group.spec();
        if self.alpha.len() != m || self.cocycle.len() != m {
            return Err(Error::InvalidArgument(format!(
                "alpha and cocycle need {m} values"
            )));
        }
        for a in &self.alpha {
            a.validate(spec)?;
        }
        for g in 0..m {
            for h in 0..m {
                if self.alpha[gamma.mul_idx(g, h)] != self.alpha[g].compose(&self.alpha[h], spec) {
                    return Err(Error::InvalidArgument(format!(
                        "alpha is not a homomorphism at ({g}, {h})"
                    )));
                }
            }
        }
        for c in &self.cocycle {
            self.group.validate_aut(c)?;
        }
        if let Some((g, h)) = cocycle_failure(&self.group, &self.alpha, &self.cocycle) {
            return Err(Error::Verification(format!(
                "cocycle identity fails at ({g}, {h})"
            )));
        }
        Ok(())
    }
}

/// First pair where `c(gh) = c(g) ∘ a_g ∘ c(h) ∘ a_g^-1` fails.
fn cocycle_failure(
    group: &PointGroup,
    alpha: &[Outer],
    c: &[AutElement],
) -> Option<(usize, usize)> {
    let gamma = group.algebra().group();
    let m = gamma.order();
    for g in 0..m {
        let a = group.galois_aut(g, &alpha[g]);
        let a_inv = group.inverse_aut(&a);
        for h in 0..m {
            let rhs = group.compose_aut(
                &group.compose_aut(&c[g], &a),
                &group.compose_aut(&c[h], &a_inv),
            );
            if c[gamma.mul_idx(g, h)] != rhs {
                return Some((g, h));
            }
        }
    }
    None
}

/// An explicitly listed subgroup of a [`PointGroup`], sorted, with a
/// generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGroup {
    pub elements: Vec<Elem>,
    pub generators: Vec<Elem>,
}

/// Grow `set` to the closure under right multiplication by `gens`, failing
/// if it leaves `allowed`.
fn close(
    ops: &PointGroup,
    set: &mut HashSet<Elem>,
    gens: &[Elem],
    allowed: Option<&HashSet<Elem>>,
) -> Result<()> {
    let mut frontier: Vec<Elem> = set.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = ops.mul(&x, g);
            if !set.contains(&y) {
                if allowed.is_some_and(|a| !a.contains(&y)) {
                    return Err(Error::Verification(format!(
                        "fixed points are not closed: {} is missing",
                        ops.format(&y)
                    )));
                }
                set.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(())
}

/// Check that `elements` is a subgroup and pick generators greedily.
pub fn explicit_group(ops: &PointGroup, mut elements: Vec<Elem>) -> Result<ExplicitGroup> {
    elements.sort();
    elements.dedup();
    let allowed: HashSet<Elem> = elements.iter().cloned().collect();
    let id = ops.identity();
    if !allowed.contains(&id) {
        return Err(Error::Verification("identity is not a fixed point".into()));
    }
    let mut span = HashSet::from([id]);
    let mut generators = Vec::new();
    for x in &elements {
        if !span.contains(x) {
            generators.push(x.clone());
            close(ops, &mut span, &generators, Some(&allowed))?;
        }
    }
    Ok(ExplicitGroup {
        elements,
        generators,
    })
}

impl ExplicitGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &[u16]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(x))
            .is_ok()
    }

    pub fn center(&self, ops: &PointGroup) -> Vec<Elem> {
        subgroup::center(ops, &self.elements, &self.generators)
    }

    pub fn derived_subgroup(&self, ops: &PointGroup) -> Vec<Elem> {
        let mut out: Vec<Elem> = subgroup::derived_subgroup(ops, &self.generators)
            .into_iter()
            .collect();
        out.sort();
        out
    }

    pub fn abelianization_order(&self, ops: &PointGroup) -> usize {
        self.order() / self.derived_subgroup(ops).len()
    }
}

/// `{x ∈ G(E) : c(γ)(a_γ(x)) = x}`, tested on generators of Γ.
pub fn twisted_fixed_points(t: &TwistSpec) -> Result<ExplicitGroup> {
    t.validate()?;
    let gens = t.gamma().generators();
    let maps: Vec<AutElement> = gens.iter().map(|&g| t.twisted(g)).collect();
    let fixed: Vec<Elem> = t
        .group
        .elements()?
        .into_iter()
        .filter(|x| maps.iter().all(|a| t.group.apply_aut(a, x) == *x))
        .collect();
    explicit_group(&t.group, fixed)
}

/// `c_a(γ) = a^-1 ∘ a_γ ∘ a ∘ a_γ^-1` for an automorphism `a` of `G_E`
/// (no semilinear part).
pub fn induced_cocycle(
    group: &PointGroup,
    alpha: &[Outer],
    a: &AutElement,
) -> Result<Vec<AutElement>> {
    group.validate_aut(a)?;
    if a.semilinear != 0 {
        return Err(Error::InvalidArgument(
            "induced cocycles need an automorphism over E".into(),
        ));
    }
    let m = group.algebra().group().order();
    if alpha.len() != m {
        return Err(Error::InvalidArgument(format!("alpha needs {m} values")));
    }
    let a_inv = group.inverse_aut(a);
    Ok((0..m)
        .map(|g| {
            let ag = group.galois_aut(g, &alpha[g]);
            let ag_inv = group.inverse_aut(&ag);
            group.compose_aut(
                &group.compose_aut(&a_inv, &ag),
                &group.compose_aut(a, &ag_inv),
            )
        })
        .collect())
}

fn adjoint_action<'a>(
    group: &'a PointGroup,
    alpha: &'a [Outer],
) -> impl Fn(usize, &Elem) -> Elem + 'a {
    let adj = group.adjoint();
    move |g: usize, x: &Elem| adj.apply_outer(&alpha[g].on_adjoint(), &adj.apply_semilinear(g, x))
}

/// Every inner cocycle `Γ -> G^ad(E)` for the action through `alpha`.
pub fn inner_cocycles(group: &PointGroup, alpha: &[Outer]) -> Result<Vec<Vec<Elem>>> {
    let act = adjoint_action(group, alpha);
    z1_cocycles_generic(
        group.algebra().group(),
        &group.adjoint(),
        &act,
        SEARCH_LIMIT,
    )
}

pub fn inner_h1_classes(
    group: &PointGroup,
    alpha: &[Outer],
    cocycles: &[Vec<Elem>],
) -> Result<Vec<H1Class<Elem>>> {
    let act = adjoint_action(group, alpha);
    h1_classes_generic(group.algebra().group(), &group.adjoint(), &act, cocycles)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSplitReport {
    pub quasi_split: bool,
    /// The first pinning datum moved by some `*_c(γ)`.
    pub failure: Option<String>,
    /// Fixed points inside the standard Borel, when quasi-split.
    pub borel_witness: Option<ExplicitGroup>,
}

struct Pinning {
    /// `I + E_(i,i+1)` in each matrix factor.
    root_vectors: Vec<Elem>,
    /// Generators of the diagonal torus.
    torus: Vec<Elem>,
    /// `I + e E_(i,j)`, `i < j`, all e.
    unipotent: Vec<Elem>,
}

fn matrix_factors(spec: &GroupSpec) -> Vec<(usize, usize, bool)> {
    // (offset, n, projective)
    fn walk(spec: &GroupSpec, offset: &mut usize, out: &mut Vec<(usize, usize, bool)>) {
        match spec {
            GroupSpec::Sl { n } => out.push((*offset, *n, false)),
            GroupSpec::Pgl { n } => out.push((*offset, *n, true)),
            GroupSpec::Torus { .. } => {}
            GroupSpec::Product { factors } => {
                let mut o = *offset;
                for f in factors {
                    walk(f, &mut o, out);
                    o += f.width();
                }
                return;
            }
        }
    }
    let mut out = Vec::new();
    walk(spec, &mut 0, &mut out);
    out
}

fn standard_pinning(group: &PointGroup) -> Pinning {
    let e = group.algebra();
    let id = group.identity();
    let units = e.units();
    let mut p = Pinning {
        root_vectors: Vec::new(),
        torus: Vec::new(),
        unipotent: Vec::new(),
    };
    for (off, n, projective) in matrix_factors(group.spec()) {
        let with = |entries: &[(usize, usize, u16)]| {
            let mut x = id.clone();
            for &(i, j, v) in entries {
                x[off + i * n + j] = v;
            }
            x
        };
        for i in 0..n - 1 {
            p.root_vectors.push(with(&[(i, i + 1, 1)]));
            for &u in &units {
                let u_inv = e.inv(u).expect("unit");
                p.torus.push(with(&[(i, i, u), (i + 1, i + 1, u_inv)]));
                if projective {
                    let mut x = with(&[(i, i, u)]);
                    let slice = matrix::canonical_scale(e, &x[off..off + n * n]);
                    x[off..off + n * n].copy_from_slice(&slice);
                    p.torus.push(x);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for v in 1..e.size() as u16 {
                    p.unipotent.push(with(&[(i, j, v)]));
                }
            }
        }
    }
    p
}

fn in_borel(spec: &GroupSpec, x: &[u16]) -> bool {
    matrix_factors(spec)
        .into_iter()
        .all(|(off, n, _)| matrix::is_upper_triangular(n, &x[off..off + n * n]))
}

fn in_torus(spec: &GroupSpec, x: &[u16]) -> bool {
    matrix_factors(spec)
        .into_iter()
        .all(|(off, n, _)| matrix::is_diagonal(n, &x[off..off + n * n]))
}

/// The first pinning datum moved by some `*_c(γ)`, if any.
fn pinning_failure(t: &TwistSpec, pin: &Pinning) -> Option<String> {
    let group = &t.group;
    let spec = group.spec();
    let roots: HashSet<&Elem> = pin.root_vectors.iter().collect();
    (0..t.gamma().order()).find_map(|g| {
        let a = t.twisted(g);
        let moved = |what: &str, x: &Elem| format!("γ = {g} moves {what} {}", group.format(x));
        pin.root_vectors
            .iter()
            .find(|x| !roots.contains(&group.apply_aut(&a, x)))
            .map(|x| moved("root vector", x))
            .or_else(|| {
                pin.torus
                    .iter()
                    .find(|x| !in_torus(spec, &group.apply_aut(&a, x)))
                    .map(|x| moved("torus element", x))
            })
            .or_else(|| {
                pin.unipotent
                    .iter()
                    .find(|x| !in_borel(spec, &group.apply_aut(&a, x)))
                    .map(|x| moved("Borel element", x))
            })
    })
}

/// Whether each `*_c(γ)` preserves the standard pinning: the upper-triangular
/// Borel, the diagonal torus and the set of simple root vectors
/// `I + E_(i,i+1)`. Tori have nothing to move.
pub fn is_quasi_split_twist(t: &TwistSpec) -> Result<QuasiSplitReport> {
    t.validate()?;
    let pin = standard_pinning(&t.group);
    if let Some(failure) = pinning_failure(t, &pin) {
        return Ok(QuasiSplitReport {
            quasi_split: false,
            failure: Some(failure),
            borel_witness: None,
        });
    }
    let spec = t.group.spec();
    let fixed = twisted_fixed_points(t)?;
    let borel: Vec<Elem> = fixed
        .elements
        .into_iter()
        .filter(|x| in_borel(spec, x))
        .collect();
    Ok(QuasiSplitReport {
        quasi_split: true,
        failure: None,
        borel_witness: Some(explicit_group(&t.group, borel)?),
    })
}

/// Whether some cocycle cohomologous to `t.cocycle` passes the pinning
/// check: searches `c'(γ) = Inn(φ)^-1 ∘ c(γ) ∘ a_γ ∘ Inn(φ) ∘ a_γ^-1` over
/// the adjoint group, identity first.
pub fn is_quasi_split_class(t: &TwistSpec) -> Result<bool> {
    t.validate()?;
    let group = &t.group;
    let pin = standard_pinning(group);
    if pinning_failure(t, &pin).is_none() {
        return Ok(true);
    }
    let m = t.gamma().order();
    let galois: Vec<(AutElement, AutElement)> = (0..m)
        .map(|g| {
            let a = t.galois(g);
            let a_inv = group.inverse_aut(&a);
            (a, a_inv)
        })
        .collect();
    for phi in group.adjoint().elements()? {
        let inn = group.inner_aut(phi);
        let inn_inv = group.inverse_aut(&inn);
        let cocycle = (0..m)
            .map(|g| {
                let (a, a_inv) = &galois[g];
                let left = group.compose_aut(&inn_inv, &t.cocycle[g]);
                let right = group.compose_aut(&group.compose_aut(a, &inn), a_inv);
                group.compose_aut(&left, &right)
            })
            .collect();
        let moved = TwistSpec {
            cocycle,
            ..t.clone()
        };
        if pinning_failure(&moved, &pin).is_none() {
            return Ok(true);
        }
    }
    Ok(false)
}
