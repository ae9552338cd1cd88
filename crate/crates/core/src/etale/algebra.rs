//! The fiber algebra `F[z]/(f)` of a family point, with its Γ-action.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{verify_family_point, FamilyPoint, Orientation};
use crate::algebra::{FMatrix, FieldDescriptor, FieldElement, Poly};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

/// Largest splitting field searched for roots by enumeration.
const ROOT_SEARCH_LIMIT: u64 = 1 << 20;

/// `F[z]/(f)` with γ acting by `z ↦ h_γ(z)`; elements are polynomials
/// reduced modulo f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebra {
    pub field: FieldDescriptor,
    pub group: FiniteGroup,
    pub modulus: Poly,
    pub action: Vec<Poly>,
    pub orientation: Orientation,
}

impl EtaleAlgebra {
    pub(super) fn from_point_unchecked(pt: &FamilyPoint) -> Self {
        EtaleAlgebra {
            field: pt.field.clone(),
            group: pt.group.clone(),
            modulus: pt.f.clone(),
            action: pt.h.clone(),
            orientation: pt.orientation,
        }
    }

    pub fn dimension(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn reduce(&self, x: &Poly) -> Poly {
        x.rem(&self.modulus).expect("modulus is nonzero")
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    /// `γ(x) = x(h_γ(z))`.
    pub fn apply(&self, g: usize, x: &Poly) -> Poly {
        self.reduce(&x.compose(&self.action[g]))
    }

    /// Coordinates in the basis `1, z, ..., z^(m-1)`.
    pub fn coordinates(&self, x: &Poly) -> Vec<FieldElement> {
        let r = self.reduce(x);
        (0..self.dimension()).map(|k| r.coeff(k)).collect()
    }

    pub fn from_coordinates(&self, c: &[FieldElement]) -> Poly {
        Poly::new(&self.field, c.to_vec())
    }

    /// Matrix of γ in the monomial basis (columns are images of `z^k`).
    pub fn action_matrix(&self, g: usize) -> FMatrix {
        let m = self.dimension();
        let mut out = FMatrix::zeros(&self.field, m, m);
        for k in 0..m {
            let zk = Poly::monomial(&self.field, self.field.one(), k);
            for (i, c) in self
                .coordinates(&self.apply(g, &zk))
                .into_iter()
                .enumerate()
            {
                out.set(i, k, c);
            }
        }
        out
    }
}

/// The fiber over a verified point.
pub fn fiber_algebra(pt: &FamilyPoint) -> Result<EtaleAlgebra> {
    let rep = verify_family_point(pt);
    if !rep.passed() {
        return Err(Error::Verification(format!("family point fails:\n{rep}")));
    }
    Ok(EtaleAlgebra::from_point_unchecked(pt))
}

/// Basis of `E^Γ = {x : γ(x) = x for all γ}`, from the kernel of the stacked
/// maps `γ - 1`.
pub fn invariant_subalgebra(alg: &EtaleAlgebra) -> Vec<Poly> {
    let m = alg.dimension();
    let k = &alg.field;
    let n = alg.group.order();
    let mut stacked = FMatrix::zeros(k, n * m, m);
    for g in 0..n {
        let a = alg.action_matrix(g).sub(&FMatrix::identity(k, m));
        for i in 0..m {
            for j in 0..m {
                stacked.set(g * m + i, j, a.get(i, j).clone());
            }
        }
    }
    stacked
        .kernel()
        .iter()
        .map(|v| alg.from_coordinates(v))
        .collect()
}

/// `E ⊗_F K ≅ K^m`: one component per root `β` of f, the component map being
/// `z ↦ β`. Precomposing with γ turns component `β` into component `h_γ(β)`;
/// `permutation[γ][j]` records that index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSplit {
    /// Field the roots live in: the extension, or `None` when the roots are
    /// elements of the algebra itself.
    pub extension: Option<FieldDescriptor>,
    pub roots: Vec<Poly>,
    pub permutation: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct SplitSummary<'a> {
    components: usize,
    roots: Vec<String>,
    permutation: &'a [Vec<usize>],
    transitive: bool,
}

impl TensorSplit {
    pub fn components(&self) -> usize {
        self.roots.len()
    }

    pub fn is_transitive(&self) -> bool {
        let mut orbit = BTreeSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(j) = stack.pop() {
            for p in &self.permutation {
                if orbit.insert(p[j]) {
                    stack.push(p[j]);
                }
            }
        }
        orbit.len() == self.components()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(SplitSummary {
            components: self.components(),
            roots: self.roots.iter().map(|r| r.to_string()).collect(),
            permutation: &self.permutation,
            transitive: self.is_transitive(),
        })
        .expect("summary serializes")
    }
}

/// A field embedding `base -> ext` of finite fields, sending the generator of
/// `base` to its least root (by index) in `ext`.
pub fn embed_field(
    base: &FieldDescriptor,
    ext: &FieldDescriptor,
) -> Result<impl Fn(&FieldElement) -> FieldElement> {
    if !base.is_finite() || !ext.is_finite() {
        return Err(Error::Unsupported(
            "field embeddings are computed for finite fields".into(),
        ));
    }
    if base.characteristic() != ext.characteristic() || ext.degree() % base.degree() != 0 {
        return Err(Error::InvalidArgument(format!(
            "{base} does not embed in {ext}"
        )));
    }
    let image = match base {
        FieldDescriptor::Extension { modulus, .. } => {
            let q = ext.size().expect("finite");
            if q > ROOT_SEARCH_LIMIT {
                return Err(Error::size(
                    "root search",
                    q as u128,
                    ROOT_SEARCH_LIMIT as u128,
                ));
            }
            let m = Poly::new(ext, modulus.iter().map(|&c| ext.from_u64(c)).collect());
            Some(
                ext.elements()
                    .into_iter()
                    .find(|x| ext.is_zero(&m.eval(x)))
                    .expect("finite fields of dividing degree embed"),
            )
        }
        _ => None,
    };
    let ext = ext.clone();
    Ok(move |x: &FieldElement| match (x, &image) {
        (FieldElement::Finite(c), Some(r)) => c.iter().rev().fold(ext.zero(), |acc, &ci| {
            ext.add(&ext.mul(&acc, r), &ext.from_u64(ci))
        }),
        (FieldElement::Finite(c), None) => ext.from_u64(c[0]),
        (FieldElement::Rational(_), _) => unreachable!("finite field elements only"),
    })
}

/// Split `alg ⊗ ext` for a finite extension field `ext` into which f splits.
pub fn tensor_split(alg: &EtaleAlgebra, ext: &FieldDescriptor) -> Result<TensorSplit> {
    let embed = embed_field(&alg.field, ext)?;
    let q = ext.size().expect("finite");
    if q > ROOT_SEARCH_LIMIT {
        return Err(Error::size(
            "root search",
            q as u128,
            ROOT_SEARCH_LIMIT as u128,
        ));
    }
    let f = alg.modulus.map_coeffs(ext, &embed);
    let roots: Vec<FieldElement> = ext
        .elements()
        .into_iter()
        .filter(|x| ext.is_zero(&f.eval(x)))
        .collect();
    if roots.len() != alg.dimension() {
        return Err(Error::Verification(format!(
            "f has {} distinct roots in {ext}, needs {}",
            roots.len(),
            alg.dimension()
        )));
    }
    let h: Vec<Poly> = alg
        .action
        .iter()
        .map(|p| p.map_coeffs(ext, &embed))
        .collect();
    let permutation = h
        .iter()
        .map(|hg| {
            roots
                .iter()
                .map(|r| {
                    let img = hg.eval(r);
                    roots
                        .iter()
                        .position(|s| *s == img)
                        .expect("h_γ permutes the roots of f")
                })
                .collect()
        })
        .collect();
    Ok(TensorSplit {
        extension: Some(ext.clone()),
        roots: roots.into_iter().map(|r| Poly::constant(ext, r)).collect(),
        permutation,
    })
}

/// Split `E ⊗_F E` using the roots `h_j(z)` of f inside E; works over any
/// base field, including the rationals.
pub fn tensor_split_over_self(alg: &EtaleAlgebra) -> Result<TensorSplit> {
    let roots: Vec<Poly> = alg.action.iter().map(|h| alg.reduce(h)).collect();
    for r in &roots {
        if !alg.reduce(&alg.modulus.compose(r)).is_zero() {
            return Err(Error::Verification(format!("{r} is not a root of f in E")));
        }
    }
    let mut permutation = Vec::with_capacity(roots.len());
    for hg in &alg.action {
        let row = roots
            .iter()
            .map(|r| {
                let img = alg.reduce(&hg.compose(r));
                roots.iter().position(|s| *s == img).ok_or_else(|| {
                    Error::Verification("the conjugates are not permuted by Γ".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        permutation.push(row);
    }
    Ok(TensorSplit {
        extension: None,
        roots,
        permutation,
    })
}
