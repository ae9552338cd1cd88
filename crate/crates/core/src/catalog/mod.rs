//! Index sets `(Γ, [α])` for a based root datum and catalogs of twisted
//! fixed-point groups over a finite field.
//!
//! A catalog lists, for every root datum of one rank with a matrix model,
//! every index entry with cyclic Γ, the family point of `F_(q^m) / F_q` and
//! one or more inner cocycles, the fixed-point group and its fingerprint.
//! Fingerprints are a deduplication key, not an isomorphism invariant.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::algebra::FieldDescriptor;
use crate::descent::{
    inner_cocycles, inner_h1_classes, is_quasi_split_class, pinned_outer, twisted_fixed_points, Elem, FiniteAlgebra,
    GroupSpec, Outer, PointGroup, TwistSpec,
};
use crate::error::{Error, Result};
use crate::etale::{construct_point_finite_field, fiber_algebra, verify_family_point, FamilyPoint};
use crate::groups::{group_catalog, hom_classes, FiniteGroup, GroupOps, MAX_CATALOG_ORDER};
use crate::root_data::{based_automorphism_group, enumerate_root_data, torus2_hom_classes, BasedAut, BasedRootDatum};

pub const CATALOG_VERSION: u32 = 1;

/// One `(Γ, [α])`: a group and a representative homomorphism into the based
/// automorphism group, listed per element of Γ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub gamma: FiniteGroup,
    pub alpha: Vec<BasedAut>,
}

impl IndexEntry {
    pub fn is_trivial(&self) -> bool {
        self.alpha.iter().all(|a| a.matrix == crate::root_data::lattice::identity(a.matrix.len()))
    }
}

/// Every group of order at most `order_bound` with one homomorphism per
/// conjugacy class. Rank-two tori use the finite subgroups of `GL2(Z)`.
pub fn build_index_set(datum: &BasedRootDatum, order_bound: usize) -> Result<Vec<IndexEntry>> {
    if order_bound == 0 || order_bound > MAX_CATALOG_ORDER {
        return Err(Error::InvalidArgument(format!(
            "order bound must be in 1..={MAX_CATALOG_ORDER}, got {order_bound}"
        )));
    }
    let mut out = Vec::new();
    if datum.semisimple_rank() == 0 && datum.rank() == 2 {
        for gamma in group_catalog(order_bound)? {
            for mats in torus2_hom_classes(&gamma) {
                let alpha = mats
                    .into_iter()
                    .map(|matrix| BasedAut {
                        matrix,
                        base_permutation: Vec::new(),
                    })
                    .collect();
                out.push(IndexEntry {
                    gamma: gamma.clone(),
                    alpha,
                });
            }
        }
        return Ok(out);
    }
    let aut = based_automorphism_group(datum)?;
    for gamma in group_catalog(order_bound)? {
        for hom in hom_classes(&gamma, &aut.table) {
            out.push(IndexEntry {
                gamma: gamma.clone(),
                alpha: hom.iter().map(|&i| aut.elements[i].clone()).collect(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CocycleMode {
    /// Only the trivial cocycle.
    #[default]
    Trivial,
    /// One cocycle per class in `H^1(Γ, G^ad(E))`.
    Exhaustive,
}

impl FromStr for CocycleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(CocycleMode::Trivial),
            "exhaustive" => Ok(CocycleMode::Exhaustive),
            other => Err(Error::InvalidArgument(format!("unknown cocycle mode '{other}'"))),
        }
    }
}

impl fmt::Display for CocycleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CocycleMode::Trivial => "trivial",
            CocycleMode::Exhaustive => "exhaustive",
        })
    }
}

/// `(order, center order, abelianization order, quasi-split)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub center: usize,
    pub abelianization: usize,
    pub quasi_split: bool,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.order, self.center, self.abelianization, self.quasi_split)
    }
}

/// Fingerprint of the fixed-point group of `t`; the flag is
/// [`is_quasi_split_class`].
pub fn fingerprint(t: &TwistSpec) -> Result<Fingerprint> {
    let fixed = twisted_fixed_points(t)?;
    Ok(Fingerprint {
        order: fixed.order(),
        center: fixed.center(&t.group).len(),
        abelianization: fixed.abelianization_order(&t.group),
        quasi_split: is_quasi_split_class(t)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u64,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub datum: String,
    pub group: GroupSpec,
    pub gamma: String,
    pub alpha: Vec<Outer>,
    pub point: String,
    /// Inner cocycle values in the adjoint group, indexed by the point's Γ.
    pub cocycle: Vec<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Fingerprint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A datum, or an index entry, that produced no groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub datum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub rank: usize,
    pub field: FieldInfo,
    pub order_bound: usize,
    pub cocycles: CocycleMode,
    /// Root data by id.
    pub data: BTreeMap<String, BasedRootDatum>,
    /// Family points (JSON form) by id.
    pub points: BTreeMap<String, Value>,
    pub entries: Vec<CatalogEntry>,
    pub skipped: Vec<Skipped>,
    /// Distinct fingerprints, sorted.
    pub fingerprints: Vec<Fingerprint>,
}

/// First 16 hex digits of the SHA-256 of the compact JSON form.
pub fn component_id<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("component serializes");
    let digest = format!("{:x}", Sha256::digest(&bytes));
    digest[..16].to_string()
}

/// The Γ-point and relabelled alpha for a cyclic index entry.
fn cyclic_point(entry: &IndexEntry, field: &FieldInfo) -> Result<(FamilyPoint, Vec<usize>)> {
    let m = entry.gamma.order();
    let pt = construct_point_finite_field(field.p, field.k, m)?;
    let iso = entry
        .gamma
        .isomorphism_to(&pt.group)
        .ok_or_else(|| Error::Unsupported(format!("{} is not cyclic", entry.gamma.name())))?;
    Ok((pt, iso))
}

struct Built {
    entries: Vec<CatalogEntry>,
    point: Option<(String, Value)>,
}

fn build_entries(
    datum_id: &str,
    spec: &GroupSpec,
    entry: &IndexEntry,
    field: &FieldInfo,
    mode: CocycleMode,
) -> Result<Built> {
    let (pt, iso) = cyclic_point(entry, field)?;
    let point_json = pt.to_json();
    let point_id = component_id(&point_json);
    let mut alpha = vec![Outer::Identity; iso.len()];
    for (g, aut) in entry.alpha.iter().enumerate() {
        alpha[iso[g]] = pinned_outer(spec, aut)?;
    }
    let algebra = Arc::new(FiniteAlgebra::new(&fiber_algebra(&pt)?)?);
    let group = PointGroup::new(spec.clone(), algebra)?;
    let cocycles: Vec<Vec<Elem>> = match mode {
        CocycleMode::Trivial => vec![vec![group.adjoint().identity(); iso.len()]],
        CocycleMode::Exhaustive => {
            let all = inner_cocycles(&group, &alpha)?;
            inner_h1_classes(&group, &alpha, &all)?
                .into_iter()
                .map(|c| all[c.representative].clone())
                .collect()
        }
    };
    let mut entries = Vec::new();
    for cocycle in cocycles {
        let twist = TwistSpec::inner(group.clone(), alpha.clone(), cocycle.clone())?;
        let (fingerprint, error) = match fingerprint(&twist) {
            Ok(f) => (Some(f), None),
            Err(e @ Error::SizeLimit { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        let id = component_id(&(datum_id, &entry.gamma.name(), &alpha, &point_id, &cocycle));
        entries.push(CatalogEntry {
            id,
            datum: datum_id.to_string(),
            group: spec.clone(),
            gamma: entry.gamma.name().to_string(),
            alpha: alpha.clone(),
            point: point_id.clone(),
            cocycle,
            fingerprint,
            error,
        });
    }
    Ok(Built {
        entries,
        point: Some((point_id, point_json)),
    })
}

/// Every supported datum of exactly rank `rank`, every index entry with
/// cyclic Γ of order at most `order_bound`, the point of `F_(q^m) / F_q`
/// and the cocycles of `mode`. Size cutoffs are recorded per entry.
pub fn build_catalog(rank: usize, p: u64, k: u32, order_bound: usize, mode: CocycleMode) -> Result<Catalog> {
    FieldDescriptor::finite(p, k)?;
    let field = FieldInfo { p, k };
    let mut catalog = Catalog {
        version: CATALOG_VERSION,
        rank,
        field: field.clone(),
        order_bound,
        cocycles: mode,
        data: BTreeMap::new(),
        points: BTreeMap::new(),
        entries: Vec::new(),
        skipped: Vec::new(),
        fingerprints: Vec::new(),
    };
    for datum in enumerate_root_data(rank)? {
        let datum_id = component_id(&datum);
        let name = datum.name();
        let skip = |gamma: Option<&FiniteGroup>, e: Error| Skipped {
            datum: name.clone(),
            gamma: gamma.map(|g| g.name().to_string()),
            reason: e.to_string(),
        };
        let spec = match GroupSpec::from_datum(&datum) {
            Ok(s) => s,
            Err(e @ Error::Unsupported(_)) => {
                catalog.skipped.push(skip(None, e));
                continue;
            }
            Err(e) => return Err(e),
        };
        let index = build_index_set(&datum, order_bound)?;
        catalog.data.insert(datum_id.clone(), datum.clone());
        for entry in &index {
            if !entry.gamma.is_cyclic() {
                catalog.skipped.push(skip(
                    Some(&entry.gamma),
                    Error::Unsupported("no finite-field point for non-cyclic Γ".into()),
                ));
                continue;
            }
            match build_entries(&datum_id, &spec, entry, &field, mode) {
                Ok(built) => {
                    if let Some((id, json)) = built.point {
                        catalog.points.insert(id, json);
                    }
                    catalog.entries.extend(built.entries);
                }
                Err(e @ (Error::SizeLimit { .. } | Error::Unsupported(_))) => {
                    catalog.skipped.push(skip(Some(&entry.gamma), e));
                }
                Err(e) => return Err(e),
            }
        }
    }
    let mut prints: Vec<Fingerprint> = catalog.entries.iter().filter_map(|e| e.fingerprint).collect();
    prints.sort();
    prints.dedup();
    catalog.fingerprints = prints;
    Ok(catalog)
}

impl Catalog {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes") + "\n"
    }

    /// Parse and re-verify: component ids match their contents, every point
    /// passes verification, every cocycle satisfies the cocycle identity.
    pub fn from_json_str(text: &str) -> Result<Catalog> {
        let catalog: Catalog = serde_json::from_str(text)?;
        catalog.verify()?;
        Ok(catalog)
    }

    pub fn verify(&self) -> Result<()> {
        if self.version != CATALOG_VERSION {
            return Err(Error::Unsupported(format!("catalog version {}", self.version)));
        }
        for (id, d) in &self.data {
            if component_id(d) != *id {
                return Err(Error::Verification(format!("datum id {id} does not match")));
            }
        }
        let mut algebras: BTreeMap<&str, Arc<FiniteAlgebra>> = BTreeMap::new();
        for (id, json) in &self.points {
            if component_id(json) != *id {
                return Err(Error::Verification(format!("point id {id} does not match")));
            }
            let pt = FamilyPoint::from_json(json)?;
            let report = verify_family_point(&pt);
            if !report.passed() {
                return Err(Error::Verification(format!("point {id}: {report:?}")));
            }
            algebras.insert(id, Arc::new(FiniteAlgebra::new(&fiber_algebra(&pt)?)?));
        }
        for e in &self.entries {
            if !self.data.contains_key(&e.datum) {
                return Err(Error::Verification(format!("entry {} names unknown datum {}", e.id, e.datum)));
            }
            let algebra = algebras
                .get(e.point.as_str())
                .ok_or_else(|| Error::Verification(format!("entry {} names unknown point {}", e.id, e.point)))?;
            let group = PointGroup::new(e.group.clone(), algebra.clone())?;
            TwistSpec::inner(group, e.alpha.clone(), e.cocycle.clone())
                .map_err(|err| Error::Verification(format!("entry {}: {err}", e.id)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
