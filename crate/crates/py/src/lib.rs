//! Python bindings. Structured values cross the boundary as JSON strings.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use versal_core::catalog::{build_catalog, fingerprint, Catalog, CocycleMode};
use versal_core::descent::{FiniteAlgebra, GroupSpec, Outer, PointGroup, TwistSpec};
use versal_core::etale::{
    construct_point_finite_field, cyclotomic_point as cyclotomic, fiber_algebra, verify_family_point, FamilyPoint,
};
use versal_core::groups::{catalog_group, h1_classes, hom_classes, z1_cocycles, GroupAction};
use versal_core::root_data::enumerate_root_data;
use versal_core::Error;

create_exception!(versal, VersalError, PyException);
create_exception!(versal, SizeLimitError, VersalError);
create_exception!(versal, UnsupportedError, VersalError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::SizeLimit { .. } => SizeLimitError::new_err(msg),
        Error::Unsupported(_) => UnsupportedError::new_err(msg),
        _ => VersalError::new_err(msg),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    VersalError::new_err(e.to_string())
}

/// Point of the family over `F_{p^k}` with cyclic group of order `m`, as JSON.
#[pyfunction]
fn finite_field_point(p: u64, k: u32, m: usize) -> PyResult<String> {
    let pt = construct_point_finite_field(p, k, m).map_err(to_py)?;
    serde_json::to_string(&pt.to_json()).map_err(json_err)
}

#[pyfunction]
fn cyclotomic_point(n: u64) -> PyResult<String> {
    let pt = cyclotomic(n).map_err(to_py)?;
    serde_json::to_string(&pt.to_json()).map_err(json_err)
}

/// `(passed, failed conditions)` for a point given as JSON.
#[pyfunction]
fn verify_point(point: &str) -> PyResult<(bool, Vec<String>)> {
    let value = serde_json::from_str(point).map_err(json_err)?;
    let pt = FamilyPoint::from_json(&value).map_err(to_py)?;
    let report = verify_family_point(&pt);
    let failed = report.failures().into_iter().map(|c| c.condition.clone()).collect();
    Ok((report.passed(), failed))
}

#[pyfunction]
fn root_data(rank: usize) -> PyResult<String> {
    let data = enumerate_root_data(rank).map_err(to_py)?;
    serde_json::to_string(&data).map_err(json_err)
}

/// Conjugacy classes of homomorphisms between two catalog groups.
#[pyfunction]
fn hom_class_count(source: &str, target: &str) -> PyResult<usize> {
    let s = catalog_group(source).map_err(to_py)?;
    let t = catalog_group(target).map_err(to_py)?;
    Ok(hom_classes(&s, &t).len())
}

/// `(cocycles, classes)` for the trivial action of `gamma` on `coeffs`.
#[pyfunction]
fn h1_trivial_action(gamma: &str, coeffs: &str) -> PyResult<(usize, usize)> {
    let g = catalog_group(gamma).map_err(to_py)?;
    let a = catalog_group(coeffs).map_err(to_py)?;
    let action = GroupAction::trivial(&g, &a);
    let z1 = z1_cocycles(&g, &a, &action).map_err(to_py)?;
    let h1 = h1_classes(&g, &a, &action, &z1).map_err(to_py)?;
    Ok((z1.len(), h1.len()))
}

/// Fingerprint `(order, center, abelianization, quasi_split)` of the
/// quasi-split form of `spec` over `F_{p^k}` split by degree `m`, with the
/// Frobenius acting through `alpha` ("identity", "flip", or "inverse" on tori).
#[pyfunction]
#[pyo3(signature = (spec, p, k, m, alpha = "identity"))]
fn twist_fingerprint(spec: &str, p: u64, k: u32, m: usize, alpha: &str) -> PyResult<(usize, usize, usize, bool)> {
    let spec: GroupSpec = spec.parse().map_err(to_py)?;
    let gen = match alpha {
        "identity" => Outer::Identity,
        "flip" => Outer::Flip,
        "inverse" => match spec {
            GroupSpec::Torus { rank } => Outer::Lattice {
                matrix: (0..rank).map(|i| (0..rank).map(|j| -i64::from(i == j)).collect()).collect(),
            },
            _ => return Err(VersalError::new_err("'inverse' applies to tori")),
        },
        other => return Err(VersalError::new_err(format!("unknown alpha '{other}'"))),
    };
    let pt = construct_point_finite_field(p, k, m).map_err(to_py)?;
    let algebra = FiniteAlgebra::new(&fiber_algebra(&pt).map_err(to_py)?).map_err(to_py)?;
    let group = PointGroup::new(spec, Arc::new(algebra)).map_err(to_py)?;
    let m = group.algebra().group().order();
    let mut powers = vec![Outer::Identity];
    for _ in 1..m {
        let next = powers.last().expect("nonempty").compose(&gen, group.spec());
        powers.push(next);
    }
    let cocycle = vec![group.aut_identity(); m];
    let twist = TwistSpec::new(group, powers, cocycle).map_err(to_py)?;
    let f = fingerprint(&twist).map_err(to_py)?;
    Ok((f.order, f.center, f.abelianization, f.quasi_split))
}

/// Catalog of rank-`rank` forms over `F_{p^k}` as JSON.
#[pyfunction]
#[pyo3(signature = (rank, p, k = 1, bound = 2, cocycles = "trivial"))]
fn catalog(rank: usize, p: u64, k: u32, bound: usize, cocycles: &str) -> PyResult<String> {
    let mode: CocycleMode = cocycles.parse().map_err(to_py)?;
    Ok(build_catalog(rank, p, k, bound, mode).map_err(to_py)?.to_json_string())
}

/// Parse and re-verify a catalog; returns its sorted fingerprints.
#[pyfunction]
fn verify_catalog(text: &str) -> PyResult<Vec<(usize, usize, usize, bool)>> {
    let c = Catalog::from_json_str(text).map_err(to_py)?;
    Ok(c.fingerprints
        .iter()
        .map(|f| (f.order, f.center, f.abelianization, f.quasi_split))
        .collect())
}

#[pymodule]
pub fn versal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VersalError", m.py().get_type::<VersalError>())?;
    m.add("SizeLimitError", m.py().get_type::<SizeLimitError>())?;
    m.add("UnsupportedError", m.py().get_type::<UnsupportedError>())?;
    m.add_function(wrap_pyfunction!(finite_field_point, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_point, m)?)?;
    m.add_function(wrap_pyfunction!(verify_point, m)?)?;
    m.add_function(wrap_pyfunction!(root_data, m)?)?;
    m.add_function(wrap_pyfunction!(hom_class_count, m)?)?;
    m.add_function(wrap_pyfunction!(h1_trivial_action, m)?)?;
    m.add_function(wrap_pyfunction!(twist_fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify_catalog, m)?)?;
    Ok(())
}
