//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use versal_core::algebra::{FieldDescriptor, Poly};
use versal_core::catalog::{build_catalog, CocycleMode, Fingerprint};
use versal_core::descent::{
    inner_cocycles, inner_h1_classes, is_quasi_split_class, is_quasi_split_twist, twisted_fixed_points, Elem,
    FiniteAlgebra, Outer, PointGroup, TwistSpec,
};
use versal_core::etale::{
    construct_point_finite_field, construct_point_rational, cyclotomic_point, emit_presentation, fiber_algebra,
    invariant_subalgebra, point_coordinates, tensor_split, tensor_split_over_self, verify_family_point, FamilyPoint,
};
use versal_core::groups::{
    catalog_group, h1_classes, hom_classes, z1_cocycles, z1_exhaustive, FiniteGroup, GroupAction, GroupOps,
};
use versal_core::root_data::{based_automorphism_group, enumerate_root_data};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

const FINITE: [(u64, u32, usize); 5] = [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 2, 2), (5, 1, 2)];

fn qpoly(c: &[i64]) -> Poly {
    Poly::from_i64(&FieldDescriptor::rationals(), c)
}

fn rational_points() -> Result<Vec<FamilyPoint>, String> {
    let z2 = FiniteGroup::cyclic(2);
    Ok(vec![
        ok(construct_point_rational(
            qpoly(&[-2, 0, 1]),
            vec![qpoly(&[0, 1]), qpoly(&[0, -1])],
            z2.clone(),
            &[0, 1],
        ))?,
        ok(construct_point_rational(
            qpoly(&[1, 1, 1]),
            vec![qpoly(&[0, 1]), qpoly(&[-1, -1])],
            z2,
            &[0, 1],
        ))?,
        ok(cyclotomic_point(5))?,
    ])
}

fn all_points() -> Result<Vec<FamilyPoint>, String> {
    let mut pts = FINITE
        .iter()
        .map(|&(p, k, m)| ok(construct_point_finite_field(p, k, m)))
        .collect::<Result<Vec<_>, _>>()?;
    pts.extend(rational_points()?);
    Ok(pts)
}

fn group(spec: &str, p: u64, k: u32, m: usize) -> Result<PointGroup, String> {
    let pt = ok(construct_point_finite_field(p, k, m))?;
    let algebra = ok(FiniteAlgebra::new(&ok(fiber_algebra(&pt))?))?;
    ok(PointGroup::new(ok(spec.parse())?, Arc::new(algebra)))
}

fn points_verify() -> Outcome {
    let pts = all_points()?;
    for pt in &pts {
        let report = verify_family_point(pt);
        ensure(report.passed(), || format!("{} over {}: {:?}", pt.f, pt.field, report.failures()))?;
    }
    Ok(format!("{} points", pts.len()))
}

fn presentations() -> Outcome {
    let (base, _) = ok(emit_presentation(&FiniteGroup::cyclic(2)))?;
    ensure(base.variables.len() == 9 && base.relations.len() == 15, || {
        format!("Z2: {} variables, {} relations", base.variables.len(), base.relations.len())
    })?;
    let mut checked = 0;
    for (p, m) in [(2, 2), (3, 2), (5, 2), (2, 3), (3, 3)] {
        let pt = ok(construct_point_finite_field(p, 1, m))?;
        let (base, _) = ok(emit_presentation(&pt.group))?;
        let coords = ok(point_coordinates(&pt))?;
        let k = &pt.field;
        ensure(ok(base.vanishes_at(k, &coords))?, || format!("relations nonzero at F{p}, m = {m}"))?;
        let mut caught = 0;
        for name in ["f0", "h1_0", "h1_1", "d1_0", "u"] {
            let i = base.variable_index(name).ok_or(format!("no variable {name}"))?;
            let mut bad = coords.clone();
            bad[i] = k.add(&bad[i], &k.one());
            if !ok(base.vanishes_at(k, &bad))? {
                caught += 1;
            }
        }
        ensure(caught >= 3, || format!("F{p}, m = {m}: {caught} corruptions caught"))?;
        checked += 1;
    }
    Ok(format!("9 variables, 15 relations; {checked} points, corruptions caught"))
}

fn invariants_and_splitting() -> Outcome {
    for pt in all_points()? {
        let alg = ok(fiber_algebra(&pt))?;
        let dim = invariant_subalgebra(&alg).len();
        ensure(dim == 1, || format!("{}: invariants of dimension {dim}", pt.f))?;
    }
    for (p, k, m) in FINITE {
        let alg = ok(fiber_algebra(&ok(construct_point_finite_field(p, k, m))?))?;
        let split = ok(tensor_split(&alg, &ok(FieldDescriptor::finite(p, k * m as u32))?))?;
        ensure(split.components() == m && split.is_transitive(), || format!("({p}, {k}, {m}) split"))?;
    }
    for pt in rational_points()? {
        let split = ok(tensor_split_over_self(&ok(fiber_algebra(&pt))?))?;
        ensure(split.is_transitive(), || format!("{} split", pt.f))?;
    }
    Ok("dim 1, transitive splits".into())
}

fn su3() -> Outcome {
    let start = Instant::now();
    let g = group("sl3", 2, 1, 2)?;
    let id = g.aut_identity();
    let t = ok(TwistSpec::new(g, vec![Outer::Identity, Outer::Flip], vec![id.clone(), id]))?;
    let fixed = ok(twisted_fixed_points(&t))?;
    ensure(fixed.order() == 216, || format!("order {}", fixed.order()))?;
    let report = ok(is_quasi_split_twist(&t))?;
    ensure(report.quasi_split, || format!("not quasi-split: {:?}", report.failure))?;
    ensure(ok(is_quasi_split_class(&t))?, || "class not quasi-split".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("order 216, quasi-split, {:.2?}", elapsed))
}

fn norm_one_torus() -> Outcome {
    let g = group("gm", 3, 1, 2)?;
    let id = g.aut_identity();
    let inv = Outer::Lattice { matrix: vec![vec![-1]] };
    let t = ok(TwistSpec::new(g, vec![Outer::Identity, inv], vec![id.clone(), id]))?;
    let order = ok(twisted_fixed_points(&t))?.order();
    ensure(order == 4, || format!("order {order}"))?;
    Ok("order 4".into())
}

fn pgl2_cocycles() -> Outcome {
    let g = group("sl2", 2, 1, 2)?;
    let alpha = vec![Outer::Identity; 2];
    let cocycles = ok(inner_cocycles(&g, &alpha))?;
    ensure(cocycles.len() == 10, || format!("{} cocycles", cocycles.len()))?;
    let adj = g.adjoint();
    let act = |s: usize, x: &Elem| adj.apply_semilinear(s, x);
    let mut oracle = ok(z1_exhaustive(g.algebra().group(), &adj, &act, 1 << 20))?;
    oracle.sort();
    let mut sorted = cocycles.clone();
    sorted.sort();
    ensure(sorted == oracle, || "cocycles differ from exhaustive search".into())?;
    let classes = ok(inner_h1_classes(&g, &alpha, &cocycles))?;
    ensure(classes.len() == 1, || format!("{} classes", classes.len()))?;
    for c in &cocycles {
        let t = ok(TwistSpec::inner(g.clone(), alpha.clone(), c.clone()))?;
        let order = ok(twisted_fixed_points(&t))?.order();
        ensure(order == 6, || format!("twist of order {order}"))?;
    }
    Ok("10 cocycles, one class, twists of order 6".into())
}

fn trivial_twists() -> Outcome {
    for spec in ["sl2", "sl3"] {
        let over_e = group(spec, 2, 1, 2)?;
        let over_f = group(spec, 2, 1, 1)?;
        let fixed = ok(twisted_fixed_points(&TwistSpec::trivial(over_e.clone())))?;
        let mut base: Vec<Elem> = ok(over_f.elements())?.iter().map(|x| over_e.embed_base(x)).collect();
        base.sort();
        ensure(fixed.elements == base, || format!("{spec}: fixed points differ from G(F)"))?;
    }
    Ok("SL2, SL3 over F4/F2".into())
}

fn root_data() -> Outcome {
    let rank1 = ok(enumerate_root_data(1))?;
    let rank2 = ok(enumerate_root_data(2))?;
    let (one, two) = (rank1.len(), rank2.len());
    ensure((one, two) == (3, 13), || format!("rank 1: {one}, rank 2: {two}"))?;
    for (name, want) in [("SL2", 1), ("SL3", 2), ("SL2xSL2", 2)] {
        let d = rank1
            .iter()
            .chain(&rank2)
            .find(|d| d.label.as_deref() == Some(name))
            .ok_or(format!("no {name}"))?;
        let order = ok(based_automorphism_group(d))?.order();
        ensure(order == want, || format!("{name}: order {order}"))?;
    }
    Ok("3 and 13 data; Aut orders 1, 2, 2".into())
}

fn cohomology() -> Outcome {
    let z2 = ok(catalog_group("Z2"))?;
    let s3 = ok(catalog_group("S3"))?;
    let classes = hom_classes(&z2, &s3).len();
    ensure(classes == 2, || format!("{classes} hom classes"))?;
    let action = GroupAction::trivial(&z2, &s3);
    let z1 = ok(z1_cocycles(&z2, &s3, &action))?;
    let mut fast: Vec<Vec<usize>> = z1.iter().map(|c| c.values.clone()).collect();
    let act = |g: usize, a: &usize| action.apply(g, *a);
    let mut slow = ok(z1_exhaustive(&z2, &s3, &act, u128::MAX))?;
    fast.sort();
    slow.sort();
    ensure(fast == slow, || "z1 differs from exhaustive search".into())?;
    let h1 = ok(h1_classes(&z2, &s3, &action, &z1))?.len();
    ensure(h1 == classes, || format!("{h1} H1 classes"))?;
    Ok(format!("2 classes, {} cocycles match", fast.len()))
}

fn rank_one_catalog() -> Outcome {
    let start = Instant::now();
    let fp = |order, center, abelianization| Fingerprint { order, center, abelianization, quasi_split: true };
    let mut want = vec![fp(2, 2, 2), fp(4, 4, 4), fp(24, 2, 3), fp(24, 1, 2)];
    want.sort();
    let trivial = ok(build_catalog(1, 3, 1, 2, CocycleMode::Trivial))?;
    ensure(trivial.fingerprints == want, || format!("{:?}", trivial.fingerprints))?;
    let exhaustive = ok(build_catalog(1, 3, 1, 2, CocycleMode::Exhaustive))?;
    ensure(exhaustive.fingerprints == want, || format!("exhaustive: {:?}", exhaustive.fingerprints))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    let shown: Vec<String> = want.iter().map(ToString::to_string).collect();
    Ok(format!("{} in {:.2?}", shown.join(" "), elapsed))
}

fn determinism() -> Outcome {
    let a = ok(build_catalog(1, 3, 1, 2, CocycleMode::Trivial))?.to_json_string();
    let b = ok(build_catalog(1, 3, 1, 2, CocycleMode::Trivial))?.to_json_string();
    ensure(a == b, || "catalog output differs between runs".into())?;
    for (p, k, m) in FINITE {
        let x = ok(construct_point_finite_field(p, k, m))?.to_json();
        let y = ok(construct_point_finite_field(p, k, m))?.to_json();
        ensure(x == y, || format!("point ({p}, {k}, {m}) differs between runs"))?;
    }
    let (x, _) = ok(emit_presentation(&FiniteGroup::cyclic(3)))?;
    let (y, _) = ok(emit_presentation(&FiniteGroup::cyclic(3)))?;
    ensure(x.to_json() == y.to_json(), || "presentation differs between runs".into())?;
    Ok("catalog, points, presentations byte-identical".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("points verify", points_verify),
        ("presentation", presentations),
        ("invariants and splitting", invariants_and_splitting),
        ("SU3 over F2", su3),
        ("norm-one torus over F3", norm_one_torus),
        ("PGL2 cocycles over F4/F2", pgl2_cocycles),
        ("trivial twists", trivial_twists),
        ("root data and automorphisms", root_data),
        ("cohomology of Z2 in S3", cohomology),
        ("rank-1 catalog over F3", rank_one_catalog),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
