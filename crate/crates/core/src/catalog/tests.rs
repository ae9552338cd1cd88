use super::*;
use crate::groups::catalog_group;
use crate::root_data::named_reference_data;

fn named(name: &str) -> BasedRootDatum {
    named_reference_data()
        .unwrap()
        .into_iter()
        .find(|(n, _)| *n == name)
        .unwrap()
        .1
}

fn fp(order: usize, center: usize, abelianization: usize) -> Fingerprint {
    Fingerprint {
        order,
        center,
        abelianization,
        quasi_split: true,
    }
}

#[test]
fn index_sets() {
    let sl2 = build_index_set(&named("SL2"), 2).unwrap();
    assert_eq!(sl2.len(), 2);
    assert!(sl2.iter().all(IndexEntry::is_trivial));
    let sl3 = build_index_set(&named("SL3"), 2).unwrap();
    assert_eq!(sl3.len(), 3);
    assert_eq!(sl3.iter().filter(|e| !e.is_trivial()).count(), 1);
    for name in ["trivial", "Gm", "SL3", "SL2xSL2", "Gm^2"] {
        assert_eq!(build_index_set(&named(name), 1).unwrap().len(), 1, "{name}");
    }
    assert!(build_index_set(&named("SL2"), 17).is_err());
}

#[test]
fn index_set_size_matches_hom_class_count() {
    for name in ["Gm", "SL3", "SL2xSL2", "SL2xGm"] {
        let d = named(name);
        let aut = based_automorphism_group(&d).unwrap();
        let expected: usize = group_catalog(4)
            .unwrap()
            .iter()
            .map(|g| hom_classes(g, &aut.table).len())
            .sum();
        assert_eq!(build_index_set(&d, 4).unwrap().len(), expected, "{name}");
    }
    // Z/2 into GL2(Z): trivial, -1, the two reflections, the swap
    let z2 = catalog_group("Z2").unwrap();
    assert_eq!(torus2_hom_classes(&z2).len(), 4);
    assert_eq!(build_index_set(&named("Gm^2"), 2).unwrap().len(), 5);
}

#[test]
fn rank_zero_catalog() {
    let c = build_catalog(0, 3, 1, 2, CocycleMode::Trivial).unwrap();
    assert_eq!(c.fingerprints, vec![fp(1, 1, 1)]);
    assert_eq!(c.entries.len(), 2);
}

#[test]
fn rank_one_over_f3() {
    let trivial = build_catalog(1, 3, 1, 2, CocycleMode::Trivial).unwrap();
    let expected = vec![fp(2, 2, 2), fp(4, 4, 4), fp(24, 1, 2), fp(24, 2, 3)];
    assert_eq!(trivial.fingerprints, expected);
    assert!(trivial.skipped.is_empty());
    let exhaustive = build_catalog(1, 3, 1, 2, CocycleMode::Exhaustive).unwrap();
    assert_eq!(exhaustive.fingerprints, expected);
}

#[test]
fn rank_one_over_f2() {
    let trivial = build_catalog(1, 2, 1, 2, CocycleMode::Trivial).unwrap();
    let exhaustive = build_catalog(1, 2, 1, 2, CocycleMode::Exhaustive).unwrap();
    assert_eq!(trivial.fingerprints, exhaustive.fingerprints);
    // Gm(F2) = 1, norm-one torus 3, SL2(F2) = PGL2(F2) = S3
    assert_eq!(trivial.fingerprints, vec![fp(1, 1, 1), fp(3, 3, 3), fp(6, 1, 2)]);
}

#[test]
fn catalog_round_trip_and_determinism() {
    let a = build_catalog(1, 3, 1, 2, CocycleMode::Trivial).unwrap();
    let b = build_catalog(1, 3, 1, 2, CocycleMode::Trivial).unwrap();
    let text = a.to_json_string();
    assert_eq!(text, b.to_json_string());
    let back = Catalog::from_json_str(&text).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.to_json_string(), text);
}

#[test]
fn tampered_catalog_is_rejected() {
    let c = build_catalog(1, 2, 1, 2, CocycleMode::Trivial).unwrap();
    let mut bad = c.clone();
    let e = bad.entries.iter_mut().find(|e| e.group == GroupSpec::Sl { n: 2 } && e.cocycle.len() == 2).unwrap();
    // an upper unipotent value at the generator is not a cocycle
    e.cocycle[1] = vec![1, 2, 0, 1];
    assert!(matches!(bad.verify(), Err(Error::Verification(_))));
    let mut bad = c;
    let (id, point) = bad.points.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
    let mut point = point;
    point["f"] = serde_json::json!([1, 1]);
    bad.points.insert(id, point);
    assert!(bad.verify().is_err());
}

#[test]
fn rank_two_over_f2_skips_unsupported() {
    let c = build_catalog(2, 2, 1, 2, CocycleMode::Trivial).unwrap();
    let skipped: Vec<&str> = c.skipped.iter().filter(|s| s.gamma.is_none()).map(|s| s.datum.as_str()).collect();
    for name in ["GL2", "SO4", "Sp4", "SO5", "G2"] {
        assert!(skipped.contains(&name), "{name} in {skipped:?}");
    }
    // SU3(F2) and SL3(F2)
    assert!(c.fingerprints.contains(&fp(216, 3, 4)));
    assert!(c.fingerprints.contains(&fp(168, 1, 1)));
    assert!(c.entries.iter().all(|e| e.fingerprint.is_some() || e.error.is_some()));
}

#[test]
fn cocycle_mode_parses() {
    assert_eq!("trivial".parse::<CocycleMode>().unwrap(), CocycleMode::Trivial);
    assert_eq!("exhaustive".parse::<CocycleMode>().unwrap(), CocycleMode::Exhaustive);
    assert!("all".parse::<CocycleMode>().is_err());
    assert_eq!(CocycleMode::Exhaustive.to_string(), "exhaustive");
}
