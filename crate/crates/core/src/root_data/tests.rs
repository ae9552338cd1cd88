use std::collections::HashSet;

use proptest::prelude::*;

use super::enumerate::named_data;
use super::lattice::{inverse_unimodular, mat_vec, transpose, unimodular_box};
use super::*;
use crate::groups::FiniteGroup;

fn named(name: &str) -> BasedRootDatum {
    named_data()
        .unwrap()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d)
        .unwrap()
}

/// Push a based datum through a change of lattice basis.
fn transform(b: &BasedRootDatum, m: &[Vec<i64>]) -> BasedRootDatum {
    let inv_t = transpose(&inverse_unimodular(m).unwrap());
    let roots: Vec<Vec<i64>> = b.datum.roots.iter().map(|r| mat_vec(m, r)).collect();
    let coroots: Vec<Vec<i64>> = b.datum.coroots.iter().map(|c| mat_vec(&inv_t, c)).collect();
    let simple: Vec<Vec<i64>> = b.simple_roots().iter().map(|r| mat_vec(m, r)).collect();
    let simple_co: Vec<Vec<i64>> = b
        .simple_coroots()
        .iter()
        .map(|c| mat_vec(&inv_t, c))
        .collect();
    let d = RootDatum::from_simple(b.rank(), &simple, &simple_co).unwrap();
    let mut moved: Vec<_> = roots.into_iter().zip(coroots).collect();
    moved.sort();
    let closed: Vec<_> = d
        .roots
        .iter()
        .cloned()
        .zip(d.coroots.iter().cloned())
        .collect();
    assert_eq!(moved, closed);
    let base = simple.iter().map(|r| d.root_index(r).unwrap()).collect();
    BasedRootDatum::new(d, base).unwrap()
}

#[test]
fn sl2_in_weight_coordinates() {
    let sl2 = named("SL2");
    assert_eq!(sl2.datum.roots, vec![vec![-2], vec![2]]);
    assert_eq!(sl2.datum.coroots, vec![vec![-1], vec![1]]);
    let pgl2 = named("PGL2");
    assert_eq!(pgl2.datum.roots, vec![vec![-1], vec![1]]);
    assert_eq!(pgl2.datum.coroots, vec![vec![-2], vec![2]]);
}

#[test]
fn validation_rejects_broken_data() {
    let bad_pairing = RootDatum::new(1, vec![vec![1], vec![-1]], vec![vec![1], vec![-1]]).unwrap();
    assert!(!bad_pairing.validate().passed());
    let missing_negative = RootDatum::new(1, vec![vec![2]], vec![vec![1]]).unwrap();
    assert!(!missing_negative.validate().passed());
    let non_reduced = RootDatum::new(
        1,
        vec![vec![-2], vec![-1], vec![1], vec![2]],
        vec![vec![-1], vec![-2], vec![2], vec![1]],
    )
    .unwrap();
    assert!(!non_reduced.validate().passed());
    assert!(RootDatum::torus(3).validate().passed());
    assert!(RootDatum::new(2, vec![vec![1]], vec![vec![1, 1]]).is_err());
}

#[test]
fn based_validation_rejects_non_bases() {
    let sl3 = named("SL3");
    let d = sl3.datum.clone();
    // Two roots whose difference is a root do not form a base.
    let pos: Vec<usize> = (0..d.roots.len())
        .filter(|&i| !sl3.base.contains(&i))
        .collect();
    let mut found_bad = false;
    for &i in &pos {
        for &j in &pos {
            if i != j && BasedRootDatum::new(d.clone(), vec![i, j]).is_err() {
                found_bad = true;
            }
        }
    }
    assert!(found_bad);
    assert!(BasedRootDatum::new(d, vec![sl3.base[0]]).is_err());
}

#[test]
fn weyl_closure_sizes() {
    for (name, roots) in [
        ("SL3", 6),
        ("Sp4", 8),
        ("G2", 12),
        ("SO4", 4),
        ("GL2", 2),
        ("Gm^2", 0),
    ] {
        assert_eq!(named(name).datum.roots.len(), roots, "{name}");
    }
}

#[test]
fn duals() {
    let sl2 = named("SL2");
    let pgl2 = named("PGL2");
    assert!(are_isomorphic(&sl2.dual().unwrap(), &pgl2));
    assert!(are_isomorphic(
        &named("SL3").dual().unwrap(),
        &named("PGL3")
    ));
    assert!(are_isomorphic(&named("Sp4").dual().unwrap(), &named("SO5")));
    assert!(are_isomorphic(&named("G2").dual().unwrap(), &named("G2")));
    assert!(are_isomorphic(&named("GL2").dual().unwrap(), &named("GL2")));
    for n in 0..=2 {
        for b in enumerate_root_data(n).unwrap() {
            assert_eq!(b.dual().unwrap().dual().unwrap().datum, b.datum);
            assert!(dual_root_datum(&b.datum).unwrap().validate().passed());
        }
    }
}

#[test]
fn enumeration_counts() {
    assert_eq!(enumerate_root_data(0).unwrap().len(), 1);
    assert_eq!(enumerate_root_data(1).unwrap().len(), 3);
    assert_eq!(enumerate_root_data(2).unwrap().len(), 13);
    assert!(matches!(enumerate_root_data(4), Err(Error::Unsupported(_))));
}

#[test]
fn rank_two_enumeration_is_labelled_and_distinct() {
    let data = enumerate_root_data(2).unwrap();
    let labels: Vec<String> = data.iter().map(|b| b.name()).collect();
    let expected: HashSet<&str> = [
        "Gm^2",
        "SL2xGm",
        "GL2",
        "PGL2xGm",
        "SL2xSL2",
        "SO4",
        "SL2xPGL2",
        "PGL2xPGL2",
        "SL3",
        "PGL3",
        "Sp4",
        "SO5",
        "G2",
    ]
    .into_iter()
    .collect();
    assert_eq!(
        labels.iter().map(String::as_str).collect::<HashSet<_>>(),
        expected
    );
    for (i, a) in data.iter().enumerate() {
        assert!(a.validate().passed());
        for b in &data[i + 1..] {
            assert!(!are_isomorphic(a, b), "{} ~ {}", a.name(), b.name());
        }
    }
}

#[test]
fn rank_three_enumeration_is_distinct() {
    let data = enumerate_root_data(3).unwrap();
    for (i, a) in data.iter().enumerate() {
        assert!(a.validate().passed(), "{}", a.name());
        for b in &data[i + 1..] {
            assert!(!are_isomorphic(a, b), "{} ~ {}", a.name(), b.name());
        }
    }
    // A3 has 12 roots, B3 and C3 have 18.
    assert!(data
        .iter()
        .any(|b| b.semisimple_rank() == 3 && b.datum.roots.len() == 18));
    assert!(data
        .iter()
        .any(|b| b.semisimple_rank() == 3 && b.datum.roots.len() == 12));
}

/// Independent count of rank-2 root data: all simple systems with small
/// coordinates, closed under reflections, grouped by lattice isomorphism.
#[test]
fn rank_two_oracle_count() {
    let range = |b: i64| -> Vec<Vec<i64>> {
        let mut v = Vec::new();
        for x in -b..=b {
            for y in -b..=b {
                v.push(vec![x, y]);
            }
        }
        v
    };
    let roots = range(2);
    let coroots = range(3);
    let mut data: HashSet<RootDatum> = HashSet::new();
    data.insert(RootDatum::torus(2));
    for a in &roots {
        for av in &coroots {
            if lattice::dot(a, av) == 2 {
                data.insert(RootDatum::from_simple(2, &[a.clone()], &[av.clone()]).unwrap());
            }
        }
    }
    let finite_type =
        |a12: i64, a21: i64| a12 <= 0 && a21 <= 0 && (a12 == 0) == (a21 == 0) && a12 * a21 <= 3;
    for a in &roots {
        for av in &coroots {
            if lattice::dot(a, av) != 2 {
                continue;
            }
            for b in &roots {
                if b <= a {
                    continue;
                }
                for bv in &coroots {
                    if lattice::dot(b, bv) != 2
                        || !finite_type(lattice::dot(b, av), lattice::dot(a, bv))
                    {
                        continue;
                    }
                    if lattice::det_i64(&[a.clone(), b.clone()]) == 0 {
                        continue;
                    }
                    let d = RootDatum::from_simple(
                        2,
                        &[a.clone(), b.clone()],
                        &[av.clone(), bv.clone()],
                    )
                    .unwrap();
                    if d.validate().passed() {
                        data.insert(d);
                    }
                }
            }
        }
    }
    let mut data: Vec<RootDatum> = data.into_iter().collect();
    data.sort_by(|x, y| {
        (x.roots.len(), &x.roots, &x.coroots).cmp(&(y.roots.len(), &y.roots, &y.coroots))
    });
    let mats: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = unimodular_box(2, 3)
        .into_iter()
        .map(|m| {
            let it = transpose(&inverse_unimodular(&m).unwrap());
            (m, it)
        })
        .collect();
    let pairs = |d: &RootDatum| -> Vec<(Vec<i64>, Vec<i64>)> {
        let mut p: Vec<_> = d
            .roots
            .iter()
            .cloned()
            .zip(d.coroots.iter().cloned())
            .collect();
        p.sort();
        p
    };
    let mut reps: Vec<RootDatum> = Vec::new();
    for d in data {
        let target = pairs(&d);
        let known = reps.iter().any(|r| {
            r.roots.len() == d.roots.len()
                && mats.iter().any(|(m, it)| {
                    let mut img: Vec<_> = r
                        .roots
                        .iter()
                        .zip(&r.coroots)
                        .map(|(x, c)| (mat_vec(m, x), mat_vec(it, c)))
                        .collect();
                    img.sort();
                    img == target
                })
        });
        if !known {
            reps.push(d);
        }
    }
    assert_eq!(reps.len(), 13);
}

#[test]
fn automorphism_group_orders() {
    for (name, order) in [
        ("trivial", 1),
        ("Gm", 2),
        ("SL2", 1),
        ("PGL2", 1),
        ("GL2", 2),
        ("SL2xGm", 2),
        ("SL3", 2),
        ("PGL3", 2),
        ("SL2xSL2", 2),
        ("SO4", 2),
        ("SL2xPGL2", 1),
        ("Sp4", 1),
        ("G2", 1),
    ] {
        let g = based_automorphism_group(&named(name)).unwrap();
        assert_eq!(g.order(), order, "{name}");
        assert_eq!(g.elements[0].matrix, lattice::identity(named(name).rank()));
        assert_eq!(g.table.order(), order);
    }
    assert!(matches!(
        based_automorphism_group(&named("Gm^2")),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn sl3_outer_automorphism_swaps_the_base() {
    let g = based_automorphism_group(&named("SL3")).unwrap();
    assert_eq!(g.elements[1].base_permutation, vec![1, 0]);
    assert!(g.table.is_cyclic());
}

#[test]
fn gl2z_finite_subgroup_classes() {
    let maximal = gl2z_finite_subgroups();
    assert_eq!(maximal[0].matrices.len(), 8);
    assert_eq!(maximal[1].matrices.len(), 12);
    assert_eq!(gl2z_subgroup_classes().len(), 13);
}

#[test]
fn rank_two_torus_actions() {
    assert_eq!(torus2_hom_classes(&FiniteGroup::cyclic(1)).len(), 1);
    assert_eq!(torus2_hom_classes(&FiniteGroup::cyclic(2)).len(), 4);
    assert_eq!(torus2_hom_classes(&FiniteGroup::cyclic(3)).len(), 2);
    assert_eq!(torus2_hom_classes(&FiniteGroup::cyclic(4)).len(), 5);
}

#[test]
fn serde_round_trip() {
    let b = named("SL3");
    let s = serde_json::to_string(&b).unwrap();
    assert!(s.contains("\"roots\""));
    let back: BasedRootDatum = serde_json::from_str(&s).unwrap();
    assert_eq!(back, b);
}

proptest! {
    #[test]
    fn isomorphism_survives_basis_change(k in 0usize..17, pick in 0usize..10_000) {
        let all = named_data().unwrap();
        let (name, b) = &all[k];
        let box_ = unimodular_box(b.rank(), 1);
        let m = &box_[pick % box_.len()];
        let moved = transform(b, m);
        prop_assert!(are_isomorphic(b, &moved), "{}", name);
        for (other, c) in &all {
            if other != name {
                prop_assert!(!are_isomorphic(c, &moved));
            }
        }
    }

    #[test]
    fn chosen_base_is_a_base(k in 0usize..17, pick in 0usize..10_000) {
        let all = named_data().unwrap();
        let b = &all[k].1;
        let box_ = unimodular_box(b.rank(), 1);
        let moved = transform(b, &box_[pick % box_.len()]);
        let rebased = BasedRootDatum::with_chosen_base(moved.datum.clone()).unwrap();
        prop_assert!(are_isomorphic(&rebased, b));
    }
}
