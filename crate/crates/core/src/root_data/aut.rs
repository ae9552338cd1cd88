//! Automorphisms of based root data, and finite actions on rank-2 tori.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::lattice::{self, integral, inverse_q, mat_mul, mat_mul_q, to_q, transpose};
use super::BasedRootDatum;
use crate::error::{Error, Result};
use crate::groups::{homomorphisms, FiniteGroup};

/// A lattice automorphism of `X` preserving the roots, coroots and the base.
/// `matrix` acts on column vectors; `base_permutation[i]` is the position in
/// the base of the image of simple root `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasedAut {
    pub matrix: Vec<Vec<i64>>,
    pub base_permutation: Vec<usize>,
}

/// The based automorphism group with its multiplication table;
/// `elements[0]` is the identity and table index `i` is `elements[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroup {
    pub elements: Vec<BasedAut>,
    pub table: FiniteGroup,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of the automorphism with the given matrix.
    pub fn index_of(&self, matrix: &[Vec<i64>]) -> Option<usize> {
        self.elements.iter().position(|a| a.matrix == matrix)
    }
}

/// Table group on a list of integer matrices closed under multiplication.
fn matrix_table(name: &str, mats: &[Vec<Vec<i64>>]) -> Result<FiniteGroup> {
    let index: HashMap<&Vec<Vec<i64>>, usize> =
        mats.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut table = Vec::with_capacity(mats.len());
    for a in mats {
        let mut row = Vec::with_capacity(mats.len());
        for b in mats {
            let ab = mat_mul(a, b);
            row.push(
                *index
                    .get(&ab)
                    .ok_or_else(|| Error::InvalidGroup("matrix set is not closed".into()))?,
            );
        }
        table.push(row);
    }
    let labels = mats.iter().map(|m| format!("{m:?}")).collect();
    FiniteGroup::from_table(name, table, labels)
}

/// Automorphisms of `b` fixing its base as a set. A based automorphism is
/// determined by a diagram symmetry and its action on the radical; the radical
/// action is only enumerated for radical rank at most one (larger radicals
/// have infinite groups).
pub fn based_automorphism_group(b: &BasedRootDatum) -> Result<AutGroup> {
    let t = b.torus_rank();
    let torus_maps: Vec<i64> = match t {
        0 => vec![1],
        1 => vec![1, -1],
        _ => {
            return Err(Error::Unsupported(format!(
                "based automorphism group with radical rank {t} is infinite"
            )))
        }
    };
    let simple = b.simple_roots();
    let radical = b.datum.radical_basis();
    let mut src = simple.clone();
    src.extend(radical.iter().cloned());
    let src_inv = inverse_q(&to_q(&transpose(&src)))
        .ok_or_else(|| Error::InvalidRootDatum("simple roots and radical do not span".into()))?;
    let mut elements = Vec::new();
    for p in super::diagram_permutations(&b.cartan_matrix()) {
        for &sign in &torus_maps {
            let mut dst: Vec<Vec<i64>> = p.iter().map(|&j| simple[j].clone()).collect();
            dst.extend(
                radical
                    .iter()
                    .map(|k| k.iter().map(|x| sign * x).collect::<Vec<_>>()),
            );
            let Some(m) = integral(&mat_mul_q(&to_q(&transpose(&dst)), &src_inv)) else {
                continue;
            };
            if b.root_permutation(&m, b).is_some() {
                elements.push(BasedAut {
                    matrix: m,
                    base_permutation: p.clone(),
                });
            }
        }
    }
    let mats: Vec<Vec<Vec<i64>>> = elements.iter().map(|a| a.matrix.clone()).collect();
    let table = matrix_table(&format!("Aut({})", b.name()), &mats)?;
    Ok(AutGroup { elements, table })
}

/// A finite group of integer matrices with its table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralMatrixGroup {
    pub matrices: Vec<Vec<Vec<i64>>>,
    pub group: FiniteGroup,
}

fn generate(name: &str, gens: &[Vec<Vec<i64>>]) -> IntegralMatrixGroup {
    let n = gens[0].len();
    let mut mats = vec![lattice::identity(n)];
    let mut i = 0;
    while i < mats.len() {
        for g in gens {
            let y = mat_mul(&mats[i], g);
            if !mats.contains(&y) {
                mats.push(y);
            }
        }
        i += 1;
    }
    let group = matrix_table(name, &mats).expect("closed by construction");
    IntegralMatrixGroup {
        matrices: mats,
        group,
    }
}

/// The two maximal finite subgroups of GL2(Z) up to conjugacy: the symmetry
/// groups of the square lattice (order 8) and the hexagonal lattice (order 12).
pub fn gl2z_finite_subgroups() -> Vec<IntegralMatrixGroup> {
    vec![
        generate(
            "D8",
            &[vec![vec![0, -1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]],
        ),
        generate(
            "D12",
            &[vec![vec![1, -1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]],
        ),
    ]
}

fn conjugators() -> Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    lattice::unimodular_box(2, 2)
        .into_iter()
        .map(|p| {
            let inv = lattice::inverse_unimodular(&p).expect("unimodular");
            (p, inv)
        })
        .collect()
}

/// Whether some `P` from the conjugator box has `P a_i P^-1 = b_i` for all `i`.
fn conjugate_lists(
    a: &[Vec<Vec<i64>>],
    b: &[Vec<Vec<i64>>],
    conj: &[(Vec<Vec<i64>>, Vec<Vec<i64>>)],
) -> bool {
    conj.iter().any(|(p, pinv)| {
        a.iter()
            .zip(b)
            .all(|(x, y)| mat_mul(&mat_mul(p, x), pinv) == *y)
    })
}

/// Homomorphisms `gamma -> GL2(Z)` up to GL2(Z)-conjugacy, each given as the
/// list of matrices indexed by elements of `gamma`. Every finite subgroup is
/// conjugate into one of [`gl2z_finite_subgroups`], so homomorphisms into
/// those two cover all classes; conjugators are searched in the box
/// `[-2, 2]^4`.
pub fn torus2_hom_classes(gamma: &FiniteGroup) -> Vec<Vec<Vec<Vec<i64>>>> {
    let conj = conjugators();
    let mut reps: Vec<Vec<Vec<Vec<i64>>>> = Vec::new();
    for h in gl2z_finite_subgroups() {
        let homs = homomorphisms(gamma, &h.group).expect("table groups enumerate");
        for phi in homs {
            let mats: Vec<Vec<Vec<i64>>> = phi.iter().map(|&i| h.matrices[i].clone()).collect();
            if !reps.iter().any(|r| conjugate_lists(r, &mats, &conj)) {
                reps.push(mats);
            }
        }
    }
    reps
}

/// Finite subgroups of GL2(Z) up to conjugacy, as sorted matrix lists.
pub fn gl2z_subgroup_classes() -> Vec<Vec<Vec<Vec<i64>>>> {
    let conj = conjugators();
    let mut reps: Vec<Vec<Vec<Vec<i64>>>> = Vec::new();
    for h in gl2z_finite_subgroups() {
        let m = h.matrices.len();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for a in 0..m {
            for b in a..m {
                let s: Vec<usize> = h.group.subgroup_closure(&[a, b]).into_iter().collect();
                if !subsets.contains(&s) {
                    subsets.push(s);
                }
            }
        }
        for s in subsets {
            let mut mats: Vec<Vec<Vec<i64>>> = s.iter().map(|&i| h.matrices[i].clone()).collect();
            mats.sort();
            let same = |r: &Vec<Vec<Vec<i64>>>| {
                r.len() == mats.len()
                    && conj.iter().any(|(p, pinv)| {
                        let mut img: Vec<Vec<Vec<i64>>> =
                            r.iter().map(|x| mat_mul(&mat_mul(p, x), pinv)).collect();
                        img.sort();
                        img == mats
                    })
            };
            if !reps.iter().any(same) {
                reps.push(mats);
            }
        }
    }
    reps
}
