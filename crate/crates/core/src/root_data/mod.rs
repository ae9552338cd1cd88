//! Root data and based root data: validation, duality, isomorphism search,
//! bounded-rank enumeration and based automorphism groups.
//!
//! Vectors live in `Z^rank`; roots are characters in `X`, coroots are
//! cocharacters in the dual lattice, and the pairing is the dot product.

mod aut;
mod enumerate;
pub mod lattice;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use lattice::{dot, integer_kernel, integral, inverse_q, mat_vec, rank_q, to_q, transpose, Q};

pub use aut::{
    based_automorphism_group, gl2z_finite_subgroups, gl2z_subgroup_classes, torus2_hom_classes,
    AutGroup, BasedAut, IntegralMatrixGroup,
};
pub(crate) use enumerate::named_data as named_reference_data;
pub use enumerate::{
    cartan_matrix, datum_from_gluing, enumerate_root_data, CartanType, MAX_ENUMERATION_RANK,
};

const MAX_ROOTS: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootDatum {
    pub rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
}

/// Outcome of a validation pass; empty `failures` means every axiom holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass")
        } else {
            write!(f, "fail: {}", self.failures.join("; "))
        }
    }
}

fn reflect(x: &[i64], root: &[i64], coroot: &[i64]) -> Vec<i64> {
    let c = dot(x, coroot);
    x.iter().zip(root).map(|(a, r)| a - c * r).collect()
}

impl RootDatum {
    pub fn new(rank: usize, roots: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>) -> Result<Self> {
        if roots.len() != coroots.len() {
            return Err(Error::InvalidRootDatum(format!(
                "{} roots but {} coroots",
                roots.len(),
                coroots.len()
            )));
        }
        if roots.iter().chain(&coroots).any(|v| v.len() != rank) {
            return Err(Error::InvalidRootDatum(format!(
                "vector length differs from rank {rank}"
            )));
        }
        Ok(RootDatum {
            rank,
            roots,
            coroots,
        })
    }

    /// The datum without roots on `Z^rank`.
    pub fn torus(rank: usize) -> Self {
        RootDatum {
            rank,
            roots: Vec::new(),
            coroots: Vec::new(),
        }
    }

    /// Close a set of simple roots and coroots under the reflections they
    /// define, then sort root/coroot pairs lexicographically by root.
    pub fn from_simple(
        rank: usize,
        simple_roots: &[Vec<i64>],
        simple_coroots: &[Vec<i64>],
    ) -> Result<Self> {
        let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = simple_roots
            .iter()
            .cloned()
            .zip(simple_coroots.iter().cloned())
            .collect();
        let mut seen: HashSet<Vec<i64>> = pairs.iter().map(|p| p.0.clone()).collect();
        let mut i = 0;
        while i < pairs.len() {
            for (sr, sc) in simple_roots.iter().zip(simple_coroots) {
                let (r, c) = &pairs[i];
                let r2 = reflect(r, sr, sc);
                let c2 = reflect(c, sc, sr);
                if seen.insert(r2.clone()) {
                    pairs.push((r2, c2));
                    if pairs.len() > MAX_ROOTS {
                        return Err(Error::InvalidRootDatum(
                            "reflection orbit does not close".into(),
                        ));
                    }
                }
            }
            i += 1;
        }
        pairs.sort();
        let (roots, coroots) = pairs.into_iter().unzip();
        RootDatum::new(rank, roots, coroots)
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.roots.iter().position(|x| x == r)
    }

    /// Rank of the span of the roots.
    pub fn semisimple_rank(&self) -> usize {
        rank_q(&to_q(&self.roots))
    }

    /// Basis of `{x in X : <x, a^v> = 0 for every coroot}`.
    pub fn radical_basis(&self) -> Vec<Vec<i64>> {
        integer_kernel(&self.coroots, self.rank)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        if self.roots.len() != self.coroots.len() {
            rep.fail(format!(
                "{} roots but {} coroots",
                self.roots.len(),
                self.coroots.len()
            ));
            return rep;
        }
        if self
            .roots
            .iter()
            .chain(&self.coroots)
            .any(|v| v.len() != self.rank)
        {
            rep.fail("vector length differs from rank");
            return rep;
        }
        let distinct: HashSet<&Vec<i64>> = self.roots.iter().collect();
        if distinct.len() != self.roots.len() {
            rep.fail("repeated root");
        }
        for (i, (r, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            let p = dot(r, c);
            if p != 2 {
                rep.fail(format!("pairing <root {i}, coroot {i}> = {p}, expected 2"));
            }
        }
        if !rep.passed() {
            return rep;
        }
        for (i, r) in self.roots.iter().enumerate() {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            match self.root_index(&neg) {
                None => rep.fail(format!("negative of root {i} is not a root")),
                Some(j) => {
                    let negc: Vec<i64> = self.coroots[i].iter().map(|x| -x).collect();
                    if self.coroots[j] != negc {
                        rep.fail(format!("coroot of -root {i} is not the negated coroot"));
                    }
                }
            }
            for (j, s) in self.roots.iter().enumerate() {
                if i != j && proportional(r, s).is_some_and(|c| c != Q::from(1) && c != Q::from(-1))
                {
                    rep.fail(format!(
                        "roots {i} and {j} are proportional but not ±equal (non-reduced)"
                    ));
                }
            }
        }
        for (i, (a, av)) in self.roots.iter().zip(&self.coroots).enumerate() {
            for (j, (b, bv)) in self.roots.iter().zip(&self.coroots).enumerate() {
                let img = reflect(b, a, av);
                match self.root_index(&img) {
                    None => rep.fail(format!(
                        "reflection in root {i} sends root {j} outside the root set"
                    )),
                    Some(k) => {
                        let imgc = reflect(bv, av, a);
                        if self.coroots[k] != imgc {
                            rep.fail(format!("dual reflection {i} is incompatible at coroot {j}"));
                        }
                    }
                }
            }
        }
        rep
    }

    pub fn dual(&self) -> Result<RootDatum> {
        let rep = self.validate();
        if !rep.passed() {
            return Err(Error::InvalidRootDatum(rep.to_string()));
        }
        let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = self
            .coroots
            .iter()
            .cloned()
            .zip(self.roots.iter().cloned())
            .collect();
        pairs.sort();
        let (roots, coroots) = pairs.into_iter().unzip();
        Ok(RootDatum {
            rank: self.rank,
            roots,
            coroots,
        })
    }

    /// A base of the root system, chosen by a generic linear functional; the
    /// simple roots are the positive roots that are not sums of two positive
    /// roots. Indices are returned in increasing order.
    pub fn choose_base(&self) -> Vec<usize> {
        let m = 2 * self
            .roots
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
            + 1;
        let height = |r: &[i64]| -> i64 { r.iter().rev().fold(0, |acc, &x| acc * m + x) };
        let positive: Vec<usize> = (0..self.roots.len())
            .filter(|&i| height(&self.roots[i]) > 0)
            .collect();
        let pos_set: HashSet<&Vec<i64>> = positive.iter().map(|&i| &self.roots[i]).collect();
        positive
            .iter()
            .copied()
            .filter(|&i| {
                !positive.iter().any(|&j| {
                    let diff: Vec<i64> = self.roots[i]
                        .iter()
                        .zip(&self.roots[j])
                        .map(|(a, b)| a - b)
                        .collect();
                    pos_set.contains(&diff)
                })
            })
            .collect()
    }
}

/// `Some(c)` with `b = c * a` when `b` is a rational multiple of nonzero `a`.
fn proportional(a: &[i64], b: &[i64]) -> Option<Q> {
    let k = a.iter().position(|&x| x != 0)?;
    let c = Q::new(b[k], a[k]);
    a.iter()
        .zip(b)
        .all(|(&x, &y)| Q::from(x) * c == Q::from(y))
        .then_some(c)
}

pub fn validate_root_datum(candidate: &RootDatum) -> ValidationReport {
    candidate.validate()
}

pub fn dual_root_datum(d: &RootDatum) -> Result<RootDatum> {
    d.dual()
}

/// A root datum together with an ordered base; `base[k]` indexes `roots`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasedRootDatum {
    #[serde(flatten)]
    pub datum: RootDatum,
    pub base: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl BasedRootDatum {
    pub fn new(datum: RootDatum, base: Vec<usize>) -> Result<Self> {
        let b = BasedRootDatum {
            datum,
            base,
            label: None,
        };
        let rep = b.validate();
        if !rep.passed() {
            return Err(Error::InvalidRootDatum(rep.to_string()));
        }
        Ok(b)
    }

    /// Uses [`RootDatum::choose_base`].
    pub fn with_chosen_base(datum: RootDatum) -> Result<Self> {
        let base = datum.choose_base();
        Self::new(datum, base)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.base.len()
    }

    pub fn torus_rank(&self) -> usize {
        self.datum.rank - self.base.len()
    }

    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        self.base
            .iter()
            .map(|&i| self.datum.roots[i].clone())
            .collect()
    }

    pub fn simple_coroots(&self) -> Vec<Vec<i64>> {
        self.base
            .iter()
            .map(|&i| self.datum.coroots[i].clone())
            .collect()
    }

    /// `A[i][j] = <alpha_j, alpha_i^v>` over the base.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let (r, c) = (self.simple_roots(), self.simple_coroots());
        c.iter()
            .map(|cv| r.iter().map(|rv| dot(rv, cv)).collect())
            .collect()
    }

    /// Coordinates of `v` in the base, if `v` lies in its rational span.
    pub fn base_coordinates(&self, v: &[i64]) -> Option<Vec<Q>> {
        let a = self.cartan_matrix();
        let inv = inverse_q(&to_q(&a))?;
        let pairings: Vec<Q> = self
            .simple_coroots()
            .iter()
            .map(|c| Q::from(dot(v, c)))
            .collect();
        let coords = lattice::mat_vec_q(&inv, &pairings);
        let simple = self.simple_roots();
        let back: Vec<Q> = (0..self.rank())
            .map(|k| {
                coords
                    .iter()
                    .zip(&simple)
                    .map(|(c, r)| c * Q::from(r[k]))
                    .sum()
            })
            .collect();
        (back == v.iter().map(|&x| Q::from(x)).collect::<Vec<_>>()).then_some(coords)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = self.datum.validate();
        if !rep.passed() {
            return rep;
        }
        if self.base.iter().any(|&i| i >= self.datum.roots.len()) {
            rep.fail("base index out of range");
            return rep;
        }
        let uniq: HashSet<usize> = self.base.iter().copied().collect();
        if uniq.len() != self.base.len() {
            rep.fail("repeated base index");
            return rep;
        }
        if rank_q(&to_q(&self.simple_roots())) != self.base.len() {
            rep.fail("base is not linearly independent");
            return rep;
        }
        if self.base.len() != self.datum.semisimple_rank() {
            rep.fail("base does not span the roots");
            return rep;
        }
        for (i, r) in self.datum.roots.iter().enumerate() {
            match self.base_coordinates(r) {
                None => rep.fail(format!("root {i} outside the span of the base")),
                Some(c) => {
                    let integral = c.iter().all(|x| x.is_integer());
                    let nonneg = c.iter().all(|x| *x >= Q::from(0));
                    let nonpos = c.iter().all(|x| *x <= Q::from(0));
                    if !integral || !(nonneg || nonpos) {
                        rep.fail(format!(
                            "root {i} is not a signed integral combination of the base"
                        ));
                    }
                }
            }
        }
        rep
    }

    pub fn dual(&self) -> Result<BasedRootDatum> {
        let d = self.datum.dual()?;
        let base = self
            .simple_coroots()
            .iter()
            .map(|c| d.root_index(c).expect("coroot appears in the dual"))
            .collect();
        Ok(BasedRootDatum {
            datum: d,
            base,
            label: None,
        })
    }

    pub fn name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("rank-{} datum", self.rank()))
    }

    /// Check that an integer matrix (acting on `X`, columns are images of the
    /// standard basis) is an automorphism of the root datum: unimodular, maps
    /// roots onto roots, and its inverse transpose carries each coroot to the
    /// coroot of the image root. Returns the induced permutation of roots.
    pub fn root_permutation(&self, m: &[Vec<i64>], target: &BasedRootDatum) -> Option<Vec<usize>> {
        if !lattice::is_unimodular_i64(m) {
            return None;
        }
        let inv = lattice::inverse_unimodular(m)?;
        let inv_t = transpose(&inv);
        let mut perm = Vec::with_capacity(self.datum.roots.len());
        for (r, c) in self.datum.roots.iter().zip(&self.datum.coroots) {
            let k = target.datum.root_index(&mat_vec(m, r))?;
            if target.datum.coroots[k] != mat_vec(&inv_t, c) {
                return None;
            }
            perm.push(k);
        }
        Some(perm)
    }
}

impl fmt::Display for BasedRootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (rank {}, {} roots)",
            self.name(),
            self.rank(),
            self.datum.roots.len()
        )
    }
}

pub(crate) fn diagram_permutations(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    lattice::permutations_matching(cartan, cartan)
}

/// Cheap isomorphism invariants.
fn invariants(b: &BasedRootDatum) -> (usize, usize, usize, BTreeMap<Vec<i64>, usize>) {
    let mut cartan_rows: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for row in b.cartan_matrix() {
        let mut r = row.clone();
        r.sort();
        *cartan_rows.entry(r).or_default() += 1;
    }
    (
        b.rank(),
        b.datum.roots.len(),
        b.semisimple_rank(),
        cartan_rows,
    )
}

/// Search for a lattice isomorphism `X_a -> X_b` carrying the root datum `a`
/// onto `b`. The map is pinned down by the images of the base of `a` (a base
/// of `b`, up to diagram symmetry) and of a radical basis (a unimodular change
/// of radical basis from a small box). Complete for torus rank at most one;
/// for larger torus rank it relies on the box.
pub fn find_isomorphism(a: &BasedRootDatum, b: &BasedRootDatum) -> Option<Vec<Vec<i64>>> {
    if invariants(a) != invariants(b) {
        return None;
    }
    let n = a.rank();
    let s = a.semisimple_rank();
    let t = n - s;
    let ka = a.datum.radical_basis();
    let kb = b.datum.radical_basis();
    let sa = a.simple_roots();
    let sb = b.simple_roots();
    let ca = a.cartan_matrix();
    let cb = b.cartan_matrix();
    // Source basis (as columns) and its inverse.
    let mut src: Vec<Vec<i64>> = sa.clone();
    src.extend(ka.iter().cloned());
    let src_inv = inverse_q(&to_q(&transpose(&src)))?;
    let torus_maps = match t {
        0 => vec![vec![]],
        1 => vec![vec![vec![1]], vec![vec![-1]]],
        _ => lattice::unimodular_box(t, 2),
    };
    for p in lattice::permutations_matching(&ca, &cb) {
        for tm in &torus_maps {
            let mut dst: Vec<Vec<i64>> = p.iter().map(|&j| sb[j].clone()).collect();
            for row in tm.iter() {
                let mut v = vec![0i64; n];
                for (coef, kv) in row.iter().zip(&kb) {
                    for (x, y) in v.iter_mut().zip(kv) {
                        *x += coef * y;
                    }
                }
                dst.push(v);
            }
            let m = lattice::mat_mul_q(&to_q(&transpose(&dst)), &src_inv);
            let Some(m) = integral(&m) else { continue };
            if a.root_permutation(&m, b).is_some() {
                return Some(m);
            }
        }
    }
    None
}

pub fn are_isomorphic(a: &BasedRootDatum, b: &BasedRootDatum) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests;
