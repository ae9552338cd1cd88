//! Homomorphisms, 1-cocycles and cohomology classes with nonabelian
//! coefficients.
//!
//! A 1-cocycle for an action `▹` of Γ on A is a map `c: Γ -> A` with
//! `c(στ) = c(σ) · (σ ▹ c(τ))`. Two cocycles are cohomologous when
//! `c1(γ) = φ^-1 · c2(γ) · (γ ▹ φ)` for some φ in A. Homomorphisms are the
//! cocycles of the trivial action.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupOps};
use crate::error::{Error, Result};

/// Bound on `|coefficients|^|generators|` for the cocycle search.
pub const SEARCH_LIMIT: u128 = 1_000_000;

/// Extend values on `gens` to a map on all of Γ by the cocycle rule, walking
/// the Cayley graph breadth-first; `None` if the assignment is inconsistent.
/// The result satisfies the identity on all pairs.
pub fn extend_from_generators<G: GroupOps>(
    gamma: &FiniteGroup,
    target: &G,
    gens: &[usize],
    values: &[G::Elem],
    act: &dyn Fn(usize, &G::Elem) -> G::Elem,
) -> Option<Vec<G::Elem>> {
    let m = gamma.order();
    let mut c: Vec<Option<G::Elem>> = vec![None; m];
    c[0] = Some(target.identity());
    for (&s, v) in gens.iter().zip(values) {
        if s == 0 {
            if *v != target.identity() {
                return None;
            }
            continue;
        }
        c[s] = Some(v.clone());
    }
    let mut queue = VecDeque::from([0usize]);
    let mut visited = vec![false; m];
    visited[0] = true;
    while let Some(g) = queue.pop_front() {
        let cg = c[g].clone().expect("visited elements carry values");
        for (&s, v) in gens.iter().zip(values) {
            let h = gamma.mul_idx(g, s);
            let val = target.mul(&cg, &act(g, v));
            match &c[h] {
                Some(existing) if *existing != val => return None,
                Some(_) => {}
                None => c[h] = Some(val),
            }
            if !visited[h] {
                visited[h] = true;
                queue.push_back(h);
            }
        }
    }
    let c: Vec<G::Elem> = c.into_iter().collect::<Option<Vec<_>>>()?;
    is_cocycle(gamma, target, &c, act).then_some(c)
}

pub fn is_cocycle<G: GroupOps>(
    gamma: &FiniteGroup,
    target: &G,
    c: &[G::Elem],
    act: &dyn Fn(usize, &G::Elem) -> G::Elem,
) -> bool {
    let m = gamma.order();
    c.len() == m
        && (0..m)
            .all(|a| (0..m).all(|b| c[gamma.mul_idx(a, b)] == target.mul(&c[a], &act(a, &c[b]))))
}

fn search_space(base: usize, exp: usize) -> u128 {
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

/// Every 1-cocycle, found by assigning values on a greedy generating set of Γ
/// and propagating. Errors when `|coefficients|^|generators|` exceeds `limit`.
pub fn z1_cocycles_generic<G: GroupOps>(
    gamma: &FiniteGroup,
    coeffs: &G,
    act: &dyn Fn(usize, &G::Elem) -> G::Elem,
    limit: u128,
) -> Result<Vec<Vec<G::Elem>>> {
    let gens = gamma.generators();
    let elems = coeffs.elements()?;
    let space = search_space(elems.len(), gens.len());
    if space > limit {
        return Err(Error::size("1-cocycle search", space, limit));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let values: Vec<G::Elem> = choice.iter().map(|&i| elems[i].clone()).collect();
        if let Some(c) = extend_from_generators(gamma, coeffs, &gens, &values, act) {
            out.push(c);
        }
        let mut k = 0;
        loop {
            if k == gens.len() {
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < elems.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Reference implementation: test every map Γ -> A.
pub fn z1_exhaustive<G: GroupOps>(
    gamma: &FiniteGroup,
    coeffs: &G,
    act: &dyn Fn(usize, &G::Elem) -> G::Elem,
    limit: u128,
) -> Result<Vec<Vec<G::Elem>>> {
    let m = gamma.order();
    let elems = coeffs.elements()?;
    let space = search_space(elems.len(), m.saturating_sub(1));
    if space > limit {
        return Err(Error::size("exhaustive 1-cocycle search", space, limit));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; m.saturating_sub(1)];
    loop {
        let mut c = vec![coeffs.identity()];
        c.extend(choice.iter().map(|&i| elems[i].clone()));
        if is_cocycle(gamma, coeffs, &c, act) {
            out.push(c);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < elems.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// A cohomology class: indices into the cocycle list, each with a witness φ
/// such that `member(γ) = φ^-1 · representative(γ) · (γ ▹ φ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Class<E> {
    pub representative: usize,
    pub members: Vec<(usize, E)>,
}

/// Partition cocycles into cohomology classes by computing the coboundary
/// orbit of each unclassified cocycle.
pub fn h1_classes_generic<G: GroupOps>(
    gamma: &FiniteGroup,
    coeffs: &G,
    act: &dyn Fn(usize, &G::Elem) -> G::Elem,
    cocycles: &[Vec<G::Elem>],
) -> Result<Vec<H1Class<G::Elem>>> {
    let m = gamma.order();
    if cocycles.iter().any(|c| c.len() != m) {
        return Err(Error::InvalidArgument(
            "cocycle length differs from |Γ|".into(),
        ));
    }
    let index: HashMap<&Vec<G::Elem>, usize> =
        cocycles.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let elems = coeffs.elements()?;
    let mut class_of: Vec<Option<usize>> = vec![None; cocycles.len()];
    let mut classes: Vec<H1Class<G::Elem>> = Vec::new();
    for i in 0..cocycles.len() {
        if class_of[i].is_some() {
            continue;
        }
        let k = classes.len();
        class_of[i] = Some(k);
        let mut members = vec![(i, coeffs.identity())];
        for phi in &elems {
            let phi_inv = coeffs.inv(phi);
            let twisted: Vec<G::Elem> = (0..m)
                .map(|g| coeffs.mul(&coeffs.mul(&phi_inv, &cocycles[i][g]), &act(g, phi)))
                .collect();
            if let Some(&j) = index.get(&twisted) {
                if class_of[j].is_none() {
                    class_of[j] = Some(k);
                    members.push((j, phi.clone()));
                }
            }
        }
        members.sort_by_key(|(j, _)| *j);
        classes.push(H1Class {
            representative: i,
            members,
        });
    }
    Ok(classes)
}

/// Homomorphisms Γ -> target (the cocycles of the trivial action).
pub fn homomorphisms<G: GroupOps>(source: &FiniteGroup, target: &G) -> Result<Vec<Vec<G::Elem>>> {
    z1_cocycles_generic(source, target, &|_, x: &G::Elem| x.clone(), u128::MAX)
}

/// One representative per conjugacy class of homomorphisms, the
/// lexicographically least member of each class, in increasing order.
pub fn hom_classes_generic<G: GroupOps>(
    source: &FiniteGroup,
    target: &G,
) -> Result<Vec<Vec<G::Elem>>> {
    let homs = homomorphisms(source, target)?;
    let elems = target.elements()?;
    let mut reps: BTreeMap<Vec<G::Elem>, ()> = BTreeMap::new();
    for h in homs {
        let key = elems
            .iter()
            .map(|t| h.iter().map(|x| target.conjugate(t, x)).collect::<Vec<_>>())
            .min()
            .expect("nonempty group");
        reps.insert(key, ());
    }
    Ok(reps.into_keys().collect())
}

pub fn hom_classes(source: &FiniteGroup, target: &FiniteGroup) -> Vec<Vec<usize>> {
    hom_classes_generic(source, target).expect("table groups enumerate")
}

/// An action of one table group on another by automorphisms;
/// `map[γ][a]` is the index of `γ ▹ a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAction {
    pub map: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn trivial(actor: &FiniteGroup, target: &FiniteGroup) -> Self {
        GroupAction {
            map: vec![(0..target.order()).collect(); actor.order()],
        }
    }

    /// Validate: each map is an automorphism and γ ↦ map[γ] a homomorphism.
    pub fn new(actor: &FiniteGroup, target: &FiniteGroup, map: Vec<Vec<usize>>) -> Result<Self> {
        let (m, n) = (actor.order(), target.order());
        if map.len() != m || map.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidGroup("action has the wrong shape".into()));
        }
        for (g, p) in map.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(format!(
                        "action of {g} is not a bijection"
                    )));
                }
            }
            if (0..n).any(|a| (0..n).any(|b| p[target.mul_idx(a, b)] != target.mul_idx(p[a], p[b])))
            {
                return Err(Error::InvalidGroup(format!(
                    "action of {g} is not a homomorphism"
                )));
            }
        }
        if map[0].iter().enumerate().any(|(a, &x)| a != x) {
            return Err(Error::InvalidGroup(
                "identity does not act trivially".into(),
            ));
        }
        for g in 0..m {
            for h in 0..m {
                let gh = actor.mul_idx(g, h);
                if (0..n).any(|a| map[gh][a] != map[g][map[h][a]]) {
                    return Err(Error::InvalidGroup(
                        "action is not a homomorphism into Aut".into(),
                    ));
                }
            }
        }
        Ok(GroupAction { map })
    }

    pub fn apply(&self, g: usize, a: usize) -> usize {
        self.map[g][a]
    }
}

/// A cocycle with values in a table group, `values[γ]` an element index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cocycle {
    pub values: Vec<usize>,
}

pub fn z1_cocycles(
    gamma: &FiniteGroup,
    coeffs: &FiniteGroup,
    action: &GroupAction,
) -> Result<Vec<Cocycle>> {
    let act = |g: usize, a: &usize| action.apply(g, *a);
    Ok(z1_cocycles_generic(gamma, coeffs, &act, SEARCH_LIMIT)?
        .into_iter()
        .map(|values| Cocycle { values })
        .collect())
}

pub fn h1_classes(
    gamma: &FiniteGroup,
    coeffs: &FiniteGroup,
    action: &GroupAction,
    cocycles: &[Cocycle],
) -> Result<Vec<H1Class<usize>>> {
    let act = |g: usize, a: &usize| action.apply(g, *a);
    let vals: Vec<Vec<usize>> = cocycles.iter().map(|c| c.values.clone()).collect();
    h1_classes_generic(gamma, coeffs, &act, &vals)
}
