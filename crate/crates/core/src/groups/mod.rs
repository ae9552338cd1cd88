//! Finite groups as multiplication tables, homomorphisms up to conjugacy, and
//! nonabelian 1-cocycles with their cohomology classes.

mod catalog;
mod cohomology;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{catalog_group, group_catalog, MAX_CATALOG_ORDER};
pub use cohomology::{
    extend_from_generators, h1_classes, h1_classes_generic, hom_classes, hom_classes_generic,
    homomorphisms, z1_cocycles, z1_cocycles_generic, z1_exhaustive, Cocycle, GroupAction, H1Class,
    SEARCH_LIMIT,
};

/// Group operations on some element type; lets the cocycle machinery run over
/// both table groups and implicitly represented matrix groups.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash + Ord + Debug;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Every element, in a fixed order.
    fn elements(&self) -> Result<Vec<Self::Elem>>;

    fn conjugate(&self, g: &Self::Elem, x: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    name: String,
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Vec<String>,
}

/// A finite group given by its multiplication table; index 0 is the identity
/// and `table[i][j]` is the index of `g_i g_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    inverses: Vec<usize>,
}

impl TryFrom<RawGroup> for FiniteGroup {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        if raw.order != raw.table.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} but table has {} rows",
                raw.order,
                raw.table.len()
            )));
        }
        FiniteGroup::from_table(&raw.name, raw.table, raw.labels)
    }
}

impl From<FiniteGroup> for RawGroup {
    fn from(g: FiniteGroup) -> Self {
        RawGroup {
            name: g.name,
            order: g.table.len(),
            table: g.table,
            labels: g.labels,
        }
    }
}

fn default_labels(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| {
            if i == 0 {
                "e".to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

impl FiniteGroup {
    /// Validate a table: a Latin square with identity at index 0, associative
    /// (exhaustively up to order 24, by Light's test on a generating set above).
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table
            .iter()
            .any(|r| r.len() != m || r.iter().any(|&x| x >= m))
        {
            return Err(Error::InvalidGroup(
                "table is not square with entries in range".into(),
            ));
        }
        if (0..m).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(Error::InvalidGroup(
                "index 0 is not a two-sided identity".into(),
            ));
        }
        for i in 0..m {
            let row: HashSet<usize> = table[i].iter().copied().collect();
            let col: HashSet<usize> = (0..m).map(|j| table[j][i]).collect();
            if row.len() != m || col.len() != m {
                return Err(Error::InvalidGroup(format!(
                    "row or column {i} is not a permutation"
                )));
            }
        }
        let labels = if labels.is_empty() {
            default_labels(m)
        } else {
            labels
        };
        if labels.len() != m {
            return Err(Error::InvalidGroup("label count differs from order".into()));
        }
        let inverses = (0..m)
            .map(|i| {
                (0..m)
                    .find(|&j| table[i][j] == 0)
                    .expect("Latin square has an inverse")
            })
            .collect();
        let g = FiniteGroup {
            name: name.to_string(),
            table,
            labels,
            inverses,
        };
        let checkers: Vec<usize> = if m <= 24 {
            (0..m).collect()
        } else {
            g.generators()
        };
        for a in 0..m {
            for b in 0..m {
                for &c in &checkers {
                    if g.mul_idx(g.mul_idx(a, b), c) != g.mul_idx(a, g.mul_idx(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Build from a multiplication rule on `0..order`, with 0 the identity.
    pub fn from_fn(name: &str, order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..order)
            .map(|i| (0..order).map(|j| mul(i, j)).collect())
            .collect();
        Self::from_table(name, table, Vec::new())
    }

    /// Closure of permutations of `0..n`; elements in breadth-first order.
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<Self> {
        let n = gens.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..n).collect();
        let compose =
            |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { (0..n).map(|i| a[b[i]]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: std::collections::HashMap<Vec<usize>, usize> =
            [(id, 0)].into_iter().collect();
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = compose(&elems[i], g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let m = elems.len();
        let table = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| index[&compose(&elems[a], &elems[b])])
                    .collect()
            })
            .collect();
        let labels = elems.iter().map(|p| format!("{p:?}")).collect();
        Self::from_table(name, table, labels)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(&format!("Z{n}"), n, |a, b| (a + b) % n).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        Self::from_fn("trivial", 1, |_, _| 0).expect("trivial group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv_idx(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul_idx(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.order();
        (0..m).all(|i| (0..m).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.element_order(a) == self.order())
    }

    /// Whether the table is literally `(i + j) mod m`.
    pub fn is_standard_cyclic(&self) -> bool {
        let m = self.order();
        (0..m).all(|i| (0..m).all(|j| self.table[i][j] == (i + j) % m))
    }

    pub fn subgroup_closure(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul_idx(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Greedy generating set: scan elements in index order, keep each one not
    /// already in the span of those kept.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([0]);
        for a in 1..self.order() {
            if !span.contains(&a) {
                gens.push(a);
                span = self.subgroup_closure(&gens);
                if span.len() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    /// Sorted multiset of element orders.
    pub fn order_statistics(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort();
        v
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (m, n) = (a.order(), b.order());
        FiniteGroup::from_fn(&format!("{}x{}", a.name, b.name), m * n, |x, y| {
            a.mul_idx(x % m, y % m) + m * b.mul_idx(x / m, y / m)
        })
        .expect("direct product of groups")
    }

    /// Isomorphism `self -> other` as an index map, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order() != other.order() || self.order_statistics() != other.order_statistics() {
            return None;
        }
        let gens = self.generators();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let o = self.element_order(g);
                (0..other.order())
                    .filter(|&h| other.element_order(h) == o)
                    .collect()
            })
            .collect();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = choice
                .iter()
                .zip(&candidates)
                .map(|(&c, cand)| cand[c])
                .collect();
            if let Some(map) =
                extend_from_generators(self, other, &gens, &images, &|_, x: &usize| *x)
            {
                let distinct: HashSet<usize> = map.iter().copied().collect();
                if distinct.len() == self.order() {
                    return Some(map);
                }
            }
            // Odometer over candidate tuples.
            let mut k = 0;
            loop {
                if k == gens.len() {
                    return None;
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

impl GroupOps for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul_idx(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.inv_idx(*a)
    }

    fn elements(&self) -> Result<Vec<usize>> {
        Ok((0..self.order()).collect())
    }
}

/// Helpers on explicit subgroups of a [`GroupOps`] group.
pub mod subgroup {
    use std::collections::HashSet;

    use super::GroupOps;

    /// Closure of `gens` under multiplication.
    pub fn closure<G: GroupOps>(g: &G, gens: &[G::Elem]) -> HashSet<G::Elem> {
        let id = g.identity();
        let mut set: HashSet<G::Elem> = HashSet::from([id.clone()]);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for s in gens {
                let y = g.mul(&x, s);
                if !set.contains(&y) {
                    set.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        set
    }

    /// A generating set for the group whose elements are `elems`, found by a
    /// deterministic stride through the list.
    pub fn generating_set<G: GroupOps>(g: &G, elems: &[G::Elem]) -> Vec<G::Elem> {
        let n = elems.len();
        let mut gens: Vec<G::Elem> = Vec::new();
        let mut span = closure(g, &gens);
        let stride = [7919usize, 104_729, 1_299_709]
            .into_iter()
            .find(|s| n == 0 || num_integer::gcd(*s, n) == 1)
            .unwrap_or(1);
        let mut pos = 0usize;
        for _ in 0..n {
            if span.len() == n {
                break;
            }
            pos = (pos + stride) % n;
            let x = &elems[pos];
            if !span.contains(x) {
                gens.push(x.clone());
                span = closure(g, &gens);
            }
        }
        gens
    }

    /// Elements of `elems` commuting with every generator.
    pub fn center<G: GroupOps>(g: &G, elems: &[G::Elem], gens: &[G::Elem]) -> Vec<G::Elem> {
        elems
            .iter()
            .filter(|z| gens.iter().all(|s| g.mul(z, s) == g.mul(s, z)))
            .cloned()
            .collect()
    }

    /// Commutator subgroup: normal closure of the commutators of generators.
    pub fn derived_subgroup<G: GroupOps>(g: &G, gens: &[G::Elem]) -> HashSet<G::Elem> {
        let comm = |a: &G::Elem, b: &G::Elem| g.mul(&g.mul(a, b), &g.mul(&g.inv(a), &g.inv(b)));
        let mut normal_gens: Vec<G::Elem> = Vec::new();
        for a in gens {
            for b in gens {
                let c = comm(a, b);
                if c != g.identity() && !normal_gens.contains(&c) {
                    normal_gens.push(c);
                }
            }
        }
        let mut h = closure(g, &normal_gens);
        loop {
            let mut added = false;
            let snapshot = normal_gens.clone();
            for x in &snapshot {
                for s in gens {
                    let y = g.conjugate(s, x);
                    if !h.contains(&y) {
                        normal_gens.push(y);
                        h = closure(g, &normal_gens);
                        added = true;
                    }
                }
            }
            if !added {
                return h;
            }
        }
    }
}
