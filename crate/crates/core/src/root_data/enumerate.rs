//! Enumeration of root data of a given rank.
//!
//! A root datum of rank n with Cartan type of rank s and radical of rank
//! t = n - s sits between `Q (+) Z^t` and `P (+) (1/N) Z^t`, where Q and P are
//! the root and weight lattices and N is the exponent of P/Q. It is determined
//! by its image C in `P/Q x (Z/N)^t`, a subgroup meeting the torus factor
//! trivially. Isomorphisms preserve the root span and the radical, so classes
//! correspond to orbits of such C under diagram symmetries times GL_t(Z).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::ToPrimitive;

use super::lattice::{
    self, from_int_matrix, int_matrix, integral, inverse_q, inverse_unimodular, lattice_basis,
    mat_vec, to_q, transpose, Q,
};
use super::{diagram_permutations, find_isomorphism, BasedRootDatum, RootDatum};
use crate::algebra::smith_normal_form;
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_RANK: usize = 3;

/// An irreducible Cartan type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    G2,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) => n,
            CartanType::G2 => 2,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

/// `A[i][j] = <alpha_j, alpha_i^v>` for one irreducible type, Bourbaki order.
fn irreducible_cartan(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    match t {
        CartanType::A(_) => {}
        // alpha_n short: <alpha_{n-1}, alpha_n^v> = -2
        CartanType::B(_) => a[n - 1][n - 2] = -2,
        CartanType::C(_) => a[n - 2][n - 1] = -2,
        CartanType::G2 => a[1][0] = -3,
    }
    a
}

/// Block-diagonal Cartan matrix of a product of irreducible types.
pub fn cartan_matrix(types: &[CartanType]) -> Vec<Vec<i64>> {
    let s: usize = types.iter().map(|t| t.rank()).sum();
    let mut a = vec![vec![0i64; s]; s];
    let mut off = 0;
    for &t in types {
        let b = irreducible_cartan(t);
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                a[off + i][off + j] = x;
            }
        }
        off += t.rank();
    }
    a
}

/// Semisimple Cartan types of rank exactly `s` (up to isomorphism), for s ≤ 3.
fn cartan_types(s: usize) -> Vec<Vec<CartanType>> {
    use CartanType::*;
    match s {
        0 => vec![vec![]],
        1 => vec![vec![A(1)]],
        2 => vec![vec![A(1), A(1)], vec![A(2)], vec![B(2)], vec![G2]],
        3 => vec![
            vec![A(1), A(1), A(1)],
            vec![A(1), A(2)],
            vec![A(1), B(2)],
            vec![A(1), G2],
            vec![A(3)],
            vec![B(3)],
            vec![C(3)],
        ],
        _ => Vec::new(),
    }
}

fn type_name(types: &[CartanType], t: usize) -> String {
    let mut parts: Vec<String> = types.iter().map(|x| x.to_string()).collect();
    if t > 0 {
        parts.push(format!("T{t}"));
    }
    if parts.is_empty() {
        "T0".into()
    } else {
        parts.join("x")
    }
}

/// Coordinates on `P/Q x (Z/N)^t`.
struct Gluing {
    s: usize,
    t: usize,
    cartan: Vec<Vec<i64>>,
    u: Vec<Vec<i64>>,
    u_inv: Vec<Vec<i64>>,
    /// Positions of the nontrivial invariant factors and their values.
    factors: Vec<(usize, i64)>,
    exponent: i64,
}

impl Gluing {
    fn new(types: &[CartanType], t: usize) -> Self {
        let cartan = cartan_matrix(types);
        let s = cartan.len();
        let (u, d, _) = smith_normal_form(&int_matrix(&cartan));
        let u = from_int_matrix(&u);
        let u_inv = inverse_unimodular(&u).expect("unimodular");
        let factors: Vec<(usize, i64)> = d
            .diagonal()
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.to_i64().expect("small")))
            .filter(|&(_, x)| x > 1)
            .collect();
        let exponent = factors.iter().map(|&(_, x)| x).max().unwrap_or(1);
        Gluing {
            s,
            t,
            cartan,
            u,
            u_inv,
            factors,
            exponent,
        }
    }

    fn moduli(&self) -> Vec<i64> {
        let mut m: Vec<i64> = self.factors.iter().map(|&(_, d)| d).collect();
        m.extend(std::iter::repeat_n(self.exponent, self.t));
        m
    }

    fn elements(&self) -> Vec<Vec<i64>> {
        let moduli = self.moduli();
        let total: i64 = moduli.iter().product();
        (0..total)
            .map(|mut c| {
                moduli
                    .iter()
                    .map(|&m| {
                        let x = c % m;
                        c /= m;
                        x
                    })
                    .collect()
            })
            .collect()
    }

    fn weight_lift(&self, g: &[i64]) -> Vec<i64> {
        let mut w = vec![0i64; self.s];
        for (k, &(pos, _)) in self.factors.iter().enumerate() {
            w[pos] = g[k];
        }
        mat_vec(&self.u_inv, &w)
    }

    fn reduce_weight(&self, p: &[i64]) -> Vec<i64> {
        let w = mat_vec(&self.u, p);
        self.factors
            .iter()
            .map(|&(pos, d)| w[pos].rem_euclid(d))
            .collect()
    }

    fn closure(&self, gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
        let moduli = self.moduli();
        let zero = vec![0i64; moduli.len()];
        let mut set = BTreeSet::from([zero.clone()]);
        let mut queue = vec![zero];
        while let Some(x) = queue.pop() {
            for g in gens {
                let y: Vec<i64> = x
                    .iter()
                    .zip(g)
                    .zip(&moduli)
                    .map(|((a, b), m)| (a + b) % m)
                    .collect();
                if set.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Subgroups meeting `0 x (Z/N)^t` trivially.
    fn admissible_subgroups(&self) -> Vec<BTreeSet<Vec<i64>>> {
        let elems = self.elements();
        let gens_needed = self.moduli().len();
        let mut found: BTreeSet<BTreeSet<Vec<i64>>> = BTreeSet::new();
        let mut stack: Vec<(usize, Vec<Vec<i64>>)> = vec![(0, Vec::new())];
        while let Some((start, gens)) = stack.pop() {
            found.insert(self.closure(&gens));
            if gens.len() < gens_needed {
                for (i, e) in elems.iter().enumerate().skip(start) {
                    let mut g = gens.clone();
                    g.push(e.clone());
                    stack.push((i + 1, g));
                }
            }
        }
        let np = self.factors.len();
        found
            .into_iter()
            .filter(|c| {
                c.iter()
                    .all(|x| x[..np].iter().any(|&v| v != 0) || x[np..].iter().all(|&v| v == 0))
            })
            .collect()
    }

    /// Symmetries of the gluing group: diagram automorphisms on the P/Q part
    /// times matrices mod N of determinant ±1 on the torus part.
    fn symmetries(&self) -> Vec<Box<dyn Fn(&[i64]) -> Vec<i64> + '_>> {
        let np = self.factors.len();
        let n = self.exponent;
        let t = self.t;
        let mut torus_mats: Vec<Vec<Vec<i64>>> = Vec::new();
        let total = n.pow((t * t) as u32);
        for mut c in 0..total {
            let mut m = vec![vec![0i64; t]; t];
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x = c % n;
                    c /= n;
                }
            }
            let det = lattice::det_i64(&m).rem_euclid(n);
            if t == 0 || det == 1 % n || det == (n - 1) % n {
                torus_mats.push(m);
            }
        }
        let mut out: Vec<Box<dyn Fn(&[i64]) -> Vec<i64> + '_>> = Vec::new();
        for sigma in diagram_permutations(&self.cartan) {
            for m in &torus_mats {
                let sigma = sigma.clone();
                let m = m.clone();
                out.push(Box::new(move |g: &[i64]| {
                    let p = self.weight_lift(&g[..np]);
                    let mut q = vec![0i64; self.s];
                    for (i, &x) in p.iter().enumerate() {
                        q[sigma[i]] = x;
                    }
                    let mut img = self.reduce_weight(&q);
                    img.extend(mat_vec(&m, &g[np..]).iter().map(|x| x.rem_euclid(n)));
                    img
                }));
            }
        }
        out
    }

    fn canonical(
        &self,
        c: &BTreeSet<Vec<i64>>,
        syms: &[Box<dyn Fn(&[i64]) -> Vec<i64> + '_>],
    ) -> Vec<Vec<i64>> {
        syms.iter()
            .map(|h| {
                let mut img: Vec<Vec<i64>> = c.iter().map(|x| h(x)).collect();
                img.sort();
                img
            })
            .min()
            .unwrap_or_default()
    }

    /// The root datum whose character lattice is the preimage of `c`, with its
    /// simple roots in Cartan order.
    fn datum(&self, c: &[Vec<i64>]) -> Result<(RootDatum, Vec<Vec<i64>>)> {
        let (s, t, n) = (self.s, self.t, self.exponent);
        let rank = s + t;
        let np = self.factors.len();
        // Generators of N*X in ambient coordinates (weights, then torus).
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for j in 0..s {
            let mut v: Vec<i64> = (0..s).map(|i| n * self.cartan[i][j]).collect();
            v.extend(std::iter::repeat_n(0, t));
            gens.push(v);
        }
        for k in 0..t {
            let mut v = vec![0i64; rank];
            v[s + k] = n;
            gens.push(v);
        }
        for g in c {
            let mut v: Vec<i64> = self.weight_lift(&g[..np]).iter().map(|x| n * x).collect();
            v.extend(g[np..].iter().copied());
            gens.push(v);
        }
        let basis = lattice_basis(&gens);
        if basis.len() != rank {
            return Err(Error::InvalidRootDatum(
                "gluing lattice has the wrong rank".into(),
            ));
        }
        // Roots: solve basis^T y = N alpha.
        let bt_inv = inverse_q(&to_q(&transpose(&basis))).expect("full rank");
        let mut simple_roots = Vec::new();
        for j in 0..s {
            let mut alpha: Vec<i64> = (0..s).map(|i| n * self.cartan[i][j]).collect();
            alpha.extend(std::iter::repeat_n(0, t));
            let y = lattice::mat_vec_q(
                &bt_inv,
                &alpha.iter().map(|&x| Q::from(x)).collect::<Vec<_>>(),
            );
            let y = integral(&[y])
                .ok_or_else(|| Error::InvalidRootDatum("root outside lattice".into()))?;
            simple_roots.push(y[0].clone());
        }
        let mut simple_coroots = Vec::new();
        for i in 0..s {
            let col: Vec<Q> = basis.iter().map(|b| Q::new(b[i], n)).collect();
            let col = integral(&[col])
                .ok_or_else(|| Error::InvalidRootDatum("coroot not integral".into()))?;
            simple_coroots.push(col[0].clone());
        }
        let d = RootDatum::from_simple(rank, &simple_roots, &simple_coroots)?;
        Ok((d, simple_roots))
    }
}

fn based(datum: RootDatum, simple: &[Vec<i64>]) -> Result<BasedRootDatum> {
    let base = simple
        .iter()
        .map(|r| datum.root_index(r).expect("simple root present"))
        .collect();
    BasedRootDatum::new(datum, base)
}

/// The based root datum of Cartan type `types` with radical rank `t` whose
/// character lattice is generated over `Q (+) Z^t` by the given gluing
/// elements. Gluing coordinates: nontrivial invariant factors of P/Q (in Smith
/// form order), then `(Z/N)^t`.
pub fn datum_from_gluing(
    types: &[CartanType],
    t: usize,
    gens: &[Vec<i64>],
) -> Result<BasedRootDatum> {
    let g = Gluing::new(types, t);
    let width = g.moduli().len();
    if gens.iter().any(|x| x.len() != width) {
        return Err(Error::InvalidArgument(format!(
            "gluing elements need {width} coordinates"
        )));
    }
    let c: Vec<Vec<i64>> = g.closure(gens).into_iter().collect();
    let (d, simple) = g.datum(&c)?;
    Ok(based(d, &simple)?.with_label(type_name(types, t)))
}

/// One based root datum per isomorphism class of rank exactly `n`.
pub fn enumerate_root_data(n: usize) -> Result<Vec<BasedRootDatum>> {
    if n > MAX_ENUMERATION_RANK {
        return Err(Error::Unsupported(format!(
            "root datum enumeration is implemented up to rank {MAX_ENUMERATION_RANK}, got {n}"
        )));
    }
    let named = named_data()?;
    let mut out = Vec::new();
    for s in 0..=n {
        let t = n - s;
        for types in cartan_types(s) {
            let g = Gluing::new(&types, t);
            let syms = g.symmetries();
            let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
            let mut classes: Vec<(usize, Vec<Vec<i64>>)> = Vec::new();
            for c in g.admissible_subgroups() {
                let key = g.canonical(&c, &syms);
                if seen.insert(key.clone()) {
                    classes.push((c.len(), key));
                }
            }
            // Larger gluing groups (closer to simply connected) first.
            classes.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for (size, c) in classes {
                let (d, simple) = g.datum(&c)?;
                let b = based(d, &simple)?;
                let label = named
                    .iter()
                    .find(|(_, m)| find_isomorphism(&b, m).is_some())
                    .map(|(name, _)| name.to_string())
                    .unwrap_or_else(|| format!("{} (gluing order {size})", type_name(&types, t)));
                out.push(b.with_label(label));
            }
        }
    }
    Ok(out)
}

/// Named reference data of rank at most two.
pub(crate) fn named_data() -> Result<Vec<(&'static str, BasedRootDatum)>> {
    use CartanType::*;
    let a1 = [A(1)];
    let a1a1 = [A(1), A(1)];
    Ok(vec![
        ("trivial", datum_from_gluing(&[], 0, &[])?),
        ("Gm", datum_from_gluing(&[], 1, &[])?),
        ("SL2", datum_from_gluing(&a1, 0, &[vec![1]])?),
        ("PGL2", datum_from_gluing(&a1, 0, &[])?),
        ("Gm^2", datum_from_gluing(&[], 2, &[])?),
        ("SL2xGm", datum_from_gluing(&a1, 1, &[vec![1, 0]])?),
        ("GL2", datum_from_gluing(&a1, 1, &[vec![1, 1]])?),
        ("PGL2xGm", datum_from_gluing(&a1, 1, &[])?),
        (
            "SL2xSL2",
            datum_from_gluing(&a1a1, 0, &[vec![1, 0], vec![0, 1]])?,
        ),
        ("SO4", datum_from_gluing(&a1a1, 0, &[vec![1, 1]])?),
        ("SL2xPGL2", datum_from_gluing(&a1a1, 0, &[vec![1, 0]])?),
        ("PGL2xPGL2", datum_from_gluing(&a1a1, 0, &[])?),
        ("SL3", datum_from_gluing(&[A(2)], 0, &[vec![1]])?),
        ("PGL3", datum_from_gluing(&[A(2)], 0, &[])?),
        ("Sp4", datum_from_gluing(&[B(2)], 0, &[vec![1]])?),
        ("SO5", datum_from_gluing(&[B(2)], 0, &[])?),
        ("G2", datum_from_gluing(&[G2], 0, &[])?),
    ])
}
