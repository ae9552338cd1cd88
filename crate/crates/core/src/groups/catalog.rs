//! Hand-encoded groups of order at most 16, one per isomorphism class.

use super::FiniteGroup;
use crate::error::{Error, Result};

pub const MAX_CATALOG_ORDER: usize = 16;

/// Abelian group `Z/m_1 x ... x Z/m_k`, mixed-radix encoding.
fn abelian(name: &str, moduli: &[usize]) -> FiniteGroup {
    let order: usize = moduli.iter().product();
    FiniteGroup::from_fn(name, order, |a, b| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for &m in moduli {
            out += ((a % m + b % m) % m) * place;
            a /= m;
            b /= m;
            place *= m;
        }
        out
    })
    .expect("abelian group")
}

/// `<a, b | a^n, b^k = a^s, b a b^-1 = a^r>`, elements `a^i b^j` encoded as
/// `i + n j`. Requires `r^k = 1` and `r s = s` mod n.
fn metacyclic(name: &str, n: usize, k: usize, r: usize, s: usize) -> FiniteGroup {
    let rpow = |j: usize| (0..j).fold(1usize, |acc, _| acc * r % n);
    FiniteGroup::from_fn(name, n * k, |x, y| {
        let (i1, j1) = (x % n, x / n);
        let (i2, j2) = (y % n, y / n);
        let mut i = i1 + rpow(j1) * i2;
        let mut j = j1 + j2;
        if j >= k {
            j -= k;
            i += s;
        }
        i % n + n * j
    })
    .expect("metacyclic group")
}

fn dihedral(order: usize) -> FiniteGroup {
    let n = order / 2;
    metacyclic(&format!("D{order}"), n, 2, n - 1, 0)
}

/// `<a, b, c | a^4 = b^2 = c^2 = 1, ab = ba, bc = cb, c a c^-1 = ab>`;
/// elements `a^i b^j c^l` encoded as `i + 4 j + 8 l`.
fn c2sq_semi_c4() -> FiniteGroup {
    let act = |i: usize, j: usize, l: usize| if l == 1 { (i, (j + i) % 2) } else { (i, j) };
    FiniteGroup::from_fn("C2^2:C4", 16, |x, y| {
        let (i1, j1, l1) = (x % 4, (x / 4) % 2, x / 8);
        let (i2, j2, l2) = (y % 4, (y / 4) % 2, y / 8);
        let (ti, tj) = act(i2, j2, l1);
        (i1 + ti) % 4 + 4 * ((j1 + tj) % 2) + 8 * ((l1 + l2) % 2)
    })
    .expect("group of order 16")
}

/// Pauli group `<X, Z, iI>`: elements `i^k X^a Z^b` encoded as `k + 4a + 8b`,
/// using `Z X = -X Z`.
fn pauli() -> FiniteGroup {
    FiniteGroup::from_fn("Pauli", 16, |x, y| {
        let (k1, a1, b1) = (x % 4, (x / 4) % 2, x / 8);
        let (k2, a2, b2) = (y % 4, (y / 4) % 2, y / 8);
        (k1 + k2 + 2 * b1 * a2) % 4 + 4 * ((a1 + a2) % 2) + 8 * ((b1 + b2) % 2)
    })
    .expect("Pauli group")
}

fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
}

fn groups_of_order(m: usize) -> Vec<FiniteGroup> {
    let z = |n: usize| FiniteGroup::cyclic(n);
    match m {
        1 => vec![FiniteGroup::trivial()],
        2 | 3 | 5 | 7 | 11 | 13 => vec![z(m)],
        4 => vec![z(4), abelian("Z2xZ2", &[2, 2])],
        6 => vec![z(6), dihedral(6).with_name("S3")],
        8 => vec![
            z(8),
            abelian("Z4xZ2", &[4, 2]),
            abelian("Z2^3", &[2, 2, 2]),
            dihedral(8),
            metacyclic("Q8", 4, 2, 3, 2),
        ],
        9 => vec![z(9), abelian("Z3xZ3", &[3, 3])],
        10 => vec![z(10), dihedral(10)],
        12 => vec![
            z(12),
            abelian("Z6xZ2", &[6, 2]),
            alternating4(),
            dihedral(12),
            metacyclic("Dic12", 6, 2, 5, 3),
        ],
        14 => vec![z(14), dihedral(14)],
        15 => vec![z(15)],
        16 => vec![
            z(16),
            abelian("Z4xZ4", &[4, 4]),
            abelian("Z8xZ2", &[8, 2]),
            abelian("Z4xZ2^2", &[4, 2, 2]),
            abelian("Z2^4", &[2, 2, 2, 2]),
            dihedral(16),
            metacyclic("Q16", 8, 2, 7, 4),
            metacyclic("SD16", 8, 2, 3, 0),
            metacyclic("M16", 8, 2, 5, 0),
            FiniteGroup::direct_product(&z(2), &dihedral(8)).with_name("Z2xD8"),
            FiniteGroup::direct_product(&z(2), &metacyclic("Q8", 4, 2, 3, 2)).with_name("Z2xQ8"),
            metacyclic("Z4:Z4", 4, 4, 3, 0),
            c2sq_semi_c4(),
            pauli(),
        ],
        _ => Vec::new(),
    }
}

/// One group per isomorphism class of order at most `max_order`, ordered by
/// order then catalog position.
pub fn group_catalog(max_order: usize) -> Result<Vec<FiniteGroup>> {
    if max_order > MAX_CATALOG_ORDER {
        return Err(Error::Unsupported(format!(
            "group catalog stops at order {MAX_CATALOG_ORDER}, got {max_order}"
        )));
    }
    Ok((1..=max_order).flat_map(groups_of_order).collect())
}

/// Look up a catalog group by name (`Z2`, `Z/2`, `C2`, `S3`, `D8`, ...).
pub fn catalog_group(name: &str) -> Result<FiniteGroup> {
    let norm = |s: &str| {
        s.replace("Z/", "Z")
            .replace(['(', ')', ' '], "")
            .to_ascii_lowercase()
    };
    let wanted = norm(name);
    let wanted = if wanted.starts_with('c') && wanted[1..].chars().all(|c| c.is_ascii_digit()) {
        format!("z{}", &wanted[1..])
    } else {
        wanted
    };
    if wanted == "1" || wanted == "z1" {
        return Ok(FiniteGroup::trivial());
    }
    group_catalog(MAX_CATALOG_ORDER)?
        .into_iter()
        .find(|g| norm(g.name()) == wanted)
        .ok_or_else(|| Error::InvalidArgument(format!("no catalog group named {name}")))
}
