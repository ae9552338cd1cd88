//! Small exact linear algebra over Z and Q for lattice computations.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{smith_normal_form, IntMatrix};

pub type Q = Ratio<i64>;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Q::from(x)).collect())
        .collect()
}

/// Gauss-Jordan inverse; `None` if singular.
pub fn inverse_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c];
                for j in 0..2 * n {
                    let v = a[c][j];
                    a[r][j] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            let f = a[i][c] / a[r][c];
            for j in c..cols {
                let v = a[r][j];
                a[i][j] -= f * v;
            }
        }
        r += 1;
    }
    r
}

pub fn mat_vec_q(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul_q(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Integer matrix from a rational one, if every entry is integral.
pub fn integral(m: &[Vec<Q>]) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect()
        })
        .collect()
}

pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    IntMatrix::from_rows(m)
        .and_then(|a| a.det())
        .ok()
        .and_then(|d| d.to_i64())
        .unwrap_or(0)
}

pub fn int_matrix(m: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(m).expect("rectangular matrix")
}

pub fn from_int_matrix(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("entries fit in i64")
}

/// A basis (as rows) of the lattice spanned by the given integer rows.
pub fn lattice_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for c in 0..cols {
        // Euclid on column c among the remaining rows.
        loop {
            let nz: Vec<usize> = (0..a.len()).filter(|&i| a[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = Integer::div_floor(&a[i][c], &a[p][c]);
                    let prow = a[p].clone();
                    for (x, y) in a[i].iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..a.len()).find(|&i| a[i][c] != 0) {
            let mut row = a.remove(p);
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(row);
        }
    }
    out
}

/// A basis of the saturated sublattice `{x in Z^n : rows . x = 0}`.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    let (_, d, v) = smith_normal_form(&int_matrix(rows));
    let r = d.diagonal().iter().filter(|x| !x.is_zero()).count();
    let v = from_int_matrix(&v);
    (r..n)
        .map(|j| v.iter().map(|row| row[j]).collect())
        .collect()
}

/// All integer matrices of size t×t with entries in `[-bound, bound]` and
/// determinant ±1, in a fixed order (identity first).
pub fn unimodular_box(t: usize, bound: i64) -> Vec<Vec<Vec<i64>>> {
    let ident: Vec<Vec<i64>> = (0..t)
        .map(|i| (0..t).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut out = vec![ident.clone()];
    let span = (2 * bound + 1) as usize;
    let total = span.pow((t * t) as u32);
    for idx in 0..total {
        let mut c = idx;
        let mut m = vec![vec![0i64; t]; t];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = (c % span) as i64 - bound;
                c /= span;
            }
        }
        if m != ident && det_i64(&m).abs() == 1 {
            out.push(m);
        }
    }
    out
}

pub fn is_unimodular_i64(m: &[Vec<i64>]) -> bool {
    m.len() == m.first().map_or(0, Vec::len) && det_i64(m).abs() == 1
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    integral(&inverse_q(&to_q(m))?)
}

pub fn positive_mod(a: i64, n: i64) -> i64 {
    a.rem_euclid(n)
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Permutations `p` with `target[p[i]][p[j]] == source[i][j]`.
pub fn permutations_matching(source: &[Vec<i64>], target: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let s = source.len();
    if target.len() != s {
        return Vec::new();
    }
    permutations(s)
        .into_iter()
        .filter(|p| (0..s).all(|i| (0..s).all(|j| target[p[i]][p[j]] == source[i][j])))
        .collect()
}
