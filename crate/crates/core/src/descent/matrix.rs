//! Square matrices over a [`FiniteAlgebra`], stored row-major as `Vec<u16>`.

use super::algebra::FiniteAlgebra;

pub fn identity(n: usize) -> Vec<u16> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        out[i * n + i] = 1;
    }
    out
}

pub fn mul(e: &FiniteAlgebra, n: usize, a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).fold(0, |acc, k| e.add(acc, e.mul(a[i * n + k], b[k * n + j])));
        }
    }
    out
}

pub fn transpose(n: usize, a: &[u16]) -> Vec<u16> {
    (0..n * n).map(|idx| a[(idx % n) * n + idx / n]).collect()
}

fn minor(n: usize, a: &[u16], row: usize, col: usize) -> Vec<u16> {
    (0..n)
        .filter(|&i| i != row)
        .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| a[i * n + j]))
        .collect()
}

/// Cofactor expansion along the first row.
pub fn det(e: &FiniteAlgebra, n: usize, a: &[u16]) -> u16 {
    match n {
        0 => 1,
        1 => a[0],
        2 => e.sub(e.mul(a[0], a[3]), e.mul(a[1], a[2])),
        _ => (0..n).fold(0, |acc, j| {
            if a[j] == 0 {
                return acc;
            }
            let term = e.mul(a[j], det(e, n - 1, &minor(n, a, 0, j)));
            if j % 2 == 0 {
                e.add(acc, term)
            } else {
                e.sub(acc, term)
            }
        }),
    }
}

/// Signed cofactors of the last row: `det(a) = sum_j a[n-1][j] * c[j]`.
pub fn last_row_cofactors(e: &FiniteAlgebra, n: usize, a: &[u16]) -> Vec<u16> {
    (0..n)
        .map(|j| {
            let c = det(e, n - 1, &minor(n, a, n - 1, j));
            if (n - 1 + j) % 2 == 0 {
                c
            } else {
                e.neg(c)
            }
        })
        .collect()
}

pub fn inverse(e: &FiniteAlgebra, n: usize, a: &[u16]) -> Option<Vec<u16>> {
    let d = e.inv(det(e, n, a))?;
    if n == 1 {
        return Some(vec![d]);
    }
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let c = det(e, n - 1, &minor(n, a, j, i));
            let c = if (i + j) % 2 == 0 { c } else { e.neg(c) };
            out[i * n + j] = e.mul(c, d);
        }
    }
    Some(out)
}

pub fn scale(e: &FiniteAlgebra, a: &[u16], c: u16) -> Vec<u16> {
    a.iter().map(|&x| e.mul(x, c)).collect()
}

/// Representative of `a` modulo scalars with first nonzero entry 1. Needs
/// that entry to be a unit, which holds over a field.
pub fn canonical_scale(e: &FiniteAlgebra, a: &[u16]) -> Vec<u16> {
    match a.iter().find(|&&x| x != 0).and_then(|&x| e.inv(x)) {
        Some(c) if c != 1 => scale(e, a, c),
        _ => a.to_vec(),
    }
}

pub fn is_upper_triangular(n: usize, a: &[u16]) -> bool {
    (0..n).all(|i| (0..i).all(|j| a[i * n + j] == 0))
}

pub fn is_diagonal(n: usize, a: &[u16]) -> bool {
    (0..n).all(|i| (0..n).all(|j| i == j || a[i * n + j] == 0))
}

/// The alternating antidiagonal `J[i][n-1-i] = (-1)^i` (0-based).
pub fn alternating_antidiagonal(e: &FiniteAlgebra, n: usize) -> Vec<u16> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        out[i * n + (n - 1 - i)] = if i % 2 == 0 { 1 } else { e.neg(1) };
    }
    out
}
