//! Restriction of scalars for matrices over a finite étale algebra.

use crate::algebra::{FMatrix, FieldElement, Poly};
use crate::error::{Error, Result};
use crate::etale::EtaleAlgebra;

/// Matrix over F of multiplication by `a` in the basis `1, z, ..., z^(m-1)`.
fn multiplication_matrix(alg: &EtaleAlgebra, a: &Poly) -> FMatrix {
    let m = alg.dimension();
    let k = &alg.field;
    let mut out = FMatrix::zeros(k, m, m);
    for j in 0..m {
        let col = alg.coordinates(&alg.mul(a, &Poly::monomial(k, k.one(), j)));
        for (i, c) in col.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// `Norm_{E/F}(a)`, the determinant of multiplication by `a`.
pub fn norm(alg: &EtaleAlgebra, a: &Poly) -> FieldElement {
    multiplication_matrix(alg, a).det().expect("square matrix")
}

fn det_over(alg: &EtaleAlgebra, x: &[Vec<Poly>]) -> Poly {
    let n = x.len();
    if n == 0 {
        return Poly::one(&alg.field);
    }
    if n == 1 {
        return alg.reduce(&x[0][0]);
    }
    let mut acc = Poly::zero(&alg.field);
    for j in 0..n {
        let minor: Vec<Vec<Poly>> = x[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = alg.mul(&x[0][j], &det_over(alg, &minor));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    alg.reduce(&acc)
}

/// The `nm × nm` matrix over F of `x ∈ GL_n(E)` acting on `E^n ≅ F^(nm)`:
/// block `(i, j)` is multiplication by `x[i][j]`. Its determinant is
/// `Norm_{E/F}(det x)`.
pub fn restriction_matrix(alg: &EtaleAlgebra, x: &[Vec<Poly>]) -> Result<FMatrix> {
    let n = x.len();
    if x.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(
            "restriction needs a square matrix".into(),
        ));
    }
    let k = &alg.field;
    if k.is_zero(&norm(alg, &det_over(alg, x))) {
        return Err(Error::NotInvertible(
            "matrix is not invertible over the algebra".into(),
        ));
    }
    let m = alg.dimension();
    let mut out = FMatrix::zeros(k, n * m, n * m);
    for (bi, row) in x.iter().enumerate() {
        for (bj, entry) in row.iter().enumerate() {
            let block = multiplication_matrix(alg, entry);
            for i in 0..m {
                for j in 0..m {
                    out.set(bi * m + i, bj * m + j, block.get(i, j).clone());
                }
            }
        }
    }
    Ok(out)
}
