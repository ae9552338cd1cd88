//! Exact arithmetic: rationals, prime and extension fields, univariate
//! polynomials, integer matrices.

pub mod field;
pub mod linalg;
pub mod matrix;
pub mod poly;

pub use field::{FieldDescriptor, FieldElement};
pub use linalg::FMatrix;
pub use matrix::{smith_normal_form, IntMatrix};
pub use poly::{
    find_irreducible, find_irreducible_over, is_irreducible, poly_compose, poly_resultant, Poly,
};

/// `x^(q^k)` for `x` in a finite field, `q = p^sub_degree`.
pub fn frobenius_power(
    field: &FieldDescriptor,
    x: &FieldElement,
    k: i64,
    sub_degree: u32,
) -> crate::Result<FieldElement> {
    field.frobenius_power(x, k, sub_degree)
}
