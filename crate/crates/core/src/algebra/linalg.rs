//! Dense matrices over a [`FieldDescriptor`].

use super::field::{FieldDescriptor, FieldElement};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FMatrix {
    pub fn zeros(field: &FieldDescriptor, rows: usize, cols: usize) -> Self {
        FMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &FieldDescriptor, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix".into()));
        }
        Ok(FMatrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::InvalidArgument("incompatible matrices".into()));
        }
        let k = &self.field;
        let mut out = Self::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = k.add(out.get(i, j), &k.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FMatrix) -> FMatrix {
        let k = &self.field;
        FMatrix {
            field: k.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| k.sub(a, b))
                .collect(),
        }
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let k = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !k.is_zero(self.get(i, c))) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = k.inv(self.get(r, c)).unwrap();
            for j in 0..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || k.is_zero(self.get(i, c)) {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let v = k.sub(self.get(i, j), &k.mul(&f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// A basis of `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let k = &self.field;
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![k.zero(); self.cols];
                v[f] = k.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(m.get(r, f));
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(
                "determinant of a non-square matrix".into(),
            ));
        }
        let rows = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        Ok(super::poly::bareiss_det(&self.field, rows))
    }
}
