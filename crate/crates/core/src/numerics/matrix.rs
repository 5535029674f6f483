use num_complex::Complex64 as Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::vector::{ComplexRepr, ComplexVector};
use crate::error::{Error, Result};

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a matrix from rows; every row must have as many entries as
    /// there are rows.
    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            data.extend(row);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Complex::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[Complex]) -> Self {
        let n = diag.len();
        let mut data = vec![Complex::new(0.0, 0.0); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        ComplexMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> ComplexVector {
        ComplexVector::new(self.data[i * self.n..(i + 1) * self.n].to_vec())
            .expect("rows are nonempty and finite")
    }

    pub fn rows(&self) -> impl Iterator<Item = ComplexVector> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }

    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut data = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(ComplexMatrix { n, data })
    }

    pub fn scale(&self, s: Complex) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift(&self, s: Complex) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += s;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![Complex::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        ComplexMatrix { n, data }
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == Complex::new(0.0, 0.0)))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.transpose().is_upper_triangular()
    }

    fn to_rows(&self) -> Vec<Vec<ComplexRepr>> {
        self.data
            .chunks(self.n)
            .map(|r| r.iter().map(|&z| z.into()).collect())
            .collect()
    }
}

/// Matrix-vector product `(Ax)_k = sum_j a_kj x_j`.
pub fn mat_apply(a: &ComplexMatrix, x: &ComplexVector) -> Result<ComplexVector> {
    if a.dim() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x.len(),
        });
    }
    let n = a.dim();
    let out = (0..n)
        .map(|k| (0..n).map(|j| a.get(k, j) * x[j]).sum())
        .collect();
    ComplexVector::new(out)
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<ComplexRepr>>::deserialize(d)?;
        ComplexMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Complex::from).collect())
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn apply_identity() {
        let x = ComplexVector::from_real(&[1.0, 2.0]).unwrap();
        let y = mat_apply(&ComplexMatrix::identity(2), &x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn apply_extracts_column() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let y = mat_apply(&a, &ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(y, ComplexVector::from_real(&[2.0, 1.0]).unwrap());
    }

    #[test]
    fn apply_imaginary_swap() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let y = mat_apply(&a, &ComplexVector::ones(2)).unwrap();
        assert_eq!(y.as_slice(), &[c(0.0, 1.0), c(0.0, 1.0)]);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let a = ComplexMatrix::identity(3);
        let x = ComplexVector::ones(2);
        assert_eq!(
            mat_apply(&a, &x),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = ComplexMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0)]]);
        assert_eq!(
            err,
            Err(Error::NotSquare {
                rows: 2,
                row: 1,
                cols: 1
            })
        );
    }
}
