use std::ops::{Index, IndexMut};

use num_complex::Complex64 as Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Wire form of a complex scalar: `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRepr {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for ComplexRepr {
    fn from(z: Complex) -> Self {
        ComplexRepr { re: z.re, im: z.im }
    }
}

impl From<ComplexRepr> for Complex {
    fn from(z: ComplexRepr) -> Self {
        Complex::new(z.re, z.im)
    }
}

/// `#[serde(with = "complex_serde")]` for a bare `Complex` field.
pub mod complex_serde {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRepr::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex, D::Error> {
        ComplexRepr::deserialize(d).map(Complex::from)
    }
}

/// A nonempty vector of finite complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(ComplexVector(entries))
    }

    /// Builds a vector from real coordinates.
    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_pairs(entries: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            entries
                .iter()
                .map(|&(re, im)| Complex::new(re, im))
                .collect(),
        )
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![Complex::new(0.0, 0.0); n];
        v[k] = Complex::new(1.0, 0.0);
        ComplexVector(v)
    }

    pub fn ones(n: usize) -> Self {
        ComplexVector(vec![Complex::new(1.0, 0.0); n.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(self.scale(Complex::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, s: Complex) -> Self {
        ComplexVector(self.0.iter().map(|z| z * s).collect())
    }

    /// Bilinear pairing `sum_k a_k b_k` (no conjugation).
    pub fn pairing(&self, other: &Self) -> Result<Complex> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// Hermitian product `sum_k conj(a_k) b_k`.
    pub fn hermitian(&self, other: &Self) -> Result<Complex> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum())
    }

    /// `z * self - other`, the vector whose cone membership defines `E(x, y)`.
    pub fn affine(&self, z: Complex, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(ComplexVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| z * x - y)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.affine(Complex::new(1.0, 0.0), other)
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// True when the two vectors span a complex line, up to a relative
    /// tolerance on the 2x2 minors.
    pub fn is_colinear_with(&self, other: &Self, rel_tol: f64) -> Result<bool> {
        self.check_len(other)?;
        let scale = self.norm() * other.norm();
        if scale == 0.0 {
            return Ok(true);
        }
        let n = self.len();
        for k in 0..n {
            for l in (k + 1)..n {
                let minor = self.0[k] * other.0[l] - self.0[l] * other.0[k];
                if minor.norm() > rel_tol * scale {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex {
        &mut self.0[i]
    }
}

impl<'a> IntoIterator for &'a ComplexVector {
    type Item = &'a Complex;
    type IntoIter = std::slice::Iter<'a, Complex>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|&z| ComplexRepr::from(z)))
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<ComplexRepr>::deserialize(d)?;
        ComplexVector::new(raw.into_iter().map(Complex::from).collect())
            .map_err(serde::de::Error::custom)
    }
}
