//! Brute-force eigenvalue oracle for small matrices.
//!
//! This is a verification tool only: certification never calls into it.

use std::cmp::Ordering;

use num_complex::Complex64 as Complex;

use super::matrix::ComplexMatrix;
use super::poly::{polynomial_roots, Polynomial};
use crate::error::{Error, Result};

/// Largest dimension the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 12;

const ROOT_TOL: f64 = 1e-9;

/// `det(lambda I - A)` by the Faddeev–LeVerrier recurrence
/// `M_k = A M_{k-1} + c_{n-k+1} I`, `c_{n-k} = -tr(A M_k) / k`.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Result<Polynomial> {
    let n = a.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex::new(1.0, 0.0);
    let mut m = ComplexMatrix::diagonal(&vec![Complex::new(0.0, 0.0); n]);
    for k in 1..=n {
        m = a.mul(&m)?.shift(coeffs[n - k + 1]);
        let am = a.mul(&m)?;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    Polynomial::new(coeffs)
}

/// Eigenvalues sorted by modulus, descending; ties broken by real part then
/// imaginary part, both descending. Triangular matrices return their
/// diagonal verbatim.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex>> {
    let n = a.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    let mut values = if a.is_upper_triangular() || a.is_lower_triangular() {
        (0..n).map(|i| a.get(i, i)).collect()
    } else {
        polynomial_roots(&characteristic_polynomial(a)?, ROOT_TOL)?
    };
    values.sort_by(spectral_order);
    Ok(values)
}

/// `|lambda_2| / |lambda_1|`, or 0 when there is no second eigenvalue.
pub fn modulus_ratio(a: &ComplexMatrix) -> Result<f64> {
    let ev = eigenvalues(a)?;
    if ev.len() < 2 || ev[0].norm() == 0.0 {
        return Ok(0.0);
    }
    Ok(ev[1].norm() / ev[0].norm())
}

fn spectral_order(a: &Complex, b: &Complex) -> Ordering {
    b.norm()
        .total_cmp(&a.norm())
        .then(b.re.total_cmp(&a.re))
        .then(b.im.total_cmp(&a.im))
}
