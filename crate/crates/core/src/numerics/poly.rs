//! Monic complex polynomials and a simultaneous (Aberth–Ehrlich) root finder.

use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 2000;

/// Rotation applied to the initial circle so that no starting point sits on
/// a symmetry axis of the polynomial.
const INITIAL_PHASE: f64 = 0.4;

/// A monic polynomial `c_0 + c_1 x + ... + x^n` with `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    /// Normalizes by the leading coefficient, given in ascending order.
    pub fn new(mut coeffs: Vec<Complex>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidPolynomial);
        }
        if coeffs
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let lead = *coeffs.last().unwrap();
        for c in coeffs.iter_mut() {
            *c /= lead;
        }
        Ok(Polynomial { coeffs })
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex]) -> Result<Self> {
        let mut coeffs = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients in ascending order of power; the last one is 1.
    pub fn coefficients(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and derivative by Horner's scheme.
    fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut p = Complex::new(0.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |z|^k`, the magnitude against which a residual is judged.
    pub fn magnitude_at(&self, z: Complex) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// All roots of `p`, by Aberth iteration started from equispaced points on
/// the circle of radius `1 + max |c_i|`.
///
/// Every returned root satisfies `|p(root)| <= tol * sum |c_k| |root|^k`;
/// otherwise `RootsDidNotConverge` is returned.
pub fn polynomial_roots(p: &Polynomial, tol: f64) -> Result<Vec<Complex>> {
    let n = p.degree();
    let c = p.coefficients();
    if n == 1 {
        return Ok(vec![-c[0]]);
    }

    let radius = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + INITIAL_PHASE;
            Complex::from_polar(radius, angle)
        })
        .collect();
    let mut settled = vec![false; n];

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && settled.iter().any(|s| !s) {
        iterations += 1;
        for i in 0..n {
            if settled[i] {
                continue;
            }
            let z = roots[i];
            let (pz, dpz) = p.eval_with_derivative(z);
            // Residual at the rounding floor: nothing left to gain.
            if pz.norm() <= 4.0 * f64::EPSILON * p.magnitude_at(z) {
                settled[i] = true;
                continue;
            }
            let newton = pz / dpz;
            let repulsion: Complex = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex::new(1.0, 0.0) / (z - roots[j]))
                .sum();
            let step = newton / (Complex::new(1.0, 0.0) - newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            roots[i] = z - step;
            if step.norm() <= 4.0 * f64::EPSILON * roots[i].norm().max(1.0) {
                settled[i] = true;
            }
        }
    }

    let ok = roots
        .iter()
        .all(|&z| p.eval(z).norm() <= tol * p.magnitude_at(z).max(p.max_coefficient()));
    if !ok {
        return Err(Error::RootsDidNotConverge { iterations });
    }
    Ok(roots)
}
