//! Seeded random inputs: cone vectors, condition-passing matrices, and a
//! Monte-Carlo estimate of the image diameter.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use crate::contraction::{check_condition, diameter_witnesses};
use crate::cpn::delta_vectors;
use crate::error::Result;
use crate::numerics::{mat_apply, Complex, ComplexMatrix, ComplexVector};

/// A vector of the open cone: moduli in `[0.1, 2]`, arguments within an
/// arc of random width below `pi / 2` around a random phase.
pub fn random_interior<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let phase = rng.gen_range(-PI..PI);
    let width = rng.gen_range(0.0..0.98 * FRAC_PI_2);
    let v = (0..n)
        .map(|_| {
            let t = phase + rng.gen_range(-0.5..0.5) * width;
            Complex::from_polar(rng.gen_range(0.1..2.0), t)
        })
        .collect();
    ComplexVector::new(v).expect("n >= 1")
}

/// A nonzero vector on the boundary of the cone: either one coordinate
/// vanishes, or two coordinates are exactly a quarter turn apart.
pub fn random_boundary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    assert!(n >= 2, "the cone boundary needs n >= 2");
    let mut v = random_interior(n, rng).into_inner();
    let k = rng.gen_range(0..n);
    if rng.gen_bool(0.5) {
        v[k] = Complex::new(0.0, 0.0);
    } else {
        let phase = rng.gen_range(-PI..PI);
        let base = Complex::from_polar(1.0, phase);
        let quarter = base * Complex::new(0.0, 1.0);
        for z in v.iter_mut() {
            *z = Complex::from_polar(
                rng.gen_range(0.1..2.0),
                phase + rng.gen_range(0.0..FRAC_PI_2),
            );
        }
        v[k] = quarter * rng.gen_range(0.1..2.0);
        v[(k + 1) % n] = base * rng.gen_range(0.1..2.0);
    }
    ComplexVector::new(v).expect("finite")
}

/// Interior or boundary with equal probability.
pub fn random_member<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    if n >= 2 && rng.gen_bool(0.5) {
        random_boundary(n, rng)
    } else {
        random_interior(n, rng)
    }
}

/// Coordinates in `[0.1, 10]`.
pub fn random_real_positive<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.1..10.0)).collect()
}

/// Entries `u + eta w` with `u` uniform in `[1, 2]` and `|w| <= 1`; `eta`
/// starts at `eta0` and is halved until the cone condition holds.
pub fn random_condition_matrix<R: Rng + ?Sized>(n: usize, eta0: f64, rng: &mut R) -> ComplexMatrix {
    let base: Vec<f64> = (0..n * n).map(|_| rng.gen_range(1.0..2.0)).collect();
    let noise: Vec<Complex> = (0..n * n)
        .map(|_| Complex::from_polar(rng.gen_range(0.0..1.0f64).sqrt(), rng.gen_range(-PI..PI)))
        .collect();
    let mut eta = eta0;
    loop {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Complex::new(base[i * n + j], 0.0) + noise[i * n + j] * eta)
                    .collect()
            })
            .collect();
        let a = ComplexMatrix::from_rows(rows).expect("square and finite");
        if check_condition(&a).holds {
            return a;
        }
        eta *= 0.5;
    }
}

/// Largest `delta(A x, A y)` over basis pairs, the row-distance witnesses
/// and `pairs` random member pairs. A lower estimate of the image diameter.
pub fn sampled_diameter<R: Rng + ?Sized>(
    a: &ComplexMatrix,
    pairs: usize,
    rng: &mut R,
) -> Result<f64> {
    let n = a.dim();
    let mut best = 0.0f64;
    let mut probe = |x: &ComplexVector, y: &ComplexVector| -> Result<()> {
        let d = delta_vectors(&mat_apply(a, x)?, &mat_apply(a, y)?)?;
        best = best.max(d.value());
        Ok(())
    };
    for p in 0..n {
        for q in (p + 1)..n {
            probe(&ComplexVector::basis(n, p), &ComplexVector::basis(n, q))?;
        }
    }
    for (x, y) in diameter_witnesses(a)? {
        probe(&x, &y)?;
    }
    for _ in 0..pairs {
        let x = random_member(n, rng);
        let y = random_member(n, rng);
        probe(&x, &y)?;
    }
    Ok(best)
}
