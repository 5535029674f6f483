use conegap::cpn::*;
use conegap::numerics::{Complex, ComplexVector};
use conegap::sampling::{random_boundary, random_interior, random_real_positive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn interior(n: usize, r: &mut ChaCha8Rng) -> ConePoint {
    ConePoint::new(random_interior(n, r)).unwrap()
}

/// Smallest singular value of `[x y]` for unit columns, bounded above by
/// `|x ^ y| = sigma_min sigma_max` with `sigma_max >= 1`.
fn smallest_singular(x: &ComplexVector, y: &ComplexVector) -> f64 {
    let (x, y) = (x.normalized().unwrap(), y.normalized().unwrap());
    let n = x.len();
    let mut wedge = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            wedge += (x[k] * y[l] - x[l] * y[k]).norm_sqr();
        }
    }
    let g = x.hermitian(&y).unwrap().norm();
    wedge.sqrt() / (1.0 + g).sqrt()
}

/// Exact pairwise test of `z x - y` away from ties.
fn decided_outside_interior(x: &ComplexVector, y: &ComplexVector, z: Complex) -> Option<bool> {
    let w = x.affine(z, y).unwrap();
    let mut min = f64::INFINITY;
    let mut scale = 0.0f64;
    for a in w.iter() {
        for b in w.iter() {
            min = min.min((a * b.conj()).re);
            scale = scale.max(a.norm() * b.norm());
        }
    }
    if min.abs() < 1e-6 * scale.max(1e-300) {
        return None;
    }
    Some(min <= 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projective_invariance(seed in any::<u64>(), n in 2usize..7,
                             l in (0.1..5.0f64, -3.0..3.0f64), m in (0.1..5.0f64, -3.0..3.0f64)) {
        let mut r = rng(seed);
        let (x, y) = (random_interior(n, &mut r), random_interior(n, &mut r));
        let d = delta_vectors(&x, &y).unwrap().value();
        let scaled = delta_vectors(&x.scale(Complex::from_polar(l.0, l.1)), &y.scale(Complex::from_polar(m.0, m.1))).unwrap();
        prop_assert!((scaled.value() - d).abs() <= 1e-12 * d.max(1.0));
    }

    #[test]
    fn symmetric(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let (x, y) = (interior(n, &mut r), interior(n, &mut r));
        let a = delta(&x, &y).unwrap().value();
        let b = delta(&y, &x).unwrap().value();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let (x, y, z) = (interior(n, &mut r), interior(n, &mut r), interior(n, &mut r));
        let xz = delta(&x, &z).unwrap().value();
        let xy = delta(&x, &y).unwrap().value();
        let yz = delta(&y, &z).unwrap().value();
        prop_assert!(xz <= xy + yz + 1e-9);
    }

    #[test]
    fn extends_hilbert_metric(seed in any::<u64>(), n in 2usize..9) {
        let mut r = rng(seed);
        let (x, y) = (random_real_positive(n, &mut r), random_real_positive(n, &mut r));
        let d = delta_vectors(&ComplexVector::from_real(&x).unwrap(), &ComplexVector::from_real(&y).unwrap()).unwrap();
        prop_assert!((d.value() - hilbert_rplus(&x, &y).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn region_is_where_affine_combination_leaves_interior(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let (x, y) = (interior(n, &mut r), interior(n, &mut r));
        let region = e_region(&x, &y).unwrap();
        let (a, b) = conegap::geometry::region_mod_bounds(&region);
        let reach = 1.5 * b.value() + 1.0;
        for i in 0..25 {
            for j in 0..25 {
                let z = Complex::new(reach * (i as f64 / 12.0 - 1.0), reach * (j as f64 / 12.0 - 1.0));
                let Some(out) = decided_outside_interior(x.vector(), y.vector(), z) else { continue };
                prop_assert_eq!(region.contains(z), out, "z = {}, a = {}", z, a);
            }
        }
    }

    #[test]
    fn zero_distance_means_colinear(seed in any::<u64>(), n in 2usize..6, eps in prop_oneof![Just(0.0), 1e-14..1e-6f64]) {
        let mut r = rng(seed);
        let x = random_interior(n, &mut r);
        let noise = random_interior(n, &mut r);
        let mut y = x.scale(Complex::new(0.3, 1.7));
        for k in 0..n {
            y[k] += noise[k] * eps;
        }
        let Ok(d) = delta_vectors(&x, &y) else { return Ok(()) };
        if d.value() == 0.0 {
            prop_assert!(smallest_singular(&x, &y) <= 1e-8);
        }
    }

    #[test]
    fn aperture_bound_holds_on_cone(seed in any::<u64>(), n in 1usize..8, boundary in any::<bool>()) {
        let mut r = rng(seed);
        let u = if boundary && n >= 2 { random_boundary(n, &mut r) } else { random_interior(n, &mut r) };
        let w = aperture_witness(n).unwrap();
        let lhs = w.functional.norm() * u.norm();
        let rhs = w.k * w.functional.pairing(&u).unwrap().norm();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn alignment_residual_within_bound(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let x = ConePoint::new(random_interior(n, &mut r).normalized().unwrap()).unwrap();
        let y = ConePoint::new(random_interior(n, &mut r).normalized().unwrap()).unwrap();
        let a = align(&x, &y).unwrap();
        prop_assert!((a.phase.norm() - 1.0).abs() < 1e-12);
        prop_assert!(a.residual <= a.bound + 1e-12);
    }

    #[test]
    fn boundary_independent_pairs_are_far(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let x = ConePoint::new(random_boundary(n, &mut r)).unwrap();
        let y = ConePoint::new(random_interior(n, &mut r)).unwrap();
        prop_assert!(!delta(&x, &y).unwrap().is_finite());
    }
}
