use std::f64::consts::PI;

use conegap::cpn::{delta_vectors, e_region, ConePoint};
use conegap::general::*;
use conegap::geometry::region_mod_bounds;
use conegap::numerics::{Complex, ComplexVector};
use conegap::sampling::{random_boundary, random_interior};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn orthant(n: usize) -> ConeSpec {
    let gens: Vec<Vec<f64>> = (0..n)
        .map(|k| (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
        .collect();
    complexify_birkhoff(&gens).unwrap()
}

/// Four dual rays around `(1, 0, 0)`: a polyhedral cone about the first axis.
fn pyramid(spread: f64) -> ConeSpec {
    let gens: Vec<Vec<f64>> = (0..4)
        .map(|j| {
            let t = PI / 2.0 * j as f64;
            vec![1.0, spread * t.cos(), spread * t.sin()]
        })
        .collect();
    complexify_birkhoff(&gens).unwrap()
}

/// A random member of `spec` near the axis `(1, 0, 0)`, up to a phase.
fn pyramid_member(spec: &ConeSpec, r: &mut ChaCha8Rng) -> ComplexVector {
    loop {
        let phase = Complex::from_polar(1.0, r.gen_range(-PI..PI));
        let v: Vec<Complex> = [1.0, 0.0, 0.0]
            .iter()
            .map(|&b| (Complex::new(b + r.gen_range(-0.4..0.4), r.gen_range(-0.3..0.3))) * phase)
            .collect();
        let v = ComplexVector::new(v).unwrap();
        if member(spec, &v).unwrap() == Side::Inside {
            return v;
        }
    }
}

/// Direct evaluation of the defining inequalities.
fn direct_member(spec: &ConeSpec, x: &ComplexVector) -> Option<bool> {
    let vals: Vec<Complex> = spec
        .functionals()
        .iter()
        .map(|m| m.pairing(x).unwrap())
        .collect();
    let mut min = f64::INFINITY;
    let mut scale = 0.0f64;
    for a in &vals {
        for b in &vals {
            min = min.min((a * b.conj()).re);
            scale = scale.max(a.norm() * b.norm());
        }
    }
    if min.abs() < 1e-6 * scale {
        return None;
    }
    Some(min > 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn orthant_spec_matches_cpn(seed in any::<u64>(), n in 2usize..6, boundary in any::<bool>()) {
        let mut r = rng(seed);
        let x = random_interior(n, &mut r);
        let y = if boundary { random_boundary(n, &mut r) } else { random_interior(n, &mut r) };
        let spec = orthant(n);
        let g = delta_general(&spec, &x, &y).unwrap();
        let c = delta_vectors(&x, &y).unwrap();
        prop_assert_eq!(g.is_finite(), c.is_finite());
        if g.is_finite() {
            prop_assert!((g.value() - c.value()).abs() <= 1e-10);
        }
        let rg = e_region_general(&spec, &x, &y).unwrap().disks().unwrap();
        let rc = e_region(&ConePoint::new(x.clone()).unwrap(), &ConePoint::new(y.clone()).unwrap()).unwrap();
        let (a1, b1) = region_mod_bounds(&conegap::geometry::Region::from_disks(rg));
        let (a2, b2) = region_mod_bounds(&rc);
        prop_assert!((a1 - a2).abs() <= 1e-10 * b2.value() && (b1.value() - b2.value()).abs() <= 1e-10 * b2.value());
    }

    #[test]
    fn orthant_membership_matches_classify(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let x = random_interior(n, &mut r);
        let z = random_interior(n, &mut r);
        let v = x.affine(Complex::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)), &z).unwrap();
        let inside = member(&orthant(n), &v).unwrap() == Side::Inside;
        let class = conegap::cpn::classify(&v).unwrap();
        prop_assert_eq!(inside, class != conegap::cpn::Membership::Outside);
    }

    #[test]
    fn region_is_where_affine_combination_leaves_interior(seed in any::<u64>(), spread in 0.2..0.9f64) {
        let mut r = rng(seed);
        let spec = pyramid(spread);
        let (x, y) = (pyramid_member(&spec, &mut r), pyramid_member(&spec, &mut r));
        let region = e_region_general(&spec, &x, &y).unwrap();
        for i in 0..21 {
            for j in 0..21 {
                let z = Complex::new(0.4 * (i as f64 - 10.0), 0.4 * (j as f64 - 10.0));
                let w = x.affine(z, &y).unwrap();
                let Some(interior) = direct_member(&spec, &w) else { continue };
                prop_assert_eq!(region.contains(z), !interior, "z = {}", z);
            }
        }
    }

    #[test]
    fn redundant_or_rescaled_generators_agree(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let (x, y) = (random_interior(n, &mut r), random_interior(n, &mut r));
        let mut gens: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|j| if j == k { r.gen_range(0.2..5.0) } else { 0.0 }).collect())
            .collect();
        gens.push((0..n).map(|_| r.gen_range(0.0..1.0)).collect());
        let spec = complexify_birkhoff(&gens).unwrap();
        let g = delta_general(&spec, &x, &y).unwrap().value();
        let c = delta_vectors(&x, &y).unwrap().value();
        prop_assert!((g - c).abs() <= 1e-10 * c.max(1.0), "{} vs {}", g, c);
    }

    #[test]
    fn triangle_inequality_for_orthant_specs(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let spec = orthant(n);
        let (x, y, z) = (random_interior(n, &mut r), random_interior(n, &mut r), random_interior(n, &mut r));
        let d = |a: &ComplexVector, b: &ComplexVector| delta_general(&spec, a, b).unwrap().value();
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-9);
    }

    #[test]
    fn convex_hull_of_centers_lies_in_closure(seed in any::<u64>(), spread in 0.2..0.9f64) {
        let mut r = rng(seed);
        let spec = pyramid(spread);
        let (x, y) = (pyramid_member(&spec, &mut r), pyramid_member(&spec, &mut r));
        let region = e_region_general(&spec, &x, &y).unwrap();
        let Some(disks) = region.disks() else { return Ok(()) };
        let (a, b) = region_mod_bounds(&region);
        prop_assume!(a > 0.0 && b.is_finite());
        let scale = b.value();
        for _ in 0..50 {
            let weights: Vec<f64> = disks.iter().map(|_| r.gen_range(0.0..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let z: Complex = disks.iter().zip(&weights).map(|(d, w)| d.center * (w / total)).sum();
            let gap = disks.iter().map(|d| (z - d.center).norm() - d.radius).fold(f64::INFINITY, f64::min);
            prop_assert!(gap <= 1e-9 * scale, "gap {}", gap);
        }
    }

    #[test]
    fn pyramid_membership_matches_direct_evaluation(seed in any::<u64>(), spread in 0.2..0.9f64) {
        let mut r = rng(seed);
        let spec = pyramid(spread);
        prop_assert_eq!(spec.functionals().len(), 4);
        let v = ComplexVector::new((0..3).map(|_| Complex::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect()).unwrap();
        if let Some(inside) = direct_member(&spec, &v) {
            prop_assert_eq!(member(&spec, &v).unwrap() == Side::Inside, inside);
        }
    }
}
