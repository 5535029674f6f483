//! The cone `C+^n = {v : Re(v_k conj(v_l)) >= 0 for all k, l}`, its
//! E-regions as unions of disks, and the projective metric `delta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{log_ratio, region_mod_bounds, Disk, MetricValue, Region};
use crate::numerics::{complex_serde, Complex, ComplexVector};

/// Relative tolerance for the sign of `Re(v_k conj(v_l))`.
pub const CONE_TOL: f64 = 1e-12;

/// Relative tolerance on 2x2 minors below which two vectors are colinear.
pub const COLINEAR_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Interior, boundary or outside, by the exhaustive pairwise test.
pub fn classify(v: &ComplexVector) -> Result<Membership> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut class = Membership::Interior;
    for (k, &vk) in v.iter().enumerate() {
        for &vl in v.iter().skip(k) {
            let s = (vk * vl.conj()).re;
            let tol = CONE_TOL * vk.norm() * vl.norm();
            if s < -tol {
                return Ok(Membership::Outside);
            }
            if s <= tol {
                class = Membership::Boundary;
            }
        }
    }
    Ok(class)
}

/// A nonzero vector together with its membership class.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    v: ComplexVector,
    class: Membership,
}

impl ConePoint {
    pub fn new(v: ComplexVector) -> Result<Self> {
        let class = classify(&v)?;
        Ok(ConePoint { v, class })
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.v
    }

    pub fn class(&self) -> Membership {
        self.class
    }

    pub fn is_interior(&self) -> bool {
        self.class == Membership::Interior
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }
}

fn check_dims(x: &ConePoint, y: &ConePoint) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// `E(x, y) = {z : z x - y not in the cone}` as a union of closed disks:
/// one per pair `k < l`, then the points `y_k / x_k`.
pub fn e_region(x: &ConePoint, y: &ConePoint) -> Result<Region> {
    check_dims(x, y)?;
    if !x.is_interior() {
        return Err(Error::NotInterior);
    }
    let (xs, ys) = (x.vector().as_slice(), y.vector().as_slice());
    let n = xs.len();
    let mut disks = Vec::with_capacity(n * (n + 1) / 2);
    for k in 0..n {
        for l in (k + 1)..n {
            let den = 2.0 * (xs[k] * xs[l].conj()).re;
            let center = (xs[l].conj() * ys[k] + xs[k].conj() * ys[l]) / den;
            let radius = (xs[l] * ys[k] - xs[k] * ys[l]).norm() / den;
            disks.push(Disk { center, radius });
        }
    }
    disks.extend((0..n).map(|k| Disk::point(ys[k] / xs[k])));
    Ok(Region::from_disks(dedup(disks)))
}

fn dedup(disks: Vec<Disk>) -> Vec<Disk> {
    let mut out: Vec<Disk> = Vec::with_capacity(disks.len());
    for d in disks {
        let dup = out.iter().any(|e| {
            let scale = e.center.norm() + e.radius + d.center.norm() + d.radius;
            (e.center - d.center).norm() + (e.radius - d.radius).abs() <= 1e-12 * scale
        });
        if !dup {
            out.push(d);
        }
    }
    out
}

/// The projective metric `log(b / a)` with `a = inf |E|`, `b = sup |E|`.
///
/// Colinear pairs give 0. When only one point is interior the region is
/// built on that one; when neither is, an independent pair is at infinite
/// distance.
pub fn delta(x: &ConePoint, y: &ConePoint) -> Result<MetricValue> {
    check_dims(x, y)?;
    if x.class() == Membership::Outside || y.class() == Membership::Outside {
        return Err(Error::NotInCone);
    }
    if x.vector().is_colinear_with(y.vector(), COLINEAR_TOL)? {
        return Ok(MetricValue::ZERO);
    }
    let one_way = |p: &ConePoint, q: &ConePoint| -> Result<MetricValue> {
        let (a, b) = region_mod_bounds(&e_region(p, q)?);
        Ok(log_ratio(a, b))
    };
    match (x.is_interior(), y.is_interior()) {
        (true, true) => {
            let forward = one_way(x, y)?;
            let backward = one_way(y, x)?;
            debug_assert!(
                !forward.is_finite()
                    || !backward.is_finite()
                    || (forward.value() - backward.value()).abs()
                        <= 1e-9 * forward.value().max(1.0),
                "orientations disagree: {forward} vs {backward}"
            );
            Ok(forward.max(backward))
        }
        (true, false) => one_way(x, y),
        (false, true) => one_way(y, x),
        (false, false) => Ok(MetricValue::INFINITY),
    }
}

/// `delta` on raw vectors.
pub fn delta_vectors(x: &ComplexVector, y: &ComplexVector) -> Result<MetricValue> {
    delta(&ConePoint::new(x.clone())?, &ConePoint::new(y.clone())?)
}

/// Hilbert metric on the positive orthant: `log(max(y/x) / min(y/x))`.
pub fn hilbert_rplus(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    if x.iter().chain(y).any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidParameter(
            "coordinates must be positive".into(),
        ));
    }
    let (lo, hi) = x
        .iter()
        .zip(y)
        .map(|(a, b)| b / a)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        });
    Ok((hi / lo).ln())
}

/// A functional `m` with `|m| |u| <= k |<m, u>|` on the whole cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApertureWitness {
    pub k: f64,
    pub functional: ComplexVector,
}

/// `m = (1, ..., 1)` and `K = sqrt(n)`: on the cone, `|sum u_k|^2 >= |u|^2`.
pub fn aperture_witness(n: usize) -> Result<ApertureWitness> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    Ok(ApertureWitness {
        k: (n as f64).sqrt(),
        functional: ComplexVector::ones(n),
    })
}

/// Unit scalar `alpha` minimizing `|alpha y - x|`.
pub fn best_phase(x: &ComplexVector, y: &ComplexVector) -> Result<Complex> {
    let s = y.hermitian(x)?;
    if s.norm() == 0.0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    Ok(s / s.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    #[serde(with = "complex_serde")]
    pub phase: Complex,
    /// `|phase * y - x|`.
    pub residual: f64,
    /// `K delta(x, y)`.
    pub bound: f64,
}

/// Aligns unit vectors `x`, `y` by a unimodular scalar; the residual never
/// exceeds `sqrt(n) delta(x, y)`.
pub fn align(x: &ConePoint, y: &ConePoint) -> Result<Alignment> {
    check_dims(x, y)?;
    for p in [x, y] {
        if (p.vector().norm() - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnit);
        }
    }
    let d = delta(x, y)?;
    if !d.is_finite() {
        return Err(Error::InfiniteDistance);
    }
    let phase = best_phase(x.vector(), y.vector())?;
    let residual = y.vector().affine(phase, x.vector())?.norm();
    let k = aperture_witness(x.dim())?.k;
    Ok(Alignment {
        phase,
        residual,
        bound: k * d.value(),
    })
}
