//! Cones cut out by a finite family of functionals,
//! `C = {x : Re(<m, x> conj(<l, x>)) >= 0 for all m, l in S}`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::cpn::COLINEAR_TOL;
use crate::error::{Error, Result};
use crate::geometry::{
    log_ratio, moebius_image_rhp, region_mod_bounds, Disk, MetricValue, MoebiusMap, Part, Region,
};
use crate::numerics::{Complex, ComplexVector};

/// Relative tolerance for membership sign tests.
pub const SPEC_TOL: f64 = 1e-12;

/// A finite, nonempty family of nonzero functionals of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSpec {
    functionals: Vec<ComplexVector>,
}

impl ConeSpec {
    pub fn new(functionals: Vec<ComplexVector>) -> Result<Self> {
        let Some(first) = functionals.first() else {
            return Err(Error::EmptySpec);
        };
        let n = first.len();
        for (i, m) in functionals.iter().enumerate() {
            if m.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.len(),
                });
            }
            if m.is_zero() {
                return Err(Error::ZeroFunctional(i));
            }
        }
        Ok(ConeSpec { functionals })
    }

    /// The coordinate functionals `e_1, ..., e_n`; the resulting cone is `C+^n`.
    pub fn coordinate(n: usize) -> Result<Self> {
        Self::new((0..n).map(|k| ComplexVector::basis(n, k)).collect())
    }

    pub fn functionals(&self) -> &[ComplexVector] {
        &self.functionals
    }

    pub fn dim(&self) -> usize {
        self.functionals[0].len()
    }

    /// Cheap necessary condition for properness: two functionals that are
    /// not multiples of each other.
    pub fn has_two_independent(&self) -> bool {
        let f = &self.functionals;
        (0..f.len()).any(|i| {
            ((i + 1)..f.len()).any(|j| !f[i].is_colinear_with(&f[j], COLINEAR_TOL).unwrap_or(true))
        })
    }

    fn values(&self, x: &ComplexVector) -> Result<Vec<Complex>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        self.functionals.iter().map(|m| m.pairing(x)).collect()
    }
}

impl<'de> Deserialize<'de> for ConeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            functionals: Vec<ComplexVector>,
        }
        let raw = Raw::deserialize(d)?;
        ConeSpec::new(raw.functionals).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Inside,
    Outside,
}

fn nonzero(x: &ComplexVector) -> Result<()> {
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Membership in the cone defined by `spec`.
pub fn member(spec: &ConeSpec, x: &ComplexVector) -> Result<Side> {
    nonzero(x)?;
    let v = spec.values(x)?;
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            if (a * b.conj()).re < -SPEC_TOL * a.norm() * b.norm() {
                return Ok(Side::Outside);
            }
        }
    }
    Ok(Side::Inside)
}

/// Membership in `R = {x : <m, x>` in the closed first quadrant for all `m}`.
pub fn member_r(spec: &ConeSpec, x: &ComplexVector) -> Result<Side> {
    nonzero(x)?;
    let scale = x.norm();
    let ok = spec.functionals.iter().zip(spec.values(x)?).all(|(m, v)| {
        let tol = SPEC_TOL * m.norm() * scale;
        v.re >= -tol && v.im >= -tol
    });
    Ok(if ok { Side::Inside } else { Side::Outside })
}

/// `E(x, y)` as the union of the images of the right half-plane under
/// `w -> (w <m,y> + <l,y>) / (w <m,x> + <l,x>)` over pairs `m < l` with
/// nonzero determinant, followed by the points `<m,y> / <m,x>`.
pub fn e_region_general(spec: &ConeSpec, x: &ComplexVector, y: &ComplexVector) -> Result<Region> {
    let vx = spec.values(x)?;
    let vy = spec.values(y)?;
    if vx.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::DegenerateInput);
    }
    let s = vx.len();
    let mut parts = Vec::new();
    for i in 0..s {
        for j in (i + 1)..s {
            let det = vy[i] * vx[j] - vy[j] * vx[i];
            let scale = vy[i].norm() * vx[j].norm() + vy[j].norm() * vx[i].norm();
            if det.norm() <= COLINEAR_TOL * scale {
                continue;
            }
            let phi = MoebiusMap {
                a: vy[i],
                b: vy[j],
                c: vx[i],
                d: vx[j],
            };
            parts.push(moebius_image_rhp(&phi)?);
        }
    }
    parts.extend(
        (0..s)
            .filter(|&i| vx[i].norm() > 0.0)
            .map(|i| Part::Disk(Disk::point(vy[i] / vx[i]))),
    );
    Ok(Region::new(parts))
}

/// `log(b / a)` over the general E-region; 0 on colinear pairs.
pub fn delta_general(spec: &ConeSpec, x: &ComplexVector, y: &ComplexVector) -> Result<MetricValue> {
    for v in [x, y] {
        if member(spec, v)? == Side::Outside {
            return Err(Error::NotInCone);
        }
    }
    if x.is_colinear_with(y, COLINEAR_TOL)? {
        return Ok(MetricValue::ZERO);
    }
    let (a, b) = region_mod_bounds(&e_region_general(spec, x, y)?);
    Ok(log_ratio(a, b))
}

/// Canonical complexification of the real cone whose dual is generated by
/// `dual_generators`.
pub fn complexify_birkhoff(dual_generators: &[Vec<f64>]) -> Result<ConeSpec> {
    let functionals = dual_generators
        .iter()
        .map(|g| ComplexVector::from_real(g))
        .collect::<Result<Vec<_>>>()?;
    let spec = ConeSpec::new(functionals)?;
    if !spec.has_two_independent() {
        warn!("cone specification has no two independent functionals; the cone is not proper");
    }
    Ok(spec)
}
