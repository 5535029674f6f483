//! Two-sided bounds on the hyperbolic gauge `d` (distance from 0 to
//! infinity in the complement of the E-region), the chained gauge, and the
//! comparison with `delta`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::cpn::{classify, delta, e_region, ConePoint, Membership};
use crate::error::{Error, Result};
use crate::geometry::{poincare_complement_disk, sector_upper_bound, MetricValue, Region};
use crate::numerics::{Complex, ComplexVector};

/// Which estimate produced a side of a [`DcInterval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DcMethod {
    /// `delta / 2`.
    HalfDelta,
    /// Complement of a single disk of the region.
    SingleDisk,
    /// Fitting the region in a sector avoided by some `Omega_alpha`.
    Sector,
    /// `pi sqrt(2) exp(delta / 2)`.
    ExpBound,
}

/// Certified enclosure of `d`; no point estimate is ever produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcInterval {
    pub lower: MetricValue,
    pub upper: MetricValue,
    pub methods: Vec<DcMethod>,
}

impl DcInterval {
    fn infinite() -> Self {
        DcInterval {
            lower: MetricValue::INFINITY,
            upper: MetricValue::INFINITY,
            methods: Vec::new(),
        }
    }

    fn zero() -> Self {
        DcInterval {
            lower: MetricValue::ZERO,
            upper: MetricValue::ZERO,
            methods: Vec::new(),
        }
    }
}

/// `pi sqrt(2) exp(delta / 2)`.
pub fn exp_upper_bound(delta: f64) -> f64 {
    PI * SQRT_2 * (0.5 * delta).exp()
}

/// Bounds on `d` for a pair with E-region `region` and projective distance
/// `delta`.
///
/// Lower: `max(delta / 2, max over disks of the one-disk complement
/// distance)`. Upper: `min(pi sqrt(2) exp(delta / 2), sector bound)`. When
/// the region reduces to a single disk both sides equal its complement
/// distance.
pub fn dc_bounds(region: &Region, delta: MetricValue) -> DcInterval {
    if !delta.is_finite() {
        return DcInterval::infinite();
    }
    let delta = delta.value();
    let region = region.simplified();
    let disks = region.disks();

    if let Some([only]) = disks.as_deref() {
        if let Ok(v) = poincare_complement_disk(only) {
            let v = MetricValue::new(v);
            return DcInterval {
                lower: v,
                upper: v,
                methods: vec![DcMethod::SingleDisk],
            };
        }
    }

    let half = 0.5 * delta;
    let best_disk = disks
        .iter()
        .flatten()
        .filter_map(|d| poincare_complement_disk(d).ok())
        .fold(0.0f64, f64::max);
    let (lower, lower_tag) = if best_disk > half {
        (best_disk, DcMethod::SingleDisk)
    } else {
        (half, DcMethod::HalfDelta)
    };

    let exp = exp_upper_bound(delta);
    let sector = sector_upper_bound(&region);
    let (upper, upper_tag) = if sector.value() < exp {
        (sector.value(), DcMethod::Sector)
    } else {
        (exp, DcMethod::ExpBound)
    };
    DcInterval {
        lower: MetricValue::new(lower),
        upper: MetricValue::new(upper),
        methods: vec![lower_tag, upper_tag],
    }
}

/// [`dc_bounds`] for a pair of cone points.
pub fn dc_pair(x: &ConePoint, y: &ConePoint) -> Result<DcInterval> {
    let d = delta(x, y)?;
    if d == MetricValue::ZERO {
        return Ok(DcInterval::zero());
    }
    if !d.is_finite() {
        return Ok(DcInterval::infinite());
    }
    let region = if x.is_interior() {
        e_region(x, y)?
    } else {
        e_region(y, x)?
    };
    Ok(dc_bounds(&region, d))
}

/// Enclosure of the chained gauge between the endpoints of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtildeInterval {
    pub lower: MetricValue,
    pub upper: MetricValue,
}

/// Bounds on the chained gauge between the first and last point: the lower
/// side is `delta / 2`, the upper side the smaller of the direct pair and
/// the sum over the links of the supplied chain.
pub fn dtilde_bounds(chain: &[ConePoint]) -> Result<DtildeInterval> {
    if chain.len() < 2 {
        return Err(Error::InvalidParameter(
            "a chain needs at least two points".into(),
        ));
    }
    let (first, last) = (&chain[0], &chain[chain.len() - 1]);
    let mut links = MetricValue::ZERO;
    for w in chain.windows(2) {
        let dc = dc_pair(&w[0], &w[1])?;
        if !dc.upper.is_finite() {
            return Err(Error::InfiniteDistance);
        }
        links = MetricValue::new(links.value() + dc.upper.value());
    }
    let direct = dc_pair(first, last)?;
    let d = delta(first, last)?;
    Ok(DtildeInterval {
        lower: MetricValue::new(0.5 * d.value()),
        upper: direct.upper.min(links),
    })
}

/// Contraction rate `tanh(pi exp(D) / (2 sqrt 2))` of the chained gauge for
/// an image of chained diameter `D`.
pub fn dtilde_contraction_bound(diameter: f64) -> Result<f64> {
    if !(diameter >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "diameter must be >= 0, got {diameter}"
        )));
    }
    Ok((PI * diameter.exp() / (2.0 * SQRT_2)).tanh())
}

/// Contraction rate `tanh(D / 2)` of the hyperbolic gauge.
pub fn rugh_contraction_bound(diameter: f64) -> Result<f64> {
    if !(diameter >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "diameter must be >= 0, got {diameter}"
        )));
    }
    Ok((0.5 * diameter).tanh())
}

/// Three vectors of `C+^3` indexed by `k`: two disks of `E(x_k, y_k)` meet
/// at angle `pi / (2k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceTriple {
    pub k: u32,
    pub x: ComplexVector,
    pub y: ComplexVector,
    pub z: ComplexVector,
}

fn check_member(v: &ComplexVector, name: &'static str, k: u32) -> Result<()> {
    match classify(v)? {
        Membership::Outside => Err(Error::SequenceMembership { name, k }),
        _ => Ok(()),
    }
}

pub fn remark_sequences(k: u32) -> Result<SequenceTriple> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let t = PI / (2.0 * k as f64);
    let e = Complex::from_polar(1.0, FRAC_PI_2 - t);
    let one = Complex::new(1.0, 0.0);
    let x = ComplexVector::new(vec![one, e, e])?;
    let y = ComplexVector::new(vec![
        Complex::new(2.0, 0.0),
        e,
        e + Complex::new(0.0, 2.0 * t.cos()),
    ])?;
    let z0 = 2.0 / (3f64.sqrt() * t.cos() + t.sin());
    let z = ComplexVector::new(vec![Complex::new(z0, 0.0), one, one])?;
    check_member(&x, "x", k)?;
    check_member(&y, "y", k)?;
    check_member(&z, "z", k)?;
    Ok(SequenceTriple { k, x, y, z })
}

/// A pair whose E-region is a union of several overlapping disks.
pub fn figure_pair() -> (ComplexVector, ComplexVector) {
    let r = |t: f64| Complex::from_polar(1.0, t);
    let t = PI / 12.0;
    let x = vec![Complex::new(1.0, 0.0), r(-t), r(t)];
    let y = vec![
        Complex::new(2.0, 0.0) + r(PI / 3.0),
        Complex::new(2.0, -1.0) * r(-t),
        Complex::new(3.0, -1.0) * r(t),
    ];
    (
        ComplexVector::new(x).expect("finite"),
        ComplexVector::new(y).expect("finite"),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityChecks {
    /// `delta / 2 <= d.lower`.
    pub half_delta_ok: bool,
    /// `d.upper <= pi sqrt(2) exp(delta / 2)`.
    pub exp_bound_ok: bool,
    /// `delta`, `d.upper` and the chained lower bound are finite together.
    pub finiteness_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub delta: MetricValue,
    pub dc: DcInterval,
    pub dtilde: DtildeInterval,
    pub checks: InequalityChecks,
    /// Whether `delta > d` is decided by the enclosure.
    pub delta_exceeds_dc: Verdict,
}

/// Compares `delta`, `d` and the chained gauge on one pair.
pub fn inequality_report(x: &ConePoint, y: &ConePoint) -> Result<InequalityReport> {
    let d = delta(x, y)?;
    let dc = dc_pair(x, y)?;
    let dtilde = DtildeInterval {
        lower: MetricValue::new(0.5 * d.value()),
        upper: dc.upper,
    };
    let tol = 1e-9;
    let checks = InequalityChecks {
        half_delta_ok: 0.5 * d.value() <= dc.lower.value() + tol,
        exp_bound_ok: !d.is_finite() || dc.upper.value() <= exp_upper_bound(d.value()) + tol,
        finiteness_consistent: d.is_finite() == dc.upper.is_finite()
            && d.is_finite() == dtilde.lower.is_finite(),
    };
    let delta_exceeds_dc = if !d.is_finite() {
        Verdict::No
    } else if d.value() > dc.upper.value() {
        Verdict::Yes
    } else if d.value() <= dc.lower.value() {
        Verdict::No
    } else {
        Verdict::Indeterminate
    };
    Ok(InequalityReport {
        delta: d,
        dc,
        dtilde,
        checks,
        delta_exceeds_dc,
    })
}

/// One row of the growth table for [`remark_sequences`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemarkRow {
    pub k: u32,
    pub delta_xy: MetricValue,
    pub dc_xy: DcInterval,
    pub dc_zx: DcInterval,
    pub dc_zy: DcInterval,
    /// The claimed lower bound `k log 2` on `d(x_k, y_k)`.
    pub k_log2: f64,
    /// `true` only if `dc_xy.lower >= k log 2`.
    pub linear_growth_certified: bool,
}

pub fn remark_row(k: u32) -> Result<RemarkRow> {
    let s = remark_sequences(k)?;
    let (x, y, z) = (
        ConePoint::new(s.x)?,
        ConePoint::new(s.y)?,
        ConePoint::new(s.z)?,
    );
    let dc_xy = dc_pair(&x, &y)?;
    let k_log2 = k as f64 * 2f64.ln();
    Ok(RemarkRow {
        k,
        delta_xy: delta(&x, &y)?,
        linear_growth_certified: dc_xy.lower.value() >= k_log2,
        dc_xy,
        dc_zx: dc_pair(&z, &x)?,
        dc_zy: dc_pair(&z, &y)?,
        k_log2,
    })
}
