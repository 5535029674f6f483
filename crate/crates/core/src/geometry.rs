//! Plane geometry of the exceptional set `E(x, y)`: disks, half-planes and
//! disk complements arising as Moebius images of the right half-plane, the
//! Poincaré metric of the right half-plane, and closed-form hyperbolic
//! distances between 0 and infinity in simple slit domains.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{complex_serde, Complex};

/// Absolute tolerance for comparisons against zero after scaling to unit size.
pub const GEOM_TOL: f64 = 1e-12;

/// Cap on the exponent `alpha` in [`sector_upper_bound`].
pub const ALPHA_CAP: f64 = 16.0;

/// A nonnegative extended real: either finite or `+inf`.
///
/// Serialized as a JSON number, or as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MetricValue(f64);

impl MetricValue {
    pub const ZERO: MetricValue = MetricValue(0.0);
    pub const INFINITY: MetricValue = MetricValue(f64::INFINITY);

    /// Wraps a value; negative rounding noise is clamped to 0.
    pub fn new(v: f64) -> Self {
        debug_assert!(!v.is_nan());
        MetricValue(v.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn min(self, other: Self) -> Self {
        MetricValue(self.0.min(other.0))
    }

    pub fn max(self, other: Self) -> Self {
        MetricValue(self.0.max(other.0))
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

impl Serialize for MetricValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for MetricValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Tok(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v >= 0.0 => Ok(MetricValue(v)),
            Raw::Num(v) => Err(serde::de::Error::custom(format!(
                "negative metric value {v}"
            ))),
            Raw::Tok(t) if t == "inf" => Ok(MetricValue::INFINITY),
            Raw::Tok(t) => Err(serde::de::Error::custom(format!("unknown token {t:?}"))),
        }
    }
}

/// Closed disk; radius 0 is a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(with = "complex_serde")]
    pub center: Complex,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex, radius: f64) -> Result<Self> {
        if !center.re.is_finite() || !center.im.is_finite() || !radius.is_finite() {
            return Err(Error::NonFinite);
        }
        if radius < 0.0 {
            return Err(Error::InvalidDisk("negative radius"));
        }
        Ok(Disk { center, radius })
    }

    pub fn point(z: Complex) -> Self {
        Disk {
            center: z,
            radius: 0.0,
        }
    }

    fn scale(&self) -> f64 {
        self.center.norm() + self.radius
    }

    pub fn contains(&self, z: Complex) -> bool {
        (z - self.center).norm() <= self.radius + GEOM_TOL * self.scale().max(1.0)
    }

    /// True when `other` lies inside `self` up to the geometric tolerance.
    pub fn contains_disk(&self, other: &Disk) -> bool {
        let slack = GEOM_TOL * self.scale().max(other.scale()).max(f64::MIN_POSITIVE);
        (other.center - self.center).norm() + other.radius <= self.radius + slack
    }

    /// Strictly inside `{Re z > 0}` after scaling.
    fn in_open_rhp(&self) -> bool {
        self.center.re - self.radius > GEOM_TOL * self.scale()
    }

    /// The disk as a hyperbolic ball of the right half-plane:
    /// `(hyperbolic center, hyperbolic radius)`.
    fn as_hyperbolic_ball(&self) -> (Complex, f64) {
        let (x0, y0, r) = (self.center.re, self.center.im, self.radius);
        let h = Complex::new(((x0 - r) * (x0 + r)).sqrt(), y0);
        (h, 0.5 * ((x0 + r) / (x0 - r)).ln())
    }
}

/// The closed half-plane `{z : Re(z conj(normal)) >= offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    #[serde(with = "complex_serde")]
    pub normal: Complex,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Complex, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if len == 0.0 || !len.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidParameter(
                "half-plane normal must be nonzero".into(),
            ));
        }
        Ok(HalfPlane {
            normal: normal / len,
            offset: offset / len,
        })
    }

    pub fn contains(&self, z: Complex) -> bool {
        (z * self.normal.conj()).re
            >= self.offset - GEOM_TOL * z.norm().max(self.offset.abs()).max(1.0)
    }
}

/// `{z : |z - center| >= radius}` together with the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskComplement {
    pub excluded: Disk,
}

impl DiskComplement {
    pub fn contains(&self, z: Complex) -> bool {
        let d = self.excluded;
        (z - d.center).norm() >= d.radius - GEOM_TOL * d.scale().max(1.0)
    }
}

/// One piece of a [`Region`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Part {
    Disk(Disk),
    HalfPlane(HalfPlane),
    DiskComplement(DiskComplement),
}

impl Part {
    pub fn contains(&self, z: Complex) -> bool {
        match self {
            Part::Disk(d) => d.contains(z),
            Part::HalfPlane(h) => h.contains(z),
            Part::DiskComplement(c) => c.contains(z),
        }
    }

    pub fn as_disk(&self) -> Option<&Disk> {
        match self {
            Part::Disk(d) => Some(d),
            _ => None,
        }
    }

    /// `(inf |z|, sup |z|)` over the part.
    pub fn modulus_bounds(&self) -> (f64, MetricValue) {
        match *self {
            Part::Disk(d) => {
                let m = d.center.norm();
                let lo = m - d.radius;
                let lo = if lo <= GEOM_TOL * (m + d.radius) {
                    0.0
                } else {
                    lo
                };
                (lo, MetricValue::new(m + d.radius))
            }
            Part::HalfPlane(h) => (h.offset.max(0.0), MetricValue::INFINITY),
            Part::DiskComplement(c) => {
                let m = c.excluded.center.norm();
                ((c.excluded.radius - m).max(0.0), MetricValue::INFINITY)
            }
        }
    }
}

/// A finite union of disks, half-planes and disk complements.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub parts: Vec<Part>,
}

impl Region {
    pub fn new(parts: Vec<Part>) -> Self {
        Region { parts }
    }

    pub fn from_disks(disks: impl IntoIterator<Item = Disk>) -> Self {
        Region {
            parts: disks.into_iter().map(Part::Disk).collect(),
        }
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.parts.iter().any(|p| p.contains(z))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// All parts as disks, or `None` if any part is unbounded.
    pub fn disks(&self) -> Option<Vec<Disk>> {
        self.parts.iter().map(|p| p.as_disk().copied()).collect()
    }

    /// The same union with every disk that lies inside another disk removed.
    /// Unbounded parts are kept as they are.
    pub fn simplified(&self) -> Region {
        let disks: Vec<Disk> = self
            .parts
            .iter()
            .filter_map(|p| p.as_disk().copied())
            .collect();
        let kept = prune_contained(&disks);
        let mut parts: Vec<Part> = kept.into_iter().map(Part::Disk).collect();
        parts.extend(self.parts.iter().filter(|p| p.as_disk().is_none()).copied());
        Region { parts }
    }
}

/// Drops disks contained in another disk of the list; of several equal
/// disks the first one survives.
fn prune_contained(disks: &[Disk]) -> Vec<Disk> {
    let mut out = Vec::new();
    for (i, d) in disks.iter().enumerate() {
        let swallowed = disks
            .iter()
            .enumerate()
            .any(|(j, e)| j != i && e.contains_disk(d) && (!d.contains_disk(e) || j < i));
        if !swallowed {
            out.push(*d);
        }
    }
    out
}

/// `w -> (a w + b) / (c w + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl MoebiusMap {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d };
        if m.is_degenerate() {
            return Err(Error::DegenerateMoebius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
        MoebiusMap {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn determinant(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    fn is_degenerate(&self) -> bool {
        let scale = self.a.norm() * self.d.norm() + self.b.norm() * self.c.norm();
        scale == 0.0 || self.determinant().norm() <= GEOM_TOL * scale
    }

    /// Value at `w`; the pole maps to an infinite complex number.
    pub fn apply(&self, w: Complex) -> Complex {
        let den = self.c * w + self.d;
        if den.norm() == 0.0 {
            return Complex::new(f64::INFINITY, f64::INFINITY);
        }
        (self.a * w + self.b) / den
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }
}

/// Image of the closed right half-plane (with infinity) under `phi`.
///
/// The pole `w* = -d/c` decides the shape: left of the imaginary axis gives
/// a disk, right of it the complement of a disk, on it a half-plane. The
/// disk center is the image of the mirror point `-conj(w*)`.
pub fn moebius_image_rhp(phi: &MoebiusMap) -> Result<Part> {
    if phi.is_degenerate() {
        return Err(Error::DegenerateMoebius);
    }
    let MoebiusMap { a, b, c, d } = *phi;

    if c.norm() == 0.0 {
        // Affine: z = alpha w + beta.
        let alpha = a / d;
        let beta = b / d;
        let normal = alpha / alpha.norm();
        let offset = (beta * normal.conj()).re;
        return Ok(Part::HalfPlane(HalfPlane { normal, offset }));
    }

    let side = if d.norm() == 0.0 {
        0.0
    } else {
        (d * c.conj()).re / (d.norm() * c.norm())
    };
    let pole = -d / c;

    if side.abs() <= GEOM_TOL {
        // Boundary line through phi(inf) = a/c and phi(pole + i).
        let p1 = a / c;
        let p2 = phi.apply(Complex::new(pole.re, pole.im + 1.0));
        let dir = p2 - p1;
        let mut normal = Complex::new(-dir.im, dir.re) / dir.norm();
        let inside = phi.apply(Complex::new(pole.re + 1.0, pole.im));
        if (inside * normal.conj()).re < (p1 * normal.conj()).re {
            normal = -normal;
        }
        let offset = (p1 * normal.conj()).re;
        return Ok(Part::HalfPlane(HalfPlane { normal, offset }));
    }

    let center = phi.apply(-pole.conj());
    let radius = (phi.apply(Complex::new(0.0, 0.0)) - center).norm();
    let disk = Disk { center, radius };
    if side > 0.0 {
        Ok(Part::Disk(disk))
    } else {
        Ok(Part::DiskComplement(DiskComplement { excluded: disk }))
    }
}

/// `(inf |z|, sup |z|)` over the union.
pub fn region_mod_bounds(region: &Region) -> (f64, MetricValue) {
    region
        .parts
        .iter()
        .map(Part::modulus_bounds)
        .fold((f64::INFINITY, MetricValue::ZERO), |(a, b), (pa, pb)| {
            (a.min(pa), b.max(pb))
        })
}

/// `log(b / a)` for modulus bounds of an E-region; `+inf` when `a = 0` or
/// `b` is infinite.
pub fn log_ratio(a: f64, b: MetricValue) -> MetricValue {
    if !(a > 0.0) || !b.is_finite() {
        return MetricValue::INFINITY;
    }
    MetricValue::new((b.value() / a).ln())
}

fn check_rhp(z: Complex) -> Result<()> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::OutsideRightHalfPlane { re: z.re, im: z.im });
    }
    Ok(())
}

/// Poincaré distance in the right half-plane (metric `|dz| / Re z`):
/// `log((|a + conj b| + |a - b|) / (|a + conj b| - |a - b|))`.
pub fn rhp_poincare(a: Complex, b: Complex) -> Result<f64> {
    check_rhp(a)?;
    check_rhp(b)?;
    Ok(rho(a, b))
}

#[inline]
fn rho(a: Complex, b: Complex) -> f64 {
    let t = (a - b).norm() / (a + b.conj()).norm();
    // log((1 + t) / (1 - t)), written to stay accurate for small t
    2.0 * t.min(1.0).atanh()
}

/// Hyperbolic diameter of a closed disk in the right half-plane:
/// `log((Re c + r) / (Re c - r))`.
pub fn disk_rhp_diameter(disk: &Disk) -> Result<f64> {
    if !disk.in_open_rhp() {
        return Err(Error::InvalidDisk(
            "disk must lie strictly inside the right half-plane",
        ));
    }
    let x = disk.center.re;
    Ok(((x + disk.radius) / (x - disk.radius)).ln())
}

/// Hyperbolic diameter of a union of closed disks in the right half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnionDiameter {
    /// Largest distance found between explicit points of the union.
    pub estimate: f64,
    /// Guaranteed upper bound.
    pub upper: f64,
}

/// Diameter of a union of disks for the right half-plane Poincaré metric.
///
/// Each disk is a hyperbolic ball `B(h, R)`, so two of them are at most
/// `rho(h_i, h_j) + R_i + R_j` apart; the maximum of that over pairs is the
/// `upper` value. The `estimate` is the largest distance realized by actual
/// boundary points: a `samples`-point angular grid on one circle followed by
/// golden-section refinement, alternated between the two circles of a pair.
pub fn rhp_union_diameter(disks: &[Disk], samples: usize) -> Result<UnionDiameter> {
    if samples < 16 {
        return Err(Error::InvalidParameter(format!(
            "samples must be >= 16, got {samples}"
        )));
    }
    if disks.is_empty() {
        return Err(Error::InvalidParameter("empty disk list".into()));
    }
    for d in disks {
        if !d.in_open_rhp() {
            return Err(Error::InvalidDisk(
                "disk touches or crosses the imaginary axis",
            ));
        }
    }
    let disks = prune_contained(disks);
    let balls: Vec<(Complex, f64)> = disks.iter().map(Disk::as_hyperbolic_ball).collect();

    let mut upper = 0.0f64;
    let mut estimate = 0.0f64;
    for (i, di) in disks.iter().enumerate() {
        let (hi, ri) = balls[i];
        upper = upper.max(2.0 * ri);
        let c = di.center;
        let r = Complex::new(di.radius, 0.0);
        estimate = estimate.max(rho(c - r, c + r));
        for (j, dj) in disks.iter().enumerate().skip(i + 1) {
            let (hj, rj) = balls[j];
            upper = upper.max(rho(hi, hj) + ri + rj);
            estimate = estimate.max(farthest_pair(di, dj, hi, samples));
        }
    }
    Ok(UnionDiameter { estimate, upper })
}

fn circle_point(d: &Disk, theta: f64) -> Complex {
    d.center + Complex::from_polar(d.radius, theta)
}

/// Farthest point of the circle of `d` from `from`, by grid then golden
/// section (distance to a point is unimodal along a hyperbolic circle).
fn farthest_on_circle(d: &Disk, from: Complex, samples: usize) -> Complex {
    if d.radius == 0.0 {
        return d.center;
    }
    let step = 2.0 * PI / samples as f64;
    let best = (0..samples)
        .map(|k| k as f64 * step)
        .max_by(|&s, &t| rho(from, circle_point(d, s)).total_cmp(&rho(from, circle_point(d, t))))
        .unwrap_or(0.0);
    let theta = golden_max(|t| rho(from, circle_point(d, t)), best - step, best + step);
    circle_point(d, theta)
}

fn farthest_pair(di: &Disk, dj: &Disk, hi: Complex, samples: usize) -> f64 {
    let q = farthest_on_circle(dj, hi, samples);
    let p = farthest_on_circle(di, q, samples);
    let q = farthest_on_circle(dj, p, samples);
    rho(p, q)
}

/// Maximizer of a unimodal function on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_895;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if hi - lo < 1e-13 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}

/// Hyperbolic distance from 0 to infinity in the complement of a closed
/// disk avoiding 0: `log((|c| + r) / (|c| - r))`. A point (radius 0) gives 0.
pub fn poincare_complement_disk(disk: &Disk) -> Result<f64> {
    let m = disk.center.norm();
    if disk.radius == 0.0 {
        return Ok(0.0);
    }
    if m - disk.radius <= GEOM_TOL * (m + disk.radius) {
        return Err(Error::InvalidDisk("disk contains or touches the origin"));
    }
    Ok(((m + disk.radius) / (m - disk.radius)).ln())
}

/// `alpha log(b / a)`: distance from 0 to infinity once the two disks
/// through `a` and `b` meeting the real axis at angle `pi / (2 alpha)` are
/// removed.
pub fn omega_alpha_distance(a: f64, b: f64, alpha: f64) -> Result<f64> {
    if !(a > 0.0) || !(b >= a) || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need 0 < a <= b, got a={a}, b={b}"
        )));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need alpha >= 1, got {alpha}"
        )));
    }
    Ok(alpha * (b / a).ln())
}

/// Half-opening of the narrowest sector around the origin holding every
/// disk, or `None` if some disk meets 0 or the sector is not acute.
pub fn sector_half_angle(disks: &[Disk]) -> Option<f64> {
    if disks.is_empty() {
        return None;
    }
    let mean: Complex = disks.iter().map(|d| d.center * d.center.norm()).sum();
    if mean.norm() == 0.0 {
        return None;
    }
    let rot = mean.conj() / mean.norm();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for d in disks {
        let m = d.center.norm();
        if m - d.radius <= GEOM_TOL * (m + d.radius) {
            return None;
        }
        let arg = (d.center * rot).arg();
        let spread = (d.radius / m).asin();
        lo = lo.min(arg - spread);
        hi = hi.max(arg + spread);
    }
    let half = 0.5 * (hi - lo);
    (half < 0.5 * PI).then_some(half)
}

/// Whether `S = {|arg z| <= half_angle, a <= |z| <= b}` avoids the domain
/// `Omega_alpha` built on `[a, b]`.
pub(crate) fn sector_fits(alpha: f64, ratio_gap: f64, half_angle: f64) -> bool {
    2.0 * (ratio_gap / (PI / (2.0 * alpha)).tan()).atan() >= half_angle
}

/// Upper bound on the hyperbolic distance from 0 to infinity in the
/// complement of a union of disks, by fitting the union inside the
/// complement of some `Omega_alpha`. Returns `+inf` when no `alpha` up to
/// [`ALPHA_CAP`] works or the region is not a union of finite disks.
pub fn sector_upper_bound(region: &Region) -> MetricValue {
    let Some(disks) = region.disks() else {
        return MetricValue::INFINITY;
    };
    let Some(theta) = sector_half_angle(&disks) else {
        return MetricValue::INFINITY;
    };
    let (a, b) = region_mod_bounds(region);
    let b = b.value();
    if !(a > 0.0) || !b.is_finite() {
        return MetricValue::INFINITY;
    }
    let log_ratio = (b / a).ln();
    if log_ratio == 0.0 {
        return MetricValue::ZERO;
    }
    let gap = (b - a) / (b + a);
    if !sector_fits(ALPHA_CAP, gap, theta) {
        return MetricValue::INFINITY;
    }
    if sector_fits(1.0, gap, theta) {
        return MetricValue::new(log_ratio);
    }
    // Smallest admissible alpha; the fit condition is monotone in alpha.
    let (mut lo, mut hi) = (1.0, ALPHA_CAP);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if sector_fits(mid, gap, theta) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    MetricValue::new(hi * log_ratio)
}
