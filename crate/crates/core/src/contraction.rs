//! Cone-preservation test for matrices, bounds on the projective diameter
//! of the image cone, and spectral gap certificates.

use log::{debug, error};
use serde::{Deserialize, Serialize};

use crate::cpn::{aperture_witness, best_phase, delta, e_region, ConePoint, Membership};
use crate::error::{Error, Result};
use crate::geometry::{rhp_union_diameter, Disk, MetricValue, UnionDiameter};
use crate::numerics::{
    complex_serde, eigenvalues, mat_apply, Complex, ComplexMatrix, ComplexVector, ORACLE_MAX_DIM,
};

/// Slack allowed between the oracle ratio and the certified coefficient.
pub const ORACLE_SLACK: f64 = 1e-9;

/// Outcome of the exhaustive scan of
/// `Re(conj(a_kp) a_lq + conj(a_kq) a_lp) - |a_kp a_lq - a_kq a_lp|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// Smallest value over all `(k, l, p, q)`.
    pub margin: f64,
    /// First tuple with nonpositive margin, 0-based; written 1-based in JSON.
    #[serde(
        rename = "violation",
        default,
        with = "one_based",
        skip_serializing_if = "Option::is_none"
    )]
    pub first_violation: Option<[usize; 4]>,
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<[usize; 4]>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|t| t.map(|i| i + 1)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<[usize; 4]>, D::Error> {
        let raw = Option::<[usize; 4]>::deserialize(d)?;
        match raw {
            Some(t) if t.contains(&0) => {
                Err(serde::de::Error::custom("violation indices are 1-based"))
            }
            Some(t) => Ok(Some(t.map(|i| i - 1))),
            None => Ok(None),
        }
    }
}

#[inline]
fn cross_terms(a: &ComplexMatrix, k: usize, l: usize, p: usize, q: usize) -> (f64, f64) {
    let (kp, kq, lp, lq) = (a.get(k, p), a.get(k, q), a.get(l, p), a.get(l, q));
    let re = (kp.conj() * lq + kq.conj() * lp).re;
    let det = (kp * lq - kq * lp).norm();
    (re, det)
}

fn tuples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |k| {
        (0..n).flat_map(move |l| (0..n).flat_map(move |p| (0..n).map(move |q| [k, l, p, q])))
    })
}

/// Whether `A` maps the closed cone minus 0 into the open cone.
pub fn check_condition(a: &ComplexMatrix) -> ConditionReport {
    let mut margin = f64::INFINITY;
    let mut first_violation = None;
    for t in tuples(a.dim()) {
        let (re, det) = cross_terms(a, t[0], t[1], t[2], t[3]);
        let m = re - det;
        margin = margin.min(m);
        if !(m > 0.0) && first_violation.is_none() {
            first_violation = Some(t);
        }
    }
    ConditionReport {
        holds: first_violation.is_none(),
        margin,
        first_violation,
    }
}

/// The `(theta, sigma)` diameter bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSigma {
    pub theta: f64,
    pub sigma: f64,
    /// `8 log((1 + theta) / (1 - theta)) + 2 log(sigma)`.
    pub bound: f64,
}

/// `theta = max |a_kp a_lq - a_kq a_lp| / Re(conj(a_kp) a_lq + conj(a_kq) a_lp)`,
/// `sigma = sqrt(max |a_kp a_lq| / |a_kq a_lp|)`. `None` when the condition
/// fails, some entry vanishes, or `theta >= 1`.
pub fn theta_sigma(a: &ComplexMatrix) -> Option<ThetaSigma> {
    let n = a.dim();
    if (0..n).any(|i| (0..n).any(|j| a.get(i, j).norm() == 0.0)) {
        return None;
    }
    if !check_condition(a).holds {
        return None;
    }
    let mut theta = 0.0f64;
    let mut ratio = 0.0f64;
    for [k, l, p, q] in tuples(n) {
        let (re, det) = cross_terms(a, k, l, p, q);
        theta = theta.max(det / re);
        let num = (a.get(k, p) * a.get(l, q)).norm();
        let den = (a.get(k, q) * a.get(l, p)).norm();
        ratio = ratio.max(num / den);
    }
    if !(theta < 1.0) {
        return None;
    }
    let sigma = ratio.sqrt();
    Some(ThetaSigma {
        theta,
        sigma,
        bound: 8.0 * ((1.0 + theta) / (1.0 - theta)).ln() + 2.0 * sigma.ln(),
    })
}

/// `max(delta_1, delta_2) <= diameter <= delta_1 + 2 delta_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterBounds {
    /// Largest projective distance between two rows.
    pub delta1: f64,
    /// Largest hyperbolic diameter of a row-pair E-region.
    pub delta2: UnionDiameter,
    pub lower: f64,
    pub upper: f64,
}

/// Rows as cone points; the condition makes them interior.
fn row_points(a: &ComplexMatrix) -> Result<Vec<ConePoint>> {
    a.rows().map(ConePoint::new).collect()
}

/// Bounds on the projective diameter of `A(C+^n \ 0)`.
pub fn diameter_bounds(a: &ComplexMatrix, samples: usize) -> Result<DiameterBounds> {
    if !check_condition(a).holds {
        return Err(Error::ConditionFails);
    }
    let rows = row_points(a)?;
    let mut delta1 = 0.0f64;
    let mut delta2 = UnionDiameter {
        estimate: 0.0,
        upper: 0.0,
    };
    for k in 0..rows.len() {
        for l in (k + 1)..rows.len() {
            delta1 = delta1.max(delta(&rows[k], &rows[l])?.value());
            let disks = e_region(&rows[k], &rows[l])?
                .disks()
                .expect("row regions are unions of disks");
            let d = rhp_union_diameter(&disks, samples)?;
            delta2.estimate = delta2.estimate.max(d.estimate);
            delta2.upper = delta2.upper.max(d.upper);
        }
    }
    Ok(DiameterBounds {
        delta1,
        delta2,
        lower: delta1.max(delta2.estimate),
        upper: delta1 + 2.0 * delta2.upper,
    })
}

/// `tanh(diameter / 4)`.
pub fn contraction_coefficient(diameter: f64) -> Result<f64> {
    if !(diameter >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "diameter must be >= 0, got {diameter}"
        )));
    }
    Ok((diameter / 4.0).tanh())
}

/// Best available upper bound on the image diameter.
pub fn diameter_upper(bounds: &DiameterBounds, ts: Option<&ThetaSigma>) -> f64 {
    ts.map_or(bounds.upper, |t| bounds.upper.min(t.bound))
}

/// Pairs of cone vectors whose images come close to the row distance
/// `delta1`: for each pair of rows, one vector minimizing and one
/// maximizing `|<row_l, x>| / |<row_k, x>|`. Each is supported on at most
/// two coordinates.
pub fn diameter_witnesses(a: &ComplexMatrix) -> Result<Vec<(ComplexVector, ComplexVector)>> {
    let n = a.dim();
    let rows = row_points(a)?;
    let mut out = Vec::new();
    for k in 0..n {
        for l in 0..n {
            if k == l || !rows[k].is_interior() {
                continue;
            }
            let (rk, rl) = (rows[k].vector(), rows[l].vector());
            // (p, q, disk) for every pair, then the point disks with q = p
            let mut parts: Vec<(usize, usize, Disk)> = Vec::new();
            for p in 0..n {
                for q in (p + 1)..n {
                    let den = 2.0 * (rk[p] * rk[q].conj()).re;
                    let center = (rk[q].conj() * rl[p] + rk[p].conj() * rl[q]) / den;
                    let radius = (rk[q] * rl[p] - rk[p] * rl[q]).norm() / den;
                    parts.push((p, q, Disk { center, radius }));
                }
                parts.push((p, p, Disk::point(rl[p] / rk[p])));
            }
            let far = parts
                .iter()
                .max_by(|s, t| {
                    (s.2.center.norm() + s.2.radius).total_cmp(&(t.2.center.norm() + t.2.radius))
                })
                .expect("n >= 2");
            let near = parts
                .iter()
                .min_by(|s, t| {
                    (s.2.center.norm() - s.2.radius).total_cmp(&(t.2.center.norm() - t.2.radius))
                })
                .expect("n >= 2");
            let pick = |&(p, q, d): &(usize, usize, Disk), sign: f64| {
                if p == q {
                    return ComplexVector::basis(n, p);
                }
                let z = d.center + d.center / d.center.norm() * (sign * d.radius);
                let w = (z * rk[q] - rl[q]) / (rl[p] - z * rk[p]);
                if !w.re.is_finite() || !w.im.is_finite() {
                    return ComplexVector::basis(n, p);
                }
                let w = Complex::new(w.re.max(0.0), w.im);
                let mut v = ComplexVector::basis(n, q);
                v[p] = w;
                v
            };
            out.push((pick(near, -1.0), pick(far, 1.0)));
        }
    }
    Ok(out)
}

/// One step of [`power_iterate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerStep {
    /// `delta(x_{m-1}, x_m)`.
    pub delta: MetricValue,
    /// Bound on `|x_m - v|` up to phase.
    pub error_bound: MetricValue,
    pub iterate: ComplexVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerResult {
    #[serde(with = "complex_serde")]
    pub lambda: Complex,
    /// Unit leading eigenvector estimate.
    pub vector: ComplexVector,
    pub iterations: usize,
    pub error_bound: f64,
    /// `|A v - lambda v| / |v|`.
    pub residual: f64,
    #[serde(skip)]
    pub trace: Vec<PowerStep>,
}

/// Power iteration with the rate taken from the certified diameter.
pub fn power_iterate(
    a: &ComplexMatrix,
    x0: &ConePoint,
    tol: f64,
    max_iter: usize,
) -> Result<PowerResult> {
    if !check_condition(a).holds {
        return Err(Error::ConditionFails);
    }
    let bounds = diameter_bounds(a, 64)?;
    let c = contraction_coefficient(diameter_upper(&bounds, theta_sigma(a).as_ref()))?;
    power_iterate_with_rate(a, x0, c, tol, max_iter)
}

/// Power iteration `x <- A x / |A x|`, each iterate rotated to best match
/// the previous one. Stops once `delta(x_m, x_{m+1}) <= tol`.
pub fn power_iterate_with_rate(
    a: &ComplexMatrix,
    x0: &ConePoint,
    c: f64,
    tol: f64,
    max_iter: usize,
) -> Result<PowerResult> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::InvalidParameter(format!(
            "rate must be in [0, 1), got {c}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if x0.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: x0.dim(),
        });
    }
    if x0.class() == Membership::Outside {
        return Err(Error::NotInCone);
    }
    let k = aperture_witness(a.dim())?.k;
    let mut x = ConePoint::new(x0.vector().normalized().ok_or(Error::ZeroVector)?)?;
    let mut trace = Vec::new();
    for m in 1..=max_iter {
        let ax = mat_apply(a, x.vector())?;
        let next = ax.normalized().ok_or(Error::ZeroVector)?;
        let next = next.scale(best_phase(x.vector(), &next)?);
        let next = ConePoint::new(next)?;
        let d = delta(&x, &next)?;
        let error_bound = if d.is_finite() {
            MetricValue::new(k * c * d.value() / (1.0 - c))
        } else {
            MetricValue::INFINITY
        };
        trace.push(PowerStep {
            delta: d,
            error_bound,
            iterate: next.vector().clone(),
        });
        x = next;
        if d.value() <= tol {
            debug!("power iteration converged after {m} steps");
            let v = x.vector().clone();
            let av = mat_apply(a, &v)?;
            let sum = |u: &ComplexVector| u.iter().sum::<Complex>();
            let lambda = sum(&av) / sum(&v);
            let residual = v.scale(lambda).sub(&av)?.norm() / v.norm();
            return Ok(PowerResult {
                lambda,
                vector: v,
                iterations: m,
                error_bound: k * c * d.value() / (1.0 - c),
                residual,
                trace,
            });
        }
    }
    Err(Error::MaxIterations {
        iterations: max_iter,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leading {
    #[serde(with = "complex_serde")]
    pub lambda: Complex,
    pub vector: ComplexVector,
    pub residual: f64,
    pub iterations: usize,
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    /// `|lambda_2| / |lambda_1|` from the characteristic polynomial.
    pub ratio: f64,
    /// `ratio <= contraction + 1e-9`.
    pub pass: bool,
}

/// Everything needed to check a spectral gap claim for `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub condition: ConditionReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_diam: Option<DiameterBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_sigma: Option<ThetaSigma>,
    /// Upper bound on the image diameter actually used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_up: Option<f64>,
    /// `tanh(delta_up / 4)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<f64>,
    /// Sectional aperture constant `sqrt(n)`.
    pub k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leading: Option<Leading>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

impl GapCertificate {
    pub fn holds(&self) -> bool {
        self.condition.holds
    }

    /// Re-checks the internal consistency of a (possibly deserialized)
    /// certificate.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| {
            Err(Error::InvalidParameter(format!(
                "invalid certificate: {msg}"
            )))
        };
        if self.condition.holds != self.condition.first_violation.is_none() {
            return bad("holds flag disagrees with violation");
        }
        if !self.condition.holds {
            if self.delta_up.is_some() || self.contraction.is_some() || self.leading.is_some() {
                return bad("bounds present although the condition fails");
            }
            return Ok(());
        }
        let (Some(bounds), Some(up), Some(c)) = (self.delta_diam, self.delta_up, self.contraction)
        else {
            return bad("missing bounds");
        };
        if bounds.lower > bounds.upper {
            return bad("diameter lower bound exceeds upper bound");
        }
        if up != diameter_upper(&bounds, self.theta_sigma.as_ref()) {
            return bad("delta_up is not the smallest available bound");
        }
        if c != contraction_coefficient(up)? || !(0.0..1.0).contains(&c) {
            return bad("contraction does not match delta_up");
        }
        if let Some(o) = self.oracle {
            if o.pass != (o.ratio <= c + ORACLE_SLACK) {
                return bad("oracle pass flag disagrees with ratio");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOptions {
    pub samples: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub oracle: bool,
    /// Starting vector; defaults to `(1, ..., 1)`.
    pub x0: Option<ComplexVector>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            samples: 256,
            tol: 1e-9,
            max_iter: 10_000,
            oracle: true,
            x0: None,
        }
    }
}

/// [`certify_with`] using default options.
pub fn certify(a: &ComplexMatrix) -> Result<GapCertificate> {
    certify_with(a, &CertifyOptions::default())
}

/// Checks the condition, bounds the image diameter, runs power iteration
/// and optionally compares with the eigenvalue oracle (skipped above
/// [`ORACLE_MAX_DIM`]).
pub fn certify_with(a: &ComplexMatrix, opts: &CertifyOptions) -> Result<GapCertificate> {
    let n = a.dim();
    let k = aperture_witness(n)?.k;
    let condition = check_condition(a);
    if !condition.holds {
        return Ok(GapCertificate {
            condition,
            delta_diam: None,
            theta_sigma: None,
            delta_up: None,
            contraction: None,
            k,
            leading: None,
            oracle: None,
        });
    }
    let bounds = diameter_bounds(a, opts.samples)?;
    let ts = theta_sigma(a);
    let up = diameter_upper(&bounds, ts.as_ref());
    let c = contraction_coefficient(up)?;

    let x0 = ConePoint::new(opts.x0.clone().unwrap_or_else(|| ComplexVector::ones(n)))?;
    let p = power_iterate_with_rate(a, &x0, c, opts.tol, opts.max_iter)?;

    let oracle = if opts.oracle && n <= ORACLE_MAX_DIM {
        let ev = eigenvalues(a)?;
        let ratio = if ev.len() < 2 {
            0.0
        } else {
            ev[1].norm() / ev[0].norm()
        };
        let pass = ratio <= c + ORACLE_SLACK;
        if !pass {
            error!("oracle ratio {ratio} exceeds certified coefficient {c}");
        }
        Some(OracleCheck { ratio, pass })
    } else {
        None
    };

    Ok(GapCertificate {
        condition,
        delta_diam: Some(bounds),
        theta_sigma: ts,
        delta_up: Some(up),
        contraction: Some(c),
        k,
        leading: Some(Leading {
            lambda: p.lambda,
            vector: p.vector,
            residual: p.residual,
            iterations: p.iterations,
            error_bound: p.error_bound,
        }),
        oracle,
    })
}
