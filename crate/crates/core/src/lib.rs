//! Projective metrics on complex cones and certified spectral gaps for
//! complex matrices.
//!
//! A matrix that maps the cone `C+^n = {v : Re(v_k conj(v_l)) >= 0}` into
//! its interior contracts the projective metric `delta` by at least
//! `tanh(D / 4)`, where `D` bounds the diameter of the image. That number
//! bounds `|lambda_2| / |lambda_1|`.
//!
//! ```
//! use conegap::{certify, ComplexMatrix};
//!
//! let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
//! let cert = certify(&a).unwrap();
//! assert!((cert.contraction.unwrap() - 7.0 / 9.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contraction;
pub mod cpn;
pub mod error;
pub mod gauge;
pub mod general;
pub mod geometry;
pub mod numerics;
pub mod sampling;

pub use contraction::{
    certify, certify_with, check_condition, contraction_coefficient, diameter_bounds,
    power_iterate, theta_sigma, CertifyOptions, ConditionReport, DiameterBounds, GapCertificate,
    PowerResult, ThetaSigma,
};
pub use cpn::{classify, delta, e_region, hilbert_rplus, ConePoint, Membership};
pub use error::{Error, Result};
pub use gauge::{dc_bounds, dc_pair, inequality_report, DcInterval, InequalityReport};
pub use general::{complexify_birkhoff, delta_general, e_region_general, ConeSpec};
pub use geometry::{Disk, DiskComplement, HalfPlane, MetricValue, MoebiusMap, Part, Region};
pub use numerics::{mat_apply, Complex, ComplexMatrix, ComplexVector};
