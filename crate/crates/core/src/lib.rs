//! Invariant metrics and complex geodesics on the unit balls of
//! finite-dimensional `l^p` spaces, their `l^r`-direct sums, and polydiscs.
//!
//! The crate is organised around one parametric family of disc maps into the
//! `l^p` ball whose admissible members are exactly the complex geodesics of
//! the ball. On top of the family sit:
//!
//! * [`disc`] — exact Poincaré-disc primitives (distance, infinitesimal
//!   metric, Möbius automorphisms, circle-mean Laplacian),
//! * [`space`] — complex `l^p` / direct-sum vectors, the bilinear dual
//!   pairing and supporting functionals at boundary points,
//! * [`geodesic`] — evaluation of the parametric family, its constraint
//!   residuals and boundary traces, plus the polydisc distance formula,
//! * [`solver`] — a damped Newton solver that joins two interior points by a
//!   normalized geodesic of the family, yielding the Carathéodory =
//!   Kobayashi distance,
//! * [`verify`] — independent certification of a candidate geodesic through
//!   the dual supporting-functional criterion (boundary alignment, Poisson
//!   positivity, Schwarz–Pick spot checks, Hölder fits),
//! * [`metric`] — solver-independent metric estimators: Carathéodory lower
//!   bounds, Kobayashi upper bounds, the modulus of complex convexity, and
//!   holomorphic sectional curvature of the Kobayashi metric.

pub mod disc;
mod error;
pub mod geodesic;
pub mod metric;
pub mod solver;
pub mod space;
pub(crate) mod threads;
pub mod verify;

pub use disc::{DiscPoint, MobiusMap};
pub use error::{Error, Result};
pub use geodesic::{
    ConstraintResiduals, DirectSumGeodesicParams, DirectSumResiduals, GeodesicParams,
};
pub use metric::{ConvexityModulus, MetricEstimate};
pub use solver::{BetaStrategy, NormalizedGeodesic, SolveConfig};
pub use space::{ComplexVector, DualFunctional, SpaceSignature};
pub use verify::VerificationReport;

/// Round to 12 significant digits; used by every machine-readable emitter so
/// that identical inputs produce byte-identical output.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exp = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - exp);
    (x * scale).round() / scale
}
