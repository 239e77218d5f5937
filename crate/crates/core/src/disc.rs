//! Exact Poincaré-disc primitives.
//!
//! Everything here is a pure function of its arguments: the hyperbolic
//! distance `rho(z, w) = atanh(|(z - w)/(1 - conj(w) z)|)`, the infinitesimal
//! metric `alpha(z, v) = |v|/(1 - |z|^2)`, disc automorphisms, and a
//! circle-mean generalized Laplacian used by the curvature estimator.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points of the open unit disc. Construction validates `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    z: Complex64,
}

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 {
            Ok(DiscPoint { z })
        } else {
            Err(Error::domain(format!(
                "point {z} lies on or outside the unit circle"
            )))
        }
    }

    pub fn value(&self) -> Complex64 {
        self.z
    }
}

impl TryFrom<Complex64> for DiscPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        DiscPoint::new(z)
    }
}

/// `atanh` computed as `log((1+t)/(1-t))/2`, with the argument clamped at
/// `1 - 1e-15` so distances near the boundary degrade gracefully instead of
/// producing NaN.
pub fn atanh_clamped(t: f64) -> f64 {
    let t = t.clamp(-(1.0 - 1e-15), 1.0 - 1e-15);
    0.5 * ((1.0 + t) / (1.0 - t)).ln()
}

pub(crate) fn rho_raw(z: Complex64, w: Complex64) -> f64 {
    let num = z - w;
    let den = Complex64::new(1.0, 0.0) - w.conj() * z;
    atanh_clamped((num / den).norm())
}

/// Poincaré distance between two disc points.
///
/// Symmetric, zero iff the points coincide, and invariant under any
/// [`MobiusMap`] applied to both arguments.
pub fn poincare_distance(z: DiscPoint, w: DiscPoint) -> f64 {
    rho_raw(z.z, w.z)
}

/// Convenience form of [`poincare_distance`] on raw complex values.
pub fn poincare_distance_values(z: Complex64, w: Complex64) -> Result<f64> {
    Ok(poincare_distance(DiscPoint::new(z)?, DiscPoint::new(w)?))
}

/// Infinitesimal Poincaré metric `|v| / (1 - |z|^2)`.
pub fn poincare_infinitesimal(z: DiscPoint, v: Complex64) -> f64 {
    v.norm() / (1.0 - z.z.norm_sqr())
}

/// Biholomorphic automorphism of the disc,
/// `zeta -> e^{i phase} (zeta - a) / (1 - conj(a) zeta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: Complex64,
    phase: f64,
}

impl MobiusMap {
    pub fn new(a: Complex64, phase: f64) -> Result<Self> {
        if a.norm() < 1.0 {
            Ok(MobiusMap { a, phase })
        } else {
            Err(Error::domain(format!("zero {a} must lie inside the disc")))
        }
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: Complex64::new(0.0, 0.0),
            phase: 0.0,
        }
    }

    pub fn zero(&self) -> Complex64 {
        self.a
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Apply the map. Sends the open disc onto itself and the unit circle
    /// onto itself; `apply(a) = 0`.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let rot = Complex64::from_polar(1.0, self.phase);
        rot * (z - self.a) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }
}

/// Circle-mean generalized Laplacian:
/// `4/r^2 * (mean of u over `samples` equispaced points of the circle of
/// radius r about z - u(z))`.
///
/// Equispaced sampling is trapezoidal quadrature on a periodic function,
/// exact for trigonometric polynomials up to degree `samples - 1`; the value
/// converges to the classical Laplacian as `r -> 0` for twice continuously
/// differentiable `u`. A non-finite sample aborts with the angle of failure.
pub fn circle_mean_laplacian(
    u: impl Fn(Complex64) -> f64,
    z: Complex64,
    r: f64,
    samples: usize,
) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::domain(format!("radius {r} must be positive")));
    }
    if samples == 0 {
        return Err(Error::domain("sample count must be positive".to_string()));
    }
    let center = u(z);
    if !center.is_finite() {
        return Err(Error::Eval { theta: f64::NAN });
    }
    let mut sum = 0.0;
    for k in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
        let val = u(z + Complex64::from_polar(r, theta));
        if !val.is_finite() {
            return Err(Error::Eval { theta });
        }
        sum += val;
    }
    Ok(4.0 / (r * r) * (sum / samples as f64 - center))
}

/// Default sample count for circle means.
pub const CIRCLE_SAMPLES: usize = 256;

/// Circle-mean Laplacian evaluated at the decreasing radii
/// `{1e-2, 10^-2.5, 1e-3}` with two-level Richardson extrapolation in `r^2`.
///
/// For smooth `u` the circle mean expands as `u + (r^2/4) lap u + O(r^4)`, so
/// each Richardson level removes one power of `r^2`.
pub fn laplacian_richardson(u: impl Fn(Complex64) -> f64, z: Complex64) -> Result<f64> {
    let radii = [1e-2, 10f64.powf(-2.5), 1e-3];
    let vals = [
        circle_mean_laplacian(&u, z, radii[0], CIRCLE_SAMPLES)?,
        circle_mean_laplacian(&u, z, radii[1], CIRCLE_SAMPLES)?,
        circle_mean_laplacian(&u, z, radii[2], CIRCLE_SAMPLES)?,
    ];
    let sq = [
        radii[0] * radii[0],
        radii[1] * radii[1],
        radii[2] * radii[2],
    ];
    let m01 = (sq[0] * vals[1] - sq[1] * vals[0]) / (sq[0] - sq[1]);
    let m12 = (sq[1] * vals[2] - sq[2] * vals[1]) / (sq[1] - sq[2]);
    Ok((sq[0] * m12 - sq[2] * m01) / (sq[0] - sq[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn distance_closed_forms() {
        assert_eq!(poincare_distance(pt(0.0, 0.0), pt(0.0, 0.0)), 0.0);
        assert_abs_diff_eq!(
            poincare_distance(pt(0.0, 0.0), pt(0.5, 0.0)),
            0.5f64.atanh(),
            epsilon = 1e-15
        );
        // rho(0.5, -0.5) = atanh(0.8) = ln 3
        assert_abs_diff_eq!(
            poincare_distance(pt(0.5, 0.0), pt(-0.5, 0.0)),
            3f64.ln(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn distance_rejects_boundary_points() {
        assert!(DiscPoint::new(c(1.0, 0.0)).is_err());
        assert!(DiscPoint::new(c(0.8, 0.8)).is_err());
    }

    #[test]
    fn infinitesimal_metric() {
        assert_abs_diff_eq!(poincare_infinitesimal(pt(0.0, 0.0), c(1.0, 0.0)), 1.0);
        assert_abs_diff_eq!(
            poincare_infinitesimal(pt(0.5, 0.0), c(1.0, 0.0)),
            4.0 / 3.0,
            epsilon = 1e-15
        );
        // absolute homogeneity in v
        let z = pt(0.3, -0.4);
        let v = c(0.7, 0.2);
        assert_abs_diff_eq!(
            poincare_infinitesimal(z, 2.0 * v),
            2.0 * poincare_infinitesimal(z, v),
            epsilon = 1e-15
        );
    }

    #[test]
    fn mobius_basics() {
        let id = MobiusMap::identity();
        assert_eq!(id.apply(c(0.3, 0.1)), c(0.3, 0.1));

        let m = MobiusMap::new(c(0.5, 0.0), 0.0).unwrap();
        assert_abs_diff_eq!(m.apply(c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-16);

        // boundary preservation
        let boundary = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert_abs_diff_eq!(m.apply(boundary).norm(), 1.0, epsilon = 1e-15);

        assert!(MobiusMap::new(c(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn laplacian_exact_for_quadratics() {
        let lap = circle_mean_laplacian(|z| z.norm_sqr(), c(0.0, 0.0), 0.01, 64).unwrap();
        assert_abs_diff_eq!(lap, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn laplacian_vanishes_for_harmonics() {
        let lap = circle_mean_laplacian(|z| z.re, c(0.2, 0.1), 0.05, 128).unwrap();
        assert_abs_diff_eq!(lap, 0.0, epsilon = 1e-12);
        // Re z^3 is harmonic; trapezoid with 256 samples integrates it exactly.
        let lap3 = circle_mean_laplacian(|z| (z * z * z).re, c(0.1, -0.2), 0.01, 256).unwrap();
        assert_abs_diff_eq!(lap3, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn laplacian_of_hyperbolic_potential() {
        // independent oracle (symbolic): lap(-log(1-|z|^2)) = 4/(1-|z|^2)^2,
        // so the value at 0 is exactly 4 and the circle-mean estimate at
        // r = 1e-3 is 4 + 2e-6 + O(r^4).
        let u = |z: Complex64| -(1.0 - z.norm_sqr()).ln();
        let lap = circle_mean_laplacian(u, c(0.0, 0.0), 1e-3, CIRCLE_SAMPLES).unwrap();
        assert_abs_diff_eq!(lap, 4.0, epsilon = 1e-5);

        // Richardson-extrapolated version removes the r^2 term.
        let lap = laplacian_richardson(u, c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(lap, 4.0, epsilon = 1e-9);
        // off-center check against the symbolic form
        let z0 = c(0.3, -0.1);
        let expect = 4.0 / (1.0 - z0.norm_sqr()).powi(2);
        let lap = laplacian_richardson(u, z0).unwrap();
        assert_abs_diff_eq!(lap, expect, epsilon = 1e-7);
    }

    #[test]
    fn laplacian_reports_failure_angle() {
        let u = |z: Complex64| {
            if z.im > 0.0 {
                f64::NAN
            } else {
                0.0
            }
        };
        match circle_mean_laplacian(u, c(0.0, 0.0), 0.1, 16) {
            Err(Error::Eval { theta }) => assert!(theta > 0.0),
            other => panic!("expected Eval error, got {other:?}"),
        }
    }

    #[test]
    fn atanh_clamp_guards_boundary() {
        assert!(atanh_clamped(1.0).is_finite());
        assert!(atanh_clamped(2.0).is_finite());
        assert_abs_diff_eq!(atanh_clamped(0.5), 0.5f64.atanh(), epsilon = 1e-15);
    }
}
