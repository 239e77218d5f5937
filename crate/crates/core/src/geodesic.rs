//! The parametric family of complex geodesics on `l^p` balls.
//!
//! A parameter set `(gamma, {alpha_j}, {beta_j}, {c_j}, p)` describes the
//! disc map with coordinates
//!
//! ```text
//! phi_j(zeta) = c_j ((zeta - alpha_j)/(1 - conj(alpha_j) zeta))^{beta_j}
//!               ((1 - conj(alpha_j) zeta)/(1 - conj(gamma) zeta))^{2/p}
//! ```
//!
//! which maps the closed disc into the closed unit ball of `l^p_n` whenever
//! the two constraint residuals vanish:
//!
//! * scalar: `sum_j |c_j|^p (1 + |alpha_j|^2) = 1 + |gamma|^2`
//! * vector: `sum_j |c_j|^p alpha_j = gamma`
//!
//! Admissible nonconstant members are complex geodesics; boundary points map
//! to unit vectors. The fractional power always uses the principal branch:
//! for `|zeta| < 1` both `1 - conj(alpha) zeta` and `1 - conj(gamma) zeta`
//! lie in the open disc of radius 1 about 1, hence have argument in
//! `(-pi/2, pi/2)`, so the quotient never meets the cut `(-inf, 0]`.

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::disc::rho_raw;
use crate::error::{Error, Result};
use crate::space::{ComplexVector, SpaceSignature};

/// Residual gate below which parameters count as admissible.
pub const ADMISSIBLE_TOL: f64 = 1e-8;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Principal-branch power, with integer exponents special-cased so the
/// `p = 1, 2` families evaluate exactly.
pub(crate) fn branch_pow(w: Complex64, e: f64) -> Complex64 {
    if e == 0.0 {
        ONE
    } else if e == 1.0 {
        w
    } else if e == 2.0 {
        w * w
    } else if w == ZERO {
        ZERO
    } else {
        w.powf(e)
    }
}

/// One coordinate of the family map together with its zeta-derivative.
/// Shared by evaluation, the solver Jacobian and the dual map.
pub(crate) fn coord_eval(
    c: Complex64,
    alpha: Complex64,
    beta: u8,
    gamma: Complex64,
    two_over_p: f64,
    zeta: Complex64,
) -> (Complex64, Complex64) {
    let num = ONE - alpha.conj() * zeta;
    let den = ONE - gamma.conj() * zeta;
    debug_assert!(num.re > -1e-9, "Re(1 - conj(alpha) zeta) must stay >= 0");
    debug_assert!(den.re > 1e-12, "Re(1 - conj(gamma) zeta) must stay > 0");
    let w = num / den;
    let pw = branch_pow(w, two_over_p);
    let dw = (gamma.conj() - alpha.conj()) / (den * den);
    if beta == 1 {
        let b = (zeta - alpha) / num;
        let db = (1.0 - alpha.norm_sqr()) / (num * num);
        let value = c * b * pw;
        // d/dzeta [c B W^e] = c (B' W^e + B e W^{e-1} W')
        let deriv = if w == ZERO {
            // only reachable at a boundary zero; the derivative is not used there
            ZERO
        } else {
            c * (db * pw + b * two_over_p * (pw / w) * dw)
        };
        (value, deriv)
    } else {
        let value = c * pw;
        let deriv = if w == ZERO {
            ZERO
        } else {
            c * two_over_p * (pw / w) * dw
        };
        (value, deriv)
    }
}

/// Scalar and vector constraint residuals of a parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintResiduals {
    /// `| sum_j |c_j|^p (1 + |alpha_j|^2) - (1 + |gamma|^2) |`
    pub scalar: f64,
    /// `sum_j |c_j|^p alpha_j - gamma`
    pub vector: Complex64,
}

impl ConstraintResiduals {
    pub fn max_abs(&self) -> f64 {
        self.scalar.max(self.vector.norm())
    }
}

/// One sample of a boundary trace.
#[derive(Debug, Clone)]
pub struct BoundarySample {
    pub theta: f64,
    pub point: ComplexVector,
    pub norm: f64,
}

/// Parameters `(gamma, {alpha_j}, {beta_j}, {c_j})` of a family member on an
/// `l^p_n` ball.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicParams {
    space: SpaceSignature,
    pub gamma: Complex64,
    pub alpha: Vec<Complex64>,
    pub beta: Vec<u8>,
    pub c: Vec<Complex64>,
}

impl GeodesicParams {
    pub fn new(
        space: SpaceSignature,
        gamma: Complex64,
        alpha: Vec<Complex64>,
        beta: Vec<u8>,
        c: Vec<Complex64>,
    ) -> Result<Self> {
        let p = space
            .lp_exponent()
            .ok_or_else(|| Error::contract("geodesic parameters require an lp signature"))?;
        if p.is_infinite() {
            return Err(Error::contract(
                "the parametric family is defined for finite exponents only",
            ));
        }
        let n = space.dim();
        if alpha.len() != n || beta.len() != n || c.len() != n {
            return Err(Error::contract(format!(
                "parameter arrays must all have length {n}"
            )));
        }
        if gamma.norm() >= 1.0 {
            return Err(Error::contract(format!("|gamma| = {} must be < 1", gamma.norm())));
        }
        for (j, (a, b)) in alpha.iter().zip(beta.iter()).enumerate() {
            if !matches!(b, 0 | 1) {
                return Err(Error::contract(format!("beta[{j}] must be 0 or 1")));
            }
            if a.norm() > 1.0 + 1e-12 {
                return Err(Error::contract(format!(
                    "|alpha[{j}]| = {} must be <= 1",
                    a.norm()
                )));
            }
            if *b == 1 && a.norm() >= 1.0 {
                return Err(Error::contract(format!(
                    "beta[{j}] = 1 requires |alpha[{j}]| < 1"
                )));
            }
        }
        Ok(GeodesicParams {
            space,
            gamma,
            alpha,
            beta,
            c,
        })
    }

    /// Build an admissible parameter set from Blaschke data: given zeros,
    /// exponent bits, positive weights and phases, rescale the weights so
    /// both constraints hold exactly and derive `gamma` from them.
    ///
    /// Writing `V = sum w_j alpha_j` and `S = sum w_j (1 + |alpha_j|^2)`,
    /// the rescale factor is the smaller root of
    /// `lambda^2 |V|^2 - lambda S + 1 = 0`, which exists because
    /// `S >= 2|V|`; then `gamma = lambda V` and `|c_j|^p = lambda w_j`.
    pub fn admissible(
        space: SpaceSignature,
        alpha: Vec<Complex64>,
        beta: Vec<u8>,
        weights: &[f64],
        phases: &[f64],
    ) -> Result<Self> {
        let p = space
            .lp_exponent()
            .ok_or_else(|| Error::contract("geodesic parameters require an lp signature"))?;
        let n = space.dim();
        if weights.len() != n || phases.len() != n || alpha.len() != n || beta.len() != n {
            return Err(Error::contract(format!("all arrays must have length {n}")));
        }
        if weights.iter().any(|w| *w < 0.0) || weights.iter().all(|w| *w == 0.0) {
            return Err(Error::contract(
                "weights must be nonnegative with at least one positive",
            ));
        }
        let v: Complex64 = alpha
            .iter()
            .zip(weights)
            .map(|(a, w)| a * Complex64::new(*w, 0.0))
            .sum();
        let s: f64 = alpha
            .iter()
            .zip(weights)
            .map(|(a, w)| w * (1.0 + a.norm_sqr()))
            .sum();
        let disc = (s * s - 4.0 * v.norm_sqr()).max(0.0);
        let lambda = 2.0 / (s + disc.sqrt());
        let gamma = lambda * v;
        if gamma.norm() >= 1.0 - 1e-9 {
            return Err(Error::contract(
                "degenerate data: derived gamma reaches the boundary",
            ));
        }
        let c = weights
            .iter()
            .zip(phases)
            .map(|(w, phi)| Complex64::from_polar((lambda * w).powf(1.0 / p), *phi))
            .collect();
        GeodesicParams::new(space, gamma, alpha, beta, c)
    }

    pub fn space(&self) -> SpaceSignature {
        self.space
    }

    pub fn p(&self) -> f64 {
        self.space.lp_exponent().expect("validated at construction")
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Evaluate the map at `|zeta| <= 1`.
    pub fn eval(&self, zeta: Complex64) -> Result<ComplexVector> {
        Ok(self.eval_with_derivative(zeta)?.0)
    }

    /// Evaluate the map and its zeta-derivative.
    pub fn eval_with_derivative(&self, zeta: Complex64) -> Result<(ComplexVector, ComplexVector)> {
        if zeta.norm() > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "evaluation point {zeta} lies outside the closed disc"
            )));
        }
        let e = 2.0 / self.p();
        let mut value = Vec::with_capacity(self.dim());
        let mut deriv = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let (v, d) = coord_eval(self.c[j], self.alpha[j], self.beta[j], self.gamma, e, zeta);
            value.push(v);
            deriv.push(d);
        }
        Ok((
            ComplexVector::new(self.space, value)?,
            ComplexVector::new(self.space, deriv)?,
        ))
    }

    pub fn constraint_residuals(&self) -> ConstraintResiduals {
        let p = self.p();
        let mut scalar = -(1.0 + self.gamma.norm_sqr());
        let mut vector = -self.gamma;
        for j in 0..self.dim() {
            let t = self.c[j].norm().powf(p);
            scalar += t * (1.0 + self.alpha[j].norm_sqr());
            vector += Complex64::new(t, 0.0) * self.alpha[j];
        }
        ConstraintResiduals {
            scalar: scalar.abs(),
            vector,
        }
    }

    pub fn is_admissible(&self, tol: f64) -> bool {
        self.constraint_residuals().max_abs() < tol
    }

    /// Nonconstancy predicate: some coordinate has `c_j != 0` and either a
    /// Blaschke factor or `alpha_j != gamma`.
    pub fn is_nonconstant(&self) -> bool {
        (0..self.dim()).any(|j| {
            self.c[j].norm() > 1e-14
                && (self.beta[j] == 1 || (self.alpha[j] - self.gamma).norm() > 1e-14)
        })
    }

    /// Equispaced boundary samples. Requires admissible parameters; each
    /// sampled norm then equals 1 up to the residual scale.
    pub fn boundary_trace(&self, samples: usize) -> Result<Vec<BoundarySample>> {
        let res = self.constraint_residuals();
        if res.max_abs() >= ADMISSIBLE_TOL {
            return Err(Error::Inadmissible {
                scalar: res.scalar,
                vector: res.vector.norm(),
            });
        }
        (0..samples)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                let point = self.eval(Complex64::from_polar(1.0, theta))?;
                let norm = point.norm();
                Ok(BoundarySample { theta, point, norm })
            })
            .collect()
    }

    /// Canonical representative: coordinates with `c_j = 0` carry
    /// `alpha_j = gamma, beta_j = 0`, and a Blaschke bit whose zero reached
    /// the boundary folds into the constant of modulus one it became.
    pub fn canonicalize(&mut self) {
        for j in 0..self.dim() {
            if self.c[j] == ZERO {
                self.alpha[j] = self.gamma;
                self.beta[j] = 0;
            } else if self.beta[j] == 1 && self.alpha[j].norm() > 1.0 - 1e-12 {
                self.c[j] *= -self.alpha[j];
                self.beta[j] = 0;
            }
        }
    }
}

// --- direct sums ----------------------------------------------------------

/// Parameters of the direct-sum family on `l^{p1}_{n1} (+)_r l^{p2}_{n2}`:
/// per-coordinate data within each block plus one inner `gamma_i` per block
/// and the outer `gamma`. Coordinates of block `i` evaluate as
///
/// ```text
/// phi_ij(zeta) = c_ij B_ij(zeta)^{beta_ij}
///     ((1 - conj(alpha_ij) zeta)/(1 - conj(gamma_i) zeta))^{2/p_i}
///     ((1 - conj(gamma_i) zeta)/(1 - conj(gamma) zeta))^{2/r}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumGeodesicParams {
    space: SpaceSignature,
    pub gamma: Complex64,
    pub block_gamma: [Complex64; 2],
    pub alpha: Vec<Complex64>,
    pub beta: Vec<u8>,
    pub c: Vec<Complex64>,
}

/// Residuals of the direct-sum relations. Blocks whose derived scale `c_i`
/// vanishes are degenerate: they are excluded from the residuals and
/// flagged instead.
#[derive(Debug, Clone, Copy)]
pub struct DirectSumResiduals {
    /// per block: `sum_j |c_ij|^{p_i} alpha_ij - gamma_i c_i^{p_i}`
    pub block_vector: [Complex64; 2],
    /// `c_1^r gamma_1 + c_2^r gamma_2 - gamma`
    pub outer_vector: Complex64,
    /// `| c_1^r (1+|gamma_1|^2) + c_2^r (1+|gamma_2|^2) - (1+|gamma|^2) |`
    pub outer_scalar: f64,
    pub degenerate_block: [bool; 2],
}

impl DirectSumResiduals {
    pub fn max_abs(&self) -> f64 {
        self.block_vector[0]
            .norm()
            .max(self.block_vector[1].norm())
            .max(self.outer_vector.norm())
            .max(self.outer_scalar)
    }
}

impl DirectSumGeodesicParams {
    pub fn new(
        space: SpaceSignature,
        gamma: Complex64,
        block_gamma: [Complex64; 2],
        alpha: Vec<Complex64>,
        beta: Vec<u8>,
        c: Vec<Complex64>,
    ) -> Result<Self> {
        let SpaceSignature::DirectSum { .. } = space else {
            return Err(Error::contract(
                "direct-sum parameters require a direct-sum signature",
            ));
        };
        let n = space.dim();
        if alpha.len() != n || beta.len() != n || c.len() != n {
            return Err(Error::contract(format!(
                "parameter arrays must all have length {n}"
            )));
        }
        if gamma.norm() >= 1.0 || block_gamma.iter().any(|g| g.norm() >= 1.0) {
            return Err(Error::contract("all gamma parameters must lie inside the disc"));
        }
        for (j, (a, b)) in alpha.iter().zip(beta.iter()).enumerate() {
            if !matches!(b, 0 | 1) {
                return Err(Error::contract(format!("beta[{j}] must be 0 or 1")));
            }
            if a.norm() > 1.0 + 1e-12 || (*b == 1 && a.norm() >= 1.0) {
                return Err(Error::contract(format!("alpha[{j}] out of range")));
            }
        }
        Ok(DirectSumGeodesicParams {
            space,
            gamma,
            block_gamma,
            alpha,
            beta,
            c,
        })
    }

    pub fn space(&self) -> SpaceSignature {
        self.space
    }

    fn shape(&self) -> (f64, usize, f64, usize, f64) {
        match self.space {
            SpaceSignature::DirectSum { p1, n1, p2, n2, r } => (p1, n1, p2, n2, r),
            SpaceSignature::Lp { .. } => unreachable!("validated at construction"),
        }
    }

    fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let (_, n1, _, n2, _) = self.shape();
        if i == 0 {
            0..n1
        } else {
            n1..n1 + n2
        }
    }

    fn block_p(&self, i: usize) -> f64 {
        let (p1, _, p2, _, _) = self.shape();
        if i == 0 {
            p1
        } else {
            p2
        }
    }

    /// Derived block scale
    /// `c_i = ((1/(1+|gamma_i|^2)) sum_j |c_ij|^{p_i} (1+|alpha_ij|^2))^{1/p_i}`.
    pub fn block_scale(&self, i: usize) -> f64 {
        let p = self.block_p(i);
        let s: f64 = self.block_range(i)
            .map(|j| self.c[j].norm().powf(p) * (1.0 + self.alpha[j].norm_sqr()))
            .sum();
        (s / (1.0 + self.block_gamma[i].norm_sqr())).powf(1.0 / p)
    }

    pub fn eval(&self, zeta: Complex64) -> Result<ComplexVector> {
        if zeta.norm() > 1.0 + 1e-12 {
            return Err(Error::domain(format!(
                "evaluation point {zeta} lies outside the closed disc"
            )));
        }
        let (_, _, _, _, r) = self.shape();
        let outer_den = ONE - self.gamma.conj() * zeta;
        let mut entries = Vec::with_capacity(self.space.dim());
        for i in 0..2 {
            let gi = self.block_gamma[i];
            let e_block = 2.0 / self.block_p(i);
            let outer = branch_pow((ONE - gi.conj() * zeta) / outer_den, 2.0 / r);
            for j in self.block_range(i) {
                let (inner, _) =
                    coord_eval(self.c[j], self.alpha[j], self.beta[j], gi, e_block, zeta);
                entries.push(inner * outer);
            }
        }
        ComplexVector::new(self.space, entries)
    }

    pub fn residuals(&self) -> DirectSumResiduals {
        let (_, _, _, _, r) = self.shape();
        let mut block_vector = [ZERO; 2];
        let mut degenerate = [false; 2];
        let mut outer_vector = -self.gamma;
        let mut outer_scalar = -(1.0 + self.gamma.norm_sqr());
        for i in 0..2 {
            let p = self.block_p(i);
            let ci = self.block_scale(i);
            if ci == 0.0 {
                degenerate[i] = true;
                continue;
            }
            let sum: Complex64 = self.block_range(i)
                .map(|j| Complex64::new(self.c[j].norm().powf(p), 0.0) * self.alpha[j])
                .sum();
            block_vector[i] = sum - self.block_gamma[i] * ci.powf(p);
            let w = ci.powf(r);
            outer_vector += Complex64::new(w, 0.0) * self.block_gamma[i];
            outer_scalar += w * (1.0 + self.block_gamma[i].norm_sqr());
        }
        DirectSumResiduals {
            block_vector,
            outer_vector,
            outer_scalar: outer_scalar.abs(),
            degenerate_block: degenerate,
        }
    }

    pub fn is_nonconstant(&self) -> bool {
        (0..2).any(|i| {
            self.block_range(i).any(|j| {
                self.c[j].norm() > 1e-14
                    && (self.beta[j] == 1
                        || (self.alpha[j] - self.block_gamma[i]).norm() > 1e-14
                        || (self.block_gamma[i] - self.gamma).norm() > 1e-14)
            })
        })
    }

    pub fn boundary_trace(&self, samples: usize) -> Result<Vec<BoundarySample>> {
        let res = self.residuals();
        if res.max_abs() >= ADMISSIBLE_TOL {
            return Err(Error::Inadmissible {
                scalar: res.outer_scalar,
                vector: res.max_abs(),
            });
        }
        (0..samples)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                let point = self.eval(Complex64::from_polar(1.0, theta))?;
                let norm = point.norm();
                Ok(BoundarySample { theta, point, norm })
            })
            .collect()
    }

    /// Admissible direct-sum parameters from per-block Blaschke data and
    /// relative block masses. Block gammas come from the in-block relations,
    /// the outer gamma from the same rescale trick applied across blocks.
    pub fn admissible(
        space: SpaceSignature,
        alpha: Vec<Complex64>,
        beta: Vec<u8>,
        weights: &[f64],
        phases: &[f64],
        block_mass: [f64; 2],
    ) -> Result<Self> {
        let SpaceSignature::DirectSum { p1, n1, p2, n2, r } = space else {
            return Err(Error::contract("need a direct-sum signature"));
        };
        let n = n1 + n2;
        if alpha.len() != n || beta.len() != n || weights.len() != n || phases.len() != n {
            return Err(Error::contract(format!("all arrays must have length {n}")));
        }
        if block_mass.iter().any(|m| *m <= 0.0) {
            return Err(Error::contract("block masses must be positive"));
        }
        let ranges = [0..n1, n1..n];
        let ps = [p1, p2];
        let mut block_gamma = [ZERO; 2];
        let mut block_c = [0.0f64; 2];
        let mut c: Vec<Complex64> = weights
            .iter()
            .zip(phases)
            .zip(ranges[0].clone().map(|_| p1).chain(ranges[1].clone().map(|_| p2)))
            .map(|((w, phi), p)| Complex64::from_polar(w.powf(1.0 / p), *phi))
            .collect();
        for i in 0..2 {
            let v: Complex64 = ranges[i]
                .clone()
                .map(|j| Complex64::new(weights[j], 0.0) * alpha[j])
                .sum();
            let s: f64 = ranges[i]
                .clone()
                .map(|j| weights[j] * (1.0 + alpha[j].norm_sqr()))
                .sum();
            if s == 0.0 {
                return Err(Error::contract("each block needs positive weight"));
            }
            let m = v.norm() / s;
            let g_mod = if m < 1e-15 {
                0.0
            } else {
                (1.0 - (1.0 - 4.0 * m * m).max(0.0).sqrt()) / (2.0 * m)
            };
            block_gamma[i] = if v == ZERO {
                ZERO
            } else {
                Complex64::from_polar(g_mod, v.arg())
            };
            block_c[i] = (s / (1.0 + block_gamma[i].norm_sqr())).powf(1.0 / ps[i]);
        }
        // outer rescale across blocks
        let v: Complex64 = (0..2)
            .map(|i| Complex64::new(block_mass[i], 0.0) * block_gamma[i])
            .sum();
        let s: f64 = (0..2)
            .map(|i| block_mass[i] * (1.0 + block_gamma[i].norm_sqr()))
            .sum();
        let disc = (s * s - 4.0 * v.norm_sqr()).max(0.0);
        let lambda = 2.0 / (s + disc.sqrt());
        let gamma = lambda * v;
        for i in 0..2 {
            let scale = (lambda * block_mass[i]).powf(1.0 / r) / block_c[i];
            for j in ranges[i].clone() {
                c[j] *= scale;
            }
        }
        DirectSumGeodesicParams::new(space, gamma, block_gamma, alpha, beta, c)
    }
}

/// Distance on the polydisc (`p = inf` signature): `max_j rho(x_j, y_j)`.
pub fn polydisc_distance(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    if !x.space().is_polydisc() || x.space() != y.space() {
        return Err(Error::contract(
            "polydisc distance requires matching max-norm signatures",
        ));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::domain("points must lie in the open polydisc"));
    }
    Ok(x.entries()
        .iter()
        .zip(y.entries())
        .map(|(a, b)| rho_raw(*a, *b))
        .fold(0.0, f64::max))
}

// --- serialization --------------------------------------------------------
//
// The interchange format between solver, verifier and CLI:
// {"p": ..., "gamma": [re,im], "alpha": [[re,im]...], "beta": [0|1...],
//  "c": [[re,im]...]}

fn c64_to_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

fn c64_from_json(v: &serde_json::Value) -> Option<Complex64> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    Some(Complex64::new(arr[0].as_f64()?, arr[1].as_f64()?))
}

impl Serialize for GeodesicParams {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "p": crate::space::exponent_to_json(self.p()),
            "gamma": c64_to_json(self.gamma),
            "alpha": self.alpha.iter().map(|a| c64_to_json(*a)).collect::<Vec<_>>(),
            "beta": self.beta,
            "c": self.c.iter().map(|a| c64_to_json(*a)).collect::<Vec<_>>(),
        })
        .serialize(ser)
    }
}

pub(crate) fn geodesic_params_from_value(
    v: &serde_json::Value,
) -> std::result::Result<GeodesicParams, String> {
    let p = v
        .get("p")
        .and_then(crate::space::exponent_from_json)
        .ok_or("missing exponent \"p\"")?;
    let gamma = v
        .get("gamma")
        .and_then(c64_from_json)
        .ok_or("missing \"gamma\"")?;
    let alpha: Vec<Complex64> = v
        .get("alpha")
        .and_then(|a| a.as_array())
        .ok_or("missing \"alpha\"")?
        .iter()
        .map(|e| c64_from_json(e).ok_or("bad alpha entry"))
        .collect::<std::result::Result<_, _>>()?;
    let beta: Vec<u8> = v
        .get("beta")
        .and_then(|a| a.as_array())
        .ok_or("missing \"beta\"")?
        .iter()
        .map(|e| e.as_u64().map(|b| b as u8).ok_or("bad beta entry"))
        .collect::<std::result::Result<_, _>>()?;
    let c: Vec<Complex64> = v
        .get("c")
        .and_then(|a| a.as_array())
        .ok_or("missing \"c\"")?
        .iter()
        .map(|e| c64_from_json(e).ok_or("bad c entry"))
        .collect::<std::result::Result<_, _>>()?;
    let space = SpaceSignature::lp(alpha.len(), p).map_err(|e| e.to_string())?;
    GeodesicParams::new(space, gamma, alpha, beta, c).map_err(|e| e.to_string())
}

impl<'de> Deserialize<'de> for GeodesicParams {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        geodesic_params_from_value(&v).map_err(D::Error::custom)
    }
}
