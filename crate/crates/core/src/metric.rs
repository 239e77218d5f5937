//! Solver-independent metric estimators and geometric quantities.
//!
//! Two certified routes bracket every distance:
//!
//! * lower bounds from explicit holomorphic maps of the ball into the disc —
//!   linear functionals of unit dual norm, and the implicit "left inverse"
//!   of a family member: for admissible parameters the pairing identity
//!   `<phi(zeta), h(zeta)> = (zeta - gamma)(1 - conj(gamma) zeta)` holds, and
//!   since `|<z, h(e^{it})>| < |q(e^{it})|` strictly inside the ball, Rouché
//!   gives `G_z(zeta) = <z, h(zeta)>/M - q(zeta)` exactly one root in the
//!   disc; the root map is holomorphic into the disc, so Poincaré distances
//!   of roots are valid lower bounds no matter where the parameters came
//!   from (the measured boundary ratio `M` keeps the argument honest for
//!   slightly inadmissible parameters);
//!
//! * upper bounds from explicit analytic discs through both points — affine
//!   discs, polynomially corrected interpolation discs, and family members
//!   with endpoint-error corrections.
//!
//! On convex balls the two sides meet, which is what the bracket tests
//! witness numerically. The module also computes the modulus of complex
//! convexity (with its Globevnik-type companion and the sandwich between
//! them) and the holomorphic sectional curvature of the Kobayashi metric
//! along certified geodesics.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::disc::{atanh_clamped, laplacian_richardson, rho_raw};
use crate::error::{Error, Result};
use crate::geodesic::GeodesicParams;
use crate::solver::{solve, NormalizedGeodesic, SolveConfig};
use crate::space::{
    pairing, support_functional, ComplexVector, DualFunctional, SpaceSignature,
};
use crate::verify::{boundary_symbol_ratio, dual_map_entries};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TAU: f64 = 2.0 * std::f64::consts::PI;

// --- lower bounds ------------------------------------------------------------

/// A Caratheodory lower bound with the functional that attains it.
#[derive(Debug, Clone)]
pub struct LowerBound {
    pub value: f64,
    pub witness: DualFunctional,
}

fn functional_objective(x: &ComplexVector, y: &ComplexVector, f: &DualFunctional) -> f64 {
    let fx = pairing(x, f).expect("dimensions match");
    let fy = pairing(y, f).expect("dimensions match");
    rho_raw(fx, fy)
}

/// Maximize `rho(<x, f>, <y, f>)` over functionals of unit dual norm by
/// projective gradient ascent with restarts. Any feasible functional maps
/// the ball into the disc, so the best value is always a valid lower bound
/// for the Caratheodory distance; it is exact for origin-based pairs and on
/// the polydisc.
pub fn caratheodory_lower(
    x: &ComplexVector,
    y: &ComplexVector,
    trials: usize,
    seed: u64,
) -> Result<LowerBound> {
    if x.space() != y.space() {
        return Err(Error::contract("points live in different spaces"));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::domain("points must lie in the open unit ball"));
    }
    let space = x.space();
    let dim = space.dim();
    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    // supporting functionals at the normalized points and the chord direction
    for probe in [x.clone(), y.clone(), {
        let diff = ComplexVector::new(
            space,
            x.entries()
                .iter()
                .zip(y.entries())
                .map(|(a, b)| a - b)
                .collect(),
        )?;
        diff
    }] {
        let n = probe.norm();
        if n > 1e-12 {
            let unit =
                ComplexVector::new(space, probe.entries().iter().map(|e| e / n).collect())?;
            if let Ok(f) = support_functional(&unit) {
                starts.push(f.entries().to_vec());
            }
        }
    }
    // coordinate functionals (exact witnesses on the polydisc)
    for j in 0..dim {
        let mut e = vec![ZERO; dim];
        e[j] = ONE;
        starts.push(e);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    while starts.len() < trials.max(starts.len()) {
        starts.push(
            (0..dim)
                .map(|_| {
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
                })
                .collect(),
        );
    }

    let normalize = |entries: &[Complex64]| -> Option<DualFunctional> {
        let mut f = DualFunctional::new(space, entries.to_vec()).ok()?;
        if f.dual_norm() < 1e-12 {
            return None;
        }
        f.normalize();
        Some(f)
    };

    let mut best_val = 0.0f64;
    let mut best_f = {
        let mut e = vec![ZERO; dim];
        e[0] = ONE;
        let mut f = DualFunctional::new(space, e)?;
        f.normalize();
        f
    };
    for start in &starts {
        let Some(mut f) = normalize(start) else {
            continue;
        };
        let mut val = functional_objective(x, y, &f);
        // finite-difference ascent on the raw entries, projecting back to
        // the unit dual sphere after each step
        let mut step = 0.25;
        for _ in 0..120 {
            if step < 1e-10 {
                break;
            }
            let h = 1e-6;
            let mut grad = vec![ZERO; dim];
            for j in 0..dim {
                for (k, dir) in [ONE, Complex64::new(0.0, 1.0)].iter().enumerate() {
                    let mut e = f.entries().to_vec();
                    e[j] += dir * h;
                    if let Some(fp) = normalize(&e) {
                        let d = (functional_objective(x, y, &fp) - val) / h;
                        grad[j] += if k == 0 {
                            Complex64::new(d, 0.0)
                        } else {
                            Complex64::new(0.0, d)
                        };
                    }
                }
            }
            let gnorm: f64 = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
            if gnorm < 1e-12 {
                break;
            }
            let mut improved = false;
            let mut trial_step = step;
            for _ in 0..6 {
                let e: Vec<Complex64> = f
                    .entries()
                    .iter()
                    .zip(&grad)
                    .map(|(a, g)| a + g * (trial_step / gnorm))
                    .collect();
                if let Some(fp) = normalize(&e) {
                    let v = functional_objective(x, y, &fp);
                    if v > val {
                        f = fp;
                        val = v;
                        improved = true;
                        break;
                    }
                }
                trial_step *= 0.4;
            }
            if improved {
                step = (trial_step * 2.0).min(0.25);
            } else {
                step *= 0.3;
            }
        }
        if val > best_val {
            best_val = val;
            best_f = f;
        }
    }
    Ok(LowerBound {
        value: best_val,
        witness: best_f,
    })
}

// --- the left inverse of a family member ---------------------------------------

/// Root-based left inverse built from a parameter set's dual map.
pub(crate) struct LeftInverse<'a> {
    params: &'a GeodesicParams,
    scale: f64,
}

impl<'a> LeftInverse<'a> {
    /// The measured boundary ratio `M` caps how far into the ball the Rouché
    /// argument reaches; scaling `h` by `max(M, 1)` makes the root map a
    /// holomorphic map of the whole open ball into the disc.
    pub(crate) fn new(params: &'a GeodesicParams) -> Self {
        let residual = params.constraint_residuals().max_abs();
        let ratio = boundary_symbol_ratio(params, 2048);
        LeftInverse {
            params,
            scale: ratio.max(1.0) * (1.0 + 1e-12) + 10.0 * residual,
        }
    }

    fn g_and_derivative(&self, z: &ComplexVector, zeta: Complex64) -> (Complex64, Complex64) {
        let (h, dh) = dual_map_entries(self.params, zeta);
        let hz: Complex64 = z.entries().iter().zip(&h).map(|(a, b)| a * b).sum();
        let dhz: Complex64 = z.entries().iter().zip(&dh).map(|(a, b)| a * b).sum();
        let gamma = self.params.gamma;
        let q = (zeta - gamma) * (ONE - gamma.conj() * zeta);
        let dq = Complex64::new(1.0 + gamma.norm_sqr(), 0.0) - 2.0 * gamma.conj() * zeta;
        (hz / self.scale - q, dhz / self.scale - dq)
    }

    /// The unique disc root of `G_z`; Newton from several starts with a grid
    /// fallback.
    pub(crate) fn root(&self, z: &ComplexVector) -> Result<Complex64> {
        let mut starts = vec![
            self.params.gamma,
            ZERO,
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.0, -0.5),
        ];
        for attempt in 0..2 {
            if attempt == 1 {
                // dense fallback: seed Newton from the best grid point
                let mut best = (f64::INFINITY, ZERO);
                for ir in 1..8 {
                    for ia in 0..16 {
                        let zeta =
                            Complex64::from_polar(ir as f64 / 8.0, TAU * ia as f64 / 16.0);
                        let (g, _) = self.g_and_derivative(z, zeta);
                        if g.norm() < best.0 {
                            best = (g.norm(), zeta);
                        }
                    }
                }
                starts = vec![best.1];
            }
            for &start in &starts {
                let mut zeta = start;
                for _ in 0..60 {
                    let (g, dg) = self.g_and_derivative(z, zeta);
                    if g.norm() < 1e-13 {
                        if zeta.norm() < 1.0 {
                            return Ok(zeta);
                        }
                        break;
                    }
                    if dg.norm() < 1e-300 {
                        break;
                    }
                    let mut step = g / dg;
                    // keep iterates in the closed disc
                    let mut next = zeta - step;
                    let mut halvings = 0;
                    while next.norm() > 1.0 && halvings < 40 {
                        step *= 0.5;
                        next = zeta - step;
                        halvings += 1;
                    }
                    zeta = next;
                }
            }
        }
        Err(Error::Precision(
            "left-inverse root finding did not converge".into(),
        ))
    }

    /// Directional derivative of the root map at `z` along `v`.
    pub(crate) fn value_and_derivative(
        &self,
        z: &ComplexVector,
        v: &ComplexVector,
    ) -> Result<(Complex64, Complex64)> {
        let zeta = self.root(z)?;
        let (h, _) = dual_map_entries(self.params, zeta);
        let hv: Complex64 = v.entries().iter().zip(&h).map(|(a, b)| a * b).sum();
        let (_, dg) = self.g_and_derivative(z, zeta);
        if dg.norm() < 1e-300 {
            return Err(Error::Precision("left-inverse root is degenerate".into()));
        }
        Ok((zeta, -(hv / self.scale) / dg))
    }
}

/// Certified lower bound for the distance from the left inverse of a family
/// member: `rho(F(x), F(y))`.
pub fn left_inverse_lower(
    x: &ComplexVector,
    y: &ComplexVector,
    params: &GeodesicParams,
) -> Result<f64> {
    let li = LeftInverse::new(params);
    let fx = li.root(x)?;
    let fy = li.root(y)?;
    Ok(rho_raw(fx, fy))
}

// --- upper bounds ---------------------------------------------------------------

/// How an upper bound was witnessed.
#[derive(Debug, Clone, Serialize)]
pub enum UpperWitness {
    /// affine disc through the pair, evaluated at parameters `0` and `t`
    AffineDisc { t: f64 },
    /// affine disc through the origin via both points
    ThroughOrigin,
    /// interpolating polynomial disc of the stated degree
    PolynomialDisc { degree: usize, t: f64 },
    /// family member with endpoint-error corrections
    FamilyDisc { t: f64, correction: f64 },
}

#[derive(Debug, Clone)]
pub struct UpperBound {
    pub value: f64,
    pub witness: UpperWitness,
}

const BOUNDARY_SAMPLES: usize = 256;
const DISC_MARGIN: f64 = 1e-9;

fn space_norm_of(space: SpaceSignature, entries: Vec<Complex64>) -> f64 {
    ComplexVector::new(space, entries)
        .expect("dimension preserved")
        .norm()
}

fn interp_disc_norm_at(
    x: &ComplexVector,
    y: &ComplexVector,
    t: f64,
    q: &[Vec<Complex64>],
    theta: f64,
) -> f64 {
    let n = x.space().dim();
    let zeta = Complex64::from_polar(1.0, theta);
    let mut entries: Vec<Complex64> = (0..n)
        .map(|j| x.entries()[j] + (y.entries()[j] - x.entries()[j]) * zeta / t)
        .collect();
    if !q.is_empty() {
        let w = zeta * (zeta - t);
        let mut zk = ONE;
        for a in q {
            for j in 0..n {
                entries[j] += w * a[j] * zk;
            }
            zk *= zeta;
        }
    }
    space_norm_of(x.space(), entries)
}

/// Max boundary norm of the interpolating disc
/// `g(zeta) = x + (y-x) zeta/t + zeta (zeta - t) q(zeta)` on a coarse grid
/// (used inside search loops; the winner is re-verified by [`confirm_t`]).
fn interp_disc_max(
    x: &ComplexVector,
    y: &ComplexVector,
    t: f64,
    q: &[Vec<Complex64>],
    samples: usize,
) -> f64 {
    (0..samples)
        .map(|k| interp_disc_norm_at(x, y, t, q, TAU * k as f64 / samples as f64))
        .fold(0.0, f64::max)
}

/// Smallest feasible interpolation parameter for a fixed correction, by scan
/// and local bisection.
fn minimal_feasible_t(
    x: &ComplexVector,
    y: &ComplexVector,
    q: &[Vec<Complex64>],
    hint: f64,
    samples: usize,
) -> Option<f64> {
    let feasible = |t: f64| interp_disc_max(x, y, t, q, samples) <= 1.0 - DISC_MARGIN;
    let mut t_hi = None;
    let lo = (hint * 0.6).max(1e-3);
    let hi = (hint * 1.6).min(1.0 - 1e-9);
    let steps = 24;
    for k in (0..=steps).rev() {
        let t = lo + (hi - lo) * k as f64 / steps as f64;
        if feasible(t) {
            t_hi = Some(t);
        } else {
            break;
        }
    }
    let mut t_hi = t_hi.or_else(|| feasible(hi).then_some(hi))?;
    let mut t_lo = (t_hi - (hi - lo) / steps as f64).max(1e-4);
    if feasible(t_lo) {
        return Some(t_lo.max(1e-4));
    }
    for _ in 0..45 {
        let mid = 0.5 * (t_lo + t_hi);
        if feasible(mid) {
            t_hi = mid;
        } else {
            t_lo = mid;
        }
    }
    Some(t_hi)
}

/// Upper bound from explicitly verified analytic discs through both points:
/// interpolating discs of polynomial degree `degree` optimized over the
/// correction coefficients, with an always-available affine fallback.
pub fn kobayashi_upper(
    x: &ComplexVector,
    y: &ComplexVector,
    degree: usize,
    trials: usize,
    seed: u64,
) -> Result<UpperBound> {
    if x.space() != y.space() {
        return Err(Error::contract("points live in different spaces"));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::domain("points must lie in the open unit ball"));
    }

    // the through-origin route always exists on a ball
    let mut best = UpperBound {
        value: atanh_clamped(x.norm()) + atanh_clamped(y.norm()),
        witness: UpperWitness::ThroughOrigin,
    };

    // plain affine disc
    let chord = space_norm_of(
        x.space(),
        x.entries()
            .iter()
            .zip(y.entries())
            .map(|(a, b)| b - a)
            .collect(),
    );
    if chord < 1e-15 {
        return Ok(UpperBound {
            value: 0.0,
            witness: UpperWitness::AffineDisc { t: 0.0 },
        });
    }
    let affine_t = minimal_feasible_t(x, y, &[], chord.min(0.9), BOUNDARY_SAMPLES);
    if let Some(t) = affine_t {
        // recheck on the fine grid before trusting it
        let t = confirm_t(x, y, &[], t);
        if atanh_clamped(t) < best.value {
            best = UpperBound {
                value: atanh_clamped(t),
                witness: UpperWitness::AffineDisc { t },
            };
        }
    }

    // polynomial corrections
    if degree >= 2 && trials > 0 {
        let n = x.space().dim();
        let ncoef = degree - 1;
        let base_t = match (&best.witness, affine_t) {
            (_, Some(t)) => t,
            _ => 0.95,
        };
        let results: Vec<Option<(f64, Vec<Vec<Complex64>>)>> = crate::threads::pool().install(|| {
            (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha20Rng::seed_from_u64(
                        seed ^ 0xB0B ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                    );
                    let mut q: Vec<Vec<Complex64>> = (0..ncoef)
                        .map(|k| {
                            let scale = if trial == 0 { 0.0 } else { 0.08 / (k + 1) as f64 };
                            (0..n)
                                .map(|_| {
                                    Complex64::new(
                                        (rng.gen::<f64>() * 2.0 - 1.0) * scale,
                                        (rng.gen::<f64>() * 2.0 - 1.0) * scale,
                                    )
                                })
                                .collect()
                        })
                        .collect();
                    let mut t = minimal_feasible_t(x, y, &q, base_t, 128)?;
                    let mut radius = 0.08;
                    for _ in 0..10 {
                        let mut improved = false;
                        for _ in 0..4 {
                            let prop: Vec<Vec<Complex64>> = q
                                .iter()
                                .map(|a| {
                                    a.iter()
                                        .map(|e| {
                                            e + Complex64::new(
                                                (rng.gen::<f64>() * 2.0 - 1.0) * radius,
                                                (rng.gen::<f64>() * 2.0 - 1.0) * radius,
                                            )
                                        })
                                        .collect()
                                })
                                .collect();
                            if let Some(tp) = minimal_feasible_t(x, y, &prop, t, 128) {
                                if tp < t {
                                    t = tp;
                                    q = prop;
                                    improved = true;
                                }
                            }
                        }
                        if !improved {
                            radius *= 0.55;
                        }
                    }
                    Some((t, q))
                })
                .collect()
        });
        for res in results.into_iter().flatten() {
            let (t, q) = res;
            let t = confirm_t(x, y, &q, t);
            if atanh_clamped(t) < best.value {
                best = UpperBound {
                    value: atanh_clamped(t),
                    witness: UpperWitness::PolynomialDisc { degree, t },
                };
            }
        }
    }
    Ok(best)
}

/// Re-verify feasibility with the refined circle sup, pushing `t` up if the
/// coarse search grid was too optimistic.
fn confirm_t(x: &ComplexVector, y: &ComplexVector, q: &[Vec<Complex64>], mut t: f64) -> f64 {
    for _ in 0..60 {
        let sup = circle_sup(&|theta| interp_disc_norm_at(x, y, t, q, theta), 512);
        if sup <= 1.0 - DISC_MARGIN / 2.0 {
            return t;
        }
        t = (t * 1.01 + 1e-6).min(1.0 - 1e-12);
    }
    t
}

/// Upper bound from a family member: the disc runs through points within the
/// endpoint residuals of `x` and `y`, and the detour from the true endpoints
/// is charged by affine-disc corrections.
pub fn family_disc_upper(witness: &NormalizedGeodesic, x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    let params = &witness.params;
    let mut boundary_max: f64 = 0.0;
    for k in 0..2048 {
        let zeta = Complex64::from_polar(1.0, TAU * k as f64 / 2048.0);
        boundary_max = boundary_max.max(params.eval(zeta)?.norm());
    }
    let scale = boundary_max.max(1.0) * (1.0 + 1e-12) + 10.0 * witness.residual_norm;
    let g0 = params.eval(ZERO)?;
    let gs = params.eval(Complex64::new(witness.s, 0.0))?;
    let shift = |target: &ComplexVector, got: &ComplexVector| -> f64 {
        space_norm_of(
            target.space(),
            target
                .entries()
                .iter()
                .zip(got.entries())
                .map(|(a, b)| a - b / scale)
                .collect(),
        )
    };
    let e0 = shift(x, &g0);
    let e1 = shift(y, &gs);
    let crowd = x.norm().max(y.norm()).max(0.5) + 0.05;
    let corr = |e: f64| atanh_clamped((e / (1.0 - crowd)).min(0.999));
    Ok(atanh_clamped(witness.s) + corr(e0) + corr(e1))
}

// --- the combined bracket ----------------------------------------------------------

/// How the winning bounds were obtained.
#[derive(Debug, Clone, Serialize)]
pub enum LowerWitness {
    Functional(DualFunctional),
    LeftInverse { residual: f64 },
}

impl Serialize for DualFunctional {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let re: Vec<f64> = self.entries().iter().map(|z| z.re).collect();
        let im: Vec<f64> = self.entries().iter().map(|z| z.im).collect();
        serde_json::json!({"space": self.space(), "re": re, "im": im}).serialize(ser)
    }
}

/// A `[lower, upper]` bracket for a distance, with witnesses and method tags.
#[derive(Debug, Clone, Serialize)]
pub struct MetricEstimate {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: LowerWitness,
    pub upper_witness: UpperWitness,
    pub method_tags: Vec<String>,
}

impl MetricEstimate {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, d: f64, slack: f64) -> bool {
        self.lower - slack <= d && d <= self.upper + slack
    }
}

#[derive(Debug, Clone)]
pub struct BracketConfig {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub solve: SolveConfig,
}

impl Default for BracketConfig {
    fn default() -> Self {
        BracketConfig {
            degree: 6,
            trials: 32,
            seed: 0,
            solve: SolveConfig::default(),
        }
    }
}

/// Certified two-sided bracket of the invariant distance. Both sides are
/// verified pointwise, so a poor witness can only widen the bracket, never
/// corrupt it.
pub fn distance_bracket(
    x: &ComplexVector,
    y: &ComplexVector,
    config: &BracketConfig,
) -> Result<MetricEstimate> {
    let linear = caratheodory_lower(x, y, config.trials, config.seed)?;
    let mut lower = linear.value;
    let mut lower_witness = LowerWitness::Functional(linear.witness);
    let mut tags = vec!["lower:functional".to_string()];

    let witness = solve(
        x,
        y,
        &SolveConfig {
            seed: config.solve.seed ^ 0xA5A5_5A5A,
            ..config.solve.clone()
        },
    )
    .ok();

    let mut upper;
    let mut upper_witness;
    if let Some(w) = &witness {
        if let Ok(v) = left_inverse_lower(x, y, &w.params) {
            if v > lower {
                lower = v;
                lower_witness = LowerWitness::LeftInverse {
                    residual: w.residual_norm,
                };
                tags[0] = "lower:left-inverse".to_string();
            }
        }
        upper = family_disc_upper(w, x, y)?;
        upper_witness = UpperWitness::FamilyDisc {
            t: w.s,
            correction: upper - atanh_clamped(w.s),
        };
        tags.push("upper:family-disc".to_string());
    } else {
        upper = f64::INFINITY;
        upper_witness = UpperWitness::ThroughOrigin;
    }

    let poly = kobayashi_upper(x, y, config.degree, config.trials, config.seed)?;
    if poly.value < upper {
        upper = poly.value;
        upper_witness = poly.witness;
        if tags.len() > 1 {
            tags.pop();
        }
        tags.push("upper:disc-optimization".to_string());
    }

    if lower > upper + 1e-9 {
        return Err(Error::Precision(format!(
            "bracket inverted: lower {lower} > upper {upper}"
        )));
    }
    Ok(MetricEstimate {
        lower,
        upper,
        lower_witness,
        upper_witness,
        method_tags: tags,
    })
}

// --- modulus of complex convexity -----------------------------------------------

/// Witness of an inner-disc radius: `z + r v (closed disc)` fits in the ball.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusWitness {
    pub z: ComplexVector,
    pub v: ComplexVector,
    pub r: f64,
}

/// The modulus of complex convexity at one `epsilon`.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexityModulus {
    pub epsilon: f64,
    pub delta_value: f64,
    pub witness: ModulusWitness,
}

/// Sup over the circle of a smooth (or piecewise smooth) angle function:
/// coarse scan plus golden-section refinement around the two best separated
/// candidates. Plain equispaced sampling underestimates the sup by
/// `O(step^2)`, which is visible at the tolerances the moduli are used at.
fn circle_sup(f: &dyn Fn(f64) -> f64, coarse: usize) -> f64 {
    let step = TAU / coarse as f64;
    let vals: Vec<f64> = (0..coarse).map(|k| f(step * k as f64)).collect();
    let mut order: Vec<usize> = (0..coarse).collect();
    order.sort_by(|a, b| vals[*b].total_cmp(&vals[*a]));
    let first = order[0];
    let mut candidates = vec![first];
    if let Some(&second) = order.iter().find(|&&k| {
        let d = (k as i64 - first as i64).rem_euclid(coarse as i64);
        d > 1 && d < coarse as i64 - 1
    }) {
        candidates.push(second);
    }
    let mut best = vals[first];
    let golden = 0.5 * (3.0 - 5f64.sqrt());
    for k in candidates {
        let mut lo = step * (k as f64 - 1.0);
        let mut hi = step * (k as f64 + 1.0);
        let mut x1 = lo + golden * (hi - lo);
        let mut x2 = hi - golden * (hi - lo);
        let mut f1 = f(x1);
        let mut f2 = f(x2);
        for _ in 0..26 {
            if f1 > f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = lo + golden * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = hi - golden * (hi - lo);
                f2 = f(x2);
            }
            best = best.max(f1.max(f2));
        }
    }
    best
}

fn phase_max_norm(space: SpaceSignature, z: &[Complex64], v: &[Complex64], r: f64, phases: usize) -> f64 {
    let norm_at = |theta: f64| {
        let zeta = Complex64::from_polar(r, theta);
        let entries: Vec<Complex64> = z.iter().zip(v).map(|(a, b)| a + zeta * b).collect();
        space_norm_of(space, entries)
    };
    circle_sup(&norm_at, phases)
}

/// Largest `r` with `max_theta |z + r e^{i theta} v| <= cap`, by bisection.
/// The coarse 64-phase scan is sharpened by golden-section refinement inside
/// [`circle_sup`], which is what keeps near-tie radii honest.
fn inner_radius(space: SpaceSignature, z: &[Complex64], v: &[Complex64], cap: f64) -> f64 {
    let membership = |r: f64| -> bool { phase_max_norm(space, z, v, r, 64) < cap };
    let mut lo = 0.0f64;
    let mut hi = cap + space_norm_of(space, z.to_vec());
    if membership(hi) {
        return hi;
    }
    while hi - lo > 1e-11 {
        let mid = 0.5 * (lo + hi);
        if membership(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

struct ShellPoint {
    dir_z: Vec<Complex64>,
    dir_v: Vec<Complex64>,
    depth: f64,
}

fn normalize_dir(space: SpaceSignature, mut e: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = space_norm_of(space, e.clone());
    if n < 1e-12 {
        return None;
    }
    for x in e.iter_mut() {
        *x /= n;
    }
    Some(e)
}

fn rand_dir(space: SpaceSignature, rng: &mut ChaCha20Rng) -> Vec<Complex64> {
    let dim = space.dim();
    let e: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
        .collect();
    normalize_dir(space, e).unwrap_or_else(|| {
        let mut e = vec![ZERO; dim];
        e[0] = ONE;
        e
    })
}

/// Structured starts that carry the mass-splitting witnesses of non-smooth
/// norms (pairs of coordinates with opposite-sign directions).
fn structured_starts(space: SpaceSignature) -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
    let dim = space.dim();
    let mut starts = Vec::new();
    for a in 0..dim.min(4) {
        for b in (a + 1)..dim.min(4) {
            let mut z = vec![ZERO; dim];
            let mut v = vec![ZERO; dim];
            z[a] = ONE;
            z[b] = ONE;
            v[a] = ONE;
            v[b] = -ONE;
            if let (Some(z), Some(v)) = (
                normalize_dir(space, z.clone()),
                normalize_dir(space, v.clone()),
            ) {
                starts.push((z, v));
            }
        }
        let mut z = vec![ZERO; dim];
        z[a] = ONE;
        let mut v = vec![ZERO; dim];
        v[(a + 1) % dim] = ONE;
        if let (Some(z), Some(v)) = (normalize_dir(space, z), normalize_dir(space, v)) {
            starts.push((z, v));
        }
    }
    starts
}

fn modulus_ascent(
    space: SpaceSignature,
    epsilon: f64,
    cap: f64,
    fixed_norm: Option<f64>,
    trials: usize,
    seed: u64,
    extra_starts: &[ShellPoint],
) -> ConvexityModulus {
    // a point of the shell has norm 1 - depth with depth in (0, epsilon]
    // (or the fixed norm for the Globevnik variant)
    let eval = |pt: &ShellPoint| -> f64 {
        let norm = fixed_norm.unwrap_or(1.0 - pt.depth);
        let z: Vec<Complex64> = pt.dir_z.iter().map(|e| e * norm).collect();
        inner_radius(space, &z, &pt.dir_v, cap)
    };
    let starts: Vec<ShellPoint> = {
        let mut s: Vec<ShellPoint> = Vec::new();
        for (z, v) in structured_starts(space) {
            s.push(ShellPoint {
                dir_z: z,
                dir_v: v,
                depth: epsilon,
            });
        }
        for pt in extra_starts {
            s.push(ShellPoint {
                dir_z: pt.dir_z.clone(),
                dir_v: pt.dir_v.clone(),
                depth: pt.depth.clamp(1e-12, epsilon),
            });
        }
        let mut k = 0u64;
        while s.len() < trials.max(4) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xC0FFEE ^ k);
            k += 1;
            s.push(ShellPoint {
                dir_z: rand_dir(space, &mut rng),
                dir_v: rand_dir(space, &mut rng),
                depth: epsilon,
            });
        }
        s
    };
    let results: Vec<(f64, ShellPoint)> = crate::threads::pool().install(|| {
        starts
            .into_par_iter()
            .enumerate()
            .map(|(idx, mut pt)| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xFACE ^ idx as u64);
                let mut val = eval(&pt);
                let mut sigma = 0.35;
                for _ in 0..28 {
                    if sigma < 1e-5 {
                        break;
                    }
                    let mut improved = false;
                    for _ in 0..4 {
                        let dz: Vec<Complex64> = pt
                            .dir_z
                            .iter()
                            .map(|e| {
                                e + Complex64::new(
                                    (rng.gen::<f64>() * 2.0 - 1.0) * sigma,
                                    (rng.gen::<f64>() * 2.0 - 1.0) * sigma,
                                )
                            })
                            .collect();
                        let dv: Vec<Complex64> = pt
                            .dir_v
                            .iter()
                            .map(|e| {
                                e + Complex64::new(
                                    (rng.gen::<f64>() * 2.0 - 1.0) * sigma,
                                    (rng.gen::<f64>() * 2.0 - 1.0) * sigma,
                                )
                            })
                            .collect();
                        let depth = if fixed_norm.is_some() {
                            pt.depth
                        } else {
                            (pt.depth * (1.0 + (rng.gen::<f64>() - 0.5) * sigma))
                                .clamp(epsilon * 1e-3, epsilon)
                        };
                        let (Some(z), Some(v)) =
                            (normalize_dir(space, dz), normalize_dir(space, dv))
                        else {
                            continue;
                        };
                        let cand = ShellPoint {
                            dir_z: z,
                            dir_v: v,
                            depth,
                        };
                        let cv = eval(&cand);
                        if cv > val {
                            val = cv;
                            pt = cand;
                            improved = true;
                        }
                    }
                    if !improved {
                        sigma *= 0.6;
                    }
                }
                (val, pt)
            })
            .collect()
    });
    let (best_val, best_pt) = results
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one start");
    let norm = fixed_norm.unwrap_or(1.0 - best_pt.depth);
    let z = ComplexVector::new(
        space,
        best_pt.dir_z.iter().map(|e| e * norm).collect(),
    )
    .expect("dimension preserved");
    let v = ComplexVector::new(space, best_pt.dir_v.clone()).expect("dimension preserved");
    ConvexityModulus {
        epsilon,
        delta_value: best_val,
        witness: ModulusWitness {
            z,
            v,
            r: best_val,
        },
    }
}

/// Modulus of complex convexity
/// `delta(eps) = sup { r : |z| >= 1 - eps, z + r v (closed disc) inside }`
/// over unit directions `v`, by multistart ascent with exact inner radii.
pub fn convexity_modulus(
    space: SpaceSignature,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<ConvexityModulus> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("epsilon {epsilon} must be in (0, 1)")));
    }
    Ok(modulus_ascent(space, epsilon, 1.0, None, trials, seed, &[]))
}

/// One row of a sandwich computation: the modulus at `eps` and `eps/2`
/// together with the companion quantity
/// `omega(eps) = sup { |y| : |x| = 1, |x + zeta y| <= 1 + eps on the disc }`.
/// Witness transfer between the three ascents enforces the known sandwich
/// `delta(eps/2) <= omega(eps) <= 2 delta(eps)` numerically as well.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    pub epsilon: f64,
    pub delta: f64,
    pub delta_half: f64,
    pub omega: f64,
}

pub fn modulus_sandwich(
    space: SpaceSignature,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<SandwichRow> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!("epsilon {epsilon} must be in (0, 1)")));
    }
    let half = modulus_ascent(space, epsilon / 2.0, 1.0, None, trials, seed, &[]);
    // delta(eps/2)-witness (z, v): x = z/|z| keeps |x + zeta r v| <= 1 + eps
    let omega_start = ShellPoint {
        dir_z: normalize_dir(space, half.witness.z.entries().to_vec())
            .unwrap_or_else(|| half.witness.v.entries().to_vec()),
        dir_v: half.witness.v.entries().to_vec(),
        depth: 0.0,
    };
    let omega = modulus_ascent(
        space,
        epsilon,
        1.0 + epsilon,
        Some(1.0),
        trials,
        seed ^ 0x0EA,
        std::slice::from_ref(&omega_start),
    );
    // omega-witness (x, v): z = x/(1+eps) sits in the shell with the scaled radius
    let delta_start = ShellPoint {
        dir_z: omega.witness.z.entries().to_vec(),
        dir_v: omega.witness.v.entries().to_vec(),
        depth: epsilon / (1.0 + epsilon),
    };
    let delta = modulus_ascent(
        space,
        epsilon,
        1.0,
        None,
        trials,
        seed ^ 0xDE1,
        std::slice::from_ref(&delta_start),
    );
    Ok(SandwichRow {
        epsilon,
        delta: delta.delta_value,
        delta_half: half.delta_value,
        omega: omega.delta_value,
    })
}

/// Sweep rows for CSV output: epsilon, delta, omega, running log-log slope.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub delta: f64,
    pub omega_c: f64,
    pub slope_so_far: f64,
}

pub fn modulus_sweep(
    space: SpaceSignature,
    epsilons: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows: Vec<SweepRow> = Vec::with_capacity(epsilons.len());
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, &eps) in epsilons.iter().enumerate() {
        let sand = modulus_sandwich(space, eps, trials, seed ^ (i as u64) << 16)?;
        pts.push((eps.ln(), sand.delta.ln()));
        let slope = if pts.len() < 2 {
            f64::NAN
        } else {
            let n = pts.len() as f64;
            let sx: f64 = pts.iter().map(|(a, _)| a).sum();
            let sy: f64 = pts.iter().map(|(_, b)| b).sum();
            let sxx: f64 = pts.iter().map(|(a, _)| a * a).sum();
            let sxy: f64 = pts.iter().map(|(a, b)| a * b).sum();
            (n * sxy - sx * sy) / (n * sxx - sx * sx)
        };
        rows.push(SweepRow {
            epsilon: eps,
            delta: sand.delta,
            omega_c: sand.omega,
            slope_so_far: slope,
        });
    }
    Ok(rows)
}

/// Lower bound `|v| / (2 delta(eps))` for the infinitesimal metric, with
/// `eps` the norm distance of `z` to the boundary.
pub fn infinitesimal_lower(
    z: &ComplexVector,
    v: &ComplexVector,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::domain("base point must lie in the open ball"));
    }
    if v.norm() == 0.0 {
        return Err(Error::contract("direction must be nonzero"));
    }
    let eps = 1.0 - z.norm();
    let modulus = modulus_ascent(z.space(), eps, 1.0, None, trials, seed, &[]);
    Ok(v.norm() / (2.0 * modulus.delta_value))
}

// --- holomorphic sectional curvature ------------------------------------------------

#[derive(Debug, Clone)]
pub struct CurvatureConfig {
    /// displacement used by the infinitesimal solve (halved for Richardson)
    pub step: f64,
    /// radius of the certification circle
    pub check_radius: f64,
    /// relative gap allowed between the certified bracket sides
    pub bracket_tol: f64,
    pub solve: SolveConfig,
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        CurvatureConfig {
            step: 1e-2,
            check_radius: 0.3,
            bracket_tol: 1e-6,
            solve: SolveConfig::default(),
        }
    }
}

/// Holomorphic sectional curvature of the Kobayashi infinitesimal metric at
/// `x` in direction `v`.
///
/// A geodesic `f` through `x` tangent to `v` is produced by an infinitesimal
/// endpoint solve (Richardson-consistent in the step). Along a geodesic the
/// metric is the Poincaré density, `k(f(z), f'(z)) = 1/(1 - |z|^2)`; that
/// closed form is only trusted after a bracket check at nine sample points:
/// the left-inverse functional gives a certified lower bound and the
/// reparametrized disc `f(m_z(.))` the matching upper bound. The curvature
/// is then the circle-mean Laplacian of `log k^2` against `-2 k^2(0)`.
pub fn curvature(x: &ComplexVector, v: &ComplexVector, config: &CurvatureConfig) -> Result<f64> {
    let p = x
        .space()
        .lp_exponent()
        .ok_or_else(|| Error::contract("curvature needs an lp signature"))?;
    if p.is_infinite() {
        return Err(Error::contract(
            "the max-norm kink makes the numerical Laplacian unreliable on the polydisc",
        ));
    }
    if x.norm() >= 1.0 {
        return Err(Error::domain("base point must lie in the open ball"));
    }
    let vn = v.norm();
    if vn == 0.0 {
        return Err(Error::contract("direction must be nonzero"));
    }
    let mut step = config.step;
    while x.norm() + step >= 0.98 {
        step *= 0.5;
    }
    let displaced = |tau: f64| -> Result<ComplexVector> {
        ComplexVector::new(
            x.space(),
            x.entries()
                .iter()
                .zip(v.entries())
                .map(|(a, b)| a + b * (tau / vn))
                .collect(),
        )
    };
    let sol_full = solve(x, &displaced(step)?, &config.solve)?;
    let f_full = atanh_clamped(sol_full.s) / step;
    // continuation: the halved-step geodesic sits next to the full-step one
    let y_half = displaced(step / 2.0)?;
    let sol = crate::solver::refine_from(
        x,
        &y_half,
        &sol_full.params,
        sol_full.s * 0.5,
        &config.solve,
    )
    .or_else(|_| solve(x, &y_half, &config.solve))?;
    let f_half = atanh_clamped(sol.s) / (step / 2.0);
    if (f_full - f_half).abs() > 0.05 * f_half.abs().max(1e-12) {
        return Err(Error::Precision(format!(
            "infinitesimal solve not Richardson-consistent: {f_full} vs {f_half}"
        )));
    }

    // certify the Poincaré form of the metric along the geodesic
    let li = LeftInverse::new(&sol.params);
    let mut centre_metric = 1.0;
    for k in 0..9 {
        let z_k = if k == 0 {
            ZERO
        } else {
            Complex64::from_polar(config.check_radius, TAU * (k - 1) as f64 / 8.0)
        };
        let (w, dw) = sol.params.eval_with_derivative(z_k)?;
        let upper = 1.0 / (1.0 - z_k.norm_sqr());
        let (fz, dfz) = li.value_and_derivative(&w, &dw)?;
        let lower = dfz.norm() / (1.0 - fz.norm_sqr());
        let gap = upper - lower;
        if gap.abs() > config.bracket_tol * upper {
            return Err(Error::Precision(format!(
                "metric bracket did not close at sample {k}: gap {gap:.3e}"
            )));
        }
        if k == 0 {
            centre_metric = 0.5 * (lower + upper);
        }
    }

    let lap = laplacian_richardson(|z| -2.0 * (1.0 - z.norm_sqr()).ln(), ZERO)?;
    Ok(lap / (-2.0 * centre_metric * centre_metric))
}
