//! Endpoint solver: joins two interior points of an `l^p_n` ball by a
//! normalized complex geodesic of the parametric family.
//!
//! The unknowns are `(gamma, {alpha_j}, {c_j}, s)` for the active (not
//! identically zero) coordinates; with `n` active coordinates this is
//! `4n + 3` reals against the `4n + 3` equations
//!
//! * `phi(0) = x` and `phi(s) = y` (4n),
//! * the scalar constraint `sum |c_j|^p (1+|alpha_j|^2) = 1+|gamma|^2`,
//! * the vector constraint `sum |c_j|^p alpha_j = gamma` (2).
//!
//! Disc-valued unknowns run through the smooth chart `w = u / sqrt(1+|u|^2)`
//! and `s = tanh(softplus(t))`, so Newton iterates cannot leave their
//! domains. The square system is solved by Levenberg-Marquardt with an
//! analytic Jacobian (Wirtinger derivatives chained through the charts),
//! then polished by plain Newton steps.
//!
//! The Blaschke exponent bits `beta_j` stay fixed during each run. A
//! coordinate whose extremal component has no zero in the closed disc needs
//! `beta_j = 0`; with `beta_j = 1` its Blaschke zero drifts to the boundary
//! and the run stalls. The adaptive strategy seeds the bits from the affine
//! interpolant through the endpoints and flips bits whose zero saturates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::disc::atanh_clamped;
use crate::error::{Error, Result};
use crate::geodesic::{branch_pow, DirectSumGeodesicParams, GeodesicParams};
use crate::space::{ComplexVector, SpaceSignature};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// How the Blaschke exponent bits are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaStrategy {
    /// Fix every bit to 1.
    AllOnes,
    /// Try all `2^n` patterns (active coordinates capped at 12), nearest to
    /// the heuristic pattern first.
    Enumerate,
    /// Seed bits from the affine interpolant and flip bits whose Blaschke
    /// zero drifts to the boundary. Coincides with `AllOnes` whenever the
    /// all-ones system is solvable.
    Adaptive,
}

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub multistarts: usize,
    pub beta_strategy: BetaStrategy,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tolerance: 1e-10,
            max_iterations: 200,
            multistarts: 16,
            beta_strategy: BetaStrategy::Adaptive,
            seed: 0,
        }
    }
}

/// A normalized complex geodesic joining `x` and `y`: `phi(0) = x`,
/// `phi(s) = y` with `s = tanh` of the Caratheodory distance.
#[derive(Debug, Clone)]
pub struct NormalizedGeodesic {
    pub params: GeodesicParams,
    pub s: f64,
    pub endpoints: (ComplexVector, ComplexVector),
    pub residual_norm: f64,
}

impl NormalizedGeodesic {
    pub fn distance(&self) -> f64 {
        atanh_clamped(self.s)
    }
}

impl Serialize for NormalizedGeodesic {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.params).map_err(serde::ser::Error::custom)?;
        let obj = v.as_object_mut().expect("params serialize to an object");
        obj.insert("s".into(), serde_json::json!(self.s));
        obj.insert("distance".into(), serde_json::json!(self.distance()));
        obj.insert("residual".into(), serde_json::json!(self.residual_norm));
        v.serialize(ser)
    }
}

// --- charts ---------------------------------------------------------------

/// Open-disc chart `w = u / sqrt(1 + |u|^2)` with its Wirtinger derivatives.
fn disc_chart(u: Complex64) -> (Complex64, Complex64, Complex64) {
    let m2 = 1.0 + u.norm_sqr();
    let m = m2.sqrt();
    let m3 = m2 * m;
    let w = u / m;
    let wu = Complex64::new(1.0 / m - u.norm_sqr() / (2.0 * m3), 0.0);
    let wub = -u * u / (2.0 * m3);
    (w, wu, wub)
}

fn disc_chart_inverse(w: Complex64) -> Complex64 {
    let n = w.norm_sqr().min(1.0 - 1e-12);
    w / (1.0 - n).sqrt()
}

fn softplus(t: f64) -> f64 {
    if t > 30.0 {
        t
    } else if t < -30.0 {
        t.exp()
    } else {
        t.exp().ln_1p()
    }
}

/// `s = tanh(softplus(t))`, a smooth bijection from the line onto (0, 1).
fn s_chart(t: f64) -> (f64, f64) {
    let s = softplus(t).tanh();
    let sigma = 1.0 / (1.0 + (-t).exp());
    (s, (1.0 - s * s) * sigma)
}

fn s_chart_inverse(s: f64) -> f64 {
    let sp = atanh_clamped(s.clamp(1e-12, 1.0 - 1e-12));
    sp.exp_m1().max(1e-300).ln()
}

// --- coordinate derivatives ------------------------------------------------

struct CoordDerivs {
    value: Complex64,
    d_c: Complex64,
    d_alpha: Complex64,
    d_alphabar: Complex64,
    d_gammabar: Complex64,
    d_zeta: Complex64,
}

/// Value and Wirtinger partials of one family coordinate
/// `phi = c B^beta ((1 - conj(a) z)/(1 - conj(g) z))^e`.
fn coord_partials(
    c: Complex64,
    alpha: Complex64,
    beta: u8,
    gamma: Complex64,
    e: f64,
    zeta: Complex64,
) -> CoordDerivs {
    let num = ONE - alpha.conj() * zeta;
    let den = ONE - gamma.conj() * zeta;
    let w = num / den;
    let pw = branch_pow(w, e);
    let dw_dzeta = (gamma.conj() - alpha.conj()) / (den * den);
    if beta == 1 {
        let b = (zeta - alpha) / num;
        let db_dzeta = (1.0 - alpha.norm_sqr()) / (num * num);
        CoordDerivs {
            value: c * b * pw,
            d_c: b * pw,
            d_alpha: -c * pw / num,
            d_alphabar: c * (zeta * (zeta - alpha) * pw / (num * num) - b * e * pw * zeta / num),
            d_gammabar: c * b * e * pw * zeta / den,
            d_zeta: c * (db_dzeta * pw + b * e * (pw / w) * dw_dzeta),
        }
    } else {
        CoordDerivs {
            value: c * pw,
            d_c: pw,
            d_alpha: ZERO,
            d_alphabar: -c * e * pw * zeta / num,
            d_gammabar: c * e * pw * zeta / den,
            d_zeta: c * e * (pw / w) * dw_dzeta,
        }
    }
}

/// Directional derivative of a map through a charted complex parameter: the
/// chart coordinate moves by `e` (1 or i), the parameter by
/// `dw = wu e + wub conj(e)`.
fn chart_dir(
    fw: Complex64,
    fwb: Complex64,
    wu: Complex64,
    wub: Complex64,
    e: Complex64,
) -> Complex64 {
    let dw = wu * e + wub * e.conj();
    fw * dw + fwb * dw.conj()
}

// --- the square system ------------------------------------------------------

struct Problem {
    p: f64,
    x: Vec<Complex64>,
    y: Vec<Complex64>,
}

struct Decoded {
    gamma: Complex64,
    gamma_chart: (Complex64, Complex64),
    alpha: Vec<Complex64>,
    alpha_chart: Vec<(Complex64, Complex64)>,
    c: Vec<Complex64>,
    s: f64,
    ds_dt: f64,
}

impl Problem {
    fn n(&self) -> usize {
        self.x.len()
    }

    fn dim(&self) -> usize {
        4 * self.n() + 3
    }

    fn decode(&self, u: &DVector<f64>) -> Decoded {
        let n = self.n();
        let (gamma, gu, gub) = disc_chart(Complex64::new(u[0], u[1]));
        let mut alpha = Vec::with_capacity(n);
        let mut alpha_chart = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        for j in 0..n {
            let (a, au, aub) = disc_chart(Complex64::new(u[2 + 2 * j], u[3 + 2 * j]));
            alpha.push(a);
            alpha_chart.push((au, aub));
            c.push(Complex64::new(u[2 + 2 * n + 2 * j], u[3 + 2 * n + 2 * j]));
        }
        let (s, ds_dt) = s_chart(u[4 * n + 2]);
        Decoded {
            gamma,
            gamma_chart: (gu, gub),
            alpha,
            alpha_chart,
            c,
            s,
            ds_dt,
        }
    }

    fn encode(
        &self,
        gamma: Complex64,
        alpha: &[Complex64],
        c: &[Complex64],
        s: f64,
    ) -> DVector<f64> {
        let n = self.n();
        let mut u = DVector::zeros(self.dim());
        let ug = disc_chart_inverse(gamma);
        u[0] = ug.re;
        u[1] = ug.im;
        for j in 0..n {
            let ua = disc_chart_inverse(alpha[j]);
            u[2 + 2 * j] = ua.re;
            u[3 + 2 * j] = ua.im;
            u[2 + 2 * n + 2 * j] = c[j].re;
            u[3 + 2 * n + 2 * j] = c[j].im;
        }
        u[4 * n + 2] = s_chart_inverse(s);
        u
    }

    fn residual(&self, beta: &[u8], u: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let d = self.decode(u);
        let e = 2.0 / self.p;
        let mut r = DVector::zeros(self.dim());
        let mut scalar = -(1.0 + d.gamma.norm_sqr());
        let mut vector = -d.gamma;
        for j in 0..n {
            let at0 = coord_partials(d.c[j], d.alpha[j], beta[j], d.gamma, e, ZERO);
            let ats = coord_partials(
                d.c[j],
                d.alpha[j],
                beta[j],
                d.gamma,
                e,
                Complex64::new(d.s, 0.0),
            );
            r[2 * j] = at0.value.re - self.x[j].re;
            r[2 * j + 1] = at0.value.im - self.x[j].im;
            r[2 * n + 2 * j] = ats.value.re - self.y[j].re;
            r[2 * n + 2 * j + 1] = ats.value.im - self.y[j].im;
            let t = d.c[j].norm().powf(self.p);
            scalar += t * (1.0 + d.alpha[j].norm_sqr());
            vector += Complex64::new(t, 0.0) * d.alpha[j];
        }
        r[4 * n] = scalar;
        r[4 * n + 1] = vector.re;
        r[4 * n + 2] = vector.im;
        r
    }

    fn jacobian(&self, beta: &[u8], u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let d = self.decode(u);
        let e = 2.0 / self.p;
        let dim = self.dim();
        let mut jac = DMatrix::zeros(dim, dim);
        let dirs = [ONE, Complex64::new(0.0, 1.0)];
        let (gu, gub) = d.gamma_chart;
        let s_c = Complex64::new(d.s, 0.0);

        for j in 0..n {
            let (au, aub) = d.alpha_chart[j];
            for (zi, zeta) in [(0usize, ZERO), (1usize, s_c)] {
                let cd = coord_partials(d.c[j], d.alpha[j], beta[j], d.gamma, e, zeta);
                let row = 2 * n * zi + 2 * j;
                for (k, dir) in dirs.iter().enumerate() {
                    let dg = chart_dir(ZERO, cd.d_gammabar, gu, gub, *dir);
                    jac[(row, k)] = dg.re;
                    jac[(row + 1, k)] = dg.im;
                    let da = chart_dir(cd.d_alpha, cd.d_alphabar, au, aub, *dir);
                    jac[(row, 2 + 2 * j + k)] = da.re;
                    jac[(row + 1, 2 + 2 * j + k)] = da.im;
                    let dc = cd.d_c * dir;
                    jac[(row, 2 + 2 * n + 2 * j + k)] = dc.re;
                    jac[(row + 1, 2 + 2 * n + 2 * j + k)] = dc.im;
                }
                if zi == 1 {
                    let ds = cd.d_zeta * d.ds_dt;
                    jac[(row, 4 * n + 2)] = ds.re;
                    jac[(row + 1, 4 * n + 2)] = ds.im;
                }
            }
        }

        // constraint rows
        let rs = 4 * n;
        for (k, dir) in dirs.iter().enumerate() {
            let dgamma = gu * dir + gub * dir.conj();
            jac[(rs, k)] = -2.0 * (d.gamma.conj() * dgamma).re;
            jac[(rs + 1, k)] = -dgamma.re;
            jac[(rs + 2, k)] = -dgamma.im;
        }
        for j in 0..n {
            let t = d.c[j].norm().powf(self.p);
            let (au, aub) = d.alpha_chart[j];
            for (k, dir) in dirs.iter().enumerate() {
                let dalpha = au * dir + aub * dir.conj();
                jac[(rs, 2 + 2 * j + k)] = t * 2.0 * (d.alpha[j].conj() * dalpha).re;
                let gv = Complex64::new(t, 0.0) * dalpha;
                jac[(rs + 1, 2 + 2 * j + k)] = gv.re;
                jac[(rs + 2, 2 + 2 * j + k)] = gv.im;
            }
            // d|c|^p/d(c_re, c_im) = p |c|^{p-2} (c_re, c_im)
            let cm = d.c[j].norm();
            let dt = if cm == 0.0 {
                [0.0, 0.0]
            } else {
                let f = self.p * cm.powf(self.p - 2.0);
                [f * d.c[j].re, f * d.c[j].im]
            };
            for (k, dt_k) in dt.iter().enumerate() {
                let col = 2 + 2 * n + 2 * j + k;
                jac[(rs, col)] = dt_k * (1.0 + d.alpha[j].norm_sqr());
                let gv = Complex64::new(*dt_k, 0.0) * d.alpha[j];
                jac[(rs + 1, col)] = gv.re;
                jac[(rs + 2, col)] = gv.im;
            }
        }
        jac
    }
}

// --- Levenberg-Marquardt -----------------------------------------------------

struct RunResult {
    u: DVector<f64>,
    norm: f64,
    converged: bool,
}

fn lm_iterate(
    residual: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    jacobian: &dyn Fn(&DVector<f64>) -> DMatrix<f64>,
    u0: DVector<f64>,
    tol: f64,
    max_iterations: usize,
) -> RunResult {
    let mut u = u0;
    let mut r = residual(&u);
    let mut f = r.norm();
    let mut lambda = 1e-3;
    let mut iter = 0;
    while iter < max_iterations && f >= tol {
        iter += 1;
        let jac = jacobian(&u);
        let a = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let mut accepted = false;
        for _ in 0..12 {
            let mut m = a.clone();
            for k in 0..m.nrows() {
                m[(k, k)] += lambda * m[(k, k)].max(1e-12);
            }
            let step = m
                .clone()
                .cholesky()
                .map(|ch| ch.solve(&(-&g)))
                .or_else(|| m.lu().solve(&(-&g)));
            let Some(step) = step else {
                lambda *= 4.0;
                continue;
            };
            let u_new = &u + &step;
            let r_new = residual(&u_new);
            let f_new = r_new.norm();
            if f_new.is_finite() && f_new < f {
                u = u_new;
                r = r_new;
                f = f_new;
                lambda = (lambda / 3.0).max(1e-14);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    // Newton polish: with the residual already small, full steps converge
    // quadratically and shave the last few digits.
    if f < 1e-5 {
        for _ in 0..4 {
            if f < 1e-15 {
                break;
            }
            let jac = jacobian(&u);
            let Some(step) = jac.lu().solve(&(-&r)) else {
                break;
            };
            let u_new = &u + &step;
            let r_new = residual(&u_new);
            let f_new = r_new.norm();
            if f_new.is_finite() && f_new < f {
                u = u_new;
                r = r_new;
                f = f_new;
            } else {
                break;
            }
        }
    }
    RunResult {
        u,
        norm: f,
        converged: f < tol,
    }
}

// --- initialization -----------------------------------------------------------

/// Euclidean Mobius-automorphism heuristic for the initial `s`; only ever an
/// initial guess, correctness is forced by the residual system.
fn initial_s(x: &[Complex64], y: &[Complex64]) -> f64 {
    let x2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let y2: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let fallback = {
        let diff: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        diff.clamp(1e-4, 0.9)
    };
    if x2 >= 0.93 || y2 >= 1.0 {
        return fallback;
    }
    if x2 < 1e-24 {
        return y2.sqrt().clamp(1e-4, 0.95);
    }
    let xy: Complex64 = y.iter().zip(x).map(|(b, a)| b * a.conj()).sum();
    let sx = (1.0 - x2).sqrt();
    let denom = ONE - xy;
    let proj = xy / x2;
    let num2: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let pj = proj * a;
            (a - pj - Complex64::new(sx, 0.0) * (b - pj)).norm_sqr()
        })
        .sum();
    let s = num2.sqrt() / denom.norm();
    if s.is_finite() {
        s.clamp(1e-4, 0.95)
    } else {
        fallback
    }
}

/// Heuristic bit pattern and Blaschke zeros from the affine interpolant
/// `l(zeta) = x + (y - x) zeta / s0`: its zero lies at
/// `zeta* = s0 x_j / (x_j - y_j)`; inside the disc it seeds `beta_j = 1`
/// with `alpha_j ~ zeta*`, outside it seeds `beta_j = 0` with
/// `alpha_j ~ 1/conj(zeta*)`.
fn heuristic_pattern(x: &[Complex64], y: &[Complex64], s0: f64) -> (Vec<u8>, Vec<Complex64>) {
    let n = x.len();
    let mut beta = vec![1u8; n];
    let mut alpha = vec![ZERO; n];
    for j in 0..n {
        let diff = x[j] - y[j];
        if diff.norm() < 1e-13 * (1.0 + x[j].norm()) {
            beta[j] = 0;
            alpha[j] = ZERO;
            continue;
        }
        let zstar = Complex64::new(s0, 0.0) * x[j] / diff;
        if zstar.norm() <= 0.95 {
            beta[j] = 1;
            alpha[j] = zstar;
        } else {
            beta[j] = 0;
            alpha[j] = clamp_disc(ONE / zstar.conj(), 0.95);
        }
    }
    (beta, alpha)
}

fn clamp_disc(z: Complex64, max_mod: f64) -> Complex64 {
    let m = z.norm();
    if m > max_mod {
        z * (max_mod / m)
    } else {
        z
    }
}

fn rand_unit(rng: &mut ChaCha20Rng) -> Complex64 {
    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
}

/// Derive `c_j` from whichever endpoint equation is better conditioned.
fn match_c(
    x: Complex64,
    y: Complex64,
    alpha: Complex64,
    beta: u8,
    gamma: Complex64,
    e: f64,
    s: f64,
) -> Complex64 {
    let at0 = if beta == 1 { -alpha } else { ONE };
    if at0.norm() > 0.05 && x.norm() > 1e-12 {
        return x / at0;
    }
    let factor = coord_partials(ONE, alpha, beta, gamma, e, Complex64::new(s, 0.0)).value;
    if factor.norm() > 1e-6 {
        y / factor
    } else {
        y / s
    }
}

fn build_start(
    prob: &Problem,
    beta: &[u8],
    alpha0: &[Complex64],
    s0: f64,
    jitter: f64,
    scatter: bool,
    rng: &mut ChaCha20Rng,
) -> DVector<f64> {
    let n = prob.n();
    let e = 2.0 / prob.p;
    let gamma = clamp_disc(rand_unit(rng) * (0.12 * jitter), 0.9);
    let s = (s0 * (1.0 + 0.25 * jitter * (rng.gen::<f64>() * 2.0 - 1.0))).clamp(0.01, 0.98);
    let mut alpha = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for j in 0..n {
        let a = if scatter {
            clamp_disc(rand_unit(rng) * 0.85, 0.85)
        } else {
            clamp_disc(alpha0[j] + rand_unit(rng) * (0.18 * jitter), 0.93)
        };
        alpha.push(a);
        c.push(match_c(prob.x[j], prob.y[j], a, beta[j], gamma, e, s));
    }
    prob.encode(gamma, &alpha, &c, s)
}

/// Jitter schedule: the first start stays near the plain heuristic (a small
/// seed-dependent nudge keeps independent runs genuinely independent), later
/// starts wander progressively further so hard instances escape wide stall
/// basins.
fn jitter_schedule(start_idx: usize, multistarts: usize) -> f64 {
    if start_idx == 0 {
        0.05
    } else {
        0.35 + 1.3 * start_idx as f64 / multistarts.max(2) as f64
    }
}

// --- public entry points --------------------------------------------------------

fn validate_pair(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    if x.space() != y.space() {
        return Err(Error::contract("endpoints live in different spaces"));
    }
    let p = x
        .space()
        .lp_exponent()
        .ok_or_else(|| Error::contract("endpoint solving needs an lp signature"))?;
    if p.is_infinite() {
        return Err(Error::contract(
            "the polydisc has no endpoint solver; use the polydisc distance formula",
        ));
    }
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::domain("endpoints must lie in the open unit ball"));
    }
    if x.entries() == y.entries() {
        return Err(Error::contract("endpoints must be distinct"));
    }
    Ok(p)
}

/// Join `x` and `y` by a normalized complex geodesic of the family.
pub fn solve(
    x: &ComplexVector,
    y: &ComplexVector,
    config: &SolveConfig,
) -> Result<NormalizedGeodesic> {
    let p = validate_pair(x, y)?;
    let full_n = x.space().dim();
    let active: Vec<usize> = (0..full_n)
        .filter(|&j| x.entries()[j] != ZERO || y.entries()[j] != ZERO)
        .collect();
    let prob = Problem {
        p,
        x: active.iter().map(|&j| x.entries()[j]).collect(),
        y: active.iter().map(|&j| y.entries()[j]).collect(),
    };
    let n = prob.n();
    let s0 = initial_s(&prob.x, &prob.y);
    let (heur_beta, heur_alpha) = heuristic_pattern(&prob.x, &prob.y, s0);

    let mut best: Option<(RunResult, Vec<u8>)> = None;
    let consider = |res: RunResult, beta: &[u8], best: &mut Option<(RunResult, Vec<u8>)>| {
        if best.as_ref().map_or(true, |(b, _)| res.norm < b.norm) {
            *best = Some((res, beta.to_vec()));
        }
    };

    let enumerate_patterns = |best: &mut Option<(RunResult, Vec<u8>)>| -> Result<()> {
        if n > 12 {
            return Err(Error::contract(
                "beta enumeration is limited to 12 active coordinates",
            ));
        }
        let heur_mask: u32 = heur_beta
            .iter()
            .enumerate()
            .map(|(j, b)| (*b as u32) << j)
            .sum();
        let mut patterns: Vec<u32> = (0..(1u32 << n)).collect();
        patterns.sort_by_key(|m| (m ^ heur_mask).count_ones());
        'outer: for mask in patterns {
            let beta: Vec<u8> = (0..n).map(|j| ((mask >> j) & 1) as u8).collect();
            for start_idx in 0..3usize {
                let mut rng = ChaCha20Rng::seed_from_u64(
                    config.seed
                        ^ ((mask as u64) << 8)
                        ^ (start_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                let u0 = build_start(
                    &prob,
                    &beta,
                    &heur_alpha,
                    s0,
                    0.8 * start_idx as f64,
                    false,
                    &mut rng,
                );
                let res = lm_iterate(
                    &|u| prob.residual(&beta, u),
                    &|u| prob.jacobian(&beta, u),
                    u0,
                    config.tolerance,
                    config.max_iterations,
                );
                let done = res.converged;
                consider(res, &beta, best);
                if done {
                    break 'outer;
                }
            }
        }
        Ok(())
    };

    match config.beta_strategy {
        BetaStrategy::AllOnes | BetaStrategy::Adaptive => {
            let adaptive = config.beta_strategy == BetaStrategy::Adaptive;
            for start_idx in 0..config.multistarts.max(1) {
                let mut rng = ChaCha20Rng::seed_from_u64(
                    config.seed ^ (start_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                );
                let jitter = jitter_schedule(start_idx, config.multistarts);
                let base_beta = if adaptive && start_idx % 3 != 2 {
                    heur_beta.clone()
                } else {
                    vec![1u8; n]
                };
                let scatter = adaptive && start_idx % 4 == 3;
                let u0 =
                    build_start(&prob, &base_beta, &heur_alpha, s0, jitter, scatter, &mut rng);
                let mut beta = base_beta;
                let mut res = lm_iterate(
                    &|u| prob.residual(&beta, u),
                    &|u| prob.jacobian(&beta, u),
                    u0,
                    config.tolerance,
                    config.max_iterations,
                );
                if adaptive {
                    // A stalled run signals bits that should be 0: flip every
                    // saturated Blaschke zero, or failing that the largest
                    // one, and re-run warm.
                    for _ in 0..n {
                        if res.converged {
                            break;
                        }
                        let d = prob.decode(&res.u);
                        let mut c_new = d.c.clone();
                        let mut flipped = false;
                        for j in 0..n {
                            if beta[j] == 1 && d.alpha[j].norm() > 0.9 {
                                beta[j] = 0;
                                c_new[j] = d.c[j] * (-d.alpha[j]);
                                flipped = true;
                            }
                        }
                        if !flipped {
                            if let Some(j) = (0..n)
                                .filter(|&j| beta[j] == 1)
                                .max_by(|&a, &b| d.alpha[a].norm().total_cmp(&d.alpha[b].norm()))
                            {
                                beta[j] = 0;
                                c_new[j] = d.c[j] * (-d.alpha[j]);
                                flipped = true;
                            }
                        }
                        if !flipped {
                            break;
                        }
                        let warm = prob.encode(d.gamma, &d.alpha, &c_new, d.s);
                        res = lm_iterate(
                            &|u| prob.residual(&beta, u),
                            &|u| prob.jacobian(&beta, u),
                            warm,
                            config.tolerance,
                            config.max_iterations,
                        );
                    }
                }
                let done = res.converged;
                consider(res, &beta, &mut best);
                if done {
                    break;
                }
            }
            // last resort for adaptive: walk every bit pattern
            if adaptive && n <= 12 && !best.as_ref().is_some_and(|(r, _)| r.converged) {
                enumerate_patterns(&mut best)?;
            }
        }
        BetaStrategy::Enumerate => enumerate_patterns(&mut best)?,
    }

    let (best, best_beta) = best.expect("at least one start always runs");
    if !best.converged {
        return Err(Error::NonConvergence {
            best_residual: best.norm,
        });
    }
    assemble(x, y, &active, &prob, &best, &best_beta)
}

/// Reassemble a converged run on the full coordinate set (degenerate
/// coordinates carry the canonical `c = 0, alpha = gamma, beta = 0`) and
/// recompute the residual through the public evaluation path.
fn assemble(
    x: &ComplexVector,
    y: &ComplexVector,
    active: &[usize],
    prob: &Problem,
    best: &RunResult,
    best_beta: &[u8],
) -> Result<NormalizedGeodesic> {
    let full_n = x.space().dim();
    let d = prob.decode(&best.u);
    let mut alpha = vec![d.gamma; full_n];
    let mut beta_full = vec![0u8; full_n];
    let mut c = vec![ZERO; full_n];
    for (k, &j) in active.iter().enumerate() {
        alpha[j] = d.alpha[k];
        beta_full[j] = best_beta[k];
        c[j] = d.c[k];
    }
    let mut params = GeodesicParams::new(x.space(), d.gamma, alpha, beta_full, c)?;
    params.canonicalize();

    let phi0 = params.eval(ZERO)?;
    let phis = params.eval(Complex64::new(d.s, 0.0))?;
    let cres = params.constraint_residuals();
    let mut rsq = cres.scalar * cres.scalar + cres.vector.norm_sqr();
    for j in 0..full_n {
        rsq += (phi0.entries()[j] - x.entries()[j]).norm_sqr();
        rsq += (phis.entries()[j] - y.entries()[j]).norm_sqr();
    }
    Ok(NormalizedGeodesic {
        params,
        s: d.s,
        endpoints: (x.clone(), y.clone()),
        residual_norm: rsq.sqrt(),
    })
}

/// Continuation entry point: run the damped Newton iteration from a known
/// nearby solution instead of cold heuristics. Used where endpoints move a
/// little (the halved-step solves of the curvature estimator).
pub(crate) fn refine_from(
    x: &ComplexVector,
    y: &ComplexVector,
    init: &GeodesicParams,
    s_init: f64,
    config: &SolveConfig,
) -> Result<NormalizedGeodesic> {
    let p = validate_pair(x, y)?;
    let full_n = x.space().dim();
    let active: Vec<usize> = (0..full_n)
        .filter(|&j| x.entries()[j] != ZERO || y.entries()[j] != ZERO)
        .collect();
    let prob = Problem {
        p,
        x: active.iter().map(|&j| x.entries()[j]).collect(),
        y: active.iter().map(|&j| y.entries()[j]).collect(),
    };
    let s = s_init.clamp(1e-8, 1.0 - 1e-9);
    let beta: Vec<u8> = active.iter().map(|&j| init.beta[j]).collect();
    let alpha: Vec<Complex64> = active
        .iter()
        .map(|&j| clamp_disc(init.alpha[j], 1.0 - 1e-9))
        .collect();
    let c: Vec<Complex64> = active
        .iter()
        .enumerate()
        .map(|(k, &j)| {
            if init.c[j] == ZERO {
                match_c(prob.x[k], prob.y[k], alpha[k], beta[k], init.gamma, 2.0 / p, s)
            } else {
                init.c[j]
            }
        })
        .collect();
    let u0 = prob.encode(init.gamma, &alpha, &c, s);
    let res = lm_iterate(
        &|u| prob.residual(&beta, u),
        &|u| prob.jacobian(&beta, u),
        u0,
        config.tolerance,
        config.max_iterations,
    );
    if !res.converged {
        return Err(Error::NonConvergence {
            best_residual: res.norm,
        });
    }
    assemble(x, y, &active, &prob, &res, &beta)
}

/// Caratheodory (= Kobayashi) distance `atanh(s)` via the normalized geodesic.
pub fn distance(x: &ComplexVector, y: &ComplexVector, config: &SolveConfig) -> Result<f64> {
    Ok(solve(x, y, config)?.distance())
}

/// Agreement report of repeated independent multistart solves.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub runs: usize,
    pub converged: usize,
    /// max over converged run pairs of the sup over a 64-point boundary grid
    /// of the norm difference of the produced maps
    pub max_map_discrepancy: f64,
    /// false when some run failed to converge (partial report)
    pub complete: bool,
}

pub fn uniqueness_probe(
    x: &ComplexVector,
    y: &ComplexVector,
    runs: usize,
    config: &SolveConfig,
) -> Result<UniquenessReport> {
    validate_pair(x, y)?;
    let solutions: Vec<Option<NormalizedGeodesic>> = crate::threads::pool().install(|| {
        (0..runs)
            .into_par_iter()
            .map(|i| {
                let cfg = SolveConfig {
                    seed: config
                        .seed
                        .wrapping_add((i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)),
                    ..config.clone()
                };
                solve(x, y, &cfg).ok()
            })
            .collect()
    });
    let converged: Vec<&NormalizedGeodesic> = solutions.iter().flatten().collect();
    let grid: Vec<Complex64> = (0..64)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0))
        .collect();
    let mut max_disc: f64 = 0.0;
    for a in 0..converged.len() {
        for b in (a + 1)..converged.len() {
            for zeta in &grid {
                let va = converged[a].params.eval(*zeta)?;
                let vb = converged[b].params.eval(*zeta)?;
                let diff = ComplexVector::new(
                    va.space(),
                    va.entries()
                        .iter()
                        .zip(vb.entries())
                        .map(|(p, q)| p - q)
                        .collect(),
                )?;
                max_disc = max_disc.max(diff.norm());
            }
        }
    }
    Ok(UniquenessReport {
        runs,
        converged: converged.len(),
        max_map_discrepancy: max_disc,
        complete: converged.len() == runs,
    })
}

// --- direct sums (experimental) ---------------------------------------------
//
// Same square-system idea for the two-block direct-sum family, with the block
// relations as extra residual rows and a finite-difference Jacobian. The
// family is known to consist of geodesics, but no endpoint-existence theorem
// backs the search, hence the experimental status.

/// Solution of the experimental direct-sum endpoint solve.
#[derive(Debug, Clone)]
pub struct DirectSumSolution {
    pub params: DirectSumGeodesicParams,
    pub s: f64,
    pub residual_norm: f64,
}

impl DirectSumSolution {
    pub fn distance(&self) -> f64 {
        atanh_clamped(self.s)
    }
}

struct DsProblem {
    p1: f64,
    n1: usize,
    p2: f64,
    r: f64,
    x: Vec<Complex64>,
    y: Vec<Complex64>,
}

impl DsProblem {
    fn n(&self) -> usize {
        self.x.len()
    }

    fn dim(&self) -> usize {
        4 * self.n() + 7
    }

    fn block_p(&self, j: usize) -> f64 {
        if j < self.n1 {
            self.p1
        } else {
            self.p2
        }
    }

    fn decode(
        &self,
        u: &DVector<f64>,
    ) -> (Complex64, [Complex64; 2], Vec<Complex64>, Vec<Complex64>, f64) {
        let n = self.n();
        let (gamma, _, _) = disc_chart(Complex64::new(u[0], u[1]));
        let (g1, _, _) = disc_chart(Complex64::new(u[2], u[3]));
        let (g2, _, _) = disc_chart(Complex64::new(u[4], u[5]));
        let mut alpha = Vec::with_capacity(n);
        let mut c = Vec::with_capacity(n);
        for j in 0..n {
            let (a, _, _) = disc_chart(Complex64::new(u[6 + 2 * j], u[7 + 2 * j]));
            alpha.push(a);
            c.push(Complex64::new(u[6 + 2 * n + 2 * j], u[7 + 2 * n + 2 * j]));
        }
        let (s, _) = s_chart(u[4 * n + 6]);
        (gamma, [g1, g2], alpha, c, s)
    }

    fn encode(
        &self,
        gamma: Complex64,
        bg: [Complex64; 2],
        alpha: &[Complex64],
        c: &[Complex64],
        s: f64,
    ) -> DVector<f64> {
        let n = self.n();
        let mut u = DVector::zeros(self.dim());
        let ug = disc_chart_inverse(gamma);
        u[0] = ug.re;
        u[1] = ug.im;
        for (i, g) in bg.iter().enumerate() {
            let ui = disc_chart_inverse(*g);
            u[2 + 2 * i] = ui.re;
            u[3 + 2 * i] = ui.im;
        }
        for j in 0..n {
            let ua = disc_chart_inverse(alpha[j]);
            u[6 + 2 * j] = ua.re;
            u[7 + 2 * j] = ua.im;
            u[6 + 2 * n + 2 * j] = c[j].re;
            u[7 + 2 * n + 2 * j] = c[j].im;
        }
        u[4 * n + 6] = s_chart_inverse(s);
        u
    }

    fn residual(&self, beta: &[u8], u: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let (gamma, bg, alpha, c, s) = self.decode(u);
        let mut r = DVector::zeros(self.dim());
        let er = 2.0 / self.r;
        for (zi, zeta) in [(0usize, ZERO), (1usize, Complex64::new(s, 0.0))] {
            let outer_den = ONE - gamma.conj() * zeta;
            for j in 0..n {
                let gi = bg[usize::from(j >= self.n1)];
                let inner =
                    coord_partials(c[j], alpha[j], beta[j], gi, 2.0 / self.block_p(j), zeta).value;
                let outer = branch_pow((ONE - gi.conj() * zeta) / outer_den, er);
                let target = if zi == 0 { self.x[j] } else { self.y[j] };
                let v = inner * outer - target;
                r[2 * n * zi + 2 * j] = v.re;
                r[2 * n * zi + 2 * j + 1] = v.im;
            }
        }
        let mut outer_scalar = -(1.0 + gamma.norm_sqr());
        let mut outer_vec = -gamma;
        for i in 0..2 {
            let p = if i == 0 { self.p1 } else { self.p2 };
            let range = if i == 0 { 0..self.n1 } else { self.n1..n };
            let mut s_i = 0.0;
            let mut v_i = ZERO;
            for j in range {
                let t = c[j].norm().powf(p);
                s_i += t * (1.0 + alpha[j].norm_sqr());
                v_i += Complex64::new(t, 0.0) * alpha[j];
            }
            let ci_p = s_i / (1.0 + bg[i].norm_sqr());
            let block_res = v_i - bg[i] * ci_p;
            r[4 * n + 2 * i] = block_res.re;
            r[4 * n + 2 * i + 1] = block_res.im;
            let w = ci_p.powf(self.r / p);
            outer_scalar += w * (1.0 + bg[i].norm_sqr());
            outer_vec += Complex64::new(w, 0.0) * bg[i];
        }
        r[4 * n + 4] = outer_scalar;
        r[4 * n + 5] = outer_vec.re;
        r[4 * n + 6] = outer_vec.im;
        r
    }

    fn fd_jacobian(&self, beta: &[u8], u: &DVector<f64>) -> DMatrix<f64> {
        let dim = self.dim();
        let mut jac = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let h = 1e-7 * (1.0 + u[k].abs());
            let mut up = u.clone();
            let mut um = u.clone();
            up[k] += h;
            um[k] -= h;
            let rp = self.residual(beta, &up);
            let rm = self.residual(beta, &um);
            for row in 0..dim {
                jac[(row, k)] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        jac
    }
}

/// Experimental: join two points of a direct-sum ball by a member of the
/// direct-sum family.
pub fn solve_direct_sum(
    x: &ComplexVector,
    y: &ComplexVector,
    config: &SolveConfig,
) -> Result<DirectSumSolution> {
    if x.space() != y.space() {
        return Err(Error::contract("endpoints live in different spaces"));
    }
    let SpaceSignature::DirectSum { p1, n1, p2, n2, r } = x.space() else {
        return Err(Error::contract(
            "direct-sum solving needs a direct-sum signature",
        ));
    };
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::domain("endpoints must lie in the open unit ball"));
    }
    if x.entries() == y.entries() {
        return Err(Error::contract("endpoints must be distinct"));
    }
    for (range, name) in [(0..n1, "first"), (n1..n1 + n2, "second")] {
        if range
            .clone()
            .all(|j| x.entries()[j] == ZERO && y.entries()[j] == ZERO)
        {
            return Err(Error::contract(format!(
                "the {name} block vanishes at both endpoints; use the plain lp solver"
            )));
        }
    }
    let prob = DsProblem {
        p1,
        n1,
        p2,
        r,
        x: x.entries().to_vec(),
        y: y.entries().to_vec(),
    };
    let n = prob.n();
    let s0 = initial_s(&prob.x, &prob.y);
    let (heur_beta, heur_alpha) = heuristic_pattern(&prob.x, &prob.y, s0);

    let mut best: Option<(RunResult, Vec<u8>)> = None;
    for start_idx in 0..config.multistarts.max(1) {
        let mut rng = ChaCha20Rng::seed_from_u64(
            config.seed ^ 0xDEAD ^ (start_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let jitter = if start_idx == 0 { 0.0 } else { 1.0 };
        let mut beta = heur_beta.clone();
        let s_init =
            (s0 * (1.0 + 0.25 * jitter * (rng.gen::<f64>() * 2.0 - 1.0))).clamp(0.01, 0.98);
        let mut alpha0 = Vec::with_capacity(n);
        let mut c0 = Vec::with_capacity(n);
        for j in 0..n {
            let a = clamp_disc(heur_alpha[j] + rand_unit(&mut rng) * (0.18 * jitter), 0.93);
            alpha0.push(a);
            c0.push(match_c(
                prob.x[j],
                prob.y[j],
                a,
                beta[j],
                ZERO,
                2.0 / prob.block_p(j),
                s_init,
            ));
        }
        let u0 = prob.encode(ZERO, [ZERO, ZERO], &alpha0, &c0, s_init);
        let mut res = lm_iterate(
            &|u| prob.residual(&beta, u),
            &|u| prob.fd_jacobian(&beta, u),
            u0,
            config.tolerance,
            config.max_iterations,
        );
        for _ in 0..=n {
            if res.converged {
                break;
            }
            let (gamma, bg, alpha, c, s) = prob.decode(&res.u);
            let mut c_new = c.clone();
            let mut flipped = false;
            for j in 0..n {
                if beta[j] == 1 && alpha[j].norm() > 0.9 {
                    beta[j] = 0;
                    c_new[j] = c[j] * (-alpha[j]);
                    flipped = true;
                }
            }
            if !flipped {
                break;
            }
            let warm = prob.encode(gamma, bg, &alpha, &c_new, s);
            res = lm_iterate(
                &|u| prob.residual(&beta, u),
                &|u| prob.fd_jacobian(&beta, u),
                warm,
                config.tolerance,
                config.max_iterations,
            );
        }
        let done = res.converged;
        if best.as_ref().map_or(true, |(b, _)| res.norm < b.norm) {
            best = Some((res, beta));
        }
        if done {
            break;
        }
    }
    let (best, beta) = best.expect("at least one start always runs");
    if !best.converged {
        return Err(Error::NonConvergence {
            best_residual: best.norm,
        });
    }
    let (gamma, bg, alpha, c, s) = prob.decode(&best.u);
    let params = DirectSumGeodesicParams::new(x.space(), gamma, bg, alpha, beta, c)?;
    Ok(DirectSumSolution {
        params,
        s,
        residual_norm: best.norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lp_vec(p: f64, entries: &[Complex64]) -> ComplexVector {
        ComplexVector::new(
            SpaceSignature::lp(entries.len(), p).unwrap(),
            entries.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn charts_invert() {
        for w in [c(0.0, 0.0), c(0.5, -0.3), c(-0.9, 0.1)] {
            let u = disc_chart_inverse(w);
            let (back, _, _) = disc_chart(u);
            assert_abs_diff_eq!((back - w).norm(), 0.0, epsilon = 1e-12);
        }
        for s in [0.01, 0.3, 0.9, 0.999] {
            let t = s_chart_inverse(s);
            let (back, _) = s_chart(t);
            assert_abs_diff_eq!(back, s, epsilon = 1e-12);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let prob = Problem {
            p: 1.7,
            x: vec![c(0.3, 0.1), c(-0.1, 0.2)],
            y: vec![c(0.1, -0.2), c(0.25, 0.15)],
        };
        let beta = vec![1u8, 0u8];
        let u = prob.encode(
            c(0.1, -0.05),
            &[c(0.2, 0.1), c(-0.3, 0.2)],
            &[c(0.4, -0.1), c(0.2, 0.3)],
            0.4,
        );
        let jac = prob.jacobian(&beta, &u);
        let h = 1e-6;
        for k in 0..prob.dim() {
            let mut up = u.clone();
            let mut um = u.clone();
            up[k] += h;
            um[k] -= h;
            let rp = prob.residual(&beta, &up);
            let rm = prob.residual(&beta, &um);
            for row in 0..prob.dim() {
                let fd = (rp[row] - rm[row]) / (2.0 * h);
                assert_abs_diff_eq!(jac[(row, k)], fd, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn linear_geodesic_through_origin() {
        // x = 0, y = (0.5, 0), p = 3: s = 0.5, linear geodesic
        let x = lp_vec(3.0, &[c(0.0, 0.0), c(0.0, 0.0)]);
        let y = lp_vec(3.0, &[c(0.5, 0.0), c(0.0, 0.0)]);
        let sol = solve(&x, &y, &SolveConfig::default()).unwrap();
        assert_abs_diff_eq!(sol.s, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.distance(), 0.5f64.atanh(), epsilon = 1e-10);
        assert!(sol.residual_norm < 1e-9);
        let v = sol.params.eval(c(0.25, 0.0)).unwrap();
        assert_abs_diff_eq!((v.entries()[0] - c(0.25, 0.0)).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v.entries()[1].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn origin_distance_is_atanh_norm() {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let x = lp_vec(p, &[c(0.0, 0.0), c(0.0, 0.0)]);
            let y = lp_vec(p, &[c(0.3, 0.2), c(-0.1, 0.4)]);
            let d = distance(&x, &y, &SolveConfig::default()).unwrap();
            assert_abs_diff_eq!(d, y.norm().atanh(), epsilon = 1e-8);
        }
    }

    #[test]
    fn hilbert_ball_canonical_pair() {
        // independent value: tanh(distance) = sqrt(7)/4 for this pair
        let x = lp_vec(2.0, &[c(0.5, 0.0), c(0.0, 0.0)]);
        let y = lp_vec(2.0, &[c(0.0, 0.0), c(0.5, 0.0)]);
        let sol = solve(&x, &y, &SolveConfig::default()).unwrap();
        assert_abs_diff_eq!(sol.s, 7f64.sqrt() / 4.0, epsilon = 1e-9);
        assert!(sol.params.is_admissible(1e-9));
    }

    #[test]
    fn near_constant_coordinate_needs_beta_zero() {
        // first coordinate barely moves: its component has no zero in the
        // closed disc, so the all-ones pattern cannot converge
        let x = lp_vec(2.0, &[c(0.8, 0.0), c(0.1, 0.0)]);
        let y = lp_vec(2.0, &[c(0.8, 0.0), c(0.2, 0.0)]);
        let sol = solve(&x, &y, &SolveConfig::default()).unwrap();
        assert!(sol.residual_norm < 1e-9);
        assert_eq!(sol.params.beta[0], 0);
        let cfg = SolveConfig {
            beta_strategy: BetaStrategy::Enumerate,
            ..Default::default()
        };
        let sol2 = solve(&x, &y, &cfg).unwrap();
        assert_abs_diff_eq!(sol.s, sol2.s, epsilon = 1e-8);
    }

    #[test]
    fn distance_is_symmetric() {
        let x = lp_vec(1.5, &[c(0.3, 0.1), c(-0.2, 0.25)]);
        let y = lp_vec(1.5, &[c(-0.1, 0.0), c(0.4, -0.2)]);
        let cfg = SolveConfig::default();
        let d1 = distance(&x, &y, &cfg).unwrap();
        let d2 = distance(&y, &x, &cfg).unwrap();
        assert_abs_diff_eq!(d1, d2, epsilon = 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = lp_vec(2.0, &[c(0.3, 0.0)]);
        assert!(solve(&x, &x, &SolveConfig::default()).is_err());
        let outside = lp_vec(2.0, &[c(1.2, 0.0)]);
        assert!(solve(&x, &outside, &SolveConfig::default()).is_err());
        let poly = lp_vec(f64::INFINITY, &[c(0.1, 0.0)]);
        assert!(solve(&poly, &poly, &SolveConfig::default()).is_err());
    }

    #[test]
    fn degenerate_coordinates_are_canonical() {
        let x = lp_vec(2.0, &[c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let y = lp_vec(2.0, &[c(0.0, 0.2), c(0.0, 0.0), c(0.1, 0.0)]);
        let sol = solve(&x, &y, &SolveConfig::default()).unwrap();
        // middle coordinate vanishes at both endpoints
        assert_eq!(sol.params.c[1], ZERO);
        assert_eq!(sol.params.beta[1], 0);
        assert_abs_diff_eq!(
            (sol.params.alpha[1] - sol.params.gamma).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn uniqueness_probe_agrees() {
        let x = lp_vec(2.0, &[c(0.4, 0.1), c(-0.2, 0.0)]);
        let y = lp_vec(2.0, &[c(-0.1, 0.3), c(0.3, 0.2)]);
        let report = uniqueness_probe(&x, &y, 4, &SolveConfig::default()).unwrap();
        assert!(report.complete);
        assert!(report.max_map_discrepancy < 1e-7, "{report:?}");
    }

    #[test]
    fn direct_sum_solver_joins_endpoints() {
        let sig = SpaceSignature::direct_sum(2.0, 1, 2.0, 1, 2.0).unwrap();
        let x = ComplexVector::new(sig, vec![c(0.3, 0.0), c(0.1, 0.0)]).unwrap();
        let y = ComplexVector::new(sig, vec![c(0.0, 0.2), c(0.3, -0.1)]).unwrap();
        let sol = solve_direct_sum(&x, &y, &SolveConfig::default()).unwrap();
        assert!(sol.residual_norm < 1e-9);
        let at0 = sol.params.eval(ZERO).unwrap();
        let ats = sol.params.eval(c(sol.s, 0.0)).unwrap();
        for j in 0..2 {
            assert_abs_diff_eq!(
                (at0.entries()[j] - x.entries()[j]).norm(),
                0.0,
                epsilon = 1e-8
            );
            assert_abs_diff_eq!(
                (ats.entries()[j] - y.entries()[j]).norm(),
                0.0,
                epsilon = 1e-8
            );
        }
        // r = p1 = p2 = 2 is plain l^2_2: distances must agree
        let xp = lp_vec(2.0, &[c(0.3, 0.0), c(0.1, 0.0)]);
        let yp = lp_vec(2.0, &[c(0.0, 0.2), c(0.3, -0.1)]);
        let d = distance(&xp, &yp, &SolveConfig::default()).unwrap();
        assert_abs_diff_eq!(sol.distance(), d, epsilon = 1e-7);
    }
}
