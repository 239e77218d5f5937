//! Shared test fixtures: the Möbius-automorphism distance oracle for the
//! Euclidean ball, seeded random point generators, and admissible parameter
//! sampling. Everything here is independent of the solver code paths it is
//! used to check.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use holomet_core::{ComplexVector, GeodesicParams, SpaceSignature};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Independent oracle for the Euclidean (`p = 2`) ball: move `x` to the
/// origin by the ball automorphism
/// `m_x(z) = (x - P z - s Q z)/(1 - <z, x>)` (Hermitian inner product,
/// `P` the projection onto `x`, `s = sqrt(1 - |x|^2)`), then the distance is
/// `atanh` of the image norm.
pub fn hilbert_ball_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    let l2 = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let x2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if x2 < 1e-300 {
        return l2(y).atanh();
    }
    let inner_yx: Complex64 = y.iter().zip(x).map(|(b, a)| b * a.conj()).sum();
    let s = (1.0 - x2).sqrt();
    let proj = inner_yx / x2;
    let denom = Complex64::new(1.0, 0.0) - inner_yx;
    let image: Vec<Complex64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let p = proj * a;
            (a - p - Complex64::new(s, 0.0) * (b - p)) / denom
        })
        .collect();
    l2(&image).atanh()
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn rand_complex(rng: &mut ChaCha20Rng) -> Complex64 {
    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
}

/// Random point of the open ball with norm in `[lo, hi]`.
pub fn rand_point(space: SpaceSignature, lo: f64, hi: f64, rng: &mut ChaCha20Rng) -> ComplexVector {
    loop {
        let entries: Vec<Complex64> = (0..space.dim()).map(|_| rand_complex(rng)).collect();
        let v = ComplexVector::new(space, entries).unwrap();
        let n = v.norm();
        if n < 1e-6 {
            continue;
        }
        let target = lo + (hi - lo) * rng.gen::<f64>();
        let entries = v.entries().iter().map(|e| e * (target / n)).collect();
        return ComplexVector::new(space, entries).unwrap();
    }
}

/// Random pair of well-separated interior points.
pub fn rand_pair(
    space: SpaceSignature,
    hi: f64,
    rng: &mut ChaCha20Rng,
) -> (ComplexVector, ComplexVector) {
    loop {
        let x = rand_point(space, 0.05, hi, rng);
        let y = rand_point(space, 0.05, hi, rng);
        let sep: f64 = x
            .entries()
            .iter()
            .zip(y.entries())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if sep > 0.05 {
            return (x, y);
        }
    }
}

/// Random admissible parameter set (solver-independent construction).
pub fn rand_admissible(p: f64, dim: usize, rng: &mut ChaCha20Rng) -> GeodesicParams {
    let space = SpaceSignature::lp(dim, p).unwrap();
    let alpha: Vec<Complex64> = (0..dim).map(|_| rand_complex(rng) * 0.55).collect();
    let beta: Vec<u8> = (0..dim).map(|_| u8::from(rng.gen::<f64>() < 0.7)).collect();
    let weights: Vec<f64> = (0..dim).map(|_| 0.2 + rng.gen::<f64>()).collect();
    let phases: Vec<f64> = (0..dim)
        .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
        .collect();
    GeodesicParams::admissible(space, alpha, beta, &weights, &phases).unwrap()
}

pub fn lp_vec(p: f64, entries: &[Complex64]) -> ComplexVector {
    ComplexVector::new(
        SpaceSignature::lp(entries.len(), p).unwrap(),
        entries.to_vec(),
    )
    .unwrap()
}

pub fn norm_diff(a: &ComplexVector, b: &ComplexVector) -> f64 {
    ComplexVector::new(
        a.space(),
        a.entries()
            .iter()
            .zip(b.entries())
            .map(|(p, q)| p - q)
            .collect(),
    )
    .unwrap()
    .norm()
}

#[test]
fn oracle_spot_check() {
    // the canonical pair: tanh of the distance is sqrt(7)/4
    let d = hilbert_ball_distance(&[c(0.5, 0.0), ZERO], &[ZERO, c(0.5, 0.0)]);
    assert!((d.tanh() - 7f64.sqrt() / 4.0).abs() < 1e-14);
    // origin pairs reduce to atanh of the norm
    let d = hilbert_ball_distance(&[ZERO, ZERO], &[c(0.3, 0.0), c(0.0, 0.4)]);
    assert!((d - 0.5f64.atanh()).abs() < 1e-14);
    // symmetry on a generic pair
    let x = [c(0.3, 0.1), c(-0.2, 0.25)];
    let y = [c(-0.1, 0.4), c(0.15, -0.2)];
    assert!((hilbert_ball_distance(&x, &y) - hilbert_ball_distance(&y, &x)).abs() < 1e-13);
}
