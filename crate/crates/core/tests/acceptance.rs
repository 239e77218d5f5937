//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured figure of merit. Run with `--nocapture` to see the
//! lines; every tolerance is pinned in code.

mod common;

use std::time::Instant;

use common::{hilbert_ball_distance, rand_pair, rand_point, rng, ZERO};
use holomet_core::disc::{poincare_distance, DiscPoint};
use holomet_core::geodesic::polydisc_distance;
use holomet_core::metric::{curvature, distance_bracket, BracketConfig, CurvatureConfig};
use holomet_core::solver::{distance, solve, uniqueness_probe};
use holomet_core::verify::{
    alignment_deviation, holder_exponent_estimate, poisson_positivity_check, Competitor,
};
use holomet_core::{ComplexVector, NormalizedGeodesic, SolveConfig, SpaceSignature};
use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;

fn report(criterion: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} ({detail})");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// A mixed batch of solver outputs reused by the admissibility and
/// certification criteria.
fn solved_batch(rng: &mut ChaCha20Rng) -> Vec<NormalizedGeodesic> {
    let cfg = SolveConfig::default();
    let mut out = Vec::new();
    for p in [1.0, 1.5, 2.0, 3.0] {
        for dim in [2usize, 3] {
            let space = SpaceSignature::lp(dim, p).unwrap();
            let (x, y) = rand_pair(space, 0.6, rng);
            out.push(solve(&x, &y, &cfg).unwrap());
        }
    }
    out
}

#[test]
fn criterion_01_origin_distance_identity() {
    let start = Instant::now();
    let mut rng = rng(0xC1);
    let cfg = SolveConfig::default();
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    'outer: loop {
        for n in [1usize, 2, 4] {
            for p in [1.0, 1.5, 2.0, 3.0] {
                let space = SpaceSignature::lp(n, p).unwrap();
                let origin = ComplexVector::zero(space);
                let z = rand_point(space, 0.05, 0.85, &mut rng);
                let d = distance(&origin, &z, &cfg).unwrap();
                worst = worst.max((d - z.norm().atanh()).abs());
                count += 1;
                if count >= 100 {
                    break 'outer;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "1 (origin-distance identity)",
        worst < 1e-8 && elapsed < 60.0,
        format!("{count} pairs, max deviation {worst:.2e}, {elapsed:.1} s"),
    );
}

#[test]
fn criterion_02_hilbert_ball_oracle_match() {
    // the oracle itself is spot-verified before the solver is trusted
    let spot = hilbert_ball_distance(
        &[Complex64::new(0.5, 0.0), ZERO],
        &[ZERO, Complex64::new(0.5, 0.0)],
    );
    assert!(
        (spot.tanh() - 7f64.sqrt() / 4.0).abs() < 1e-14,
        "oracle spot check failed"
    );
    let mut rng = rng(0xC2);
    let cfg = SolveConfig::default();
    let mut worst: f64 = 0.0;
    for dim in [2usize, 3] {
        let space = SpaceSignature::lp(dim, 2.0).unwrap();
        for _ in 0..25 {
            let (x, y) = rand_pair(space, 0.65, &mut rng);
            let got = distance(&x, &y, &cfg).unwrap();
            let expect = hilbert_ball_distance(x.entries(), y.entries());
            worst = worst.max((got - expect).abs());
        }
    }
    report(
        "2 (Hilbert-ball oracle match)",
        worst < 1e-6,
        format!("50 pairs, max deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_03_polydisc_formula() {
    let mut rng = rng(0xC3);
    let space = SpaceSignature::lp(3, f64::INFINITY).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (x, y) = rand_pair(space, 0.9, &mut rng);
        let got = polydisc_distance(&x, &y).unwrap();
        let expect = x
            .entries()
            .iter()
            .zip(y.entries())
            .map(|(a, b)| {
                poincare_distance(DiscPoint::new(*a).unwrap(), DiscPoint::new(*b).unwrap())
            })
            .fold(0.0, f64::max);
        worst = worst.max((got - expect).abs());
    }
    report(
        "3 (polydisc formula)",
        worst < 1e-12,
        format!("100 pairs, max deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_04_geodesic_admissibility() {
    let mut rng = rng(0xC4);
    let mut worst_residual: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    for sol in solved_batch(&mut rng) {
        let res = sol.params.constraint_residuals();
        worst_residual = worst_residual.max(res.max_abs());
        for sample in sol.params.boundary_trace(512).unwrap() {
            worst_boundary = worst_boundary.max((sample.norm - 1.0).abs());
        }
    }
    report(
        "4 (geodesic admissibility)",
        worst_residual < 1e-9 && worst_boundary < 1e-8,
        format!(
            "max constraint residual {worst_residual:.2e}, max boundary deviation {worst_boundary:.2e}"
        ),
    );
}

#[test]
fn criterion_05_dual_criterion_certification() {
    let mut rng = rng(0xC5);
    let mut worst_alignment: f64 = 0.0;
    let mut min_poisson = f64::INFINITY;
    for sol in solved_batch(&mut rng) {
        worst_alignment = worst_alignment.max(alignment_deviation(&sol.params, 256).unwrap());
        let mut comp_rng = rng.clone();
        for _ in 0..20 {
            let competitor = Competitor::random(&sol.params, 6, &mut comp_rng).unwrap();
            let check = poisson_positivity_check(&sol.params, &competitor, 256).unwrap();
            min_poisson = min_poisson.min(check.min_re);
        }
    }
    report(
        "5 (dual-criterion certification)",
        worst_alignment < 1e-8 && min_poisson > 0.0,
        format!("max alignment deviation {worst_alignment:.2e}, min Re H {min_poisson:.2e}"),
    );
}

#[test]
fn criterion_06_bracket_closure() {
    let mut rng = rng(0xC6);
    let cfg = SolveConfig::default();
    let bracket = BracketConfig {
        degree: 6,
        trials: 32,
        ..Default::default()
    };
    let mut worst_gap: f64 = 0.0;
    let mut contained = true;
    for p in [1.0, 1.5, 2.0, 3.0] {
        for dim in [2usize, 4] {
            let space = SpaceSignature::lp(dim, p).unwrap();
            let (x, y) = rand_pair(space, 0.55, &mut rng);
            let d = distance(&x, &y, &cfg).unwrap();
            let est = distance_bracket(&x, &y, &bracket).unwrap();
            contained &= est.contains(d, 1e-9);
            worst_gap = worst_gap.max(est.gap());
        }
    }
    report(
        "6 (bracket closure)",
        contained && worst_gap < 1e-4,
        format!("8 signatures, max gap {worst_gap:.2e}, solver distance contained: {contained}"),
    );
}

#[test]
fn criterion_07_uniqueness_property() {
    let mut rng = rng(0xC7);
    let cfg = SolveConfig::default();
    let mut worst: f64 = 0.0;
    let mut complete = true;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let space = SpaceSignature::lp(2, p).unwrap();
        let (x, y) = rand_pair(space, 0.6, &mut rng);
        let probe = uniqueness_probe(&x, &y, 10, &cfg).unwrap();
        complete &= probe.complete;
        worst = worst.max(probe.max_map_discrepancy);
    }
    report(
        "7 (uniqueness property)",
        complete && worst < 1e-6,
        format!("10 multistart solves per exponent, max map discrepancy {worst:.2e}"),
    );
}

#[test]
fn criterion_08_curvature_constant() {
    let mut rng = rng(0xC8);
    let curv_cfg = CurvatureConfig::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let tol = if p == 1.0 { 1e-2 } else { 5e-3 };
        let start = Instant::now();
        let space = SpaceSignature::lp(2, p).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let x = rand_point(space, 0.02, 0.5, &mut rng);
            let v = rand_point(space, 0.3, 1.0, &mut rng);
            let kappa = curvature(&x, &v, &curv_cfg).unwrap();
            worst = worst.max((kappa + 4.0).abs());
        }
        let elapsed = start.elapsed().as_secs_f64();
        pass &= worst < tol && elapsed < 300.0;
        lines.push(format!("p={p}: |kappa+4| <= {worst:.2e} in {elapsed:.1} s"));
    }
    report("8 (curvature constant)", pass, lines.join("; "));
}

#[test]
fn criterion_09_convexity_modulus_scaling() {
    let space = SpaceSignature::lp(2, 1.0).unwrap();
    let epsilons: Vec<f64> = (0..5).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect();
    let mut pts = Vec::new();
    let mut sandwich_ok = true;
    for (i, &eps) in epsilons.iter().enumerate() {
        let row = holomet_core::metric::modulus_sandwich(space, eps, 8, 0xC9 ^ (i as u64) << 8)
            .unwrap();
        sandwich_ok &= row.delta_half <= row.omega + 1e-6 && row.omega <= 2.0 * row.delta + 1e-6;
        pts.push((eps.ln(), row.delta.ln()));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(a, _)| a).sum();
    let sy: f64 = pts.iter().map(|(_, b)| b).sum();
    let sxx: f64 = pts.iter().map(|(a, _)| a * a).sum();
    let sxy: f64 = pts.iter().map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report(
        "9 (convexity-modulus scaling)",
        (0.4..=0.6).contains(&slope) && sandwich_ok,
        format!("fitted slope {slope:.4}, sandwich holds at every epsilon: {sandwich_ok}"),
    );
}

#[test]
fn criterion_10_projection_monotonicity() {
    let mut rng = rng(0xCA);
    let cfg = SolveConfig::default();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut count = 0usize;
    while count < 100 {
        for p in [1.0, 1.5, 2.0, 3.0] {
            let space = SpaceSignature::lp(4, p).unwrap();
            let (x, y) = rand_pair(space, 0.6, &mut rng);
            let xp = x.project_head(2).unwrap();
            let yp = y.project_head(2).unwrap();
            if common::norm_diff(&xp, &yp) < 1e-3 {
                continue;
            }
            let full = distance(&x, &y, &cfg).unwrap();
            let proj = distance(&xp, &yp, &cfg).unwrap();
            worst_excess = worst_excess.max(proj - full);
            count += 1;
        }
    }
    report(
        "10 (projection monotonicity)",
        worst_excess <= 1e-8,
        format!("{count} pairs, worst projected excess {worst_excess:.2e}"),
    );
}

#[test]
fn criterion_11_hoelder_floor() {
    let mut rng = rng(0xCB);
    let cfg = SolveConfig::default();
    let space = SpaceSignature::lp(2, 1.0).unwrap();
    let mut min_slope = f64::INFINITY;
    for _ in 0..8 {
        let (x, y) = rand_pair(space, 0.65, &mut rng);
        let sol = solve(&x, &y, &cfg).unwrap();
        let fit = holder_exponent_estimate(&sol.params, 0.5).unwrap();
        min_slope = min_slope.min(fit.slope);
    }
    report(
        "11 (Hoelder floor)",
        min_slope >= 0.45,
        format!("8 geodesics, min fitted exponent {min_slope:.3}"),
    );
}
