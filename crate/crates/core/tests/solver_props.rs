//! Property suites for the endpoint solver.

mod common;

use common::{c, hilbert_ball_distance, lp_vec, norm_diff, rand_pair, rand_point, rng, ZERO};
use holomet_core::disc::poincare_distance_values;
use holomet_core::solver::{distance, solve, uniqueness_probe};
use holomet_core::space::{pairing, DualFunctional};
use holomet_core::{ComplexVector, SolveConfig, SpaceSignature};
use num_complex::Complex64;
use rand::Rng;

#[test]
fn solver_matches_hilbert_ball_oracle() {
    let mut rng = rng(61);
    let cfg = SolveConfig::default();
    for dim in [2usize, 3] {
        let space = SpaceSignature::lp(dim, 2.0).unwrap();
        for _ in 0..10 {
            let (x, y) = rand_pair(space, 0.6, &mut rng);
            let expect = hilbert_ball_distance(x.entries(), y.entries());
            let got = distance(&x, &y, &cfg).unwrap();
            assert!(
                (got - expect).abs() < 1e-7,
                "dim {dim}: {got} vs oracle {expect}"
            );
        }
    }
}

#[test]
fn origin_distance_any_direction() {
    let mut rng = rng(67);
    let cfg = SolveConfig::default();
    for p in [1.0, 1.5, 2.0, 3.0] {
        let space = SpaceSignature::lp(3, p).unwrap();
        let origin = ComplexVector::zero(space);
        for _ in 0..5 {
            let y = rand_point(space, 0.1, 0.8, &mut rng);
            let d = distance(&origin, &y, &cfg).unwrap();
            assert!((d - y.norm().atanh()).abs() < 1e-8, "p = {p}");
        }
    }
}

#[test]
fn projection_monotonicity() {
    // distances of head projections never exceed the full distance
    let mut rng = rng(71);
    let cfg = SolveConfig::default();
    for p in [1.0, 2.0, 3.0] {
        let space = SpaceSignature::lp(4, p).unwrap();
        for _ in 0..5 {
            let (x, y) = rand_pair(space, 0.55, &mut rng);
            let full = distance(&x, &y, &cfg).unwrap();
            let xp = x.project_head(2).unwrap();
            let yp = y.project_head(2).unwrap();
            if norm_diff(&xp, &yp) < 1e-3 {
                continue;
            }
            let proj = distance(&xp, &yp, &cfg).unwrap();
            assert!(
                proj <= full + 1e-8,
                "p = {p}: projected {proj} > full {full}"
            );
        }
    }
}

#[test]
fn schwarz_pick_lower_bound_from_functionals() {
    // any unit-dual-norm functional maps the ball into the disc, so the
    // Poincaré distance of the pairings bounds the distance from below
    let mut rng = rng(73);
    let cfg = SolveConfig::default();
    let space = SpaceSignature::lp(3, 1.5).unwrap();
    let (x, y) = rand_pair(space, 0.6, &mut rng);
    let d = distance(&x, &y, &cfg).unwrap();
    for _ in 0..20 {
        let mut f = DualFunctional::new(
            space,
            (0..3).map(|_| common::rand_complex(&mut rng)).collect(),
        )
        .unwrap();
        f.normalize();
        let lower =
            poincare_distance_values(pairing(&x, &f).unwrap(), pairing(&y, &f).unwrap()).unwrap();
        assert!(lower <= d + 1e-9, "functional beat the distance: {lower} > {d}");
    }
}

#[test]
fn unimodular_coordinate_rotations_preserve_distance() {
    let mut rng = rng(79);
    let cfg = SolveConfig::default();
    for p in [1.0, 2.5] {
        let space = SpaceSignature::lp(3, p).unwrap();
        let (x, y) = rand_pair(space, 0.6, &mut rng);
        let d = distance(&x, &y, &cfg).unwrap();
        let phases: Vec<Complex64> = (0..3)
            .map(|_| Complex64::from_polar(1.0, rng.gen::<f64>() * 6.28))
            .collect();
        let rotate = |v: &ComplexVector| {
            ComplexVector::new(
                space,
                v.entries()
                    .iter()
                    .zip(&phases)
                    .map(|(e, u)| e * u)
                    .collect(),
            )
            .unwrap()
        };
        let d_rot = distance(&rotate(&x), &rotate(&y), &cfg).unwrap();
        assert!((d - d_rot).abs() < 1e-9, "p = {p}: {d} vs {d_rot}");
    }
}

#[test]
fn probe_from_origin_returns_linear_geodesic() {
    let cfg = SolveConfig::default();
    let space = SpaceSignature::lp(2, 3.0).unwrap();
    let origin = ComplexVector::zero(space);
    let y = lp_vec(3.0, &[c(0.3, 0.2), c(-0.1, 0.25)]);
    let report = uniqueness_probe(&origin, &y, 6, &cfg).unwrap();
    assert!(report.complete);
    assert!(report.max_map_discrepancy < 1e-7);
    // the produced map is the normalized linear disc through y
    let sol = solve(&origin, &y, &cfg).unwrap();
    let yn = y.norm();
    let at = sol.params.eval(c(0.5 * yn, 0.0)).unwrap();
    for j in 0..2 {
        let expect = y.entries()[j] * 0.5;
        assert!(
            (at.entries()[j] - expect).norm() < 1e-8,
            "coordinate {j} off the ray"
        );
    }
}

#[test]
fn probe_with_shared_zero_coordinate_p1() {
    // exercises the branch where a coordinate vanishes identically
    let cfg = SolveConfig::default();
    let x = lp_vec(1.0, &[c(0.4, 0.0), ZERO, c(0.05, 0.1)]);
    let y = lp_vec(1.0, &[c(0.0, 0.3), ZERO, c(-0.1, 0.02)]);
    let report = uniqueness_probe(&x, &y, 6, &cfg).unwrap();
    assert!(report.complete, "{report:?}");
    assert!(report.max_map_discrepancy < 1e-6, "{report:?}");
    let sol = solve(&x, &y, &cfg).unwrap();
    assert_eq!(sol.params.c[1], ZERO);
}

#[test]
fn bracket_example_p1() {
    use holomet_core::metric::{distance_bracket, BracketConfig};
    let x = lp_vec(1.0, &[c(0.4, 0.0), ZERO]);
    let y = lp_vec(1.0, &[ZERO, c(0.4, 0.0)]);
    let cfg = SolveConfig::default();
    let d = distance(&x, &y, &cfg).unwrap();
    let est = distance_bracket(
        &x,
        &y,
        &BracketConfig {
            trials: 16,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(est.contains(d, 1e-9), "{est:?} vs {d}");
    assert!(est.gap() < 1e-4, "gap {}", est.gap());
}

#[test]
fn continuity_sanity_near_coincidence() {
    let cfg = SolveConfig::default();
    let x = lp_vec(2.0, &[c(0.3, 0.0), ZERO]);
    let y = lp_vec(2.0, &[c(0.3, 0.0), c(0.001, 0.0)]);
    let d = distance(&x, &y, &cfg).unwrap();
    assert!(d > 0.0 && d < 0.01, "distance {d}");
}
