//! Property suites for the Poincaré-disc primitives.

mod common;

use common::{c, rand_complex, rng};
use holomet_core::disc::{
    circle_mean_laplacian, poincare_distance, poincare_infinitesimal, DiscPoint, MobiusMap,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn disc_pt(rng: &mut rand_chacha::ChaCha20Rng, max_mod: f64) -> DiscPoint {
    loop {
        let z = rand_complex(rng) * max_mod;
        if let Ok(p) = DiscPoint::new(z) {
            return p;
        }
    }
}

#[test]
fn mobius_invariance_over_random_triples() {
    // moduli capped at 0.9: any formula loses the last digits once
    // atanh'(t) = 1/(1-t^2) blows up near the boundary
    let mut rng = rng(11);
    for _ in 0..1000 {
        let z = disc_pt(&mut rng, 0.9);
        let w = disc_pt(&mut rng, 0.9);
        let m = MobiusMap::new(rand_complex(&mut rng) * 0.6, rng.gen::<f64>() * 6.28).unwrap();
        let mz = DiscPoint::new(m.apply(z.value())).unwrap();
        let mw = DiscPoint::new(m.apply(w.value())).unwrap();
        let before = poincare_distance(z, w);
        let after = poincare_distance(mz, mw);
        assert!(
            (before - after).abs() < 1e-12,
            "invariance broke: {before} vs {after}"
        );
    }
}

#[test]
fn harmonic_cubic_has_zero_laplacian() {
    let lap = circle_mean_laplacian(|z| (z * z * z).re, c(0.2, -0.1), 1e-2, 256).unwrap();
    assert!(lap.abs() < 1e-8, "laplacian {lap}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn triangle_inequality(
        (ar, aa) in (0.0..0.9f64, 0.0..6.3f64),
        (br, ba) in (0.0..0.9f64, 0.0..6.3f64),
        (cr, ca) in (0.0..0.9f64, 0.0..6.3f64),
    ) {
        let a = DiscPoint::new(Complex64::from_polar(ar, aa)).unwrap();
        let b = DiscPoint::new(Complex64::from_polar(br, ba)).unwrap();
        let d = DiscPoint::new(Complex64::from_polar(cr, ca)).unwrap();
        prop_assert!(
            poincare_distance(a, d)
                <= poincare_distance(a, b) + poincare_distance(b, d) + 1e-10
        );
    }

    #[test]
    fn distance_symmetric_and_zero_iff_equal(
        (ar, aa) in (0.0..0.9f64, 0.0..6.3f64),
        (br, ba) in (0.0..0.9f64, 0.0..6.3f64),
    ) {
        let a = DiscPoint::new(Complex64::from_polar(ar, aa)).unwrap();
        let b = DiscPoint::new(Complex64::from_polar(br, ba)).unwrap();
        let d = poincare_distance(a, b);
        prop_assert!((d - poincare_distance(b, a)).abs() < 1e-13 * (1.0 + d));
        prop_assert_eq!(poincare_distance(a, a), 0.0);
        if (a.value() - b.value()).norm() > 1e-9 {
            prop_assert!(poincare_distance(a, b) > 0.0);
        }
    }

    #[test]
    fn infinitesimal_homogeneity(
        (zr, za) in (0.0..0.9f64, 0.0..6.3f64),
        (vr, va) in (0.01..2.0f64, 0.0..6.3f64),
        t in 0.1..5.0f64,
    ) {
        let z = DiscPoint::new(Complex64::from_polar(zr, za)).unwrap();
        let v = Complex64::from_polar(vr, va);
        let lhs = poincare_infinitesimal(z, v * t);
        let rhs = t * poincare_infinitesimal(z, v);
        prop_assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
    }
}
