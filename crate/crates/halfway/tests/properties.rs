//! Property tests for the analytic invariants and the statistics
//! toolkit.

use halfway::analytic::{
    halfway_cdf, halfway_density, killed_transition_density, tail_constant, HalfwayParams,
};
use halfway::stats::{ecdf, empirical_quantile, ks_p_value};
use proptest::prelude::*;

fn params(u: f64, x: f64) -> HalfwayParams {
    HalfwayParams::new(x, u).unwrap()
}

proptest! {
    #[test]
    fn scale_invariance_to_machine_precision(
        u in 0.05_f64..0.95,
        x in 0.1_f64..10.0,
        y in 1e-6_f64..50.0,
    ) {
        let p = halfway_density(&params(u, x), y).unwrap().value();
        let scaled = halfway_density(&params(u, 1.0), y / x).unwrap().value() / x;
        let rel = (p - scaled).abs() / p.abs().max(scaled.abs());
        prop_assert!(rel <= 1e-12, "rel {rel:e} at u={u} x={x} y={y}");
    }

    #[test]
    fn killed_transition_symmetric_bitwise(
        x in 1e-3_f64..1e3,
        y in 1e-3_f64..1e3,
        t in 1e-3_f64..1e3,
    ) {
        let a = killed_transition_density(x, t, y).unwrap().value();
        let b = killed_transition_density(y, t, x).unwrap().value();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn density_nonnegative_finite_and_zero_at_origin(
        u in 0.001_f64..0.999,
        x in 1e-6_f64..1e6,
        y in 0.0_f64..1e9,
    ) {
        let pr = params(u, x);
        let p = halfway_density(&pr, y).unwrap().value();
        prop_assert!(p.is_finite() && p >= 0.0);
        prop_assert_eq!(halfway_density(&pr, 0.0).unwrap().value(), 0.0);
        if y > 0.0 {
            prop_assert!(p > 0.0, "density vanished at y={y}");
        }
    }

    #[test]
    fn tail_ratio_bounded(
        u in 0.05_f64..0.95,
        x in 0.1_f64..10.0,
        mult in 100.0_f64..1e5,
    ) {
        let pr = params(u, x);
        let y = mult * x;
        let dev = (y * y * halfway_density(&pr, y).unwrap().value() / tail_constant(&pr) - 1.0).abs();
        let bound = (10.0 * x / y) * (10.0 * x / y);
        prop_assert!(dev <= bound, "dev {dev:e} bound {bound:e}");
    }

    #[test]
    fn ks_p_value_monotone_pairs(a in 0.05_f64..5.0, b in 0.05_f64..5.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(ks_p_value(lo, 1) >= ks_p_value(hi, 1) - 1e-12);
    }

    #[test]
    fn ecdf_quantile_consistent(
        mut samples in prop::collection::vec(-1e6_f64..1e6, 1..200),
        q in 0.01_f64..0.99,
    ) {
        samples.truncate(samples.len());
        let e = ecdf(&samples).unwrap();
        let v = empirical_quantile(&samples, q).unwrap();
        prop_assert!(e.query(v) >= q);
    }
}

proptest! {
    // CDF evaluations run a quadrature each; keep the case count small.
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cdf_monotone_and_bounded(
        u in 0.05_f64..0.95,
        x in 0.2_f64..5.0,
        y1 in 0.0_f64..100.0,
        y2 in 0.0_f64..100.0,
    ) {
        let pr = params(u, x);
        let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
        let f_lo = halfway_cdf(&pr, lo).unwrap();
        let f_hi = halfway_cdf(&pr, hi).unwrap();
        prop_assert!((0.0..=1.0).contains(&f_lo));
        prop_assert!((0.0..=1.0).contains(&f_hi));
        prop_assert!(f_hi >= f_lo - 1e-10, "CDF decreased: {f_lo} -> {f_hi}");
    }
}
