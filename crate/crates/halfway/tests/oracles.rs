//! Cross-validation of the closed forms against independent quadrature
//! routes: the two mixture representations of the halfway density, the
//! hitting-time CDF against direct integration of its density, and the
//! normal CDF against integration of the normal density.

use halfway::analytic::{
    halfway_cdf, halfway_cdf_complement, halfway_density, hitting_time_cdf, hitting_time_density,
    HalfwayParams,
};
use halfway::quadrature::{
    halfway_density_oracle_excursion, halfway_density_oracle_killed, integrate_adaptive,
    integrate_semi_infinite,
};
use halfway::special::{normal_cdf, normal_pdf};

const U_GRID: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];
const X_GRID: [f64; 3] = [0.5, 1.0, 2.0];

fn params(u: f64, x: f64) -> HalfwayParams {
    HalfwayParams::new(x, u).unwrap()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// Log-spaced grid of `n` points over [lo, hi].
fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn killed_oracle_matches_closed_form_at_anchors() {
    let o = halfway_density_oracle_killed(&params(0.5, 1.0), 1.0)
        .unwrap()
        .value();
    let want = 1.6 / std::f64::consts::PI;
    assert!(rel_err(o, want) < 1e-8, "oracle {o} vs closed form {want}");

    let o2 = halfway_density_oracle_killed(&params(0.5, 2.0), 2.0)
        .unwrap()
        .value();
    assert!(rel_err(o2, want / 2.0) < 1e-8, "oracle {o2}");

    // y near zero: the integrand carries the killed factor and the
    // hitting density from y, both vanishing.
    let tiny = halfway_density_oracle_killed(&params(0.5, 1.0), 1e-6)
        .unwrap()
        .value();
    assert!(tiny <= 1e-11, "oracle at y=1e-6: {tiny}");
}

#[test]
fn excursion_oracle_matches_closed_form_at_anchors() {
    for &(u, x, y) in &[(0.5, 1.0, 1.0), (0.25, 1.0, 3.0), (0.9, 0.5, 0.5)] {
        let pr = params(u, x);
        let o = halfway_density_oracle_excursion(&pr, y).unwrap().value();
        let p = halfway_density(&pr, y).unwrap().value();
        assert!(
            rel_err(o, p) < 1e-6,
            "u={u} x={x} y={y}: oracle {o} vs p {p}"
        );
    }
}

#[test]
fn three_way_agreement_on_subgrid() {
    // The full 15 x 40 grid runs in the acceptance suite; a coarser
    // sweep here keeps the library tests fast while covering the
    // parameter corners.
    for &u in &U_GRID {
        for &x in &X_GRID {
            let pr = params(u, x);
            for y in log_grid(0.01 * x, 100.0 * x, 7) {
                let p = halfway_density(&pr, y).unwrap().value();
                let o1 = halfway_density_oracle_killed(&pr, y).unwrap().value();
                let o2 = halfway_density_oracle_excursion(&pr, y).unwrap().value();
                for (a, b, tag) in [(p, o1, "p/o1"), (p, o2, "p/o2"), (o1, o2, "o1/o2")] {
                    assert!(
                        rel_err(a, b) <= 1e-6,
                        "{tag} at u={u} x={x} y={y}: {a} vs {b} (rel {:e})",
                        rel_err(a, b)
                    );
                }
            }
        }
    }
}

#[test]
fn halfway_density_normalizes_on_grid() {
    for &u in &U_GRID {
        for &x in &X_GRID {
            let pr = params(u, x);
            let mass = halfway_cdf(&pr, 100.0 * x).unwrap()
                + halfway_cdf_complement(&pr, 100.0 * x).unwrap();
            assert!((mass - 1.0).abs() <= 1e-8, "u={u} x={x}: total mass {mass}");
        }
    }
}

#[test]
fn halfway_cdf_golden_value_by_two_routes() {
    let pr = params(0.5, 1.0);

    // Route A: direct quadrature of the closed-form density.
    let direct = halfway_cdf(&pr, 1.0).unwrap();

    // Route B: the killed-transition mixture integrated in y.
    let mixture = integrate_adaptive(
        |y: f64| {
            if y <= 0.0 {
                0.0
            } else {
                halfway_density_oracle_killed(&pr, y).unwrap().value()
            }
        },
        0.0,
        1.0,
        1e-10,
    )
    .unwrap()
    .value;

    assert!(
        (direct - mixture).abs() <= 1e-9,
        "routes disagree: {direct} vs {mixture}"
    );
    assert!(
        (direct - 0.391_433_618_287_045_2).abs() <= 1e-9,
        "golden value drifted: {direct}"
    );
}

#[test]
fn hitting_time_cdf_matches_quadrature_of_density() {
    for &x in &[0.5_f64, 1.0, 2.0] {
        for &mult in &[0.1, 1.0, 10.0] {
            let t = mult * x * x;
            let quad = integrate_adaptive(
                |s: f64| hitting_time_density(x, s).map(|d| d.value()).unwrap_or(0.0),
                1e-12,
                t,
                1e-12,
            )
            .unwrap()
            .value;
            let closed = hitting_time_cdf(x, t).unwrap();
            assert!(
                (quad - closed).abs() <= 1e-10,
                "x={x} t={t}: quadrature {quad} vs closed {closed}"
            );
        }
    }
}

#[test]
fn hitting_time_density_total_mass() {
    // tau is finite almost surely: the density integrates to 1.
    let mass = integrate_semi_infinite(
        |t: f64| {
            if t <= 0.0 {
                0.0
            } else {
                hitting_time_density(1.0, t).unwrap().value()
            }
        },
        0.0,
        1e-9,
    )
    .unwrap()
    .value;
    assert!((mass - 1.0).abs() <= 1e-9, "total mass {mass}");
}

#[test]
fn finite_interval_hitting_density_integral() {
    // integral over [1e-6, 1e3] equals the CDF at 1e3 up to the
    // negligible mass below 1e-6.
    let q = integrate_adaptive(
        |t: f64| hitting_time_density(1.0, t).unwrap().value(),
        1e-6,
        1e3,
        1e-10,
    )
    .unwrap();
    let want = hitting_time_cdf(1.0, 1e3).unwrap();
    assert!((q.value - want).abs() <= 1e-9, "{} vs {}", q.value, want);
    assert!((want - 0.974_77).abs() < 1e-5);
}

#[test]
fn normal_cdf_validated_against_quadrature() {
    for &z in &[-6.0_f64, -3.0, -1.0, -0.5, 0.3, 1.0, 2.5, 5.0] {
        let quad = 0.5
            + integrate_adaptive(normal_pdf, z.min(0.0), z.max(0.0), 1e-13)
                .unwrap()
                .value
                * z.signum();
        let phi = normal_cdf(z);
        assert!(
            (quad - phi).abs() <= 1e-12,
            "z={z}: quadrature {quad} vs erfc route {phi}"
        );
    }
}
