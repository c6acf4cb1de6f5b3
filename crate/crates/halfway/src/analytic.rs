//! Closed-form densities, CDFs, tail constants and quantiles.
//!
//! Everything here concerns a standard Brownian motion started at
//! `x > 0` and killed at its first visit to zero, at the random time
//! `tau`. Four laws are exposed:
//!
//! * the hitting-time density `f(x; t) = x / sqrt(2 pi t^3) * exp(-x^2 / 2t)`
//!   and its closed-form CDF `2 Phi(-x / sqrt(t))`;
//! * the killed transition density
//!   `q(x, t, y) = (2 pi t)^{-1/2} [exp(-(y-x)^2/2t) - exp(-(y+x)^2/2t)]`,
//!   the density of being at `y` at time `t` without having touched zero;
//! * the halfway density `p(u, x; y)` of the position at time `u * tau`
//!   for a fixed fraction `u` in (0, 1):
//!
//!   ```text
//!   p(u,x;y) = 4 sqrt(u(1-u)) x y^2
//!              ------------------------------------------------------
//!              pi [ (y-x)^2 (1-u) + y^2 u ] [ (y+x)^2 (1-u) + y^2 u ]
//!   ```
//!
//!   a heavy-tailed law: `p ~ tail_constant / y^2`, so it has no mean;
//! * the excursion-bridge marginal `q_{uT}(x; y)`, the density at
//!   fraction `u` of a bridge of lifetime `T` from `x` down to zero.
//!
//! Differences of nearby Gaussians are always evaluated in the factored
//! form `exp(-(y-x)^2/2t) * (1 - exp(-2xy/t))` with a cancellation-safe
//! one-minus-exponential; the subtractive form loses every significant
//! digit once `2xy/t` is small.

use crate::error::{ensure, Error, Result};
use crate::quadrature;
use crate::special::{erfc, one_minus_exp_neg};

/// Exponent magnitude beyond which `exp(-e)` is identically zero in f64.
/// Densities genuinely vanish there; returning exact 0 is not an error.
const EXP_UNDERFLOW: f64 = 745.0;

/// Smallest admissible distance of `u` from either end of (0, 1).
/// Values outside the band are rejected, never clamped.
const U_MARGIN: f64 = 1e-12;

/// Absolute quadrature tolerance behind [`halfway_cdf`].
const CDF_TOL: f64 = 1e-11;

/// Start point and time fraction for the halfway distribution.
///
/// Construction validates `x > 0` and `u` in `[1e-12, 1 - 1e-12]`; the
/// observed level `y`, lifetimes and hitting times are arguments of the
/// individual operations, not fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfwayParams {
    x: f64,
    u: f64,
}

impl HalfwayParams {
    pub fn new(x: f64, u: f64) -> Result<Self> {
        ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
        ensure(
            u.is_finite() && (U_MARGIN..=1.0 - U_MARGIN).contains(&u),
            "u",
            "in [1e-12, 1 - 1e-12]",
            u,
        )?;
        Ok(Self { x, u })
    }

    /// Initial position of the Brownian motion.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Fraction of the hitting time at which the path is observed.
    pub fn u(&self) -> f64 {
        self.u
    }
}

/// A nonnegative, finite probability density value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DensityValue(f64);

impl DensityValue {
    pub(crate) fn new(v: f64) -> Self {
        debug_assert!(
            v.is_finite() && v >= 0.0,
            "density must be finite and >= 0, got {v}"
        );
        Self(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<DensityValue> for f64 {
    fn from(d: DensityValue) -> f64 {
        d.0
    }
}

fn validate_u(u: f64) -> Result<()> {
    ensure(
        u.is_finite() && (U_MARGIN..=1.0 - U_MARGIN).contains(&u),
        "u",
        "in [1e-12, 1 - 1e-12]",
        u,
    )
}

// ---------------------------------------------------------------------------
// Unchecked kernels. Callers guarantee the domain; used directly by the
// quadrature oracles where per-evaluation validation would be waste.
// ---------------------------------------------------------------------------

pub(crate) fn hitting_density_unchecked(x: f64, t: f64) -> f64 {
    let e = x * x / (2.0 * t);
    if e >= EXP_UNDERFLOW {
        return 0.0;
    }
    // (x/t) / sqrt(2 pi t) avoids forming t^3, which would overflow or
    // underflow long before the density itself does.
    (x / t) * (-e).exp() / (2.0 * std::f64::consts::PI * t).sqrt()
}

pub(crate) fn killed_transition_unchecked(x: f64, t: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let d = y - x;
    let e = d * d / (2.0 * t);
    if e >= EXP_UNDERFLOW {
        return 0.0;
    }
    (-e).exp() * one_minus_exp_neg(2.0 * x * y / t) / (2.0 * std::f64::consts::PI * t).sqrt()
}

pub(crate) fn halfway_density_unchecked(x: f64, u: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let moderate_x = (1e-60..1e60).contains(&x);
    if moderate_x && y < 1e60 * x {
        halfway_density_direct(x, u, y)
    } else if y < 1e60 * x {
        // Extreme x with a moderate y/x ratio: evaluate at x = 1 in the
        // rescaled coordinate, which the scaling law makes exact.
        halfway_density_direct(1.0, u, y / x) / x
    } else {
        halfway_density_far_tail(x, u, y)
    }
}

/// The closed form as written; safe while y^4 stays finite.
fn halfway_density_direct(x: f64, u: f64, y: f64) -> f64 {
    let v = 1.0 - u;
    let dm = y - x;
    let dp = y + x;
    let d1 = dm * dm * v + y * y * u;
    let d2 = dp * dp * v + y * y * u;
    4.0 * (u * v).sqrt() * x * y * y / (std::f64::consts::PI * d1 * d2)
}

/// Same expression with numerator and denominator divided by y^4, for
/// y so large that the direct denominators overflow.
fn halfway_density_far_tail(x: f64, u: f64, y: f64) -> f64 {
    let v = 1.0 - u;
    let s = x / y;
    let e1 = (1.0 - s) * (1.0 - s) * v + u;
    let e2 = (1.0 + s) * (1.0 + s) * v + u;
    let y2 = y * y;
    if !y2.is_finite() {
        return 0.0;
    }
    4.0 * (u * v).sqrt() * x / (std::f64::consts::PI * y2 * e1 * e2)
}

pub(crate) fn excursion_marginal_unchecked(x: f64, u: f64, t_total: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let v = 1.0 - u;
    let center = x * v;
    let var = t_total * u * v;
    let d = y - center;
    let e = d * d / (2.0 * var);
    if e >= EXP_UNDERFLOW {
        return 0.0;
    }
    let prefactor = y / ((2.0 * std::f64::consts::PI).sqrt() * x * v * var.sqrt());
    prefactor * (-e).exp() * one_minus_exp_neg(2.0 * x * y / (t_total * u))
}

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

/// Density of the first hitting time of zero from `x > 0`, at `t > 0`.
pub fn hitting_time_density(x: f64, t: f64) -> Result<DensityValue> {
    ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
    ensure(t.is_finite() && t > 0.0, "t", "finite and > 0", t)?;
    Ok(DensityValue::new(hitting_density_unchecked(x, t)))
}

/// CDF of the hitting time: `P(tau <= t) = 2 Phi(-x / sqrt(t))`,
/// evaluated as `erfc(x / sqrt(2t))` so the far tail keeps relative
/// accuracy.
pub fn hitting_time_cdf(x: f64, t: f64) -> Result<f64> {
    ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
    ensure(!t.is_nan() && t >= 0.0, "t", ">= 0", t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(erfc(x / (2.0 * t).sqrt()))
}

/// Density at `y >= 0` of Brownian motion at time `t`, started from
/// `x > 0` and killed at zero.
pub fn killed_transition_density(x: f64, t: f64, y: f64) -> Result<DensityValue> {
    ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
    ensure(t.is_finite() && t > 0.0, "t", "finite and > 0", t)?;
    ensure(y.is_finite() && y >= 0.0, "y", "finite and >= 0", y)?;
    Ok(DensityValue::new(killed_transition_unchecked(x, t, y)))
}

/// Density at `y >= 0` of the position at time `u * tau`.
pub fn halfway_density(params: &HalfwayParams, y: f64) -> Result<DensityValue> {
    ensure(y.is_finite() && y >= 0.0, "y", "finite and >= 0", y)?;
    Ok(DensityValue::new(halfway_density_unchecked(
        params.x, params.u, y,
    )))
}

/// Marginal density at `y >= 0` of the excursion bridge from `x` to zero
/// with lifetime `T`, observed at time `u * T`.
pub fn excursion_marginal_density(x: f64, u: f64, t_total: f64, y: f64) -> Result<DensityValue> {
    ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
    validate_u(u)?;
    ensure(
        t_total.is_finite() && t_total > 0.0,
        "T",
        "finite and > 0",
        t_total,
    )?;
    ensure(y.is_finite() && y >= 0.0, "y", "finite and >= 0", y)?;
    Ok(DensityValue::new(excursion_marginal_unchecked(
        x, u, t_total, y,
    )))
}

/// Limit of `y^2 * p(u, x; y)` as `y` grows: `4 x sqrt(u(1-u)) / pi`.
/// Governs the `1/y^2` tail of the halfway density.
pub fn tail_constant(params: &HalfwayParams) -> f64 {
    4.0 * params.x * (params.u * (1.0 - params.u)).sqrt() / std::f64::consts::PI
}

/// Mass of the halfway density beyond `y`: `integral_y^inf p`.
///
/// From `100 x` outward the integral is computed under the substitution
/// `y' = x / s`, which maps the slowly converging `1/y^2` tail onto a
/// finite interval; closer in it is the complement of [`halfway_cdf`].
/// At `y = 100 x` exactly, this and [`halfway_cdf`] therefore come from
/// two separate quadratures, which is what makes their sum a meaningful
/// normalization probe.
pub fn halfway_cdf_complement(params: &HalfwayParams, y: f64) -> Result<f64> {
    ensure(y.is_finite() && y >= 0.0, "y", "finite and >= 0", y)?;
    if y < 100.0 * params.x {
        return Ok((1.0 - halfway_cdf(params, y)?).max(0.0));
    }
    Ok(tail_mass(params, y)?.min(1.0))
}

/// Tail integral via the `y' = x/s` substitution; requires y > 0.
fn tail_mass(params: &HalfwayParams, y: f64) -> Result<f64> {
    let (x, u) = (params.x, params.u);
    let limit_at_zero = 4.0 * (u * (1.0 - u)).sqrt() / std::f64::consts::PI;
    let integrand = move |s: f64| {
        let yy = x / s;
        if !yy.is_finite() {
            return limit_at_zero;
        }
        halfway_density_unchecked(x, u, yy) * x / (s * s)
    };
    let q = quadrature::integrate_adaptive(integrand, 0.0, x / y, CDF_TOL)?;
    Ok(q.value.max(0.0))
}

/// CDF of the halfway density at `y >= 0`, by adaptive quadrature.
///
/// Direct integration over (0, y] while `y <= 100 x`; beyond that the
/// complement is computed from the substituted tail integral, since the
/// `1/y^2` tail converges far too slowly for naive truncation. Absolute
/// error is at most 1e-10.
pub fn halfway_cdf(params: &HalfwayParams, y: f64) -> Result<f64> {
    ensure(y.is_finite() && y >= 0.0, "y", "finite and >= 0", y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    let (x, u) = (params.x, params.u);
    if y <= 100.0 * x {
        let q = quadrature::integrate_adaptive(
            move |t: f64| halfway_density_unchecked(x, u, t),
            0.0,
            y,
            CDF_TOL,
        )?;
        Ok(q.value.clamp(0.0, 1.0))
    } else {
        Ok((1.0 - tail_mass(params, y)?).clamp(0.0, 1.0))
    }
}

/// Inverse of [`halfway_cdf`]: the `y` with `F(y) = q`, for `q` in (0, 1).
///
/// Brackets from `[x q, x / (1 - q)]`, expanding geometrically if needed,
/// then bisects to an interval of width 1e-10, which pins the CDF value
/// well within 1e-8.
pub fn halfway_quantile(params: &HalfwayParams, q: f64) -> Result<f64> {
    ensure(q.is_finite() && q > 0.0 && q < 1.0, "q", "in (0, 1)", q)?;
    const MAX_EXPANSIONS: u32 = 1000;

    let mut lo = params.x * q;
    let mut hi = params.x / (1.0 - q);

    let mut expansions = 0;
    while halfway_cdf(params, lo)? > q {
        lo *= 0.5;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::BracketFailure { q, expansions });
        }
    }
    while halfway_cdf(params, hi)? < q {
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::BracketFailure { q, expansions });
        }
    }

    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if halfway_cdf(params, mid)? < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
