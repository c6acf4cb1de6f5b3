//! Reproducible random sampling for the halfway distribution.
//!
//! Three exact samplers and one path-level simulator:
//!
//! * [`sample_tau`] — the hitting time as `(x / Z)^2` for a standard
//!   normal `Z`;
//! * [`sample_excursion_at`] — the excursion-bridge marginal
//!   `b * sqrt((xi + a)^2 + theta)` with `a = x sqrt((1-u)/(T u))`,
//!   `b = sqrt((1-u) T u)`, `xi` standard normal and `theta`
//!   exponential with mean 2 (a chi-squared with two degrees of
//!   freedom);
//! * [`sample_halfway_exact`] — a hitting time composed with the
//!   excursion marginal at that lifetime, which mixes to the halfway
//!   density;
//! * [`simulate_path_halfway`] — an Euler walk to the first zero
//!   crossing with an optional Brownian-bridge crossing correction,
//!   followed by a stream replay to evaluate the path at `u * tau_hat`.
//!
//! All draws derive from an explicit [`RngStream`]; replaying a stream
//! reproduces every draw bit for bit, and batches are deterministic
//! functions of `(params, n, method, seed, n_streams)` no matter how
//! many threads execute them.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::analytic::HalfwayParams;
use crate::error::{ensure, Error, Result};
use crate::special::one_minus_exp_neg;

const TWO_POW_NEG_53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Crossing probabilities below 2^-53 cannot be hit by a 53-bit uniform
/// anyway; skip the exponential and the draw once `2 a b / dt` exceeds
/// this.
const BRIDGE_EXPONENT_CUTOFF: f64 = 40.0;

/// A reproducible, independently seeded random stream.
///
/// Streams with distinct `(seed, stream_id)` are statistically
/// independent; a stream rebuilt from the same pair reproduces the same
/// draws bit for bit. The main ChaCha8 lane feeds the primary draws;
/// the path simulator additionally derives one auxiliary lane per
/// simulated path, keyed by `(seed, stream_id, path index)`, for its
/// crossing uniforms and bridge normal. Keeping the auxiliary draws off
/// the main lane means replaying the main lane is unaffected by how
/// many of them a path consumed, and keying them per path means
/// correction-on and correction-off runs of the same stream share every
/// draw, so their comparison isolates the correction itself.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    main: ChaCha8Rng,
    spare_main: Option<f64>,
    paths_started: u64,
}

impl RngStream {
    /// Create the stream for `(seed, stream_id)`. The top bit of
    /// `stream_id` is reserved.
    pub fn new(seed: u64, stream_id: u64) -> Self {
        assert!(
            stream_id >> 63 == 0,
            "stream_id must fit in 63 bits, got {stream_id}"
        );
        let mut main = ChaCha8Rng::seed_from_u64(seed);
        main.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            main,
            spare_main: None,
            paths_started: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw on [0, 1) with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.main.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Standard normal draw by the Box–Muller pair transform; the second
    /// member of each pair is cached.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_main.take() {
            return z;
        }
        let (z0, z1) = box_muller(&mut self.main);
        self.spare_main = Some(z1);
        z0
    }

    /// Exponential draw with the given mean.
    pub fn next_exponential(&mut self, mean: f64) -> f64 {
        // 1 - U lies in (0, 1], so the logarithm is finite.
        -mean * (1.0 - self.next_uniform()).ln()
    }

    /// Index of the next path started on this stream.
    fn next_path_index(&mut self) -> u64 {
        let idx = self.paths_started;
        self.paths_started += 1;
        idx
    }
}

/// SplitMix64 state advance.
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
}

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent ChaCha8 lane keyed by (seed, stream, path index, lane).
/// Lane 1 feeds the crossing-check uniforms, lane 2 the value draw, so
/// runs with and without the correction consume identical value draws.
fn path_aux_rng(seed: u64, stream_id: u64, path_idx: u64, lane: u64) -> ChaCha8Rng {
    let mut state = seed ^ 0x5851_F42D_4C95_7F2D;
    splitmix64(&mut state);
    state ^= splitmix64_mix(stream_id);
    splitmix64(&mut state);
    state ^= splitmix64_mix(path_idx);
    splitmix64(&mut state);
    state ^= splitmix64_mix(lane);
    let mut key = [0_u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&splitmix64_mix(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn box_muller(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1 = 1.0 - (rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53; // (0, 1]
    let u2 = (rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53;
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Configuration of the Euler path simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    dt: f64,
    t_max: f64,
    bridge_correction: bool,
    record_every: u64,
}

impl PathConfig {
    /// Step size `dt` and censoring horizon `t_max`; bridge correction
    /// defaults to on and trace recording to every step.
    pub fn new(dt: f64, t_max: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if !(t_max.is_finite() && t_max >= dt) {
            return Err(Error::InvalidConfig(format!(
                "t_max must be finite and at least dt, got {t_max}"
            )));
        }
        if t_max / dt >= 9.0e18 {
            return Err(Error::InvalidConfig(format!(
                "t_max/dt = {:e} does not fit in the step counter",
                t_max / dt
            )));
        }
        Ok(Self {
            dt,
            t_max,
            bridge_correction: true,
            record_every: 1,
        })
    }

    pub fn with_bridge_correction(mut self, on: bool) -> Self {
        self.bridge_correction = on;
        self
    }

    /// Thinning interval for the diagnostic trace of
    /// [`simulate_path_with_trace`].
    pub fn with_record_every(mut self, every: u64) -> Result<Self> {
        if every == 0 {
            return Err(Error::InvalidConfig(
                "record_every must be at least 1".to_string(),
            ));
        }
        self.record_every = every;
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn bridge_correction(&self) -> bool {
        self.bridge_correction
    }

    pub fn record_every(&self) -> u64 {
        self.record_every
    }
}

/// Default censoring horizon, `1e6 * x^2`: leaves roughly 0.08% of the
/// hitting-time mass beyond the horizon.
pub fn default_t_max(x: f64) -> f64 {
    1e6 * x * x
}

/// Result of one simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOutcome {
    /// The path reached zero before the horizon.
    pub hit: bool,
    /// Estimated hitting time when `hit`; the simulated horizon when
    /// censored.
    pub tau_hat: f64,
    /// Path value at `u * tau_hat`; absent when censored.
    pub value_at_u_tau: Option<f64>,
    /// The horizon was reached without a crossing.
    pub censored: bool,
}

/// Draw the hitting time of zero from `x`, distributed with the
/// hitting-time density, via `tau = (x / Z)^2`.
pub fn sample_tau(stream: &mut RngStream, x: f64) -> Result<f64> {
    ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
    Ok(tau_draw(stream, x))
}

fn tau_draw(stream: &mut RngStream, x: f64) -> f64 {
    loop {
        let z = stream.next_normal();
        if z != 0.0 {
            let r = x / z;
            return r * r;
        }
    }
}

/// Draw the excursion-bridge marginal at fraction `u` of lifetime `T`.
pub fn sample_excursion_at(stream: &mut RngStream, x: f64, u: f64, t_total: f64) -> Result<f64> {
    ensure(x.is_finite() && x > 0.0, "x", "finite and > 0", x)?;
    ensure(u.is_finite() && u > 0.0 && u < 1.0, "u", "in (0, 1)", u)?;
    ensure(
        t_total.is_finite() && t_total > 0.0,
        "T",
        "finite and > 0",
        t_total,
    )?;
    let xi = stream.next_normal();
    let theta = stream.next_exponential(2.0);
    Ok(excursion_value(x, u, t_total, xi, theta))
}

/// Deterministic transform behind [`sample_excursion_at`], split out so
/// tests can inject the underlying draws. The multiplication order keeps
/// the map exactly homogeneous under `x -> 2x`, `T -> 4T`.
fn excursion_value(x: f64, u: f64, t_total: f64, xi: f64, theta: f64) -> f64 {
    let v = 1.0 - u;
    let a = x * (v / (t_total * u)).sqrt();
    let b = ((v * t_total) * u).sqrt();
    let w = xi + a;
    b * (w * w + theta).sqrt()
}

/// Draw from the halfway distribution exactly: a hitting time `T` from
/// `x`, then the excursion marginal at fraction `u` of that lifetime.
pub fn sample_halfway_exact(stream: &mut RngStream, params: &HalfwayParams) -> f64 {
    let t = tau_draw(stream, params.x());
    let xi = stream.next_normal();
    let theta = stream.next_exponential(2.0);
    excursion_value(params.x(), params.u(), t, xi, theta)
}

/// Simulate one Euler path to its first zero crossing and evaluate it at
/// `u * tau_hat`.
///
/// Phase 1 walks `B_{k+1} = B_k + sqrt(dt) N_k` until the grid value
/// drops to zero or below (the crossing time is then linearly
/// interpolated), or, with the bridge correction on, until an auxiliary
/// uniform falls below the within-step crossing probability
/// `exp(-2 B_k B_{k+1} / dt)` (the crossing is then placed at the right
/// endpoint of the step). Reaching the horizon first censors the path.
///
/// Phase 2 replays the main lane from the state saved at entry up to the
/// grid interval containing `u * tau_hat` and draws the value from the
/// Brownian-bridge law between the replayed endpoints, using the path's
/// own auxiliary lane. When the bridge correction is on, that step has
/// survived a crossing check, so the draw is additionally conditioned to
/// stay positive (by rejection); without the correction the skeleton
/// carries no extra information and the plain bridge draw is already
/// exact. No path is ever stored, so memory stays O(1) no matter how
/// long the walk runs.
pub fn simulate_path_halfway(
    stream: &mut RngStream,
    params: &HalfwayParams,
    config: &PathConfig,
) -> PathOutcome {
    simulate_path_inner(stream, params, config, None)
}

/// [`simulate_path_halfway`] with a diagnostic trace of every
/// `record_every`-th grid point `(t_k, B_k)` appended to `trace`.
pub fn simulate_path_with_trace(
    stream: &mut RngStream,
    params: &HalfwayParams,
    config: &PathConfig,
    trace: &mut Vec<(f64, f64)>,
) -> PathOutcome {
    simulate_path_inner(stream, params, config, Some(trace))
}

fn simulate_path_inner(
    stream: &mut RngStream,
    params: &HalfwayParams,
    config: &PathConfig,
    mut trace: Option<&mut Vec<(f64, f64)>>,
) -> PathOutcome {
    let dt = config.dt;
    let sqrt_dt = dt.sqrt();
    let replay_source = stream.clone();
    let path_idx = stream.next_path_index();
    let mut aux_walk: Option<ChaCha8Rng> = None;

    if let Some(t) = trace.as_deref_mut() {
        t.push((0.0, params.x()));
    }

    let mut b = params.x();
    let mut k: u64 = 0;
    let tau_hat = loop {
        let t_next = (k + 1) as f64 * dt;
        let b_next = b + sqrt_dt * stream.next_normal();

        if b_next <= 0.0 {
            // Grid-level crossing: interpolate the zero of the chord.
            break k as f64 * dt + dt * b / (b - b_next);
        }
        if config.bridge_correction {
            let w = 2.0 * b * b_next / dt;
            if w < BRIDGE_EXPONENT_CUTOFF {
                let walk = aux_walk.get_or_insert_with(|| {
                    path_aux_rng(stream.seed, stream.stream_id, path_idx, 1)
                });
                let uniform = (walk.next_u64() >> 11) as f64 * TWO_POW_NEG_53;
                if uniform < (-w).exp() {
                    // The bridge dipped below zero inside the step.
                    break t_next;
                }
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            if (k + 1).is_multiple_of(config.record_every) {
                t.push((t_next, b_next));
            }
        }
        if t_next >= config.t_max {
            return PathOutcome {
                hit: false,
                tau_hat: t_next,
                value_at_u_tau: None,
                censored: true,
            };
        }
        b = b_next;
        k += 1;
    };
    let crossing_step = k;

    // Phase 2: replay to the interval containing u * tau_hat and draw the
    // bridge value between the replayed endpoints. Rounding in s/dt can
    // land one cell high or low; clamp so that t_j <= s and the interval
    // stays within the simulated range.
    let s = params.u() * tau_hat;
    let mut j = ((s / dt).floor() as u64).min(crossing_step);
    if j > 0 && j as f64 * dt > s {
        j -= 1;
    }
    let mut replay = replay_source;
    let mut left = params.x();
    for _ in 0..j {
        left += sqrt_dt * replay.next_normal();
    }
    let right = left + sqrt_dt * replay.next_normal();

    let t_j = j as f64 * dt;
    let before = (s - t_j).clamp(0.0, dt);
    let after = dt - before;
    let mean = left + (before / dt) * (right - left);
    let sd = (before * after / dt).max(0.0).sqrt();

    let mut aux_value = path_aux_rng(stream.seed, stream.stream_id, path_idx, 2);
    let value = if config.bridge_correction && j < crossing_step {
        // This step passed a survival check, so the exact conditional is
        // the bridge kept positive: rejection against the crossing
        // probabilities of the two half-steps. The first proposal is the
        // same draw an uncorrected run would use. (Inside the crossing
        // step itself, a time essentially never reached for u away from
        // 1, the plain draw below is used instead.)
        loop {
            let v = mean + sd * box_muller(&mut aux_value).0;
            if v <= 0.0 {
                continue;
            }
            let accept = one_minus_exp_neg(2.0 * left * v / before)
                * one_minus_exp_neg(2.0 * v * right / after);
            if (aux_value.next_u64() >> 11) as f64 * TWO_POW_NEG_53 < accept {
                break v;
            }
        }
    } else {
        // Plain bridge draw; it can stray below zero near the crossing,
        // and that mass is part of the O(dt) step-level bias.
        (mean + sd * box_muller(&mut aux_value).0).max(0.0)
    };

    PathOutcome {
        hit: true,
        tau_hat,
        value_at_u_tau: Some(value),
        censored: false,
    }
}

/// How a batch generates each draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleMethod {
    /// [`sample_halfway_exact`].
    Exact,
    /// [`simulate_path_halfway`] with this configuration.
    Path(PathConfig),
}

/// A reproducibly seeded batch of draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    /// Uncensored draws, concatenated in stream order.
    pub values: Vec<f64>,
    pub params: HalfwayParams,
    pub seed: u64,
    pub n_streams: u64,
    pub n_requested: u64,
    pub n_censored: u64,
}

/// Generate `n` draws split across `n_streams` consecutive stream ids.
///
/// Stream `i` of `n_streams` attempts `n / n_streams` draws plus one of
/// the remainder when `i < n % n_streams`; results are concatenated in
/// stream-id order, so the batch is a deterministic function of its
/// arguments regardless of how the streams are scheduled. Censored path
/// draws are counted and excluded, never substituted.
pub fn sample_batch(
    params: &HalfwayParams,
    n: u64,
    method: &SampleMethod,
    seed: u64,
    n_streams: u64,
) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".to_string()));
    }
    if n_streams == 0 || n_streams >> 63 != 0 {
        return Err(Error::InvalidConfig(format!(
            "n_streams must be in 1..2^63, got {n_streams}"
        )));
    }

    let base = n / n_streams;
    let remainder = n % n_streams;

    let per_stream: Vec<(Vec<f64>, u64)> = (0..n_streams)
        .into_par_iter()
        .map(|i| {
            let quota = base + u64::from(i < remainder);
            let mut stream = RngStream::new(seed, i);
            let mut values = Vec::with_capacity(quota as usize);
            let mut censored = 0_u64;
            match method {
                SampleMethod::Exact => {
                    for _ in 0..quota {
                        values.push(sample_halfway_exact(&mut stream, params));
                    }
                }
                SampleMethod::Path(config) => {
                    for _ in 0..quota {
                        let outcome = simulate_path_halfway(&mut stream, params, config);
                        match outcome.value_at_u_tau {
                            Some(v) => values.push(v),
                            None => censored += 1,
                        }
                    }
                }
            }
            (values, censored)
        })
        .collect();

    let mut values = Vec::with_capacity(n as usize);
    let mut n_censored = 0;
    for (v, c) in per_stream {
        values.extend(v);
        n_censored += c;
    }
    Ok(SampleBatch {
        values,
        params: *params,
        seed,
        n_streams,
        n_requested: n,
        n_censored,
    })
}
