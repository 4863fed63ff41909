//! Discrete-event simulation of all three designs, used as an independent
//! statistical check on the analytic throughputs.
//!
//! A run draws two independent Poisson arrival streams (rates `ρ` and
//! `k·ρ`) and exponential service times (rate 1 at a dedicated server, `γ`
//! at a non-dedicated one), routes arrivals exactly by the design's
//! overflow rule, and estimates throughput — accepted arrivals per unit
//! simulated time after warmup — with a 95% confidence interval from
//! non-overlapping batch means. Runs are bit-for-bit reproducible from the
//! seed: the three random streams are independently positioned cipher
//! streams of one counter-based generator, so the event sequence does not
//! depend on evaluation order subtleties.

use crate::{ctmc, Error, FlexibilityDesign, Result, ServerOccupancy, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Run length defaults: warmup portion of the horizon and batch count.
const DEFAULT_WARMUP_FRACTION: f64 = 0.05;
const DEFAULT_BATCHES: u32 = 20;

/// Full description of one simulation run.
///
/// Invariants (checked by [`simulate`], violations are
/// [`Error::Config`]):
/// * `horizon_events > 0`, counted in arrivals (of both types), so runs
///   terminate even when `γ = 0` freezes a server;
/// * `warmup_events < horizon_events`;
/// * `batches ≥ 10`, with at least one post-warmup arrival per batch; when
///   the batch count does not divide the post-warmup arrivals the remainder
///   is dropped from the measurement window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Which overflow rule to simulate.
    pub design: FlexibilityDesign,
    /// Arrival and service rates.
    pub params: SystemParams,
    /// Total arrivals to simulate (both types combined).
    pub horizon_events: u64,
    /// Arrivals discarded before measurement starts.
    pub warmup_events: u64,
    /// Number of non-overlapping batches the measurement window splits into.
    pub batches: u32,
    /// Seed for the three random streams.
    pub seed: u64,
}

impl SimConfig {
    /// A config with the default warmup (5% of the horizon) and batch
    /// count (20).
    pub fn new(
        design: FlexibilityDesign,
        params: SystemParams,
        horizon_events: u64,
        seed: u64,
    ) -> Self {
        SimConfig {
            design,
            params,
            horizon_events,
            warmup_events: (horizon_events as f64 * DEFAULT_WARMUP_FRACTION) as u64,
            batches: DEFAULT_BATCHES,
            seed,
        }
    }

    /// Checks the cross-field invariants and returns the per-batch arrival
    /// count of the measurement window.
    fn per_batch_arrivals(&self) -> Result<u64> {
        if self.horizon_events == 0 {
            return Err(Error::Config(
                "horizon_events must be a positive arrival count".to_string(),
            ));
        }
        if self.warmup_events >= self.horizon_events {
            return Err(Error::Config(format!(
                "warmup_events ({}) must be smaller than horizon_events ({})",
                self.warmup_events, self.horizon_events
            )));
        }
        if self.batches < 10 {
            return Err(Error::Config(format!(
                "batches must be at least 10 for a usable batch-means interval, got {}",
                self.batches
            )));
        }
        let per_batch = (self.horizon_events - self.warmup_events) / u64::from(self.batches);
        if per_batch == 0 {
            return Err(Error::Config(format!(
                "horizon leaves fewer than one post-warmup arrival per batch \
                 ({} post-warmup arrivals over {} batches)",
                self.horizon_events - self.warmup_events,
                self.batches
            )));
        }
        Ok(per_batch)
    }
}

/// A throughput estimate with its sampling uncertainty.
///
/// `mean` estimates the design's long-run accepted-arrival rate, which lies
/// in `[0, (1+k)ρ]`; `accepted ≤ offered` always, where both counts cover
/// exactly the measurement window (post-warmup arrivals, padding dropped).
/// `by_type` holds the per-type acceptance fractions over the same window,
/// reported as 0 for a type that offered no arrivals (`k = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputEstimate {
    /// Mean of the batch throughputs.
    pub mean: f64,
    /// Half-width of the 95% batch-means confidence interval.
    pub half_width_95: f64,
    /// Accepted arrivals in the measurement window.
    pub accepted: u64,
    /// Arrivals offered in the measurement window.
    pub offered: u64,
    /// (type-1, type-2) acceptance fractions.
    pub by_type: (f64, f64),
}

/// Outcome of checking a simulation against the analytic throughput.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// The simulation estimate under test.
    pub estimate: ThroughputEstimate,
    /// The analytic throughput for the same design and parameters.
    pub analytic: f64,
    /// `|mean − analytic|` in estimated-standard-error units.
    pub z_score: f64,
    /// The absolute tolerance actually applied:
    /// `max(3·half_width_95/1.96, 1e-3)`.
    pub tolerance: f64,
    /// Whether the estimate is within tolerance of the analytic value.
    pub pass: bool,
}

/// One of the three independent random streams derived from a seed.
fn stream(seed: u64, id: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// An exponential waiting time, or never for a zero rate (a frozen
/// non-dedicated service at `γ = 0`); a zero rate consumes no randomness.
fn exp_sample<R: Rng>(rng: &mut R, rate: f64) -> f64 {
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    let u: f64 = rng.random();
    -(-u).ln_1p() / rate
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Event {
    Arrival1,
    Arrival2,
    Complete1,
    Complete2,
}

/// Runs one simulation and estimates the throughput.
///
/// # Errors
/// [`Error::Config`] if the config invariants fail (see [`SimConfig`]).
pub fn simulate(config: &SimConfig) -> Result<ThroughputEstimate> {
    let per_batch = config.per_batch_arrivals()?;
    let design = config.design;
    let p = config.params;
    let (rho, gamma) = (p.rho(), p.gamma());
    let rate2 = p.k() * rho;

    let mut arr1_rng = stream(config.seed, 1);
    let mut arr2_rng = stream(config.seed, 2);
    let mut svc_rng = stream(config.seed, 3);

    let mut clock;
    let mut s1 = ServerOccupancy::Idle;
    let mut s2 = ServerOccupancy::Idle;
    let mut next_arr1 = exp_sample(&mut arr1_rng, rho);
    let mut next_arr2 = exp_sample(&mut arr2_rng, rate2);
    let mut complete1 = f64::INFINITY;
    let mut complete2 = f64::INFINITY;

    let warmup = config.warmup_events;
    let measured = per_batch * u64::from(config.batches);
    let total_arrivals = warmup + measured;

    let mut arrivals = 0_u64;
    let mut offered = [0_u64; 2];
    let mut accepted = [0_u64; 2];
    let mut lost = [0_u64; 2];
    let mut batch_accepted = 0_u64;
    let mut batch_start = 0.0_f64;
    let mut batch_means = Vec::with_capacity(config.batches as usize);

    while arrivals < total_arrivals {
        // Next event; simultaneous events (measure-zero) resolve in a fixed
        // order so runs are reproducible.
        let mut t = next_arr1;
        let mut event = Event::Arrival1;
        if next_arr2 < t {
            t = next_arr2;
            event = Event::Arrival2;
        }
        if complete1 < t {
            t = complete1;
            event = Event::Complete1;
        }
        if complete2 < t {
            t = complete2;
            event = Event::Complete2;
        }
        debug_assert!(t.is_finite(), "rho > 0 keeps type-1 arrivals recurring");
        clock = t;

        match event {
            Event::Arrival1 => {
                arrivals += 1;
                let measuring = arrivals > warmup;
                let taken = if s1 == ServerOccupancy::Idle {
                    s1 = ServerOccupancy::Type1;
                    complete1 = clock + exp_sample(&mut svc_rng, 1.0);
                    true
                } else if design.type1_overflows() && s2 == ServerOccupancy::Idle {
                    s2 = ServerOccupancy::Type1;
                    complete2 = clock + exp_sample(&mut svc_rng, gamma);
                    true
                } else {
                    false
                };
                if measuring {
                    offered[0] += 1;
                    if taken {
                        accepted[0] += 1;
                        batch_accepted += 1;
                    } else {
                        lost[0] += 1;
                    }
                }
                next_arr1 = clock + exp_sample(&mut arr1_rng, rho);
            }
            Event::Arrival2 => {
                arrivals += 1;
                let measuring = arrivals > warmup;
                let taken = if s2 == ServerOccupancy::Idle {
                    s2 = ServerOccupancy::Type2;
                    complete2 = clock + exp_sample(&mut svc_rng, 1.0);
                    true
                } else if design.type2_overflows() && s1 == ServerOccupancy::Idle {
                    s1 = ServerOccupancy::Type2;
                    complete1 = clock + exp_sample(&mut svc_rng, gamma);
                    true
                } else {
                    false
                };
                if measuring {
                    offered[1] += 1;
                    if taken {
                        accepted[1] += 1;
                        batch_accepted += 1;
                    } else {
                        lost[1] += 1;
                    }
                }
                next_arr2 = clock + exp_sample(&mut arr2_rng, rate2);
            }
            Event::Complete1 => {
                s1 = ServerOccupancy::Idle;
                complete1 = f64::INFINITY;
            }
            Event::Complete2 => {
                s2 = ServerOccupancy::Idle;
                complete2 = f64::INFINITY;
            }
        }

        // State legality, checked every event: the partial design never
        // places a type-2 customer at server 1, and the independent design
        // never mixes types at all.
        match design {
            FlexibilityDesign::Partial => {
                assert!(
                    s1 != ServerOccupancy::Type2,
                    "partial design routed a type-2 customer to server 1"
                );
            }
            FlexibilityDesign::Independent => {
                assert!(
                    s1 != ServerOccupancy::Type2 && s2 != ServerOccupancy::Type1,
                    "independent design overflowed a customer"
                );
            }
            FlexibilityDesign::Full => {}
        }

        if matches!(event, Event::Arrival1 | Event::Arrival2) {
            if arrivals == warmup {
                batch_start = clock;
            } else if arrivals > warmup && (arrivals - warmup).is_multiple_of(per_batch) {
                batch_means.push(batch_accepted as f64 / (clock - batch_start));
                batch_accepted = 0;
                batch_start = clock;
            }
        }
    }

    debug_assert_eq!(offered[0], accepted[0] + lost[0]);
    debug_assert_eq!(offered[1], accepted[1] + lost[1]);
    debug_assert_eq!(batch_means.len(), config.batches as usize);

    let b = batch_means.len() as f64;
    let mean = batch_means.iter().sum::<f64>() / b;
    let variance = batch_means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b - 1.0);
    let t_quantile = StudentsT::new(0.0, 1.0, b - 1.0)
        .expect("batches >= 10 gives a valid degrees-of-freedom")
        .inverse_cdf(0.975);
    let half_width_95 = t_quantile * (variance / b).sqrt();

    let fraction = |i: usize| {
        if offered[i] == 0 {
            0.0
        } else {
            accepted[i] as f64 / offered[i] as f64
        }
    };

    Ok(ThroughputEstimate {
        mean,
        half_width_95,
        accepted: accepted[0] + accepted[1],
        offered: offered[0] + offered[1],
        by_type: (fraction(0), fraction(1)),
    })
}

/// Simulates and compares against the analytic throughput for the same
/// design and parameters.
///
/// The check passes when `|mean − analytic| ≤ max(3·SE, 1e-3)` where
/// `SE = half_width_95 / 1.96` — a three-standard-error bound with an
/// absolute floor for very long runs whose interval collapses below the
/// model-vs-simulation agreement anyone needs in practice.
///
/// # Errors
/// Propagates [`simulate`] and [`ctmc::throughput`] errors.
pub fn validate_against_analytic(config: &SimConfig) -> Result<ValidationReport> {
    let estimate = simulate(config)?;
    let analytic = ctmc::throughput(config.design, config.params)?;
    let diff = (estimate.mean - analytic).abs();
    let standard_error = estimate.half_width_95 / 1.96;
    let z_score = if diff == 0.0 {
        0.0
    } else if standard_error > 0.0 {
        diff / standard_error
    } else {
        f64::INFINITY
    };
    let tolerance = f64::max(3.0 * standard_error, 1e-3);
    Ok(ValidationReport {
        estimate,
        analytic,
        z_score,
        tolerance,
        pass: diff <= tolerance,
    })
}
