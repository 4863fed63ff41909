//! Exact rational-function solutions on the parameter slices that admit
//! them: identical service times (`γ = 1`), the symmetric system (`k = 1`),
//! and frozen non-dedicated service (`γ = 0`).
//!
//! Each expression is transcribed as a numerator/denominator pair in its
//! factored form, not re-derived or expanded, so the functions serve as
//! independent oracles for the [`crate::ctmc`] linear-algebra route (and
//! vice versa). All distributions are constructed normalized; the
//! [`StationaryDistribution`] constructor re-checks the sum as a
//! transcription guard.

use crate::{
    Error, FlexibilityDesign, Result, StationaryDistribution, SystemParams,
};

/// Parameter slice on which a closed form is valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormCase {
    /// `γ = 1`: service at a non-dedicated server is as fast as dedicated.
    IdenticalService,
    /// `k = 1`: both customer types arrive at the same rate `ρ`.
    Symmetric,
    /// `γ = 0`: service at a non-dedicated server never completes.
    GammaZero,
    /// The independent design's product form, valid for all parameters.
    IndependentAny,
}

fn require_gamma(params: SystemParams, expected: f64) -> Result<()> {
    if params.gamma() != expected {
        return Err(Error::CaseMismatch {
            requirement: if expected == 1.0 {
                "gamma == 1"
            } else {
                "gamma == 0"
            },
            actual: format!("gamma = {}", params.gamma()),
        });
    }
    Ok(())
}

fn require_symmetric(params: SystemParams) -> Result<()> {
    if params.k() != 1.0 {
        return Err(Error::CaseMismatch {
            requirement: "k == 1",
            actual: format!("k = {}", params.k()),
        });
    }
    Ok(())
}

/// Stationary distribution of the full design with identical service times
/// (`γ = 1`), for any `ρ > 0`, `k ∈ [0, 1]`.
///
/// # Errors
/// [`Error::CaseMismatch`] if `γ ≠ 1`.
pub fn stationary_full_identical(params: SystemParams) -> Result<StationaryDistribution> {
    require_gamma(params, 1.0)?;
    let (r, k) = (params.rho(), params.k());
    let r2 = r * r;
    let r3 = r2 * r;
    let k2 = k * k;

    let p00 = 2.0 / (k2 * r2 + 2.0 * k * r2 + 2.0 * k * r + r2 + 2.0 * r + 2.0);
    // shared denominator of the (1,0), (0,1), (0,2), (2,0) ratios
    let d = 2.0 * k2 * r2 + 4.0 * k * r2 + 6.0 * k * r + 2.0 * r2 + 6.0 * r + 4.0;
    // shared denominator of the (1,2), (2,1) ratios
    let e = 2.0 * r + 2.0 * k * r + 4.0;

    let p10 = r * (k2 * r2 + 2.0 * k * r2 + 6.0 * k * r + r2 + 4.0 * r + 4.0) / d * p00;
    let p01 = r2 * (r * k2 + 2.0 * r * k + r + 2.0) / d * p00;
    let p02 = k * r * (k2 * r2 + 2.0 * k * r2 + 4.0 * k * r + r2 + 6.0 * r + 4.0) / d * p00;
    let p20 = k * r2 * (2.0 * k + r + 2.0 * k * r + k2 * r) / d * p00;
    let p11 = r2 / 2.0 * p00;
    let p12 = k * r2 * (r + k * r + 4.0) / e * p00;
    let p21 = k * r3 * (k + 1.0) / e * p00;
    let p22 = k2 * r2 / 2.0 * p00;

    StationaryDistribution::new(
        FlexibilityDesign::Full,
        vec![p00, p01, p02, p10, p11, p12, p20, p21, p22],
    )
}

/// Stationary distribution of the partial design with identical service
/// times (`γ = 1`), for any `ρ > 0`, `k ∈ [0, 1]`.
///
/// # Errors
/// [`Error::CaseMismatch`] if `γ ≠ 1`.
pub fn stationary_partial_identical(params: SystemParams) -> Result<StationaryDistribution> {
    require_gamma(params, 1.0)?;
    let (r, k) = (params.rho(), params.k());
    let r2 = r * r;
    let k2 = k * k;

    let p00 = (2.0 * r + k * r + 2.0)
        / ((r + 1.0) * (k2 * r2 + 2.0 * k * r2 + 3.0 * k * r + r2 + 2.0 * r + 2.0));
    // shared denominator pieces of the conditional ratios
    let c = 2.0 * r + k * r + 2.0;
    let d = (r + 2.0) * c;

    let p10 = r * (r + k * r + 2.0) / c * p00;
    let p01 = r2 * (r + k * r + 2.0) / d * p00;
    let p02 = k * r * (6.0 * r + 2.0 * k * r + k * r2 + r2 + 4.0) / d * p00;
    let p11 = r2 * (r + 1.0) * (r + k * r + 2.0) / d * p00;
    let p12 = k * r2 * (5.0 * r + 2.0 * k * r + k * r2 + r2 + 4.0) / d * p00;

    StationaryDistribution::new(
        FlexibilityDesign::Partial,
        vec![p00, p01, p02, p10, p11, p12],
    )
}

/// Stationary distribution of the symmetric full design (`k = 1`), valid
/// for any `ρ > 0` and `γ ∈ (0, 1]`.
///
/// # Errors
/// [`Error::CaseMismatch`] if `k ≠ 1`, or if `γ = 0` (the expressions
/// divide by powers of `γ`; use [`stationary_gamma_zero`] instead).
pub fn stationary_full_symmetric(params: SystemParams) -> Result<StationaryDistribution> {
    require_symmetric(params)?;
    if params.gamma() == 0.0 {
        return Err(Error::CaseMismatch {
            requirement: "gamma > 0 (the symmetric expressions divide by gamma)",
            actual: "gamma = 0".into(),
        });
    }
    let (r, g) = (params.rho(), params.gamma());
    let r2 = r * r;
    let r3 = r2 * r;
    let g2 = g * g;
    let g3 = g2 * g;

    let p00 = (g3 + g2 + 2.0 * g2 * r)
        / (g2 * (r + 1.0).powi(3)
            + g3 * (r + 1.0).powi(2)
            + r * (r + g).powi(2)
            + 2.0 * g * r2 * (r + g));
    // the three distinct ratio denominators
    let dq = g2 + g + 2.0 * g * r; // quadratic in gamma
    let dl = g + 2.0 * r + 1.0; // linear in gamma
    let dc = g3 + g2 + 2.0 * g2 * r; // cubic in gamma

    let p01 = r2 / dq * p00;
    let p02 = (r2 + (g + 1.0) * r) / dl * p00;
    let p10 = (r2 + (g + 1.0) * r) / dl * p00;
    let p11 = (r3 + g * r2) / dq * p00;
    let p12 = (r3 + (g + 1.0) * r2) / dl * p00;
    let p20 = r2 / dq * p00;
    let p21 = r3 / dc * p00;
    let p22 = (r3 + g * r2) / dq * p00;

    StationaryDistribution::new(
        FlexibilityDesign::Full,
        vec![p00, p01, p02, p10, p11, p12, p20, p21, p22],
    )
}

/// Stationary distribution of the symmetric partial design (`k = 1`), valid
/// for any `ρ > 0` and `γ ∈ (0, 1]`.
///
/// # Errors
/// [`Error::CaseMismatch`] if `k ≠ 1` or `γ = 0`.
pub fn stationary_partial_symmetric(params: SystemParams) -> Result<StationaryDistribution> {
    require_symmetric(params)?;
    if params.gamma() == 0.0 {
        return Err(Error::CaseMismatch {
            requirement: "gamma > 0 (the symmetric expressions divide by gamma)",
            actual: "gamma = 0".into(),
        });
    }
    let (r, g) = (params.rho(), params.gamma());
    let r2 = r * r;
    let r3 = r2 * r;
    let g2 = g * g;

    let p00 = (2.0 * g2 * r + 2.0 * g2 + 3.0 * g * r2 + 6.0 * g * r + 2.0 * g)
        / ((r + 1.0)
            * (2.0 * g2 * (r + 1.0).powi(2)
                + g * (2.0 * r3 + 9.0 * r2 + 8.0 * r + 2.0)
                + 2.0 * r2 * (r + 1.0)));
    let c = 2.0 * g + 6.0 * r + 2.0 * g * r + 3.0 * r2 + 2.0;

    let p10 = 2.0 * r * (r + 1.0) * (g + r + 1.0) / c * p00;
    let p01 = 2.0 * r2 * (r + 1.0) / (g * c) * p00;
    let p02 = 2.0 * r * (g + 3.0 * r + g * r + r2 + 1.0) / c * p00;
    let p11 = 2.0 * r2 * (g + r) * (r + 1.0) / (g * c) * p00;
    let p12 = r2 * (2.0 * g + 5.0 * r + 2.0 * g * r + 2.0 * r2 + 2.0) / c * p00;

    StationaryDistribution::new(
        FlexibilityDesign::Partial,
        vec![p00, p01, p02, p10, p11, p12],
    )
}

/// Stationary distribution when non-dedicated service never completes
/// (`γ = 0`).
///
/// With `k > 0` the full design is eventually absorbed in `(2,1)` (each
/// server stuck with an overflowed customer of the other type), so the
/// distribution is that point mass and the throughput is 0.
///
/// Type-1 overflow operates regardless of `k`, so under the partial design —
/// and under the full design with `k = 0`, which has no type-2 arrivals to
/// freeze server 1 — server 2 ends up permanently holding an overflowed
/// type-1 customer while server 1 keeps cycling: the chain settles on
/// `{(0,1), (1,1)}` with probabilities `1/(ρ+1)` and `ρ/(ρ+1)`.
///
/// # Errors
/// [`Error::CaseMismatch`] if `γ ≠ 0`; [`Error::UnsupportedDesign`] for the
/// independent design.
pub fn stationary_gamma_zero(
    design: FlexibilityDesign,
    params: SystemParams,
) -> Result<StationaryDistribution> {
    require_gamma(params, 0.0)?;
    let r = params.rho();
    let head = 1.0 / (r + 1.0); // long-run fraction of time server 1 is idle
    let busy = r / (r + 1.0);
    match design {
        FlexibilityDesign::Full => {
            let probs = if params.k() > 0.0 {
                let mut v = vec![0.0; 9];
                v[7] = 1.0; // state (2,1)
                v
            } else {
                let mut v = vec![0.0; 9];
                v[1] = head; // state (0,1)
                v[4] = busy; // state (1,1)
                v
            };
            StationaryDistribution::new(design, probs)
        }
        FlexibilityDesign::Partial => {
            let mut v = vec![0.0; 6];
            v[1] = head; // state (0,1)
            v[4] = busy; // state (1,1)
            StationaryDistribution::new(design, v)
        }
        FlexibilityDesign::Independent => Err(Error::UnsupportedDesign(design)),
    }
}

/// Throughput of the independent design: two separate single-server loss
/// systems, `ρ/(ρ+1) + kρ/(kρ+1)`.
fn throughput_independent(params: SystemParams) -> f64 {
    let (r, k) = (params.rho(), params.k());
    r / (r + 1.0) + k * r / (k * r + 1.0)
}

/// Evaluates the printed closed-form throughput of `design` on the given
/// parameter slice.
///
/// Formula inventory:
/// * [`ClosedFormCase::IdenticalService`] (`γ = 1`): rational functions of
///   `(ρ, k)` for all three designs;
/// * [`ClosedFormCase::Symmetric`] (`k = 1`): rational functions of
///   `(ρ, γ)` for all three designs;
/// * [`ClosedFormCase::GammaZero`] (`γ = 0`): full → 0 for `k > 0` (and
///   `ρ/(ρ+1)` at `k = 0`, where full and partial coincide), partial →
///   `ρ/(ρ+1)`, independent → the product form;
/// * [`ClosedFormCase::IndependentAny`]: the product form, any parameters
///   (design must be independent).
///
/// # Errors
/// [`Error::CaseMismatch`] when `params` violates the case restriction or
/// the case does not apply to the design.
pub fn throughput_closed(
    design: FlexibilityDesign,
    case: ClosedFormCase,
    params: SystemParams,
) -> Result<f64> {
    let (r, k, g) = (params.rho(), params.k(), params.gamma());
    let r2 = r * r;
    let r3 = r2 * r;
    match case {
        ClosedFormCase::IndependentAny => {
            if design != FlexibilityDesign::Independent {
                return Err(Error::CaseMismatch {
                    requirement: "design == independent",
                    actual: format!("design = {design}"),
                });
            }
            Ok(throughput_independent(params))
        }
        ClosedFormCase::IdenticalService => {
            require_gamma(params, 1.0)?;
            let k2 = k * k;
            Ok(match design {
                FlexibilityDesign::Independent => {
                    (2.0 * k * r2 + (k + 1.0) * r) / ((r + 1.0) * (k * r + 1.0))
                }
                FlexibilityDesign::Full => {
                    2.0 * r * (k + 1.0) * (r + k * r + 1.0)
                        / (k2 * r2 + 2.0 * k * r2 + 2.0 * k * r + r2 + 2.0 * r + 2.0)
                }
                FlexibilityDesign::Partial => {
                    r * (2.0 * k2 * r2
                        + k2 * r
                        + 4.0 * k * r2
                        + 7.0 * k * r
                        + 2.0 * k
                        + 2.0 * r2
                        + 4.0 * r
                        + 2.0)
                        / ((r + 1.0)
                            * (k2 * r2 + 2.0 * k * r2 + 3.0 * k * r + r2 + 2.0 * r + 2.0))
                }
            })
        }
        ClosedFormCase::Symmetric => {
            require_symmetric(params)?;
            let g2 = g * g;
            let g3 = g2 * g;
            Ok(match design {
                FlexibilityDesign::Independent => 2.0 * r / (r + 1.0),
                FlexibilityDesign::Full => {
                    2.0 * g * r * (2.0 * g2 * r + g2 + 2.0 * g * r2 + 4.0 * g * r + g + 2.0 * r2)
                        / (g3 * (r + 1.0).powi(2)
                            + g2 * (r3 + 5.0 * r2 + 4.0 * r + 1.0)
                            + 2.0 * g * r2 * (r + 1.0)
                            + r3)
                }
                FlexibilityDesign::Partial => {
                    2.0 * r * (3.0 * g2 * r + 2.0 * g2 + 3.0 * g * r2 + 7.0 * g * r + 2.0 * g + r2)
                        / (2.0 * g2 * (r + 1.0).powi(2)
                            + g * (2.0 * r3 + 9.0 * r2 + 8.0 * r + 2.0)
                            + 2.0 * r2 * (r + 1.0))
                }
            })
        }
        ClosedFormCase::GammaZero => {
            require_gamma(params, 0.0)?;
            Ok(match design {
                FlexibilityDesign::Independent => throughput_independent(params),
                // with k = 0 the full design coincides with partial (no
                // type-2 arrivals), giving rho/(rho+1) instead of 0
                FlexibilityDesign::Full if k > 0.0 => 0.0,
                FlexibilityDesign::Full | FlexibilityDesign::Partial => r / (r + 1.0),
            })
        }
    }
}
