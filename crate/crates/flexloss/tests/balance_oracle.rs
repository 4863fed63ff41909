//! Independent oracle for the stationary solver: the global balance
//! equations of both chains, transcribed term by term as published rather
//! than derived from the generator-matrix code. Any sign, rate, or routing
//! mistake shared by `build_generator` and a test built on top of it would
//! slip through `balance_residual`; these equations cannot inherit such a
//! mistake because they never touch the generator.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use flexloss::ctmc::{build_generator, stationary_distribution};
use flexloss::{FlexibilityDesign, StationaryDistribution, SystemParams, SystemState};

/// Largest absolute violation of the nine full-design balance equations.
///
/// Each line is one equation: total outflow rate of a state times its
/// probability equals the probability-weighted inflow rates.
fn full_balance_gap(params: SystemParams, dist: &StationaryDistribution) -> f64 {
    let (r, k, g) = (params.rho(), params.k(), params.gamma());
    let p = |a, b| dist.prob(SystemState::from_codes(a, b));
    let equations = [
        (r + k * r) * p(0, 0) - (p(1, 0) + g * p(0, 1) + p(0, 2) + g * p(2, 0)),
        (r + k * r + 1.0) * p(1, 0) - (r * p(0, 0) + g * p(1, 1) + p(1, 2)),
        (r + k * r + g) * p(2, 0) - (g * p(2, 1) + p(2, 2)),
        (r + k * r + g) * p(0, 1) - (p(1, 1) + g * p(2, 1)),
        (1.0 + g) * p(1, 1) - (r * p(1, 0) + r * p(0, 1)),
        2.0 * g * p(2, 1) - (r * p(2, 0) + k * r * p(0, 1)),
        (r + k * r + 1.0) * p(0, 2) - (k * r * p(0, 0) + p(1, 2) + g * p(2, 2)),
        2.0 * p(1, 2) - (r * p(0, 2) + k * r * p(1, 0)),
        (g + 1.0) * p(2, 2) - (k * r * p(2, 0) + k * r * p(0, 2)),
    ];
    equations.iter().fold(0.0f64, |m, e| m.max(e.abs()))
}

/// Largest absolute violation of the six partial-design balance equations.
fn partial_balance_gap(params: SystemParams, dist: &StationaryDistribution) -> f64 {
    let (r, k, g) = (params.rho(), params.k(), params.gamma());
    let p = |a, b| dist.prob(SystemState::from_codes(a, b));
    let equations = [
        (r + k * r) * p(0, 0) - (p(1, 0) + g * p(0, 1) + p(0, 2)),
        (r + k * r + 1.0) * p(1, 0) - (r * p(0, 0) + g * p(1, 1) + p(1, 2)),
        2.0 * p(1, 2) - (r * p(0, 2) + k * r * p(1, 0)),
        (r + 1.0) * p(0, 2) - (k * r * p(0, 0) + p(1, 2)),
        (1.0 + g) * p(1, 1) - r * (p(0, 1) + p(1, 0)),
        (r + g) * p(0, 1) - p(1, 1),
    ];
    equations.iter().fold(0.0f64, |m, e| m.max(e.abs()))
}

fn solve(design: FlexibilityDesign, params: SystemParams) -> StationaryDistribution {
    stationary_distribution(&build_generator(design, params).unwrap()).unwrap()
}

/// Equation terms scale with `(1 + k)ρ + 1 ≤ 41` over the sampled range, so
/// a correct solution leaves residuals within a few hundred ulps of the
/// largest term; 1e-11 spots any structural error while tolerating rounding.
const GAP_TOL: f64 = 1e-11;

#[test]
fn solved_full_distributions_satisfy_the_published_balance_equations() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x00ba_1a9c_e001);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let rho = 10f64.powf(rng.random_range(-1.3..1.3));
        let k = rng.random_range(0.0..=1.0);
        let gamma = rng.random_range(0.001..=1.0);
        let params = SystemParams::new(rho, k, gamma).unwrap();
        let dist = solve(FlexibilityDesign::Full, params);
        let gap = full_balance_gap(params, &dist);
        assert!(gap <= GAP_TOL, "gap {gap:e} at {params:?}");
        worst = worst.max(gap);
    }
    assert!(worst > 0.0, "residuals should be tiny but not identically zero");
}

#[test]
fn solved_partial_distributions_satisfy_the_published_balance_equations() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x00ba_1a9c_e002);
    for _ in 0..2000 {
        let rho = 10f64.powf(rng.random_range(-1.3..1.3));
        let k = rng.random_range(0.0..=1.0);
        let gamma = rng.random_range(0.001..=1.0);
        let params = SystemParams::new(rho, k, gamma).unwrap();
        let dist = solve(FlexibilityDesign::Partial, params);
        let gap = partial_balance_gap(params, &dist);
        assert!(gap <= GAP_TOL, "gap {gap:e} at {params:?}");
    }
}

#[test]
fn closed_corner_distributions_satisfy_the_balance_equations() {
    // corners exercise every degenerate branch: no type-2 stream (k = 0),
    // the symmetric system (k = 1), identical service (gamma = 1), and
    // near-frozen overflow (gamma tiny)
    for rho in [0.1, 1.0, 2.0, 10.0] {
        for (k, gamma) in [
            (0.0, 1.0),
            (0.0, 0.3),
            (1.0, 1.0),
            (1.0, 1e-6),
            (0.5, 1e-9),
            (1e-9, 0.5),
        ] {
            let params = SystemParams::new(rho, k, gamma).unwrap();
            let full = solve(FlexibilityDesign::Full, params);
            assert!(
                full_balance_gap(params, &full) <= GAP_TOL,
                "full corner {params:?}"
            );
            let partial = solve(FlexibilityDesign::Partial, params);
            assert!(
                partial_balance_gap(params, &partial) <= GAP_TOL,
                "partial corner {params:?}"
            );
        }
    }
}

#[test]
fn the_partial_gamma_zero_limit_satisfies_the_balance_equations() {
    // at gamma = 0 the solver answers with the closed-form limit; that limit
    // still has to satisfy the published equations (every gamma-weighted
    // term drops out)
    for rho in [0.2, 1.0, 5.0] {
        for k in [0.0, 0.4, 1.0] {
            let params = SystemParams::new(rho, k, 0.0).unwrap();
            let dist = stationary_distribution(
                &build_generator(FlexibilityDesign::Partial, params).unwrap(),
            )
            .unwrap();
            assert!(
                partial_balance_gap(params, &dist) <= 1e-15,
                "gamma-zero limit {params:?}"
            );
        }
    }
}
