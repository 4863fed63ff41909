//! Markov-chain construction and the exact stationary solve.
//!
//! The full and partial designs are finite continuous-time Markov chains on
//! 9 and 6 states respectively. This module builds their generator matrices
//! from the arrival/overflow/service rules, solves for the stationary
//! distribution, and evaluates the long-run throughput of each design.

use crate::model::{state_index, state_space};
use crate::{
    closed_form, Error, FlexibilityDesign, Result, ServerOccupancy, StationaryDistribution,
    SystemParams, SystemState,
};

/// Infinitesimal generator `Q` of a design's chain, dense row-major,
/// indexed by the canonical state ordering.
///
/// Invariants (enforced by [`build_generator`]):
/// * off-diagonal entries are ≥ 0;
/// * every row sums to 0 within 1e-12;
/// * `dim` equals the design's state-space size (9 full, 6 partial).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    design: FlexibilityDesign,
    params: SystemParams,
    dim: usize,
    rates: Vec<f64>,
}

impl GeneratorMatrix {
    /// The design whose chain this generator describes.
    pub fn design(&self) -> FlexibilityDesign {
        self.design
    }

    /// The parameters the rates were built from.
    pub fn params(&self) -> SystemParams {
        self.params
    }

    /// Number of states (9 for full, 6 for partial).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Transition rate from the `i`-th to the `j`-th state of the canonical
    /// ordering (the diagonal holds the negative total outflow rate).
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.rates[i * self.dim + j]
    }

    /// Dense row-major rate matrix.
    pub fn as_slice(&self) -> &[f64] {
        &self.rates
    }

    /// The canonical state ordering the rows and columns are indexed by.
    pub fn states(&self) -> &'static [SystemState] {
        state_space(self.design)
            .expect("a generator exists only for designs with a joint chain")
    }

    /// Transition rate between two states given as state values.
    ///
    /// # Panics
    /// Panics if either state is outside this design's state space.
    pub fn rate_between(&self, from: SystemState, to: SystemState) -> f64 {
        let i = state_index(self.design, from)
            .unwrap_or_else(|| panic!("state {from} not in the {} state space", self.design));
        let j = state_index(self.design, to)
            .unwrap_or_else(|| panic!("state {to} not in the {} state space", self.design));
        self.rate(i, j)
    }
}

/// Builds the generator of the design's chain.
///
/// Transition structure:
/// * type-1 arrivals at rate `ρ` enter server 1 if idle, else overflow to an
///   idle server 2 if the design permits, else are lost (no transition);
/// * type-2 arrivals at rate `k·ρ` enter server 2 if idle, else overflow to
///   an idle server 1 under full flexibility only, else are lost;
/// * a server completes at rate 1 when holding its dedicated type and at
///   rate `γ` when holding the other type.
///
/// # Errors
/// [`Error::UnsupportedDesign`] for the independent design (its throughput
/// has a product form; there is no joint chain to build).
pub fn build_generator(
    design: FlexibilityDesign,
    params: SystemParams,
) -> Result<GeneratorMatrix> {
    let states = state_space(design)?;
    let n = states.len();
    let (rho, k, gamma) = (params.rho(), params.k(), params.gamma());
    let mut rates = vec![0.0; n * n];
    let mut add = |from: SystemState, to: SystemState, rate: f64| {
        if rate > 0.0 {
            let i = state_index(design, from).expect("source state is in the space");
            let j = state_index(design, to).expect("target state is in the space");
            rates[i * n + j] += rate;
        }
    };

    use ServerOccupancy::{Idle, Type1, Type2};
    for &s in states {
        let SystemState { server1, server2 } = s;
        // type-1 arrival, rate rho
        if server1 == Idle {
            add(s, SystemState::new(Type1, server2), rho);
        } else if server2 == Idle && design.type1_overflows() {
            add(s, SystemState::new(server1, Type1), rho);
        }
        // type-2 arrival, rate k*rho
        if server2 == Idle {
            add(s, SystemState::new(server1, Type2), k * rho);
        } else if server1 == Idle && design.type2_overflows() {
            add(s, SystemState::new(Type2, server2), k * rho);
        }
        // service at server 1: dedicated rate 1, non-dedicated rate gamma
        match server1 {
            Type1 => add(s, SystemState::new(Idle, server2), 1.0),
            Type2 => add(s, SystemState::new(Idle, server2), gamma),
            Idle => {}
        }
        // service at server 2
        match server2 {
            Type2 => add(s, SystemState::new(server1, Idle), 1.0),
            Type1 => add(s, SystemState::new(server1, Idle), gamma),
            Idle => {}
        }
    }

    for i in 0..n {
        let row_sum: f64 = (0..n).filter(|&j| j != i).map(|j| rates[i * n + j]).sum();
        rates[i * n + i] = -row_sum;
    }

    Ok(GeneratorMatrix {
        design,
        params,
        dim: n,
        rates,
    })
}

/// Solves `πQ = 0`, `Σπ = 1` for the stationary distribution of the chain.
///
/// The solve uses subtraction-free state reduction (fold the highest state's
/// outflow into the remaining states, repeat, then back-substitute). All
/// arithmetic on rates is additive, so every stationary probability — even
/// ones many orders of magnitude below 1 — is computed to full relative
/// precision, and the residual `‖πQ‖∞` stays below 1e-12 for all valid
/// parameters.
///
/// # Errors
/// [`Error::SingularChain`] when `γ = 0` under the full design: the chain is
/// absorbing and the distribution is the point mass supplied by
/// [`closed_form::stationary_gamma_zero`] — callers must route `γ = 0`
/// there. Under the partial design `γ = 0` is answered directly with that
/// closed form (the chain still has a unique closed class).
pub fn stationary_distribution(gen: &GeneratorMatrix) -> Result<StationaryDistribution> {
    let params = gen.params();
    if params.gamma() == 0.0 {
        return match gen.design() {
            FlexibilityDesign::Full => Err(Error::SingularChain(
                "gamma = 0 freezes overflowed customers, so the full-flexibility chain is \
                 absorbing; use the gamma-zero closed form"
                    .into(),
            )),
            _ => closed_form::stationary_gamma_zero(gen.design(), params),
        };
    }

    let n = gen.dim();
    let mut a = gen.as_slice().to_vec();

    // Fold states n-1, n-2, ..., 1 into the lower-indexed ones. Censoring
    // the chain on {0..m} replaces each rate i->j by
    // a[i][j] + a[i][m] * a[m][j] / (total outflow of m to {0..m-1}).
    for m in (1..n).rev() {
        let out: f64 = (0..m).map(|j| a[m * n + j]).sum();
        if !out.is_finite() || out <= 0.0 {
            return Err(Error::SingularChain(format!(
                "state {} has no outflow to lower-indexed states; the chain does not \
                 communicate",
                gen.states()[m]
            )));
        }
        for i in 0..m {
            let f = a[i * n + m] / out;
            if f != 0.0 {
                for j in 0..m {
                    if j != i {
                        a[i * n + j] += f * a[m * n + j];
                    }
                }
            }
        }
    }

    // Back-substitute: x[0] = 1, then each folded state's unnormalized mass
    // is its inflow from already-known states divided by its outflow.
    let mut x = vec![0.0; n];
    x[0] = 1.0;
    for m in 1..n {
        let out: f64 = (0..m).map(|j| a[m * n + j]).sum();
        let inflow: f64 = (0..m).map(|i| x[i] * a[i * n + m]).sum();
        x[m] = inflow / out;
    }
    let total: f64 = x.iter().sum();
    for v in &mut x {
        *v /= total;
    }

    let dist = StationaryDistribution::new(gen.design(), x)?;
    let residual = balance_residual(gen, &dist);
    if residual > 1e-12 {
        return Err(Error::SingularChain(format!(
            "stationary solve residual {residual:e} exceeds 1e-12"
        )));
    }
    Ok(dist)
}

/// `‖πQ‖∞`: the largest violation of any global balance equation by `dist`.
///
/// # Panics
/// Panics if `dist` belongs to a different design than `gen`.
pub fn balance_residual(gen: &GeneratorMatrix, dist: &StationaryDistribution) -> f64 {
    assert_eq!(
        gen.design(),
        dist.design(),
        "distribution and generator must describe the same design"
    );
    let n = gen.dim();
    let pi = dist.probabilities();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let col: f64 = (0..n).map(|i| pi[i] * gen.rate(i, j)).sum();
        worst = worst.max(col.abs());
    }
    worst
}

/// Long-run accepted-customer rate of a design (its throughput).
///
/// * Independent: `ρ/(ρ+1) + kρ/(kρ+1)` — the product of two single-server
///   loss systems, no chain needed.
/// * Full: `(1+k)ρ · (1 − π(1,1) − π(1,2) − π(2,1) − π(2,2))` — arrivals of
///   either type are blocked exactly when both servers are busy.
/// * Partial: `ρ(1 − p(1,1) − p(1,2)) + kρ(1 − p(1,1) − p(1,2) − p(0,1) −
///   p(0,2))` — type 2 is additionally blocked whenever server 2 is busy.
///
/// Stationary probabilities come from [`stationary_distribution`], or from
/// the γ = 0 closed form when `γ = 0`.
pub fn throughput(design: FlexibilityDesign, params: SystemParams) -> Result<f64> {
    match design {
        FlexibilityDesign::Independent => {
            let (rho, k) = (params.rho(), params.k());
            Ok(rho / (rho + 1.0) + k * rho / (k * rho + 1.0))
        }
        FlexibilityDesign::Partial | FlexibilityDesign::Full => {
            let dist = if params.gamma() == 0.0 {
                closed_form::stationary_gamma_zero(design, params)?
            } else {
                stationary_distribution(&build_generator(design, params)?)?
            };
            throughput_from_distribution(&dist, params)
        }
    }
}

/// Evaluates the acceptance-rate formula of `dist.design()` on an explicit
/// stationary distribution (used by [`throughput`] and by simulation
/// validation).
pub fn throughput_from_distribution(
    dist: &StationaryDistribution,
    params: SystemParams,
) -> Result<f64> {
    let (rho, k) = (params.rho(), params.k());
    let p = |a, b| dist.prob(SystemState::from_codes(a, b));
    match dist.design() {
        FlexibilityDesign::Full => {
            let blocked = p(1, 1) + p(1, 2) + p(2, 1) + p(2, 2);
            Ok((1.0 + k) * rho * (1.0 - blocked))
        }
        FlexibilityDesign::Partial => {
            let both_busy = p(1, 1) + p(1, 2);
            let server2_busy = both_busy + p(0, 1) + p(0, 2);
            Ok(rho * (1.0 - both_busy) + k * rho * (1.0 - server2_busy))
        }
        FlexibilityDesign::Independent => {
            Err(Error::UnsupportedDesign(FlexibilityDesign::Independent))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(rho: f64, k: f64, gamma: f64) -> SystemParams {
        SystemParams::new(rho, k, gamma).unwrap()
    }

    fn s(a: u8, b: u8) -> SystemState {
        SystemState::from_codes(a, b)
    }

    #[test]
    fn generator_rejects_independent() {
        assert!(matches!(
            build_generator(FlexibilityDesign::Independent, params(1.0, 0.5, 0.5)),
            Err(Error::UnsupportedDesign(_))
        ));
    }

    #[test]
    fn full_generator_routes_arrivals_and_services() {
        let gen = build_generator(FlexibilityDesign::Full, params(1.0, 1.0, 1.0)).unwrap();
        // type-1 arrival into an empty system takes its dedicated server
        assert_eq!(gen.rate_between(s(0, 0), s(1, 0)), 1.0);
        // a busy server 1 with idle server 2 overflows a type-1 arrival
        assert_eq!(gen.rate_between(s(1, 0), s(1, 1)), 1.0);
        // no single transition admits two customers at once
        assert_eq!(gen.rate_between(s(1, 0), s(2, 1)), 0.0);
        // type-2 arrival joins idle server 2
        assert_eq!(gen.rate_between(s(1, 0), s(1, 2)), 1.0);
        // type-2 overflow to idle server 1 exists only under full flexibility
        assert_eq!(gen.rate_between(s(0, 2), s(2, 2)), 1.0);
    }

    #[test]
    fn out_rates_match_arrival_and_service_structure() {
        for (rho, k, gamma) in [(1.0, 1.0, 1.0), (2.5, 0.3, 0.7), (0.2, 0.9, 0.05)] {
            let p = params(rho, k, gamma);
            let full = build_generator(FlexibilityDesign::Full, p).unwrap();
            // both servers serving their non-preferred... (1,1): server 1 dedicated
            // (rate 1), server 2 non-dedicated type-1 (rate gamma); all arrivals lost.
            let i11 = state_index(FlexibilityDesign::Full, s(1, 1)).unwrap();
            assert_abs_diff_eq!(full.rate(i11, i11), -(1.0 + gamma), epsilon = 1e-15);

            let partial = build_generator(FlexibilityDesign::Partial, p).unwrap();
            // (0,1): type-1 arrivals admitted (rate rho), type-2 arrivals lost,
            // server 2 completes its overflowed type-1 customer at rate gamma.
            let i01 = state_index(FlexibilityDesign::Partial, s(0, 1)).unwrap();
            assert_abs_diff_eq!(partial.rate(i01, i01), -(rho + gamma), epsilon = 1e-15);
        }
    }

    #[test]
    fn partial_generator_never_admits_type2_to_server1() {
        let gen = build_generator(FlexibilityDesign::Partial, params(3.0, 1.0, 0.5)).unwrap();
        // from (0,1) and (0,2), a type-2 arrival is lost, not overflowed
        assert_eq!(gen.rate_between(s(0, 1), s(1, 1)), 3.0); // type-1 admit only
        let i01 = state_index(FlexibilityDesign::Partial, s(0, 1)).unwrap();
        let out: f64 = (0..6)
            .filter(|&j| j != i01)
            .map(|j| gen.rate(i01, j))
            .sum();
        assert_abs_diff_eq!(out, 3.0 + 0.5, epsilon = 1e-15); // rho + gamma
    }

    #[test]
    fn generator_rows_sum_to_zero_with_nonnegative_off_diagonals() {
        for design in [FlexibilityDesign::Full, FlexibilityDesign::Partial] {
            for (rho, k, gamma) in [(0.05, 0.0, 0.0), (1.0, 0.5, 0.45), (20.0, 1.0, 1.0)] {
                let gen = build_generator(design, params(rho, k, gamma)).unwrap();
                let n = gen.dim();
                for i in 0..n {
                    let row: f64 = (0..n).map(|j| gen.rate(i, j)).sum();
                    assert!(row.abs() < 1e-12, "row {i} sums to {row}");
                    for j in 0..n {
                        if i != j {
                            assert!(gen.rate(i, j) >= 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stationary_matches_known_symmetric_point() {
        // rho = k = gamma = 1: the full design's distribution has simple
        // rational values (0.2, 0.15, 0.05, ...).
        let gen = build_generator(FlexibilityDesign::Full, params(1.0, 1.0, 1.0)).unwrap();
        let d = stationary_distribution(&gen).unwrap();
        assert_abs_diff_eq!(d.prob(s(0, 0)), 0.2, epsilon = 1e-13);
        assert_abs_diff_eq!(d.prob(s(1, 1)), 0.1, epsilon = 1e-13);
        assert_abs_diff_eq!(d.prob(s(2, 2)), 0.1, epsilon = 1e-13);
        assert_abs_diff_eq!(d.prob(s(1, 0)), 0.15, epsilon = 1e-13);
        assert_abs_diff_eq!(d.prob(s(0, 1)), 0.05, epsilon = 1e-13);

        let gen = build_generator(FlexibilityDesign::Partial, params(1.0, 1.0, 1.0)).unwrap();
        let d = stationary_distribution(&gen).unwrap();
        assert_abs_diff_eq!(d.prob(s(0, 0)), 5.0 / 22.0, epsilon = 1e-13);
    }

    #[test]
    fn stationary_residual_is_tiny_across_parameters() {
        for design in [FlexibilityDesign::Full, FlexibilityDesign::Partial] {
            for (rho, k, gamma) in [
                (0.05, 0.01, 0.001),
                (1.0, 0.5, 0.45),
                (20.0, 0.99, 0.999),
                (7.3, 0.0, 0.2),
                (0.3, 1.0, 1.0),
            ] {
                let gen = build_generator(design, params(rho, k, gamma)).unwrap();
                let d = stationary_distribution(&gen).unwrap();
                let sum: f64 = d.probabilities().iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
                assert!(balance_residual(&gen, &d) < 1e-12);
            }
        }
    }

    #[test]
    fn full_design_gamma_zero_is_singular() {
        let gen = build_generator(FlexibilityDesign::Full, params(1.0, 1.0, 0.0)).unwrap();
        assert!(matches!(
            stationary_distribution(&gen),
            Err(Error::SingularChain(_))
        ));
    }

    #[test]
    fn partial_design_gamma_zero_routes_to_closed_form() {
        let gen = build_generator(FlexibilityDesign::Partial, params(2.0, 1.0, 0.0)).unwrap();
        let d = stationary_distribution(&gen).unwrap();
        assert_abs_diff_eq!(d.prob(s(0, 1)), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.prob(s(1, 1)), 2.0 / 3.0, epsilon = 1e-15);
        for state in [s(0, 0), s(0, 2), s(1, 0), s(1, 2)] {
            assert_eq!(d.prob(state), 0.0);
        }
    }

    #[test]
    fn throughput_known_values() {
        assert_abs_diff_eq!(
            throughput(FlexibilityDesign::Independent, params(1.0, 1.0, 0.3)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            throughput(FlexibilityDesign::Full, params(1.0, 1.0, 1.0)).unwrap(),
            1.2,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            throughput(FlexibilityDesign::Partial, params(1.0, 1.0, 1.0)).unwrap(),
            12.0 / 11.0,
            epsilon = 1e-13
        );
        // gamma = 0 under full flexibility: both servers eventually freeze
        assert_abs_diff_eq!(
            throughput(FlexibilityDesign::Full, params(1.0, 1.0, 0.0)).unwrap(),
            0.0,
            epsilon = 0.0
        );
    }

    #[test]
    fn throughput_positive_and_below_offered_load() {
        for design in FlexibilityDesign::ALL {
            for (rho, k, gamma) in [
                (0.05, 0.01, 0.01),
                (1.0, 0.5, 0.45),
                (20.0, 0.99, 0.999),
                (3.0, 1.0, 0.7),
            ] {
                let p = params(rho, k, gamma);
                let t = throughput(design, p).unwrap();
                assert!(t > 0.0, "{design} at ({rho},{k},{gamma}): {t}");
                assert!(
                    t <= (1.0 + k) * rho + 1e-12,
                    "{design} at ({rho},{k},{gamma}): {t}"
                );
            }
        }
    }

    #[test]
    fn partial_equals_full_when_type2_stream_vanishes() {
        // k = 0 removes type-2 arrivals; overflow of type-1 customers is the
        // same in both designs, so the chains coincide on reachable states.
        for (rho, gamma) in [(0.3, 0.2), (1.0, 0.5), (5.0, 0.9), (2.0, 1.0)] {
            let p = params(rho, 0.0, gamma);
            let t_full = throughput(FlexibilityDesign::Full, p).unwrap();
            let t_partial = throughput(FlexibilityDesign::Partial, p).unwrap();
            assert_abs_diff_eq!(t_full, t_partial, epsilon = 1e-13);
        }
    }

    #[test]
    fn symmetric_load_swaps_server_roles() {
        // at k = 1 the two customer types are statistically exchangeable:
        // relabeling (types 1<->2, servers 1<->2) maps state (i,j) to
        // (sigma(j), sigma(i)) with sigma = 0->0, 1->2, 2->1.
        let swap = |c: u8| match c {
            1 => 2,
            2 => 1,
            other => other,
        };
        for (rho, gamma) in [(0.5, 0.3), (1.0, 0.8), (4.0, 0.05)] {
            let gen = build_generator(FlexibilityDesign::Full, params(rho, 1.0, gamma)).unwrap();
            let d = stationary_distribution(&gen).unwrap();
            for (state, p) in d.iter() {
                let (a, b) = state.codes();
                let mirrored = s(swap(b), swap(a));
                assert_abs_diff_eq!(p, d.prob(mirrored), epsilon = 1e-14);
            }
        }
    }
}
