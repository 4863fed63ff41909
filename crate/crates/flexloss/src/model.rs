//! Parameter and state types shared by every other module.
//!
//! The system has two servers and two customer types. Server `i` is the
//! dedicated server of type-`i` customers; a customer at its dedicated
//! server completes at rate 1, at the other server at rate `gamma`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Which overflow (redirection) rules are in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlexibilityDesign {
    /// No overflow: two independent single-server loss systems.
    Independent,
    /// Only type-1 customers may overflow to server 2.
    Partial,
    /// Both customer types may overflow to the other server.
    Full,
}

impl FlexibilityDesign {
    /// All designs, in fixed comparison order.
    pub const ALL: [FlexibilityDesign; 3] = [
        FlexibilityDesign::Independent,
        FlexibilityDesign::Partial,
        FlexibilityDesign::Full,
    ];

    /// Lower-case name used in CLI flags and serialized output.
    pub fn name(self) -> &'static str {
        match self {
            FlexibilityDesign::Independent => "independent",
            FlexibilityDesign::Partial => "partial",
            FlexibilityDesign::Full => "full",
        }
    }

    /// Whether a type-1 arrival that finds server 1 busy may take an idle
    /// server 2.
    pub fn type1_overflows(self) -> bool {
        matches!(
            self,
            FlexibilityDesign::Full | FlexibilityDesign::Partial
        )
    }

    /// Whether a type-2 arrival that finds server 2 busy may take an idle
    /// server 1.
    pub fn type2_overflows(self) -> bool {
        matches!(self, FlexibilityDesign::Full)
    }
}

impl fmt::Display for FlexibilityDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlexibilityDesign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "independent" => Ok(FlexibilityDesign::Independent),
            "partial" => Ok(FlexibilityDesign::Partial),
            "full" => Ok(FlexibilityDesign::Full),
            other => Err(Error::domain(
                "design",
                format!("expected one of independent|partial|full, got `{other}`"),
            )),
        }
    }
}

/// What a single server is doing: idle, serving a type-1 customer, or
/// serving a type-2 customer. The numeric codes 0/1/2 are used in state
/// labels like `(2,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ServerOccupancy {
    /// Code 0: the server is empty.
    Idle,
    /// Code 1: the server holds a type-1 customer.
    Type1,
    /// Code 2: the server holds a type-2 customer.
    Type2,
}

impl ServerOccupancy {
    /// Numeric state code (0, 1, or 2).
    pub fn code(self) -> u8 {
        match self {
            ServerOccupancy::Idle => 0,
            ServerOccupancy::Type1 => 1,
            ServerOccupancy::Type2 => 2,
        }
    }

    fn from_code(code: u8) -> ServerOccupancy {
        match code {
            0 => ServerOccupancy::Idle,
            1 => ServerOccupancy::Type1,
            _ => ServerOccupancy::Type2,
        }
    }
}

/// Joint state `(server1, server2)` of the two servers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemState {
    /// Occupancy of server 1 (dedicated to type-1 customers).
    pub server1: ServerOccupancy,
    /// Occupancy of server 2 (dedicated to type-2 customers).
    pub server2: ServerOccupancy,
}

impl SystemState {
    /// Builds a state from the two occupancies.
    pub fn new(server1: ServerOccupancy, server2: ServerOccupancy) -> SystemState {
        SystemState { server1, server2 }
    }

    /// Builds a state from numeric codes, e.g. `(2, 1)`.
    ///
    /// # Panics
    /// Panics if a code exceeds 2.
    pub fn from_codes(server1: u8, server2: u8) -> SystemState {
        assert!(server1 <= 2 && server2 <= 2, "state codes must be 0, 1, or 2");
        SystemState {
            server1: ServerOccupancy::from_code(server1),
            server2: ServerOccupancy::from_code(server2),
        }
    }

    /// Numeric code pair `(server1, server2)`.
    pub fn codes(self) -> (u8, u8) {
        (self.server1.code(), self.server2.code())
    }
}

impl fmt::Display for SystemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.codes();
        write!(f, "({a},{b})")
    }
}

const fn st(server1: u8, server2: u8) -> SystemState {
    let s1 = match server1 {
        0 => ServerOccupancy::Idle,
        1 => ServerOccupancy::Type1,
        _ => ServerOccupancy::Type2,
    };
    let s2 = match server2 {
        0 => ServerOccupancy::Idle,
        1 => ServerOccupancy::Type1,
        _ => ServerOccupancy::Type2,
    };
    SystemState { server1: s1, server2: s2 }
}

/// The nine states of the full-flexibility chain, row-major in
/// `(server1, server2)`.
static FULL_STATES: [SystemState; 9] = [
    st(0, 0), st(0, 1), st(0, 2),
    st(1, 0), st(1, 1), st(1, 2),
    st(2, 0), st(2, 1), st(2, 2),
];

/// The six states of the partial-flexibility chain (server 1 never holds a
/// type-2 customer), row-major in `(server1, server2)`.
static PARTIAL_STATES: [SystemState; 6] = [
    st(0, 0), st(0, 1), st(0, 2),
    st(1, 0), st(1, 1), st(1, 2),
];

/// Canonical ordered state space of a design's Markov chain.
///
/// The ordering is row-major in `(server1, server2)` and stable across
/// calls; distribution vectors, generator rows, and CSV columns all use it.
///
/// # Errors
/// [`Error::UnsupportedDesign`] for [`FlexibilityDesign::Independent`]: the
/// independent system is handled by its product-form closed form and never
/// by a joint chain.
pub fn state_space(design: FlexibilityDesign) -> Result<&'static [SystemState]> {
    match design {
        FlexibilityDesign::Full => Ok(&FULL_STATES),
        FlexibilityDesign::Partial => Ok(&PARTIAL_STATES),
        FlexibilityDesign::Independent => Err(Error::UnsupportedDesign(design)),
    }
}

/// Position of `state` in `state_space(design)`, if it is a legal state of
/// that design.
pub(crate) fn state_index(design: FlexibilityDesign, state: SystemState) -> Option<usize> {
    let (a, b) = state.codes();
    match design {
        FlexibilityDesign::Full => Some((3 * a + b) as usize),
        FlexibilityDesign::Partial if a <= 1 => Some((3 * a + b) as usize),
        _ => None,
    }
}

/// Validated model parameters.
///
/// * `rho` — offered load of type-1 customers, strictly positive.
/// * `k` — asymmetry degree in `[0, 1]`; type-2 customers arrive at rate
///   `k * rho`. `k = 1` is the symmetric system, `k = 0` removes type-2
///   arrivals entirely.
/// * `gamma` — prolonged coefficient in `[0, 1]`; service at a
///   non-dedicated server runs at rate `gamma` instead of 1.
///
/// Construction is the single validation gate: every operation in the crate
/// accepts a `SystemParams` and may assume the ranges above. Boundary values
/// `k ∈ {0, 1}` and `gamma ∈ {0, 1}` are accepted here; operations with
/// degenerate behaviour at a boundary handle it explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    rho: f64,
    k: f64,
    gamma: f64,
}

impl SystemParams {
    /// Validates `(rho, k, gamma)` and returns the parameter set.
    ///
    /// # Errors
    /// [`Error::Domain`] naming exactly one offending field — the first
    /// violation in the order `rho`, `k`, `gamma` — when `rho ≤ 0`,
    /// `k ∉ [0,1]`, `gamma ∉ [0,1]`, or any value is non-finite.
    pub fn new(rho: f64, k: f64, gamma: f64) -> Result<SystemParams> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(Error::domain(
                "rho",
                format!("must be a finite positive real, got {rho}"),
            ));
        }
        if !k.is_finite() || !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(
                "k",
                format!("must lie in [0, 1], got {k}"),
            ));
        }
        if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(
                "gamma",
                format!("must lie in [0, 1], got {gamma}"),
            ));
        }
        Ok(SystemParams { rho, k, gamma })
    }

    /// Type-1 offered load `ρ`.
    pub fn rho(self) -> f64 {
        self.rho
    }

    /// Asymmetry degree `k` (type-2 arrival rate is `k·ρ`).
    pub fn k(self) -> f64 {
        self.k
    }

    /// Prolonged coefficient `γ` (service rate at a non-dedicated server).
    pub fn gamma(self) -> f64 {
        self.gamma
    }

    /// Same `rho` and `k` with a different `gamma` (revalidated).
    pub fn with_gamma(self, gamma: f64) -> Result<SystemParams> {
        SystemParams::new(self.rho, self.k, gamma)
    }
}

/// A stationary probability vector over a design's state space.
///
/// Invariants, enforced on construction:
/// * the key set is exactly `state_space(design)`, in canonical order;
/// * every probability is ≥ −1e-14 before clamping (tiny negative solver
///   round-off is clamped to 0);
/// * the probabilities sum to 1 within 1e-12 (then renormalized exactly).
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    design: FlexibilityDesign,
    probs: Vec<f64>,
}

impl StationaryDistribution {
    /// Wraps a probability vector aligned with `state_space(design)`.
    ///
    /// # Errors
    /// * [`Error::UnsupportedDesign`] for the independent design.
    /// * [`Error::Domain`] on `probabilities` when the length is wrong, an
    ///   entry is below −1e-14 or non-finite, or the sum strays from 1 by
    ///   more than 1e-12.
    pub fn new(design: FlexibilityDesign, probabilities: Vec<f64>) -> Result<Self> {
        let states = state_space(design)?;
        if probabilities.len() != states.len() {
            return Err(Error::domain(
                "probabilities",
                format!(
                    "expected {} entries for the {design} design, got {}",
                    states.len(),
                    probabilities.len()
                ),
            ));
        }
        let mut probs = probabilities;
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -1e-14 {
                return Err(Error::domain(
                    "probabilities",
                    format!("entry for state {} is {p}, not a probability", states[i]),
                ));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::domain(
                "probabilities",
                format!("sum is {sum}, must equal 1 within 1e-12"),
            ));
        }
        for p in &mut probs {
            *p /= sum;
        }
        Ok(StationaryDistribution { design, probs })
    }

    /// The design whose state space this distribution covers.
    pub fn design(&self) -> FlexibilityDesign {
        self.design
    }

    /// The canonical state ordering of the probabilities.
    pub fn states(&self) -> &'static [SystemState] {
        state_space(self.design).expect("constructed distributions have a state space")
    }

    /// Probabilities in canonical state order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of one state.
    ///
    /// # Panics
    /// Panics if `state` is not in this design's state space (e.g. server 1
    /// holding a type-2 customer under the partial design).
    pub fn prob(&self, state: SystemState) -> f64 {
        match state_index(self.design, state) {
            Some(i) => self.probs[i],
            None => panic!(
                "state {state} is not in the {} design's state space",
                self.design
            ),
        }
    }

    /// `(state, probability)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (SystemState, f64)> + '_ {
        self.states().iter().copied().zip(self.probs.iter().copied())
    }
}
