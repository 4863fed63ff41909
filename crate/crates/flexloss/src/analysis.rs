//! Design comparison: the three pairwise-equal-throughput thresholds in
//! `γ`, the four throughput-ordering regimes they induce, optimal-design
//! selection, and level-set tracing over `k` for a fixed `ρ`.
//!
//! For fixed `ρ > 0` and `k ∈ (0,1)` the three pairwise comparisons
//! `partial = independent`, `full = independent`, and `full = partial` each
//! hold at exactly one prolonged coefficient, written `γ^g < γ^b < γ^r`
//! (strictly ordered, all below `ρ/(ρ+1)`). They split `(0,1)` into four
//! regimes with a fixed throughput ordering inside each:
//!
//! | regime | interval        | ordering (small → large)      | best        |
//! |--------|-----------------|-------------------------------|-------------|
//! | 1      | `(0, γ^g)`      | full < partial < independent  | independent |
//! | 2      | `(γ^g, γ^b)`    | full < independent < partial  | partial     |
//! | 3      | `(γ^b, γ^r)`    | independent < full < partial  | partial     |
//! | 4      | `(γ^r, 1)`      | independent < partial < full  | full        |

use crate::{ctmc, Error, FlexibilityDesign, Result, SystemParams};

/// Default bisection tolerance on `γ` (≈ 34 bisection steps).
pub const DEFAULT_TOL: f64 = 1e-10;

/// Half-width of the window around a threshold inside which a design
/// ranking is reported as a tie instead of being silently broken.
pub const TIE_WINDOW: f64 = 1e-9;

/// Bracket inset: bisection operates on `[EDGE, 1 - EDGE]`, with the
/// endpoint signs supplied analytically rather than evaluated.
const BRACKET_EDGE: f64 = 1e-12;

/// The three thresholds for one `(ρ, k)` with `k ∈ (0,1)`.
///
/// Invariants (checked by [`thresholds`]):
/// `0 < gamma_g < gamma_b < gamma_r < ρ/(ρ+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    /// Root of `throughput(partial) = throughput(independent)`;
    /// equals `kρ/(kρ+1)` exactly.
    pub gamma_g: f64,
    /// Root of `throughput(full) = throughput(independent)`.
    pub gamma_b: f64,
    /// Root of `throughput(full) = throughput(partial)`.
    pub gamma_r: f64,
    /// The type-1 offered load the set was computed for.
    pub rho: f64,
    /// The asymmetry degree the set was computed for.
    pub k: f64,
}

/// Result of a level-set root search that can degenerate at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRoot {
    /// The unique crossing point in `(0, 1)`.
    Unique(f64),
    /// `k = 0` boundary: the compared designs coincide for every `γ`, and
    /// the root is reported as the stated boundary value.
    Degenerate(f64),
}

impl ThresholdRoot {
    /// The numeric threshold, whether unique or degenerate.
    pub fn value(self) -> f64 {
        match self {
            ThresholdRoot::Unique(g) | ThresholdRoot::Degenerate(g) => g,
        }
    }

    /// Whether this is the degenerate `k = 0` case.
    pub fn is_degenerate(self) -> bool {
        matches!(self, ThresholdRoot::Degenerate(_))
    }
}

/// A throughput ordering of the three designs plus its regime number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeOrdering {
    /// The three designs from smallest to largest throughput.
    pub ordering: [FlexibilityDesign; 3],
    /// Regime number 1..=4 (see the module table).
    pub regime_index: u8,
}

/// Which pair of designs a level-set curve equalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelSet {
    /// `throughput(full) = throughput(partial)` — the `γ^r` curve.
    FullVsPartial,
    /// `throughput(full) = throughput(independent)` — the `γ^b` curve.
    FullVsIndependent,
    /// `throughput(partial) = throughput(independent)` — the `γ^g` curve.
    PartialVsIndependent,
}

impl LevelSet {
    /// Snake-case identifier used in serialized output.
    pub fn name(self) -> &'static str {
        match self {
            LevelSet::FullVsPartial => "full_vs_partial",
            LevelSet::FullVsIndependent => "full_vs_independent",
            LevelSet::PartialVsIndependent => "partial_vs_independent",
        }
    }
}

/// One level-set curve traced over a `k` grid at fixed `ρ`.
///
/// `points` holds `(k, γ)` pairs with `k` strictly increasing; every `γ`
/// lies in `(0, ρ/(ρ+1)]` and equalizes the two designs' throughputs within
/// the bisection certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetCurve {
    /// The fixed type-1 offered load.
    pub rho: f64,
    /// Which design pair the curve equalizes.
    pub which: LevelSet,
    /// `(k, γ)` samples, `k` strictly increasing.
    pub points: Vec<(f64, f64)>,
}

fn validate_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho <= 0.0 {
        return Err(Error::domain(
            "rho",
            format!("must be a finite positive real, got {rho}"),
        ));
    }
    Ok(())
}

fn validate_tol(tol: f64) -> Result<()> {
    if !tol.is_finite() || tol <= 0.0 || tol >= 1.0 {
        return Err(Error::domain(
            "tol",
            format!("must be a positive real below 1, got {tol}"),
        ));
    }
    Ok(())
}

/// Threshold at which the partial design stops lagging the independent one:
/// `γ^g = kρ/(kρ+1)`, exact (no root search needed — the difference of the
/// two throughputs carries the linear factor `γ − kρ + γkρ`).
///
/// # Errors
/// [`Error::Domain`] if `ρ ≤ 0` or `k ∉ (0, 1]`; at `k = 0` the level set
/// degenerates to `γ = 0` and no interior threshold exists.
pub fn gamma_g(rho: f64, k: f64) -> Result<f64> {
    validate_rho(rho)?;
    if !k.is_finite() || k <= 0.0 || k > 1.0 {
        return Err(Error::domain(
            "k",
            format!("must lie in (0, 1] for a non-degenerate threshold, got {k}"),
        ));
    }
    Ok(k * rho / (k * rho + 1.0))
}

/// Signed throughput difference `throughput(full) − throughput(other)` at
/// one `γ`.
fn throughput_gap(
    rho: f64,
    k: f64,
    gamma: f64,
    other: FlexibilityDesign,
) -> Result<f64> {
    let p = SystemParams::new(rho, k, gamma)?;
    Ok(ctmc::throughput(FlexibilityDesign::Full, p)? - ctmc::throughput(other, p)?)
}

/// Bisection for the unique `γ ∈ (0,1)` where the full design's throughput
/// crosses `other`'s. The endpoint signs are analytic facts (full is
/// strictly worst at `γ → 0` and strictly best at `γ = 1` for `k ∈ (0,1)`),
/// so only interior points are ever evaluated.
fn bisect_gap_root(
    rho: f64,
    k: f64,
    tol: f64,
    other: FlexibilityDesign,
) -> Result<f64> {
    let mut lo = BRACKET_EDGE; // f(lo) < 0 analytically
    let mut hi = 1.0 - BRACKET_EDGE; // f(hi) > 0 analytically
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        if iterations > 200 {
            return Err(Error::Bracket(format!(
                "bisection for full-vs-{other} at (rho={rho}, k={k}) failed to converge \
                 to tol={tol:e} within 200 iterations"
            )));
        }
        let mid = 0.5 * (lo + hi);
        if throughput_gap(rho, k, mid, other)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);

    // Certificate: both throughputs are bounded by 2 and vary smoothly in
    // gamma, so at a true crossing the residual gap must be O(tol).
    let residual = throughput_gap(rho, k, root, other)?.abs();
    let cap = f64::max(1e-9, 100.0 * tol);
    if residual > cap {
        return Err(Error::Bracket(format!(
            "root certificate failed for full-vs-{other} at (rho={rho}, k={k}): \
             |throughput gap| = {residual:e} at gamma = {root} exceeds {cap:e}"
        )));
    }
    Ok(root)
}

/// Threshold at which the full design overtakes the partial one: the unique
/// root `γ^r` of `throughput(full) = throughput(partial)` in `(0,1)`,
/// found by bisection to within `tol` and certified post-hoc.
///
/// # Errors
/// * [`Error::Domain`] if `ρ ≤ 0`, `tol` invalid, or `k ∉ (0, 1]`: at
///   `k = 0` the two designs have identical throughput for every `γ`, so no
///   unique root exists.
/// * [`Error::Bracket`] if the root certificate fails (numerical breakdown,
///   not a user error).
/// * [`Error::OrderingViolation`] if the root is not below `ρ/(ρ+1)`.
///
/// At `k = 1` all three thresholds coincide at `ρ/(ρ+1)`, returned directly.
pub fn gamma_r(rho: f64, k: f64, tol: f64) -> Result<f64> {
    validate_rho(rho)?;
    validate_tol(tol)?;
    if k == 1.0 {
        return Ok(rho / (rho + 1.0));
    }
    if !k.is_finite() || k <= 0.0 || k >= 1.0 {
        return Err(Error::domain(
            "k",
            format!(
                "must lie in (0, 1] (full and partial coincide identically at k = 0), got {k}"
            ),
        ));
    }
    let root = bisect_gap_root(rho, k, tol, FlexibilityDesign::Partial)?;
    let cap = rho / (rho + 1.0);
    if root >= cap + tol {
        return Err(Error::OrderingViolation(format!(
            "gamma_r = {root} at (rho={rho}, k={k}) is not below rho/(rho+1) = {cap}"
        )));
    }
    Ok(root)
}

/// Threshold at which the full design overtakes the independent one: the
/// root `γ^b` of `throughput(full) = throughput(independent)`.
///
/// Same contract as [`gamma_r`], except `k = 0` is reported as
/// [`ThresholdRoot::Degenerate`]`(0)` (with no type-2 stream, the full
/// design is weaker than independent for every `γ < 1`, and the level set
/// collapses onto the boundary) rather than an error.
pub fn gamma_b(rho: f64, k: f64, tol: f64) -> Result<ThresholdRoot> {
    validate_rho(rho)?;
    validate_tol(tol)?;
    if k == 0.0 {
        return Ok(ThresholdRoot::Degenerate(0.0));
    }
    if k == 1.0 {
        return Ok(ThresholdRoot::Unique(rho / (rho + 1.0)));
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(
            "k",
            format!("must lie in [0, 1], got {k}"),
        ));
    }
    let root = bisect_gap_root(rho, k, tol, FlexibilityDesign::Independent)?;
    let cap = rho / (rho + 1.0);
    if root >= cap + tol {
        return Err(Error::OrderingViolation(format!(
            "gamma_b = {root} at (rho={rho}, k={k}) is not below rho/(rho+1) = {cap}"
        )));
    }
    Ok(ThresholdRoot::Unique(root))
}

/// All three thresholds for `k ∈ (0,1)`, with the strict ordering
/// `0 < γ^g < γ^b < γ^r < ρ/(ρ+1)` verified.
///
/// # Errors
/// Component errors propagate; [`Error::OrderingViolation`] if the chain
/// fails by more than `tol` anywhere (that would indicate a numerical
/// breakdown, not a user error).
pub fn thresholds(rho: f64, k: f64, tol: f64) -> Result<ThresholdSet> {
    validate_rho(rho)?;
    if !k.is_finite() || k <= 0.0 || k >= 1.0 {
        return Err(Error::domain(
            "k",
            format!("must lie strictly inside (0, 1) for a full threshold set, got {k}"),
        ));
    }
    let g = gamma_g(rho, k)?;
    let b = match gamma_b(rho, k, tol)? {
        ThresholdRoot::Unique(v) => v,
        ThresholdRoot::Degenerate(_) => unreachable!("k is strictly interior"),
    };
    let r = gamma_r(rho, k, tol)?;

    let chain = [(0.0, g), (g, b), (b, r), (r, rho / (rho + 1.0))];
    for (lower, upper) in chain {
        if upper - lower <= -tol {
            return Err(Error::OrderingViolation(format!(
                "threshold chain violated at (rho={rho}, k={k}): expected {lower} < {upper} \
                 in 0 < gamma_g < gamma_b < gamma_r < rho/(rho+1) \
                 [gamma_g={g}, gamma_b={b}, gamma_r={r}]"
            )));
        }
    }
    Ok(ThresholdSet {
        gamma_g: g,
        gamma_b: b,
        gamma_r: r,
        rho,
        k,
    })
}

/// Threshold summary that also covers the boundary values of `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdReport {
    /// `k ∈ (0,1)`: the three distinct thresholds.
    Interior(ThresholdSet),
    /// `k = 0`: no type-2 stream. Full and partial coincide identically
    /// (every `γ` equalizes them), and both trail the independent design
    /// for all `γ < 1`, so every level set is degenerate.
    Degenerate {
        /// The type-1 offered load.
        rho: f64,
    },
    /// `k = 1`: the symmetric system; all three thresholds coincide.
    Coincident {
        /// The type-1 offered load.
        rho: f64,
        /// The common threshold `ρ/(ρ+1)`.
        gamma: f64,
    },
}

/// Thresholds for any `k ∈ [0, 1]`, reporting the boundary degeneracies
/// explicitly instead of erroring.
pub fn threshold_report(rho: f64, k: f64, tol: f64) -> Result<ThresholdReport> {
    validate_rho(rho)?;
    validate_tol(tol)?;
    if !k.is_finite() || !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(
            "k",
            format!("must lie in [0, 1], got {k}"),
        ));
    }
    if k == 0.0 {
        Ok(ThresholdReport::Degenerate { rho })
    } else if k == 1.0 {
        Ok(ThresholdReport::Coincident {
            rho,
            gamma: rho / (rho + 1.0),
        })
    } else {
        Ok(ThresholdReport::Interior(thresholds(rho, k, tol)?))
    }
}

/// Classifies `(ρ, k, γ)` into one of the four ordering regimes and returns
/// the predicted smallest-to-largest design ordering, cross-checked against
/// a direct comparison of the three computed throughputs.
///
/// # Errors
/// * [`Error::Domain`] unless `k ∈ (0,1)` and `γ ∈ (0,1)` strictly (the
///   boundaries collapse regimes; compare throughputs directly there).
/// * [`Error::TieBreakUnresolved`] if `γ` lies within [`TIE_WINDOW`] of a
///   threshold — the ranking is a tie at working precision and is reported,
///   never silently broken.
/// * [`Error::InconsistentOrdering`] if the direct comparison disagrees
///   with the regime prediction (numerical breakdown; not expected for any
///   valid input).
pub fn classify_regime(params: SystemParams) -> Result<RegimeOrdering> {
    let (rho, k, gamma) = (params.rho(), params.k(), params.gamma());
    if k <= 0.0 || k >= 1.0 {
        return Err(Error::domain(
            "k",
            format!("regime classification needs k strictly inside (0, 1), got {k}"),
        ));
    }
    if gamma <= 0.0 || gamma >= 1.0 {
        return Err(Error::domain(
            "gamma",
            format!("regime classification needs gamma strictly inside (0, 1), got {gamma}"),
        ));
    }

    let ts = thresholds(rho, k, DEFAULT_TOL)?;
    for (name, value) in [
        ("gamma_g", ts.gamma_g),
        ("gamma_b", ts.gamma_b),
        ("gamma_r", ts.gamma_r),
    ] {
        if (gamma - value).abs() <= TIE_WINDOW {
            return Err(Error::TieBreakUnresolved {
                gamma,
                threshold_name: name,
                threshold: value,
                tol: TIE_WINDOW,
            });
        }
    }

    use FlexibilityDesign::{Full, Independent, Partial};
    let (regime_index, predicted) = if gamma < ts.gamma_g {
        (1, [Full, Partial, Independent])
    } else if gamma < ts.gamma_b {
        (2, [Full, Independent, Partial])
    } else if gamma < ts.gamma_r {
        (3, [Independent, Full, Partial])
    } else {
        (4, [Independent, Partial, Full])
    };

    let mut measured = [
        (Independent, ctmc::throughput(Independent, params)?),
        (Partial, ctmc::throughput(Partial, params)?),
        (Full, ctmc::throughput(Full, params)?),
    ];
    measured.sort_by(|a, b| a.1.total_cmp(&b.1));
    let actual = [measured[0].0, measured[1].0, measured[2].0];

    if actual != predicted {
        return Err(Error::InconsistentOrdering(format!(
            "regime {regime_index} predicts {} < {} < {} but measured throughputs give \
             {} < {} < {} at (rho={rho}, k={k}, gamma={gamma})",
            predicted[0], predicted[1], predicted[2], actual[0], actual[1], actual[2]
        )));
    }

    Ok(RegimeOrdering {
        ordering: predicted,
        regime_index,
    })
}

/// The design with the largest throughput at `(ρ, k, γ)`:
/// independent on `(0, γ^g)`, partial on `(γ^g, γ^r)`, full on `(γ^r, 1)`.
/// Equals the argmax of the three throughputs (verified internally).
///
/// # Errors
/// As [`classify_regime`].
pub fn optimal_design(params: SystemParams) -> Result<FlexibilityDesign> {
    Ok(*classify_regime(params)?
        .ordering
        .last()
        .expect("orderings always contain three designs"))
}

/// In the symmetric system (`k = 1`) the full and independent designs trade
/// places at load `ρ* = γ/(1−γ)`: full flexibility wins for `ρ < ρ*` —
/// equivalently `γ > ρ/(ρ+1)` — and loses above it.
///
/// # Errors
/// [`Error::Domain`] unless `γ ∈ (0,1)` strictly; at `γ = 1` the crossover
/// is unbounded (full flexibility dominates at every load).
pub fn critical_rho_symmetric(gamma: f64) -> Result<f64> {
    if gamma == 1.0 {
        return Err(Error::domain(
            "gamma",
            "crossover load is unbounded at gamma = 1 (full flexibility dominates at \
             every load)"
                .to_string(),
        ));
    }
    if !gamma.is_finite() || gamma <= 0.0 || gamma >= 1.0 {
        return Err(Error::domain(
            "gamma",
            format!("must lie strictly inside (0, 1), got {gamma}"),
        ));
    }
    Ok(gamma / (1.0 - gamma))
}

/// Traces all three level-set curves over a strictly increasing `k` grid at
/// fixed `ρ`, returning them in the order full-vs-partial (`γ^r`),
/// full-vs-independent (`γ^b`), partial-vs-independent (`γ^g`).
///
/// # Errors
/// [`Error::Domain`] if the grid is empty, out of `(0,1)`, or not strictly
/// increasing; component errors propagate.
pub fn trace_level_sets(
    rho: f64,
    k_grid: &[f64],
    tol: f64,
) -> Result<[LevelSetCurve; 3]> {
    validate_rho(rho)?;
    validate_tol(tol)?;
    if k_grid.is_empty() {
        return Err(Error::domain("k_grid", "must contain at least one k".to_string()));
    }
    if !k_grid.iter().all(|&k| k.is_finite() && k > 0.0 && k < 1.0) {
        return Err(Error::domain(
            "k_grid",
            "every k must lie strictly inside (0, 1)".to_string(),
        ));
    }
    for window in k_grid.windows(2) {
        if window[1] <= window[0] {
            return Err(Error::domain(
                "k_grid",
                format!(
                    "must be strictly increasing, got {} before {}",
                    window[0], window[1]
                ),
            ));
        }
    }

    let mut red = Vec::with_capacity(k_grid.len());
    let mut blue = Vec::with_capacity(k_grid.len());
    let mut green = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let ts = thresholds(rho, k, tol)?;
        red.push((k, ts.gamma_r));
        blue.push((k, ts.gamma_b));
        green.push((k, ts.gamma_g));
    }

    Ok([
        LevelSetCurve {
            rho,
            which: LevelSet::FullVsPartial,
            points: red,
        },
        LevelSetCurve {
            rho,
            which: LevelSet::FullVsIndependent,
            points: blue,
        },
        LevelSetCurve {
            rho,
            which: LevelSet::PartialVsIndependent,
            points: green,
        },
    ])
}
