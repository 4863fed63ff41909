//! The design-comparison row shared by the `throughput` and `sweep`
//! commands: all three throughputs, the ordering regime where one is
//! defined, the optimal design, and any ties.

use flexloss::{analysis, ctmc, Error, FlexibilityDesign, SystemParams};

/// Two throughputs within this distance of each other count as tied —
/// mirroring the `γ`-side tie window used by regime classification.
const TIE_EPS: f64 = 1e-9;

/// One evaluated `(ρ, k, γ)` point.
pub struct ComparisonRow {
    /// The evaluated parameters.
    pub params: SystemParams,
    /// Independent-design throughput.
    pub t_is: f64,
    /// Partial-flexibility throughput.
    pub t_ps: f64,
    /// Full-flexibility throughput.
    pub t_fs: f64,
    /// Ordering regime 1..=4; `None` on the `k`/`γ` boundaries and at ties,
    /// where the four-regime classification does not apply.
    pub regime_index: Option<u8>,
    /// Design with the largest throughput; a tie resolves to the least
    /// flexible design of the tied set (and is flagged in [`Self::tie`]).
    pub optimal: FlexibilityDesign,
    /// `;`-joined `a=b` pairs whose throughputs are tied, if any.
    pub tie: Option<String>,
}

impl ComparisonRow {
    /// Fixed CSV column order for comparison rows.
    pub const CSV_HEADER: [&'static str; 9] = [
        "rho",
        "k",
        "gamma",
        "t_is",
        "t_ps",
        "t_fs",
        "regime_index",
        "optimal",
        "tie",
    ];

    /// Evaluates one parameter point.
    pub fn compute(params: SystemParams) -> flexloss::Result<Self> {
        let t_is = ctmc::throughput(FlexibilityDesign::Independent, params)?;
        let t_ps = ctmc::throughput(FlexibilityDesign::Partial, params)?;
        let t_fs = ctmc::throughput(FlexibilityDesign::Full, params)?;

        // Pairwise ties seen directly in the computed values.
        let mut pairs = Vec::new();
        if (t_fs - t_ps).abs() <= TIE_EPS {
            pairs.push("full=partial");
        }
        if (t_fs - t_is).abs() <= TIE_EPS {
            pairs.push("full=independent");
        }
        if (t_ps - t_is).abs() <= TIE_EPS {
            pairs.push("partial=independent");
        }

        let mut regime_index = None;
        match analysis::classify_regime(params) {
            Ok(regime) => regime_index = Some(regime.regime_index),
            // gamma sits on a threshold: no regime, and the threshold names
            // the tied pair even if the value gap misses the direct window
            Err(Error::TieBreakUnresolved { threshold_name, .. }) => {
                let pair = match threshold_name {
                    "gamma_g" => "partial=independent",
                    "gamma_b" => "full=independent",
                    _ => "full=partial",
                };
                if !pairs.contains(&pair) {
                    pairs.push(pair);
                }
            }
            // k or gamma on a boundary: regimes don't apply there, but the
            // direct comparison above still stands
            Err(Error::Domain { .. }) => {}
            Err(other) => return Err(other),
        }

        let best = t_is.max(t_ps).max(t_fs);
        let optimal = if t_is >= best - TIE_EPS {
            FlexibilityDesign::Independent
        } else if t_ps >= best - TIE_EPS {
            FlexibilityDesign::Partial
        } else {
            FlexibilityDesign::Full
        };

        Ok(ComparisonRow {
            params,
            t_is,
            t_ps,
            t_fs,
            regime_index,
            optimal,
            tie: if pairs.is_empty() {
                None
            } else {
                Some(pairs.join(";"))
            },
        })
    }

    /// The row rendered in [`Self::CSV_HEADER`] order (missing values as
    /// empty fields).
    pub fn csv_fields(&self) -> [String; 9] {
        use flexloss::fmt::sig12;
        [
            sig12(self.params.rho()),
            sig12(self.params.k()),
            sig12(self.params.gamma()),
            sig12(self.t_is),
            sig12(self.t_ps),
            sig12(self.t_fs),
            self.regime_index.map_or_else(String::new, |r| r.to_string()),
            self.optimal.name().to_string(),
            self.tie.clone().unwrap_or_default(),
        ]
    }
}
