//! Throughput analysis for a two-server loss system in which one customer
//! type may be served by a non-dedicated server at a prolonged (slower)
//! rate.
//!
//! # The system
//!
//! Two exponential servers, no waiting room. Type-1 customers arrive as a
//! Poisson stream of rate `rho` and are dedicated to server 1; type-2
//! customers arrive at rate `k * rho` (with `k ∈ [0, 1]`) and are dedicated
//! to server 2. A customer served by its dedicated server completes at rate
//! 1; a customer served by the other (non-dedicated) server completes at the
//! prolonged rate `gamma ∈ [0, 1]`. Customers that find no admissible idle
//! server are lost.
//!
//! Three overflow designs are compared:
//!
//! * [`FlexibilityDesign::Independent`] — no overflow; two independent
//!   Erlang loss servers.
//! * [`FlexibilityDesign::Partial`] — only type-1 customers may overflow to
//!   server 2.
//! * [`FlexibilityDesign::Full`] — both types may overflow.
//!
//! # Modules
//!
//! * [`model`] — parameter and state types shared by everything else.
//! * [`ctmc`] — generator construction and the exact stationary solve; the
//!   long-run throughput of each design.
//! * [`closed_form`] — exact rational-function solutions for the special
//!   cases `gamma = 1`, `k = 1`, and `gamma = 0`.
//! * [`analysis`] — the three pairwise-comparison thresholds in `gamma`,
//!   regime classification, optimal-design selection, and level-set tracing.
//! * [`simulate`] — a discrete-event simulation used as an independent check
//!   on the analytic results.
//! * [`plot`] — SVG rendering of the level-set curves and CSV export.
//! * [`fmt`] — the deterministic 12-significant-digit numeric formatting
//!   every emitter uses.

pub mod analysis;
pub mod closed_form;
pub mod ctmc;
mod error;
pub mod fmt;
pub mod model;
pub mod plot;
pub mod simulate;

pub use error::Error;
pub use model::{
    FlexibilityDesign, ServerOccupancy, StationaryDistribution, SystemParams, SystemState,
};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
