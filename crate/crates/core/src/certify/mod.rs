//! Certified facts about polynomials on circles and discs.
//!
//! * [`circle_lower_bound`]: a positive rational below `min |g|` on `|z| = r`,
//!   from a cover of the circle by arcs, each enclosed in a disc where a
//!   Taylor bound with exact rational remainder holds.
//! * [`circle_upper_bound`] and [`correction_upper_bound`]: length bounds
//!   `L(g)·max(1, r)^deg g`.
//! * [`count_roots_in_disc`] and [`roots_on_circle`]: exact root counts via the
//!   Cauchy index of the circle's rational parametrization.
//!
//! Floating point never enters; every quantity is an exact rational or a
//! dyadic rounding in the safe direction.

mod circle;
mod disc;

pub use circle::{
    circle_lower_bound, circle_upper_bound, correction_upper_bound, replay_circle_lower,
    CircleLowerCert, CircleUpperCert,
};
pub use disc::{count_roots_in_disc, roots_on_circle, CountMethod, RootCountCert};

use serde::{Deserialize, Serialize};

/// Subdivision limits for circle certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyBudget {
    /// Deepest bisection level of an arc.
    pub max_depth: u32,
    /// Total arcs allowed in one cover.
    pub max_arcs: usize,
    /// From this depth on, any arc with a positive bound is accepted even if
    /// the bound is loose.
    pub tight_depth: u32,
    /// Mantissa bits of the dyadic roundings.
    pub precision: u32,
}

impl Default for CertifyBudget {
    fn default() -> Self {
        CertifyBudget {
            max_depth: 16,
            max_arcs: 1 << 16,
            tight_depth: 10,
            precision: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("subdivision budget exhausted after {arcs} arcs (depth {depth})")]
    BudgetExhausted { arcs: usize, depth: u32 },
    #[error("root on the boundary circle")]
    BoundaryRoot,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("certificate replay failed: {0}")]
    ReplayFailure(String),
}

#[cfg(test)]
mod tests;
