//! Series convergence, the exponent `τ`, and truncated-limsup experiments.

/// Invariants checked by the verification harness.
pub const PROPERTIES: &[&str] = &[
    "dimension/numeric-closed-agreement",
    "dimension/corollary-consistency",
    "dimension/thm12-dominates-plain",
    "dimension/limsup-monotone",
    "dimension/box-slope-at-most-one",
];

mod boxdim;
mod series;

pub use boxdim::{
    box_dimension_of_set, dyadic_scales, estimate_box_dimension, truncated_limsup, BoxDimEstimate, EXPLORATORY,
    MAX_SCALE_EXPONENT,
};
pub use series::{
    check_convergence_conditions, compute_tau, converges, corollary_threshold, term_value, ConditionsReport,
    Convergence, Evidence, Growth, HypothesisReport, PartialSumTrace, SeriesFamily, SeriesSpec, TauMethod,
    TauResult, TermThreshold, TermVerdict, Verdict, N_MAX, RATIO_BAND, RATIO_DRIFT, S_MAX, S_MIN,
};
