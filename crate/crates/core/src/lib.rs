//! Executable toolkit for multiplicative Diophantine approximation with
//! restricted denominators on lines.
//!
//! The crate computes, exactly over doubles, the approximation sets
//!
//! * `F(η, ξ) = {x ∈ [0,1] : ‖ax+c‖ < η, ‖bx+d‖ < ξ}`
//! * `E(δ) = {x ∈ [0,1] : ‖ax+c‖·‖bx+d‖ < δ²}`
//!
//! as finite unions of intervals, counts the lattice pairs `N(η, ξ)` that
//! govern their covers, checks the Erdős–Turán inequality on the point sets
//! used to bound those counts, and evaluates the convergence exponent `τ`
//! that upper-bounds `dim_H M(ψ)` for the limsup set
//! `M(ψ) = limsup E_n(ψ(n)^{1/2})`.
//!
//! Module map:
//!
//! * [`sequences`]: coefficient sequences `(a_n, b_n, c_n, d_n)`, `ψ`, `L_n`, `ψ̃`.
//! * [`intervals`]: normalized interval-set algebra on `[0,1]`, covers and premeasures.
//! * [`approx`]: the sets `F`, `E` and the decomposition `E = A ∪ B ∪ C`.
//! * [`lattice`]: `N(η, ξ)`, exponential sums, discrepancy and Erdős–Turán.
//! * [`dimension`]: series convergence, `τ`, truncated limsup sets, box counting.
//! * [`planar`]: the product sets `F′_n`, `E′_n` in `[0,1]²`.
//! * [`verify`]: seeded verification campaigns over randomized instances.

pub mod approx;
pub mod config;
pub mod dimension;
mod error;
pub mod intervals;
pub mod lattice;
pub mod planar;
pub mod sequences;
pub mod verify;

pub use approx::FracParams;
pub use error::{Error, Result};
pub use intervals::{Interval, IntervalSet};
pub use sequences::{PsiSpec, SequenceSpec};
