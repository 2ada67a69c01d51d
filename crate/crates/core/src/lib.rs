//! Numerical companion to the sharp Tauberian constants `π/2` (two-sided) and
//! `π` (one-sided): the band-limited kernel `K(x) = 2cos x/(π² − 4x²)`, exact
//! piecewise-linear calculus, adaptive quadrature with periodic tails, closed-form
//! Laplace transforms of the extremal examples, the Lipschitz LPs behind the
//! extremal problem, and the bound formulas themselves.
//!
//! Runnable examples live in `examples/`, one per capability:
//!
//! - `kernels`: kernel values, masses and the Jackson constant
//! - `periodic_tail`: tail summation with extrapolation
//! - `pwl_text`: the text format and the moduli of continuity
//! - `laplace_probe`: boundary probes written as CSV
//! - `lp_sandwich`: Lipschitz LP against the zig-zag family
//! - `claim_lp`: the infeasibility LP with and without balance
//! - `bounds_table`: bound reports and the Fejér kernel constants
//! - `convolution_decay`: `(τ ∗ K)(h)` for growing `h`
//! - `mollified`: the smoothed one-sided sequence

pub mod bounds;
pub mod cli;
pub mod error;
pub mod extremal_opt;
pub mod kernels;
pub mod laplace;
pub mod pwl;
pub mod quadrature;

pub use error::{Error, Result};
