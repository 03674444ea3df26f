//! Oscillating integral operators `T_λ f(x) = ∫ exp(iλΦ₁(x,y)) Φ₂(x,y) f(y) dy`
//! and their norms in bilateral grand Lebesgue spaces `G(ψ)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`quad`]: adaptive Gauss-Kronrod integration, endpoint-singular
//!   substitutions, the Fresnel-type integral `I(Λ)` and `L_p` norms of test
//!   functions.
//! * [`psi`]: weight functions `ψ(p)`, `G(ψ)` norms as suprema over the
//!   exponent, fundamental functions and the dual-exponent transforms.
//! * [`operator`]: phase/amplitude kernels, pointwise evaluation of
//!   `u = T_λ f` and `L_q` norms of the resulting field.
//! * [`sharpness`]: the `W` and `Z` functionals, upper-bound and lower-bound
//!   sweeps, CSV/JSON reports.
//! * [`cli`]: configuration schema and the experiment runner behind the
//!   `bgls-osc` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod operator;
pub mod psi;
pub mod quad;
pub mod sharpness;

pub use error::{Error, Result};
pub use num_complex::Complex64;
