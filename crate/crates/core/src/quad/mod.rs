//! Quadrature engine.
//!
//! Every integral in the crate goes through the adaptive Gauss-Kronrod driver
//! in [`gauss_kronrod`]. Oscillatory integrands are pre-split into panels no
//! wider than half a period; `|y|^{-1/2}`-type endpoint singularities are
//! removed by power substitutions before integrating.

pub mod fresnel;
pub mod function;
pub mod gauss_kronrod;

pub use fresnel::{fresnel_i, fresnel_limit, LAMBDA_SWITCH};
pub use function::{
    bump, indicator, integrate_sqrt_singular, lp_norm, witness_f0, FunctionLpCurve, FunctionSpec, LpPoint, Singularity,
};
pub use gauss_kronrod::{
    integrate_adaptive, integrate_box, integrate_panels, integrate_panels_with, uniform_breaks, QuadConfig, QuadResult,
    QuadValue,
};
