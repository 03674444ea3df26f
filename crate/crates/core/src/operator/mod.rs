//! Oscillating operators `T_λ f(x) = ∫ exp(iλΦ₁(x,y)) Φ₂(x,y) f(y) dy`.
//!
//! Integration in `y` is split into panels spanning at most half a period of
//! `exp(iλΦ₁)`, i.e. width `π / (λ max|∂Φ₁/∂y|)`, before adaptive refinement.

pub mod field;
pub mod kernel;

pub use field::{
    apply_operator, default_x_grid, field_lq_norm, grid_1d, FieldLqCurve, LqValue, OperatorContext, PointValue,
    SampledField, DEFAULT_X_GRID_POINTS,
};
pub use kernel::{
    check_nondegeneracy, default_fd_step, mixed_hessian, support_samples, AmplitudeKind, PhaseAmplitudeKernel,
};
