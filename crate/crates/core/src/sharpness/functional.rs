//! The normalized ratios `W` and `Z`.
//!
//! `W(λ, f, p) = |T_λ f|_q λ^{d/q} / |f|_p` with `q = p/(p-1)`, and
//! `Z(λ, ψ, f) = ‖T_λ f‖G(ψ^{(λ)}) / ‖f‖G(ψ)`.

use crate::error::{Error, Result};
use crate::operator::{FieldLqCurve, OperatorContext, PhaseAmplitudeKernel, DEFAULT_X_GRID_POINTS};
use crate::psi::{
    bgls_norm_with, conjugate_exponent, transform_psi_lambda, NormResult, PsiFunction, SupOptions, DEFAULT_Q_MAX,
};
use crate::quad::{lp_norm, FunctionSpec, QuadConfig};

/// Numerical resolution shared by every functional evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub quad: QuadConfig,
    /// Log-spaced `x` points per side seeding the field partition.
    pub x_grid_points: usize,
    pub sup: SupOptions,
    pub q_max: f64,
    /// `x` interval of the field norms; `None` uses the kernel's `x` box.
    pub x_domain: Option<(f64, f64)>,
    /// Grid multiplier of the stability rerun.
    pub refine: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            quad: QuadConfig::default(),
            x_grid_points: DEFAULT_X_GRID_POINTS,
            sup: SupOptions::default(),
            q_max: DEFAULT_Q_MAX,
            x_domain: None,
            refine: 2,
        }
    }
}

impl SweepConfig {
    /// Every grid doubled: `x` seeds, `p`-sup grid and `q`-sup grid.
    pub fn doubled(&self) -> Self {
        self.scaled_grids(2)
    }

    /// The configuration of the stability rerun: every grid times `refine`.
    pub fn refined(&self) -> Self {
        self.scaled_grids(self.refine.max(2))
    }

    fn scaled_grids(&self, factor: usize) -> Self {
        Self {
            x_grid_points: self.x_grid_points * factor,
            sup: self.sup.scaled(factor),
            ..*self
        }
    }

    pub fn field<'a>(
        &self,
        kernel: &'a PhaseAmplitudeKernel,
        lambda: f64,
        f: &'a FunctionSpec,
    ) -> Result<FieldLqCurve<'a>> {
        let ctx = OperatorContext::new(kernel, lambda, f, self.quad)?;
        let half = kernel.x_half_width();
        let domain = self.x_domain.unwrap_or((-half, half));
        FieldLqCurve::new(ctx, domain, self.quad, self.x_grid_points)
    }
}

fn require_nonzero(norm: f64, what: &str) -> Result<()> {
    if norm == 0.0 {
        return Err(Error::Domain(format!("{what} is zero; the ratio is undefined")));
    }
    if !norm.is_finite() {
        return Err(Error::Domain(format!("{what} is infinite; the ratio is undefined")));
    }
    Ok(())
}

/// `W` from an already-built field and a known `|f|_p`.
pub fn w_from_field(field: &FieldLqCurve<'_>, f_lp: f64, p: f64) -> Result<f64> {
    require_nonzero(f_lp, "|f|_p")?;
    let q = conjugate_exponent(p)?;
    let lq = field.lq_norm(q)?;
    if !lq.converged {
        return Err(Error::NotConverged {
            context: format!("|T_λ f|_{q}"),
            estimate: lq.value,
            error: lq.abs_error_estimate,
        });
    }
    let d = field.context().kernel().dim() as f64;
    Ok(lq.value * field.context().lambda().powf(d / q) / f_lp)
}

/// `|f|_p`, converged or an error.
pub fn f_lp_norm(f: &FunctionSpec, p: f64, cfg: &QuadConfig) -> Result<f64> {
    let pt = lp_norm(f, p, cfg)?;
    if !pt.converged {
        return Err(Error::NotConverged {
            context: format!("|{}|_{p}", f.name()),
            estimate: pt.value,
            error: pt.abs_error_estimate,
        });
    }
    Ok(pt.value)
}

/// `W(λ, f, p) = |T_λ f|_q λ^{d/q} / |f|_p`.
pub fn w_functional(
    kernel: &PhaseAmplitudeKernel,
    lambda: f64,
    f: &FunctionSpec,
    p: f64,
    cfg: &SweepConfig,
) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("W needs p in (1, 2], got {p}")));
    }
    let f_lp = f_lp_norm(f, p, &cfg.quad)?;
    let field = cfg.field(kernel, lambda, f)?;
    w_from_field(&field, f_lp, p)
}

/// `Z` with its numerator and denominator suprema.
#[derive(Debug, Clone, PartialEq)]
pub struct ZValue {
    pub z: f64,
    pub numerator: NormResult,
    pub denominator: NormResult,
}

/// `‖f‖G(ψ)` via the quadrature `L_p` curve.
pub fn f_bgls_norm(f: &FunctionSpec, psi: &PsiFunction, cfg: &SweepConfig) -> Result<NormResult> {
    let n = bgls_norm_with(&f.lp_curve(cfg.quad), psi, &cfg.sup)?;
    require_nonzero(n.value, "‖f‖G(ψ)")?;
    Ok(n)
}

/// `Z` from an already-built field and a known denominator.
pub fn z_from_field(
    field: &FieldLqCurve<'_>,
    psi: &PsiFunction,
    denominator: NormResult,
    cfg: &SweepConfig,
) -> Result<ZValue> {
    let ctx = field.context();
    let weight = transform_psi_lambda(psi, ctx.lambda(), ctx.kernel().dim(), cfg.q_max)?;
    let numerator = bgls_norm_with(field, &weight, &cfg.sup)?;
    if !numerator.value.is_finite() {
        return Err(Error::Domain(format!(
            "‖T_λ f‖G(ψ^(λ)) is infinite at λ = {}: {}",
            ctx.lambda(),
            numerator.diagnostic.clone().unwrap_or_default()
        )));
    }
    Ok(ZValue {
        z: numerator.value / denominator.value,
        numerator,
        denominator,
    })
}

/// `Z(λ, ψ, f) = ‖T_λ f‖G(ψ^{(λ)}) / ‖f‖G(ψ)`, the `q`-supremum running over
/// `(b/(b-1), min(a/(a-1), q_max))`.
pub fn z_functional(
    kernel: &PhaseAmplitudeKernel,
    lambda: f64,
    psi: &PsiFunction,
    f: &FunctionSpec,
    cfg: &SweepConfig,
) -> Result<ZValue> {
    let denominator = f_bgls_norm(f, psi, cfg)?;
    let field = cfg.field(kernel, lambda, f)?;
    z_from_field(&field, psi, denominator, cfg)
}
