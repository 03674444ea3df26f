use crate::error::Result;
use crate::psi::{bgls_norm, ClosedFormCurve, NormResult, PsiFunction};
use crate::quad::{lp_norm, witness_f0, FunctionSpec, QuadConfig};

/// The lower-bound pair: `f₀(y) = |y|^{-1/2}` on `0 < |y| ≤ 1` and
/// `ψ₀(p) = [4/(2-p)]^{1/p}` on `(1, 2)`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub f0: FunctionSpec,
    pub psi0: PsiFunction,
}

impl Default for Witness {
    fn default() -> Self {
        Self::new()
    }
}

/// One row of the closed-form versus quadrature comparison.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WitnessRow {
    pub p: f64,
    pub quadrature: f64,
    pub closed_form: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WitnessCheck {
    pub rows: Vec<WitnessRow>,
    pub max_rel_error: f64,
}

pub const WITNESS_P_GRID: [f64; 5] = [1.01, 1.25, 1.5, 1.75, 1.99];

impl Witness {
    pub fn new() -> Self {
        Self {
            f0: witness_f0(),
            psi0: PsiFunction::psi0(),
        }
    }

    /// `p ↦ [4/(2-p)]^{1/p}` on `(1, 2)`.
    pub fn closed_form_curve(&self) -> ClosedFormCurve {
        ClosedFormCurve::new(1.0, 2.0, |p| (4.0 / (2.0 - p)).powf(1.0 / p))
    }

    /// Quadrature `|f₀|_p` against the closed form at each `p`.
    pub fn verify(&self, ps: &[f64], cfg: &QuadConfig) -> Result<WitnessCheck> {
        let mut rows = Vec::with_capacity(ps.len());
        for &p in ps {
            let quadrature = lp_norm(&self.f0, p, cfg)?.value;
            let closed_form = (4.0 / (2.0 - p)).powf(1.0 / p);
            rows.push(WitnessRow {
                p,
                quadrature,
                closed_form,
                rel_error: (quadrature / closed_form - 1.0).abs(),
            });
        }
        let max_rel_error = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
        Ok(WitnessCheck { rows, max_rel_error })
    }

    /// `‖f₀‖G(ψ₀)` from the quadrature curve.
    pub fn norm(&self, cfg: QuadConfig) -> Result<NormResult> {
        bgls_norm(&self.f0.lp_curve(cfg), &self.psi0)
    }
}

/// Left side of the exponent identity used in the lower-bound argument:
/// `(2-p)^{1/p} / (q-2)^{1/q}` with `q = p/(p-1)`.
pub fn proof_ratio_lhs(p: f64) -> f64 {
    let q = p / (p - 1.0);
    (2.0 - p).powf(1.0 / p) / (q - 2.0).powf(1.0 / q)
}

/// Right side as stated in the lower-bound argument: `(p-1)^{1/p - 1}`.
pub fn proof_ratio_rhs(p: f64) -> f64 {
    (p - 1.0).powf(1.0 / p - 1.0)
}

/// What the left side actually simplifies to:
/// `(2-p)^{(2-p)/p} (p-1)^{(p-1)/p}`, bounded below on `(1, 2)`.
pub fn proof_ratio_simplified(p: f64) -> f64 {
    (2.0 - p).powf((2.0 - p) / p) * (p - 1.0).powf((p - 1.0) / p)
}

/// `min (p-1)^{1/p-1}` over `n` uniform points of `(1, 2]`.
pub fn exponent_floor(n: usize) -> f64 {
    (1..=n)
        .map(|i| 1.0 + i as f64 / n as f64)
        .map(proof_ratio_rhs)
        .fold(f64::INFINITY, f64::min)
}
