//! Sweeps over `λ` (and `p`) that probe the upper and lower bounds.

use rayon::prelude::*;
use serde::Serialize;

use super::functional::{f_bgls_norm, f_lp_norm, w_from_field, z_from_field, SweepConfig};
use super::witness::Witness;
use crate::error::{Error, Result};
use crate::operator::PhaseAmplitudeKernel;
use crate::psi::{bgls_norm_with, fundamental_function_with, psi_product, relative_change, PsiFunction};
use crate::quad::FunctionSpec;

pub const DEFAULT_LAMBDA_GRID: [f64; 10] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0];
pub const DEFAULT_P_GRID: [f64; 7] = [1.1, 1.25, 1.5, 1.75, 1.9, 1.95, 1.99];

/// One `(λ, p)` cell. `w` is `None` when the cell was excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub w: Option<f64>,
}

/// `λ × p` grids of `W`, a `λ` vector of `Z`, and the derived constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub label: String,
    pub lambda_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    /// `w_values[i][j]` at `(lambda_grid[i], p_grid[j])`.
    pub w_values: Vec<Vec<Option<f64>>>,
    pub z_values: Vec<Option<f64>>,
    /// Largest `W` or `Z` entry: the empirical constant of the upper bound.
    pub empirical_sup: f64,
    #[serde(rename = "inf_W")]
    pub empirical_inf_w: f64,
    #[serde(rename = "inf_Z")]
    pub empirical_inf_z: f64,
    /// Largest relative change of any entry when every grid is refined.
    pub refinement_delta: f64,
    /// Reasons for excluded cells, one per cell.
    pub excluded: Vec<String>,
}

impl SweepReport {
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for (i, &lambda) in self.lambda_grid.iter().enumerate() {
            for (j, &p) in self.p_grid.iter().enumerate() {
                out.push(SweepCell {
                    lambda,
                    p,
                    q: p / (p - 1.0),
                    w: self.w_values[i][j],
                });
            }
        }
        out
    }

    pub fn converged(&self) -> bool {
        self.excluded.is_empty()
    }

    fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        self.w_values
            .iter()
            .flatten()
            .flatten()
            .chain(self.z_values.iter().flatten())
            .copied()
    }
}

struct LambdaRow {
    w: Vec<Option<f64>>,
    z: Option<f64>,
    excluded: Vec<String>,
}

fn sweep_once(
    kernel: &PhaseAmplitudeKernel,
    lambda_grid: &[f64],
    p_grid: &[f64],
    psi: Option<&PsiFunction>,
    f: &FunctionSpec,
    cfg: &SweepConfig,
) -> Result<Vec<LambdaRow>> {
    let f_lp: Vec<Result<f64>> = p_grid.iter().map(|&p| f_lp_norm(f, p, &cfg.quad)).collect();
    let denominator = psi.map(|psi| f_bgls_norm(f, psi, cfg)).transpose()?;

    lambda_grid
        .par_iter()
        .map(|&lambda| {
            let mut excluded = Vec::new();
            let field = match cfg.field(kernel, lambda, f) {
                Ok(field) => field,
                Err(e @ Error::NotConverged { .. }) => {
                    excluded.push(format!("λ = {lambda}: {e}"));
                    return Ok(LambdaRow {
                        w: vec![None; p_grid.len()],
                        z: None,
                        excluded,
                    });
                }
                Err(e) => return Err(e),
            };
            let mut w = Vec::with_capacity(p_grid.len());
            for (&p, lp) in p_grid.iter().zip(&f_lp) {
                let cell = match lp {
                    Ok(lp) => w_from_field(&field, *lp, p),
                    Err(e) => Err(e.clone()),
                };
                match cell {
                    Ok(v) => w.push(Some(v)),
                    Err(e @ Error::NotConverged { .. }) => {
                        excluded.push(format!("λ = {lambda}, p = {p}: {e}"));
                        w.push(None);
                    }
                    Err(e) => return Err(e),
                }
            }
            let z = match (psi, &denominator) {
                (Some(psi), Some(den)) => match z_from_field(&field, psi, den.clone(), cfg) {
                    Ok(z) => Some(z.z),
                    Err(e @ Error::NotConverged { .. }) => {
                        excluded.push(format!("λ = {lambda}, Z: {e}"));
                        None
                    }
                    Err(e) => return Err(e),
                },
                _ => None,
            };
            Ok(LambdaRow { w, z, excluded })
        })
        .collect()
}

fn assemble(
    label: &str,
    lambda_grid: &[f64],
    p_grid: &[f64],
    base: Vec<LambdaRow>,
    fine: Vec<LambdaRow>,
) -> SweepReport {
    let mut delta: f64 = 0.0;
    for (b, f) in base.iter().zip(&fine) {
        for (x, y) in b.w.iter().zip(&f.w) {
            if let (Some(x), Some(y)) = (x, y) {
                delta = delta.max(relative_change(*x, *y));
            }
        }
        if let (Some(x), Some(y)) = (b.z, f.z) {
            delta = delta.max(relative_change(x, y));
        }
    }
    let mut excluded = Vec::new();
    let mut w_values = Vec::new();
    let mut z_values = Vec::new();
    for row in base {
        excluded.extend(row.excluded);
        w_values.push(row.w);
        z_values.push(row.z);
    }
    for row in fine {
        excluded.extend(row.excluded.into_iter().map(|e| format!("refined: {e}")));
    }
    let mut report = SweepReport {
        label: label.to_string(),
        lambda_grid: lambda_grid.to_vec(),
        p_grid: p_grid.to_vec(),
        w_values,
        z_values,
        empirical_sup: f64::NAN,
        empirical_inf_w: f64::NAN,
        empirical_inf_z: f64::NAN,
        refinement_delta: delta,
        excluded,
    };
    let sup = report.entries().fold(f64::NEG_INFINITY, f64::max);
    let inf_w = report
        .w_values
        .iter()
        .flatten()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let inf_z = report.z_values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    report.empirical_sup = sup;
    report.empirical_inf_w = inf_w;
    report.empirical_inf_z = inf_z;
    for v in [
        &mut report.empirical_sup,
        &mut report.empirical_inf_w,
        &mut report.empirical_inf_z,
    ] {
        if v.is_infinite() {
            *v = f64::NAN;
        }
    }
    report
}

fn check_grids(lambda_grid: &[f64], p_grid: &[f64]) -> Result<()> {
    if lambda_grid.is_empty() {
        return Err(Error::Domain("λ grid is empty".into()));
    }
    if let Some(l) = lambda_grid.iter().find(|l| !(**l >= 1.0) || !l.is_finite()) {
        return Err(Error::Domain(format!(
            "λ grid entries must be finite and >= 1, got {l}"
        )));
    }
    if let Some(p) = p_grid.iter().find(|p| !(**p > 1.0 && **p < 2.0)) {
        return Err(Error::Domain(format!("p grid entries must lie in (1, 2), got {p}")));
    }
    Ok(())
}

/// `W` over `λ × p` and, when `psi` is given, `Z` over `λ`; then the same at
/// refined resolution to get the refinement delta.
pub fn sweep(
    label: &str,
    kernel: &PhaseAmplitudeKernel,
    lambda_grid: &[f64],
    p_grid: &[f64],
    psi: Option<&PsiFunction>,
    f: &FunctionSpec,
    cfg: &SweepConfig,
) -> Result<SweepReport> {
    check_grids(lambda_grid, p_grid)?;
    let base = sweep_once(kernel, lambda_grid, p_grid, psi, f, cfg)?;
    let fine = sweep_once(kernel, lambda_grid, p_grid, psi, f, &cfg.refined())?;
    Ok(assemble(label, lambda_grid, p_grid, base, fine))
}

/// Upper-bound sweep over several `(ψ, f)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub reports: Vec<SweepReport>,
    /// `max Z` over every pair and `λ`.
    pub empirical_sup_z: f64,
    pub refinement_delta: f64,
    pub finite: bool,
}

/// `sup_λ sup_ψ sup_f Z` on a finite grid; `W` is also filled on `p_grid`.
pub fn theorem1_scan(
    kernel: &PhaseAmplitudeKernel,
    lambda_grid: &[f64],
    p_grid: &[f64],
    pairs: &[(PsiFunction, FunctionSpec)],
    cfg: &SweepConfig,
) -> Result<Theorem1Report> {
    if pairs.is_empty() {
        return Err(Error::Domain("need at least one (ψ, f) pair".into()));
    }
    let reports = pairs
        .iter()
        .map(|(psi, f)| {
            sweep(
                &format!("{}/{}", psi.name(), f.name()),
                kernel,
                lambda_grid,
                p_grid,
                Some(psi),
                f,
                cfg,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let empirical_sup_z = reports
        .iter()
        .flat_map(|r| r.z_values.iter().flatten())
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let refinement_delta = reports.iter().map(|r| r.refinement_delta).fold(0.0, f64::max);
    Ok(Theorem1Report {
        finite: empirical_sup_z.is_finite(),
        reports,
        empirical_sup_z,
        refinement_delta,
    })
}

/// Both sides of the factorized bound `λ^d ‖T_λ f‖G(ν*) ≤ φ(G(ζ), λ^d) ‖f‖G(ψ)`
/// up to the constant of the underlying `L_p → L_q` estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Result {
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// `φ(G(ζ), λ^d)`.
    pub fundamental: f64,
    pub refined_ratio: f64,
    pub refinement_delta: f64,
}

fn theorem2_once(
    kernel: &PhaseAmplitudeKernel,
    lambda: f64,
    psi: &PsiFunction,
    zeta: &PsiFunction,
    f: &FunctionSpec,
    cfg: &SweepConfig,
) -> Result<(f64, f64, f64)> {
    let d = kernel.dim() as f64;
    let (_, nu_star) = psi_product(psi, zeta, cfg.q_max)?;
    let field = cfg.field(kernel, lambda, f)?;
    let u_norm = bgls_norm_with(&field, &nu_star, &cfg.sup)?;
    let scale = lambda.powf(d);
    let lhs = scale * u_norm.value;
    let phi = fundamental_function_with(zeta, scale, &cfg.sup)?.value;
    let f_norm = f_bgls_norm(f, psi, cfg)?.value;
    Ok((lhs, phi * f_norm, phi))
}

pub fn theorem2_check(
    kernel: &PhaseAmplitudeKernel,
    lambda: f64,
    psi: &PsiFunction,
    zeta: &PsiFunction,
    f: &FunctionSpec,
    cfg: &SweepConfig,
) -> Result<Theorem2Result> {
    let (lhs, rhs, fundamental) = theorem2_once(kernel, lambda, psi, zeta, f, cfg)?;
    let (lhs2, rhs2, _) = theorem2_once(kernel, lambda, psi, zeta, f, &cfg.refined())?;
    let ratio = lhs / rhs;
    let refined_ratio = lhs2 / rhs2;
    Ok(Theorem2Result {
        lambda,
        lhs,
        rhs,
        ratio,
        fundamental,
        refined_ratio,
        refinement_delta: relative_change(ratio, refined_ratio),
    })
}

/// Lower-bound scan result: the smallest entry and whether it clears the floor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloorReport {
    pub infimum: f64,
    pub floor: f64,
    pub passes_floor: bool,
    pub report: SweepReport,
}

/// `min W(λ, f₀, p)` over the grid; `f₀` stands in for the supremum over `f`.
pub fn theorem3_scan(
    kernel: &PhaseAmplitudeKernel,
    lambda_grid: &[f64],
    p_grid: &[f64],
    floor: f64,
    cfg: &SweepConfig,
) -> Result<FloorReport> {
    if p_grid.is_empty() {
        return Err(Error::Domain("p grid is empty".into()));
    }
    let w = Witness::new();
    let report = sweep("theorem3", kernel, lambda_grid, p_grid, None, &w.f0, cfg)?;
    let infimum = report.empirical_inf_w;
    Ok(FloorReport {
        infimum,
        floor,
        passes_floor: infimum > floor,
        report,
    })
}

/// `min Z(λ, ψ₀, f₀)` over the grid.
pub fn theorem4_scan(
    kernel: &PhaseAmplitudeKernel,
    lambda_grid: &[f64],
    floor: f64,
    cfg: &SweepConfig,
) -> Result<FloorReport> {
    let w = Witness::new();
    let report = sweep("theorem4", kernel, lambda_grid, &[], Some(&w.psi0), &w.f0, cfg)?;
    let infimum = report.empirical_inf_z;
    Ok(FloorReport {
        infimum,
        floor,
        passes_floor: infimum > floor,
        report,
    })
}

/// One point of the `L_r` lower-bound profile of `u = T_λ f₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBoundRow {
    pub lambda: f64,
    pub r: f64,
    /// `|u|_r` over the kernel's `x` box.
    pub lr_norm: f64,
    /// `|u|_r λ^{1/r} (r-2)^{1/r}`, which stays bounded away from 0 and ∞.
    pub scaled: f64,
    /// `min |u(x)| (λx)^{1/2}` over the stored samples with `λx ≥ 1`.
    pub decay_floor: f64,
    /// `C λ^{-1/r} (r-2)^{-1/r}` with `C = decay_floor`.
    pub lower_bound: f64,
}

/// `|u|_r` against `C λ^{-1/r} (r-2)^{-1/r}` for `u = T_λ f₀`.
pub fn lower_bound_profile(
    kernel: &PhaseAmplitudeKernel,
    lambdas: &[f64],
    rs: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<LowerBoundRow>> {
    let w = Witness::new();
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let field = cfg.field(kernel, lambda, &w.f0)?;
        let mut rs_rows = Vec::new();
        for &r in rs {
            if !(r > 2.0) {
                return Err(Error::Domain(format!("r must exceed 2, got {r}")));
            }
            let lr = field.lq_norm(r)?;
            rs_rows.push((r, lr.value));
        }
        let decay_floor = field
            .samples()
            .into_iter()
            .filter(|(x, _)| lambda * x >= 1.0)
            .map(|(x, m)| m * (lambda * x).sqrt())
            .fold(f64::INFINITY, f64::min);
        for (r, lr_norm) in rs_rows {
            rows.push(LowerBoundRow {
                lambda,
                r,
                lr_norm,
                scaled: lr_norm * lambda.powf(1.0 / r) * (r - 2.0).powf(1.0 / r),
                decay_floor,
                lower_bound: decay_floor * lambda.powf(-1.0 / r) * (r - 2.0).powf(-1.0 / r),
            });
        }
    }
    Ok(rows)
}

/// `|u|_q` over `[1/λ, x_max]` against `(2 C^q (1 - λ^{1-q/2}) / (λ(q-2)))^{1/q}`,
/// the bound from `|u(x)| ≥ C (λx)^{-1/2}` integrated over that interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBoundCheck {
    pub lambda: f64,
    pub q: f64,
    pub tail_norm: f64,
    pub decay_floor: f64,
    pub bound: f64,
}

pub fn tail_lower_bound(
    kernel: &PhaseAmplitudeKernel,
    lambda: f64,
    q: f64,
    cfg: &SweepConfig,
) -> Result<TailBoundCheck> {
    if !(q > 2.0) {
        return Err(Error::Domain(format!("q must exceed 2, got {q}")));
    }
    let w = Witness::new();
    let x_max = kernel.x_half_width();
    let lo = 1.0 / lambda;
    if !(lo < x_max) {
        return Err(Error::Domain(format!("[1/λ, {x_max}] is empty for λ = {lambda}")));
    }
    let tail_cfg = SweepConfig {
        x_domain: Some((lo, x_max)),
        ..*cfg
    };
    let field = tail_cfg.field(kernel, lambda, &w.f0)?;
    let tail_norm = field.lq_norm(q)?.value;
    let decay_floor = field
        .samples()
        .into_iter()
        .map(|(x, m)| m * (lambda * x).sqrt())
        .fold(f64::INFINITY, f64::min);
    let integral = 2.0 * (1.0 - (lambda * x_max).powf(1.0 - q / 2.0)) / (lambda * (q - 2.0));
    let bound = decay_floor * integral.powf(1.0 / q);
    Ok(TailBoundCheck {
        lambda,
        q,
        tail_norm,
        decay_floor,
        bound,
    })
}
