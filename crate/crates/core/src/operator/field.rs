//! Evaluation of `u = T_λ f` and `L_q` norms of `u`.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::PhaseAmplitudeKernel;
use crate::error::{Error, Result};
use crate::psi::{LpCurve, Provenance};
use crate::quad::gauss_kronrod::{combine_panel, panel_nodes, NODES_PER_PANEL};
use crate::quad::{integrate_box, integrate_panels, uniform_breaks, FunctionSpec, QuadConfig, Singularity};

/// Default number of log-spaced `x` points on `[1/λ, x_max]` per side.
pub const DEFAULT_X_GRID_POINTS: usize = 512;

/// `u(x)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

/// Kernel, frequency, input function and tolerances of one `T_λ f`.
#[derive(Debug, Clone)]
pub struct OperatorContext<'a> {
    kernel: &'a PhaseAmplitudeKernel,
    lambda: f64,
    f: &'a FunctionSpec,
    cfg: QuadConfig,
    y_radius: f64,
    // Per-axis panel widths in y (one half period of the phase).
    y_widths: Vec<f64>,
}

const DERIV_SAMPLES: usize = 65;

impl<'a> OperatorContext<'a> {
    pub fn new(kernel: &'a PhaseAmplitudeKernel, lambda: f64, f: &'a FunctionSpec, cfg: QuadConfig) -> Result<Self> {
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("λ must be finite and >= 1, got {lambda}")));
        }
        if f.dim() != kernel.dim() {
            return Err(Error::DimensionMismatch {
                expected: kernel.dim(),
                found: f.dim(),
            });
        }
        cfg.validate()?;
        let y_radius = f.support_radius().min(kernel.y_half_width());
        let mut ctx = Self {
            kernel,
            lambda,
            f,
            cfg,
            y_radius,
            y_widths: Vec::new(),
        };
        ctx.y_widths = (0..kernel.dim())
            .map(|j| {
                let slope = ctx.max_phase_slope(j, true);
                half_period(lambda, slope)
            })
            .collect();
        Ok(ctx)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kernel(&self) -> &PhaseAmplitudeKernel {
        self.kernel
    }

    pub fn function(&self) -> &FunctionSpec {
        self.f
    }

    pub fn config(&self) -> &QuadConfig {
        &self.cfg
    }

    /// `max |∂Φ₁/∂y_j|` (or `∂/∂x_j`) over a sample of the boxes.
    fn max_phase_slope(&self, axis: usize, wrt_y: bool) -> f64 {
        let d = self.kernel.dim();
        let xr = self.kernel.x_half_width();
        let yr = self.y_radius;
        let n = if d == 1 { DERIV_SAMPLES } else { 9 };
        let h = 1e-6 * xr.max(yr).max(1.0);
        let mut best: f64 = 0.0;
        let mut point = vec![0.0; 2 * d];
        for idx in 0..n.pow(2 * d as u32) {
            let mut rem = idx;
            for (k, slot) in point.iter_mut().enumerate() {
                let half = if k < d { xr } else { yr };
                *slot = -half + 2.0 * half * (rem % n) as f64 / (n - 1) as f64;
                rem /= n;
            }
            let (x, y) = point.split_at(d);
            let (mut xp, mut yp) = (x.to_vec(), y.to_vec());
            let (mut xm, mut ym) = (x.to_vec(), y.to_vec());
            if wrt_y {
                yp[axis] += h;
                ym[axis] -= h;
            } else {
                xp[axis] += h;
                xm[axis] -= h;
            }
            let slope = (self.kernel.phase(&xp, &yp) - self.kernel.phase(&xm, &ym)) / (2.0 * h);
            best = best.max(slope.abs());
        }
        best
    }

    fn integrand(&self, x: &[f64], y: &[f64], weight: f64) -> Complex64 {
        let amp = self.kernel.amplitude(x, y);
        if amp == 0.0 || weight == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(amp * weight, self.lambda * self.kernel.phase(x, y))
    }

    /// `u(x) = ∫ exp(iλΦ₁(x,y)) Φ₂(x,y) f(y) dy`.
    pub fn eval_point(&self, x: &[f64]) -> Result<PointValue> {
        let d = self.kernel.dim();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        let r = self.y_radius;
        match self.f.singularity() {
            Singularity::InvSqrtAtOrigin { .. } => {
                // y = ±R t² on each half line: |y|^{-1/2} dy = 2√R dt.
                let ybreaks = uniform_breaks(0.0, r, self.y_widths[0]);
                let tbreaks: Vec<f64> = ybreaks.iter().map(|&y| (y / r).sqrt()).collect();
                let scale = 2.0 * r.sqrt();
                let mut value = Complex64::new(0.0, 0.0);
                let mut err = 0.0;
                let mut converged = true;
                for sign in [1.0, -1.0] {
                    let res = integrate_panels(
                        |t: f64| {
                            let y = sign * r * t * t;
                            let h = self.f.regular_part(y).unwrap_or(0.0);
                            self.integrand(x, &[y], scale * h)
                        },
                        &tbreaks,
                        &self.cfg,
                    )?;
                    value += res.value;
                    err += res.abs_error_estimate;
                    converged &= res.converged;
                }
                Ok(PointValue {
                    value,
                    abs_error_estimate: err,
                    converged,
                })
            }
            Singularity::None if d == 1 => {
                let breaks = uniform_breaks(-r, r, self.y_widths[0]);
                let res = integrate_panels(|y: f64| self.integrand(x, &[y], self.f.eval(&[y])), &breaks, &self.cfg)?;
                Ok(PointValue {
                    value: res.value,
                    abs_error_estimate: res.abs_error_estimate,
                    converged: res.converged,
                })
            }
            Singularity::None => {
                let breaks: Vec<Vec<f64>> = self.y_widths.iter().map(|&w| uniform_breaks(-r, r, w)).collect();
                let res = integrate_box(&|y: &[f64]| self.integrand(x, y, self.f.eval(y)), &breaks, &self.cfg)?;
                Ok(PointValue {
                    value: res.value,
                    abs_error_estimate: res.abs_error_estimate,
                    converged: res.converged,
                })
            }
        }
    }
}

fn half_period(lambda: f64, slope: f64) -> f64 {
    let rate = lambda * slope;
    if rate > 0.0 && rate.is_finite() {
        PI / rate
    } else {
        f64::INFINITY
    }
}

/// Samples of `u = T_λ f` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub dim: usize,
    pub lambda: f64,
    pub x_grid: Vec<Vec<f64>>,
    pub values: Vec<Complex64>,
    pub per_point_error: Vec<f64>,
    pub converged: bool,
    /// Index of the grid point with the largest error estimate.
    pub worst_point: Option<usize>,
}

/// Evaluate `T_λ f` at every grid point, in parallel over points.
pub fn apply_operator(
    kernel: &PhaseAmplitudeKernel,
    lambda: f64,
    f: &FunctionSpec,
    x_grid: &[Vec<f64>],
    cfg: &QuadConfig,
) -> Result<SampledField> {
    let ctx = OperatorContext::new(kernel, lambda, f, *cfg)?;
    let points: Vec<PointValue> = x_grid
        .par_iter()
        .map(|x| ctx.eval_point(x))
        .collect::<Result<Vec<_>>>()?;
    let worst_point = points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs_error_estimate.total_cmp(&b.1.abs_error_estimate))
        .map(|(i, _)| i);
    Ok(SampledField {
        dim: kernel.dim(),
        lambda,
        x_grid: x_grid.to_vec(),
        values: points.iter().map(|p| p.value).collect(),
        per_point_error: points.iter().map(|p| p.abs_error_estimate).collect(),
        converged: points.iter().all(|p| p.converged),
        worst_point,
    })
}

/// `[[x]]` for each `x`: a one-dimensional grid in the shape
/// [`apply_operator`] expects.
pub fn grid_1d(xs: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().map(|&x| vec![x]).collect()
}

/// `n` log-spaced points on `[1/λ, x_max]`, mirrored to the negative side,
/// in increasing order.
pub fn default_x_grid(lambda: f64, x_max: f64, n: usize) -> Vec<f64> {
    let lo = 1.0 / lambda;
    let positive: Vec<f64> = if n == 0 || !(lo < x_max) {
        vec![x_max]
    } else if n == 1 {
        vec![lo]
    } else {
        let (l0, l1) = (lo.ln(), x_max.ln());
        (0..n)
            .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
            .collect()
    };
    let mut out: Vec<f64> = positive.iter().rev().map(|x| -x).collect();
    out.extend(positive);
    out
}

#[derive(Debug, Clone)]
struct XPanel {
    a: f64,
    b: f64,
    modulus: [f64; NODES_PER_PANEL],
    eval_error: f64,
    converged: bool,
}

/// `|u|_q` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqValue {
    pub q: f64,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

/// `q ↦ (∫_{x_domain} |u(x)|^q dx)^{1/q}` for `u = T_λ f`, `d = 1`.
///
/// `|u|` is held at the Kronrod nodes of a panel partition of the domain
/// (the degree-14 interpolant implicit in each panel). A query for a new `q`
/// reuses every stored sample; panels whose Kronrod/Gauss discrepancy for
/// `|u|^q` is too large are bisected and `u` is evaluated directly at the new
/// nodes. The partition only ever grows, so later queries see a finer grid.
pub struct FieldLqCurve<'a> {
    ctx: OperatorContext<'a>,
    domain: (f64, f64),
    x_cfg: QuadConfig,
    panels: Mutex<Vec<XPanel>>,
}

impl<'a> FieldLqCurve<'a> {
    /// Initial panels: the default log grid (`grid_points` per side) inside
    /// the domain, split further so no panel exceeds half an oscillation of
    /// `exp(iλΦ₁)` in `x`.
    pub fn new(ctx: OperatorContext<'a>, domain: (f64, f64), x_cfg: QuadConfig, grid_points: usize) -> Result<Self> {
        if ctx.kernel.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: ctx.kernel.dim(),
            });
        }
        let (lo, hi) = domain;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!(
                "x domain must be a bounded interval, got ({lo}, {hi})"
            )));
        }
        x_cfg.validate()?;
        let reach = lo.abs().max(hi.abs());
        let mut breaks: Vec<f64> = default_x_grid(ctx.lambda, reach, grid_points)
            .into_iter()
            .filter(|&x| x > lo && x < hi)
            .collect();
        breaks.push(lo);
        breaks.push(hi);
        if lo < 0.0 && hi > 0.0 {
            breaks.push(0.0);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let width = half_period(ctx.lambda, ctx.max_phase_slope(0, false));
        let mut fine = vec![breaks[0]];
        for w in breaks.windows(2) {
            fine.extend(uniform_breaks(w[0], w[1], width).into_iter().skip(1));
        }
        let intervals: Vec<(f64, f64)> = fine.windows(2).map(|w| (w[0], w[1])).collect();
        let curve = Self {
            ctx,
            domain,
            x_cfg,
            panels: Mutex::new(Vec::new()),
        };
        let panels = curve.sample_panels(&intervals)?;
        *curve.panels.lock().expect("panel lock") = panels;
        Ok(curve)
    }

    /// Field norms over the kernel's `x` box with default grid and tolerances.
    pub fn over_kernel_box(ctx: OperatorContext<'a>) -> Result<Self> {
        let half = ctx.kernel.x_half_width();
        let cfg = ctx.cfg;
        Self::new(ctx, (-half, half), cfg, DEFAULT_X_GRID_POINTS)
    }

    pub fn context(&self) -> &OperatorContext<'a> {
        &self.ctx
    }

    pub fn x_domain(&self) -> (f64, f64) {
        self.domain
    }

    fn sample_panels(&self, intervals: &[(f64, f64)]) -> Result<Vec<XPanel>> {
        intervals
            .par_iter()
            .map(|&(a, b)| {
                let nodes = panel_nodes(a, b);
                let mut modulus = [0.0; NODES_PER_PANEL];
                let mut eval_error: f64 = 0.0;
                let mut converged = true;
                for (m, &x) in modulus.iter_mut().zip(nodes.iter()) {
                    let pv = self.ctx.eval_point(&[x])?;
                    *m = pv.value.norm();
                    eval_error = eval_error.max(pv.abs_error_estimate);
                    converged &= pv.converged;
                }
                Ok(XPanel {
                    a,
                    b,
                    modulus,
                    eval_error,
                    converged,
                })
            })
            .collect()
    }

    /// Number of panels currently held.
    pub fn panel_count(&self) -> usize {
        self.panels.lock().expect("panel lock").len()
    }

    /// Every stored sample of `u`'s modulus, sorted by `x`.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        let panels = self.panels.lock().expect("panel lock");
        let mut out: Vec<(f64, f64)> = panels
            .iter()
            .flat_map(|p| panel_nodes(p.a, p.b).into_iter().zip(p.modulus))
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// `max |u|` over the stored samples.
    pub fn max_modulus(&self) -> f64 {
        let panels = self.panels.lock().expect("panel lock");
        panels.iter().flat_map(|p| p.modulus).fold(0.0, f64::max)
    }

    /// `|u|_q`, refining the partition until the integral of `|u|^q` meets the
    /// tolerance or the panel budget is spent.
    pub fn lq_norm(&self, q: f64) -> Result<LqValue> {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::Domain(format!("field norm needs finite q >= 1, got {q}")));
        }
        let mut panels = self.panels.lock().expect("panel lock");
        loop {
            let peak = panels.iter().flat_map(|p| p.modulus).fold(0.0, f64::max);
            if peak == 0.0 {
                return Ok(LqValue {
                    q,
                    value: 0.0,
                    abs_error_estimate: 0.0,
                    converged: panels.iter().all(|p| p.converged),
                });
            }
            // Integrate (|u|/peak)^q to keep large q in range.
            let estimates: Vec<(f64, f64)> = panels
                .iter()
                .map(|p| {
                    let vals = p.modulus.map(|m| (m / peak).powf(q));
                    let est = combine_panel(&vals, p.a, p.b);
                    (est.value, est.error)
                })
                .collect();
            let total: f64 = estimates.iter().map(|e| e.0).sum();
            let total_err: f64 = estimates.iter().map(|e| e.1).sum();
            let abs_scaled = (self.x_cfg.abs_tol.ln() - q * peak.ln()).exp();
            let target = abs_scaled.max(self.x_cfg.rel_tol * total.abs());
            let done = total_err <= target;
            if done || panels.len() >= self.x_cfg.max_panels {
                let integral = total.max(0.0);
                let value = peak * integral.powf(1.0 / q);
                let abs_error_estimate = if integral > 0.0 {
                    value * total_err / (q * integral)
                } else {
                    0.0
                };
                return Ok(LqValue {
                    q,
                    value,
                    abs_error_estimate,
                    converged: done && panels.iter().all(|p| p.converged),
                });
            }

            // Bisect the largest contributors until what remains is half the target.
            let mut order: Vec<usize> = (0..panels.len()).collect();
            order.sort_by(|&i, &j| estimates[j].1.total_cmp(&estimates[i].1).then(i.cmp(&j)));
            let mut remaining = total_err;
            let mut chosen = Vec::new();
            for &i in &order {
                if remaining <= 0.5 * target && !chosen.is_empty() {
                    break;
                }
                let p = &panels[i];
                let mid = 0.5 * (p.a + p.b);
                if !(mid > p.a && mid < p.b) {
                    continue;
                }
                remaining -= estimates[i].1;
                chosen.push(i);
                if panels.len() + chosen.len() >= self.x_cfg.max_panels {
                    break;
                }
            }
            if chosen.is_empty() {
                let integral = total.max(0.0);
                let value = peak * integral.powf(1.0 / q);
                return Ok(LqValue {
                    q,
                    value,
                    abs_error_estimate: if integral > 0.0 {
                        value * total_err / (q * integral)
                    } else {
                        0.0
                    },
                    converged: false,
                });
            }
            chosen.sort_unstable();
            let intervals: Vec<(f64, f64)> = chosen
                .iter()
                .flat_map(|&i| {
                    let p = &panels[i];
                    let mid = 0.5 * (p.a + p.b);
                    [(p.a, mid), (mid, p.b)]
                })
                .collect();
            let fresh = self.sample_panels(&intervals)?;
            let mut fresh = fresh.into_iter();
            let mut next: Vec<XPanel> = Vec::with_capacity(panels.len() + chosen.len());
            let mut chosen_iter = chosen.iter().peekable();
            for (i, p) in panels.drain(..).enumerate() {
                if chosen_iter.peek() == Some(&&i) {
                    chosen_iter.next();
                    next.extend(fresh.next());
                    next.extend(fresh.next());
                } else {
                    next.push(p);
                }
            }
            *panels = next;
        }
    }

    /// Largest quadrature error estimate among the stored `u` samples.
    pub fn worst_sample_error(&self) -> f64 {
        let panels = self.panels.lock().expect("panel lock");
        panels.iter().map(|p| p.eval_error).fold(0.0, f64::max)
    }
}

impl LpCurve for FieldLqCurve<'_> {
    fn domain(&self) -> (f64, f64) {
        (2.0, f64::INFINITY)
    }

    fn eval(&self, q: f64) -> Result<f64> {
        let v = self.lq_norm(q)?;
        if !v.converged {
            return Err(Error::NotConverged {
                context: format!("|T_λ f|_{q} at λ = {}", self.ctx.lambda),
                estimate: v.value,
                error: v.abs_error_estimate,
            });
        }
        Ok(v.value)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Quadrature {
            tolerance: self.x_cfg.rel_tol.max(self.x_cfg.abs_tol),
        }
    }
}

/// `(∫_{x_domain} |u|^q dx)^{1/q}`.
pub fn field_lq_norm(u: &FieldLqCurve<'_>, q: f64) -> Result<LqValue> {
    if !(q >= 2.0) {
        return Err(Error::Domain(format!("field norms are taken for q >= 2, got {q}")));
    }
    u.lq_norm(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::kernel::AmplitudeKind;
    use crate::quad::{fresnel_i, indicator, witness_f0};

    fn tight() -> QuadConfig {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_panels: 100_000,
        }
    }

    #[test]
    fn sinc_closed_form() {
        let k = PhaseAmplitudeKernel::fourier(1, AmplitudeKind::ExactIndicator).unwrap();
        let one = indicator(1).unwrap();
        let lam = 64.0;
        let xs = [0.1, 0.5, 1.0];
        let field = apply_operator(&k, lam, &one, &grid_1d(&xs), &tight()).unwrap();
        for (x, u) in xs.iter().zip(&field.values) {
            let exact = 2.0 * (lam * x).sin() / (lam * x);
            assert!((u.re / exact - 1.0).abs() < 1e-8, "x={x}: {} vs {exact}", u.re);
            assert!(u.im.abs() < 1e-12);
        }
    }

    #[test]
    fn witness_closed_form() {
        let k = PhaseAmplitudeKernel::fourier(1, AmplitudeKind::ExactIndicator).unwrap();
        let f0 = witness_f0();
        let lam = 8.0;
        for x in [0.1, 0.5, 1.0] {
            let ctx = OperatorContext::new(&k, lam, &f0, tight()).unwrap();
            let u = ctx.eval_point(&[x]).unwrap().value;
            let big = lam * x;
            let exact = 2.0 * big.powf(-0.5) * fresnel_i(big).unwrap();
            assert!((u.re / exact - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_function_gives_zero_field() {
        let k = PhaseAmplitudeKernel::fourier(1, AmplitudeKind::SmoothBump).unwrap();
        let zero = FunctionSpec::new("zero", 1, 1.0, |_| 0.0).unwrap();
        let field = apply_operator(&k, 10.0, &zero, &grid_1d(&[-0.5, 0.0, 0.7]), &tight()).unwrap();
        assert!(field.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn lambda_below_one_rejected() {
        let k = PhaseAmplitudeKernel::fourier(1, AmplitudeKind::ExactIndicator).unwrap();
        let f0 = witness_f0();
        assert!(OperatorContext::new(&k, 0.5, &f0, tight()).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let k = PhaseAmplitudeKernel::fourier(2, AmplitudeKind::ExactIndicator).unwrap();
        let f0 = witness_f0();
        assert!(matches!(
            OperatorContext::new(&k, 2.0, &f0, tight()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unit_field_l2_norm() {
        // λ = 1 with a kernel whose phase vanishes: u ≡ ∫ f = 2 on [-1, 1].
        let k = PhaseAmplitudeKernel::new(
            "flat",
            1,
            |_: &[f64], _: &[f64]| 0.0,
            |x: &[f64], y: &[f64]| {
                if x[0].abs() <= 1.0 && y[0].abs() <= 1.0 {
                    0.5
                } else {
                    0.0
                }
            },
            3.0,
            AmplitudeKind::Custom,
        )
        .unwrap()
        .with_boxes(1.0, 1.0)
        .unwrap();
        let one = indicator(1).unwrap();
        let ctx = OperatorContext::new(&k, 1.0, &one, tight()).unwrap();
        let curve = FieldLqCurve::new(ctx, (-1.0, 1.0), tight(), 16).unwrap();
        let v = field_lq_norm(&curve, 2.0).unwrap();
        assert!(v.converged);
        assert!((v.value - 2f64.sqrt()).abs() < 1e-12);
        assert!(field_lq_norm(&curve, 1.5).is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = default_x_grid(64.0, 1.0, 512);
        assert_eq!(g.len(), 1024);
        assert!((g[512] - 1.0 / 64.0).abs() < 1e-15);
        assert!((g[1023] - 1.0).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(default_x_grid(1.0, 1.0, 512), vec![-1.0, 1.0]);
    }

    #[test]
    fn two_dimensional_sinc_product() {
        let k = PhaseAmplitudeKernel::fourier(2, AmplitudeKind::ExactIndicator).unwrap();
        let one = indicator(2).unwrap();
        let lam = 8.0;
        let x = vec![0.3, -0.7];
        let cfg = QuadConfig {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_panels: 100_000,
        };
        let field = apply_operator(&k, lam, &one, std::slice::from_ref(&x), &cfg).unwrap();
        let s = |t: f64| 2.0 * (lam * t).sin() / (lam * t);
        let exact = s(x[0]) * s(x[1]);
        assert!((field.values[0].re - exact).abs() < 1e-8);
        assert!(field.values[0].im.abs() < 1e-8);
    }
}
