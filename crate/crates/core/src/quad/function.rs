//! Test functions `f` on compact supports and their `L_p` norms.

use std::fmt;
use std::sync::Arc;

use super::gauss_kronrod::{integrate_box, integrate_panels, uniform_breaks, QuadConfig, QuadResult, QuadValue};
use crate::error::{Error, Result};
use crate::psi::{LpCurve, Provenance};

pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Known singular behaviour of a test function.
#[derive(Clone)]
pub enum Singularity {
    None,
    /// `f(y) = h(y) |y|^{-1/2}` with `h` bounded; `regular` evaluates `h`.
    InvSqrtAtOrigin {
        regular: ScalarFn,
    },
}

impl fmt::Debug for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::None => write!(f, "None"),
            Singularity::InvSqrtAtOrigin { .. } => write!(f, "InvSqrtAtOrigin"),
        }
    }
}

/// A real test function supported in the cube `[-R, R]^d`.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    dim: usize,
    support_radius: f64,
    eval: PointFn,
    singularity: Singularity,
    closed_form_lp: Option<ScalarFn>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("support_radius", &self.support_radius)
            .field("singularity", &self.singularity)
            .field("closed_form_lp", &self.closed_form_lp.is_some())
            .finish()
    }
}

impl FunctionSpec {
    /// A bounded function; values outside `[-R, R]^d` are forced to zero.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        support_radius: f64,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::Domain(format!("dimension must be 1..=3, got {dim}")));
        }
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::Domain(format!(
                "support radius must be positive, got {support_radius}"
            )));
        }
        Ok(Self {
            name: name.into(),
            dim,
            support_radius,
            eval: Arc::new(eval),
            singularity: Singularity::None,
            closed_form_lp: None,
        })
    }

    /// A one-dimensional `f(y) = h(y) |y|^{-1/2}` on `[-R, R]`, with `f(0) = 0`.
    pub fn inv_sqrt_singular(
        name: impl Into<String>,
        support_radius: f64,
        regular: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let regular: ScalarFn = Arc::new(regular);
        let h = regular.clone();
        let mut spec = Self::new(name, 1, support_radius, move |y: &[f64]| {
            let y = y[0];
            if y == 0.0 {
                0.0
            } else {
                h(y) / y.abs().sqrt()
            }
        })?;
        spec.singularity = Singularity::InvSqrtAtOrigin { regular };
        Ok(spec)
    }

    pub fn with_closed_form_lp(mut self, curve: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_form_lp = Some(Arc::new(curve));
        self
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        let eval = self.eval.clone();
        let singularity = match &self.singularity {
            Singularity::None => Singularity::None,
            Singularity::InvSqrtAtOrigin { regular } => {
                let h = regular.clone();
                Singularity::InvSqrtAtOrigin {
                    regular: Arc::new(move |y| c * h(y)),
                }
            }
        };
        Self {
            name: format!("{c}*{}", self.name),
            dim: self.dim,
            support_radius: self.support_radius,
            eval: Arc::new(move |y: &[f64]| c * eval(y)),
            singularity,
            closed_form_lp: self
                .closed_form_lp
                .clone()
                .map(|cf| -> ScalarFn { Arc::new(move |p| c.abs() * cf(p)) }),
        }
    }

    /// `α f + β g` on the common support. The singular structure is kept
    /// when both terms carry it.
    pub fn linear_combination(alpha: f64, f: &Self, beta: f64, g: &Self) -> Result<Self> {
        if f.dim != g.dim {
            return Err(Error::DimensionMismatch {
                expected: f.dim,
                found: g.dim,
            });
        }
        let (ef, eg) = (f.eval.clone(), g.eval.clone());
        let radius = f.support_radius.max(g.support_radius);
        let mut out = Self::new(
            format!("{alpha}*{}+{beta}*{}", f.name, g.name),
            f.dim,
            radius,
            move |y: &[f64]| alpha * ef(y) + beta * eg(y),
        )?;
        if let (Singularity::InvSqrtAtOrigin { regular: hf }, Singularity::InvSqrtAtOrigin { regular: hg }) =
            (&f.singularity, &g.singularity)
        {
            let (hf, hg) = (hf.clone(), hg.clone());
            let (rf, rg) = (f.support_radius, g.support_radius);
            out.singularity = Singularity::InvSqrtAtOrigin {
                regular: Arc::new(move |y| {
                    let a = if y.abs() <= rf { hf(y) } else { 0.0 };
                    let b = if y.abs() <= rg { hg(y) } else { 0.0 };
                    alpha * a + beta * b
                }),
            };
        } else if !matches!(f.singularity, Singularity::None) || !matches!(g.singularity, Singularity::None) {
            return Err(Error::Domain(
                "cannot combine a singular and a regular function; both must share the singularity".into(),
            ));
        }
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn singularity(&self) -> &Singularity {
        &self.singularity
    }

    pub fn closed_form_lp(&self, p: f64) -> Option<f64> {
        self.closed_form_lp.as_ref().map(|cf| cf(p))
    }

    pub fn has_closed_form_lp(&self) -> bool {
        self.closed_form_lp.is_some()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        if y.iter().any(|v| v.abs() > self.support_radius) {
            return 0.0;
        }
        (self.eval)(y)
    }

    /// `h(y) = f(y) |y|^{1/2}` for singular functions, otherwise `None`.
    pub fn regular_part(&self, y: f64) -> Option<f64> {
        match &self.singularity {
            Singularity::InvSqrtAtOrigin { regular } => {
                Some(if y.abs() > self.support_radius { 0.0 } else { regular(y) })
            }
            Singularity::None => None,
        }
    }

    /// The `L_p` curve of this function computed by quadrature.
    pub fn lp_curve(&self, cfg: QuadConfig) -> FunctionLpCurve<'_> {
        FunctionLpCurve { f: self, cfg }
    }
}

/// `f₀(y) = |y|^{-1/2}` on `0 < |y| ≤ 1`, zero elsewhere, with
/// `|f₀|_p = [4/(2-p)]^{1/p}`.
pub fn witness_f0() -> FunctionSpec {
    FunctionSpec::inv_sqrt_singular("f0", 1.0, |_| 1.0)
        .expect("static witness parameters")
        .with_closed_form_lp(|p| (4.0 / (2.0 - p)).powf(1.0 / p))
}

/// Indicator of `[-1, 1]^d`.
pub fn indicator(dim: usize) -> Result<FunctionSpec> {
    let measure = 2f64.powi(dim as i32);
    Ok(FunctionSpec::new("one", dim, 1.0, |_| 1.0)?.with_closed_form_lp(move |p| measure.powf(1.0 / p)))
}

/// Smooth bump `∏ exp(1 - 1/(1 - y_i²))` on `(-1, 1)^d`.
pub fn bump(dim: usize) -> Result<FunctionSpec> {
    FunctionSpec::new("bump", dim, 1.0, |y: &[f64]| y.iter().map(|&s| bump_1d(s)).product())
}

pub(crate) fn bump_1d(s: f64) -> f64 {
    let t = s * s;
    if t >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t)).exp()
    }
}

/// One sample of an `L_p` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpPoint {
    pub p: f64,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

/// `∫₀¹ y^{-1/2} g(y) dy`, computed as `2 ∫₀¹ g(t²) dt`.
pub fn integrate_sqrt_singular<V, G>(g: G, cfg: &QuadConfig) -> Result<QuadResult<V>>
where
    V: QuadValue,
    G: Fn(f64) -> V,
{
    let r = integrate_panels(|t: f64| g(t * t) * 2.0, &[0.0, 0.5, 1.0], cfg)?;
    Ok(r)
}

/// `|f|_p = (∫ |f|^p)^{1/p}`.
///
/// For `f = h |y|^{-1/2}` and `p < 2` the substitution `y = R t^m`,
/// `m = 2/(2-p)`, cancels the singular factor exactly, leaving
/// `R^{1-p/2} m ∫₀¹ |h(R t^m)|^p dt` per half-line.
pub fn lp_norm(f: &FunctionSpec, p: f64, cfg: &QuadConfig) -> Result<LpPoint> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("exponent must be finite and >= 1, got {p}")));
    }
    let r = f.support_radius;
    let res: QuadResult<f64> = match &f.singularity {
        Singularity::InvSqrtAtOrigin { regular } => {
            if p >= 2.0 {
                return Err(Error::Divergent(format!(
                    "|{}|_p is infinite for p >= 2 (inverse square-root singularity), p = {p}",
                    f.name
                )));
            }
            let m = 2.0 / (2.0 - p);
            let scale = r.powf(1.0 - 0.5 * p) * m;
            let breaks = uniform_breaks(0.0, 1.0, 0.125);
            let h = regular.clone();
            integrate_panels(
                move |t: f64| {
                    let y = r * t.powf(m);
                    scale * (h(y).abs().powf(p) + h(-y).abs().powf(p))
                },
                &breaks,
                cfg,
            )?
        }
        Singularity::None if f.dim == 1 => {
            let mut breaks = uniform_breaks(-r, 0.0, r / 8.0);
            breaks.extend(uniform_breaks(0.0, r, r / 8.0).into_iter().skip(1));
            integrate_panels(|y: f64| f.eval(&[y]).abs().powf(p), &breaks, cfg)?
        }
        Singularity::None => {
            let axis = vec![-r, 0.0, r];
            let breaks = vec![axis; f.dim];
            integrate_box(&|y: &[f64]| f.eval(y).abs().powf(p), &breaks, cfg)?
        }
    };
    let integral = res.value.max(0.0);
    let value = integral.powf(1.0 / p);
    let abs_error_estimate = if integral > 0.0 {
        value * res.abs_error_estimate / (p * integral)
    } else {
        res.abs_error_estimate.powf(1.0 / p)
    };
    Ok(LpPoint {
        p,
        value,
        abs_error_estimate,
        converged: res.converged,
    })
}

/// `p ↦ |f|_p` by quadrature.
pub struct FunctionLpCurve<'a> {
    f: &'a FunctionSpec,
    cfg: QuadConfig,
}

impl LpCurve for FunctionLpCurve<'_> {
    fn domain(&self) -> (f64, f64) {
        match self.f.singularity {
            Singularity::InvSqrtAtOrigin { .. } => (1.0, 2.0),
            Singularity::None => (1.0, f64::INFINITY),
        }
    }

    fn eval(&self, p: f64) -> Result<f64> {
        let pt = lp_norm(self.f, p, &self.cfg)?;
        if !pt.converged {
            return Err(Error::NotConverged {
                context: format!("|{}|_{p}", self.f.name),
                estimate: pt.value,
                error: pt.abs_error_estimate,
            });
        }
        Ok(pt.value)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Quadrature {
            tolerance: self.cfg.rel_tol.max(self.cfg.abs_tol),
        }
    }
}
