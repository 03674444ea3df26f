//! 7-point Gauss / 15-point Kronrod panels and the globally adaptive driver
//! built on them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const NODES_PER_PANEL: usize = 15;

/// Values a quadrature rule can accumulate: real or complex.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn modulus(self) -> f64;
    fn is_nan(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_nan(self) -> bool {
        f64::is_nan(self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_nan(self) -> bool {
        self.re.is_nan() || self.im.is_nan()
    }
}

/// Tolerances and work limit for adaptive integration.
///
/// A run is converged once the summed error estimate is at most
/// `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_panels: 1_000_000,
        }
    }
}

impl QuadConfig {
    pub fn with_abs(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol: 0.0,
            ..Self::default()
        }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t.is_finite() && t >= 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::Domain(format!(
                "tolerances must be nonnegative and not both zero (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_panels == 0 {
            return Err(Error::Domain("panel budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

/// Kronrod nodes on `[a, b]`: centre first, then symmetric pairs from the
/// outside in.
pub fn panel_nodes(a: f64, b: f64) -> [f64; NODES_PER_PANEL] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [c; NODES_PER_PANEL];
    for j in 0..7 {
        x[1 + 2 * j] = c - h * XGK[j];
        x[2 + 2 * j] = c + h * XGK[j];
    }
    x
}

/// One panel's Kronrod value and QUADPACK-style error estimate.
#[derive(Debug, Clone, Copy)]
pub struct PanelEstimate<V> {
    pub value: V,
    pub error: f64,
}

/// Combine integrand values taken at [`panel_nodes`] into a panel estimate.
pub fn combine_panel<V: QuadValue>(vals: &[V; NODES_PER_PANEL], a: f64, b: f64) -> PanelEstimate<V> {
    let h = 0.5 * (b - a);
    let fc = vals[0];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = WGK[7] * fc.modulus();
    for j in 0..7 {
        let (f1, f2) = (vals[1 + 2 * j], vals[2 + 2 * j]);
        let sum = f1 + f2;
        resk = resk + sum * WGK[j];
        resabs += WGK[j] * (f1.modulus() + f2.modulus());
        if j % 2 == 1 {
            resg = resg + sum * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).modulus();
    for j in 0..7 {
        resasc += WGK[j] * ((vals[1 + 2 * j] - mean).modulus() + (vals[2 + 2 * j] - mean).modulus());
    }
    let scale = h.abs();
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut err = (resk - resg).modulus() * scale;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    PanelEstimate {
        value: resk * h,
        error: err,
    }
}

fn eval_panel<V, F>(f: &F, a: f64, b: f64) -> Result<PanelEstimate<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    let x = panel_nodes(a, b);
    let mut vals = [V::zero(); NODES_PER_PANEL];
    for (v, &xi) in vals.iter_mut().zip(x.iter()) {
        let fx = f(xi)?;
        if fx.is_nan() {
            return Err(Error::NanIntegrand { at: xi });
        }
        *v = fx;
    }
    Ok(combine_panel(&vals, a, b))
}

#[derive(Debug, Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    est: PanelEstimate<V>,
}

#[derive(PartialEq)]
struct HeapKey(f64, usize);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    // Largest error first; ties go to the lower panel index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Adaptive integration over the panels delimited by `breaks`, with a
/// fallible integrand. Errors from the integrand abort immediately.
pub fn integrate_panels_with<V, F>(f: F, breaks: &[f64], cfg: &QuadConfig) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    cfg.validate()?;
    if breaks.len() < 2 {
        return Err(Error::Domain("need at least two break points".into()));
    }
    if breaks.iter().any(|b| !b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain(format!(
            "break points must be nondecreasing ({} .. {})",
            breaks[0],
            breaks[breaks.len() - 1]
        )));
    }

    let mut panels: Vec<Panel<V>> = Vec::with_capacity(breaks.len());
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let est = eval_panel(&f, w[0], w[1])?;
            panels.push(Panel { a: w[0], b: w[1], est });
        }
    }
    if panels.is_empty() {
        return Err(Error::Domain("empty integration interval".into()));
    }

    let mut total = panels.iter().fold(V::zero(), |s, p| s + p.est.value);
    let mut total_err: f64 = panels.iter().map(|p| p.est.error).sum();
    let mut heap: BinaryHeap<HeapKey> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| HeapKey(p.est.error, i))
        .collect();

    while total_err > cfg.target(total.modulus()) && panels.len() < cfg.max_panels {
        let Some(HeapKey(_, i)) = heap.pop() else { break };
        let Panel { a, b, est } = panels[i];
        let mid = 0.5 * (a + b);
        if !(mid > a && mid < b) || (b - a) <= 8.0 * f64::EPSILON * a.abs().max(b.abs()) {
            // Unsplittable in floating point; its error stays in the total.
            continue;
        }
        let left = eval_panel(&f, a, mid)?;
        let right = eval_panel(&f, mid, b)?;
        total = total - est.value + left.value + right.value;
        total_err += left.error + right.error - est.error;
        panels[i] = Panel { a, b: mid, est: left };
        panels.push(Panel { a: mid, b, est: right });
        heap.push(HeapKey(left.error, i));
        heap.push(HeapKey(right.error, panels.len() - 1));
    }

    // Fixed summation order: left to right.
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().fold(V::zero(), |s, p| s + p.est.value);
    let abs_error_estimate: f64 = panels.iter().map(|p| p.est.error).sum();
    Ok(QuadResult {
        value,
        abs_error_estimate,
        panels_used: panels.len(),
        converged: abs_error_estimate <= cfg.target(value.modulus()),
    })
}

/// Adaptive integration over `[breaks[0], breaks[last]]` starting from the
/// given panels.
pub fn integrate_panels<V, F>(f: F, breaks: &[f64], cfg: &QuadConfig) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    integrate_panels_with(|x| Ok(f(x)), breaks, cfg)
}

/// Adaptive Gauss-Kronrod integration of `g` over `[lo, hi]`.
///
/// A panel budget that runs out before the tolerance is met yields
/// `converged == false` with the best estimate; a NaN from `g` is an error.
pub fn integrate_adaptive<V, F>(g: F, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(lo < hi) {
        return Err(Error::Domain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    integrate_panels(g, &[lo, hi], cfg)
}

/// Uniform break points on `[lo, hi]` with spacing at most `max_width`.
pub fn uniform_breaks(lo: f64, hi: f64, max_width: f64) -> Vec<f64> {
    let span = hi - lo;
    let n = if max_width.is_finite() && max_width > 0.0 {
        ((span / max_width).ceil() as usize).max(1)
    } else {
        1
    };
    let mut out: Vec<f64> = (0..=n).map(|k| lo + span * k as f64 / n as f64).collect();
    out[n] = hi;
    out
}

/// Iterated adaptive integration over a box, one axis at a time.
///
/// `breaks[k]` holds the initial panel boundaries along axis `k`.
pub fn integrate_box<V, F>(f: &F, breaks: &[Vec<f64>], cfg: &QuadConfig) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(&[f64]) -> V,
{
    nested(f, breaks, &[], cfg)
}

fn nested<V, F>(f: &F, breaks: &[Vec<f64>], prefix: &[f64], cfg: &QuadConfig) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: Fn(&[f64]) -> V,
{
    let (axis, rest) = breaks
        .split_first()
        .ok_or_else(|| Error::Domain("box integration needs at least one axis".into()))?;
    if rest.is_empty() {
        let base = prefix.to_vec();
        return integrate_panels(
            |x| {
                let mut p = base.clone();
                p.push(x);
                f(&p)
            },
            axis,
            cfg,
        );
    }
    let inner_ok = std::cell::Cell::new(true);
    let inner_panels = std::cell::Cell::new(0usize);
    let base = prefix.to_vec();
    let res = integrate_panels_with(
        |x| {
            let mut p = base.clone();
            p.push(x);
            let r = nested(f, rest, &p, cfg)?;
            if !r.converged {
                inner_ok.set(false);
            }
            inner_panels.set(inner_panels.get() + r.panels_used);
            Ok(r.value)
        },
        axis,
        cfg,
    )?;
    Ok(QuadResult {
        converged: res.converged && inner_ok.get(),
        panels_used: res.panels_used + inner_panels.get(),
        ..res
    })
}
