use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::function::bump_1d;

pub type KernelFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeKind {
    /// `∏ b(x_i) b(y_j)` with the `C^∞` bump `b(s) = exp(1 - 1/(1 - s²))`.
    SmoothBump,
    /// Indicator of `[-1, 1]^{2d}`.
    ExactIndicator,
    Custom,
}

/// The phase `Φ₁` and amplitude `Φ₂` of `T_λ`.
///
/// `Φ₂(x, y) = 0` whenever `|x|² + |y|² ≥ C`, checked on construction by
/// sampling. Integration in `y` runs over `[-y_half_width, y_half_width]^d`.
#[derive(Clone)]
pub struct PhaseAmplitudeKernel {
    name: String,
    dim: usize,
    phase: KernelFn,
    amplitude: KernelFn,
    support_bound: f64,
    kind: AmplitudeKind,
    x_half_width: f64,
    y_half_width: f64,
}

impl fmt::Debug for PhaseAmplitudeKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseAmplitudeKernel")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("support_bound", &self.support_bound)
            .field("kind", &self.kind)
            .field("x_half_width", &self.x_half_width)
            .field("y_half_width", &self.y_half_width)
            .finish()
    }
}

fn cube_indicator(x: &[f64], y: &[f64]) -> f64 {
    if x.iter().chain(y).all(|v| v.abs() <= 1.0) {
        1.0
    } else {
        0.0
    }
}

fn cube_bump(x: &[f64], y: &[f64]) -> f64 {
    x.iter().chain(y).map(|&s| bump_1d(s)).product()
}

impl PhaseAmplitudeKernel {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        phase: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        amplitude: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        support_bound: f64,
        kind: AmplitudeKind,
    ) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::Domain(format!("kernel dimension must be 1..=3, got {dim}")));
        }
        if !(support_bound > 0.0) || !support_bound.is_finite() {
            return Err(Error::Domain(format!(
                "support bound C must be positive, got {support_bound}"
            )));
        }
        let half = support_bound.sqrt();
        let k = Self {
            name: name.into(),
            dim,
            phase: Arc::new(phase),
            amplitude: Arc::new(amplitude),
            support_bound,
            kind,
            x_half_width: half,
            y_half_width: half,
        };
        k.check_support()?;
        Ok(k)
    }

    /// Narrow the `x`/`y` boxes when the amplitude is known to vanish outside
    /// smaller cubes than the `√C` default.
    pub fn with_boxes(mut self, x_half_width: f64, y_half_width: f64) -> Result<Self> {
        let half = self.support_bound.sqrt();
        if !(x_half_width > 0.0 && x_half_width <= half && y_half_width > 0.0 && y_half_width <= half) {
            return Err(Error::Domain(format!(
                "boxes must have half widths in (0, √C = {half}], got ({x_half_width}, {y_half_width})"
            )));
        }
        self.x_half_width = x_half_width;
        self.y_half_width = y_half_width;
        Ok(self)
    }

    fn cube_amplitude(kind: AmplitudeKind) -> fn(&[f64], &[f64]) -> f64 {
        match kind {
            AmplitudeKind::SmoothBump => cube_bump,
            _ => cube_indicator,
        }
    }

    /// `Φ₁ = x·y` on `[-1, 1]^{2d}`.
    pub fn fourier(dim: usize, kind: AmplitudeKind) -> Result<Self> {
        let name = if dim == 1 {
            "fourier".to_string()
        } else {
            format!("fourier-d{dim}")
        };
        Self::new(
            name,
            dim,
            |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum(),
            Self::cube_amplitude(kind),
            2.0 * dim as f64 + 1.0,
            kind,
        )?
        .with_boxes(1.0, 1.0)
    }

    /// Bilinear phase `Φ₁ = Σ a_ij x_i y_j` on `[-1, 1]^{2d}`.
    pub fn bilinear(coefficients: Vec<Vec<f64>>, kind: AmplitudeKind) -> Result<Self> {
        let dim = coefficients.len();
        if dim == 0 || coefficients.iter().any(|row| row.len() != dim) {
            return Err(Error::Domain(
                "bilinear phase needs a square d×d coefficient matrix".into(),
            ));
        }
        if coefficients.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Domain("bilinear coefficients must be finite".into()));
        }
        Self::new(
            "custom",
            dim,
            move |x: &[f64], y: &[f64]| {
                let mut s = 0.0;
                for (i, row) in coefficients.iter().enumerate() {
                    for (j, a) in row.iter().enumerate() {
                        s += a * x[i] * y[j];
                    }
                }
                s
            },
            Self::cube_amplitude(kind),
            2.0 * dim as f64 + 1.0,
            kind,
        )?
        .with_boxes(1.0, 1.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }

    pub fn amplitude_kind(&self) -> AmplitudeKind {
        self.kind
    }

    pub fn x_half_width(&self) -> f64 {
        self.x_half_width
    }

    pub fn y_half_width(&self) -> f64 {
        self.y_half_width
    }

    pub fn phase(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.phase)(x, y)
    }

    pub fn amplitude(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.amplitude)(x, y)
    }

    /// Sample the shell `C ≤ |x|² + |y|² ≤ 4C` for nonzero amplitude and the
    /// ball `|x|² + |y|² < C` for a nonzero value.
    pub fn check_support(&self) -> Result<()> {
        let n: usize = match self.dim {
            1 => 61,
            2 => 13,
            _ => 7,
        };
        let reach = 2.0 * self.support_bound.sqrt();
        let axis: Vec<f64> = (0..n)
            .map(|i| -reach + 2.0 * reach * i as f64 / (n - 1) as f64)
            .collect();
        let mut any_inside = false;
        let total = n.pow(2 * self.dim as u32);
        let mut point = vec![0.0; 2 * self.dim];
        for idx in 0..total {
            let mut rem = idx;
            for slot in point.iter_mut() {
                *slot = axis[rem % n];
                rem /= n;
            }
            let (x, y) = point.split_at(self.dim);
            let r2: f64 = point.iter().map(|v| v * v).sum();
            let amp = self.amplitude(x, y);
            if r2 >= self.support_bound {
                if amp != 0.0 {
                    return Err(Error::SupportViolation {
                        radius_sq: r2,
                        bound: self.support_bound,
                    });
                }
            } else if amp != 0.0 {
                any_inside = true;
            }
        }
        if !any_inside {
            // The grid may straddle a thin support; try the origin before giving up.
            let zero = vec![0.0; self.dim];
            if self.amplitude(&zero, &zero) == 0.0 {
                return Err(Error::ZeroAmplitude);
            }
        }
        Ok(())
    }

    /// Look up a catalog kernel: `fourier`, `fourier-d2`, `fourier-d3`, or
    /// `custom` with bilinear coefficients.
    pub fn from_name(name: &str, kind: AmplitudeKind, coefficients: Option<Vec<Vec<f64>>>) -> Result<Self> {
        match name {
            "fourier" => Self::fourier(1, kind),
            "fourier-d2" => Self::fourier(2, kind),
            "fourier-d3" => Self::fourier(3, kind),
            "custom" => {
                let c = coefficients
                    .ok_or_else(|| Error::Config("kernel 'custom' needs a 'coefficients' matrix".into()))?;
                Self::bilinear(c, kind)
            }
            other => Err(Error::Config(format!(
                "unknown kernel '{other}' (expected fourier, fourier-d2, fourier-d3, custom)"
            ))),
        }
    }
}

/// Sample points `(x, y)` on a uniform grid of the `x`/`y` boxes where the
/// amplitude is nonzero.
pub fn support_samples(kernel: &PhaseAmplitudeKernel, per_axis: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let d = kernel.dim();
    let n = per_axis.max(2);
    let mut out = Vec::new();
    let mut point = vec![0.0; 2 * d];
    for idx in 0..n.pow(2 * d as u32) {
        let mut rem = idx;
        for (k, slot) in point.iter_mut().enumerate() {
            let half = if k < d {
                kernel.x_half_width()
            } else {
                kernel.y_half_width()
            };
            // Stay strictly inside so that finite-difference stencils see the support.
            let t = (rem % n) as f64 / (n - 1) as f64;
            *slot = half * 0.98 * (2.0 * t - 1.0);
            rem /= n;
        }
        let (x, y) = point.split_at(d);
        if kernel.amplitude(x, y) != 0.0 {
            out.push((x.to_vec(), y.to_vec()));
        }
    }
    out
}

fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col] / pivot_row[col];
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= factor * p;
            }
        }
    }
    det
}

/// Mixed second derivatives `∂²Φ₁/∂x_i∂y_j` by central differences.
pub fn mixed_hessian(kernel: &PhaseAmplitudeKernel, x: &[f64], y: &[f64], h: f64) -> Vec<Vec<f64>> {
    let d = kernel.dim();
    let mut m = vec![vec![0.0; d]; d];
    let mut xp = x.to_vec();
    let mut yp = y.to_vec();
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0.0;
            for (sx, sy, sign) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
                xp[i] = x[i] + sx * h;
                yp[j] = y[j] + sy * h;
                acc += sign * kernel.phase(&xp, &yp);
                xp[i] = x[i];
                yp[j] = y[j];
            }
            m[i][j] = acc / (4.0 * h * h);
        }
    }
    m
}

/// `min |det ∂²Φ₁/∂x∂y|` over the samples.
pub fn check_nondegeneracy(kernel: &PhaseAmplitudeKernel, samples: &[(Vec<f64>, Vec<f64>)], h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if samples.is_empty() {
        return Err(Error::Domain("no sample points for the non-degeneracy check".into()));
    }
    let d = kernel.dim();
    let mut worst = f64::INFINITY;
    for (x, y) in samples {
        if x.len() != d || y.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len().max(y.len()),
            });
        }
        let det = determinant(mixed_hessian(kernel, x, y, h)).abs();
        if det.is_nan() {
            return Err(Error::NanIntegrand { at: x[0] });
        }
        worst = worst.min(det);
    }
    Ok(worst)
}

/// Default finite-difference step: `10⁻⁴·C`.
pub fn default_fd_step(kernel: &PhaseAmplitudeKernel) -> f64 {
    1e-4 * kernel.support_bound()
}
