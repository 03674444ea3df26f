//! Weight functions `ψ ∈ Ψ(a, b)` and the norms they define.
//!
//! `‖h‖G(ψ) = sup_{p∈(a,b)} |h|_p / ψ(p)`. Suprema over the exponent are taken
//! on a grid that is uniform in the interior and geometric toward both
//! endpoints (offsets `(b-a)·2^{-k}`), followed by golden-section refinement
//! around the best interior grid point. Endpoints themselves are never
//! evaluated; a supremum found at the outermost grid point is reported as
//! approached at that endpoint.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default cap on the dual exponent when `a = 1` makes its range unbounded.
pub const DEFAULT_Q_MAX: f64 = 64.0;

/// Relative change under doubled grid density below which a supremum is
/// considered stable.
pub const STABILITY_THRESHOLD: f64 = 5e-3;

/// Hölder conjugate `q = p/(p-1)`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return domain(format!("conjugate exponent needs p > 1, got {p}"));
    }
    if p.is_infinite() {
        return Ok(1.0);
    }
    Ok(p / (p - 1.0))
}

/// Where a curve's values come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    ClosedForm,
    Quadrature { tolerance: f64 },
}

/// `p ↦ |f|_p` for some fixed `f`.
pub trait LpCurve {
    /// Open interval of exponents where the curve can be evaluated.
    fn domain(&self) -> (f64, f64);
    fn eval(&self, p: f64) -> Result<f64>;
    fn provenance(&self) -> Provenance;
}

/// An `L_p` curve given by a formula.
#[derive(Clone)]
pub struct ClosedFormCurve {
    domain: (f64, f64),
    eval: ScalarFn,
}

impl ClosedFormCurve {
    pub fn new(lo: f64, hi: f64, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            domain: (lo, hi),
            eval: Arc::new(eval),
        }
    }
}

impl LpCurve for ClosedFormCurve {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }
    fn eval(&self, p: f64) -> Result<f64> {
        let (lo, hi) = self.domain;
        if !(p >= lo && p <= hi) {
            return domain(format!("p = {p} outside curve domain ({lo}, {hi})"));
        }
        Ok((self.eval)(p))
    }
    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }
}

/// `c · curve`, the `L_p` curve of `c·f` for `c > 0`.
pub struct ScaledCurve<'a, C: ?Sized> {
    pub inner: &'a C,
    pub factor: f64,
}

impl<C: LpCurve + ?Sized> LpCurve for ScaledCurve<'_, C> {
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }
    fn eval(&self, p: f64) -> Result<f64> {
        Ok(self.factor * self.inner.eval(p)?)
    }
    fn provenance(&self) -> Provenance {
        self.inner.provenance()
    }
}

#[derive(Clone)]
pub enum PsiKind {
    Continuous(ScalarFn),
    /// `ψ(r) = weight`, `ψ = ∞` elsewhere; `‖h‖ = |h|_r / weight`.
    Dirac {
        r: f64,
        weight: f64,
    },
}

/// A weight `ψ` on the exponent interval `(a, b)`.
#[derive(Clone)]
pub struct PsiFunction {
    name: String,
    a: f64,
    b: f64,
    kind: PsiKind,
    endpoint_limits: (f64, f64),
    eval_cap: Option<f64>,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("PsiFunction");
        d.field("name", &self.name).field("a", &self.a).field("b", &self.b);
        match self.kind {
            PsiKind::Continuous(_) => d.field("kind", &"continuous"),
            PsiKind::Dirac { r, weight } => d.field("kind", &format_args!("dirac({r}, weight {weight})")),
        };
        d.field("endpoint_limits", &self.endpoint_limits)
            .field("eval_cap", &self.eval_cap)
            .finish()
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a >= 1.0) || !(b > a) || a.is_infinite() {
        return domain(format!("need 1 <= a < b, got ({a}, {b})"));
    }
    Ok(())
}

impl PsiFunction {
    /// A continuous weight. Positivity and finiteness are checked on a sample
    /// of interior points; endpoint limits default to the values at the
    /// innermost geometric offsets.
    pub fn continuous(
        name: impl Into<String>,
        a: f64,
        b: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::continuous_with_limits(name, a, b, eval, None)
    }

    pub fn continuous_with_limits(
        name: impl Into<String>,
        a: f64,
        b: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        limits: Option<(f64, f64)>,
    ) -> Result<Self> {
        check_interval(a, b)?;
        let name = name.into();
        let eval: ScalarFn = Arc::new(eval);
        let hi = if b.is_finite() { b } else { a + 1e6 };
        let span = hi - a;
        let probes = (1..64)
            .map(|i| a + span * i as f64 / 64.0)
            .chain((1..=40).flat_map(|k| {
                let off = span * 2f64.powi(-k);
                [a + off, hi - off]
            }));
        for p in probes {
            let v = eval(p);
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!(
                    "ψ '{name}' must be finite and positive on ({a}, {b}); ψ({p}) = {v}"
                ));
            }
        }
        let endpoint_limits = limits.unwrap_or_else(|| {
            let off = span * 2f64.powi(-40);
            (eval(a + off), eval(hi - off))
        });
        if !(endpoint_limits.0 > 0.0) || !(endpoint_limits.1 > 0.0) {
            return domain(format!(
                "ψ '{name}' must have positive endpoint limits, got {endpoint_limits:?}"
            ));
        }
        Ok(Self {
            name,
            a,
            b,
            kind: PsiKind::Continuous(eval),
            endpoint_limits,
            eval_cap: None,
        })
    }

    /// `ψ_r`: one at `r`, infinite elsewhere. Its norm is the `L_r` norm.
    pub fn dirac(a: f64, b: f64, r: f64) -> Result<Self> {
        check_interval(a, b)?;
        if !(r > a && r < b) {
            return domain(format!("dirac point r = {r} must lie in ({a}, {b})"));
        }
        Ok(Self {
            name: format!("dirac:{r}"),
            a,
            b,
            kind: PsiKind::Dirac { r, weight: 1.0 },
            endpoint_limits: (f64::INFINITY, f64::INFINITY),
            eval_cap: None,
        })
    }

    /// `ψ ≡ 1` on `(a, b)`.
    pub fn one(a: f64, b: f64) -> Result<Self> {
        Self::continuous_with_limits("one", a, b, |_| 1.0, Some((1.0, 1.0)))
    }

    /// `ψ₀(p) = [4/(2-p)]^{1/p}` on `(1, 2)`: the `L_p` curve of `f₀`.
    pub fn psi0() -> Self {
        Self::continuous_with_limits(
            "psi0",
            1.0,
            2.0,
            |p| (4.0 / (2.0 - p)).powf(1.0 / p),
            Some((4.0, f64::INFINITY)),
        )
        .expect("static ψ₀ parameters")
    }

    /// `ψ(p) = (2-p)^{-α}` on `(1, 2)`, `α ≥ 0`.
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return domain(format!("power weight needs finite α >= 0, got {alpha}"));
        }
        let upper = if alpha > 0.0 { f64::INFINITY } else { 1.0 };
        Self::continuous_with_limits(
            format!("power:{alpha}"),
            1.0,
            2.0,
            move |p| (2.0 - p).powf(-alpha),
            Some((1.0, upper)),
        )
    }

    /// `ψ(p) = (p-1)^{-β}` on `(1, 2)`, `β ≥ 0`.
    pub fn lower_power(beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return domain(format!("lower-power weight needs finite β >= 0, got {beta}"));
        }
        let lower = if beta > 0.0 { f64::INFINITY } else { 1.0 };
        Self::continuous_with_limits(
            format!("lower-power:{beta}"),
            1.0,
            2.0,
            move |p| (p - 1.0).powf(-beta),
            Some((lower, 1.0)),
        )
    }

    /// Look up a catalog weight on `(1, 2)`: `one`, `psi0`, `power:α`,
    /// `lower-power:β`, `dirac:r`.
    pub fn from_name(spec: &str) -> Result<Self> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (spec.trim(), None),
        };
        let num = |what: &str| -> Result<f64> {
            let raw = arg.ok_or_else(|| Error::Config(format!("ψ '{spec}' needs a parameter ({what})")))?;
            raw.parse::<f64>()
                .map_err(|e| Error::Config(format!("ψ '{spec}': bad {what} '{raw}': {e}")))
        };
        match (head, arg) {
            ("one", None) => Self::one(1.0, 2.0),
            ("psi0", None) => Ok(Self::psi0()),
            ("power", Some(_)) => Self::power(num("α")?),
            ("lower-power", Some(_)) => Self::lower_power(num("β")?),
            ("dirac", Some(_)) => Self::dirac(1.0, 2.0, num("r")?),
            _ => Err(Error::Config(format!(
                "unknown ψ '{spec}' (expected one, psi0, power:α, lower-power:β, dirac:r)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn endpoint_limits(&self) -> (f64, f64) {
        self.endpoint_limits
    }

    pub fn eval_cap(&self) -> Option<f64> {
        self.eval_cap
    }

    pub fn with_eval_cap(mut self, cap: f64) -> Result<Self> {
        if !(cap > self.a) {
            return domain(format!(
                "evaluation cap {cap} leaves an empty domain above a = {}",
                self.a
            ));
        }
        self.eval_cap = Some(cap);
        Ok(self)
    }

    /// Interval the suprema actually range over: `(a, min(b, cap))`.
    pub fn effective_interval(&self) -> Result<(f64, f64)> {
        let hi = match self.eval_cap {
            Some(cap) => self.b.min(cap),
            None => self.b,
        };
        if !(hi > self.a) || hi.is_infinite() {
            return domain(format!(
                "effective exponent domain ({}, {hi}) of ψ '{}' is empty or unbounded; set an evaluation cap",
                self.a, self.name
            ));
        }
        Ok((self.a, hi))
    }

    /// `ψ(p)`; `+∞` away from the point of a dirac weight.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(p > self.a && p < self.b) {
            return domain(format!(
                "p = {p} outside ({}, {}) for ψ '{}'",
                self.a, self.b, self.name
            ));
        }
        Ok(match &self.kind {
            PsiKind::Continuous(f) => f(p),
            PsiKind::Dirac { r, weight } => {
                if p == *r {
                    *weight
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// `c · ψ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return domain(format!("scale must be finite and positive, got {c}"));
        }
        let kind = match &self.kind {
            PsiKind::Continuous(f) => {
                let f = f.clone();
                PsiKind::Continuous(Arc::new(move |p| c * f(p)))
            }
            PsiKind::Dirac { r, weight } => PsiKind::Dirac {
                r: *r,
                weight: c * weight,
            },
        };
        Ok(Self {
            name: format!("{c}*{}", self.name),
            kind,
            endpoint_limits: (c * self.endpoint_limits.0, c * self.endpoint_limits.1),
            ..self.clone()
        })
    }

    /// `ν*(q) = ν(q/(q-1))` on `(b/(b-1), a/(a-1))`.
    pub fn dual(&self, q_max: f64) -> Result<Self> {
        transform_psi_lambda(self, 1.0, 1, q_max)
    }
}

fn dual_interval(a: f64, b: f64) -> (f64, f64) {
    let lo = if b.is_infinite() { 1.0 } else { b / (b - 1.0) };
    let hi = if a == 1.0 { f64::INFINITY } else { a / (a - 1.0) };
    (lo, hi)
}

/// `ψ^{(λ)}(q) = λ^{-d/q} ψ(q/(q-1))` on the dual interval. When `a = 1` the
/// dual interval is unbounded above and `q_max` becomes the evaluation cap.
pub fn transform_psi_lambda(psi: &PsiFunction, lambda: f64, d: usize, q_max: f64) -> Result<PsiFunction> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return domain(format!("λ must be finite and >= 1, got {lambda}"));
    }
    if d == 0 {
        return domain("dimension must be >= 1");
    }
    if psi.b > 2.0 {
        return domain(format!("ψ must live on (a, b) with b <= 2, got b = {}", psi.b));
    }
    let (lo, hi) = dual_interval(psi.a, psi.b);
    let dim = d as f64;
    let weight = move |q: f64| lambda.powf(-dim / q);
    let name = if lambda == 1.0 {
        format!("{}*", psi.name)
    } else {
        format!("{}^({lambda})", psi.name)
    };
    let out = match &psi.kind {
        PsiKind::Continuous(f) => {
            let f = f.clone();
            // q → lo ⇔ p → b and q → hi ⇔ p → a.
            let limits = (
                weight(lo) * psi.endpoint_limits.1,
                if hi.is_infinite() {
                    psi.endpoint_limits.0
                } else {
                    weight(hi) * psi.endpoint_limits.0
                },
            );
            PsiFunction {
                name,
                a: lo,
                b: hi,
                kind: PsiKind::Continuous(Arc::new(move |q| weight(q) * f(q / (q - 1.0)))),
                endpoint_limits: limits,
                eval_cap: None,
            }
        }
        PsiKind::Dirac { r, weight: w } => {
            let rq = r / (r - 1.0);
            PsiFunction {
                name,
                a: lo,
                b: hi,
                kind: PsiKind::Dirac {
                    r: rq,
                    weight: w * weight(rq),
                },
                endpoint_limits: (f64::INFINITY, f64::INFINITY),
                eval_cap: None,
            }
        }
    };
    if hi.is_infinite() {
        out.with_eval_cap(q_max)
    } else {
        Ok(out)
    }
}

/// `ν = ψ·ζ` and `ν*(q) = ν(q/(q-1))`.
pub fn psi_product(psi: &PsiFunction, zeta: &PsiFunction, q_max: f64) -> Result<(PsiFunction, PsiFunction)> {
    if psi.a != zeta.a || psi.b != zeta.b {
        return domain(format!(
            "ψ and ζ must share a domain: ({}, {}) vs ({}, {})",
            psi.a, psi.b, zeta.a, zeta.b
        ));
    }
    if psi.b > 2.0 {
        return domain(format!("product weights need b <= 2, got {}", psi.b));
    }
    let name = format!("{}*{}", psi.name, zeta.name);
    let nu = match (&psi.kind, &zeta.kind) {
        (PsiKind::Continuous(f), PsiKind::Continuous(g)) => {
            let (f, g) = (f.clone(), g.clone());
            PsiFunction {
                name,
                a: psi.a,
                b: psi.b,
                kind: PsiKind::Continuous(Arc::new(move |p| f(p) * g(p))),
                endpoint_limits: (
                    psi.endpoint_limits.0 * zeta.endpoint_limits.0,
                    psi.endpoint_limits.1 * zeta.endpoint_limits.1,
                ),
                eval_cap: None,
            }
        }
        (PsiKind::Dirac { r, weight }, other) | (other, PsiKind::Dirac { r, weight }) => {
            let factor = match other {
                PsiKind::Continuous(g) => g(*r),
                PsiKind::Dirac { r: r2, weight: w2 } => {
                    if r2 != r {
                        return domain("product of dirac weights at different points is identically infinite");
                    }
                    *w2
                }
            };
            PsiFunction {
                name,
                a: psi.a,
                b: psi.b,
                kind: PsiKind::Dirac {
                    r: *r,
                    weight: weight * factor,
                },
                endpoint_limits: (f64::INFINITY, f64::INFINITY),
                eval_cap: None,
            }
        }
    };
    let nu_star = nu.dual(q_max)?;
    Ok((nu, nu_star))
}

/// Grid parameters for suprema over an exponent interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupOptions {
    /// Uniform interior points at density 1.
    pub interior_points: usize,
    /// Geometric offsets `2^{-k}`, `k = 1..=levels`, toward each endpoint.
    pub geometric_levels: u32,
    /// Grid density multiplier; 2 doubles every part of the grid.
    pub density: usize,
    pub golden_iterations: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        Self {
            interior_points: 64,
            geometric_levels: 40,
            density: 1,
            golden_iterations: 80,
        }
    }
}

impl SupOptions {
    pub fn doubled(&self) -> Self {
        self.scaled(2)
    }

    /// Every part of the grid `factor` times denser.
    pub fn scaled(&self, factor: usize) -> Self {
        Self {
            density: self.density * factor,
            ..*self
        }
    }

    fn grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        let span = hi - lo;
        let n = self.interior_points * self.density;
        let mut pts: Vec<f64> = (1..=n).map(|i| lo + span * i as f64 / (n + 1) as f64).collect();
        let steps = self.geometric_levels as usize * self.density;
        for k in 1..=steps {
            let off = span * 2f64.powf(-(k as f64) / self.density as f64);
            if off < span * 0.5 {
                pts.push(lo + off);
                pts.push(hi - off);
            }
        }
        pts.retain(|&p| p > lo && p < hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupLocation {
    Interior,
    /// Largest value at the innermost offset from the lower endpoint: the
    /// supremum is a limit as `p → a+`.
    LowerEndpoint,
    UpperEndpoint,
    /// Exact evaluation at the point of a dirac weight.
    Dirac,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupResult {
    pub value: f64,
    pub argmax: f64,
    pub location: SupLocation,
    pub evaluations: usize,
    pub diagnostic: Option<String>,
}

/// Supremum of `g` over the open interval `(lo, hi)`.
///
/// A non-finite value (or a divergence error) at an interior point makes the
/// supremum `+∞`, with the offending point in `diagnostic`.
pub fn supremum<G>(g: G, lo: f64, hi: f64, opts: &SupOptions) -> Result<SupResult>
where
    G: Fn(f64) -> Result<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return domain(format!("supremum needs a bounded nonempty interval, got ({lo}, {hi})"));
    }
    let pts = opts.grid(lo, hi);
    if pts.is_empty() {
        return domain(format!("no grid points in ({lo}, {hi})"));
    }
    let infinite = |p: f64, why: String| SupResult {
        value: f64::INFINITY,
        argmax: p,
        location: SupLocation::Interior,
        evaluations: 0,
        diagnostic: Some(why),
    };
    let probe = |p: f64| -> Result<std::result::Result<f64, String>> {
        match g(p) {
            Ok(v) if v.is_finite() => Ok(Ok(v)),
            Ok(v) => Ok(Err(format!("non-finite value {v} at p = {p}"))),
            Err(Error::Divergent(msg)) => Ok(Err(format!("divergent at p = {p}: {msg}"))),
            Err(e) => Err(e),
        }
    };

    let mut vals = Vec::with_capacity(pts.len());
    for &p in &pts {
        match probe(p)? {
            Ok(v) => vals.push(v),
            Err(why) => return Ok(infinite(p, why)),
        }
    }
    let mut evaluations = pts.len();
    let (mut best_i, mut best) = (0, vals[0]);
    for (i, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let last = pts.len() - 1;
    if best_i == 0 || best_i == last {
        return Ok(SupResult {
            value: best,
            argmax: pts[best_i],
            location: if best_i == 0 {
                SupLocation::LowerEndpoint
            } else {
                SupLocation::UpperEndpoint
            },
            evaluations,
            diagnostic: None,
        });
    }

    // Golden-section refinement on the bracket around the grid maximum.
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut l, mut r) = (pts[best_i - 1], pts[best_i + 1]);
    let mut x1 = r - INV_PHI * (r - l);
    let mut x2 = l + INV_PHI * (r - l);
    let eval_or_inf = |x: f64| -> Result<std::result::Result<f64, String>> { probe(x) };
    let mut f1 = match eval_or_inf(x1)? {
        Ok(v) => v,
        Err(why) => return Ok(infinite(x1, why)),
    };
    let mut f2 = match eval_or_inf(x2)? {
        Ok(v) => v,
        Err(why) => return Ok(infinite(x2, why)),
    };
    evaluations += 2;
    let (mut arg, mut val) = (pts[best_i], best);
    for _ in 0..opts.golden_iterations {
        if (r - l) <= 1e-13 * (hi - lo) {
            break;
        }
        if f1 >= f2 {
            r = x2;
            x2 = x1;
            f2 = f1;
            x1 = r - INV_PHI * (r - l);
            f1 = match eval_or_inf(x1)? {
                Ok(v) => v,
                Err(why) => return Ok(infinite(x1, why)),
            };
        } else {
            l = x1;
            x1 = x2;
            f1 = f2;
            x2 = l + INV_PHI * (r - l);
            f2 = match eval_or_inf(x2)? {
                Ok(v) => v,
                Err(why) => return Ok(infinite(x2, why)),
            };
        }
        evaluations += 1;
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f > val {
                val = f;
                arg = x;
            }
        }
    }
    Ok(SupResult {
        value: val,
        argmax: arg,
        location: SupLocation::Interior,
        evaluations,
        diagnostic: None,
    })
}

/// A supremum together with its grid-refinement check.
#[derive(Debug, Clone, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub argmax: f64,
    pub location: SupLocation,
    /// Value recomputed on the doubled grid.
    pub refined_value: f64,
    pub refinement_delta: f64,
    pub stable: bool,
    pub diagnostic: Option<String>,
}

impl NormResult {
    fn exact(value: f64, at: f64) -> Self {
        Self {
            value,
            argmax: at,
            location: SupLocation::Dirac,
            refined_value: value,
            refinement_delta: 0.0,
            stable: true,
            diagnostic: None,
        }
    }
}

pub(crate) fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if !a.is_finite() || !b.is_finite() {
        return f64::INFINITY;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn sup_with_check<G>(g: G, lo: f64, hi: f64, opts: &SupOptions) -> Result<NormResult>
where
    G: Fn(f64) -> Result<f64>,
{
    let base = supremum(&g, lo, hi, opts)?;
    let fine = supremum(&g, lo, hi, &opts.doubled())?;
    let delta = relative_change(base.value, fine.value);
    Ok(NormResult {
        value: base.value,
        argmax: base.argmax,
        location: base.location,
        refined_value: fine.value,
        refinement_delta: delta,
        stable: delta < STABILITY_THRESHOLD,
        diagnostic: base.diagnostic.or(fine.diagnostic),
    })
}

/// `‖h‖G(ψ) = sup_p curve(p)/ψ(p)` with default grid options.
pub fn bgls_norm<C: LpCurve + ?Sized>(curve: &C, psi: &PsiFunction) -> Result<NormResult> {
    bgls_norm_with(curve, psi, &SupOptions::default())
}

pub fn bgls_norm_with<C: LpCurve + ?Sized>(curve: &C, psi: &PsiFunction, opts: &SupOptions) -> Result<NormResult> {
    let (clo, chi) = curve.domain();
    match psi.kind {
        PsiKind::Dirac { r, weight } => {
            if !(r >= clo && r <= chi) {
                return domain(format!("curve domain ({clo}, {chi}) does not contain dirac point {r}"));
            }
            let v = curve.eval(r)?;
            Ok(NormResult::exact(v / weight, r))
        }
        PsiKind::Continuous(ref f) => {
            let (lo, hi) = psi.effective_interval()?;
            if clo > lo || chi < hi {
                return domain(format!(
                    "curve domain ({clo}, {chi}) does not cover ψ domain ({lo}, {hi})"
                ));
            }
            sup_with_check(
                |p| {
                    let w = f(p);
                    let c = curve.eval(p)?;
                    Ok(if w.is_infinite() { 0.0 } else { c / w })
                },
                lo,
                hi,
                opts,
            )
        }
    }
}

/// `φ(G(ψ); δ) = sup_p δ^{1/p}/ψ(p)`.
pub fn fundamental_function(psi: &PsiFunction, delta: f64) -> Result<NormResult> {
    fundamental_function_with(psi, delta, &SupOptions::default())
}

pub fn fundamental_function_with(psi: &PsiFunction, delta: f64, opts: &SupOptions) -> Result<NormResult> {
    if !(delta > 0.0) || !delta.is_finite() {
        return domain(format!("fundamental function needs finite δ > 0, got {delta}"));
    }
    match psi.kind {
        PsiKind::Dirac { r, weight } => Ok(NormResult::exact(delta.powf(1.0 / r) / weight, r)),
        PsiKind::Continuous(ref f) => {
            let (lo, hi) = psi.effective_interval()?;
            sup_with_check(
                |p| {
                    let w = f(p);
                    Ok(if w.is_infinite() { 0.0 } else { delta.powf(1.0 / p) / w })
                },
                lo,
                hi,
                opts,
            )
        }
    }
}
