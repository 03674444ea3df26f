//! Brute-force oracles built from plain composite rules, sharing no code with
//! the library's quadrature.
#![allow(dead_code)]

/// `I(Λ) = 2 ∫₀^{√Λ} cos(t²) dt` by the trapezoid rule with `n` steps,
/// Richardson-extrapolated against `n/2`.
pub fn fresnel_brute(lambda: f64, n: usize) -> f64 {
    let trap = |n: usize| {
        let b = lambda.sqrt();
        let h = b / n as f64;
        let mut s = 0.5 * (1.0 + (b * b).cos());
        for i in 1..n {
            let t = i as f64 * h;
            s += (t * t).cos();
        }
        2.0 * s * h
    };
    let (fine, coarse) = (trap(n), trap(n / 2));
    fine + (fine - coarse) / 3.0
}

/// Composite Simpson on `[a, b]` with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `T_λ f₀(x) = ∫_{-1}^{1} e^{iλxy} |y|^{-1/2} dy = 4 ∫₀¹ cos(λx t²) dt`.
pub fn u_f0_brute(lambda: f64, x: f64, n: usize) -> f64 {
    4.0 * simpson(|t| (lambda * x * t * t).cos(), 0.0, 1.0, n)
}

/// `∫₀¹ |T_λ f₀(x)|^q dx`, written as `λ^{-1} ∫₀^{√λ} |2 I(t²)/t|^q 2t dt`
/// and marched in `t` with `I` accumulated alongside; trapezoid rule for both
/// integrals, Richardson-extrapolated.
fn f0_field_moment(lambda: f64, q: f64, n: usize) -> f64 {
    let march = |n: usize| {
        let b = lambda.sqrt();
        let h = b / n as f64;
        let g = |t: f64, i_val: f64| -> f64 {
            if t == 0.0 {
                0.0
            } else {
                (2.0 * i_val / t).abs().powf(q) * 2.0 * t
            }
        };
        let mut i_val = 0.0;
        let mut prev_c = 1.0;
        let mut prev_g = 0.0;
        let mut acc = 0.0;
        for k in 1..=n {
            let t = k as f64 * h;
            let c = (t * t).cos();
            i_val += h * (prev_c + c);
            let gk = g(t, i_val);
            acc += 0.5 * h * (prev_g + gk);
            prev_c = c;
            prev_g = gk;
        }
        acc / lambda
    };
    let (fine, coarse) = (march(n), march(n / 2));
    fine + (fine - coarse) / 3.0
}

/// `W(λ, f₀, p)` with the `x` integral over `[-1, 1]` and `|f₀|_p` from its
/// closed form `[4/(2-p)]^{1/p}`.
pub fn w_f0_brute(lambda: f64, p: f64, n: usize) -> f64 {
    let q = p / (p - 1.0);
    let lq = (2.0 * f0_field_moment(lambda, q, n)).powf(1.0 / q);
    lq * lambda.powf(1.0 / q) / (4.0 / (2.0 - p)).powf(1.0 / p)
}

/// `|2 sin(λx)/(λx)|_2` over `[-1, 1]`.
pub fn sinc_l2_brute(lambda: f64, n: usize) -> f64 {
    let g = |x: f64| {
        let s = if x == 0.0 {
            2.0
        } else {
            2.0 * (lambda * x).sin() / (lambda * x)
        };
        s * s
    };
    (2.0 * simpson(g, 0.0, 1.0, n)).sqrt()
}

/// `(∫_{-1}^{1} |h(y)|^p |y|^{-p/2} dy)^{1/p}`, Simpson on a geometric
/// partition of each half of `[-1, 1]`; the innermost pieces `(0, 2^{-60}]`
/// are added in closed form with `h` frozen at `±2^{-60}`.
pub fn singular_lp_brute(h: impl Fn(f64) -> f64, p: f64) -> f64 {
    let a = 1.0 - p / 2.0;
    let eps = 2f64.powi(-60);
    let mut s = (h(eps).abs().powf(p) + h(-eps).abs().powf(p)) * eps.powf(a) / a;
    for k in 0..60 {
        let lo = 2f64.powi(-(k + 1));
        let hi = 2f64.powi(-k);
        s += simpson(
            |y| (h(y).abs().powf(p) + h(-y).abs().powf(p)) * y.powf(-p / 2.0),
            lo,
            hi,
            200,
        );
    }
    s.powf(1.0 / p)
}

pub fn f0_lp_brute(p: f64) -> f64 {
    singular_lp_brute(|_| 1.0, p)
}
