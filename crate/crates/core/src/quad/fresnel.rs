//! The Fresnel-type integral `I(Λ) = ∫₀^Λ z^{-1/2} cos z dz`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::gauss_kronrod::{integrate_panels, QuadConfig};
use crate::error::{Error, Result};

/// Above this argument the value is taken from `√(π/2)` minus the
/// integrated-by-parts tail.
pub const LAMBDA_SWITCH: f64 = 50.0;

/// `∫₀^∞ z^{-1/2} cos z dz`.
pub fn fresnel_limit() -> f64 {
    FRAC_PI_2.sqrt()
}

/// `I(Λ)` for `Λ > 0`.
pub fn fresnel_i(big_lambda: f64) -> Result<f64> {
    if !(big_lambda > 0.0) || !big_lambda.is_finite() {
        return Err(Error::Domain(format!("I(Λ) needs finite Λ > 0, got {big_lambda}")));
    }
    if big_lambda <= LAMBDA_SWITCH {
        fresnel_i_direct(big_lambda)
    } else {
        Ok(fresnel_limit() - fresnel_tail(big_lambda))
    }
}

/// `2 ∫₀^{√Λ} cos(t²) dt`, i.e. `I(Λ)` after `z = t²`, split at the zeros of
/// `cos(t²)`.
pub(crate) fn fresnel_i_direct(big_lambda: f64) -> Result<f64> {
    let top = big_lambda.sqrt();
    let mut breaks = vec![0.0];
    let mut k = 1.0;
    while (k * PI).sqrt() < top {
        breaks.push((k * PI).sqrt());
        k += 1.0;
    }
    breaks.push(top);
    let cfg = QuadConfig {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        max_panels: 100_000,
    };
    let r = integrate_panels(|t: f64| (t * t).cos(), &breaks, &cfg)?;
    Ok(2.0 * r.value)
}

/// `∫_Λ^∞ z^{-1/2} cos z dz` by repeated integration by parts:
/// `∫_Λ^∞ z^{-a} e^{iz} dz = i e^{iΛ} Σ_k (-i)^k (a)_k Λ^{-a-k}`, truncated
/// once the terms stop shrinking or drop below working precision.
pub(crate) fn fresnel_tail(big_lambda: f64) -> f64 {
    let a = 0.5;
    let mut term = big_lambda.powf(-a);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    for k in 0..200 {
        sum += phase * term;
        let next = term * (a + k as f64) / big_lambda;
        if next >= term || next < 1e-18 * term.max(f64::MIN_POSITIVE) || next == 0.0 {
            break;
        }
        term = next;
        phase *= minus_i;
    }
    let lead = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, big_lambda);
    (lead * sum).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_argument_behaves_like_two_sqrt() {
        let l = 1e-6;
        let v = fresnel_i(l).unwrap();
        assert!((v / l.sqrt() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(fresnel_i(0.0).is_err());
        assert!(fresnel_i(-1.0).is_err());
        assert!(fresnel_i(f64::NAN).is_err());
    }

    #[test]
    fn switch_is_continuous() {
        // Both routes evaluated past the switch agree.
        for &l in &[50.5, 60.0, 100.0, 400.0] {
            let direct = fresnel_i_direct(l).unwrap();
            let series = fresnel_limit() - fresnel_tail(l);
            assert!((direct - series).abs() < 1e-12, "Λ={l}: {direct} vs {series}");
        }
    }

    #[test]
    fn two_term_tail_matches_for_huge_argument() {
        let l: f64 = 1e6;
        let corrected = fresnel_limit() + l.sin() / l.sqrt() - 0.5 * l.cos() * l.powf(-1.5);
        assert!((fresnel_i(l).unwrap() - corrected).abs() < 1e-8);
        assert!((fresnel_i(l).unwrap() - fresnel_limit()).abs() < 2e-3);
    }
}
