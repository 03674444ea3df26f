mod common;

use bgls_osc::operator::{apply_operator, grid_1d, AmplitudeKind, FieldLqCurve, OperatorContext, PhaseAmplitudeKernel};
use bgls_osc::psi::{bgls_norm, PsiFunction};
use bgls_osc::quad::{fresnel_i, indicator, lp_norm, witness_f0, FunctionSpec, QuadConfig};
use bgls_osc::sharpness::{w_functional, SweepConfig};

fn fourier() -> PhaseAmplitudeKernel {
    PhaseAmplitudeKernel::fourier(1, AmplitudeKind::ExactIndicator).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn fresnel_matches_trapezoid_oracle() {
    for lambda in [1e-4f64, 0.5, 3.0, 20.0, 49.9, 50.1, 200.0, 1000.0] {
        let n = ((lambda.sqrt() * 20_000.0) as usize).max(2000) & !1;
        let oracle = common::fresnel_brute(lambda, n);
        let got = fresnel_i(lambda).unwrap();
        assert!(
            (got - oracle).abs() < 1e-9 * oracle.abs().max(1.0),
            "Λ = {lambda}: {got} vs {oracle}"
        );
    }
}

#[test]
fn witness_lp_matches_geometric_simpson_oracle() {
    let f0 = witness_f0();
    for p in [1.01, 1.25, 1.5, 1.75, 1.99] {
        let got = lp_norm(&f0, p, &QuadConfig::default()).unwrap().value;
        let oracle = common::f0_lp_brute(p);
        assert!(rel(got, oracle) < 1e-8, "p = {p}: {got} vs {oracle}");
    }
}

#[test]
fn singular_substitution_with_varying_regular_part() {
    let h = |y: f64| 2.0 + (3.0 * y).cos() + y;
    let f = FunctionSpec::inv_sqrt_singular("g", 1.0, h).unwrap();
    for p in [1.1, 1.5, 1.9] {
        let got = lp_norm(&f, p, &QuadConfig::default()).unwrap().value;
        let oracle = common::singular_lp_brute(h, p);
        assert!(rel(got, oracle) < 1e-7, "p = {p}: {got} vs {oracle}");
    }
}

#[test]
fn witness_field_matches_simpson_oracle() {
    let lambda = 64.0;
    let xs = [0.003, 0.03, 0.3, 0.9, -0.45];
    let u = apply_operator(&fourier(), lambda, &witness_f0(), &grid_1d(&xs), &QuadConfig::default()).unwrap();
    for (i, &x) in xs.iter().enumerate() {
        let oracle = common::u_f0_brute(lambda, x.abs(), 200_000);
        assert!(
            (u.values[i].re - oracle).abs() < 1e-8,
            "x = {x}: {} vs {oracle}",
            u.values[i].re
        );
    }
}

#[test]
fn w_at_small_lambda_matches_riemann_oracle() {
    let got = w_functional(&fourier(), 4.0, &witness_f0(), 1.5, &SweepConfig::default()).unwrap();
    let oracle = common::w_f0_brute(4.0, 1.5, 200_000);
    assert!(rel(got, oracle) < 1e-3, "{got} vs {oracle}");
}

#[test]
fn sinc_l2_norm_matches_simpson_oracle() {
    let k = fourier();
    let one = indicator(1).unwrap();
    let ctx = OperatorContext::new(&k, 64.0, &one, QuadConfig::default()).unwrap();
    let field = FieldLqCurve::over_kernel_box(ctx).unwrap();
    let got = field.lq_norm(2.0).unwrap().value;
    let oracle = common::sinc_l2_brute(64.0, 400_000);
    assert!(rel(got, oracle) < 1e-8, "{got} vs {oracle}");
}

#[test]
fn committed_floor_oracle_reproduces() {
    let data = include_str!("data/w_f0_oracle.csv");
    let line = data.lines().nth(1).unwrap();
    let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
    let fresh = common::w_f0_brute(v[0], v[1], 1_000_000);
    assert!(rel(fresh, v[2]) < 1e-6, "{fresh} vs {}", v[2]);
}

#[test]
fn witness_norm_through_quadrature_curve() {
    let f0 = witness_f0();
    let n = bgls_norm(&f0.lp_curve(QuadConfig::default()), &PsiFunction::psi0()).unwrap();
    assert!((n.value - 1.0).abs() < 1e-4);
    assert!(n.refinement_delta < 5e-3);
}
