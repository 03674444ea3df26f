use bgls_osc::operator::{apply_operator, grid_1d, AmplitudeKind, PhaseAmplitudeKernel};
use bgls_osc::psi::{bgls_norm, fundamental_function, PsiFunction};
use bgls_osc::quad::{bump, indicator, integrate_adaptive, lp_norm, witness_f0, FunctionSpec, QuadConfig};
use bgls_osc::sharpness::{sweep, SweepConfig, Witness};
use proptest::prelude::*;

fn fourier() -> PhaseAmplitudeKernel {
    PhaseAmplitudeKernel::fourier(1, AmplitudeKind::ExactIndicator).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integration_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, w in 0.5f64..40.0) {
        let cfg = QuadConfig::default();
        let g = |x: f64| (w * x).sin();
        let h = |x: f64| x * x - 0.3;
        let ig = integrate_adaptive(g, 0.0, 2.0, &cfg).unwrap().value;
        let ih = integrate_adaptive(h, 0.0, 2.0, &cfg).unwrap().value;
        let both = integrate_adaptive(|x| alpha * g(x) + beta * h(x), 0.0, 2.0, &cfg).unwrap();
        let tol = 2.0 * cfg.target(both.value.abs()) + 1e-12;
        prop_assert!((both.value - (alpha * ig + beta * ih)).abs() <= tol);
    }

    #[test]
    fn operator_is_linear(lambda in 1.0f64..200.0, x in -1.0f64..1.0, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let cfg = QuadConfig::default();
        let k = fourier();
        let (f, g) = (indicator(1).unwrap(), bump(1).unwrap());
        let combo = FunctionSpec::linear_combination(alpha, &f, beta, &g).unwrap();
        let grid = grid_1d(&[x]);
        let uf = apply_operator(&k, lambda, &f, &grid, &cfg).unwrap().values[0];
        let ug = apply_operator(&k, lambda, &g, &grid, &cfg).unwrap().values[0];
        let uc = apply_operator(&k, lambda, &combo, &grid, &cfg).unwrap().values[0];
        let expected = uf * alpha + ug * beta;
        let tol = 2.0 * cfg.target(expected.norm()) + 1e-12;
        prop_assert!((uc - expected).norm() <= tol, "{uc} vs {expected}");
    }

    #[test]
    fn even_input_gives_real_even_field(lambda in 1.0f64..500.0, x in 0.0f64..1.0) {
        let cfg = QuadConfig::default();
        let u = apply_operator(&fourier(), lambda, &witness_f0(), &grid_1d(&[x, -x]), &cfg).unwrap();
        let tol = cfg.target(u.values[0].norm()) + 1e-12;
        prop_assert!(u.values[0].im.abs() <= tol && u.values[1].im.abs() <= tol);
        prop_assert!((u.values[0] - u.values[1]).norm() <= 2.0 * tol);
    }

    #[test]
    fn field_is_bounded_by_l1_norm(lambda in 1.0f64..500.0, x in -1.0f64..1.0) {
        let cfg = QuadConfig::default();
        for f in [witness_f0(), bump(1).unwrap()] {
            let l1 = lp_norm(&f, 1.0, &cfg).unwrap().value;
            let u = apply_operator(&fourier(), lambda, &f, &grid_1d(&[x]), &cfg).unwrap().values[0];
            prop_assert!(u.norm() <= l1 * (1.0 + cfg.rel_tol) + cfg.abs_tol);
        }
    }

    #[test]
    fn witness_field_decays_like_inverse_sqrt(lambda in 1.0f64..1000.0, s in 0.0f64..1.0) {
        // λx spans [1, min(λ, 10³)] log-uniformly.
        let top = lambda.min(1000.0);
        let lx = top.powf(s);
        let x = lx / lambda;
        let u = apply_operator(&fourier(), lambda, &witness_f0(), &grid_1d(&[x]), &QuadConfig::default()).unwrap();
        let scaled = u.values[0].norm() * lx.sqrt();
        prop_assert!((0.1..=4.0).contains(&scaled), "λ = {lambda}, λx = {lx}: {scaled}");
    }

    #[test]
    fn dirac_weight_reads_off_lr_norm(r in 1.05f64..1.95) {
        let cfg = QuadConfig::default();
        let f0 = witness_f0();
        let n = bgls_norm(&f0.lp_curve(cfg), &PsiFunction::dirac(1.0, 2.0, r).unwrap()).unwrap().value;
        prop_assert!((n / lp_norm(&f0, r, &cfg).unwrap().value - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn fundamental_function_of_psi0_is_monotone(d1 in 0.001f64..1000.0, d2 in 0.001f64..1000.0) {
        let psi = PsiFunction::psi0();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = fundamental_function(&psi, lo).unwrap().value;
        let b = fundamental_function(&psi, hi).unwrap().value;
        prop_assert!(a <= b * (1.0 + 1e-12));
    }
}

#[test]
fn stein_scaling_removes_the_decay() {
    let w = Witness::new();
    let lambdas = [16.0, 64.0, 256.0, 1024.0];
    let ps = [1.1, 1.5, 1.9, 1.99];
    let r = sweep("stein", &fourier(), &lambdas, &ps, None, &w.f0, &SweepConfig::default()).unwrap();
    for (j, p) in ps.iter().enumerate() {
        let col: Vec<f64> = r.w_values.iter().map(|row| row[j].unwrap()).collect();
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        assert!(hi / lo < 4.0, "p = {p}: {col:?}");
    }
}

#[test]
fn upper_and_lower_scans_sandwich_z() {
    let w = Witness::new();
    let lambdas = [2.0, 8.0, 32.0];
    let r = sweep(
        "sandwich",
        &fourier(),
        &lambdas,
        &[1.5],
        Some(&w.psi0),
        &w.f0,
        &SweepConfig::default(),
    )
    .unwrap();
    assert!(r.converged());
    assert!(r.empirical_inf_z > 0.0 && r.empirical_sup.is_finite());
    for z in r.z_values.iter().flatten() {
        assert!(r.empirical_inf_z <= *z && *z <= r.empirical_sup);
    }
    assert!(r.refinement_delta < 0.05);
}

#[test]
fn smooth_bump_kernel_gives_finite_sweep() {
    let k = PhaseAmplitudeKernel::fourier(1, AmplitudeKind::SmoothBump).unwrap();
    let w = Witness::new();
    let r = sweep(
        "bump",
        &k,
        &[4.0, 32.0],
        &[1.5, 1.9],
        Some(&w.psi0),
        &w.f0,
        &SweepConfig::default(),
    )
    .unwrap();
    assert!(r.converged(), "{:?}", r.excluded);
    assert!(r.empirical_sup.is_finite() && r.empirical_inf_w > 0.0);
}
