//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bgls_osc::operator::{
    apply_operator, check_nondegeneracy, default_fd_step, grid_1d, support_samples, AmplitudeKind, PhaseAmplitudeKernel,
};
use bgls_osc::psi::{bgls_norm, fundamental_function, PsiFunction};
use bgls_osc::quad::{bump, fresnel_i, fresnel_limit, indicator, lp_norm, witness_f0, QuadConfig};
use bgls_osc::sharpness::{
    exponent_floor, lower_bound_profile, proof_ratio_lhs, proof_ratio_rhs, theorem1_scan, theorem2_check,
    theorem3_scan, theorem4_scan, SweepConfig, Witness, DEFAULT_P_GRID, WITNESS_P_GRID,
};
use bgls_osc::Error;

type Criterion = fn() -> Result<Outcome, Error>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fourier() -> PhaseAmplitudeKernel {
    PhaseAmplitudeKernel::fourier(1, AmplitudeKind::ExactIndicator).expect("fourier kernel")
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn within(elapsed: Duration, limit: Duration, parts: &mut Vec<String>) -> bool {
    parts.push(format!("{:.1}s of {}s", elapsed.as_secs_f64(), limit.as_secs()));
    elapsed < limit
}

fn c1() -> Result<Outcome, Error> {
    let t = Instant::now();
    let check1 = Witness::new().verify(&WITNESS_P_GRID, &QuadConfig::default())?;
    let mut parts = vec![format!("max rel err {:.2e}", check1.max_rel_error)];
    let fast = within(t.elapsed(), Duration::from_secs(5), &mut parts);
    Ok(check(check1.max_rel_error < 1e-6 && fast, parts.join(", ")))
}

fn c2() -> Result<Outcome, Error> {
    let t = Instant::now();
    let k = fourier();
    let cfg = QuadConfig::default();
    let xs = [0.1, 0.5, 1.0];
    let (one, f0) = (indicator(1)?, witness_f0());
    let (mut err_a, mut err_b) = (0.0f64, 0.0f64);
    for lambda in [8.0, 64.0] {
        let ua = apply_operator(&k, lambda, &one, &grid_1d(&xs), &cfg)?;
        let ub = apply_operator(&k, lambda, &f0, &grid_1d(&xs), &cfg)?;
        for (i, &x) in xs.iter().enumerate() {
            let l = lambda * x;
            let exact_a = 2.0 * l.sin() / l;
            let exact_b = 2.0 * l.powf(-0.5) * fresnel_i(l)?;
            err_a = err_a.max((ua.values[i].re - exact_a).abs().max(ua.values[i].im.abs()) / exact_a.abs());
            err_b = err_b.max((ub.values[i].re - exact_b).abs().max(ub.values[i].im.abs()) / exact_b.abs());
        }
    }
    let mut parts = vec![
        format!("sinc rel err {err_a:.2e}"),
        format!("Fresnel rel err {err_b:.2e}"),
    ];
    let fast = within(t.elapsed(), Duration::from_secs(30), &mut parts);
    Ok(check(err_a < 1e-8 && err_b < 1e-5 && fast, parts.join(", ")))
}

fn c3() -> Result<Outcome, Error> {
    let limit = fresnel_limit();
    let mut tail_ok = true;
    let mut worst_tail = 0.0f64;
    for k in 0..=6 {
        let l = 10f64.powi(k);
        let gap = (fresnel_i(l)? - limit).abs();
        worst_tail = worst_tail.max(gap * l.sqrt() / 2.0);
        tail_ok &= gap <= 2.0 / l.sqrt();
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 1..=1000 {
        let l = i as f64 / 1000.0;
        let r = fresnel_i(l)? / l.sqrt();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    for k in 1..=12 {
        let l = 10f64.powi(-k);
        let r = fresnel_i(l)? / l.sqrt();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let small = fresnel_i(1e-6)? / 1e-3;
    let pass = tail_ok && lo >= 1.5 && hi <= 2.0 && (small - 2.0).abs() <= 1e-5;
    Ok(check(
        pass,
        format!(
            "max |I-√(π/2)|·√Λ/2 = {worst_tail:.3}, I/√Λ on (0,1] in [{lo:.6}, {hi:.6}], I(1e-6)/1e-3 = {small:.9}"
        ),
    ))
}

fn c4() -> Result<Outcome, Error> {
    let cfg = QuadConfig::default();
    let w = Witness::new();
    let n = w.norm(cfg)?.value;
    let f0 = witness_f0();
    let cases = [
        (f0.clone(), 1.0, 2.0, 1.5),
        (indicator(1)?, 1.0, 3.0, 2.5),
        (bump(1)?, 1.0, 4.0, 3.0),
    ];
    let mut dirac_err = 0.0f64;
    for (f, a, b, r) in &cases {
        let via_norm = bgls_norm(&f.lp_curve(cfg), &PsiFunction::dirac(*a, *b, *r)?)?.value;
        dirac_err = dirac_err.max(rel(via_norm, lp_norm(f, *r, &cfg)?.value));
    }
    let base = bgls_norm(&f0.lp_curve(cfg), &PsiFunction::psi0())?.value;
    let homog = bgls_norm(&f0.scaled(3.5).lp_curve(cfg), &PsiFunction::psi0())?.value;
    let weight = bgls_norm(&f0.lp_curve(cfg), &PsiFunction::psi0().scaled(2.0)?)?.value;
    let inv = rel(homog, 3.5 * base).max(rel(weight, base / 2.0));
    Ok(check(
        (n - 1.0).abs() <= 1e-4 && dirac_err <= 1e-8 && inv <= 1e-9,
        format!("‖f0‖G(ψ0) = {n:.8}, dirac rel err {dirac_err:.2e}, invariance rel err {inv:.2e}"),
    ))
}

fn c5() -> Result<Outcome, Error> {
    let t = Instant::now();
    let w = Witness::new();
    let lambdas = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0];
    let r = theorem1_scan(
        &fourier(),
        &lambdas,
        &DEFAULT_P_GRID,
        &[(w.psi0, w.f0)],
        &SweepConfig::default(),
    )?;
    let mut parts = vec![
        format!("max Z = {:.6}", r.empirical_sup_z),
        format!("refinement delta {:.2e}", r.refinement_delta),
    ];
    let converged = r.reports.iter().all(|rep| rep.converged());
    let fast = within(t.elapsed(), Duration::from_secs(300), &mut parts);
    Ok(check(
        r.finite && converged && r.refinement_delta < 0.05 && fast,
        parts.join(", "),
    ))
}

fn c6() -> Result<Outcome, Error> {
    let r = theorem3_scan(
        &fourier(),
        &[64.0, 256.0, 1024.0],
        &[1.9, 1.95, 1.99],
        0.05,
        &SweepConfig::default(),
    )?;
    let oracle = include_str!("data/w_f0_oracle.csv");
    let mut oracle_err = 0.0f64;
    for line in oracle.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().expect("oracle csv")).collect();
        let i = r.report.lambda_grid.iter().position(|&l| l == v[0]).expect("oracle λ");
        let j = r.report.p_grid.iter().position(|&p| p == v[1]).expect("oracle p");
        let w = r.report.w_values[i][j].unwrap_or(f64::NAN);
        oracle_err = oracle_err.max(rel(w, v[2]));
    }
    let oracle_min = oracle
        .lines()
        .skip(1)
        .map(|l| {
            l.rsplit(',')
                .next()
                .expect("oracle W")
                .parse::<f64>()
                .expect("oracle W")
        })
        .fold(f64::INFINITY, f64::min);
    let mut identity_err = 0.0f64;
    for p in [1.25, 1.5, 1.75] {
        identity_err = identity_err.max((proof_ratio_lhs(p) - proof_ratio_rhs(p)).abs());
    }
    let floor = exponent_floor(100_000);
    let floor_ok = r.passes_floor && r.report.converged() && oracle_min > 0.05 && oracle_err < 1e-3;
    let identity_ok = identity_err <= 1e-12;
    let bracket_ok = floor > 0.3 && floor <= 1.0;
    Ok(check(
        floor_ok && identity_ok && bracket_ok,
        format!(
            "min W = {:.6} (oracle min {oracle_min:.6}, agreement {oracle_err:.1e}): {}; \
             proof identity max |lhs - rhs| = {identity_err:.3e}: {}; grid min of (p-1)^(1/p-1) = {floor:.6}: {}",
            r.infimum,
            verdict(floor_ok),
            verdict(identity_ok),
            verdict(bracket_ok)
        ),
    ))
}

fn c7() -> Result<Outcome, Error> {
    let cfg = SweepConfig::default();
    let k = fourier();
    let r = theorem4_scan(&k, &[2.0, 8.0, 32.0, 128.0, 512.0], 0.05, &cfg)?;
    let rows = lower_bound_profile(&k, &[16.0, 256.0], &[3.0, 4.0, 6.0], &cfg)?;
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), row| {
        (lo.min(row.scaled), hi.max(row.scaled))
    });
    let bound_ok = rows.iter().all(|row| row.lr_norm >= row.lower_bound);
    let band_ok = hi / lo <= 4.0;
    let pass = r.passes_floor && r.report.converged() && r.report.refinement_delta < 0.05 && band_ok && bound_ok;
    Ok(check(
        pass,
        format!(
            "min Z = {:.6}, refinement delta {:.2e}, scaled |u|_r band [{lo:.4}, {hi:.4}] ratio {:.3}, |u|_r >= Cλ^(-1/r)(r-2)^(-1/r): {bound_ok}",
            r.infimum,
            r.report.refinement_delta,
            hi / lo
        ),
    ))
}

fn c8() -> Result<Outcome, Error> {
    let cfg = SweepConfig::default();
    let k = fourier();
    let w = Witness::new();
    let zeta = PsiFunction::lower_power(0.5)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for lambda in [4.0, 64.0] {
        let r = theorem2_check(&k, lambda, &w.psi0, &zeta, &w.f0, &cfg)?;
        ok &= r.ratio.is_finite() && r.refinement_delta < 0.05;
        parts.push(format!(
            "λ={lambda}: ratio {:.6} (delta {:.1e})",
            r.ratio, r.refinement_delta
        ));
    }
    let one = PsiFunction::one(1.0, 2.0)?;
    let mut phi_err = 0.0f64;
    for lambda in [2.0, 4.0, 64.0, 1024.0] {
        phi_err = phi_err.max(rel(fundamental_function(&one, lambda)?.value, lambda));
    }
    ok &= phi_err <= 1e-3;
    parts.push(format!("φ(G(1), λ) vs λ rel err {phi_err:.2e}"));
    Ok(check(ok, parts.join(", ")))
}

fn c9() -> Result<Outcome, Error> {
    let bilinear = fourier();
    let det_xy = check_nondegeneracy(&bilinear, &support_samples(&bilinear, 9), default_fd_step(&bilinear))?;
    let additive = PhaseAmplitudeKernel::new(
        "x+y",
        1,
        |x, y| x[0] + y[0],
        |x, y| {
            if x[0].abs() <= 1.0 && y[0].abs() <= 1.0 {
                1.0
            } else {
                0.0
            }
        },
        3.0,
        AmplitudeKind::Custom,
    )?;
    let det_sum = check_nondegeneracy(&additive, &support_samples(&additive, 9), default_fd_step(&additive))?;
    let violation = PhaseAmplitudeKernel::new("wide", 1, |x, y| x[0] * y[0], |_, _| 1.0, 3.0, AmplitudeKind::Custom);
    let rejected = matches!(violation, Err(Error::SupportViolation { .. }));
    Ok(check(
        (det_xy - 1.0).abs() <= 1e-6 && det_sum.abs() <= 1e-6 && rejected,
        format!("det(xy) = {det_xy:.9}, det(x+y) = {det_sum:.3e}, support violation rejected: {rejected}"),
    ))
}

fn c10() -> Result<Outcome, Error> {
    let dir = std::env::temp_dir().join(format!("bgls-osc-acceptance-{}", std::process::id()));
    let cfg_path = dir.join("config.json");
    std::fs::create_dir_all(&dir).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(
        &cfg_path,
        r#"{"schema": "bgls-osc/1", "lambda_grid": [4, 32], "p_grid": [1.5, 1.99]}"#,
    )
    .map_err(|e| Error::Config(e.to_string()))?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.join(format!("run{run}"));
        let status = Command::new(env!("CARGO_BIN_EXE_bgls-osc"))
            .arg("--config")
            .arg(&cfg_path)
            .arg("--out")
            .arg(&out)
            .args(["scan", "--theorem", "1"])
            .output()
            .map_err(|e| Error::Config(e.to_string()))?;
        if !status.status.success() {
            return Ok(check(false, format!("run {run} exited with {}", status.status)));
        }
        outputs.push(std::fs::read(out.join("theorem1.csv")).map_err(|e| Error::Config(e.to_string()))?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    let same = outputs[0] == outputs[1];
    Ok(check(
        same,
        format!("two runs, {} CSV bytes, identical: {same}", outputs[0].len()),
    ))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, Criterion); 10] = [
        ("witness L_p norms", c1),
        ("operator closed forms", c2),
        ("Fresnel integral", c3),
        ("G(ψ) identities", c4),
        ("upper bound: sup Z finite and stable", c5),
        ("lower bound: W floor and proof identity", c6),
        ("lower bound: Z floor and L_r scaling", c7),
        ("factorized bound ratio and fundamental function", c8),
        ("kernel admissibility", c9),
        ("CLI determinism", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| check(false, format!("error: {e}")));
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            verdict(outcome.pass),
            outcome.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
