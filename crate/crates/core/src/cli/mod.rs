//! The `bgls-osc` command line: parses a [`RunConfig`], runs one pipeline and
//! writes its CSV/JSON artifacts.

pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use config::{function_from_name, psi_from_name, ConfigError, PairConfig, RunConfig, SCHEMA};

use crate::error::{Error, Result};
use crate::operator::{apply_operator, check_nondegeneracy, default_fd_step, default_x_grid, grid_1d, support_samples};
use crate::psi::{bgls_norm_with, fundamental_function_with};
use crate::sharpness::{
    exponent_floor, lower_bound_profile, proof_ratio_lhs, proof_ratio_rhs, sweep_csv, theorem1_scan, theorem2_check,
    theorem3_scan, theorem4_scan, to_json, write_file, Witness, WITNESS_P_GRID,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_UNSTABLE: i32 = 4;

pub const THREADS_ENV: &str = "BGLS_OSC_THREADS";

#[derive(Debug, Clone, Parser)]
#[command(
    name = "bgls-osc",
    version,
    about = "Oscillating integral operators in grand Lebesgue spaces"
)]
pub struct Cli {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides the config's `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; falls back to BGLS_OSC_THREADS, then all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long = "tol-abs", global = true)]
    pub tol_abs: Option<f64>,
    #[arg(long = "tol-rel", global = true)]
    pub tol_rel: Option<f64>,
    #[arg(long, global = true)]
    pub qmax: Option<f64>,
    /// Grid multiplier of the stability rerun.
    #[arg(long, global = true)]
    pub refine: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Compare quadrature |f0|_p with its closed form.
    VerifyWitness,
    /// Run one of the four bound scans.
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        theorem: u8,
    },
    /// ‖f‖G(ψ) for catalog ψ and f.
    BglsNorm {
        #[arg(long, default_value = "psi0")]
        psi: String,
        #[arg(long, default_value = "f0")]
        f: String,
    },
    /// φ(G(ψ), δ).
    Fundamental {
        #[arg(long, default_value = "one")]
        psi: String,
        #[arg(long)]
        delta: f64,
    },
    /// Dump samples of u = T_λ f.
    Apply {
        #[arg(long)]
        lambda: f64,
        /// Log-spaced points per side.
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Support and non-degeneracy checks of the configured kernel.
    CheckKernel {
        /// Sample points per axis.
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
            Error::Config(_) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: format!("{}: {e}", path.display()),
    }
}

/// The config after flag overrides.
pub fn resolve_config(cli: &Cli) -> std::result::Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let source = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
                location: source.clone(),
                message: e.to_string(),
            })?;
            RunConfig::from_json(&text, &source)?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = cli.tol_abs {
        cfg.tol_abs = v;
    }
    if let Some(v) = cli.tol_rel {
        cfg.tol_rel = v;
    }
    if let Some(v) = cli.qmax {
        cfg.q_max = v;
    }
    if let Some(v) = cli.refine {
        cfg.refine = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = Some(v.clone());
    }
    cfg.validate().map_err(|(field, message)| ConfigError {
        location: format!("command line: field `{field}`"),
        message,
    })?;
    Ok(cfg)
}

fn thread_count(cli: &Cli) -> std::result::Result<Option<usize>, ConfigError> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| ConfigError {
            location: THREADS_ENV.into(),
            message: format!("expected a thread count, got \"{s}\""),
        }),
        Err(_) => Ok(None),
    }
}

/// Runs the command, writing progress to `stdout` and diagnostics to
/// `stderr`; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run_inner(cli, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn run_inner(cli: &Cli, stdout: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let cfg = resolve_config(cli)?;
    let threads = thread_count(cli)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure {
        code: EXIT_FAILURE,
        message: format!("cannot start thread pool: {e}"),
    })?;
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut text = String::new();
    let code = pool.install(|| dispatch(&cli.command, &cfg, &out_dir, &mut text))?;
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
    Ok(code)
}

/// Exit code from a refinement delta and the list of excluded cells.
fn verdict(cfg: &RunConfig, delta: f64, excluded: &[String], out: &mut String) -> i32 {
    let _ = writeln!(
        out,
        "refinement_delta = {delta:.6e} (threshold {:.3e})",
        cfg.stability_threshold
    );
    if !excluded.is_empty() {
        let _ = writeln!(out, "non-converged cells:");
        for e in excluded {
            let _ = writeln!(out, "  {e}");
        }
        return EXIT_NOT_CONVERGED;
    }
    if !(delta <= cfg.stability_threshold) {
        let _ = writeln!(out, "refinement delta exceeds the stability threshold");
        return EXIT_UNSTABLE;
    }
    EXIT_OK
}

fn emit(out_dir: &Path, name: &str, contents: &str, out: &mut String) -> std::result::Result<(), Failure> {
    let path = out_dir.join(name);
    write_file(&path, contents)?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}

fn dispatch(cmd: &Command, cfg: &RunConfig, out_dir: &Path, out: &mut String) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::VerifyWitness => verify_witness(cfg, out_dir, out),
        Command::Scan { theorem } => match theorem {
            1 => scan1(cfg, out_dir, out),
            2 => scan2(cfg, out_dir, out),
            3 => scan3(cfg, out_dir, out),
            _ => scan4(cfg, out_dir, out),
        },
        Command::BglsNorm { psi, f } => {
            let psi = psi_from_name(psi)?;
            let f = function_from_name(f, 1)?;
            let n = bgls_norm_with(&f.lp_curve(cfg.quad()), &psi, &cfg.sweep().sup)?;
            let _ = writeln!(out, "{:.16e}", n.value);
            let _ = writeln!(out, "argmax p = {:.6} ({:?})", n.argmax, n.location);
            Ok(verdict(cfg, n.refinement_delta, &[], out))
        }
        Command::Fundamental { psi, delta } => {
            let psi = psi_from_name(psi)?;
            let n = fundamental_function_with(&psi, *delta, &cfg.sweep().sup)?;
            let _ = writeln!(out, "{:.16e}", n.value);
            let _ = writeln!(out, "argmax p = {:.6} ({:?})", n.argmax, n.location);
            Ok(verdict(cfg, n.refinement_delta, &[], out))
        }
        Command::Apply { lambda, points } => apply(cfg, *lambda, *points, out_dir, out),
        Command::CheckKernel { samples } => check_kernel(cfg, *samples, out),
    }
}

fn verify_witness(cfg: &RunConfig, out_dir: &Path, out: &mut String) -> std::result::Result<i32, Failure> {
    let w = Witness::new();
    let check = w.verify(&WITNESS_P_GRID, &cfg.quad())?;
    let mut csv = String::from("p,quadrature,closed_form,rel_error\n");
    for r in &check.rows {
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.p, r.quadrature, r.closed_form, r.rel_error
        );
    }
    emit(out_dir, "witness.csv", &csv, out)?;
    let _ = writeln!(out, "max relative error = {:.6e}", check.max_rel_error);
    Ok(if check.max_rel_error < 1e-6 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn scan1(cfg: &RunConfig, out_dir: &Path, out: &mut String) -> std::result::Result<i32, Failure> {
    let kernel = cfg.kernel()?;
    let pairs = cfg
        .pairs()
        .into_iter()
        .map(|p| Ok((psi_from_name(&p.psi)?, function_from_name(&p.f, kernel.dim())?)))
        .collect::<Result<Vec<_>>>()?;
    let r = theorem1_scan(&kernel, &cfg.lambda_grid, &cfg.p_grid, &pairs, &cfg.sweep())?;
    let mut excluded = Vec::new();
    for (i, rep) in r.reports.iter().enumerate() {
        let name = if r.reports.len() == 1 {
            "theorem1.csv".to_string()
        } else {
            format!("theorem1_pair{i}.csv")
        };
        emit(out_dir, &name, &sweep_csv(rep), out)?;
        excluded.extend(rep.excluded.iter().cloned());
    }
    emit(out_dir, "theorem1.json", &to_json(&r)?, out)?;
    let _ = writeln!(out, "empirical sup Z = {:.16e}", r.empirical_sup_z);
    if !r.finite {
        let _ = writeln!(out, "sup Z is not finite");
        return Ok(EXIT_FAILURE);
    }
    Ok(verdict(cfg, r.refinement_delta, &excluded, out))
}

fn scan2(cfg: &RunConfig, out_dir: &Path, out: &mut String) -> std::result::Result<i32, Failure> {
    let kernel = cfg.kernel()?;
    let psi = psi_from_name(&cfg.psi)?;
    let zeta = psi_from_name(&cfg.zeta)?;
    let f = function_from_name(&cfg.f, kernel.dim())?;
    let sweep = cfg.sweep();
    let rows = cfg
        .lambda_grid
        .iter()
        .map(|&l| theorem2_check(&kernel, l, &psi, &zeta, &f, &sweep))
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("lambda,lhs,rhs,ratio,fundamental,refined_ratio,refinement_delta\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.lambda, r.lhs, r.rhs, r.ratio, r.fundamental, r.refined_ratio, r.refinement_delta
        );
    }
    emit(out_dir, "theorem2.csv", &csv, out)?;
    emit(out_dir, "theorem2.json", &to_json(&rows)?, out)?;
    let delta = rows.iter().map(|r| r.refinement_delta).fold(0.0, f64::max);
    if rows.iter().any(|r| !r.ratio.is_finite()) {
        let _ = writeln!(out, "LHS/RHS is not finite");
        return Ok(EXIT_FAILURE);
    }
    Ok(verdict(cfg, delta, &[], out))
}

#[derive(Serialize)]
struct ProofRatioRow {
    p: f64,
    lhs: f64,
    rhs: f64,
}

#[derive(Serialize)]
struct Theorem3Summary<'a> {
    floor_report: &'a crate::sharpness::FloorReport,
    proof_ratio: Vec<ProofRatioRow>,
    exponent_floor: f64,
}

fn scan3(cfg: &RunConfig, out_dir: &Path, out: &mut String) -> std::result::Result<i32, Failure> {
    let kernel = cfg.kernel()?;
    let r = theorem3_scan(&kernel, &cfg.lambda_grid, &cfg.p_grid, cfg.floor, &cfg.sweep())?;
    emit(out_dir, "theorem3.csv", &sweep_csv(&r.report), out)?;
    let summary = Theorem3Summary {
        floor_report: &r,
        proof_ratio: [1.25, 1.5, 1.75]
            .into_iter()
            .map(|p| ProofRatioRow {
                p,
                lhs: proof_ratio_lhs(p),
                rhs: proof_ratio_rhs(p),
            })
            .collect(),
        exponent_floor: exponent_floor(10_000),
    };
    emit(out_dir, "theorem3.json", &to_json(&summary)?, out)?;
    let _ = writeln!(out, "inf W = {:.16e} (floor {})", r.infimum, r.floor);
    let code = verdict(cfg, r.report.refinement_delta, &r.report.excluded, out);
    if code == EXIT_OK && !r.passes_floor {
        let _ = writeln!(out, "inf W does not clear the floor");
        return Ok(EXIT_FAILURE);
    }
    Ok(code)
}

#[derive(Serialize)]
struct Theorem4Summary<'a> {
    floor_report: &'a crate::sharpness::FloorReport,
    profile: &'a [crate::sharpness::LowerBoundRow],
}

fn scan4(cfg: &RunConfig, out_dir: &Path, out: &mut String) -> std::result::Result<i32, Failure> {
    let kernel = cfg.kernel()?;
    let sweep = cfg.sweep();
    let r = theorem4_scan(&kernel, &cfg.lambda_grid, cfg.floor, &sweep)?;
    let profile = lower_bound_profile(&kernel, &cfg.profile_lambdas, &cfg.r_grid, &sweep)?;
    emit(out_dir, "theorem4.csv", &sweep_csv(&r.report), out)?;
    let mut csv = String::from("lambda,r,lr_norm,scaled,decay_floor,lower_bound\n");
    for row in &profile {
        let _ = writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.lambda, row.r, row.lr_norm, row.scaled, row.decay_floor, row.lower_bound
        );
    }
    emit(out_dir, "theorem4_profile.csv", &csv, out)?;
    emit(
        out_dir,
        "theorem4.json",
        &to_json(&Theorem4Summary {
            floor_report: &r,
            profile: &profile,
        })?,
        out,
    )?;
    let _ = writeln!(out, "inf Z = {:.16e} (floor {})", r.infimum, r.floor);
    let code = verdict(cfg, r.report.refinement_delta, &r.report.excluded, out);
    if code == EXIT_OK && !r.passes_floor {
        let _ = writeln!(out, "inf Z does not clear the floor");
        return Ok(EXIT_FAILURE);
    }
    Ok(code)
}

fn apply(
    cfg: &RunConfig,
    lambda: f64,
    points: usize,
    out_dir: &Path,
    out: &mut String,
) -> std::result::Result<i32, Failure> {
    let kernel = cfg.kernel()?;
    if kernel.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: kernel.dim(),
        }
        .into());
    }
    let f = function_from_name(&cfg.f, 1)?;
    let xs = default_x_grid(lambda, kernel.x_half_width(), points);
    let field = apply_operator(&kernel, lambda, &f, &grid_1d(&xs), &cfg.quad())?;
    let mut csv = String::from("x,re,im,abs,abs_error\n");
    for ((x, v), e) in xs.iter().zip(&field.values).zip(&field.per_point_error) {
        let _ = writeln!(csv, "{x:.16e},{:.16e},{:.16e},{:.16e},{e:.16e}", v.re, v.im, v.norm());
    }
    emit(out_dir, &format!("apply_lambda{lambda}.csv"), &csv, out)?;
    if !field.converged {
        if let Some(i) = field.worst_point {
            let _ = writeln!(
                out,
                "worst point x = {:.6e}, error {:.3e}",
                xs[i], field.per_point_error[i]
            );
        }
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(EXIT_OK)
}

fn check_kernel(cfg: &RunConfig, samples: usize, out: &mut String) -> std::result::Result<i32, Failure> {
    let kernel = cfg.kernel()?;
    let _ = writeln!(out, "support: ok (C = {})", kernel.support_bound());
    let pts = support_samples(&kernel, samples);
    let det = check_nondegeneracy(&kernel, &pts, default_fd_step(&kernel))?;
    let _ = writeln!(out, "min |det ∂²Φ₁/∂x∂y| = {det:.16e}");
    if det < 1e-6 {
        let _ = writeln!(out, "phase is degenerate on the support");
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("bgls-osc").chain(args.iter().copied())).unwrap();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(&cli, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn bgls_norm_of_witness() {
        let (code, out, _) = run_args(&["bgls-norm", "--psi", "psi0", "--f", "f0"]);
        assert_eq!(code, EXIT_OK);
        let v: f64 = out.lines().next().unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn schema_error_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, "{\"schema\": \"bgls-osc/1\",\n \"lambda\": 3}").unwrap();
        let (code, _, err) = run_args(&["--config", path.to_str().unwrap(), "verify-witness"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains(":2:"), "{err}");
    }

    #[test]
    fn flag_overrides_are_validated() {
        let (code, _, err) = run_args(&["--tol-abs", "0", "bgls-norm"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("tol_abs"));
    }

    #[test]
    fn non_convergence_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"schema": "bgls-osc/1", "max_panels": 1, "f": "one", "tol_abs": 1e-300, "tol_rel": 1e-300}"#,
        )
        .unwrap();
        let args = [
            "--config",
            path.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ];
        let (code, out, err) = run_args(&[&args[..], &["apply", "--lambda", "64", "--points", "4"]].concat());
        assert_eq!(code, EXIT_NOT_CONVERGED, "{out}{err}");
    }

    #[test]
    fn degenerate_kernel_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"schema": "bgls-osc/1", "kernel": {"name": "custom", "coefficients": [[0.0]]}}"#,
        )
        .unwrap();
        let (code, out, _) = run_args(&["--config", path.to_str().unwrap(), "check-kernel"]);
        assert_eq!(code, EXIT_FAILURE, "{out}");
        let (code, _, _) = run_args(&["check-kernel"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn verify_witness_writes_csv() {
        let dir = tempfile::tempdir().unwrap();
        let (code, out, _) = run_args(&["--out", dir.path().to_str().unwrap(), "verify-witness"]);
        assert_eq!(code, EXIT_OK, "{out}");
        let csv = std::fs::read_to_string(dir.path().join("witness.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1 + WITNESS_P_GRID.len());
    }

    #[test]
    fn fundamental_of_one_is_delta() {
        let (code, out, _) = run_args(&["fundamental", "--psi", "one", "--delta", "16"]);
        assert_eq!(code, EXIT_OK);
        let v: f64 = out.lines().next().unwrap().parse().unwrap();
        assert!((v / 16.0 - 1.0).abs() < 1e-9);
    }
}
