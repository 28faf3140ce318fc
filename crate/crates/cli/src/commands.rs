use std::fmt::Write as _;

use serde_json::{json, Value};
use tamedet::checks::{run_property_suite, CheckConfig, Fault};
use tamedet::ktheory::converge_delta;
use tamedet::tame::{cx_json, pi_product_with, SignConvention};
use tamedet::toeplitz::{converge_commutator, fourier_coeffs, fourier_coeffs_fft, InverseMode};
use tamedet::{parse_symbol_with, ConvergenceReport, Error, Symbol, C64};

use crate::render::{cx, num, pretty, SCHEMA};
use crate::{Format, RunArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Ok = 0,
    Input = 1,
    NoConvergence = 2,
    Mismatch = 3,
    PropertyFailure = 4,
}

pub struct Output {
    pub status: Status,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn input_error(cfg: &RunArgs, command: &str, msg: String) -> Self {
        let stdout = if cfg.format == Format::Json {
            pretty(&json!({
                "schema": SCHEMA,
                "command": command,
                "error": msg,
                "exit_code": Status::Input as u8,
            }))
        } else {
            String::new()
        };
        Output {
            status: Status::Input,
            stdout,
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn validate(cfg: &RunArgs) -> Result<(), String> {
    if cfg.m0 < 8 {
        return Err(format!("--m0 must be at least 8, got {}", cfg.m0));
    }
    if !(cfg.tol > 0.0) {
        return Err(format!("--tol must be positive, got {}", cfg.tol));
    }
    if !(cfg.tau_circle > 0.0 && cfg.tau_circle < 0.1) {
        return Err(format!("--tau-circle must lie in (0, 0.1), got {}", cfg.tau_circle));
    }
    Ok(())
}

fn symbol(cfg: &RunArgs, flag: &str, text: Option<&String>) -> Result<Symbol, String> {
    let text = text.ok_or_else(|| format!("--{flag} is required"))?;
    parse_symbol_with(text, cfg.tau_circle).map_err(|e| format!("--{flag} '{text}': {e}"))
}

fn mode(fault: Fault) -> (InverseMode, SignConvention) {
    match fault {
        Fault::NaiveInverse => (InverseMode::TruncationMatrix, SignConvention::Signed),
        Fault::DropSign => (InverseMode::Exact, SignConvention::Unsigned),
        Fault::None => (InverseMode::Exact, SignConvention::Signed),
    }
}

fn report_text(out: &mut String, title: &str, r: &ConvergenceReport, reference: C64) {
    let _ = writeln!(out, "{title}:");
    for s in &r.samples {
        let _ = writeln!(out, "  M = {:>4}  det = {}  |det - pi| = {}", s.m, cx(s.det), num((s.det - reference).norm()));
    }
    let _ = writeln!(
        out,
        "  limit = {}  err = {}  converged = {}",
        cx(r.limit),
        num(r.err_estimate),
        r.converged
    );
}

fn report_csv(out: &mut String, method: &str, r: &ConvergenceReport, reference: C64) {
    let _ = writeln!(out, "# {method}");
    let _ = writeln!(out, "M,re,im,abs_err");
    for row in r.to_csv_rows(reference) {
        let _ = writeln!(out, "{row}");
    }
}

pub fn analyze(cfg: &RunArgs) -> Output {
    let parsed = validate(cfg).and_then(|_| {
        Ok((
            symbol(cfg, "a", cfg.symbol_a.as_ref())?,
            symbol(cfg, "b", cfg.symbol_b.as_ref())?,
        ))
    });
    let (a, b) = match parsed {
        Ok(p) => p,
        Err(msg) => return Output::input_error(cfg, "analyze", msg),
    };
    let (inverse, sign) = mode(cfg.fault);
    let pi = pi_product_with(&a, &b, sign);

    let run = || -> tamedet::Result<(ConvergenceReport, Option<ConvergenceReport>)> {
        let delta = converge_delta(&a, &b, cfg.m0, cfg.tol, cfg.max_doublings, inverse)?;
        let comm = if pi.winding_phi == 0 && pi.winding_psi == 0 {
            Some(converge_commutator(&a, &b, cfg.m0, cfg.tol, cfg.max_doublings, inverse)?)
        } else {
            None
        };
        Ok((delta, comm))
    };
    let (delta, comm) = match run() {
        Ok(r) => r,
        Err(e @ Error::NoConvergence { .. }) => {
            return Output {
                status: Status::NoConvergence,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
        Err(e) => return Output::input_error(cfg, "analyze", e.to_string()),
    };

    let delta_gap = (delta.limit - pi.pi).norm();
    let comm_gap = comm.as_ref().map(|c| (c.limit - delta.limit).norm());
    let converged = delta.converged && comm.as_ref().is_none_or(|c| c.converged);
    let agrees = delta_gap < cfg.tol && comm_gap.is_none_or(|g| g < cfg.tol);
    let status = if !converged {
        Status::NoConvergence
    } else if !agrees {
        Status::Mismatch
    } else {
        Status::Ok
    };

    let stdout = match cfg.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "command": "analyze",
            "a": a.to_string(),
            "b": b.to_string(),
            "fault": cfg.fault.to_string(),
            "pi": pi.to_json(),
            "delta": delta.to_json(Some("delta3x3")),
            "delta_pi_gap": delta_gap,
            "commutator": comm.as_ref().map_or(Value::Null, |c| c.to_json(Some("commutator"))),
            "commutator_delta_gap": comm_gap,
            "exit_code": status as u8,
        })),
        Format::Csv => {
            let mut out = String::new();
            report_csv(&mut out, "delta3x3", &delta, pi.pi);
            if let Some(c) = &comm {
                report_csv(&mut out, "commutator", c, pi.pi);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "a = {a}");
            let _ = writeln!(out, "b = {b}");
            let _ = writeln!(out, "winding(a) = {}  winding(b) = {}", pi.winding_phi, pi.winding_psi);
            for p in &pi.points {
                let _ = writeln!(
                    out,
                    "  z = {}  v_a = {}  v_b = {}  tame = {}",
                    cx(p.z),
                    p.v_phi,
                    p.v_psi,
                    cx(p.tame)
                );
            }
            let _ = writeln!(out, "pi = {}", cx(pi.pi));
            report_text(&mut out, "delta (3x3 lifts)", &delta, pi.pi);
            let _ = writeln!(out, "|delta - pi| = {}", num(delta_gap));
            match (&comm, comm_gap) {
                (Some(c), Some(g)) => {
                    report_text(&mut out, "commutator determinant", c, pi.pi);
                    let _ = writeln!(out, "|commutator - delta| = {}", num(g));
                }
                _ => {
                    let _ = writeln!(out, "commutator determinant: skipped (nonzero winding)");
                }
            }
            let _ = writeln!(out, "status: {}", status_word(status));
            out
        }
    };
    Output {
        status,
        stdout,
        stderr: String::new(),
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Input => "input error",
        Status::NoConvergence => "no convergence",
        Status::Mismatch => "identity mismatch",
        Status::PropertyFailure => "property failure",
    }
}

pub fn check(cfg: &RunArgs) -> Output {
    if let Err(msg) = validate(cfg) {
        return Output::input_error(cfg, "check", msg);
    }
    let suite = CheckConfig {
        seed: cfg.seed,
        fault: cfg.fault,
        m0: cfg.m0,
        max_doublings: cfg.max_doublings.min(4),
        ..CheckConfig::default()
    };
    let outcomes = run_property_suite(&suite);
    let first_failure = outcomes.iter().find(|o| !o.passed).map(|o| o.name);
    let status = if first_failure.is_some() {
        Status::PropertyFailure
    } else {
        Status::Ok
    };
    let stdout = match cfg.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "command": "check",
            "seed": cfg.seed,
            "fault": cfg.fault.to_string(),
            "properties": outcomes.iter().map(|o| json!({
                "name": o.name,
                "passed": o.passed,
                "detail": o.detail,
            })).collect::<Vec<_>>(),
            "first_failure": first_failure,
            "exit_code": status as u8,
        })),
        Format::Csv => {
            let mut out = String::from("property,passed,detail\n");
            for o in &outcomes {
                let _ = writeln!(out, "{},{},\"{}\"", o.name, o.passed, o.detail.replace('"', "'"));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for o in &outcomes {
                let _ = writeln!(out, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
            }
            match first_failure {
                Some(name) => {
                    let _ = writeln!(out, "first failing property: {name}");
                }
                None => {
                    let _ = writeln!(out, "all {} properties passed", outcomes.len());
                }
            }
            out
        }
    };
    Output {
        status,
        stdout,
        stderr: String::new(),
    }
}

pub fn fourier(cfg: &RunArgs, n_lo: i64, n_hi: i64) -> Output {
    let parsed = validate(cfg).and_then(|_| {
        if n_lo > n_hi {
            return Err(format!("--n-lo {n_lo} exceeds --n-hi {n_hi}"));
        }
        symbol(cfg, "a", cfg.symbol_a.as_ref())
    });
    let a = match parsed {
        Ok(a) => a,
        Err(msg) => return Output::input_error(cfg, "fourier", msg),
    };
    let half = n_lo.unsigned_abs().max(n_hi.unsigned_abs()) as usize;
    let windows = fourier_coeffs(&a, half).and_then(|w| Ok((w, fourier_coeffs_fft(&a, half)?)));
    let (exact, (sampled, tail)) = match windows {
        Ok(w) => w,
        Err(e) => return Output::input_error(cfg, "fourier", e.to_string()),
    };
    let rows: Vec<(i64, C64, C64)> = (n_lo..=n_hi).map(|n| (n, exact.coeff(n), sampled.coeff(n))).collect();
    let discrepancy = rows.iter().map(|(_, x, y)| (x - y).norm()).fold(0.0, f64::max);

    let stdout = match cfg.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "command": "fourier",
            "a": a.to_string(),
            "coefficients": rows.iter().map(|(n, x, y)| json!({
                "n": n,
                "analytic": cx_json(*x),
                "fft": cx_json(*y),
            })).collect::<Vec<_>>(),
            "max_discrepancy": discrepancy,
            "fft_tail_estimate": tail,
            "decay_rho": exact.decay_rho(),
            "exit_code": 0,
        })),
        Format::Csv => {
            let mut out = String::from("n,re,im,fft_re,fft_im\n");
            for (n, x, y) in &rows {
                let _ = writeln!(out, "{n},{:e},{:e},{:e},{:e}", x.re, x.im, y.re, y.im);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "a = {a}");
            for (n, x, y) in &rows {
                let _ = writeln!(out, "c[{n}] = {}  fft {}", cx(*x), cx(*y));
            }
            let _ = writeln!(out, "max discrepancy = {}", num(discrepancy));
            let _ = writeln!(out, "fft tail estimate = {}", num(tail));
            let _ = writeln!(out, "decay rho = {}", num(exact.decay_rho()));
            out
        }
    };
    Output {
        status: Status::Ok,
        stdout,
        stderr: String::new(),
    }
}
