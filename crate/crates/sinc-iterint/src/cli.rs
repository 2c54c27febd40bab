//! Command implementations behind the `sinc-iterint` binary.
//!
//! Three commands: `sweep` emits a CSV convergence table over a list of mesh
//! sizes, `bound` prints the plan and certificate for one mesh size, and
//! `verify` checks the certificates on a fixed internal grid. Data goes to
//! the supplied writer, diagnostics to stderr, so the commands are directly
//! testable.

use crate::error::Error;
use crate::iterated::{integrate, original_mm, plan_mesh, ApproxResult, Direction};
use crate::problems::builtin;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Which formula a sweep exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    Modified,
    Original,
}

impl Formula {
    pub fn as_str(&self) -> &'static str {
        match self {
            Formula::Modified => "modified",
            Formula::Original => "original",
        }
    }
}

impl FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "modified" => Ok(Formula::Modified),
            "original" => Ok(Formula::Original),
            other => Err(format!(
                "unknown formula '{other}' (expected modified|original)"
            )),
        }
    }
}

/// One row of a convergence sweep.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub h: f64,
    pub n: i64,
    pub m: i64,
    pub n_minus: i64,
    pub n_plus: i64,
    pub m_minus: i64,
    pub m_plus: i64,
    pub n_total: i64,
    pub formula: &'static str,
    pub value: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub bound_abs: Option<f64>,
    pub bound_rel: Option<f64>,
    pub eval_count: u64,
    pub wall_time_ns: u128,
    pub reason: String,
}

pub const CSV_HEADER: &str = "h,n,m,n_minus,n_plus,m_minus,m_plus,n_total,formula,value,\
abs_err,rel_err,bound_abs,bound_rel,eval_count,wall_time_ns,reason";

/// 17 significant digits, enough to round-trip any f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl SweepRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(self.h),
            self.n,
            self.m,
            self.n_minus,
            self.n_plus,
            self.m_minus,
            self.m_plus,
            self.n_total,
            self.formula,
            fmt_opt(self.value),
            fmt_opt(self.abs_err),
            fmt_opt(self.rel_err),
            fmt_opt(self.bound_abs),
            fmt_opt(self.bound_rel),
            self.eval_count,
            self.wall_time_ns,
            self.reason
        )
    }
}

/// The fixed verification grid: geometric from 0.8 with factor 0.85, down to
/// 0.15. Spans the feasible region of all catalog problems in double
/// precision.
pub fn verify_grid() -> Vec<f64> {
    let mut grid = Vec::new();
    let mut h = 0.8;
    while h >= 0.15 {
        grid.push(h);
        h *= 0.85;
    }
    grid
}

/// Errors grow past the rounding floor only transiently; a point passes the
/// decrease check if it is within this factor of the best error seen so far.
const DECREASE_SLACK: f64 = 10.0;
const ERROR_FLOOR: f64 = 1e-13;

fn record_from_result(
    h: f64,
    formula: Formula,
    exact: Option<f64>,
    result: &ApproxResult,
    wall_time_ns: u128,
) -> SweepRecord {
    let abs_err = exact.map(|e| (result.value - e).abs());
    let rel_err = exact.map(|e| (result.value - e).abs() / e.abs());
    let n_total = if result.used_product_path {
        result.plan.n_total_product
    } else {
        result.plan.n_total_general
    };
    SweepRecord {
        h,
        n: result.plan.n,
        m: result.plan.m,
        n_minus: result.plan.n_minus,
        n_plus: result.plan.n_plus,
        m_minus: result.plan.m_minus,
        m_plus: result.plan.m_plus,
        n_total,
        formula: formula.as_str(),
        value: Some(result.value),
        abs_err,
        rel_err,
        bound_abs: result.bound.map(|b| b.abs),
        bound_rel: result.bound.and_then(|b| b.rel),
        eval_count: result.eval_count,
        wall_time_ns,
        reason: String::new(),
    }
}

fn infeasible_record(h: f64, formula: Formula, reasons: &[String]) -> SweepRecord {
    SweepRecord {
        h,
        n: 0,
        m: 0,
        n_minus: 0,
        n_plus: 0,
        m_minus: 0,
        m_plus: 0,
        n_total: 0,
        formula: formula.as_str(),
        value: None,
        abs_err: None,
        rel_err: None,
        bound_abs: None,
        bound_rel: None,
        eval_count: 0,
        wall_time_ns: 0,
        reason: reasons.join("; "),
    }
}

/// Runs one formula over `h_list` and writes the CSV table.
pub fn cmd_sweep(example: u8, h_list: &[f64], formula: Formula, out: &mut dyn Write) -> i32 {
    let problem = match builtin(example) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("sweep: {e}");
            return EXIT_USAGE;
        }
    };
    if h_list.is_empty() {
        eprintln!("sweep: empty h list");
        return EXIT_USAGE;
    }
    if let Some(bad) = h_list.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        eprintln!("sweep: h values must be positive and finite, got {bad}");
        return EXIT_USAGE;
    }
    if formula == Formula::Original && problem.direction == Direction::Decreasing {
        eprintln!(
            "sweep: the original formula cannot be used in this case because \
             q is decreasing (it requires q'(x) >= 0)"
        );
        return EXIT_UNSUPPORTED;
    }

    let mut rows = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let started = Instant::now();
        let run = match formula {
            Formula::Modified => {
                let plan = plan_mesh(&problem.params, h);
                if !plan.feasible {
                    rows.push(infeasible_record(h, formula, &plan.infeasibility_reasons));
                    continue;
                }
                integrate(&problem, h)
            }
            Formula::Original => original_mm(&problem, h, problem.params.nu() / 10.0),
        };
        match run {
            Ok(result) => {
                let elapsed = started.elapsed().as_nanos();
                rows.push(record_from_result(
                    h,
                    formula,
                    problem.exact,
                    &result,
                    elapsed,
                ));
            }
            Err(Error::MeshInfeasible(reasons)) => {
                rows.push(infeasible_record(h, formula, &reasons));
            }
            Err(other) => {
                eprintln!("sweep: h={h}: {other}");
                rows.push(infeasible_record(h, formula, &[other.to_string()]));
            }
        }
    }

    match write_csv(out, &rows) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("sweep: write failed: {e}");
            EXIT_USAGE
        }
    }
}

fn write_csv(out: &mut dyn Write, rows: &[SweepRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_row())?;
    }
    Ok(())
}

/// Prints the mesh plan and the certificate components for one mesh size.
pub fn cmd_bound(example: u8, h: f64, out: &mut dyn Write) -> i32 {
    let problem = match builtin(example) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("bound: {e}");
            return EXIT_USAGE;
        }
    };
    if !(h > 0.0 && h.is_finite()) {
        eprintln!("bound: h must be positive and finite, got {h}");
        return EXIT_USAGE;
    }
    let plan = plan_mesh(&problem.params, h);
    if !plan.feasible {
        eprintln!(
            "bound: mesh infeasible: {}",
            plan.infeasibility_reasons.join("; ")
        );
        return EXIT_USAGE;
    }
    let result = match integrate(&problem, h) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("bound: {e}");
            return EXIT_USAGE;
        }
    };
    let bound = result.bound.expect("modified path always carries a bound");
    let mut body = || -> io::Result<()> {
        writeln!(out, "example={example}")?;
        writeln!(out, "h={}", fmt_f64(plan.h))?;
        writeln!(out, "h_tilde={}", fmt_f64(plan.h_tilde))?;
        writeln!(out, "n={}", plan.n)?;
        writeln!(out, "m={}", plan.m)?;
        writeln!(out, "n_minus={}", plan.n_minus)?;
        writeln!(out, "n_plus={}", plan.n_plus)?;
        writeln!(out, "m_minus={}", plan.m_minus)?;
        writeln!(out, "m_plus={}", plan.m_plus)?;
        writeln!(out, "n_total_general={}", plan.n_total_general)?;
        writeln!(out, "n_total_product={}", plan.n_total_product)?;
        writeln!(out, "value={}", fmt_f64(result.value))?;
        writeln!(out, "e1_component={}", fmt_f64(bound.e1_component))?;
        writeln!(out, "e2_component={}", fmt_f64(bound.e2_component))?;
        writeln!(out, "bound_abs={}", fmt_f64(bound.abs))?;
        match bound.rel {
            Some(rel) => writeln!(out, "bound_rel={}", fmt_f64(rel))?,
            None => writeln!(out, "bound_rel=unavailable")?,
        }
        writeln!(out, "eval_count={}", result.eval_count)?;
        writeln!(out, "used_product_path={}", result.used_product_path)?;
        Ok(())
    };
    match body() {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("bound: write failed: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs the internal grid and checks every certificate: the observed error
/// must sit under the certified absolute (and, when defined, relative)
/// bound, and must not regress past [`DECREASE_SLACK`] times the best error
/// seen so far unless it is below the 1e-13 rounding floor.
pub fn cmd_verify(example: u8, out: &mut dyn Write) -> i32 {
    let problem = match builtin(example) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("verify: {e}");
            return EXIT_USAGE;
        }
    };
    let exact = problem.exact.expect("catalog problems carry exact values");
    let mut all_pass = true;
    let mut best_err: Option<f64> = None;
    let mut body = |out: &mut dyn Write| -> io::Result<bool> {
        let mut ok = true;
        for h in verify_grid() {
            let plan = plan_mesh(&problem.params, h);
            if !plan.feasible {
                writeln!(
                    out,
                    "h={} status=infeasible reason={}",
                    fmt_f64(h),
                    plan.infeasibility_reasons.join("; ")
                )?;
                continue;
            }
            let result = match integrate(&problem, h) {
                Ok(r) => r,
                Err(e) => {
                    writeln!(out, "h={} status=FAIL error={e}", fmt_f64(h))?;
                    ok = false;
                    continue;
                }
            };
            let bound = result.bound.expect("modified path always carries a bound");
            let abs_err = (result.value - exact).abs();
            let rel_err = abs_err / exact.abs();
            let dominated = abs_err <= bound.abs;
            let rel_dominated = bound.rel.is_none_or(|r| rel_err <= r);
            let decreasing = match best_err {
                Some(best) => abs_err <= (DECREASE_SLACK * best).max(ERROR_FLOOR),
                None => true,
            };
            best_err = Some(best_err.map_or(abs_err, |b: f64| b.min(abs_err)));
            let pass = dominated && rel_dominated && decreasing;
            ok &= pass;
            writeln!(
                out,
                "h={} value={} abs_err={} bound_abs={} rel_err={} bound_rel={} \
                 eval_count={} product_path={} status={}",
                fmt_f64(h),
                fmt_f64(result.value),
                fmt_f64(abs_err),
                fmt_f64(bound.abs),
                fmt_f64(rel_err),
                bound
                    .rel
                    .map(fmt_f64)
                    .unwrap_or_else(|| "unavailable".into()),
                result.eval_count,
                result.used_product_path,
                if pass { "PASS" } else { "FAIL" }
            )?;
            if !pass {
                eprintln!(
                    "verify: certificate violated at h={h}: abs_err={abs_err:e} \
                     bound_abs={:e} dominated={dominated} rel_dominated={rel_dominated} \
                     decreasing={decreasing}",
                    bound.abs
                );
            }
        }
        Ok(ok)
    };
    match body(out) {
        Ok(ok) => {
            all_pass &= ok;
            if all_pass {
                EXIT_OK
            } else {
                EXIT_CERTIFICATE
            }
        }
        Err(e) => {
            eprintln!("verify: write failed: {e}");
            EXIT_USAGE
        }
    }
}
