use std::io::Write;

use annulus_energy::energy::{
    closed_form_energy, extremal_radial_energy, inverse_energy, radial_distortion_energy,
};
use annulus_energy::verify::{residual_scan, shoot};
use annulus_energy::{
    alpha_for_lambda1, alpha_min, is_feasible, minimize, perturbation_sweep, AlphaSolver, Branch,
    Config, DiscreteProblem, ExtremalSolution, OracleSummary,
};
use serde_json::Value;

use crate::args::{Cli, Command, OracleArgs};
use crate::output::{emit, Report, Table};
use crate::{export, sweep, CliError, RunConfig, Status};

pub const EL_RESIDUAL_MAX: f64 = 1e-6;
pub const FIRST_INTEGRAL_MAX: f64 = 1e-9;
pub const SHOOTING_MAX: f64 = 1e-8;
pub const ENERGY_GAP_MAX: f64 = 1e-8;
pub const DUALITY_GAP_MAX: f64 = 1e-7;
pub const ORACLE_SUP_MAX: f64 = 1e-3;
pub const ORACLE_EXCESS_MAX: f64 = 1e-4;
pub const PERTURBATION_MIN: f64 = -1e-9;

/// Execute a parsed command line, writing the report to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Status {
    let result = match &cli.command {
        Command::Sweep(args) => sweep::run(cli, args, out),
        _ => RunConfig::from_cli(cli).and_then(|rc| single(&rc, out, err)),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}

fn single(rc: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status, CliError> {
    if let Command::Export(args) = &rc.command {
        return export::run(rc, args, out);
    }
    let (report, status) = match &rc.command {
        Command::Check => check(rc, err)?,
        Command::Solve => (solve(rc)?, Status::Ok),
        Command::Energy => (energy(rc)?, Status::Ok),
        Command::Verify => verify(rc)?,
        Command::Oracle(args) => oracle(rc, args)?,
        Command::Sweep(_) | Command::Export(_) => unreachable!("handled above"),
    };
    emit(&report, rc.format, out)?;
    Ok(status)
}

fn config_fields(report: &mut Report, config: &Config) {
    let p = config.params();
    report
        .set("r", config.r())
        .set("R", config.R())
        .set("a", p.normal_weight)
        .set("b", p.tangential_weight)
        .set("lambda", p.lambda);
}

fn check(rc: &RunConfig, err: &mut dyn Write) -> Result<(Report, Status), CliError> {
    let feas = is_feasible(&rc.config);
    let mut report = Report::default();
    config_fields(&mut report, &rc.config);
    report
        .set("feasible", feas.feasible)
        .set("bound", feas.bound)
        .set("margin", feas.margin);
    if feas.feasible {
        Ok((report, Status::Ok))
    } else {
        writeln!(
            err,
            "infeasible: r = {} exceeds the bound {}",
            feas.r, feas.bound
        )?;
        Ok((report, Status::Infeasible))
    }
}

/// Extremal solution with the requested solver tolerance, plus bisection diagnostics.
fn solution(rc: &RunConfig) -> Result<(ExtremalSolution, Option<(f64, usize)>), CliError> {
    let cfg = &rc.config;
    if cfg.params().branch() == Branch::LambdaEqOne {
        let alpha = alpha_for_lambda1(cfg)?;
        return Ok((ExtremalSolution::new(cfg, alpha)?, None));
    }
    let root = AlphaSolver::with_tolerance(rc.tol).solve(cfg)?;
    let sol = ExtremalSolution::new(cfg, root.alpha)?;
    Ok((sol, Some((root.residual.abs(), root.iterations))))
}

fn solve(rc: &RunConfig) -> Result<Report, CliError> {
    let (sol, diagnostics) = solution(rc)?;
    let cfg = &rc.config;
    let endpoint_error = (sol.profile(cfg.r())? - cfg.R()).abs();
    let mut report = Report::default();
    config_fields(&mut report, cfg);
    report
        .set("alpha", sol.alpha())
        .set("branch", sol.branch().as_str())
        .set("endpoint_error", endpoint_error);
    match diagnostics {
        Some((residual, iterations)) => {
            let p = cfg.params();
            report
                .set("phi_residual", residual)
                .set("iterations", iterations)
                .set(
                    "alpha_min",
                    alpha_min(cfg.R(), p.tangential_weight, p.lambda),
                );
        }
        None => {
            report
                .set("phi_residual", endpoint_error)
                .set("iterations", 0);
        }
    }
    report.set("bound", is_feasible(cfg).bound);
    Ok(report)
}

fn energy(rc: &RunConfig) -> Result<Report, CliError> {
    let (sol, _) = solution(rc)?;
    let closed = closed_form_energy(&sol);
    let quad = extremal_radial_energy(&sol)?;
    let mut report = Report::default();
    config_fields(&mut report, &rc.config);
    report
        .set("closed_form", closed.value)
        .set("quadrature", quad.value)
        .set("quadrature_error", quad.est_error)
        .set("relative_gap", closed.relative_gap(&quad));
    Ok(report)
}

struct Check {
    name: &'static str,
    value: Result<f64, CliError>,
    threshold: f64,
    /// `true` when the value must not exceed the threshold, `false` when it must not fall below it.
    upper: bool,
}

impl Check {
    fn passed(&self) -> bool {
        match &self.value {
            Ok(v) if self.upper => *v <= self.threshold,
            Ok(v) => *v >= self.threshold,
            Err(_) => false,
        }
    }
}

fn checks_report(report: &mut Report, checks: &[Check]) -> Status {
    let mut table = Table::new(&["check", "value", "threshold", "passed", "error"]);
    let mut list = Vec::new();
    for c in checks {
        let value = c.value.as_ref().map_or(Value::Null, |v| Value::from(*v));
        let error = c
            .value
            .as_ref()
            .err()
            .map_or(Value::Null, |e| Value::from(e.to_string()));
        let threshold = Value::from(c.threshold);
        let passed = c.passed();
        table.rows.push(vec![
            Value::from(c.name),
            value.clone(),
            threshold.clone(),
            Value::from(passed),
            error.clone(),
        ]);
        let mut entry = serde_json::Map::new();
        entry.insert("check".into(), Value::from(c.name));
        entry.insert("value".into(), value);
        entry.insert("threshold".into(), threshold);
        entry.insert("passed".into(), Value::from(passed));
        if !error.is_null() {
            entry.insert("error".into(), error);
        }
        list.push(Value::Object(entry));
    }
    let all = checks.iter().all(Check::passed);
    report.set("passed", all).set("checks", list);
    report.table = Some(table);
    if all {
        Status::Ok
    } else {
        Status::CheckFailed
    }
}

fn verify(rc: &RunConfig) -> Result<(Report, Status), CliError> {
    let (sol, _) = solution(rc)?;
    let cfg = &rc.config;
    let p = cfg.params();
    let traj = shoot(sol.alpha(), &p, cfg.r(), 257).map_err(CliError::from);
    let closed = closed_form_energy(&sol);
    let duality =
        radial_distortion_energy(|t| sol.profile(t), |t| sol.derivative(t), &cfg.annuli(), &p)
            .and_then(|k| inverse_energy(&sol).map(|e| k.relative_gap(&e)))
            .map_err(CliError::from);
    let checks = [
        Check {
            name: "el_residual",
            value: residual_scan(&sol, 100)
                .map(|s| s.normalized())
                .map_err(CliError::from),
            threshold: EL_RESIDUAL_MAX,
            upper: true,
        },
        Check {
            name: "first_integral",
            value: traj.clone().map(|t| t.first_integral_variation()),
            threshold: FIRST_INTEGRAL_MAX,
            upper: true,
        },
        Check {
            name: "shooting",
            value: traj.map(|t| (t.terminal().y - cfg.R()).abs()),
            threshold: SHOOTING_MAX,
            upper: true,
        },
        Check {
            name: "energy_quadrature",
            value: extremal_radial_energy(&sol)
                .map(|q| closed.relative_gap(&q))
                .map_err(CliError::from),
            threshold: ENERGY_GAP_MAX,
            upper: true,
        },
        Check {
            name: "duality",
            value: duality,
            threshold: DUALITY_GAP_MAX,
            upper: true,
        },
    ];
    let mut report = Report::default();
    config_fields(&mut report, cfg);
    report.set("alpha", sol.alpha());
    let status = checks_report(&mut report, &checks);
    Ok((report, status))
}

fn oracle(rc: &RunConfig, args: &OracleArgs) -> Result<(Report, Status), CliError> {
    let (sol, _) = solution(rc)?;
    let problem = DiscreteProblem::new(&rc.config, rc.n)?.with_seed(rc.seed);
    let res = minimize(&problem)?;
    let closed = closed_form_energy(&sol).value;
    let gap = res.sup_norm_gap(&sol)?;
    let summary = OracleSummary {
        n: rc.n,
        iterations: res.iterations,
        energy: res.energy,
        sup_norm_gap_to_closed_form: gap,
    };
    let deltas = perturbation_sweep(&problem, &sol, args.perturbations, args.magnitude)?;
    let min_delta = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let mut report = Report::default();
    config_fields(&mut report, &rc.config);
    if let Value::Object(map) =
        serde_json::to_value(summary).map_err(|e| CliError::Io(e.to_string()))?
    {
        report.fields.extend(map);
    }
    report
        .set("closed_form_energy", closed)
        .set("seed", rc.seed)
        .set("perturbations", deltas.len())
        .set("magnitude", args.magnitude)
        .set(
            "min_delta",
            if deltas.is_empty() {
                Value::Null
            } else {
                Value::from(min_delta)
            },
        );
    let mut checks = vec![
        Check {
            name: "sup_norm_gap",
            value: Ok(gap),
            threshold: ORACLE_SUP_MAX,
            upper: true,
        },
        Check {
            name: "energy_excess",
            value: Ok(res.energy - closed),
            threshold: ORACLE_EXCESS_MAX,
            upper: true,
        },
    ];
    if !deltas.is_empty() {
        checks.push(Check {
            name: "min_perturbation_delta",
            value: Ok(min_delta),
            threshold: PERTURBATION_MIN,
            upper: false,
        });
    }
    let status = checks_report(&mut report, &checks);
    Ok((report, status))
}

/// Parse arguments from an iterator and run, for tests and embedding.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Status
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{e}");
            if e.use_stderr() {
                Status::Validation
            } else {
                Status::Ok
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> (Status, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["annulus-energy"];
        full.extend_from_slice(args);
        let status = run_args(full, &mut out, &mut err);
        (
            status,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn json(text: &str) -> Value {
        serde_json::from_str(text.trim()).unwrap()
    }

    #[test]
    fn solve_reference() {
        let (status, out, _) = exec(&[
            "solve", "--r", "1.5", "--R", "1.25", "--a", "1", "--b", "1", "--lambda", "2",
        ]);
        assert_eq!(status, Status::Ok);
        let v = json(&out);
        assert!((v["alpha"].as_f64().unwrap() + 0.5376).abs() < 1e-10);
        assert_eq!(v["branch"], "lambda_ne_1");
        assert!(v["phi_residual"].as_f64().unwrap() <= 1e-12);
    }

    #[test]
    fn check_infeasible_prints_bound() {
        let (status, out, err) = exec(&["check", "--r", "2.5", "--R", "1.25", "--lambda", "0"]);
        assert_eq!(status, Status::Infeasible);
        assert_eq!(json(&out)["bound"].as_f64().unwrap(), 2.0);
        assert!(err.contains("bound 2"));
    }

    #[test]
    fn energy_ten_pi() {
        let (status, out, _) = exec(&[
            "energy",
            "--r",
            "2.718281828459045",
            "--R",
            "7.38905609893065",
            "--lambda",
            "1",
        ]);
        assert_eq!(status, Status::Ok);
        let v = json(&out);
        assert!((v["closed_form"].as_f64().unwrap() - 31.41593).abs() < 1e-5);
        assert!((v["quadrature"].as_f64().unwrap() - 31.41593).abs() < 1e-5);
    }

    #[test]
    fn validation_and_infeasible_statuses() {
        assert_eq!(
            exec(&["solve", "--r", "0.5", "--R", "1.25", "--lambda", "2"]).0,
            Status::Validation
        );
        assert_eq!(
            exec(&["solve", "--R", "1.25", "--lambda", "2"]).0,
            Status::Validation
        );
        assert_eq!(
            exec(&["solve", "--r", "1.5", "--R", "1.25", "--lambda", "2", "--tol", "0.5"]).0,
            Status::Validation
        );
        assert_eq!(
            exec(&["oracle", "--r", "1.5", "--R", "1.25", "--lambda", "2", "--n", "4"]).0,
            Status::Validation
        );
        assert_eq!(
            exec(&[
                "solve",
                "--r",
                "1.5",
                "--R",
                "1.25",
                "--lambda",
                "1.0000000001"
            ])
            .0,
            Status::Validation
        );
        let (status, _, err) = exec(&["solve", "--r", "2.5", "--R", "1.25", "--lambda", "2"]);
        assert_eq!(status, Status::Infeasible);
        assert!(err.contains("bound 2"));
    }

    #[test]
    fn verify_lists_checks() {
        let (status, out, _) = exec(&[
            "verify", "--r", "1.5", "--R", "1.25", "--lambda", "2", "--format", "table",
        ]);
        assert_eq!(status, Status::Ok);
        for name in [
            "el_residual",
            "first_integral",
            "shooting",
            "energy_quadrature",
            "duality",
        ] {
            assert!(out.contains(name), "{out}");
        }
        assert!(out.contains("threshold"));
    }

    #[test]
    fn negative_lambda_is_accepted() {
        let (status, out, _) = exec(&[
            "solve", "--r", "1.6", "--R", "1.8", "--b", "1.4", "--lambda", "-1",
        ]);
        assert_eq!(status, Status::Ok, "{out}");
    }

    #[test]
    fn oracle_small_grid() {
        let (status, out, _) = exec(&[
            "oracle",
            "--r",
            "1.5",
            "--R",
            "1.25",
            "--lambda",
            "2",
            "--n",
            "129",
            "--perturbations",
            "20",
        ]);
        assert_eq!(status, Status::Ok);
        let v = json(&out);
        assert_eq!(v["n"], 129);
        assert!(v["sup_norm_gap_to_closed_form"].as_f64().unwrap() < 1e-3);
        assert_eq!(v["perturbations"], 20);
    }

    #[test]
    fn oracle_failing_check_sets_status_one() {
        let (status, out, _) = exec(&[
            "oracle",
            "--r",
            "1.5",
            "--R",
            "1.25",
            "--lambda",
            "2",
            "--n",
            "9",
            "--perturbations",
            "0",
        ]);
        let v = json(&out);
        let excess = v["energy"].as_f64().unwrap() - v["closed_form_energy"].as_f64().unwrap();
        let expected = if excess <= ORACLE_EXCESS_MAX
            && v["sup_norm_gap_to_closed_form"].as_f64().unwrap() <= ORACLE_SUP_MAX
        {
            Status::Ok
        } else {
            Status::CheckFailed
        };
        assert_eq!(status, expected);
        assert_eq!(v["passed"].as_bool().unwrap(), expected == Status::Ok);
    }
}
