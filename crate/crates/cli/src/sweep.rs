use std::fs;
use std::io::Write;

use annulus_energy::energy::{closed_form_energy, extremal_radial_energy};
use annulus_energy::verify::residual_scan;
use annulus_energy::{is_feasible, validate, AnnulusPair, EnergyParams, ExtremalSolution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Cli, Format, SweepArgs};
use crate::output::{emit, Report, Table};
use crate::{CliError, Status};

pub const HEADER: [&str; 10] = [
    "r",
    "R",
    "a",
    "b",
    "lambda",
    "feasible",
    "alpha",
    "energy_closed",
    "energy_quad",
    "el_residual_max",
];

fn one() -> f64 {
    1.0
}

/// One line of a sweep configuration file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub b: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub feasible: bool,
    pub alpha: Option<f64>,
    pub energy_closed: Option<f64>,
    pub energy_quad: Option<f64>,
    pub el_residual_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Parse JSON Lines; blank lines and lines starting with `#` are skipped.
pub fn parse_points(text: &str) -> Result<Vec<SweepPoint>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
        .map(|(i, line)| {
            serde_json::from_str(line)
                .map_err(|e| CliError::Usage(format!("sweep config line {}: {e}", i + 1)))
        })
        .collect()
}

/// Cartesian product of the grid lists, each defaulting to the single global value.
pub fn grid_points(cli: &Cli, args: &SweepArgs) -> Result<Vec<SweepPoint>, CliError> {
    let p = &cli.params;
    let axis = |values: &[f64], fallback: Option<f64>, name: &str| -> Result<Vec<f64>, CliError> {
        if !values.is_empty() {
            Ok(values.to_vec())
        } else {
            fallback
                .map(|v| vec![v])
                .ok_or_else(|| CliError::Usage(format!("sweep needs --{name} or --{name}-values")))
        }
    };
    let rs = axis(&args.r_values, p.r, "r")?;
    let big_rs = axis(&args.big_r_values, p.big_r, "R")?;
    let as_ = axis(&args.a_values, Some(p.a), "a")?;
    let bs = axis(&args.b_values, Some(p.b), "b")?;
    let lambdas = axis(&args.lambda_values, p.lambda, "lambda")?;
    let mut points = Vec::new();
    for &r in &rs {
        for &big_r in &big_rs {
            for &a in &as_ {
                for &b in &bs {
                    for &lambda in &lambdas {
                        points.push(SweepPoint {
                            r,
                            big_r,
                            a,
                            b,
                            lambda,
                        });
                    }
                }
            }
        }
    }
    Ok(points)
}

pub fn evaluate(point: &SweepPoint) -> SweepRecord {
    let mut record = SweepRecord {
        r: point.r,
        big_r: point.big_r,
        a: point.a,
        b: point.b,
        lambda: point.lambda,
        feasible: false,
        alpha: None,
        energy_closed: None,
        energy_quad: None,
        el_residual_max: None,
        error: None,
    };
    let config = match validate(
        AnnulusPair::new(point.r, point.big_r),
        EnergyParams::new(point.a, point.b, point.lambda),
    ) {
        Ok(c) => c,
        Err(e) => {
            record.error = Some(e.to_string());
            return record;
        }
    };
    record.feasible = is_feasible(&config).feasible;
    if !record.feasible {
        return record;
    }
    let result = ExtremalSolution::solve(&config).and_then(|sol| {
        record.alpha = Some(sol.alpha());
        record.energy_closed = Some(closed_form_energy(&sol).value);
        record.energy_quad = Some(extremal_radial_energy(&sol)?.value);
        record.el_residual_max = Some(residual_scan(&sol, 100)?.normalized());
        Ok(())
    });
    if let Err(e) = result {
        record.error = Some(e.to_string());
    }
    record
}

/// Evaluate in parallel; `collect` on an indexed parallel iterator keeps input order.
pub fn evaluate_all(points: &[SweepPoint]) -> Vec<SweepRecord> {
    points.par_iter().map(evaluate).collect()
}

pub fn run(cli: &Cli, args: &SweepArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let points = match &args.config {
        Some(path) => parse_points(&fs::read_to_string(path)?)?,
        None => grid_points(cli, args)?,
    };
    let records = evaluate_all(&points);
    match cli.params.format.unwrap_or(Format::Csv) {
        Format::Json => {
            for rec in &records {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(rec).map_err(|e| CliError::Io(e.to_string()))?
                )?;
            }
        }
        format => {
            let mut table = Table::new(&HEADER);
            for rec in &records {
                let row = serde_json::to_value(rec).map_err(|e| CliError::Io(e.to_string()))?;
                table.rows.push(
                    HEADER
                        .iter()
                        .map(|k| row[*k].clone())
                        .collect::<Vec<Value>>(),
                );
            }
            let report = Report {
                fields: Default::default(),
                table: Some(table),
            };
            emit(&report, format, out)?;
        }
    }
    Ok(Status::Ok)
}
