use std::fs::File;
use std::io::{BufWriter, Write};

use annulus_energy::verify::shoot;
use annulus_energy::{AlphaSolver, Branch, ExtremalSolution};

use crate::args::{ExportArgs, ExportKind};
use crate::output::{emit, format_f64, Report};
use crate::{CliError, RunConfig, Status};

/// `t,H,Hdot` on an `n`-node log grid of `[1, r]`.
pub fn write_profile(
    sol: &ExtremalSolution,
    n: usize,
    out: &mut dyn Write,
) -> Result<usize, CliError> {
    let profile = sol.sample_profile(n)?;
    writeln!(out, "t,H,Hdot")?;
    for (&t, &h) in profile.t().iter().zip(profile.values()) {
        let dh = sol.derivative(t)?;
        writeln!(
            out,
            "{},{},{}",
            format_f64(t),
            format_f64(h),
            format_f64(dh)
        )?;
    }
    Ok(profile.len())
}

/// `x,y,zeta,omega` of the trajectory shot from `t = 1` with `n` samples.
pub fn write_trajectory(
    sol: &ExtremalSolution,
    n: usize,
    out: &mut dyn Write,
) -> Result<usize, CliError> {
    let params = sol.params();
    let traj = shoot(sol.alpha(), &params, sol.r(), n)?;
    writeln!(out, "x,y,zeta,omega")?;
    for s in traj.states() {
        writeln!(
            out,
            "{},{},{},{}",
            format_f64(s.x),
            format_f64(s.y),
            format_f64(s.zeta),
            format_f64(s.omega(&params))
        )?;
    }
    Ok(traj.states().len())
}

pub fn run(rc: &RunConfig, args: &ExportArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let cfg = &rc.config;
    let sol = if cfg.params().branch() == Branch::LambdaEqOne {
        ExtremalSolution::solve(cfg)?
    } else {
        ExtremalSolution::solve_with(cfg, &AlphaSolver::with_tolerance(rc.tol))?
    };
    let write = |w: &mut dyn Write| match args.kind {
        ExportKind::Profile => write_profile(&sol, rc.n, w),
        ExportKind::Trajectory => write_trajectory(&sol, rc.n, w),
    };
    match &args.output {
        None => {
            write(out)?;
        }
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            let rows = write(&mut file)?;
            file.flush()?;
            let mut report = Report::default();
            report
                .set(
                    "kind",
                    match args.kind {
                        ExportKind::Profile => "profile",
                        ExportKind::Trajectory => "trajectory",
                    },
                )
                .set("path", path.display().to_string())
                .set("rows", rows);
            emit(&report, rc.format, out)?;
        }
    }
    Ok(Status::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use annulus_energy::{validate, AnnulusPair, EnergyParams};

    fn reference() -> ExtremalSolution {
        let cfg = validate(
            AnnulusPair::new(1.5, 1.25),
            EnergyParams::new(1.0, 1.0, 2.0),
        )
        .unwrap();
        ExtremalSolution::solve(&cfg).unwrap()
    }

    #[test]
    fn profile_csv_round_trips() {
        let sol = reference();
        let mut buf = Vec::new();
        assert_eq!(write_profile(&sol, 9, &mut buf).unwrap(), 9);
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,H,Hdot"));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(first[0], 1.0);
        assert_eq!(first[1], 1.0);
        assert_eq!(first[2], sol.derivative(1.0).unwrap());
        let last: Vec<f64> = text
            .lines()
            .last()
            .unwrap()
            .split(',')
            .map(|c| c.parse().unwrap())
            .collect();
        assert_eq!(last[0], 1.5);
        assert_eq!(last[1], 1.25);
    }

    #[test]
    fn trajectory_csv_columns() {
        let sol = reference();
        let mut buf = Vec::new();
        assert_eq!(write_trajectory(&sol, 11, &mut buf).unwrap(), 11);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,y,zeta,omega\n"));
        // omega / y^(2 lambda) is conserved; lambda = 2 here.
        let conserved: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| {
                let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
                cols[3] / cols[1].powi(4)
            })
            .collect();
        let spread = conserved
            .iter()
            .fold(0.0f64, |m, w| m.max((w - conserved[0]).abs()));
        assert!((conserved[0] - sol.alpha()).abs() < 1e-12);
        assert!(spread < 1e-9);
    }
}
