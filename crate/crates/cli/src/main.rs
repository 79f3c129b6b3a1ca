use std::io::{self, Write};
use std::process::ExitCode;

use annulus_energy_cli::commands::run_args;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let status = run_args(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(status.code() as u8)
}
