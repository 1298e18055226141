use std::io::Write;
use std::process::ExitCode;

use hdisc::cli::{run, CAPACITY_ENV};

fn main() -> ExitCode {
    let capacity = std::env::var(CAPACITY_ENV).ok();
    let out = run(std::env::args_os(), capacity.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
