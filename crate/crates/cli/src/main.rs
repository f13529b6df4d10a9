//! `kleinian` command-line front end; see the library for the logic.

use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let threads = std::env::var("KLEINIAN_THREADS").ok();
    let o = kleinian_cli::execute(std::env::args_os(), threads.as_deref());
    let _ = std::io::stdout().lock().write_all(o.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(o.stderr.as_bytes());
    ExitCode::from(o.code)
}
