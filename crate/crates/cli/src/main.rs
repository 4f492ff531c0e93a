use std::io;
use std::process::ExitCode;

use revolve_cli::{run, TOLERANCE_ENV};

fn main() -> ExitCode {
    let env = std::env::var(TOLERANCE_ENV).ok();
    let code = run(
        std::env::args_os(),
        env.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code)
}
