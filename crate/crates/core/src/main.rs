use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = ucext::cli::run_command(std::env::args_os());
    print!("{}", report.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", report.stderr);
    ExitCode::from(report.exit_code as u8)
}
