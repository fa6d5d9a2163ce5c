use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    let mut stderr = io::stderr();
    let status = snc::cli::run(std::env::args_os(), &mut stdout, &mut stderr);
    ExitCode::from(status as u8)
}
