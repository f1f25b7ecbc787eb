use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = polytau::cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{out}");
    ExitCode::from(code as u8)
}
