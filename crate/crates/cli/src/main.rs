use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, report) = wsp_cli::run(std::env::args_os());
    let written = if code == wsp_cli::EXIT_INPUT {
        std::io::stderr().lock().write_all(report.as_bytes())
    } else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(report.as_bytes()).and_then(|_| stdout.flush())
    };
    let _ = written;
    ExitCode::from(code as u8)
}
