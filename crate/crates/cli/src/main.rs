use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text) = softconv_cli::run_main(std::env::args().collect());
    if code == softconv_cli::EXIT_USAGE {
        eprint!("{text}");
    } else {
        let _ = std::io::stdout().write_all(text.as_bytes());
    }
    ExitCode::from(code as u8)
}
