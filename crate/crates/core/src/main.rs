use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, err) =
        tomo_core::cli::run_from_args(std::env::args_os(), &mut std::io::stdin());
    print!("{out}");
    let _ = std::io::stdout().flush();
    eprint!("{err}");
    ExitCode::from(code as u8)
}
