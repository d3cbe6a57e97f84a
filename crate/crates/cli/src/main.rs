use std::process::ExitCode;

fn main() -> ExitCode {
    let code = gchtw_cli::run(std::env::args_os());
    ExitCode::from(code)
}
