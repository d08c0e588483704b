use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ztnet_cli::run(std::env::args_os()))
}
