use std::process::ExitCode;

fn main() -> ExitCode {
    trustdyn::cli::main_with_args(std::env::args_os())
}
