use std::process::ExitCode;

fn main() -> ExitCode {
    congruent_cli::run(std::env::args_os())
}
