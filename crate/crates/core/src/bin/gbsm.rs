use std::process::ExitCode;

fn main() -> ExitCode {
    gbsm_drift::experiment::cli::run(std::env::args_os())
}
