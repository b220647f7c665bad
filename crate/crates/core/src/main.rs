use std::process::ExitCode;

fn main() -> ExitCode {
    zladder::cli::main_entry()
}
