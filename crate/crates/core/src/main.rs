use std::process::ExitCode;

fn main() -> ExitCode {
    capacity_lln::cli::main()
}
