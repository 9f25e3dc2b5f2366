use std::process::ExitCode;

fn main() -> ExitCode {
    heegraph::cli::main()
}
