use std::io::{self, BufReader};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdin = io::stdin();
    let mut input = BufReader::new(stdin.lock());
    let code = baire_cli::run(std::env::args_os(), &mut input, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
