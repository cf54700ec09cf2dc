//! Writes the first N zeros of ζ on the critical line, one per line.
//!
//! Usage: gen-zeros N [OUTPUT]

use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(count) = args.first().and_then(|s| s.parse::<usize>().ok()) else {
        eprintln!("usage: gen-zeros N [OUTPUT]");
        return ExitCode::from(2);
    };
    let zeros = match zvar_validation::generate_zeros(count) {
        Ok(z) => z,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };
    let text = zvar_validation::format_zeros(&zeros);
    match args.get(1) {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
