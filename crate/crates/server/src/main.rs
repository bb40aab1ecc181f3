use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = emissor_server::cli::Cli::parse();
    match emissor_server::cli::run(cli, &mut std::io::stdout()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("emissor: {e}");
            ExitCode::from(2)
        }
    }
}
