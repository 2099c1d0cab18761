use std::process::ExitCode;

use clap::Parser;
use fracns_cli::{error_record, execute, exit_code, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", error_record(&err));
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
