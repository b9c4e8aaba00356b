use std::process::ExitCode;

use clap::Parser;
use torusq::cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TORUSQ_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Outcome::InputError.into() } else { Outcome::Success.into() };
        }
    };
    run(cli).into()
}
