use clap::Parser;
use truncosc_cli::config::{Args, RunConfig};
use truncosc_cli::{commands, CliError};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = RunConfig::from_args(args).and_then(|cfg| commands::run(&cfg));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(CliError::exit_code(&e));
    }
}
