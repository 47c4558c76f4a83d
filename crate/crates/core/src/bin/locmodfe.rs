use clap::Parser;

use locmodfe::driver::{run, Cli, RunConfig};

fn main() {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|cfg| run(&cfg));
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
