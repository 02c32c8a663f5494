use clap::Parser;
use dpchroma::config::{Cli, RunConfig};

fn main() {
    let cli = Cli::parse();
    let config = RunConfig::from_cli(cli);
    std::process::exit(dpchroma::run(&config));
}
