use clap::Parser;

use tllvlc::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
