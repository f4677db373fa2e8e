use clap::Parser;

use normgrid::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    normgrid::init_parallelism();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
