use clap::Parser;
use modal_harness::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let result = cli.resolve().and_then(|cfg| run(&cfg));
    if let Err(e) = result {
        eprintln!("modal: {e}");
        std::process::exit(e.exit_code());
    }
}
