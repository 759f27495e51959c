use clap::Parser;
use gagc_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout();
    std::process::exit(run(cli, &mut stdout));
}
