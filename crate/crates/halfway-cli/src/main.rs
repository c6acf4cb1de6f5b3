use clap::Parser;
use halfway_cli::cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = halfway_cli::commands::run(cli) {
        eprintln!("halfway: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
