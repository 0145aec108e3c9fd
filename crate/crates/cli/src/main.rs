use clap::Parser;

fn main() {
    let cli = diagscale_cli::Cli::parse();
    if let Err(e) = diagscale_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
