use clap::Parser;
use lindley_est::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = lindley_est::run(&cli) {
        eprintln!("lindley-est: {e}");
        std::process::exit(e.exit_code());
    }
}
