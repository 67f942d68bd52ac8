use clap::Parser;
use purify_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let result = purify_cli::resolve(&cli).and_then(|inv| purify_cli::run(&inv));
    if let Err(e) = result {
        eprintln!("purify: {e}");
        std::process::exit(e.exit_code());
    }
}
