use clap::Parser;

fn main() {
    let cli = lhl_cli::Cli::parse();
    std::process::exit(lhl_cli::run(&cli));
}
