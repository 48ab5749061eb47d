use clap::Parser;

fn main() {
    let cli = fockshift::cli::Cli::parse();
    std::process::exit(fockshift::cli::run(cli));
}
