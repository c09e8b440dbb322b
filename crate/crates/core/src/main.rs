use clap::Parser;

fn main() {
    let cli = qglimit::cli::Cli::parse();
    std::process::exit(qglimit::cli::run(cli));
}
