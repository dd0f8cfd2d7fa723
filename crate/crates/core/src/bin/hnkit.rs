use clap::Parser;

fn main() {
    let cli = hnkit::cli::Cli::parse();
    std::process::exit(hnkit::cli::run(&cli));
}
