use clap::Parser;

fn main() {
    let args = tracerule::cli::Args::parse();
    std::process::exit(tracerule::cli::run(args));
}
