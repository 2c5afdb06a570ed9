use clap::Parser;

fn main() {
    let cli = jobclust_cli::Cli::parse();
    if let Err(e) = jobclust_cli::run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
