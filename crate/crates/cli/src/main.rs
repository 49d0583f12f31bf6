use clap::Parser;

fn main() {
    let code = foldylax::run(foldylax::Cli::parse());
    std::process::exit(code);
}
