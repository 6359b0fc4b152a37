use clap::Parser;

fn main() {
    let cli = hammctr_cli::Cli::parse();
    let code = hammctr_cli::run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
