use clap::Parser;

fn main() {
    let cli = aztec_ktilings::cli::Cli::parse();
    let code = match aztec_ktilings::cli::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            aztec_ktilings::cli::exit_code(&e)
        }
    };
    std::process::exit(code);
}
