use clap::Parser;
use rellich::cli::{emit, run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli).and_then(|o| emit(&o)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
