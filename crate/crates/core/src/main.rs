use clap::Parser;

use ctxspell::cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    if let Err(e) = run(cli, &mut stdout, &mut stderr) {
        eprintln!("ctxspell: {e}");
        std::process::exit(exit_code(&e));
    }
}
