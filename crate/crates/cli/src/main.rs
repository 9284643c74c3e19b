use clap::Parser;
use fflab_cli::{emit, execute, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((report, format, out)) => {
            std::process::exit(emit(&report, format, out.as_ref()));
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
