use clap::error::ErrorKind;
use clap::Parser;

use polyprod_cli::{run_and_emit, Cli, EXIT_INVALID};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run_and_emit(&cli.command));
}
