use std::process::ExitCode;

use clap::Parser;
use robust_info::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(reports) => {
            let format = cli.format.into();
            let text: Vec<String> = reports.iter().map(|r| r.render(format)).collect();
            print!("{}", text.join("\n"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
