use std::io;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use fermat_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests also come through here, on stdout.
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", RunConfig::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    let code = run(&config, &mut io::stdout().lock(), &mut io::stderr());
    ExitCode::from(code as u8)
}
