use lqg_core::cli::{parse_config, run, ParseOutcome};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match parse_config(std::env::args_os()) {
        Ok(ParseOutcome::Config(c)) => c,
        Ok(ParseOutcome::Text(text, code)) => {
            if code == 0 {
                print!("{text}");
            } else {
                eprint!("{text}");
            }
            return ExitCode::from(code as u8);
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&config) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
