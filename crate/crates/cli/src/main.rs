use std::process::ExitCode;

use clap::Parser;
use intprop_cli::{run, Args, Status};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (out, status) = run(&args);
    print!("{out}");
    match &status {
        Status::Usage(msg) => eprintln!("error: {msg}"),
        Status::Infeasible => eprintln!("no solution"),
        Status::Ok => {}
    }
    ExitCode::from(status.code() as u8)
}
