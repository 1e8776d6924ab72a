//! `curvkit`: curvature, rewiring and audit pipelines over edge-list files.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::Cli;

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<curvkit_core::Error>() {
        Some(curvkit_core::Error::Json(_)) => 2,
        Some(_) => 1,
        None if err.downcast_ref::<commands::InputError>().is_some() => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    if let Some(threads) = std::env::var("CURVKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }

    match commands::run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
