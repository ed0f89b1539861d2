//! `roughharm`: run the irregular-harmonic experiments from the command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 failed verification.

mod args;
mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] roughharm::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match args::merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let name = cli.command.name();
    let dest = output::destination(cli.out.as_deref(), name, cli.format);
    let (out, verdict) = match &cli.command {
        Command::Dims(a) => (commands::dims(a)?, None),
        Command::Eval(a) => (commands::eval(a)?, None),
        Command::Spectrum(a) => (commands::spectrum(a)?, None),
        Command::Sobolev(a) => (commands::sobolev(a)?, None),
        Command::Energy(a) => (commands::energy(a)?, None),
        Command::Holder(a) => (commands::holder(a)?, None),
        Command::Fourier(a) => (commands::fourier(a)?, None),
        Command::Weierstrass(a) => (commands::weierstrass(a)?, None),
        Command::NeuheiselSample(a) => (commands::neuheisel(a)?, None),
        Command::TransmissionVerify(a) => {
            let v = commands::transmission_verify(a)?;
            let witness_path = (!v.pass).then(|| witness_path(a.witnesses.as_deref(), dest.as_deref()));
            (v.output, Some((v.witnesses, witness_path)))
        }
    };
    write(dest.as_deref(), &out.render(cli.format))?;
    match verdict {
        Some((witnesses, Some(path))) => {
            let text = serde_json::to_string_pretty(&serde_json::json!({ "witnesses": witnesses }))?;
            write(Some(&path), &(text + "\n"))?;
            eprintln!("verification failed; {} witness(es) written to {}", witnesses.len(), path.display());
            Ok(2)
        }
        _ => Ok(0),
    }
}

/// Explicit path, else next to the report, else in the output directory or
/// the working directory.
fn witness_path(explicit: Option<&Path>, report: Option<&Path>) -> PathBuf {
    const NAME: &str = "transmission-verify.witnesses.json";
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match report {
        Some(r) => {
            let stem = r.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            r.with_file_name(format!("{stem}.witnesses.json"))
        }
        None => PathBuf::from(NAME),
    }
}

fn write(dest: Option<&Path>, text: &str) -> Result<(), CliError> {
    output::write(dest, text).map_err(|source| CliError::Io {
        path: dest.map_or_else(|| "stdout".into(), |p| p.display().to_string()),
        source,
    })
}
