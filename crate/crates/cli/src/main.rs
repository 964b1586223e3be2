mod cli;
mod commands;
mod series_spec;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use cli::Cli;

const EXIT_CONGRUENCE_FAILS: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Caps the worker count from `CONGRLAB_THREADS`; returns the effective count.
fn configure_threads() -> Result<usize, String> {
    if let Ok(v) = std::env::var("CONGRLAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("CONGRLAB_THREADS={v:?} is not a positive integer"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(rayon::current_num_threads())
}

fn pretty_lines(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                pretty_lines(&key, val, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, val) in items.iter().enumerate() {
                pretty_lines(&format!("{prefix}[{i}]"), val, out);
            }
        }
        _ => out.push(format!("{prefix:<40} {v}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = match configure_threads() {
        Ok(n) => n,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let start = Instant::now();
    let (doc, code) = match commands::run(&cli.command) {
        Ok(o) => {
            let code = if o.congruence_failed { EXIT_CONGRUENCE_FAILS } else { 0 };
            (o.value, code)
        }
        Err(e) => (json!({"error": {"kind": e.kind(), "message": e.to_string()}}), EXIT_PRECONDITION),
    };
    let text = serde_json::to_string(&doc).expect("JSON values serialize");
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{text}").is_err() {
        return ExitCode::from(EXIT_USAGE);
    }
    if cli.pretty {
        let mut lines = Vec::new();
        pretty_lines("", &doc, &mut lines);
        eprintln!("{}", lines.join("\n"));
    }
    if cli.meta {
        let meta = json!({"meta": {
            "command": cli.command.name(),
            "version": env!("CARGO_PKG_VERSION"),
            "threads": threads,
            "elapsed_ms": start.elapsed().as_secs_f64() * 1e3,
            "exit_code": code,
        }});
        eprintln!("{meta}");
    }
    ExitCode::from(code)
}
