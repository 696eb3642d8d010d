mod args;
mod commands;
mod error;
mod manifest;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{read_config, Cli, Invocation};
use error::{exit_code, usage};
use manifest::{default_manifest_path, sha256_hex, RunManifest};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let command_line: Vec<String> = std::env::args().collect();
    let flags = match &cli.config {
        Some(path) => cli.flags.clone().over(read_config(path)?),
        None => cli.flags.clone(),
    };
    let threads = match flags.threads {
        Some(0) => return Err(usage("--threads must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;

    let inv = Invocation {
        command: cli.command,
        flags,
    };
    let start = Instant::now();
    let out = commands::run(&inv)?;
    let wall = start.elapsed().as_secs_f64();

    match &inv.flags.out {
        Some(path) => {
            std::fs::write(path, &out.bytes).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?
        }
        None => std::io::stdout().write_all(&out.bytes)?,
    }

    let record = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command_line,
        seed: commands::seed(&inv.flags),
        threads,
        inputs: out.inputs,
        output_path: inv.flags.out.clone(),
        output_digest: sha256_hex(&out.bytes),
        output_bytes: out.bytes.len(),
        success: out.success,
        wall_clock_seconds: wall,
        config: inv,
    };
    let text = serde_json::to_string_pretty(&record)? + "\n";
    match cli
        .manifest
        .or_else(|| record.output_path.as_deref().map(default_manifest_path))
    {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?
        }
        None => eprint!("{text}"),
    }
    Ok(record.success)
}
