//! Command-line front end for `awq`.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 usage,
//! configuration or I/O error.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::askey_wilson::AWParams;
use crate::suite::{emit_tables, run_verify, Format, SuiteConfig};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "awq", version, about = "Askey-Wilson polynomial and q-Sturm-Liouville verification suite")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite and print a report.
    Verify(CommonArgs),
    /// Write coefficient, recurrence, eigenvalue, norm, Gram and connection tables.
    Tables(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = -0.2, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub d: f64,
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
    /// Tolerance override `id=value`; repeatable.
    #[arg(long, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Comma-separated check ids to run.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Report file for `verify`, output directory for `tables`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1993)]
    pub seed: u64,
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (id, v) = s.split_once('=').ok_or_else(|| format!("expected id=value, got {s}"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad tolerance {v}: {e}"))?;
    Ok((id.to_string(), v))
}

impl CommonArgs {
    pub fn config(&self) -> Result<SuiteConfig> {
        let cfg = SuiteConfig {
            params: AWParams::new(self.q, self.a, self.b, self.c, self.d)?,
            nmax: self.nmax,
            nodes: self.nodes,
            tol: self.tol.iter().cloned().collect(),
            format: self.format,
            only: self.only.clone(),
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn verify(args: &CommonArgs) -> Result<bool> {
    let cfg = args.config()?;
    let report = run_verify(&cfg)?;
    let text = report.render(cfg.format)?;
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}

fn tables(args: &CommonArgs) -> Result<()> {
    let cfg = args.config()?;
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("tables"));
    for path in emit_tables(&cfg, &dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn report_error(e: &Error) -> i32 {
    eprintln!("awq: {e}");
    2
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Verify(a) => match verify(a) {
            Ok(true) => 0,
            Ok(false) => 1,
            Err(e) => report_error(&e),
        },
        Command::Tables(a) => match tables(a) {
            Ok(()) => 0,
            Err(e) => report_error(&e),
        },
    }
}
