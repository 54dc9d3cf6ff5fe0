use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kenmotsu_cli::{emit_report, run_verify, Format, RunConfig};

#[derive(Parser)]
#[command(name = "kenmotsu", version, about = "Numerical verification of generalized Kenmotsu chart models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every registered check on a model and report residuals.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// example22, example23, warped or control.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    s: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c2: f64,
    /// Warping constant of the warped model.
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Tolerance override `<id>=<value>`; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Comma-separated check ids to run.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (id, v) = s.split_once('=').ok_or_else(|| format!("expected <id>=<value>, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad tolerance `{v}`: {e}"))?;
    Ok((id.to_string(), v))
}

impl From<VerifyArgs> for RunConfig {
    fn from(a: VerifyArgs) -> Self {
        RunConfig {
            model: a.model,
            n: a.n,
            s: a.s,
            c1: a.c1,
            c2: a.c2,
            k: a.k,
            points: a.points,
            seed: a.seed,
            tol: a.tol.into_iter().collect::<BTreeMap<_, _>>(),
            checks: a.checks,
            format: a.format,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Command::Verify(args) = cli.command;
    let config = RunConfig::from(args);
    match run_verify(&config) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(emit_report(&report, config.format).as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
