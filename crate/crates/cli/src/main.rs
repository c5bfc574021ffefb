use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qreflect_core::io::to_json_precise;
use qreflect_core::Error;
use serde::Serialize;
use serde_json::Value;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "qreflect", version, about = "Reflection symmetries of multiqubit density operators")]
struct Cli {
    /// Omit the wall-time field so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two-qubit sign-change table of the transpose, spin-flip and total reflection maps.
    Table1 {
        /// Aligned text instead of JSON.
        #[arg(long)]
        plain: bool,
    },
    /// Run separability and feasibility criteria on a state file.
    Analyze(commands::AnalyzeArgs),
    /// Reflect the separable UPB mixture and check every step of the chain.
    UpbDemo,
    /// Seeded randomized invariant suite.
    Prop {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Negative control: corrupt the mask that undoes each application.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    input_digest: Option<String>,
    seed: Option<u64>,
    tolerance: f64,
    payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

/// Command result before it is wrapped in a [`Report`].
pub struct Outcome {
    pub payload: Value,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    /// Replaces the JSON report on stdout (`--plain`).
    pub plain: Option<String>,
    /// Exit status 1 with this message.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn new(payload: Value) -> Self {
        Self { payload, input_digest: None, seed: None, plain: None, failure: None }
    }
}

fn tolerance() -> Result<f64, Error> {
    match std::env::var("QREFLECT_TOL") {
        Err(_) => Ok(qreflect_core::PSD_TOL),
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
            _ => Err(Error::Argument(format!("QREFLECT_TOL must be a nonnegative number, got '{text}'"))),
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Dimension(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let tol = match tolerance() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("qreflect: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Table1 { plain } => Ok(commands::table1(*plain)),
        Command::Analyze(args) => commands::analyze(args, tol),
        Command::UpbDemo => commands::upb_demo(tol),
        Command::Prop { seed, trials, inject_fault } => commands::prop(*seed, *trials, *inject_fault),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("qreflect: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match &outcome.plain {
        Some(text) => print!("{text}"),
        None => {
            let report = Report {
                command: std::env::args().skip(1).collect(),
                input_digest: outcome.input_digest,
                seed: outcome.seed,
                tolerance: tol,
                payload: outcome.payload,
                wall_time_ms: (!cli.no_timing).then(|| started.elapsed().as_secs_f64() * 1e3),
            };
            println!("{}", to_json_precise(&report));
        }
    }
    match outcome.failure {
        Some(msg) => {
            eprintln!("qreflect: {msg}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
