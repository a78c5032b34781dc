use clap::Parser;
use cl_decohere::scenario::{apply_config, parse_config, preset, run, RunStatus, PRESETS};
use cl_decohere::selftest::run_selftest;
use cl_decohere::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NONCONVERGED: u8 = 3;

/// Caldeira-Leggett decoherence scenarios: arrival times, cat states,
/// identical particles and the released plane wave.
#[derive(Parser, Debug)]
#[command(name = "cl-decohere", version)]
struct Cli {
    /// A preset name (see list-presets), `run`, `selftest` or `list-presets`.
    command: String,

    /// Flat key = value file; overrides the preset, or defines the whole
    /// scenario for `run`.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Worker threads.
    #[arg(long, env = "CL_DECOHERE_JOBS")]
    jobs: Option<usize>,

    /// Overrides the scenario tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

fn list_presets() -> ExitCode {
    for p in PRESETS.iter() {
        let s = (p.build)();
        println!("{:<6} {:<17} {}", p.name, s.kind.name(), p.summary);
    }
    ExitCode::SUCCESS
}

fn selftest() -> ExitCode {
    let checks = run_selftest();
    let mut ok = true;
    for c in &checks {
        println!("{} {:<32} {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        ok &= c.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILURE)
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Scenario(_) | Error::Domain(_) => EXIT_INVALID,
        Error::Convergence { .. } => EXIT_NONCONVERGED,
        _ => EXIT_FAILURE,
    }
}

fn run_scenario(cli: &Cli) -> Result<RunStatus, Error> {
    let base = match cli.command.as_str() {
        "run" => None,
        name => Some(preset(name).ok_or_else(|| {
            Error::scenario(format!("unknown preset '{name}'; try list-presets"))
        })?),
    };
    if base.is_none() && cli.config.is_none() {
        return Err(Error::scenario("run needs --config"));
    }
    let entries = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::scenario(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => Vec::new(),
    };
    let mut scenario = apply_config(base, &entries)?;
    if let Some(tol) = cli.tol {
        scenario.tol = tol;
    }
    scenario.validate()?;
    let outcome = run(&scenario, &cli.out)?;
    let m = &outcome.manifest;
    for w in &m.flags.warnings {
        eprintln!("warning: {w}");
    }
    for w in &m.flags.nonconverged {
        eprintln!("not converged: {w}");
    }
    println!(
        "{}: wrote {} files to {} in {:.2} s",
        m.scenario,
        m.files.len() + 1,
        cli.out.display(),
        m.wall_time_s
    );
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command.as_str() {
        "list-presets" => return list_presets(),
        "selftest" => return selftest(),
        _ => {}
    }
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_INVALID);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    }
    match run_scenario(&cli) {
        Ok(RunStatus::Complete) => ExitCode::SUCCESS,
        Ok(RunStatus::NonConverged) => ExitCode::from(EXIT_NONCONVERGED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
