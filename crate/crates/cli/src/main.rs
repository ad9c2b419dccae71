use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use su11_cli::output::{csv, svg, write_atomic};
use su11_cli::report::{evaluate, Summary};
use su11_cli::scenario::{Output, BUNDLED};
use su11_cli::{CliError, Scenario};

#[derive(Parser)]
#[command(name = "su11", version, about = "SU(1,1) map and Bloch-equation trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all routes and write CSV/JSON/SVG into --out.
    Simulate {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run every check and print the JSON report; exit 1 if any check fails.
    Verify {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
    },
    /// List the bundled scenarios.
    ListScenarios,
}

fn json(summary: &Summary) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(summary).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn simulate(source: &str, out: &Path) -> Result<(), CliError> {
    let scenario = Scenario::load(source)?;
    let eval = evaluate(&scenario)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let name = &scenario.name;
    if scenario.wants(Output::Csv) {
        write_atomic(&out.join(format!("{name}.csv")), csv(&eval.trajectories).as_bytes())?;
    }
    if scenario.wants(Output::Json) {
        write_atomic(&out.join(format!("{name}.json")), json(&eval.summary)?.as_bytes())?;
    }
    if scenario.wants(Output::Svg) {
        let plot = svg(name, &eval.trajectories, scenario.params.q(), eval.bounds);
        write_atomic(&out.join(format!("{name}.svg")), plot.as_bytes())?;
    }
    eprintln!("{name}: wrote outputs to {} (checks: {})", out.display(), eval.summary.status);
    Ok(())
}

fn verify(source: &str) -> Result<(), CliError> {
    let scenario = Scenario::load(source)?;
    let eval = evaluate(&scenario)?;
    print!("{}", json(&eval.summary)?);
    for c in &eval.summary.checks {
        eprintln!("{:<18} {:.3e} < {:.0e}  {}", c.name, c.value, c.tolerance, if c.pass { "ok" } else { "FAIL" });
    }
    match eval.summary.first_failure() {
        Some(c) => Err(CliError::CheckFailed(format!("{} = {:e} exceeds {:e}", c.name, c.value, c.tolerance))),
        None => Ok(()),
    }
}

fn list_scenarios() -> Result<(), CliError> {
    for (name, text) in BUNDLED {
        let s = Scenario::parse(text)?;
        println!("{name:<12} {:<10} {}", s.class().name(), s.description);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { scenario, out } => simulate(scenario, out),
        Command::Verify { scenario } => verify(scenario),
        Command::ListScenarios => list_scenarios(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
