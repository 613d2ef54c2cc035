use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use plectic_cli::commands::{execute, CommandKind, Format, RunOptions};

/// Exact checks for closed forms, Lie algebra actions and homotopy moment
/// maps on torus/affine model manifolds.
#[derive(Parser)]
#[command(name = "plectic", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (TOML; see docs/scenario-format.md)
    #[arg(long)]
    scenario: PathBuf,
    /// Output format: text or machine (JSON)
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    report: Option<PathBuf>,
    /// Evaluation point override, e.g. `pi/2,0,3/2`
    #[arg(long)]
    point: Option<String>,
    /// Ansatz for `solve`, e.g. `poly:2` or `poly:1,trig:1`
    #[arg(long)]
    ansatz: Option<String>,
    /// Lie algebra element for `fixomega`, e.g. `1,0`
    #[arg(long)]
    x: Option<String>,
    /// Attach wall-clock timing to the report (breaks byte-determinism)
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse the scenario and verify its structural invariants
    Validate(CommonArgs),
    /// Check the action: bracket relations and invariance of omega
    CheckAction(CommonArgs),
    /// Verify a moment map through both routes and compare the verdicts
    CheckMomentmap(CommonArgs),
    /// Check a Cartan cocycle and derive its induced moment map
    FromCartan(CommonArgs),
    /// Evaluate the obstruction class and the existence hypotheses
    Obstruction(CommonArgs),
    /// Solve for a moment map within a monomial ansatz
    Solve(CommonArgs),
    /// Verify an equivalence witness between two pairs
    CheckEquivalence(CommonArgs),
    /// Verify an inner equivalence witness (fixed omega)
    CheckInner(CommonArgs),
    /// Build equivalence witnesses from a transported family
    IsotopyWitness(CommonArgs),
    /// Build the homotopy realising an inner equivalence and check it
    BuildHomotopy(CommonArgs),
    /// Issue the circle-average certificate against Cartan-induced maps
    Fixomega(CommonArgs),
}

fn to_options(args: &CommonArgs) -> Result<RunOptions, String> {
    let format = match args.format.as_str() {
        "text" => Format::Text,
        "machine" => Format::Machine,
        other => return Err(format!("unknown format `{other}`; use text or machine")),
    };
    Ok(RunOptions {
        scenario: args.scenario.clone(),
        format,
        report_path: args.report.clone(),
        point: args.point.clone(),
        ansatz: args.ansatz.clone(),
        x: args.x.clone(),
        timing: args.timing,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Cmd::Validate(a) => (CommandKind::Validate, a),
        Cmd::CheckAction(a) => (CommandKind::CheckAction, a),
        Cmd::CheckMomentmap(a) => (CommandKind::CheckMomentmap, a),
        Cmd::FromCartan(a) => (CommandKind::FromCartan, a),
        Cmd::Obstruction(a) => (CommandKind::Obstruction, a),
        Cmd::Solve(a) => (CommandKind::Solve, a),
        Cmd::CheckEquivalence(a) => (CommandKind::CheckEquivalence, a),
        Cmd::CheckInner(a) => (CommandKind::CheckInner, a),
        Cmd::IsotopyWitness(a) => (CommandKind::IsotopyWitness, a),
        Cmd::BuildHomotopy(a) => (CommandKind::BuildHomotopy, a),
        Cmd::Fixomega(a) => (CommandKind::Fixomega, a),
    };
    let opts = match to_options(args) {
        Ok(o) => o,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let code = execute(kind, &opts);
    ExitCode::from(code as u8)
}
