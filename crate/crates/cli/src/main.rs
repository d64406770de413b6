use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use residue_audit::cli::{run, Command, Format, Options, Verb};
use residue_audit::pipeline::CaseLabel;

/// Exact verification of noncommutative residues of the Dirac operator on
/// manifolds with boundary.
#[derive(Parser)]
#[command(name = "residue-audit", version)]
struct Cli {
    #[command(subcommand)]
    verb: VerbArg,
    #[command(flatten)]
    opts: OptArgs,
}

#[derive(Subcommand)]
enum VerbArg {
    /// Compare the boundary cases and their total against the expected table.
    Verify,
    /// Print the interior term.
    Interior,
    /// Clifford trace of an expression, e.g. "c(X1)*c(X2)".
    Trace { expr: String },
    /// Evaluate a symbol expression.
    Eval { expr: String },
    /// Per-trial comparison of the engine against the numeric oracle.
    Oracle,
    /// Full audit: cases, totals, interior, theorem and checkpoints.
    Report,
}

#[derive(Args)]
struct OptArgs {
    /// Manifold dimension (4 or 6).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Number of vector fields.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Restrict to one boundary case (aI, aII, aIII, b, c).
    #[arg(long, global = true, value_parser = parse_case)]
    case: Option<CaseLabel>,
    #[arg(long, global = true, conflicts_with = "latex")]
    json: bool,
    #[arg(long, global = true)]
    latex: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Relative tolerance for oracle comparisons.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    contour_samples: Option<usize>,
    /// JSON object of expected values overriding the built-in table.
    #[arg(long, global = true)]
    expected: Option<PathBuf>,
}

fn parse_case(s: &str) -> Result<CaseLabel, String> {
    s.parse().map_err(|e: residue_audit::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verb = match cli.verb {
        VerbArg::Verify => Verb::Verify,
        VerbArg::Interior => Verb::Interior,
        VerbArg::Trace { expr } => Verb::Trace(expr),
        VerbArg::Eval { expr } => Verb::Eval(expr),
        VerbArg::Oracle => Verb::Oracle,
        VerbArg::Report => Verb::Report,
    };
    let o = cli.opts;
    let format = if o.json {
        Format::Json
    } else if o.latex {
        Format::Latex
    } else {
        Format::Text
    };
    let cmd = Command {
        verb,
        opts: Options {
            dim: o.dim,
            l: o.l,
            case: o.case,
            format,
            seed: o.seed,
            trials: o.trials,
            tol: o.tol,
            contour_samples: o.contour_samples,
            expected: o.expected,
        },
    };
    let out = run(&cmd);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.status as u8)
}
