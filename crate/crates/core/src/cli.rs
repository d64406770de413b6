//! Command dispatch behind the `residue-audit` binary.
//!
//! Exit status: 0 when every requested comparison matches exactly, 1 on a
//! mismatch with the expected table, 2 on a usage error, 3 when the engine
//! disagrees with its own numeric oracle.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::audit::{Auditor, VerificationReport};
use crate::clifford::pairing_sum;
use crate::dsl::{eval, field_word, parse};
use crate::error::Error;
use crate::expected::ExpectedTable;
use crate::oracle::{rel_err, trial_assignments, OracleConfig};
use crate::pipeline::{boundary_case, interior_term, CaseLabel, Setting};
use crate::poly::{Atom, Poly};
use crate::report::{emit_latex, readable_poly};
use crate::{ExactPoly, GaussRat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verb {
    Verify,
    Interior,
    Trace(String),
    Eval(String),
    Oracle,
    Report,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub dim: Option<usize>,
    pub l: Option<usize>,
    pub case: Option<CaseLabel>,
    pub format: Format,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub contour_samples: Option<usize>,
    /// JSON object of expected-table overrides.
    pub expected: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            dim: None,
            l: None,
            case: None,
            format: Format::Text,
            seed: None,
            trials: None,
            tol: None,
            contour_samples: None,
            expected: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub verb: Verb,
    pub opts: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            status: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(status: i32, msg: String) -> Self {
        Outcome {
            status,
            stdout: String::new(),
            stderr: msg + "\n",
        }
    }
}

fn usage(msg: impl Into<String>) -> Outcome {
    Outcome::fail(EXIT_USAGE, format!("usage error: {}", msg.into()))
}

fn from_error(e: Error) -> Outcome {
    match e {
        Error::Inconsistency(m) => Outcome::fail(EXIT_INCONSISTENT, format!("internal inconsistency: {m}")),
        Error::Syntax { .. } | Error::UnknownSymbol(_) | Error::RankMismatch(..) | Error::InvalidArgument(_) => {
            usage(e.to_string())
        }
        e => Outcome::fail(EXIT_INCONSISTENT, format!("error: {e}")),
    }
}

/// Validated inputs of a command.
struct Plan {
    settings: Vec<Setting>,
    l: Option<usize>,
    case: Option<CaseLabel>,
    format: Format,
    cfg: OracleConfig,
    table: ExpectedTable,
}

impl Plan {
    fn ls(&self, s: Setting) -> Vec<usize> {
        match self.l {
            Some(l) => vec![l],
            None => (1..=s.n()).collect(),
        }
    }
}

fn plan(cmd: &Command) -> Result<Plan, Outcome> {
    let o = &cmd.opts;
    let settings = match o.dim {
        None => Setting::ALL.to_vec(),
        Some(n) => vec![Setting::from_dim(n).map_err(|_| usage(format!("--dim must be 4 or 6, got {n}")))?],
    };
    if let Some(l) = o.l {
        let max = settings.iter().map(|s| s.n()).min().unwrap_or(6);
        if l == 0 || l > max {
            return Err(usage(format!("--l must lie in 1..={max}, got {l}")));
        }
    }
    if o.format == Format::Latex && !matches!(cmd.verb, Verb::Report | Verb::Verify) {
        return Err(usage("--latex applies to verify and report"));
    }
    if o.case.is_some() && matches!(cmd.verb, Verb::Interior | Verb::Trace(_) | Verb::Eval(_)) {
        return Err(usage("--case applies to verify, oracle and report"));
    }
    let mut cfg = OracleConfig::default();
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(t) = o.tol {
        cfg.tol = t;
    }
    if let Some(k) = o.contour_samples {
        cfg.contour_samples = k;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let table = match &o.expected {
        None => ExpectedTable::transcribed(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            ExpectedTable::with_overrides_json(&text).map_err(|e| usage(e.to_string()))?
        }
    };
    Ok(Plan {
        settings,
        l: o.l,
        case: o.case,
        format: o.format,
        cfg,
        table,
    })
}

/// Runs a command; never panics on bad input.
pub fn run(cmd: &Command) -> Outcome {
    let p = match plan(cmd) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let r = match &cmd.verb {
        Verb::Verify => verify(&p, false),
        Verb::Report => verify(&p, true),
        Verb::Interior => interior(&p),
        Verb::Trace(e) => trace(e, cmd.opts.dim),
        Verb::Eval(e) => eval_verb(e, cmd.opts.dim.unwrap_or(4)),
        Verb::Oracle => oracle(&p),
    };
    r.unwrap_or_else(from_error)
}

fn text_reports(reports: &[VerificationReport], seed: u64) -> String {
    let mut s = String::new();
    for r in reports {
        let tag = if r.exact_match { "match" } else { "MISMATCH" };
        writeln!(s, "{:<24} {tag}", r.id).expect("string write");
        if r.exact_match {
            writeln!(s, "    value:    {}", r.computed).expect("string write");
        } else {
            writeln!(s, "    computed: {}", r.computed).expect("string write");
            writeln!(s, "    expected: {}", r.expected).expect("string write");
            writeln!(s, "    note:     {}", r.note).expect("string write");
        }
    }
    let bad = reports.iter().filter(|r| !r.exact_match).count();
    writeln!(s, "{} checked, {bad} mismatched, seed {seed}", reports.len()).expect("string write");
    s
}

fn render(p: &Plan, reports: &[VerificationReport]) -> crate::Result<String> {
    Ok(match p.format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        Format::Latex => emit_latex(reports)?,
        Format::Text => text_reports(reports, p.cfg.seed),
    })
}

fn status_of(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.exact_match) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn verify(p: &Plan, full: bool) -> crate::Result<Outcome> {
    let mut a = Auditor::new(p.table.clone(), p.cfg.clone())?;
    let mut reports = Vec::new();
    for &s in &p.settings {
        for l in p.ls(s) {
            if let Some(c) = p.case {
                reports.push(a.case_report(s, c, l)?);
                continue;
            }
            if full {
                reports.extend(a.audit(s, l)?);
            } else {
                for c in CaseLabel::ALL {
                    reports.push(a.case_report(s, c, l)?);
                }
                reports.push(a.total_report(s, l)?);
                if p.format == Format::Latex {
                    reports.extend(a.theorem_report(s, l)?);
                }
            }
        }
    }
    let status = status_of(&reports);
    Ok(Outcome {
        status,
        stdout: render(p, &reports)?,
        stderr: String::new(),
    })
}

fn interior(p: &Plan) -> crate::Result<Outcome> {
    if p.format == Format::Json {
        let mut a = Auditor::new(p.table.clone(), p.cfg.clone())?;
        let mut reports = Vec::new();
        for &s in &p.settings {
            for l in p.ls(s) {
                reports.push(a.interior_report(s, l)?);
            }
        }
        return Ok(Outcome {
            status: status_of(&reports),
            stdout: render(p, &reports)?,
            stderr: String::new(),
        });
    }
    let mut out = String::new();
    for &s in &p.settings {
        for l in p.ls(s) {
            let v = interior_term::<GaussRat>(s, l)?;
            writeln!(out, "{s} l={l}: {}", readable_poly(&v, s.n(), l)).expect("string write");
        }
    }
    Ok(Outcome::ok(out))
}

/// Trace of a word `c(X_a)...` in every rank, as a multiple of `tr_id`;
/// other expressions are evaluated in rank `dim` and traced.
fn trace(expr: &str, dim: Option<usize>) -> crate::Result<Outcome> {
    let e = parse(expr)?;
    if let Some(word) = field_word(&e) {
        let g = |a: usize, b: usize| Poly::atom(Atom::g(word[a], word[b]));
        let t: ExactPoly = pairing_sum(word.len(), &g);
        let v = &t * &Poly::atom(Atom::TrId);
        return Ok(Outcome::ok(format!("{v}\n")));
    }
    let n = dim.unwrap_or(4);
    let v = eval(&e, n)?.trace();
    Ok(Outcome::ok(format!("{v}\n")))
}

fn eval_verb(expr: &str, n: usize) -> crate::Result<Outcome> {
    let v = eval(&parse(expr)?, n)?;
    Ok(Outcome::ok(format!("{v}\n")))
}

#[derive(serde::Serialize)]
struct Trial {
    setting: Setting,
    case: CaseLabel,
    l: usize,
    trial: usize,
    symbolic: [f64; 2],
    oracle: [f64; 2],
    rel_err: f64,
}

fn oracle(p: &Plan) -> crate::Result<Outcome> {
    let mut a = Auditor::new(p.table.clone(), p.cfg.clone())?;
    let mut trials = Vec::new();
    for &s in &p.settings {
        for l in p.ls(s) {
            let labels = match p.case {
                Some(c) => vec![c],
                None => CaseLabel::ALL.to_vec(),
            };
            for c in labels {
                let sym = boundary_case::<GaussRat>(s, c, l)?;
                for (k, asg) in trial_assignments(s.n(), l, &p.cfg).iter().enumerate() {
                    let v = sym.eval(asg)?;
                    let o = a.oracle().boundary_case(s, c, l, asg)?;
                    trials.push(Trial {
                        setting: s,
                        case: c,
                        l,
                        trial: k,
                        symbolic: [v.re, v.im],
                        oracle: [o.re, o.im],
                        rel_err: rel_err(o, v),
                    });
                }
            }
        }
    }
    let worst = trials.iter().map(|t| t.rel_err).fold(0.0, f64::max);
    let status = if worst <= p.cfg.tol { EXIT_OK } else { EXIT_INCONSISTENT };
    let stdout = if p.format == Format::Json {
        serde_json::to_string_pretty(&trials).expect("trials serialize") + "\n"
    } else {
        let mut s = String::new();
        for t in &trials {
            writeln!(
                s,
                "{}.{}.l{} trial {:>2}: symbolic {:+.12e}{:+.12e}i oracle {:+.12e}{:+.12e}i rel {:.1e}",
                t.setting, t.case, t.l, t.trial, t.symbolic[0], t.symbolic[1], t.oracle[0], t.oracle[1], t.rel_err
            )
            .expect("string write");
        }
        writeln!(s, "worst relative error {worst:.2e} (tolerance {:.1e}), seed {}", p.cfg.tol, p.cfg.seed)
            .expect("string write");
        s
    };
    let stderr = if status == EXIT_OK {
        String::new()
    } else {
        format!("internal inconsistency: oracle and engine differ by {worst:.2e}\n")
    };
    Ok(Outcome { status, stdout, stderr })
}
