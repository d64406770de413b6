//! Three-way comparison of engine, printed values and the numeric oracle.
//!
//! Each quantity is evaluated exactly by the engine and read from the
//! expected table; both are then evaluated under the oracle's random
//! assignments and compared with the brute-force value. A mismatch between
//! engine and oracle is an engine bug and aborts the audit with
//! [`Error::Inconsistency`]. A mismatch between engine and printed value is
//! reported, with the oracle's verdict in the note.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expected::{
    case_id, interior_id, theorem_boundary_id, theorem_interior_id, total_id, ExpectedTable,
};
use crate::oracle::{rel_err, trial_assignments, NumericSymbol, Oracle, OracleConfig};
use crate::pipeline::{
    boundary_case, boundary_total, checkpoint_integrand, interior_term, CaseLabel, Checkpoint, Setting,
};
use crate::poly::Assignment;
use crate::report::{readable_poly, readable_symbol};
use crate::{ExactPoly, GaussRat};

type C = Complex64;

/// Real points at which checkpoint integrands are sampled.
pub const CHECKPOINT_POINTS: [f64; 3] = [-1.7, 0.3, 2.5];

/// Which side the numeric oracle agrees with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Both,
    Engine,
    Expected,
    Neither,
}

/// One audited quantity.
///
/// `oracle_engine` and `oracle_expected` are the engine's and the printed
/// value under the first oracle assignment, `oracle_numeric` the
/// brute-force value there. The relative errors are maxima over all
/// assignments (and sample points, for integrands).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub setting: Setting,
    pub l: usize,
    pub case: String,
    pub id: String,
    pub computed: String,
    pub expected: String,
    pub exact_match: bool,
    pub oracle_engine: [f64; 2],
    pub oracle_expected: [f64; 2],
    pub oracle_numeric: [f64; 2],
    pub engine_rel_err: f64,
    pub expected_rel_err: f64,
    pub supports: Support,
    pub seed: u64,
    pub note: String,
}

impl VerificationReport {
    pub fn is_checkpoint(&self) -> bool {
        self.id.ends_with("integrand")
    }
}

fn pair(c: C) -> [f64; 2] {
    [c.re, c.im]
}

/// Numeric samples of one quantity.
#[derive(Default)]
struct Samples {
    engine: Vec<C>,
    expected: Vec<C>,
    numeric: Vec<C>,
}

impl Samples {
    fn push(&mut self, engine: C, expected: C, numeric: C) {
        self.engine.push(engine);
        self.expected.push(expected);
        self.numeric.push(numeric);
    }

    fn max_err(&self, side: &[C]) -> f64 {
        self.numeric
            .iter()
            .zip(side)
            .map(|(o, s)| rel_err(*o, *s))
            .fold(0.0, f64::max)
    }
}

/// Runs audits against one expected table with a shared oracle.
pub struct Auditor {
    table: ExpectedTable,
    oracle: Oracle,
}

struct Pending<'a> {
    setting: Setting,
    l: usize,
    case: String,
    id: &'a str,
    computed: String,
    expected: String,
    exact: bool,
}

impl Auditor {
    pub fn new(table: ExpectedTable, cfg: OracleConfig) -> Result<Self> {
        Ok(Auditor {
            table,
            oracle: Oracle::new(cfg)?,
        })
    }

    pub fn table(&self) -> &ExpectedTable {
        &self.table
    }

    pub fn oracle(&mut self) -> &mut Oracle {
        &mut self.oracle
    }

    fn cfg(&self) -> &OracleConfig {
        self.oracle.config()
    }

    fn assignments(&self, setting: Setting, l: usize) -> Vec<Assignment> {
        trial_assignments(setting.n(), l, self.cfg())
    }

    fn finish(&self, p: Pending<'_>, s: Samples) -> Result<VerificationReport> {
        let tol = self.cfg().tol;
        let engine_err = s.max_err(&s.engine);
        let expected_err = s.max_err(&s.expected);
        if !(engine_err <= tol) {
            return Err(Error::Inconsistency(format!(
                "{}: engine and numeric oracle differ (relative error {engine_err:.3e}, tolerance {tol:.1e})",
                p.id
            )));
        }
        let supports = if expected_err <= tol { Support::Both } else { Support::Engine };
        let note = match (p.exact, supports) {
            (true, _) => format!("exact match; oracle agrees (relative error {engine_err:.1e})"),
            (false, Support::Both) => format!(
                "engine and printed value differ symbolically, but the oracle cannot separate them on {} samples",
                s.numeric.len()
            ),
            (false, _) => format!(
                "engine differs from the printed value; the oracle supports the engine \
                 (relative error {engine_err:.1e} against {expected_err:.1e} for the printed value)"
            ),
        };
        Ok(VerificationReport {
            setting: p.setting,
            l: p.l,
            case: p.case,
            id: p.id.to_string(),
            computed: p.computed,
            expected: p.expected,
            exact_match: p.exact,
            oracle_engine: pair(s.engine[0]),
            oracle_expected: pair(s.expected[0]),
            oracle_numeric: pair(s.numeric[0]),
            engine_rel_err: engine_err,
            expected_rel_err: expected_err,
            supports,
            seed: self.cfg().seed,
            note,
        })
    }

    fn poly_report(
        &mut self,
        setting: Setting,
        l: usize,
        case: &str,
        id: &str,
        computed: &ExactPoly,
        numeric: impl Fn(&mut Oracle, &Assignment) -> Result<C>,
    ) -> Result<VerificationReport> {
        let expected = self.table.poly(id)?;
        let n = setting.n();
        let mut s = Samples::default();
        for a in self.assignments(setting, l) {
            let v = numeric(&mut self.oracle, &a)?;
            s.push(computed.eval(&a)?, expected.eval(&a)?, v);
        }
        let p = Pending {
            setting,
            l,
            case: case.to_string(),
            id,
            computed: readable_poly(computed, n, l),
            expected: readable_poly(&expected, n, l),
            exact: *computed == expected,
        };
        self.finish(p, s)
    }

    pub fn case_report(&mut self, setting: Setting, label: CaseLabel, l: usize) -> Result<VerificationReport> {
        let computed = boundary_case::<GaussRat>(setting, label, l)?;
        self.poly_report(setting, l, &label.to_string(), &case_id(setting, label, l), &computed, |o, a| {
            o.boundary_case(setting, label, l, a)
        })
    }

    fn boundary_sum(o: &mut Oracle, setting: Setting, l: usize, a: &Assignment) -> Result<C> {
        let mut t = C::new(0.0, 0.0);
        for label in CaseLabel::ALL {
            t += o.boundary_case(setting, label, l, a)?;
        }
        Ok(t)
    }

    pub fn total_report(&mut self, setting: Setting, l: usize) -> Result<VerificationReport> {
        let computed = boundary_total::<GaussRat>(setting, l)?;
        self.poly_report(setting, l, "total", &total_id(setting, l), &computed, |o, a| {
            Self::boundary_sum(o, setting, l, a)
        })
    }

    pub fn interior_report(&mut self, setting: Setting, l: usize) -> Result<VerificationReport> {
        let computed = interior_term::<GaussRat>(setting, l)?;
        self.poly_report(setting, l, "interior", &interior_id(setting, l), &computed, |o, a| {
            o.interior(setting, l, a)
        })
    }

    /// Interior and boundary components of the theorem statement.
    pub fn theorem_report(&mut self, setting: Setting, l: usize) -> Result<[VerificationReport; 2]> {
        let interior = interior_term::<GaussRat>(setting, l)?;
        let boundary = boundary_total::<GaussRat>(setting, l)?;
        let i = self.poly_report(
            setting,
            l,
            "theorem.interior",
            &theorem_interior_id(setting, l),
            &interior,
            |o, a| o.interior(setting, l, a),
        )?;
        let b = self.poly_report(
            setting,
            l,
            "theorem.boundary",
            &theorem_boundary_id(setting, l),
            &boundary,
            |o, a| Self::boundary_sum(o, setting, l, a),
        )?;
        Ok([i, b])
    }

    /// Integrand comparison at [`CHECKPOINT_POINTS`] for the first three
    /// assignments.
    pub fn checkpoint_report(&mut self, cp: Checkpoint) -> Result<VerificationReport> {
        let setting = cp.setting();
        let computed = checkpoint_integrand::<GaussRat>(cp)?;
        let expected = self.table.symbol(cp.id())?;
        let mut s = Samples::default();
        for a in self.assignments(setting, 2).iter().take(3) {
            let e = NumericSymbol::new(&computed, a)?;
            let x = NumericSymbol::new(&expected, a)?;
            for t in CHECKPOINT_POINTS {
                let z = C::new(t, 0.0);
                s.push(e.eval_scalar(z)?, x.eval_scalar(z)?, self.oracle.checkpoint(cp, a, t)?);
            }
        }
        let p = Pending {
            setting,
            l: 2,
            case: cp.case().to_string(),
            id: cp.id(),
            computed: readable_symbol(&computed, 2),
            expected: readable_symbol(&expected, 2),
            exact: computed == expected,
        };
        self.finish(p, s)
    }

    /// Cases, total, interior and theorem components for `(setting, l)`,
    /// plus the checkpoint integrands when `l = 2`.
    pub fn audit(&mut self, setting: Setting, l: usize) -> Result<Vec<VerificationReport>> {
        let mut out = Vec::new();
        for label in CaseLabel::ALL {
            out.push(self.case_report(setting, label, l)?);
        }
        out.push(self.total_report(setting, l)?);
        out.push(self.interior_report(setting, l)?);
        out.extend(self.theorem_report(setting, l)?);
        if l == 2 {
            for cp in Checkpoint::ALL.into_iter().filter(|c| c.setting() == setting) {
                out.push(self.checkpoint_report(cp)?);
            }
        }
        Ok(out)
    }
}

/// Audit against the transcribed table.
pub fn audit(setting: Setting, l: usize, cfg: OracleConfig) -> Result<Vec<VerificationReport>> {
    Auditor::new(ExpectedTable::transcribed(), cfg)?.audit(setting, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> OracleConfig {
        OracleConfig {
            trials: 3,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn dim4_l2_audit() {
        let r = audit(Setting::Dim4, 2, quick()).unwrap();
        let get = |id: &str| r.iter().find(|x| x.id == id).unwrap();
        assert!(get("dim4.aIII.l2").exact_match);
        assert!(get("dim4.total.l2").exact_match);
        assert!(get("dim4.b.e2_integrand").exact_match);
        let aii = get("dim4.aII.l2");
        assert!(!aii.exact_match);
        assert_eq!(aii.supports, Support::Engine);
        assert!(aii.note.contains("supports the engine"));
    }

    #[test]
    fn report_json_round_trip() {
        let mut a = Auditor::new(ExpectedTable::transcribed(), quick()).unwrap();
        let r = a.case_report(Setting::Dim4, CaseLabel::C, 2).unwrap();
        let j = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
        assert!(j.contains("\"setting\":\"dim4\""));
    }

    #[test]
    fn corrupted_entry_is_flagged() {
        let mut t = ExpectedTable::transcribed();
        t.override_text("dim4.c.l2", "h1*g(X1,X2)*pi*Omega").unwrap();
        let mut a = Auditor::new(t, quick()).unwrap();
        let r = a.case_report(Setting::Dim4, CaseLabel::C, 2).unwrap();
        assert!(!r.exact_match);
        assert_eq!(r.supports, Support::Engine);
    }

    #[test]
    fn odd_l_is_all_zero() {
        let r = audit(Setting::Dim4, 3, quick()).unwrap();
        assert!(r.iter().all(|x| x.exact_match && x.computed == "0"));
    }
}
