//! Printed values, transcribed as DSL text.
//!
//! Entries are copied as printed, including apparent typos; the audit
//! decides which side is right. Nothing here calls into the pipeline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clifford::trace_identity;
use crate::dsl::{parse_poly, parse_symbol, ExactSymbol};
use crate::error::{Error, Result};
use crate::pipeline::{CaseLabel, Checkpoint, Setting};
use crate::poly::{Atom, Poly};
use crate::ExactPoly;

/// What an entry describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// `tr[c(X_1)...c(X_l)]`, valid in any rank.
    Trace { l: usize },
    /// Closed-manifold residue of `L (D^2)^{-(n-2)/2}`.
    Closed { n: usize, l: usize },
    /// Super residue `Swres[(D^2)^{-(n-2)/2}]`.
    Super { n: usize },
    Interior { setting: Setting, l: usize },
    Case { setting: Setting, label: CaseLabel, l: usize },
    Total { setting: Setting, l: usize },
    TheoremInterior { setting: Setting, l: usize },
    TheoremBoundary { setting: Setting, l: usize },
    Checkpoint(Checkpoint),
}

impl Quantity {
    /// Rank in which the text is evaluated; `None` for rank-free traces.
    pub fn rank(&self) -> Option<usize> {
        match *self {
            Quantity::Trace { .. } => None,
            Quantity::Closed { n, .. } | Quantity::Super { n } => Some(n),
            Quantity::Interior { setting, .. }
            | Quantity::Case { setting, .. }
            | Quantity::Total { setting, .. }
            | Quantity::TheoremInterior { setting, .. }
            | Quantity::TheoremBoundary { setting, .. } => Some(setting.n()),
            Quantity::Checkpoint(cp) => Some(cp.setting().n()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEntry {
    pub id: String,
    pub quantity: Quantity,
    pub text: String,
}

pub fn trace_id(l: usize) -> String {
    format!("trace.l{l}")
}

pub fn closed_id(n: usize, l: usize) -> String {
    format!("closed.n{n}.l{l}")
}

pub fn super_id(n: usize) -> String {
    format!("closed.n{n}.super")
}

pub fn interior_id(setting: Setting, l: usize) -> String {
    format!("{setting}.interior.l{l}")
}

pub fn case_id(setting: Setting, label: CaseLabel, l: usize) -> String {
    format!("{setting}.{label}.l{l}")
}

pub fn total_id(setting: Setting, l: usize) -> String {
    format!("{setting}.total.l{l}")
}

pub fn theorem_interior_id(setting: Setting, l: usize) -> String {
    format!("{setting}.theorem.l{l}.interior")
}

pub fn theorem_boundary_id(setting: Setting, l: usize) -> String {
    format!("{setting}.theorem.l{l}.boundary")
}

const G12: &str = "g(X1,X2)";

/// The four-vector bracket.
const B4: &str = "(g(X1,X2)*g(X3,X4)-g(X1,X3)*g(X2,X4)+g(X1,X4)*g(X2,X3))";

/// The six-vector bracket as printed in the closed-manifold trace and in
/// every dimension-6 display.
const W6: &str = "(g(X1,X2)*(g(X3,X5)*g(X4,X6)-g(X3,X6)*g(X4,X5)-g(X3,X4)*g(X5,X6))\
 + g(X1,X3)*(g(X2,X4)*g(X5,X6)-g(X2,X6)*g(X4,X5)-g(X2,X5)*g(X3,X6))\
 + g(X1,X4)*(g(X2,X5)*g(X3,X6)-g(X2,X6)*g(X3,X5)-g(X2,X3)*g(X5,X6))\
 + g(X1,X5)*(g(X2,X6)*g(X3,X4)-g(X2,X4)*g(X3,X6)-g(X2,X3)*g(X4,X6))\
 + g(X1,X6)*(g(X2,X4)*g(X3,X5)-g(X2,X5)*g(X3,X4)-g(X2,X3)*g(X4,X5)))";

/// The interior display groups the first bracket differently.
const W6_INTERIOR: &str = "(g(X1,X2)*(g(X3,X5)*g(X4,X6)-g(X3,X6)*g(X4,X5))-g(X1,X2)*g(X3,X4)*g(X5,X6)\
 + g(X1,X3)*(g(X2,X4)*g(X5,X6)-g(X2,X6)*g(X4,X5)-g(X2,X5)*g(X3,X6))\
 + g(X1,X4)*(g(X2,X5)*g(X3,X6)-g(X2,X6)*g(X3,X5)-g(X2,X3)*g(X5,X6))\
 + g(X1,X5)*(g(X2,X6)*g(X3,X4)-g(X2,X4)*g(X3,X6)-g(X2,X3)*g(X4,X6))\
 + g(X1,X6)*(g(X2,X4)*g(X3,X5)-g(X2,X5)*g(X3,X4)-g(X2,X3)*g(X4,X5)))";

/// The six-vector total: one factor is printed as `g(X2,X5)(X3,X6)`, read
/// here as a product of two inner products.
const W6_TOTAL: &str = "(g(X1,X2)*(g(X3,X5)*g(X4,X6)-g(X3,X6)*g(X4,X5)-g(X3,X4)*g(X5,X6))\
 + g(X1,X3)*(g(X2,X4)*g(X5,X6)-g(X2,X6)*g(X4,X5)-g(X2,X5)*g(X3,X6)) + g(X1,X4)\
 *(g(X2,X5)*g(X3,X6)-g(X2,X6)*g(X3,X5)-g(X2,X3)*g(X5,X6)) + g(X1,X5)*(g(X2,X6)\
 *g(X3,X4)-g(X2,X4)*g(X3,X6)-g(X2,X3)*g(X4,X6)) + g(X1,X6)*(g(X2,X4)*g(X3,X5)\
 -g(X2,X5)*g(X3,X4)-g(X2,X3)*g(X4,X5)))";

/// The dimension-4, `l = 4` derivative bracket of the `a II` case.
const PHI2_L4: &str = "(-1/2*dxn(g(X1,X3)*g(X2,X4)-g(X1,X4)*g(X2,X3)-g(X1,X2)*g(X3,X4))\
 + 3/8*h1*(g(X1,X4)*g(X2,X3)-g(X1,X2)*g(X3,X4)+g(X1,X3)*g(X2,X4)))";

/// `(n-2)(4 pi)^{n/2} / (n/2-1)!` at the two ranks.
fn closed_constant(n: usize) -> &'static str {
    match n {
        4 => "2*(4*pi)^2/1",
        6 => "4*(4*pi)^3/2",
        _ => unreachable!("closed-manifold entries exist for n = 4, 6"),
    }
}

/// All transcriptions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedTable {
    entries: BTreeMap<String, ExpectedEntry>,
}

impl ExpectedTable {
    pub fn transcribed() -> Self {
        let mut t = ExpectedTable {
            entries: BTreeMap::new(),
        };
        let pw = "*pi*Omega";

        t.add(trace_id(2), Quantity::Trace { l: 2 }, format!("-{G12}*tr_id"));
        t.add(trace_id(4), Quantity::Trace { l: 4 }, format!("{B4}*tr_id"));
        t.add(trace_id(6), Quantity::Trace { l: 6 }, format!("{W6}*tr_id"));

        for n in [4, 6] {
            let c = closed_constant(n);
            t.add(super_id(n), Quantity::Super { n }, "0".into());
            t.add(closed_id(n, 2), Quantity::Closed { n, l: 2 }, format!("{c}*1/12*{G12}*s*tr_id"));
            t.add(closed_id(n, 4), Quantity::Closed { n, l: 4 }, format!("{c}*(-1/12)*{B4}*s*tr_id"));
        }
        t.add(closed_id(6, 6), Quantity::Closed { n: 6, l: 6 }, format!("{}*(-1/12)*{W6}*s*tr_id", closed_constant(6)));

        let d4 = Setting::Dim4;
        let interior4 = [
            (2, format!("32*pi^2*(1/3*{G12}*s)")),
            (4, format!("32*pi^2*(-1/3*{B4}*s)")),
        ];
        let d6 = Setting::Dim6;
        let interior6 = [
            (2, format!("128*pi^2*(2/3*{G12}*s)")),
            (4, format!("128*pi^2*(-2/3*{B4}*s)")),
            (6, format!("128*pi^2*(-2/3*{W6_INTERIOR}*s)")),
        ];
        for (setting, rows) in [(d4, &interior4[..]), (d6, &interior6[..])] {
            for l in 1..=setting.n() {
                let text = rows.iter().find(|(m, _)| *m == l).map_or("0".to_string(), |(_, s)| s.clone());
                t.add(interior_id(setting, l), Quantity::Interior { setting, l }, text.clone());
                t.add(theorem_interior_id(setting, l), Quantity::TheoremInterior { setting, l }, text);
            }
        }

        use CaseLabel::*;
        let cases4: Vec<(CaseLabel, usize, String)> = vec![
            (AI, 2, "0".into()),
            (AI, 4, "0".into()),
            (AII, 2, format!("(-dxn({G12})/2-3*h1*{G12}/8){pw}")),
            (AII, 4, format!("{PHI2_L4}{pw}")),
            (AIII, 2, format!("-3*h1/8*{G12}{pw}")),
            (AIII, 4, format!("3*h1/8*{B4}{pw}")),
            (B, 2, format!("-9*h1/8*{G12}{pw}")),
            (B, 4, format!("9*h1/8*{B4}{pw}")),
            (C, 2, format!("9*h1/8*{G12}{pw}")),
            (C, 4, format!("-9*h1/8*{B4}{pw}")),
        ];
        let cases6: Vec<(CaseLabel, usize, String)> = vec![
            (AI, 2, "0".into()),
            (AI, 4, "0".into()),
            (AI, 6, "0".into()),
            (AII, 2, format!("(5*h1/8*{G12}-dxn({G12})){pw}")),
            (AII, 4, format!("(-5*h1/8*{B4}+dxn({B4})){pw}")),
            (AII, 6, format!("(-5*h1/8*{W6}+dxn({W6})){pw}")),
            (AIII, 2, format!("-5*h1/8*{G12}{pw}")),
            (AIII, 4, format!("5*h1/8*{B4}{pw}")),
            (AIII, 6, format!("5*h1/8*{W6}{pw}")),
            (B, 2, format!("15*h1/8*{G12}{pw}")),
            (B, 4, format!("-15*h1/8*{B4}{pw}")),
            (B, 6, format!("-15*h1/8*{W6}{pw}")),
            (C, 2, format!("-15*h1/8*{G12}{pw}")),
            (C, 4, format!("15*h1/8*{B4}{pw}")),
            (C, 6, format!("15*h1/8*{W6}{pw}")),
        ];
        let totals4 = [
            (2, format!("-dxn({G12})/2{pw}")),
            (4, format!("dxn{B4}/2{pw}")),
        ];
        let totals6 = [
            (2, format!("-dxn({G12}){pw}")),
            (4, format!("dxn{B4}{pw}")),
            (6, format!("dxn{W6_TOTAL}{pw}")),
        ];
        let theorem4 = [
            (2, format!("-(1/2*dxn({G12})){pw}")),
            (4, format!("(1/2*dxn{B4}){pw}")),
        ];
        let theorem6 = [
            (2, format!("(-dxn({G12})){pw}")),
            (4, format!("(dxn{B4}){pw}")),
            (6, format!("(dxn{W6}){pw}")),
        ];
        for (setting, cases, totals, theorem) in [
            (d4, &cases4, &totals4[..], &theorem4[..]),
            (d6, &cases6, &totals6[..], &theorem6[..]),
        ] {
            for l in 1..=setting.n() {
                for label in CaseLabel::ALL {
                    let text = cases
                        .iter()
                        .find(|(c, m, _)| *c == label && *m == l)
                        .map_or("0".to_string(), |(_, _, s)| s.clone());
                    t.add(case_id(setting, label, l), Quantity::Case { setting, label, l }, text);
                }
                let pick = |rows: &[(usize, String)]| {
                    rows.iter().find(|(m, _)| *m == l).map_or("0".to_string(), |(_, s)| s.clone())
                };
                t.add(total_id(setting, l), Quantity::Total { setting, l }, pick(totals));
                t.add(theorem_boundary_id(setting, l), Quantity::TheoremBoundary { setting, l }, pick(theorem));
            }
        }

        let checkpoints = [
            (
                Checkpoint::Dim4AII,
                format!(
                    "4*(3*xin^2*i-xin^3-3*xin+i)/((xin-i)^4*(xin+i)^3)*dxn({G12})\
                     + 2*h1*(8*xin^3*i+5*xin*i+3+11*xin^2-xin^3)/((xin-i)^5*(xin+i)^3)*{G12}"
                ),
            ),
            (
                Checkpoint::Dim4AIII,
                format!("2*h1*(-5*i*xin+3*xin^2+xin^3*i+1)/((xin-i)^5*(xin+i)^3)*{G12}"),
            ),
            (
                Checkpoint::Dim4BE2,
                format!("-2*i*h1*(-i*xin^2-xin+4*i)/(4*(xin-i)^3*(xin+i)^2)*{G12}"),
            ),
            (
                Checkpoint::Dim4BE1,
                format!(
                    "-3*h1*i/(2*(xin-i)^2*(xin+i)^2)*{G12}\
                     - (xin^2-i*xin-2)*h1/(2*(xin-i)^3*(xin+i)^2)*{G12}"
                ),
            ),
            (
                Checkpoint::Dim4C,
                format!(
                    "-12*h1*i*xin/((xin-i)^3*(xin+i)^4)*{G12}\
                     - 3*h1*(i*xin^2+xin-2*i)/((xin-i)^3*(xin+i)^3)*{G12}"
                ),
            ),
            (
                Checkpoint::Dim6AII,
                format!(
                    "8*i*(3*xin^2-1)/((xin-i)^4*(xin+i)^3)*dxn({G12})\
                     - 4*h1*(i*xin+2)*(3*xin^2-1)/((xin-i)^5*(xin+i)^3)*{G12}"
                ),
            ),
            (
                Checkpoint::Dim6AIII,
                // the second factor is printed as (xi+i)^2; read as xi_n
                format!("-8*h1*i/((xin-i)^5*(xin+i)^2)*{G12}"),
            ),
            (
                Checkpoint::Dim6B,
                format!("-2*h1*xin*(5*xin^2-1)/((xin-i)^5*(xin+i)^3)*{G12}"),
            ),
            (
                Checkpoint::Dim6C,
                format!("-8*i*h1*xin^2*(9+5*xin^2)/(1+xin^2)^5*{G12}"),
            ),
        ];
        for (cp, text) in checkpoints {
            t.add(cp.id().to_string(), Quantity::Checkpoint(cp), text);
        }
        t
    }

    fn add(&mut self, id: String, quantity: Quantity, text: String) {
        let prev = self.entries.insert(id.clone(), ExpectedEntry { id, quantity, text });
        debug_assert!(prev.is_none(), "duplicate expected id");
    }

    pub fn get(&self, id: &str) -> Option<&ExpectedEntry> {
        self.entries.get(id)
    }

    pub fn entries(&self) -> impl Iterator<Item = &ExpectedEntry> {
        self.entries.values()
    }

    fn entry(&self, id: &str) -> Result<&ExpectedEntry> {
        self.get(id)
            .ok_or_else(|| Error::InvalidArgument(format!("no expected entry `{id}`")))
    }

    /// Replaces the text of an existing entry; the new text must parse.
    pub fn override_text(&mut self, id: &str, text: &str) -> Result<()> {
        let rank = self.entry(id)?.quantity.rank().unwrap_or(6);
        parse_symbol(text, rank)?;
        let e = self.entries.get_mut(id).expect("checked above");
        e.text = text.to_string();
        Ok(())
    }

    /// The transcribed table with overrides from a JSON object
    /// `{ "<id>": "<text>", ... }`.
    pub fn with_overrides_json(json: &str) -> Result<Self> {
        let map: BTreeMap<String, String> = serde_json::from_str(json)
            .map_err(|e| Error::InvalidArgument(format!("expected-table fixture: {e}")))?;
        let mut t = Self::transcribed();
        for (id, text) in &map {
            t.override_text(id, text)?;
        }
        Ok(t)
    }

    /// Polynomial value in rank `n`, with `tr_id` replaced by `2^{n/2}`.
    pub fn poly_in_rank(&self, id: &str, n: usize) -> Result<ExactPoly> {
        let e = self.entry(id)?;
        let p = parse_poly(&e.text, n)?;
        Ok(p.substitute(Atom::TrId, &Poly::from_i64(trace_identity(n))))
    }

    /// Polynomial value in the entry's own rank.
    pub fn poly(&self, id: &str) -> Result<ExactPoly> {
        let e = self.entry(id)?;
        let n = e.quantity.rank().ok_or_else(|| {
            Error::InvalidArgument(format!("`{id}` is rank-free; use poly_in_rank"))
        })?;
        self.poly_in_rank(id, n)
    }

    /// Checkpoint integrand as a restricted scalar symbol.
    pub fn symbol(&self, id: &str) -> Result<ExactSymbol> {
        let e = self.entry(id)?;
        let n = e.quantity.rank().unwrap_or(6);
        Ok(parse_symbol(&e.text, n)?.restrict())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::inner_product;

    #[test]
    fn every_entry_parses() {
        let t = ExpectedTable::transcribed();
        for e in t.entries() {
            match e.quantity {
                Quantity::Checkpoint(_) => {
                    t.symbol(&e.id).unwrap();
                }
                Quantity::Trace { .. } => {
                    t.poly_in_rank(&e.id, 6).unwrap();
                }
                _ => {
                    t.poly(&e.id).unwrap();
                }
            }
        }
    }

    #[test]
    fn table_shape() {
        let t = ExpectedTable::transcribed();
        // 3 traces, 5 closed, 2 super, per setting: n interior, n theorem
        // interior, 5n cases, n totals, n theorem boundary; 9 checkpoints
        assert_eq!(t.entries().count(), 3 + 5 + 2 + 9 * 4 + 9 * 6 + 9);
        assert!(t.get("dim4.aII.l2").is_some());
        assert!(t.get("dim6.c.l6").is_some());
    }

    #[test]
    fn simple_values() {
        let t = ExpectedTable::transcribed();
        let g: ExactPoly = inner_product(1, 2, 4);
        assert_eq!(t.poly_in_rank("trace.l2", 4).unwrap(), g.scale(&(-4).into()));
        assert!(t.poly("dim4.aI.l2").unwrap().is_zero());
        let c = t.poly("closed.n4.l2").unwrap();
        let want = &(&g * &parse_poly("32/3*pi^2*s", 4).unwrap()) * &Poly::one();
        assert_eq!(c, want);
    }

    #[test]
    fn overrides_validate() {
        let mut t = ExpectedTable::transcribed();
        t.override_text("dim4.aIII.l2", "-5/8*h1*g(X1,X2)*pi*Omega").unwrap();
        assert!(t.override_text("dim4.aIII.l2", "(((").is_err());
        assert!(t.override_text("nope", "0").is_err());
        let j = ExpectedTable::with_overrides_json(r#"{"dim4.b.l2": "0"}"#).unwrap();
        assert!(j.poly("dim4.b.l2").unwrap().is_zero());
        assert!(ExpectedTable::with_overrides_json("[1]").is_err());
    }

    use num_traits::{One, Zero};
}
