//! Readable forms of engine results and LaTeX emission.
//!
//! Word-length-`l` results are polynomials in the frame components `a`,
//! `da`. [`pairing_form`] rewrites them over products of inner products
//! `g(X_a, X_b)` along perfect matchings and their normal derivatives,
//! and checks the rewrite by expanding it again.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::audit::VerificationReport;
use crate::dsl::{parse_poly, ExactSymbol};
use crate::error::{Error, Result};
use crate::pipeline::Setting;
use crate::poly::{d_normal_vectors, inner_product, Atom, CoeffDisplay, Monomial, Poly};
use crate::{ExactPoly, GaussRat};

/// One summand `coeff * prod g(X_a, X_b)`, or its normal derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct PairTerm {
    pub matching: Vec<(u8, u8)>,
    pub derivative: bool,
    pub coeff: ExactPoly,
}

/// All perfect matchings of `1..=l`, each sorted by first element.
pub fn matchings(l: usize) -> Vec<Vec<(u8, u8)>> {
    fn go(rest: &[u8], acc: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let a = rest[0];
        for k in 1..rest.len() {
            let b = rest[k];
            let mut next: Vec<u8> = rest[1..].to_vec();
            next.remove(k - 1);
            acc.push((a, b));
            go(&next, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if l % 2 == 0 {
        let idx: Vec<u8> = (1..=l as u8).collect();
        go(&idx, &mut Vec::new(), &mut out);
    }
    out
}

fn is_frame(a: Atom) -> bool {
    matches!(a, Atom::A(..) | Atom::DA(..))
}

fn pairing_product(m: &[(u8, u8)], n: usize) -> ExactPoly {
    m.iter()
        .fold(Poly::one(), |acc, &(a, b)| &acc * &inner_product(a, b, n))
}

/// The monomial that only `prod g` (or its derivative) along `m` contains:
/// pair `p` uses frame component `p + 1`.
fn witness(m: &[(u8, u8)], derivative: bool) -> Monomial {
    Monomial::from_pairs(m.iter().enumerate().flat_map(|(p, &(a, b))| {
        let k = p as u8 + 1;
        let first = if derivative && p == 0 { Atom::DA(a, k) } else { Atom::A(a, k) };
        [(first, 1u16), (Atom::A(b, k), 1u16)]
    }))
}

/// Rewrites `p` in the matching basis; `None` if `p` is not of that shape
/// (the expansion check fails) or if the rank is too small for the basis
/// to be independent.
pub fn pairing_form(p: &ExactPoly, n: usize, l: usize) -> Option<Vec<PairTerm>> {
    if l / 2 > n {
        return None;
    }
    // frame part of each monomial -> remaining coefficient polynomial
    let mut split: BTreeMap<Monomial, ExactPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (frame, rest): (Vec<_>, Vec<_>) = m.factors().iter().copied().partition(|(a, _)| is_frame(*a));
        split
            .entry(Monomial::from_pairs(frame))
            .or_default()
            .add_term(Monomial::from_pairs(rest), c);
    }
    let mut terms = Vec::new();
    let mut rebuilt = ExactPoly::zero();
    for m in matchings(l) {
        for derivative in [false, true] {
            if derivative && m.is_empty() {
                continue;
            }
            let Some(c) = split.get(&witness(&m, derivative)) else {
                continue;
            };
            let mut basis = pairing_product(&m, n);
            if derivative {
                basis = d_normal_vectors(&basis).ok()?;
            }
            rebuilt.add_assign_poly(&(&basis * c));
            terms.push(PairTerm {
                matching: m.clone(),
                derivative,
                coeff: c.clone(),
            });
        }
    }
    (rebuilt == *p).then_some(terms)
}

fn pairing_text(m: &[(u8, u8)]) -> String {
    m.iter()
        .map(|(a, b)| format!("g(X{a},X{b})"))
        .collect::<Vec<_>>()
        .join("*")
}

/// DSL text of a matching-basis form; parses back to the same polynomial.
pub fn pairing_dsl(terms: &[PairTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        let g = if t.matching.is_empty() {
            String::new()
        } else if t.derivative {
            format!("dxn({})", pairing_text(&t.matching))
        } else {
            pairing_text(&t.matching)
        };
        let (neg, body) = if t.coeff.len() == 1 {
            let (m, c) = t.coeff.terms().next().expect("one term");
            let (neg, mag) = c.split_sign();
            let mut parts: Vec<String> = mag.into_iter().collect();
            if !m.is_one() {
                parts.push(m.to_string());
            }
            if !g.is_empty() {
                parts.push(g);
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            (neg, parts.join("*"))
        } else if g.is_empty() {
            (false, format!("({})", t.coeff))
        } else {
            (false, format!("({})*{g}", t.coeff))
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Readable text for a result polynomial: the matching form when it
/// applies, the canonical expansion otherwise.
pub fn readable_poly(p: &ExactPoly, n: usize, l: usize) -> String {
    match pairing_form(p, n, l) {
        Some(t) => pairing_dsl(&t),
        None => p.to_string(),
    }
}

/// Readable text for a restricted scalar symbol whose numerator is a
/// word-length-`l` polynomial.
pub fn readable_symbol(s: &ExactSymbol, l: usize) -> String {
    let n = s.rank();
    let scalar = s.num().terms().all(|(m, _)| m == 0);
    if !scalar || s.is_zero() {
        return s.to_string();
    }
    let num = readable_poly(&s.num().coeff(0), n, l);
    let mut den = Vec::new();
    for (e, f) in [(s.p(), "(xin-i)"), (s.q(), "(xin+i)")] {
        match e {
            0 => {}
            1 => den.push(f.to_string()),
            e => den.push(format!("{f}^{e}")),
        }
    }
    match den.len() {
        0 => num,
        1 => format!("({num})/{}", den[0]),
        _ => format!("({num})/({})", den.join("*")),
    }
}

fn latex_rational(r: &num_rational::BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_atom(a: Atom, setting: Setting) -> String {
    match a {
        Atom::HPrime => "h'(0)".into(),
        Atom::SCurv => "s".into(),
        Atom::Pi => "\\pi".into(),
        Atom::Omega => match setting {
            Setting::Dim4 => "\\Omega_3".into(),
            Setting::Dim6 => "\\Omega_4".into(),
        },
        Atom::XiN => "\\xi_n".into(),
        Atom::TrId => "\\mathrm{tr}[\\mathrm{id}]".into(),
        Atom::G(a, b) => format!("g(X_{a},X_{b})"),
        Atom::A(j, k) => format!("a_{{{j}{k}}}"),
        Atom::DA(j, k) => format!("\\partial_{{x_n}}a_{{{j}{k}}}"),
        Atom::Xi(k) => format!("\\xi_{k}"),
    }
}

fn latex_monomial(m: &Monomial, setting: Setting) -> String {
    m.factors()
        .iter()
        .map(|&(a, e)| match e {
            1 => latex_atom(a, setting),
            e => format!("{}^{{{e}}}", latex_atom(a, setting)),
        })
        .collect::<Vec<_>>()
        .join("")
}

/// `(negative, body)` of `c * m` for a real coefficient.
fn latex_term(c: &GaussRat, m: &Monomial, setting: Setting) -> Result<(bool, String)> {
    if !c.is_real() {
        return Err(Error::InvalidArgument(format!("non-real coefficient {c}")));
    }
    let neg = c.re().is_negative();
    let mag = c.re().abs();
    let mono = latex_monomial(m, setting);
    let body = match (mag.is_one(), mono.is_empty()) {
        (true, true) => "1".into(),
        (true, false) => mono,
        (false, _) => format!("{}{mono}", latex_rational(&mag)),
    };
    Ok((neg, body))
}

fn latex_poly(p: &ExactPoly, setting: Setting) -> Result<String> {
    if p.is_zero() {
        return Ok("0".into());
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let (neg, body) = latex_term(c, m, setting)?;
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    Ok(out)
}

fn latex_pairing(m: &[(u8, u8)]) -> String {
    m.iter().map(|(a, b)| format!("g(X_{a},X_{b})")).collect()
}

/// LaTeX for a result polynomial in the matching basis when possible.
pub fn latex_result(p: &ExactPoly, setting: Setting, l: usize) -> Result<String> {
    let Some(terms) = pairing_form(p, setting.n(), l) else {
        return latex_poly(p, setting);
    };
    if terms.is_empty() {
        return Ok("0".into());
    }
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        let g = if t.matching.is_empty() {
            String::new()
        } else if t.derivative {
            format!("\\partial_{{x_n}}[{}]", latex_pairing(&t.matching))
        } else {
            latex_pairing(&t.matching)
        };
        let (neg, body) = if t.coeff.len() == 1 {
            let (m, c) = t.coeff.terms().next().expect("one term");
            let (neg, mut body) = latex_term(c, m, setting)?;
            if body == "1" && !g.is_empty() {
                body.clear();
            }
            if !body.is_empty() && !g.is_empty() {
                body.push_str("\\,");
            }
            (neg, body + &g)
        } else {
            (false, format!("\\left({}\\right){g}", latex_poly(&t.coeff, setting)?))
        };
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    Ok(out)
}

fn operator(setting: Setting) -> &'static str {
    match setting {
        Setting::Dim4 => "\\widetilde{\\mathrm{Wres}}[\\pi^+(LD^{-1})\\circ\\pi^+D^{-1}]",
        Setting::Dim6 => "\\widetilde{\\mathrm{Wres}}[\\pi^+(LD^{-2})\\circ\\pi^+D^{-2}]",
    }
}

/// The theorem display for one `(setting, l)`.
pub fn theorem_latex(setting: Setting, l: usize, interior: &ExactPoly, boundary: &ExactPoly) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "% {setting}, l = {l}").expect("string write");
    writeln!(s, "\\begin{{equation*}}").expect("string write");
    let lhs = operator(setting);
    if interior.is_zero() && boundary.is_zero() {
        writeln!(s, "{lhs} = 0").expect("string write");
    } else {
        let i = latex_result(interior, setting, l)?;
        let b = latex_result(boundary, setting, l)?;
        writeln!(
            s,
            "{lhs} = \\int_M \\left({i}\\right) d\\mathrm{{Vol}}_M + \\int_{{\\partial M}} \\left({b}\\right) d\\mathrm{{Vol}}_{{\\partial M}}"
        )
        .expect("string write");
    }
    writeln!(s, "\\end{{equation*}}").expect("string write");
    Ok(s)
}

/// LaTeX for every `(setting, l)` whose two theorem components are in the
/// report set, using the engine's side of each report.
pub fn emit_latex(reports: &[VerificationReport]) -> Result<String> {
    let mut groups: BTreeMap<(u8, usize), (Option<ExactPoly>, Option<ExactPoly>)> = BTreeMap::new();
    for r in reports {
        let setting = r.setting;
        let slot = groups.entry((setting.n() as u8, r.l)).or_default();
        let p = || parse_poly(&r.computed, setting.n());
        match r.case.as_str() {
            "theorem.interior" => slot.0 = Some(p()?),
            "theorem.boundary" => slot.1 = Some(p()?),
            _ => {}
        }
    }
    let mut out = String::new();
    for ((n, l), (i, b)) in groups {
        if let (Some(i), Some(b)) = (i, b) {
            out.push_str(&theorem_latex(Setting::from_dim(n as usize)?, l, &i, &b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{boundary_case, boundary_total, interior_term, CaseLabel};

    #[test]
    fn matching_counts() {
        assert_eq!(matchings(0).len(), 1);
        assert_eq!(matchings(2), vec![vec![(1, 2)]]);
        assert_eq!(matchings(4).len(), 3);
        assert_eq!(matchings(6).len(), 15);
        assert!(matchings(3).is_empty());
    }

    #[test]
    fn dim4_aii_readable() {
        let p = boundary_case::<GaussRat>(Setting::Dim4, CaseLabel::AII, 2).unwrap();
        let s = readable_poly(&p, 4, 2);
        assert_eq!(s, "3/8*h1*pi*Omega*g(X1,X2) - 1/2*pi*Omega*dxn(g(X1,X2))");
        assert_eq!(parse_poly(&s, 4).unwrap(), p);
    }

    #[test]
    fn readable_round_trips() {
        for setting in Setting::ALL {
            for l in 1..=setting.n() {
                for p in [
                    boundary_total::<GaussRat>(setting, l).unwrap(),
                    interior_term::<GaussRat>(setting, l).unwrap(),
                ] {
                    let t = pairing_form(&p, setting.n(), l).expect("matching form");
                    assert_eq!(parse_poly(&pairing_dsl(&t), setting.n()).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn non_pairing_polynomial_falls_back() {
        let p: ExactPoly = Poly::atom(Atom::A(1, 1));
        assert!(pairing_form(&p, 4, 2).is_none());
        assert_eq!(readable_poly(&p, 4, 2), "a(1,1)");
    }

    #[test]
    fn latex_theorem_dim4_l2() {
        let s = Setting::Dim4;
        let i = interior_term::<GaussRat>(s, 2).unwrap();
        let b = boundary_total::<GaussRat>(s, 2).unwrap();
        let t = theorem_latex(s, 2, &i, &b).unwrap();
        assert!(t.contains("\\frac{32}{3}s\\pi^{2}\\,g(X_1,X_2)"), "{t}");
        assert!(t.contains("-\\frac{1}{2}\\pi\\Omega_3\\,\\partial_{x_n}[g(X_1,X_2)]"), "{t}");
    }

    #[test]
    fn latex_odd_is_zero() {
        let s = Setting::Dim4;
        let z = ExactPoly::zero();
        let t = theorem_latex(s, 1, &z, &z).unwrap();
        assert!(t.contains("= 0"));
    }
}
