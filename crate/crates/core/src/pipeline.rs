//! Interior terms and the five boundary cases for the two shipped settings.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford::{vector_field, vector_word, wick_trace, Clifford};
use crate::error::{Error, Result};
use crate::poly::{d_normal_vectors, Atom, Poly};
use crate::scalar::Scalar;
use crate::symbol::{xi_tangential_sq, BoundarySymbol};
use crate::symbols::{apply_l, build_symbol, c_dxn, c_xi, c_xi_tangential, SymbolName};

type Num<S> = Clifford<Poly<S>>;

/// `Dim4`: `pi^+(L D^{-1}) o pi^+(D^{-1})` in dimension 4.
/// `Dim6`: `pi^+(L D^{-2}) o pi^+(D^{-2})` in dimension 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Setting {
    #[serde(rename = "dim4")]
    Dim4,
    #[serde(rename = "dim6")]
    Dim6,
}

impl Setting {
    pub const ALL: [Setting; 2] = [Setting::Dim4, Setting::Dim6];

    pub fn n(self) -> usize {
        match self {
            Setting::Dim4 => 4,
            Setting::Dim6 => 6,
        }
    }

    pub fn from_dim(n: usize) -> Result<Self> {
        match n {
            4 => Ok(Setting::Dim4),
            6 => Ok(Setting::Dim6),
            _ => Err(Error::InvalidArgument(format!("no pipeline for dimension {n}"))),
        }
    }

    /// Orders available for the symbols, highest first.
    pub fn orders(self) -> [i32; 2] {
        match self {
            Setting::Dim4 => [-1, -2],
            Setting::Dim6 => [-2, -3],
        }
    }

    /// Required value of `r + l - k - j - |alpha|`.
    pub fn order_sum(self) -> i32 {
        1 - self.n() as i32
    }

    pub fn symbol_name(self, order: i32) -> Result<SymbolName> {
        match (self, order) {
            (Setting::Dim4, -1) => Ok(SymbolName::DInvM1),
            (Setting::Dim4, -2) => Ok(SymbolName::DInvM2),
            (Setting::Dim6, -2) => Ok(SymbolName::DInv2M2),
            (Setting::Dim6, -3) => Ok(SymbolName::DInv2M3),
            _ => Err(Error::InvalidArgument(format!("order {order} not available in {self}"))),
        }
    }

    pub fn symbol<S: Scalar>(self, order: i32) -> Result<BoundarySymbol<S>> {
        build_symbol(self.symbol_name(order)?, self.n())
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Dim4 => "dim4",
            Setting::Dim6 => "dim6",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "aI")]
    AI,
    #[serde(rename = "aII")]
    AII,
    #[serde(rename = "aIII")]
    AIII,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 5] = [
        CaseLabel::AI,
        CaseLabel::AII,
        CaseLabel::AIII,
        CaseLabel::B,
        CaseLabel::C,
    ];

    /// Position in the case list, from 1.
    pub fn index(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::AI => "aI",
            CaseLabel::AII => "aII",
            CaseLabel::AIII => "aIII",
            CaseLabel::B => "b",
            CaseLabel::C => "c",
        })
    }
}

impl FromStr for CaseLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseLabel::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case {s}")))
    }
}

/// One term of the boundary sum: symbol orders and derivative counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub setting: Setting,
    pub r: i32,
    pub ell: i32,
    pub k: u32,
    pub j: u32,
    pub alpha: u32,
    pub label: CaseLabel,
}

impl CaseSpec {
    pub fn satisfies_order_sum(&self) -> bool {
        self.r + self.ell - (self.k + self.j + self.alpha) as i32 == self.setting.order_sum()
    }

    /// `(-i)^{|alpha|+j+k+1} / (alpha! (j+k+1)!)`.
    pub fn factor<S: Scalar>(&self) -> S {
        let m = self.alpha + self.j + self.k + 1;
        let mut den = 1i64;
        for t in 2..=(self.j + self.k + 1) as i64 {
            den *= t;
        }
        (-S::imag_unit()).powi(m).mul_ref(&S::from_ratio(1, den))
    }
}

/// The cases of the sum rule, derived from the available orders.
pub fn enumerate_cases(setting: Setting) -> Vec<CaseSpec> {
    let mut out = Vec::new();
    let orders = setting.orders();
    for r in orders {
        for ell in orders {
            let total = r + ell - setting.order_sum();
            if total < 0 {
                continue;
            }
            for alpha in 0..=total as u32 {
                for j in 0..=(total as u32 - alpha) {
                    let k = total as u32 - alpha - j;
                    let label = match (alpha, j, k) {
                        (1, 0, 0) => CaseLabel::AI,
                        (0, 1, 0) => CaseLabel::AII,
                        (0, 0, 1) => CaseLabel::AIII,
                        (0, 0, 0) if r == -2 => CaseLabel::B,
                        (0, 0, 0) => CaseLabel::C,
                        _ => continue,
                    };
                    out.push(CaseSpec {
                        setting,
                        r,
                        ell,
                        k,
                        j,
                        alpha,
                        label,
                    });
                }
            }
        }
    }
    out.sort_by_key(|c| c.label);
    out
}

pub fn find_case(setting: Setting, label: CaseLabel) -> CaseSpec {
    enumerate_cases(setting)
        .into_iter()
        .find(|c| c.label == label)
        .expect("every label occurs")
}

fn check_l(setting: Setting, l: usize) -> Result<()> {
    if l > setting.n() {
        return Err(Error::InvalidArgument(format!(
            "word length {l} exceeds dimension {}",
            setting.n()
        )));
    }
    Ok(())
}

/// Which factor multiplies a Clifford-valued partial result from the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordTerm {
    /// `L`
    Word,
    /// `d/dx_n L`
    Derivative,
}

/// The right factor `d_{x'}^alpha d_{xi_n}^{j+1} d_{x_n}^k sigma_l`,
/// restricted to the sphere, for tangential direction `t` when `|alpha| = 1`.
pub fn right_factor<S: Scalar>(case: &CaseSpec, t: usize) -> Result<BoundarySymbol<S>> {
    let mut s = case.setting.symbol::<S>(case.ell)?;
    for _ in 0..case.k {
        s = s.d_x_n()?;
    }
    if case.alpha == 1 {
        s = s.d_x_tangential(t);
    }
    for _ in 0..=case.j {
        s = s.d_xi_n();
    }
    Ok(s.restrict())
}

/// Left factors `d_{x_n}^j d_{xi'}^alpha d_{xi_n}^k pi^+ sigma_r` with the
/// word `L` split off: each entry is to be multiplied on the left by `L` or
/// by its normal derivative.
pub fn left_factors<S: Scalar>(case: &CaseSpec, t: usize) -> Result<Vec<(WordTerm, BoundarySymbol<S>)>> {
    let mut s = case.setting.symbol::<S>(case.r)?;
    if case.alpha == 1 {
        s = s.d_xi_tangential(t)?;
    }
    let mut parts = match case.j {
        0 => vec![(WordTerm::Word, s)],
        1 => vec![(WordTerm::Derivative, s.clone()), (WordTerm::Word, s.d_x_n()?)],
        _ => return Err(Error::InvalidArgument("at most one normal derivative".into())),
    };
    for (_, p) in parts.iter_mut() {
        let mut v = p.restrict().pi_plus()?;
        for _ in 0..case.k {
            v = v.d_xi_n();
        }
        *p = v;
    }
    Ok(parts)
}

fn directions(case: &CaseSpec) -> Vec<usize> {
    if case.alpha == 1 {
        (1..case.setting.n()).collect()
    } else {
        vec![0]
    }
}

/// Clifford-valued `int int` of the case with `L` removed, one entry per
/// word term. Independent of `l`.
pub fn case_kernels<S: Scalar>(case: &CaseSpec) -> Result<Vec<(WordTerm, Num<S>)>> {
    let n = case.setting.n();
    let mut word = Clifford::zero(n);
    let mut deriv = Clifford::zero(n);
    for t in directions(case) {
        let right = right_factor::<S>(case, t)?;
        if right.is_zero() {
            continue;
        }
        for (term, left) in left_factors::<S>(case, t)? {
            let v = left.checked_mul(&right)?.sphere_average().integrate()?;
            match term {
                WordTerm::Word => word.add_assign(&v),
                WordTerm::Derivative => deriv.add_assign(&v),
            }
        }
    }
    Ok(vec![(WordTerm::Word, word), (WordTerm::Derivative, deriv)])
}

/// `L` and `d/dx_n L` for word length `l`.
pub fn word_and_derivative<S: Scalar>(n: usize, l: usize) -> Result<(Num<S>, Num<S>)> {
    let w = vector_word::<S>(n, l);
    let dw = w.try_map_coeffs(d_normal_vectors)?;
    Ok((w, dw))
}

/// Coefficient of one boundary case: a polynomial in `h'`, `a`, `da`,
/// `pi` and `Omega`.
pub fn boundary_case<S: Scalar>(setting: Setting, label: CaseLabel, l: usize) -> Result<Poly<S>> {
    check_l(setting, l)?;
    let case = find_case(setting, label);
    let (w, dw) = word_and_derivative::<S>(setting.n(), l)?;
    boundary_case_with(&case, &w, &dw)
}

/// As [`boundary_case`] for an arbitrary left word and its derivative.
pub fn boundary_case_with<S: Scalar>(case: &CaseSpec, w: &Num<S>, dw: &Num<S>) -> Result<Poly<S>> {
    let mut total = Poly::zero();
    for (term, kernel) in case_kernels::<S>(case)? {
        if kernel.is_zero() {
            continue;
        }
        let word = match term {
            WordTerm::Word => w,
            WordTerm::Derivative => dw,
        };
        total.add_assign_poly(&word.trace_product(&kernel));
    }
    Ok(total.scale(&case.factor::<S>()))
}

/// Same quantity computed without factoring out `L`: the word is
/// multiplied into the symbol before any derivative is taken.
pub fn boundary_case_direct<S: Scalar>(setting: Setting, label: CaseLabel, l: usize) -> Result<Poly<S>> {
    check_l(setting, l)?;
    let case = find_case(setting, label);
    let mut total = Poly::zero();
    for t in directions(&case) {
        let right = right_factor::<S>(&case, t)?;
        let mut left = apply_l(l, &setting.symbol::<S>(case.r)?)?;
        if case.alpha == 1 {
            left = left.d_xi_tangential(t)?;
        }
        for _ in 0..case.j {
            left = left.d_x_n()?;
        }
        let mut left = left.restrict().pi_plus()?;
        for _ in 0..case.k {
            left = left.d_xi_n();
        }
        let v = left
            .checked_mul(&right)?
            .trace()
            .sphere_average()
            .integrate_scalar()?;
        total.add_assign_poly(&v);
    }
    Ok(total.scale(&case.factor::<S>()))
}

/// Sum of the five cases.
pub fn boundary_total<S: Scalar>(setting: Setting, l: usize) -> Result<Poly<S>> {
    let mut total = Poly::zero();
    for label in CaseLabel::ALL {
        total.add_assign_poly(&boundary_case::<S>(setting, label, l)?);
    }
    Ok(total)
}

/// `(n-2)(4 pi)^{n/2} / (n/2 - 1)! * (-1/12) s`, the integrated
/// interior density per unit trace.
pub fn interior_constant<S: Scalar>(n: usize) -> Poly<S> {
    let half = (n / 2) as u32;
    let mut fact = 1i64;
    for t in 2..half as i64 {
        fact *= t;
    }
    let c = (n as i64 - 2) * 4i64.pow(half);
    &(&Poly::atom_pow(Atom::Pi, half as u16) * &Poly::atom(Atom::SCurv)) * &Poly::ratio(-c, 12 * fact)
}

/// Interior contribution for `L = c(X_1)...c(X_l)`.
pub fn interior_term<S: Scalar>(setting: Setting, l: usize) -> Result<Poly<S>> {
    check_l(setting, l)?;
    let n = setting.n();
    if l % 2 == 1 {
        return Ok(Poly::zero());
    }
    let vs: Vec<Num<S>> = (1..=l as u8).map(|j| vector_field(n, j)).collect();
    let tr = if l == 0 {
        Poly::from_i64(crate::clifford::trace_identity(n))
    } else {
        wick_trace(&vs)?
    };
    Ok(&interior_constant::<S>(n) * &tr)
}

/// Super residue: the interior term for `L = c(e_1)...c(e_n)`.
pub fn swres<S: Scalar>(n: usize) -> Poly<S> {
    let mut w = Clifford::<Poly<S>>::one(n);
    for k in 1..=n {
        w = &w * &Clifford::generator(n, k);
    }
    &interior_constant::<S>(n) * &w.trace()
}

/// The two pieces of `pi^+ sigma_{-2}(D^{-1})` in dimension 4:
/// `E_1 = pi^+[(c(xi) H c(xi) + (h'/2) c(xi) c(dx_n) c(xi'))/|xi|^4]` and
/// `E_2 = pi^+[h' |xi'|^2 c(xi) c(dx_n) c(xi)/|xi|^6]`.
pub fn case_b_split<S: Scalar>(n: usize) -> Result<(BoundarySymbol<S>, BoundarySymbol<S>)> {
    let h = Poly::atom(Atom::HPrime);
    let cxi = c_xi::<S>(n);
    let en = c_dxn::<S>(n);
    let sigma0 = crate::symbol::DerivativeTable.sigma0::<S>(n);
    let e1_num = &(&(&cxi * &sigma0) * &cxi)
        + &(&(&cxi * &en) * &c_xi_tangential::<S>(n)).scale(&(&h * &Poly::ratio(1, 2)));
    let e1 = BoundarySymbol::full(e1_num, 2).pi_plus()?;
    let e2_num = (&(&cxi * &en) * &cxi).scale(&(&h * &xi_tangential_sq::<S>(n)));
    let e2 = BoundarySymbol::full(e2_num, 3).pi_plus()?;
    Ok((e1, e2))
}

/// Intermediate integrands at `l = 2`, before the `xi_n` integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Checkpoint {
    /// `tr[d_{x_n} pi^+ sigma_{-1}(L D^{-1}) x d_{xi_n}^2 sigma_{-1}(D^{-1})]`
    Dim4AII,
    /// `tr[d_{xi_n} pi^+ sigma_{-1}(L D^{-1}) x d_{xi_n} d_{x_n} sigma_{-1}(D^{-1})]`
    Dim4AIII,
    /// `tr[L E_2 x d_{xi_n} sigma_{-1}(D^{-1})]`
    Dim4BE2,
    /// `tr[L E_1 x d_{xi_n} sigma_{-1}(D^{-1})]`
    Dim4BE1,
    /// `tr[pi^+ sigma_{-1}(L D^{-1}) x d_{xi_n} sigma_{-2}(D^{-1})]`
    Dim4C,
    /// `tr[d_{x_n} pi^+ sigma_{-2}(L D^{-2}) x d_{xi_n}^2 sigma_{-2}(D^{-2})]`
    Dim6AII,
    /// `tr[d_{xi_n}^2 pi^+ sigma_{-2}(L D^{-2}) x d_{x_n} sigma_{-2}(D^{-2})]`
    Dim6AIII,
    /// `tr[d_{xi_n} pi^+ sigma_{-2}(L D^{-2}) x sigma_{-3}(D^{-2})]`
    Dim6B,
    /// `tr[pi^+ d_{xi_n} sigma_{-2}(D^{-2}) x sigma_{-3}(L D^{-2})]`
    Dim6C,
}

impl Checkpoint {
    pub const ALL: [Checkpoint; 9] = [
        Checkpoint::Dim4AII,
        Checkpoint::Dim4AIII,
        Checkpoint::Dim4BE2,
        Checkpoint::Dim4BE1,
        Checkpoint::Dim4C,
        Checkpoint::Dim6AII,
        Checkpoint::Dim6AIII,
        Checkpoint::Dim6B,
        Checkpoint::Dim6C,
    ];

    pub fn setting(self) -> Setting {
        match self {
            Checkpoint::Dim4AII
            | Checkpoint::Dim4AIII
            | Checkpoint::Dim4BE2
            | Checkpoint::Dim4BE1
            | Checkpoint::Dim4C => Setting::Dim4,
            _ => Setting::Dim6,
        }
    }

    /// The case whose integrand this is.
    pub fn case(self) -> CaseLabel {
        match self {
            Checkpoint::Dim4AII | Checkpoint::Dim6AII => CaseLabel::AII,
            Checkpoint::Dim4AIII | Checkpoint::Dim6AIII => CaseLabel::AIII,
            Checkpoint::Dim4BE2 | Checkpoint::Dim4BE1 | Checkpoint::Dim6B => CaseLabel::B,
            Checkpoint::Dim4C | Checkpoint::Dim6C => CaseLabel::C,
        }
    }

    /// Stable identifier, e.g. `dim4.b.e2_integrand`.
    pub fn id(self) -> &'static str {
        match self {
            Checkpoint::Dim4AII => "dim4.aII.integrand",
            Checkpoint::Dim4AIII => "dim4.aIII.integrand",
            Checkpoint::Dim4BE2 => "dim4.b.e2_integrand",
            Checkpoint::Dim4BE1 => "dim4.b.e1_integrand",
            Checkpoint::Dim4C => "dim4.c.integrand",
            Checkpoint::Dim6AII => "dim6.aII.integrand",
            Checkpoint::Dim6AIII => "dim6.aIII.integrand",
            Checkpoint::Dim6B => "dim6.b.integrand",
            Checkpoint::Dim6C => "dim6.c.integrand",
        }
    }
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Left and right factors of a checkpoint integrand, restricted.
pub fn checkpoint_factors<S: Scalar>(cp: Checkpoint) -> Result<(BoundarySymbol<S>, BoundarySymbol<S>)> {
    let setting = cp.setting();
    let n = setting.n();
    let [hi, lo] = setting.orders();
    let sym_hi = setting.symbol::<S>(hi)?;
    let sym_lo = setting.symbol::<S>(lo)?;
    let with_l = |s: &BoundarySymbol<S>| apply_l(2, s);
    let (left, right) = match cp {
        Checkpoint::Dim4AII | Checkpoint::Dim6AII => (
            with_l(&sym_hi)?.d_x_n()?.pi_plus()?,
            sym_hi.d_xi_n().d_xi_n(),
        ),
        Checkpoint::Dim4AIII => (
            with_l(&sym_hi)?.pi_plus()?.d_xi_n(),
            sym_hi.d_x_n()?.d_xi_n(),
        ),
        Checkpoint::Dim6AIII => (
            with_l(&sym_hi)?.pi_plus()?.d_xi_n().d_xi_n(),
            sym_hi.d_x_n()?,
        ),
        Checkpoint::Dim4BE2 | Checkpoint::Dim4BE1 => {
            let (e1, e2) = case_b_split::<S>(n)?;
            let e = if cp == Checkpoint::Dim4BE1 { e1 } else { e2 };
            (e.left_mul(&vector_word(n, 2))?, sym_hi.d_xi_n())
        }
        Checkpoint::Dim4C => (with_l(&sym_hi)?.pi_plus()?, sym_lo.d_xi_n()),
        Checkpoint::Dim6B => (with_l(&sym_hi)?.pi_plus()?.d_xi_n(), sym_lo),
        Checkpoint::Dim6C => (sym_hi.d_xi_n().pi_plus()?, with_l(&sym_lo)?),
    };
    Ok((left.restrict(), right.restrict()))
}

/// The checkpoint integrand as a scalar rational function of `xi_n`: the
/// trace of the product, averaged over `|xi'| = 1` without the volume.
pub fn checkpoint_integrand<S: Scalar>(cp: Checkpoint) -> Result<BoundarySymbol<S>> {
    let (left, right) = checkpoint_factors::<S>(cp)?;
    Ok(left.checked_mul(&right)?.trace().sphere_mean())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{inner_product, Monomial};
    use crate::scalar::GaussRat;

    type P = Poly<GaussRat>;

    fn pi_omega() -> P {
        &P::atom(Atom::Pi) * &P::atom(Atom::Omega)
    }

    fn h() -> P {
        P::atom(Atom::HPrime)
    }

    fn dg12(n: usize) -> P {
        d_normal_vectors(&inner_product::<GaussRat>(1, 2, n)).unwrap()
    }

    #[test]
    fn five_cases_each() {
        for s in Setting::ALL {
            let cases = enumerate_cases(s);
            assert_eq!(cases.len(), 5);
            assert!(cases.iter().all(|c| c.satisfies_order_sum()));
            let labels: Vec<_> = cases.iter().map(|c| c.label).collect();
            assert_eq!(labels, CaseLabel::ALL.to_vec());
        }
        let d4 = enumerate_cases(Setting::Dim4);
        assert_eq!((d4[3].r, d4[3].ell), (-2, -1));
        assert_eq!((d4[4].r, d4[4].ell), (-1, -2));
        let d6 = enumerate_cases(Setting::Dim6);
        assert_eq!((d6[3].r, d6[3].ell), (-2, -3));
        assert_eq!((d6[4].r, d6[4].ell), (-3, -2));
    }

    #[test]
    fn case_factors() {
        let f = |s, l| find_case(s, l).factor::<GaussRat>();
        assert_eq!(f(Setting::Dim4, CaseLabel::AI), GaussRat::from(-1));
        assert_eq!(f(Setting::Dim4, CaseLabel::AII), GaussRat::ratio(-1, 2));
        assert_eq!(f(Setting::Dim6, CaseLabel::AIII), GaussRat::ratio(-1, 2));
        assert_eq!(f(Setting::Dim6, CaseLabel::B), GaussRat::from_ints(0, -1));
    }

    #[test]
    fn tangential_case_vanishes() {
        for s in Setting::ALL {
            for l in 0..=2 {
                assert!(boundary_case::<GaussRat>(s, CaseLabel::AI, l).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn dim4_case_b_split_recombines() {
        let (e1, e2) = case_b_split::<GaussRat>(4).unwrap();
        let whole = build_symbol::<GaussRat>(SymbolName::DInvM2, 4)
            .unwrap()
            .pi_plus()
            .unwrap();
        assert_eq!(e1.checked_sub(&e2).unwrap(), whole);
    }

    #[test]
    fn factored_and_direct_routes_agree() {
        for s in Setting::ALL {
            for label in CaseLabel::ALL {
                for l in [1, 2] {
                    let a = boundary_case::<GaussRat>(s, label, l).unwrap();
                    let b = boundary_case_direct::<GaussRat>(s, label, l).unwrap();
                    assert_eq!(a, b, "{s} {label} l={l}");
                }
            }
        }
    }

    #[test]
    fn dim4_l2_total() {
        let t = boundary_total::<GaussRat>(Setting::Dim4, 2).unwrap();
        assert_eq!(t, &(&dg12(4) * &P::ratio(-1, 2)) * &pi_omega());
    }

    #[test]
    fn dim4_aiii_l2() {
        let v = boundary_case::<GaussRat>(Setting::Dim4, CaseLabel::AIII, 2).unwrap();
        let expect = &(&(&h() * &inner_product(1, 2, 4)) * &P::ratio(-3, 8)) * &pi_omega();
        assert_eq!(v, expect);
    }

    #[test]
    fn odd_words_vanish() {
        for s in Setting::ALL {
            assert!(boundary_total::<GaussRat>(s, 1).unwrap().is_zero());
            assert!(interior_term::<GaussRat>(s, 3).unwrap().is_zero());
        }
    }

    #[test]
    fn interior_constants() {
        let g = inner_product::<GaussRat>(1, 2, 4);
        let v = interior_term::<GaussRat>(Setting::Dim4, 2).unwrap();
        let expect = &(&(&P::atom_pow(Atom::Pi, 2) * &P::atom(Atom::SCurv)) * &g) * &P::ratio(32, 3);
        assert_eq!(v, expect);
        let g6 = inner_product::<GaussRat>(1, 2, 6);
        let v6 = interior_term::<GaussRat>(Setting::Dim6, 2).unwrap();
        let mono = Monomial::atom_pow(Atom::Pi, 3);
        let expect6 = &(&P::monomial(mono, GaussRat::ratio(256, 3)) * &P::atom(Atom::SCurv)) * &g6;
        assert_eq!(v6, expect6);
    }

    #[test]
    fn super_residue_vanishes() {
        assert!(swres::<GaussRat>(4).is_zero());
        assert!(swres::<GaussRat>(6).is_zero());
    }

    #[test]
    fn word_too_long() {
        assert!(boundary_case::<GaussRat>(Setting::Dim4, CaseLabel::B, 5).is_err());
    }
}
