//! Sparse multivariate polynomials over symbolic atoms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex32, Complex64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{GaussRat, Scalar, ToComplex64};

/// A commuting indeterminate.
///
/// The variant order is the canonical print order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    /// `h'(0)`, normal derivative of the conformal factor.
    HPrime,
    /// Component `alpha` of the vector field `X_j`.
    A(u8, u8),
    /// Normal derivative of `A(j, alpha)` at the boundary point.
    DA(u8, u8),
    /// Tangential covariable `xi_k`, `k < n`.
    Xi(u8),
    /// Normal covariable `xi_n`.
    XiN,
    /// Scalar curvature.
    SCurv,
    Pi,
    /// Volume of the unit sphere of tangential covariables.
    Omega,
    /// Unexpanded inner product `g(X_a, X_b)`, `a <= b`.
    G(u8, u8),
    /// Trace of the identity endomorphism.
    TrId,
}

impl Atom {
    pub fn g(a: u8, b: u8) -> Atom {
        Atom::G(a.min(b), a.max(b))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::HPrime => write!(f, "h1"),
            Atom::A(j, a) => write!(f, "a({j},{a})"),
            Atom::DA(j, a) => write!(f, "da({j},{a})"),
            Atom::Xi(k) => write!(f, "xi({k})"),
            Atom::XiN => write!(f, "xin"),
            Atom::SCurv => write!(f, "s"),
            Atom::Pi => write!(f, "pi"),
            Atom::Omega => write!(f, "Omega"),
            Atom::G(a, b) => write!(f, "g(X{a},X{b})"),
            Atom::TrId => write!(f, "tr_id"),
        }
    }
}

/// A product of atom powers, sorted by atom with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(SmallVec<[(Atom, u16); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Self::atom_pow(a, 1)
    }

    pub fn atom_pow(a: Atom, e: u16) -> Self {
        let mut v = SmallVec::new();
        if e > 0 {
            v.push((a, e));
        }
        Monomial(v)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, u16)>) -> Self {
        let mut m = Monomial::one();
        for (a, e) in pairs {
            m = m.mul(&Monomial::atom_pow(a, e));
        }
        m
    }

    pub fn factors(&self) -> &[(Atom, u16)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, a: Atom) -> u16 {
        self.0
            .iter()
            .find(|&&(b, _)| b == a)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Sets the exponent of `a`, removing it when zero.
    pub fn with_exponent(&self, a: Atom, e: u16) -> Monomial {
        let mut v: SmallVec<[(Atom, u16); 4]> =
            self.0.iter().copied().filter(|&(b, _)| b != a).collect();
        if e > 0 {
            let pos = v.iter().position(|&(b, _)| b > a).unwrap_or(v.len());
            v.insert(pos, (a, e));
        }
        Monomial(v)
    }
}

impl Ord for Monomial {
    /// Total degree first, then lexicographic in the atom order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (x, y) in self.0.iter().zip(other.0.iter()) {
                    let o = x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                self.0.len().cmp(&other.0.len())
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(a, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Numeric values for atoms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment(BTreeMap<Atom, Complex64>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    /// Assigns `PI` and `OMEGA` their true values for rank `n`; `OMEGA` is
    /// the area of the unit sphere in `R^(n-1)`.
    pub fn with_constants(n: usize) -> Self {
        let mut a = Assignment::new();
        a.set(Atom::Pi, Complex64::new(std::f64::consts::PI, 0.0));
        a.set(Atom::Omega, Complex64::new(sphere_area(n - 1), 0.0));
        a.set(Atom::TrId, Complex64::new(2f64.powi(n as i32 / 2), 0.0));
        a
    }

    pub fn set(&mut self, a: Atom, v: Complex64) -> &mut Self {
        self.0.insert(a, v);
        self
    }

    pub fn get(&self, a: Atom) -> Option<Complex64> {
        self.0.get(&a).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Complex64)> {
        self.0.iter()
    }
}

/// Area of the unit sphere in `R^m`.
pub fn sphere_area(m: usize) -> f64 {
    // 2 pi^(m/2) / Gamma(m/2) via the recursion A_m = 2 pi / (m - 2) A_{m-2}
    let pi = std::f64::consts::PI;
    let (mut area, mut d) = if m % 2 == 0 { (2.0 * pi, 2) } else { (2.0, 1) };
    while d < m {
        area *= 2.0 * pi / d as f64;
        d += 2;
    }
    area
}

/// Coefficient formatting for the canonical printer.
pub trait CoeffDisplay {
    /// Returns `(negative, magnitude)` where `magnitude` is printable in a
    /// product; `None` for the magnitude means it is exactly one.
    fn split_sign(&self) -> (bool, Option<String>);
}

impl CoeffDisplay for GaussRat {
    fn split_sign(&self) -> (bool, Option<String>) {
        let neg = if self.is_real() {
            num_traits::Signed::is_negative(self.re())
        } else if num_traits::Zero::is_zero(self.re()) {
            num_traits::Signed::is_negative(self.im())
        } else {
            false
        };
        let mag = if neg { -self.clone() } else { self.clone() };
        if mag.is_one() {
            (neg, None)
        } else {
            (neg, Some(mag.to_string()))
        }
    }
}

macro_rules! float_coeff_display {
    ($t:ty) => {
        impl CoeffDisplay for $t {
            fn split_sign(&self) -> (bool, Option<String>) {
                if self.im == 0.0 {
                    let neg = self.re < 0.0;
                    let m = self.re.abs();
                    if m == 1.0 {
                        (neg, None)
                    } else {
                        (neg, Some(format!("{m}")))
                    }
                } else {
                    (false, Some(format!("({}+{}*i)", self.re, self.im)))
                }
            }
        }
    };
}
float_coeff_display!(Complex64);
float_coeff_display!(Complex32);

/// Sparse polynomial: monomials mapped to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Poly<S> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<S: Scalar> Poly<S> {
    pub fn constant(c: S) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        Self::monomial(Monomial::atom(a), S::one())
    }

    pub fn atom_pow(a: Atom, e: u16) -> Self {
        Self::monomial(Monomial::atom_pow(a, e), S::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(S::from_i64(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(S::from_ratio(num, den))
    }

    pub fn i() -> Self {
        Self::constant(S::imag_unit())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no atoms.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_poly(&mut self, other: &Poly<S>) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.mul_ref(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Poly { terms }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &S) -> Self {
        let mut out = Poly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.mul(m), &v.mul_ref(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(a, _)| a))
            .collect()
    }

    pub fn contains_atom(&self, a: Atom) -> bool {
        self.terms.keys().any(|m| m.exponent(a) > 0)
    }

    pub fn degree_in(&self, a: Atom) -> u16 {
        self.terms.keys().map(|m| m.exponent(a)).max().unwrap_or(0)
    }

    /// Splits into coefficients of successive powers of `a`.
    pub fn collect_powers(&self, a: Atom) -> Vec<Poly<S>> {
        let deg = self.degree_in(a) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(a);
            out[e as usize].add_term(m.with_exponent(a, 0), c);
        }
        out
    }

    /// Inverse of [`Poly::collect_powers`].
    pub fn from_powers(a: Atom, coeffs: &[Poly<S>]) -> Self {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                out.add_term(m.mul(&Monomial::atom_pow(a, e as u16)), v);
            }
        }
        out
    }

    /// Applies a derivation given by its values on atoms; `Ok(None)` means
    /// the atom is constant.
    pub fn derive<F>(&self, d: F) -> Result<Poly<S>>
    where
        F: Fn(Atom) -> Result<Option<Poly<S>>>,
    {
        let mut cache: BTreeMap<Atom, Option<Poly<S>>> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for &(a, e) in m.factors() {
                if !cache.contains_key(&a) {
                    cache.insert(a, d(a)?);
                }
                let Some(da) = &cache[&a] else { continue };
                let rest = m.with_exponent(a, e - 1);
                let coef = c.mul_ref(&S::from_i64(e as i64));
                for (dm, dc) in &da.terms {
                    out.add_term(rest.mul(dm), &coef.mul_ref(dc));
                }
            }
        }
        Ok(out)
    }

    /// Partial derivative with respect to a single atom.
    pub fn diff_atom(&self, x: Atom) -> Poly<S> {
        self.derive(|a| Ok((a == x).then(Poly::one)))
            .expect("partial derivative cannot fail")
    }

    /// Replaces every occurrence of `a` by `value`.
    pub fn substitute(&self, a: Atom, value: &Poly<S>) -> Poly<S> {
        let powers = self.collect_powers(a);
        let mut out = Poly::zero();
        let mut vp = Poly::one();
        for (k, c) in powers.iter().enumerate() {
            if k > 0 {
                vp = &vp * value;
            }
            if !c.is_zero() {
                out.add_assign_poly(&(c * &vp));
            }
        }
        out
    }

    /// Exact quotient by a single atom; `None` if some term lacks it.
    pub fn divide_by_atom(&self, a: Atom) -> Option<Poly<S>> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(a);
            if e == 0 {
                return None;
            }
            out.add_term(m.with_exponent(a, e - 1), c);
        }
        Some(out)
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly<S> {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { terms }
    }
}

impl<S: Scalar + ToComplex64> Poly<S> {
    /// Numeric evaluation; every atom must be assigned.
    pub fn eval(&self, assignment: &Assignment) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_c64();
            for &(a, e) in m.factors() {
                let x = assignment
                    .get(a)
                    .ok_or_else(|| Error::MissingAssignment(a.to_string()))?;
                v *= x.powi(e as i32);
            }
            total += v;
        }
        Ok(total)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Poly::constant(S::one())
    }
}

impl<S: Scalar> Add<&Poly<S>> for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        out.add_assign_poly(small);
        out
    }
}

impl<S: Scalar> Sub<&Poly<S>> for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c.clone());
        }
        out
    }
}

impl<S: Scalar> Mul<&Poly<S>> for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &ca.mul_ref(cb));
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        Poly { terms }
    }
}

macro_rules! poly_owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<S: Scalar> $tr for Poly<S> {
            type Output = Poly<S>;
            fn $m(self, rhs: Poly<S>) -> Poly<S> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
poly_owned_ops!(Add add, Sub sub, Mul mul);

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        -&self
    }
}

impl<S: Scalar> Scalar for Poly<S> {
    fn imag_unit() -> Self {
        Poly::i()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Poly::ratio(num, den)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        self.add_assign_poly(rhs);
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_recip(&self) -> Option<Self> {
        self.as_constant()?.try_recip().map(Poly::constant)
    }
}

impl<S: Scalar + CoeffDisplay> fmt::Display for Poly<S> {
    /// Canonical form: terms in monomial order, `*` between factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = c.split_sign();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (mag, m.is_one()) {
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{m}")?,
                (Some(s), true) => write!(f, "{s}")?,
                (Some(s), false) => write!(f, "{s}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Polynomials with exact Gaussian-rational coefficients.
pub type ExactPoly = Poly<GaussRat>;

/// `g(X_a, X_b) = sum_alpha a_{a alpha} a_{b alpha}` in rank `n`.
pub fn inner_product<S: Scalar>(a: u8, b: u8, n: usize) -> Poly<S> {
    let mut out = Poly::zero();
    for alpha in 1..=n as u8 {
        out.add_term(
            Monomial::atom(Atom::A(a, alpha)).mul(&Monomial::atom(Atom::A(b, alpha))),
            &S::one(),
        );
    }
    out
}

/// Normal derivative at the boundary point: `A -> DA`, everything else in
/// the vector-field sector is an error, other atoms are constant.
pub fn d_normal_vectors<S: Scalar>(p: &Poly<S>) -> Result<Poly<S>> {
    p.derive(|a| match a {
        Atom::A(j, al) => Ok(Some(Poly::atom(Atom::DA(j, al)))),
        Atom::DA(..) | Atom::HPrime | Atom::SCurv | Atom::G(..) => {
            Err(Error::DerivativeTableExhausted(a.to_string()))
        }
        _ => Ok(None),
    })
}

/// Replaces each `G(a, b)` atom by its expansion in `A` atoms.
pub fn expand_inner_products<S: Scalar>(p: &Poly<S>, n: usize) -> Poly<S> {
    let mut out = p.clone();
    for a in p.atoms() {
        if let Atom::G(x, y) = a {
            out = out.substitute(a, &inner_product(x, y, n));
        }
    }
    out
}
