//! Boundary symbols: Clifford-valued rational functions of `xi_n`.
//!
//! A symbol lives in one of two forms. In the full form the denominator is
//! `|xi|^(2p)` with `|xi|^2 = sum_k xi_k^2 + xi_n^2`, which keeps the
//! dependence on the tangential covariables exact so that `x_n` and `xi_k`
//! derivatives can be taken. The restricted form sits on `|xi'| = 1` and has
//! denominator `(xi_n - i)^p (xi_n + i)^q`; this is where `pi^+`, contour
//! integration and sphere averaging operate.

use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::poly::{Atom, CoeffDisplay, Monomial, Poly};
use crate::scalar::Scalar;

type Num<S> = Clifford<Poly<S>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Full,
    Restricted,
}

/// `sum_{k<n} xi_k^2`.
pub fn xi_tangential_sq<S: Scalar>(n: usize) -> Poly<S> {
    let mut out = Poly::zero();
    for k in 1..n as u8 {
        out.add_term(Monomial::atom_pow(Atom::Xi(k), 2), &S::one());
    }
    out
}

/// `|xi|^2 = sum_{k<n} xi_k^2 + xi_n^2`.
pub fn xi_sq<S: Scalar>(n: usize) -> Poly<S> {
    let mut out = xi_tangential_sq(n);
    out.add_term(Monomial::atom_pow(Atom::XiN, 2), &S::one());
    out
}

/// `xi_n - r`.
fn xin_minus<S: Scalar>(r: S) -> Poly<S> {
    &Poly::atom(Atom::XiN) - &Poly::constant(r)
}

/// Rewrites `xi_{n-1}^2` as `1 - sum_{k<n-1} xi_k^2`, which is a normal
/// form for polynomials on the unit sphere `|xi'| = 1`.
pub fn sphere_normal_form<S: Scalar>(p: &Poly<S>, n: usize) -> Poly<S> {
    if n < 2 {
        return p.clone();
    }
    let last = Atom::Xi((n - 1) as u8);
    if p.degree_in(last) < 2 {
        return p.clone();
    }
    let mut rest = Poly::one();
    for k in 1..(n - 1) as u8 {
        rest.add_term(Monomial::atom_pow(Atom::Xi(k), 2), &-S::one());
    }
    let powers = p.collect_powers(last);
    let mut out = Poly::zero();
    let mut rest_pow = Poly::one();
    for (e, c) in powers.iter().enumerate() {
        if e >= 2 && e % 2 == 0 {
            rest_pow = &rest_pow * &rest;
        }
        if c.is_zero() {
            continue;
        }
        let term = &(c * &rest_pow) * &Poly::atom_pow(last, (e % 2) as u16);
        out.add_assign_poly(&term);
    }
    out
}

fn double_factorial(k: i64) -> i64 {
    let mut out = 1;
    let mut j = k;
    while j > 1 {
        out *= j;
        j -= 2;
    }
    out
}

/// Average over the unit sphere in `R^m` of the `xi_k` monomials, without
/// the volume factor.
pub fn sphere_mean<S: Scalar>(p: &Poly<S>, m: usize) -> Poly<S> {
    let mut out = Poly::zero();
    for (mono, c) in p.terms() {
        let mut num = 1i64;
        let mut half = 0i64;
        let mut odd = false;
        let mut rest = Monomial::one();
        for &(a, e) in mono.factors() {
            match a {
                Atom::Xi(_) => {
                    if e % 2 == 1 {
                        odd = true;
                        break;
                    }
                    num *= double_factorial(e as i64 - 1);
                    half += e as i64 / 2;
                }
                _ => rest = rest.mul(&Monomial::atom_pow(a, e)),
            }
        }
        if odd {
            continue;
        }
        let mut den = 1i64;
        for t in 1..=half {
            den *= m as i64 + 2 * t - 2;
        }
        out.add_term(rest, &c.mul_ref(&S::from_ratio(num, den)));
    }
    out
}

/// Integral over the unit sphere in `R^m`; the volume stays as the `Omega`
/// atom.
pub fn sphere_average<S: Scalar>(p: &Poly<S>, m: usize) -> Poly<S> {
    let mean = sphere_mean(p, m);
    if mean.is_zero() {
        return mean;
    }
    &mean * &Poly::atom(Atom::Omega)
}

/// Rules for `d/dx_n` at the boundary point `x_0`, in normal coordinates
/// where every tangential derivative vanishes.
#[derive(Clone, Copy, Debug, Default)]
pub struct DerivativeTable;

impl DerivativeTable {
    /// `d/dx_n` on coefficient polynomials.
    pub fn normal<S: Scalar>(&self, p: &Poly<S>) -> Result<Poly<S>> {
        let half_h = &Poly::atom(Atom::HPrime) * &Poly::ratio(1, 2);
        p.derive(|a| match a {
            Atom::Xi(k) => Ok(Some(&half_h * &Poly::atom(Atom::Xi(k)))),
            Atom::A(j, al) => Ok(Some(Poly::atom(Atom::DA(j, al)))),
            Atom::DA(..) | Atom::HPrime | Atom::SCurv | Atom::G(..) => {
                Err(Error::DerivativeTableExhausted(a.to_string()))
            }
            Atom::XiN | Atom::Pi | Atom::Omega | Atom::TrId => Ok(None),
        })
    }

    /// `sigma_0(D)(x_0) = -(3/4) h'(0) c(dx_n)`.
    pub fn sigma0<S: Scalar>(&self, n: usize) -> Num<S> {
        let c = &Poly::atom(Atom::HPrime) * &Poly::ratio(-3, 4);
        Clifford::blade(n, 1 << (n - 1), c)
    }

    /// `Gamma^n(x_0) = (5/2) h'(0)`; the tangential `Gamma^k` vanish.
    pub fn gamma_n<S: Scalar>(&self) -> Poly<S> {
        &Poly::atom(Atom::HPrime) * &Poly::ratio(5, 2)
    }

    /// `delta^k(x_0) = (1/4) h'(0) c(e_k) c(e_n)` for `k < n`; `delta^n` vanishes.
    pub fn delta<S: Scalar>(&self, n: usize, k: usize) -> Num<S> {
        let c = &Poly::atom(Atom::HPrime) * &Poly::ratio(1, 4);
        let ek = Clifford::generator(n, k);
        let en = Clifford::generator(n, n);
        (&ek * &en).scale(&c)
    }
}

/// A boundary symbol. See the module documentation for the two forms.
#[derive(Clone, Debug)]
pub struct BoundarySymbol<S> {
    num: Num<S>,
    p: u32,
    q: u32,
    form: Form,
}

fn xin_vectors<S: Scalar>(c: &Num<S>) -> Vec<(u32, Vec<Poly<S>>)> {
    c.terms()
        .map(|(m, p)| (m, p.collect_powers(Atom::XiN)))
        .collect()
}

fn from_xin_vectors<S: Scalar>(n: usize, v: &[(u32, Vec<Poly<S>>)]) -> Num<S> {
    let mut out = Clifford::zero(n);
    for (m, cs) in v {
        out.add_blade(*m, &Poly::from_powers(Atom::XiN, cs));
    }
    out
}

/// Division by `xi_n - r`; returns quotient and remainder.
fn divide_linear<S: Scalar>(cs: &[Poly<S>], r: &S) -> (Vec<Poly<S>>, Poly<S>) {
    if cs.len() <= 1 {
        return (Vec::new(), cs.first().cloned().unwrap_or_default());
    }
    let d = cs.len() - 1;
    let mut q = vec![Poly::zero(); d];
    let mut carry = Poly::zero();
    for k in (1..=d).rev() {
        let b = &cs[k] + &carry.scale(r);
        carry = b.clone();
        q[k - 1] = b;
    }
    let rem = &cs[0] + &carry.scale(r);
    (q, rem)
}

/// Division by `xi_n^2 + rho`; `None` unless exact.
fn divide_quadratic<S: Scalar>(cs: &[Poly<S>], rho: &Poly<S>) -> Option<Vec<Poly<S>>> {
    if cs.len() < 3 {
        return cs.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut a = cs.to_vec();
    let d = a.len() - 1;
    let mut q = vec![Poly::zero(); d - 1];
    for k in (2..=d).rev() {
        let b = std::mem::take(&mut a[k]);
        a[k - 2] = &a[k - 2] - &(rho * &b);
        q[k - 2] = b;
    }
    (a[0].is_zero() && a[1].is_zero()).then_some(q)
}

/// Taylor coefficients of `num(r + u)` in `u`.
fn taylor_shift<S: Scalar>(cs: &[Poly<S>], r: &S) -> Vec<Poly<S>> {
    let d = cs.len();
    let mut out = vec![Poly::zero(); d];
    // binom(k, j) r^(k-j) a_k
    let mut rpow = vec![S::one(); d.max(1)];
    for k in 1..d {
        rpow[k] = rpow[k - 1].mul_ref(r);
    }
    for (k, a) in cs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mut binom = 1i64;
        for j in 0..=k {
            if j > 0 {
                binom = binom * (k - j + 1) as i64 / j as i64;
            }
            let c = S::from_i64(binom).mul_ref(&rpow[k - j]);
            out[j].add_assign_poly(&a.scale(&c));
        }
    }
    out
}

/// Coefficients of `(2i + u)^(-q)` up to `u^(len-1)`.
fn inverse_power_series<S: Scalar>(q: u32, len: usize) -> Vec<S> {
    // (2i)^(-1) = -i/2
    let inv = -(S::imag_unit().mul_ref(&S::from_ratio(1, 2)));
    let mut out = Vec::with_capacity(len);
    let mut binom = 1i64;
    for t in 0..len {
        if t > 0 {
            binom = binom * (q as i64 + t as i64 - 1) / t as i64;
        }
        let sign = if t % 2 == 0 { 1 } else { -1 };
        out.push(S::from_i64(sign * binom).mul_ref(&inv.powi(q + t as u32)));
    }
    out
}

/// Low-order coefficients `g_0..g_{p-1}` of the Laurent expansion of
/// `num / (xi_n + i)^q` around `xi_n = i`.
fn principal_coeffs<S: Scalar>(cs: &[Poly<S>], p: u32, q: u32) -> Vec<Poly<S>> {
    let p = p as usize;
    let a = taylor_shift(cs, &S::imag_unit());
    let w = inverse_power_series::<S>(q, p);
    let mut g = vec![Poly::zero(); p];
    for (s, gs) in g.iter_mut().enumerate() {
        for j in 0..=s.min(a.len().saturating_sub(1)) {
            if j < a.len() && !a[j].is_zero() {
                gs.add_assign_poly(&a[j].scale(&w[s - j]));
            }
        }
    }
    g
}

impl<S: Scalar> BoundarySymbol<S> {
    /// `num / |xi|^(2p)`.
    pub fn full(num: Num<S>, p: u32) -> Self {
        let mut s = BoundarySymbol {
            num,
            p,
            q: p,
            form: Form::Full,
        };
        s.canonicalize();
        s
    }

    /// `num / ((xi_n - i)^p (xi_n + i)^q)` on `|xi'| = 1`.
    pub fn restricted(num: Num<S>, p: u32, q: u32) -> Self {
        let n = num.rank();
        let num = num.map_coeffs(|c| sphere_normal_form(c, n));
        let mut s = BoundarySymbol {
            num,
            p,
            q,
            form: Form::Restricted,
        };
        s.canonicalize();
        s
    }

    pub fn polynomial(num: Num<S>) -> Self {
        Self::full(num, 0)
    }

    pub fn scalar(n: usize, c: Poly<S>) -> Self {
        Self::polynomial(Clifford::scalar(n, c))
    }

    pub fn zero(n: usize) -> Self {
        Self::polynomial(Clifford::zero(n))
    }

    pub fn one(n: usize) -> Self {
        Self::polynomial(Clifford::one(n))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn num(&self) -> &Num<S> {
        &self.num
    }

    /// Pole order at `xi_n = i`.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Pole order at `xi_n = -i`.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Degree of the numerator in `xi_n`.
    pub fn xin_degree(&self) -> u32 {
        self.num
            .terms()
            .map(|(_, c)| c.degree_in(Atom::XiN) as u32)
            .max()
            .unwrap_or(0)
    }

    fn canonicalize(&mut self) {
        let n = self.rank();
        if self.num.is_zero() {
            self.p = 0;
            self.q = 0;
            return;
        }
        match self.form {
            Form::Full => {
                let rho = xi_tangential_sq::<S>(n);
                while self.p > 0 {
                    let mut next = Vec::new();
                    let mut ok = true;
                    for (m, cs) in xin_vectors(&self.num) {
                        match divide_quadratic(&cs, &rho) {
                            Some(qc) => next.push((m, qc)),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                    self.num = from_xin_vectors(n, &next);
                    self.p -= 1;
                    self.q -= 1;
                }
            }
            Form::Restricted => {
                for (root, plus) in [(S::imag_unit(), true), (-S::imag_unit(), false)] {
                    loop {
                        let order = if plus { self.p } else { self.q };
                        if order == 0 {
                            break;
                        }
                        let mut next = Vec::new();
                        let mut ok = true;
                        for (m, cs) in xin_vectors(&self.num) {
                            let (qc, rem) = divide_linear(&cs, &root);
                            if !rem.is_zero() {
                                ok = false;
                                break;
                            }
                            next.push((m, qc));
                        }
                        if !ok {
                            break;
                        }
                        self.num = from_xin_vectors(n, &next);
                        if plus {
                            self.p -= 1;
                        } else {
                            self.q -= 1;
                        }
                    }
                }
            }
        }
    }

    /// Passes to `|xi'| = 1`.
    pub fn restrict(&self) -> Self {
        match self.form {
            Form::Restricted => self.clone(),
            Form::Full => Self::restricted(self.num.clone(), self.p, self.p),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }

    fn common_form(&self, other: &Self) -> (Self, Self) {
        if self.form == other.form {
            (self.clone(), other.clone())
        } else {
            (self.restrict(), other.restrict())
        }
    }

    /// Numerator over a larger denominator of the same form.
    fn lifted(&self, p: u32, q: u32) -> Num<S> {
        let n = self.rank();
        match self.form {
            Form::Full => {
                if p == self.p {
                    return self.num.clone();
                }
                self.num.scale(&xi_sq::<S>(n).pow(p - self.p))
            }
            Form::Restricted => {
                let mut f = Poly::one();
                if p > self.p {
                    f = &f * &xin_minus(S::imag_unit()).pow(p - self.p);
                }
                if q > self.q {
                    f = &f * &xin_minus(-S::imag_unit()).pow(q - self.q);
                }
                if f.is_one() {
                    self.num.clone()
                } else {
                    self.num.scale(&f)
                }
            }
        }
    }

    fn rebuild(&self, num: Num<S>, p: u32, q: u32) -> Self {
        match self.form {
            Form::Full => Self::full(num, p),
            Form::Restricted => Self::restricted(num, p, q),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let (a, b) = self.common_form(other);
        let p = a.p.max(b.p);
        let q = a.q.max(b.q);
        let num = &a.lifted(p, q) + &b.lifted(p, q);
        Ok(a.rebuild(num, p, q))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let (a, b) = self.common_form(other);
        let num = a.num.checked_mul(&b.num)?;
        Ok(a.rebuild(num, a.p + b.p, a.q + b.q))
    }

    pub fn neg(&self) -> Self {
        BoundarySymbol {
            num: -&self.num,
            ..self.clone()
        }
    }

    /// Multiplies by a commuting coefficient.
    pub fn scale(&self, c: &Poly<S>) -> Self {
        self.rebuild(self.num.scale(c), self.p, self.q)
    }

    /// `c * self` for a `xi`-independent Clifford element.
    pub fn left_mul(&self, c: &Num<S>) -> Result<Self> {
        Ok(self.rebuild(c.checked_mul(&self.num)?, self.p, self.q))
    }

    /// `self * c` for a `xi`-independent Clifford element.
    pub fn right_mul(&self, c: &Num<S>) -> Result<Self> {
        Ok(self.rebuild(self.num.checked_mul(c)?, self.p, self.q))
    }

    /// `d/d xi_n` by the quotient rule.
    pub fn d_xi_n(&self) -> Self {
        let n = self.rank();
        let dnum = self.num.map_coeffs(|c| c.diff_atom(Atom::XiN));
        let xin = Poly::atom(Atom::XiN);
        match self.form {
            Form::Full => {
                if self.p == 0 {
                    return Self::polynomial(dnum);
                }
                let f = &xin * &Poly::from_i64(2 * self.p as i64);
                let num = &dnum.scale(&xi_sq::<S>(n)) - &self.num.scale(&f);
                Self::full(num, self.p + 1)
            }
            Form::Restricted => {
                if self.p == 0 && self.q == 0 {
                    return Self::restricted(dnum, 0, 0);
                }
                let i = Poly::<S>::i();
                let plus = &xin + &i;
                let minus = &xin - &i;
                let w = &plus.scale(&S::from_i64(self.p as i64))
                    + &minus.scale(&S::from_i64(self.q as i64));
                let num = &dnum.scale(&(&plus * &minus)) - &self.num.scale(&w);
                Self::restricted(num, self.p + 1, self.q + 1)
            }
        }
    }

    /// `d/d xi_k` for a tangential covariable; full form only.
    pub fn d_xi_tangential(&self, k: usize) -> Result<Self> {
        if self.form != Form::Full {
            return Err(Error::NeedsUnrestricted);
        }
        let n = self.rank();
        let xk = Atom::Xi(k as u8);
        let dnum = self.num.map_coeffs(|c| c.diff_atom(xk));
        if self.p == 0 {
            return Ok(Self::polynomial(dnum));
        }
        let f = &Poly::atom(xk) * &Poly::from_i64(2 * self.p as i64);
        let num = &dnum.scale(&xi_sq::<S>(n)) - &self.num.scale(&f);
        Ok(Self::full(num, self.p + 1))
    }

    /// `d/dx_n` at `x_0` with the default table; full form only.
    pub fn d_x_n(&self) -> Result<Self> {
        self.d_x_n_with(&DerivativeTable)
    }

    pub fn d_x_n_with(&self, t: &DerivativeTable) -> Result<Self> {
        if self.form != Form::Full {
            return Err(Error::NeedsUnrestricted);
        }
        let n = self.rank();
        let dnum = self.num.try_map_coeffs(|c| t.normal(c))?;
        if self.p == 0 {
            return Ok(Self::polynomial(dnum));
        }
        // d|xi|^2 = h' sum_k xi_k^2
        let dsq = &Poly::atom(Atom::HPrime) * &xi_tangential_sq::<S>(n);
        let f = dsq.scale(&S::from_i64(self.p as i64));
        let num = &dnum.scale(&xi_sq::<S>(n)) - &self.num.scale(&f);
        Ok(Self::full(num, self.p + 1))
    }

    /// Tangential `d/dx_k`, `k < n`, vanishes at `x_0`.
    pub fn d_x_tangential(&self, _k: usize) -> Self {
        Self::zero(self.rank())
    }

    /// Clifford trace applied to the numerator.
    pub fn trace(&self) -> Self {
        let n = self.rank();
        let num = Clifford::scalar(n, self.num.trace());
        self.rebuild(num, self.p, self.q)
    }

    /// Sphere average of the numerator coefficients; restricts first.
    pub fn sphere_average(&self) -> Self {
        let r = self.restrict();
        let m = self.rank() - 1;
        let num = r.num.map_coeffs(|c| sphere_average(c, m));
        Self::restricted(num, r.p, r.q)
    }

    /// As [`Self::sphere_average`] without the `Omega` factor.
    pub fn sphere_mean(&self) -> Self {
        let r = self.restrict();
        let m = self.rank() - 1;
        let num = r.num.map_coeffs(|c| sphere_mean(c, m));
        Self::restricted(num, r.p, r.q)
    }

    pub fn map_num(&self, f: impl Fn(&Poly<S>) -> Poly<S>) -> Self {
        self.rebuild(self.num.map_coeffs(f), self.p, self.q)
    }

    /// `pi^+`: the principal part at `xi_n = i`. Restricts first.
    pub fn pi_plus(&self) -> Result<Self> {
        let r = self.restrict();
        let deg = r.xin_degree();
        if !r.num.is_zero() && deg >= r.p + r.q {
            return Err(Error::PolynomialPart {
                degree: deg,
                p: r.p,
                q: r.q,
            });
        }
        if r.p == 0 {
            return Ok(Self::restricted(Clifford::zero(self.rank()), 0, 0));
        }
        let n = self.rank();
        let u = xin_minus(S::imag_unit());
        let mut upow = vec![Poly::one()];
        for t in 1..r.p as usize {
            let next = &upow[t - 1] * &u;
            upow.push(next);
        }
        let mut out = Vec::new();
        for (m, cs) in xin_vectors(&r.num) {
            let g = principal_coeffs(&cs, r.p, r.q);
            let mut c = Poly::zero();
            for (gs, us) in g.iter().zip(&upow) {
                if !gs.is_zero() {
                    c.add_assign_poly(&(gs * us));
                }
            }
            out.push((m, c.collect_powers(Atom::XiN)));
        }
        Ok(Self::restricted(from_xin_vectors(n, &out), r.p, 0))
    }

    /// `pi^- = 1 - pi^+`.
    pub fn pi_minus(&self) -> Result<Self> {
        self.restrict().checked_sub(&self.pi_plus()?)
    }

    /// `int_R d xi_n`, evaluated as `2 pi i Res_{xi_n = i}`; keeps the
    /// Clifford structure. Restricts first.
    pub fn integrate(&self) -> Result<Num<S>> {
        let r = self.restrict();
        let n = self.rank();
        if r.num.is_zero() {
            return Ok(Clifford::zero(n));
        }
        let deg = r.xin_degree();
        if deg + 2 > r.p + r.q {
            return Err(Error::NonIntegrable {
                degree: deg,
                p: r.p,
                q: r.q,
            });
        }
        if r.p == 0 {
            return Ok(Clifford::zero(n));
        }
        let two_pi_i = &Poly::atom(Atom::Pi) * &Poly::constant(S::imag_unit().mul_ref(&S::from_i64(2)));
        let mut out = Clifford::zero(n);
        for (m, cs) in xin_vectors(&r.num) {
            let g = principal_coeffs(&cs, r.p, r.q);
            let res = &g[r.p as usize - 1];
            if !res.is_zero() {
                out.add_blade(m, &(res * &two_pi_i));
            }
        }
        Ok(out)
    }

    /// Scalar integral; the symbol must have grade-0 numerator.
    pub fn integrate_scalar(&self) -> Result<Poly<S>> {
        let c = self.integrate()?;
        if c.terms().any(|(m, _)| m != 0) {
            return Err(Error::InvalidArgument(
                "integrate_scalar needs a scalar symbol".into(),
            ));
        }
        Ok(c.coeff(0))
    }

    /// Inverse of a symbol whose numerator is a unit times powers of
    /// `|xi|^2` or of `xi_n -+ i`.
    pub fn try_inverse(&self) -> Result<Self> {
        let n = self.rank();
        let bad = || Error::InvalidArgument("division only by |xi|^2 or (xin -+ i) powers".into());
        if self.num.terms().any(|(m, _)| m != 0) || self.num.is_zero() {
            return Err(bad());
        }
        let mut cs = self.num.coeff(0).collect_powers(Atom::XiN);
        let unit = |cs: &[Poly<S>]| -> Option<S> {
            let c = cs.iter().rposition(|c| !c.is_zero())?;
            if c != 0 {
                return None;
            }
            cs[0].as_constant()
        };
        if self.form == Form::Full {
            let rho = xi_tangential_sq::<S>(n);
            let mut k = 0u32;
            while let Some(next) = divide_quadratic(&cs, &rho) {
                cs = next;
                k += 1;
            }
            if let Some(c) = unit(&cs) {
                let inv = Poly::constant(invert_unit(&c)?);
                let num = Clifford::scalar(n, inv);
                return Ok(if k >= self.p {
                    Self::full(num, k - self.p)
                } else {
                    Self::polynomial(num.scale(&xi_sq::<S>(n).pow(self.p - k)))
                });
            }
            return self.restrict().try_inverse();
        }
        let mut a = 0u32;
        let mut b = 0u32;
        for (root, count) in [(S::imag_unit(), &mut a), (-S::imag_unit(), &mut b)] {
            loop {
                let (qc, rem) = divide_linear(&cs, &root);
                if cs.len() < 2 || !rem.is_zero() {
                    break;
                }
                cs = qc;
                *count += 1;
            }
        }
        let c = unit(&cs).ok_or_else(bad)?;
        let inv = Poly::constant(invert_unit(&c)?);
        // 1 / (c (xi-i)^a (xi+i)^b / ((xi-i)^p (xi+i)^q))
        let (np, dp) = (self.p.saturating_sub(a), a.saturating_sub(self.p));
        let (nq, dq) = (self.q.saturating_sub(b), b.saturating_sub(self.q));
        let mut f = inv;
        if np > 0 {
            f = &f * &xin_minus(S::imag_unit()).pow(np);
        }
        if nq > 0 {
            f = &f * &xin_minus(-S::imag_unit()).pow(nq);
        }
        Ok(Self::restricted(Clifford::scalar(n, f), dp, dq))
    }
}

fn invert_unit<S: Scalar>(c: &S) -> Result<S> {
    c.try_recip().ok_or_else(|| Error::InvalidArgument("division by a non-invertible constant".into()))
}

impl<S: Scalar> PartialEq for BoundarySymbol<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        if self.form == other.form {
            return self.num == other.num && self.p == other.p && self.q == other.q;
        }
        let (a, b) = (self.restrict(), other.restrict());
        a.num == b.num && a.p == b.p && a.q == b.q
    }
}

impl<S: Scalar + CoeffDisplay> fmt::Display for BoundarySymbol<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = match self.form {
            Form::Full => match self.p {
                0 => String::new(),
                1 => "|xi|^2".to_string(),
                p => format!("(|xi|^2)^{p}"),
            },
            Form::Restricted => {
                let mut parts = Vec::new();
                for (e, s) in [(self.p, "(xin-i)"), (self.q, "(xin+i)")] {
                    match e {
                        0 => {}
                        1 => parts.push(s.to_string()),
                        e => parts.push(format!("{s}^{e}")),
                    }
                }
                match parts.len() {
                    0 => String::new(),
                    1 => parts.remove(0),
                    _ => format!("({})", parts.join("*")),
                }
            }
        };
        let scalar_only = self.num.terms().all(|(m, _)| m == 0);
        if scalar_only && !self.num.is_zero() {
            let c = self.num.coeff(0);
            return if den.is_empty() {
                write!(f, "{c}")
            } else {
                write!(f, "({c})/{den}")
            };
        }
        if den.is_empty() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    type P = Poly<GaussRat>;
    type B = BoundarySymbol<GaussRat>;

    fn xin() -> P {
        P::atom(Atom::XiN)
    }

    fn scalar_r(c: P, p: u32, q: u32) -> B {
        B::restricted(Clifford::scalar(4, c), p, q)
    }

    #[test]
    fn product_of_simple_poles() {
        let a = scalar_r(P::one(), 1, 0);
        let b = scalar_r(P::one(), 0, 1);
        let prod = a.checked_mul(&b).unwrap();
        assert_eq!((prod.p(), prod.q()), (1, 1));
        assert_eq!(prod.num().coeff(0), P::one());
    }

    #[test]
    fn restricted_cancellation() {
        // (xin^2 + 1) / ((xin-i)^2 (xin+i)) = 1/(xin-i)
        let s = scalar_r(&xin().pow(2) + &P::one(), 2, 1);
        assert_eq!((s.p(), s.q()), (1, 0));
        assert_eq!(s.num().coeff(0), P::one());
    }

    #[test]
    fn full_cancellation() {
        let s = B::full(Clifford::scalar(4, xi_sq(4)), 2);
        assert_eq!(s.p(), 1);
        assert_eq!(s.num().coeff(0), P::one());
    }

    #[test]
    fn derivative_of_inverse_square() {
        // d/dxin 1/(1+xin^2) = -2 xin / (1+xin^2)^2
        let s = B::full(Clifford::one(4), 1).restrict().d_xi_n();
        let expect = scalar_r(&xin() * &P::from_i64(-2), 2, 2);
        assert_eq!(s, expect);
    }

    #[test]
    fn derivative_of_constant() {
        assert!(B::one(4).d_xi_n().is_zero());
    }

    #[test]
    fn x_derivative_of_inverse_norm() {
        // d/dx_n 1/|xi|^2 on |xi'| = 1 is -h'/(1+xin^2)^2
        let s = B::full(Clifford::one(4), 1).d_x_n().unwrap().restrict();
        let expect = scalar_r(-P::atom(Atom::HPrime), 2, 2);
        assert_eq!(s, expect);
    }

    #[test]
    fn x_derivative_of_frame_vector() {
        let s = B::polynomial(Clifford::generator(4, 1));
        assert!(s.d_x_n().unwrap().is_zero());
    }

    #[test]
    fn derivative_table_exhausted() {
        let s = B::scalar(4, P::atom(Atom::DA(1, 1)));
        assert!(matches!(s.d_x_n(), Err(Error::DerivativeTableExhausted(_))));
    }

    #[test]
    fn pi_plus_simple() {
        // pi^+ 1/(1+xin^2) = (-i/2)/(xin-i)
        let s = scalar_r(P::one(), 1, 1).pi_plus().unwrap();
        let expect = scalar_r(P::constant(GaussRat::from_ints(0, -1) * GaussRat::ratio(1, 2)), 1, 0);
        assert_eq!(s, expect);
    }

    #[test]
    fn pi_plus_wrong_half_plane() {
        assert!(scalar_r(P::one(), 0, 1).pi_plus().unwrap().is_zero());
    }

    #[test]
    fn pi_plus_rejects_polynomial_part() {
        let s = scalar_r(xin().pow(2), 1, 1);
        assert!(matches!(s.pi_plus(), Err(Error::PolynomialPart { .. })));
    }

    #[test]
    fn residues() {
        let one = scalar_r(P::one(), 1, 1).integrate_scalar().unwrap();
        assert_eq!(one, P::atom(Atom::Pi));
        let two = scalar_r(P::one(), 2, 2).integrate_scalar().unwrap();
        assert_eq!(two, &P::atom(Atom::Pi) * &P::ratio(1, 2));
        let bad = scalar_r(xin(), 1, 1);
        assert!(matches!(bad.integrate_scalar(), Err(Error::NonIntegrable { .. })));
    }

    #[test]
    fn residue_of_fifth_order_pole() {
        // cross-checked with an independent residue computation
        let i = P::i();
        let num = &(&(&(&i * &xin()).scale(&GaussRat::from(-5)) + &xin().pow(2).scale(&GaussRat::from(3)))
            + &(&i * &xin().pow(3)))
            + &P::one();
        let v = scalar_r(num, 5, 3).integrate_scalar().unwrap();
        assert_eq!(v, &P::atom(Atom::Pi) * &P::ratio(1, 16));
    }

    #[test]
    fn sphere_moments() {
        let x1 = P::atom(Atom::Xi(1));
        let x2 = P::atom(Atom::Xi(2));
        assert!(sphere_mean(&x1, 3).is_zero());
        assert_eq!(sphere_mean(&x1.pow(2), 3), P::ratio(1, 3));
        assert_eq!(sphere_mean(&(&x1.pow(2) * &x2.pow(2)), 5), P::ratio(1, 35));
        assert_eq!(sphere_average(&P::one(), 3), P::atom(Atom::Omega));
    }

    #[test]
    fn normal_form_preserves_sphere_mean() {
        let x1 = P::atom(Atom::Xi(1));
        let x3 = P::atom(Atom::Xi(3));
        let p = &(&x3.pow(4) * &x1.pow(2)) + &x3.pow(2);
        let nf = sphere_normal_form(&p, 4);
        assert!(nf.degree_in(Atom::Xi(3)) < 2);
        assert_eq!(sphere_mean(&p, 3), sphere_mean(&nf, 3));
    }

    #[test]
    fn inverse_of_denominators() {
        let s = B::full(Clifford::one(4), 0).scale(&xi_sq(4));
        let inv = s.try_inverse().unwrap();
        assert_eq!(inv, B::full(Clifford::one(4), 1));
        let t = scalar_r(&xin() - &P::i(), 0, 0).scale(&P::from_i64(2));
        let inv = t.try_inverse().unwrap();
        assert_eq!(inv, scalar_r(P::ratio(1, 2), 1, 0));
        assert!(scalar_r(&xin() + &P::one(), 0, 0).try_inverse().is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(scalar_r(P::one(), 2, 1).to_string(), "(1)/((xin-i)^2*(xin+i))");
        assert_eq!(B::full(Clifford::generator(4, 1), 1).to_string(), "(c(e1))/|xi|^2");
    }
}
