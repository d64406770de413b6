//! The rank-n Clifford algebra with `e_i e_j + e_j e_i = -2 delta_ij`.
//!
//! Basis words are bitmasks: bit `k - 1` set means `c(e_k)` occurs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{CoeffDisplay, Poly};
use crate::scalar::Scalar;

/// Product of two basis words: the resulting word and its sign.
pub fn blade_product(s: u32, t: u32) -> (u32, i32) {
    // each generator of t moves left past the larger generators of s
    let mut swaps = 0;
    let mut rest = t;
    while rest != 0 {
        let k = rest.trailing_zeros();
        swaps += (s >> (k + 1)).count_ones();
        rest &= rest - 1;
    }
    let squares = (s & t).count_ones();
    let sign = if (swaps + squares) % 2 == 0 { 1 } else { -1 };
    (s ^ t, sign)
}

/// `2^(n/2)`, the trace of the identity.
pub fn trace_identity(n: usize) -> i64 {
    1 << (n / 2)
}

/// An element of the Clifford algebra with coefficients in `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Clifford<R> {
    n: usize,
    terms: BTreeMap<u32, R>,
}

impl<R: Scalar> Clifford<R> {
    pub fn zero(n: usize) -> Self {
        Clifford {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, r: R) -> Self {
        Self::blade(n, 0, r)
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, R::one())
    }

    pub fn blade(n: usize, mask: u32, r: R) -> Self {
        let mut out = Self::zero(n);
        out.add_blade(mask, &r);
        out
    }

    /// `c(e_k)`, `k` counted from 1.
    pub fn generator(n: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= n, "generator index {k} out of range for rank {n}");
        Self::blade(n, 1 << (k - 1), R::one())
    }

    /// `sum_alpha components[alpha] c(e_alpha)`.
    pub fn from_vector(n: usize, components: &[R]) -> Result<Self> {
        if components.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                found: components.len(),
            });
        }
        let mut out = Self::zero(n);
        for (k, c) in components.iter().enumerate() {
            out.add_blade(1 << k, c);
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &R)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, mask: u32) -> R {
        self.terms.get(&mask).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_blade(&mut self, mask: u32, r: &R) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(r.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(r);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "rank mismatch");
        for (m, c) in &other.terms {
            self.add_blade(*m, c);
        }
    }

    /// Multiplies every coefficient by `r` (central scalar).
    pub fn scale(&self, r: &R) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_blade(*m, &c.mul_ref(r));
        }
        out
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                let (m, sign) = blade_product(s, t);
                let mut v = a.mul_ref(b);
                if sign < 0 {
                    v = -v;
                }
                out.add_blade(m, &v);
            }
        }
        Ok(out)
    }

    /// Grade-1 components `[X_1, ..., X_n]`, or an error for other grades.
    pub fn vector_components(&self) -> Result<Vec<R>> {
        let mut out = vec![R::zero(); self.n];
        for (&m, c) in &self.terms {
            if m.count_ones() != 1 {
                return Err(Error::NotAVector);
            }
            out[m.trailing_zeros() as usize] = c.clone();
        }
        Ok(out)
    }

    /// The trace functional: `tau(1) = 2^(n/2)`, `tau(e_S) = 0` otherwise.
    pub fn trace(&self) -> R {
        self.coeff(0).mul_ref(&R::from_i64(trace_identity(self.n)))
    }

    /// `tau(self * other)` without forming the full product.
    pub fn trace_product(&self, other: &Self) -> R {
        let mut acc = R::zero();
        for (&s, a) in &self.terms {
            if let Some(b) = other.terms.get(&s) {
                let (_, sign) = blade_product(s, s);
                let v = a.mul_ref(b);
                if sign < 0 {
                    acc.add_assign_ref(&-v);
                } else {
                    acc.add_assign_ref(&v);
                }
            }
        }
        acc.mul_ref(&R::from_i64(trace_identity(self.n)))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&R) -> T) -> Clifford<T> {
        let mut out = Clifford::zero(self.n);
        for (m, c) in &self.terms {
            out.add_blade(*m, &f(c));
        }
        out
    }

    pub fn try_map_coeffs<T: Scalar>(&self, f: impl Fn(&R) -> Result<T>) -> Result<Clifford<T>> {
        let mut out = Clifford::zero(self.n);
        for (m, c) in &self.terms {
            out.add_blade(*m, &f(c)?);
        }
        Ok(out)
    }
}

impl<R: Scalar> Add<&Clifford<R>> for &Clifford<R> {
    type Output = Clifford<R>;
    fn add(self, rhs: &Clifford<R>) -> Clifford<R> {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl<R: Scalar> Sub<&Clifford<R>> for &Clifford<R> {
    type Output = Clifford<R>;
    fn sub(self, rhs: &Clifford<R>) -> Clifford<R> {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl<R: Scalar> Neg for &Clifford<R> {
    type Output = Clifford<R>;
    fn neg(self) -> Clifford<R> {
        self.scale(&-R::one())
    }
}

impl<R: Scalar> Mul<&Clifford<R>> for &Clifford<R> {
    type Output = Clifford<R>;
    /// Panics on rank mismatch; see [`Clifford::checked_mul`].
    fn mul(self, rhs: &Clifford<R>) -> Clifford<R> {
        self.checked_mul(rhs).expect("Clifford rank mismatch")
    }
}

/// Sum over perfect pairings of `{0..m}` of the pairing sign times
/// `prod (-pair(a, b))`. Zero for odd `m`.
pub fn pairing_sum<R: Scalar>(m: usize, pair: &dyn Fn(usize, usize) -> R) -> R {
    fn rec<R: Scalar>(rest: &[usize], pair: &dyn Fn(usize, usize) -> R) -> R {
        if rest.is_empty() {
            return R::one();
        }
        let first = rest[0];
        let mut acc = R::zero();
        for k in 1..rest.len() {
            let mut others: Vec<usize> = rest[1..].to_vec();
            others.remove(k - 1);
            let term = (-pair(first, rest[k])).mul_ref(&rec(&others, pair));
            // moving rest[k] next to rest[0] costs k - 1 transpositions
            if (k - 1) % 2 == 0 {
                acc.add_assign_ref(&term);
            } else {
                acc.add_assign_ref(&-term);
            }
        }
        acc
    }
    if m % 2 == 1 {
        return R::zero();
    }
    let idx: Vec<usize> = (0..m).collect();
    rec(&idx, pair)
}

/// Closed-form trace of a product of grade-1 elements.
pub fn wick_trace<R: Scalar>(vectors: &[Clifford<R>]) -> Result<R> {
    let Some(first) = vectors.first() else {
        return Err(Error::InvalidArgument("empty vector list".into()));
    };
    let n = first.rank();
    let comps = vectors
        .iter()
        .map(|v| {
            if v.rank() != n {
                return Err(Error::RankMismatch(n, v.rank()));
            }
            v.vector_components()
        })
        .collect::<Result<Vec<_>>>()?;
    let g = |a: usize, b: usize| {
        let mut acc = R::zero();
        for (x, y) in comps[a].iter().zip(&comps[b]) {
            acc.add_assign_ref(&x.mul_ref(y));
        }
        acc
    };
    Ok(pairing_sum(vectors.len(), &g).mul_ref(&R::from_i64(trace_identity(n))))
}

/// `c(X_j) = sum_alpha a_{j alpha} c(e_alpha)` with symbolic components.
pub fn vector_field<S: Scalar>(n: usize, j: u8) -> Clifford<Poly<S>> {
    let comps: Vec<Poly<S>> = (1..=n as u8)
        .map(|a| Poly::atom(crate::poly::Atom::A(j, a)))
        .collect();
    Clifford::from_vector(n, &comps).expect("length matches rank")
}

/// `L = c(X_1) ... c(X_l)`.
pub fn vector_word<S: Scalar>(n: usize, l: usize) -> Clifford<Poly<S>> {
    let mut out = Clifford::one(n);
    for j in 1..=l {
        out = &out * &vector_field(n, j as u8);
    }
    out
}

fn mask_name(mask: u32) -> String {
    let mut parts = Vec::new();
    for k in 0..32 {
        if mask & (1 << k) != 0 {
            parts.push(format!("c(e{})", k + 1));
        }
    }
    parts.join("*")
}

impl<S: Scalar + CoeffDisplay> fmt::Display for Clifford<Poly<S>> {
    /// Words in (grade, subset) order, each coefficient parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut masks: Vec<u32> = self.terms.keys().copied().collect();
        masks.sort_by_key(|&m| (m.count_ones(), m.reverse_bits()));
        for (k, m) in masks.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[m];
            if *m == 0 {
                write!(f, "({c})")?;
            } else if c.len() == 1 && c.as_constant() == Some(S::one()) {
                write!(f, "{}", mask_name(*m))?;
            } else {
                write!(f, "({c})*{}", mask_name(*m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{inner_product, Atom, ExactPoly};
    use crate::scalar::GaussRat;
    use num_traits::{One, Zero};

    type C = Clifford<ExactPoly>;

    #[test]
    fn generators_square_to_minus_one() {
        let e1 = C::generator(4, 1);
        assert_eq!(&e1 * &e1, C::scalar(4, ExactPoly::from_i64(-1)));
    }

    #[test]
    fn distinct_generators_anticommute() {
        let e1 = C::generator(4, 1);
        let e2 = C::generator(4, 2);
        assert!((&(&e1 * &e2) + &(&e2 * &e1)).is_zero());
    }

    #[test]
    fn word_product() {
        let e = |k| C::generator(4, k);
        let lhs = &(&e(1) * &e(2)) * &(&e(2) * &e(3));
        assert_eq!(lhs, -&(&e(1) * &e(3)));
    }

    #[test]
    fn trace_values() {
        assert_eq!(C::one(4).trace(), ExactPoly::from_i64(4));
        assert_eq!(C::one(6).trace(), ExactPoly::from_i64(8));
        assert!(C::generator(6, 1).trace().is_zero());
        let mut w = C::one(6);
        for k in 1..=6 {
            w = &w * &C::generator(6, k);
        }
        assert!(w.trace().is_zero());
    }

    #[test]
    fn from_vector_checks_length() {
        let comps = vec![ExactPoly::one(); 3];
        assert!(matches!(
            C::from_vector(4, &comps),
            Err(Error::WrongLength { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        assert!(C::one(4).checked_mul(&C::one(6)).is_err());
    }

    #[test]
    fn two_vector_wick_trace() {
        let xs = [vector_field::<GaussRat>(4, 1), vector_field(4, 2)];
        let w = wick_trace(&xs).unwrap();
        assert_eq!(w, inner_product::<GaussRat>(1, 2, 4).scale(&GaussRat::from(-4)));
        let direct = (&xs[0] * &xs[1]).trace();
        assert_eq!(w, direct);
    }

    #[test]
    fn frame_wick_trace() {
        let e = |k| C::generator(4, k);
        assert_eq!(wick_trace(&[e(1), e(2), e(2), e(1)]).unwrap(), ExactPoly::from_i64(4));
        assert!(wick_trace(&[e(1), e(2), e(3)]).unwrap().is_zero());
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = vector_word::<GaussRat>(4, 3);
        let b = &vector_field::<GaussRat>(4, 4) * &C::generator(4, 2);
        assert_eq!(a.trace_product(&b), (&a * &b).trace());
    }

    #[test]
    fn display_orders_by_grade() {
        let x = &C::generator(4, 2) + &C::scalar(4, ExactPoly::atom(Atom::HPrime));
        assert_eq!(x.to_string(), "(h1) + c(e2)");
    }
}
