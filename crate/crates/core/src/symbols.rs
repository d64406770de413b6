//! The Dirac operator symbols at the boundary point `x_0`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::clifford::{vector_word, Clifford};
use crate::error::{Error, Result};
use crate::poly::{Atom, Poly};
use crate::scalar::Scalar;
use crate::symbol::{xi_tangential_sq, BoundarySymbol, DerivativeTable};

type Num<S> = Clifford<Poly<S>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolName {
    /// `sigma_1(D)`
    D1,
    /// `sigma_0(D)` at `x_0`
    D0,
    /// `sigma_{-1}(D^{-1})`
    DInvM1,
    /// `sigma_{-2}(D^{-1})`
    DInvM2,
    /// `sigma_{-2}(D^{-2})`
    DInv2M2,
    /// `sigma_{-3}(D^{-2})`
    DInv2M3,
}

impl SymbolName {
    pub const ALL: [SymbolName; 6] = [
        SymbolName::D1,
        SymbolName::D0,
        SymbolName::DInvM1,
        SymbolName::DInvM2,
        SymbolName::DInv2M2,
        SymbolName::DInv2M3,
    ];

    fn key(self) -> &'static str {
        match self {
            SymbolName::D1 => "sigma1(D)",
            SymbolName::D0 => "sigma0(D)",
            SymbolName::DInvM1 => "sigma-1(D^-1)",
            SymbolName::DInvM2 => "sigma-2(D^-1)",
            SymbolName::DInv2M2 => "sigma-2(D^-2)",
            SymbolName::DInv2M3 => "sigma-3(D^-2)",
        }
    }
}

impl fmt::Display for SymbolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SymbolName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SymbolName::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
    }
}

/// `c(xi') = sum_{k<n} xi_k c(e_k)`.
pub fn c_xi_tangential<S: Scalar>(n: usize) -> Num<S> {
    let comps: Vec<Poly<S>> = (1..=n)
        .map(|k| if k < n { Poly::atom(Atom::Xi(k as u8)) } else { Poly::zero() })
        .collect();
    Clifford::from_vector(n, &comps).expect("length matches rank")
}

/// `c(xi) = c(xi') + xi_n c(dx_n)`.
pub fn c_xi<S: Scalar>(n: usize) -> Num<S> {
    let mut out = c_xi_tangential(n);
    out.add_blade(1 << (n - 1), &Poly::atom(Atom::XiN));
    out
}

/// `c(dx_n) = c(e_n)`.
pub fn c_dxn<S: Scalar>(n: usize) -> Num<S> {
    Clifford::generator(n, n)
}

fn check_rank(n: usize) -> Result<()> {
    if n != 4 && n != 6 {
        return Err(Error::InvalidArgument(format!("rank must be 4 or 6, got {n}")));
    }
    Ok(())
}

/// Builds a named symbol in full form at `x_0`.
pub fn build_symbol<S: Scalar>(name: SymbolName, n: usize) -> Result<BoundarySymbol<S>> {
    check_rank(n)?;
    let t = DerivativeTable;
    let i = Poly::<S>::i();
    let cxi = c_xi::<S>(n);
    Ok(match name {
        SymbolName::D1 => BoundarySymbol::polynomial(cxi.scale(&i)),
        SymbolName::D0 => BoundarySymbol::polynomial(t.sigma0(n)),
        SymbolName::DInvM1 => BoundarySymbol::full(cxi.scale(&i), 1),
        SymbolName::DInvM2 => {
            // c(xi) sigma_0 c(xi)/|xi|^4
            //   + c(xi)/|xi|^6 c(dx_n) [d_n c(xi) |xi|^2 - c(xi) d_n |xi|^2]
            let sigma0 = t.sigma0::<S>(n);
            let first = BoundarySymbol::full(&(&cxi * &sigma0) * &cxi, 2);
            let c = BoundarySymbol::polynomial(cxi.clone());
            let nsq = BoundarySymbol::scalar(n, crate::symbol::xi_sq::<S>(n));
            let bracket = c
                .d_x_n_with(&t)?
                .checked_mul(&nsq)?
                .checked_sub(&c.checked_mul(&nsq.d_x_n_with(&t)?)?)?;
            let second = BoundarySymbol::full(&cxi * &c_dxn(n), 3).checked_mul(&bracket)?;
            first.checked_add(&second)?
        }
        SymbolName::DInv2M2 => BoundarySymbol::full(Clifford::one(n), 1),
        SymbolName::DInv2M3 => {
            // -i |xi|^-4 xi_k (Gamma^k - 2 delta^k) - 2i |xi|^-6 xi^j xi_a xi_b d_j g^ab
            let mut inner = Clifford::scalar(n, &Poly::atom(Atom::XiN) * &t.gamma_n::<S>());
            for k in 1..n {
                let d = t.delta::<S>(n, k).scale(&(&Poly::atom(Atom::Xi(k as u8)) * &Poly::from_i64(-2)));
                inner.add_assign(&d);
            }
            let first = BoundarySymbol::full(inner.scale(&-i.clone()), 2);
            let metric = &(&Poly::atom(Atom::XiN) * &Poly::atom(Atom::HPrime)) * &xi_tangential_sq::<S>(n);
            let second = BoundarySymbol::full(Clifford::scalar(n, metric.scale(&S::from_i64(2))).scale(&-i), 3);
            first.checked_add(&second)?
        }
    })
}

/// Left multiplication by `L = c(X_1) ... c(X_l)`.
pub fn apply_l<S: Scalar>(l: usize, a: &BoundarySymbol<S>) -> Result<BoundarySymbol<S>> {
    let n = a.rank();
    if l > n {
        return Err(Error::InvalidArgument(format!("word length {l} exceeds rank {n}")));
    }
    if l == 0 {
        return Ok(a.clone());
    }
    a.left_mul(&vector_word(n, l))
}

/// Outcome of the composition check `sigma(D) o sigma(D^{-1}) = 1`.
#[derive(Clone, Debug)]
pub struct InverseCheck<S> {
    pub n: usize,
    /// `sigma_1 sigma_{-1} - 1`
    pub leading_defect: BoundarySymbol<S>,
    /// The order `-1` part of the composition.
    pub first_order_defect: BoundarySymbol<S>,
}

impl<S: Scalar> InverseCheck<S> {
    pub fn leading_ok(&self) -> bool {
        self.leading_defect.is_zero()
    }

    pub fn first_order_ok(&self) -> bool {
        self.first_order_defect.is_zero()
    }

    pub fn passes(&self) -> bool {
        self.leading_ok() && self.first_order_ok()
    }
}

/// Checks both composition orders with the table's `sigma_0(D)`.
pub fn verify_symbol_inverse<S: Scalar>(n: usize) -> Result<InverseCheck<S>> {
    let sigma0 = build_symbol::<S>(SymbolName::D0, n)?;
    verify_symbol_inverse_with(n, &sigma0)
}

/// As [`verify_symbol_inverse`] with an arbitrary `sigma_0(D)`; used for
/// negative controls.
pub fn verify_symbol_inverse_with<S: Scalar>(
    n: usize,
    sigma0: &BoundarySymbol<S>,
) -> Result<InverseCheck<S>> {
    let s1 = build_symbol::<S>(SymbolName::D1, n)?;
    let m1 = build_symbol::<S>(SymbolName::DInvM1, n)?;
    let m2 = build_symbol::<S>(SymbolName::DInvM2, n)?;
    let leading_defect = s1.checked_mul(&m1)?.checked_sub(&BoundarySymbol::one(n))?;
    // -i sum_j d_{xi_j} sigma_1 d_{x_j} sigma_{-1}; only j = n survives and
    // d_{xi_n} sigma_1 = i c(e_n)
    let cross = m1.d_x_n()?.left_mul(&c_dxn(n))?;
    let first_order_defect = s1
        .checked_mul(&m2)?
        .checked_add(&sigma0.checked_mul(&m1)?)?
        .checked_add(&cross)?;
    Ok(InverseCheck {
        n,
        leading_defect,
        first_order_defect,
    })
}

/// A zero `sigma_0(D)`, for the negative control.
pub fn zero_sigma0<S: Scalar>(n: usize) -> BoundarySymbol<S> {
    BoundarySymbol::zero(n)
}

/// `1` in the given rank; convenience for callers composing symbols.
pub fn identity<S: Scalar>(n: usize) -> BoundarySymbol<S> {
    BoundarySymbol::polynomial(Clifford::scalar(n, Poly::one()))
}
