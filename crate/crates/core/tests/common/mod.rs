#![allow(dead_code)]

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use residue_audit::clifford::Clifford;
use residue_audit::poly::{Assignment, Atom, Poly};
use residue_audit::symbol::BoundarySymbol;
use residue_audit::{ExactPoly, ExactSymbol, GaussRat};

/// Small Gaussian rational with denominator at most 4.
pub fn gauss_rat(rng: &mut impl Rng) -> GaussRat {
    let den = rng.gen_range(1..=4);
    let re = GaussRat::ratio(rng.gen_range(-3..=3), den);
    let im = GaussRat::ratio(rng.gen_range(-3..=3), den);
    &re + &(&im * &GaussRat::i())
}

/// `sum_k c_k xi_n^k` for `k <= deg`, each `c_k` optionally carrying
/// `h'` or a tangential covariable when `atoms` is set.
pub fn xin_poly(rng: &mut impl Rng, deg: u32, atoms: bool) -> ExactPoly {
    let mut p = Poly::zero();
    for k in 0..=deg {
        let mut c = Poly::constant(gauss_rat(rng));
        if atoms {
            match rng.gen_range(0..3) {
                0 => c = &c * &Poly::atom(Atom::HPrime),
                1 => c = &c * &Poly::atom(Atom::Xi(1)),
                _ => {}
            }
        }
        p.add_assign_poly(&(&c * &Poly::atom_pow(Atom::XiN, k as u16)));
    }
    p
}

/// Proper restricted symbol `num / ((xi_n - i)^p (xi_n + i)^q)` in rank 4
/// with a few Clifford blades and numerator degree below `p + q - slack`.
pub fn random_symbol(rng: &mut impl Rng, slack: u32, scalar: bool) -> ExactSymbol {
    let n = 4;
    let p = rng.gen_range(1..=3u32);
    let q = rng.gen_range(slack.saturating_sub(1)..=3u32);
    let deg = (p + q).saturating_sub(slack);
    let mut num = Clifford::zero(n);
    let masks: &[u32] = if scalar { &[0] } else { &[0, 1, 6, 8, 15] };
    for &m in masks {
        if scalar || rng.gen_bool(0.6) {
            num.add_blade(m, &xin_poly(rng, deg, !scalar));
        }
    }
    BoundarySymbol::restricted(num, p, q)
}

pub fn assignment(rng: &mut impl Rng) -> Assignment {
    let mut a = Assignment::with_constants(4);
    a.set(Atom::HPrime, Complex64::new(rng.gen_range(-3.0..3.0), 0.0));
    a
}
