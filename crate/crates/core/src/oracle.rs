//! Brute-force numerics used to adjudicate the exact engine.
//!
//! Nothing here calls into the symbolic calculus. Every symbol is rebuilt
//! as a gamma-matrix valued function from a first-order jet of the metric
//! `dx_n^2 + h(x_n)^{-1} g` at the boundary point: `h(x_n) = 1 + h' x_n`,
//! `c(xi') = sqrt(h) sum_k xi_k gamma_k`, `|xi|^2 = h |xi'|^2 + xi_n^2` and
//! `X_j = a_j + x_n da_j`. Derivatives in `x_n` and `xi_n` are Cauchy
//! integrals over small circles, `pi^+` is the Cauchy kernel on a circle
//! about `+i`, and the `xi_n` integral over the real line is a trapezoid
//! rule after `xi_n = tan(theta)`, which is exact for rational integrands
//! of low degree.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::gamma::{GammaRep, Matrix};
use crate::pipeline::{CaseLabel, Checkpoint, Setting};
use crate::poly::{sphere_area, Assignment, Atom};
use crate::scalar::{Scalar, ToComplex64};
use crate::symbol::BoundarySymbol;

type C = Complex64;
type M = Matrix<C>;

const I: C = C::new(0.0, 1.0);

// Cauchy circles: (radius, points).
const DX: (f64, usize) = (1e-2, 8);
const DXI_LINE: (f64, usize) = (0.25, 24);
const DXI_CIRCLE: (f64, usize) = (0.2, 40);
const PI_PLUS: (f64, usize) = (0.5, 48);

/// Settings of the numeric oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub trials: usize,
    /// Radius of the circle about `+i` used by [`numeric_contour`].
    pub contour_radius: f64,
    pub contour_samples: usize,
    /// Monte Carlo points on the sphere; only the cross-check uses them.
    pub sphere_samples: usize,
    /// Degree up to which the product-Gauss sphere rule is exact.
    pub sphere_degree: usize,
    /// Trapezoid nodes for the real-line `xi_n` integral.
    pub line_samples: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 7,
            trials: 20,
            contour_radius: 0.5,
            contour_samples: 4096,
            sphere_samples: 2000,
            sphere_degree: 5,
            line_samples: 32,
            tol: 1e-9,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(self.contour_radius > 0.0 && self.contour_radius < 1.0) {
            return bad("contour radius must lie in (0, 1)");
        }
        if self.trials == 0 {
            return bad("at least one trial is needed");
        }
        if self.contour_samples < 8 || self.line_samples < 8 {
            return bad("too few quadrature samples");
        }
        if !(self.tol > 0.0) {
            return bad("tolerance must be positive");
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Relative distance used for every numeric comparison.
pub fn rel_err(a: C, b: C) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

trait Linear: Clone {
    fn zero_like(&self) -> Self;
    fn axpy(&mut self, a: C, x: &Self);
    fn finite(&self) -> bool;
}

impl Linear for C {
    fn zero_like(&self) -> Self {
        C::new(0.0, 0.0)
    }
    fn axpy(&mut self, a: C, x: &Self) {
        *self += a * x;
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Linear for M {
    fn zero_like(&self) -> Self {
        M::zero(self.dim())
    }
    fn axpy(&mut self, a: C, x: &Self) {
        self.add_scaled(x, &a);
    }
    fn finite(&self) -> bool {
        (0..self.dim()).all(|r| (0..self.dim()).all(|c| self.get(r, c).finite()))
    }
}

fn root_of_unity(k: usize, m: usize) -> C {
    C::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// `f^(order)(z0)` from `m` samples on the circle of radius `rho`.
fn cauchy<T: Linear>(f: impl Fn(C) -> Result<T>, z0: C, (rho, m): (f64, usize), order: u32) -> Result<T> {
    if order == 0 {
        return f(z0);
    }
    let mut fact = 1.0;
    for t in 2..=order {
        fact *= t as f64;
    }
    let mut acc: Option<T> = None;
    for k in 0..m {
        let w = root_of_unity(k, m);
        let v = f(z0 + w * rho)?;
        let a = w.powi(-(order as i32)) * (fact / (m as f64 * rho.powi(order as i32)));
        match acc.as_mut() {
            Some(s) => s.axpy(a, &v),
            None => {
                let mut s = v.zero_like();
                s.axpy(a, &v);
                acc = Some(s);
            }
        }
    }
    let out = acc.expect("m > 0");
    if !out.finite() {
        return Err(Error::ContourSingularity);
    }
    Ok(out)
}

/// Trapezoid rule for `\oint f` over the circle `|z - center| = radius`.
pub fn contour_integral(f: impl Fn(C) -> C, center: C, radius: f64, samples: usize) -> Result<C> {
    let mut acc = C::new(0.0, 0.0);
    for k in 0..samples {
        let w = root_of_unity(k, samples);
        let v = f(center + w * radius);
        if !v.finite() {
            return Err(Error::ContourSingularity);
        }
        acc += v * I * w * radius;
    }
    Ok(acc * (2.0 * PI / samples as f64))
}

/// Nodes and weights for `int_R f(t) dt` via `t = tan(theta)`.
pub fn line_rule(samples: usize) -> Vec<(f64, f64)> {
    let h = PI / samples as f64;
    (0..samples)
        .map(|j| {
            let t = (-PI / 2.0 + (j as f64 + 0.5) * h).tan();
            (t, h * (1.0 + t * t))
        })
        .collect()
}

/// A boundary symbol with every atom except `xi_n` replaced by a number.
#[derive(Clone, Debug)]
pub struct NumericSymbol {
    n: usize,
    blades: Vec<(u32, Vec<C>)>,
    p: u32,
    q: u32,
}

impl NumericSymbol {
    pub fn new<S: Scalar + ToComplex64>(sym: &BoundarySymbol<S>, assignment: &Assignment) -> Result<Self> {
        let r = sym.restrict();
        let mut blades = Vec::new();
        for (mask, c) in r.num().terms() {
            let cs = c
                .collect_powers(Atom::XiN)
                .iter()
                .map(|p| p.eval(assignment))
                .collect::<Result<Vec<_>>>()?;
            blades.push((mask, cs));
        }
        Ok(NumericSymbol {
            n: sym.rank(),
            blades,
            p: r.p(),
            q: r.q(),
        })
    }

    fn denominator(&self, xi: C) -> C {
        (xi - I).powi(self.p as i32) * (xi + I).powi(self.q as i32)
    }

    pub fn eval(&self, xi: C) -> Clifford<C> {
        let d = self.denominator(xi);
        let mut out = Clifford::zero(self.n);
        for (mask, cs) in &self.blades {
            let v = cs.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * xi + c);
            out.add_blade(*mask, &(v / d));
        }
        out
    }

    /// Value of a scalar symbol; errors if a non-scalar word is present.
    pub fn eval_scalar(&self, xi: C) -> Result<C> {
        if self.blades.iter().any(|(m, cs)| *m != 0 && cs.iter().any(|c| c.norm() != 0.0)) {
            return Err(Error::InvalidArgument("symbol is not scalar".into()));
        }
        Ok(self.eval(xi).coeff(0))
    }
}

/// `\oint f d xi_n` over the circle about `+i` of radius `cfg.contour_radius`.
pub fn numeric_contour<S: Scalar + ToComplex64>(
    f: &BoundarySymbol<S>,
    assignment: &Assignment,
    cfg: &OracleConfig,
) -> Result<C> {
    cfg.validate()?;
    let s = NumericSymbol::new(f, assignment)?;
    s.eval_scalar(C::new(0.0, 0.0)).or_else(|e| match e {
        Error::InvalidArgument(_) => Err(e),
        _ => Ok(C::new(0.0, 0.0)),
    })?;
    contour_integral(
        |z| s.eval(z).coeff(0),
        I,
        cfg.contour_radius,
        cfg.contour_samples,
    )
}

/// `pi^+` of a numerically instantiated symbol at a real point, by the
/// Cauchy kernel on the circle about `+i`.
pub fn numeric_pi_plus<S: Scalar + ToComplex64>(
    f: &BoundarySymbol<S>,
    assignment: &Assignment,
    xi: f64,
    cfg: &OracleConfig,
) -> Result<Clifford<C>> {
    cfg.validate()?;
    let s = NumericSymbol::new(f, assignment)?;
    let mut out = Clifford::zero(s.n);
    let r = cfg.contour_radius;
    let m = cfg.contour_samples;
    for k in 0..m {
        let w = root_of_unity(k, m);
        let z = I + w * r;
        let kern = w * r / ((C::new(xi, 0.0) - z) * m as f64);
        for (mask, v) in s.eval(z).terms() {
            if !v.finite() {
                return Err(Error::ContourSingularity);
            }
            out.add_blade(mask, &(v * kern));
        }
    }
    Ok(out)
}

/// A quadrature rule for the mean over the unit sphere in `R^m`.
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// Product rule exact for polynomials of degree `<= degree`: Gauss-Jacobi
    /// in the last coordinate with weight `(1 - t^2)^{(m-3)/2}`, recursively,
    /// and equispaced points on the final circle.
    pub fn product_gauss(m: usize, degree: usize) -> Result<Self> {
        match m {
            0 => Err(Error::InvalidArgument("sphere in R^0".into())),
            1 => Ok(SphereRule {
                points: vec![vec![1.0], vec![-1.0]],
                weights: vec![0.5, 0.5],
            }),
            2 => {
                let k = degree + 1;
                Ok(SphereRule {
                    points: (0..k)
                        .map(|j| {
                            let t = 2.0 * PI * j as f64 / k as f64;
                            vec![t.cos(), t.sin()]
                        })
                        .collect(),
                    weights: vec![1.0 / k as f64; k],
                })
            }
            _ => {
                let sub = Self::product_gauss(m - 1, degree)?;
                let a = FiniteAboveNegOneF64::new((m as f64 - 3.0) / 2.0).expect("m >= 3");
                let q = NonZeroUsize::new(degree / 2 + 1).expect("positive");
                let rule = GaussJacobi::new(q, a, a);
                let total: f64 = rule.as_node_weight_pairs().iter().map(|(_, w)| w).sum();
                let mut points = Vec::new();
                let mut weights = Vec::new();
                for &(t, wt) in rule.as_node_weight_pairs() {
                    let r = (1.0 - t * t).sqrt();
                    for (p, ws) in sub.points.iter().zip(&sub.weights) {
                        let mut v: Vec<f64> = p.iter().map(|x| x * r).collect();
                        v.push(t);
                        points.push(v);
                        weights.push(wt / total * ws);
                    }
                }
                Ok(SphereRule { points, weights })
            }
        }
    }

    /// Equal-weight rule from normalized Gaussian samples.
    pub fn monte_carlo(m: usize, samples: usize, rng: &mut impl Rng) -> Self {
        let points = (0..samples)
            .map(|_| loop {
                let v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
                let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if r > 1e-12 {
                    break v.into_iter().map(|x| x / r).collect();
                }
            })
            .collect();
        SphereRule {
            points,
            weights: vec![1.0 / samples as f64; samples],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

/// Numerically rebuilt symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    /// `sigma_{-1}(D^{-1}) = i c(xi) / |xi|^2`
    DInvLeading,
    /// `sigma_{-2}(D^{-1})` at the boundary point
    DInvSub,
    /// First piece of `sigma_{-2}(D^{-1})`.
    DInvE1,
    /// Second piece, entering with a minus sign.
    DInvE2,
    /// `sigma_{-2}(D^{-2}) = 1 / |xi|^2`
    D2InvLeading,
    /// `sigma_{-3}(D^{-2})` at the boundary point
    D2InvSub,
}

impl Base {
    fn for_order(setting: Setting, order: i32) -> Base {
        match (setting, order) {
            (Setting::Dim4, -1) => Base::DInvLeading,
            (Setting::Dim4, _) => Base::DInvSub,
            (Setting::Dim6, -2) => Base::D2InvLeading,
            (Setting::Dim6, _) => Base::D2InvSub,
        }
    }

    fn varies_in_x(self) -> bool {
        matches!(self, Base::DInvLeading | Base::D2InvLeading)
    }
}

/// `d_{xi_n}^after pi^+ d_{xi_n}^before d_{x_n}^dx (W base)`, with `W` the
/// vector word when `word` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    pub base: Base,
    pub word: bool,
    pub dx: u8,
    pub dxi_before: u8,
    pub pi_plus: bool,
    pub dxi_after: u8,
}

impl FactorSpec {
    pub fn plain(base: Base) -> Self {
        FactorSpec {
            base,
            word: false,
            dx: 0,
            dxi_before: 0,
            pi_plus: false,
            dxi_after: 0,
        }
    }
}

/// Which copy of the word multiplies a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    Word,
    Derivative,
}

/// Numeric jet at one tangential direction.
struct Jet<'a> {
    hp: f64,
    xt2: f64,
    cxt: M,
    gn: &'a M,
    id: M,
}

impl<'a> Jet<'a> {
    fn new(rep: &'a GammaRep<C>, hp: f64, xi_t: &[f64]) -> Self {
        let n = rep.rank();
        let mut cxt = M::zero(rep.dim());
        for (k, x) in xi_t.iter().enumerate() {
            cxt.add_scaled(rep.gamma(k + 1), &C::new(*x, 0.0));
        }
        Jet {
            hp,
            xt2: xi_t.iter().map(|x| x * x).sum(),
            cxt,
            gn: rep.gamma(n),
            id: M::identity(rep.dim()),
        }
    }

    fn h(&self, x: C) -> C {
        1.0 + self.hp * x
    }

    fn c_xi(&self, x: C, z: C) -> M {
        let mut m = self.cxt.scale(&self.h(x).sqrt());
        m.add_scaled(self.gn, &z);
        m
    }

    fn norm2(&self, x: C, z: C) -> C {
        self.h(x) * self.xt2 + z * z
    }

    fn sigma0(&self) -> M {
        self.gn.scale(&C::new(-0.75 * self.hp, 0.0))
    }

    fn base(&self, b: Base, x: C, z: C) -> Result<M> {
        if !b.varies_in_x() && x != C::new(0.0, 0.0) {
            return Err(Error::InvalidArgument(format!("{b:?} is only known at x_n = 0")));
        }
        let zero = C::new(0.0, 0.0);
        let nrm = self.norm2(x, z);
        Ok(match b {
            Base::DInvLeading => self.c_xi(x, z).scale(&(I / nrm)),
            Base::D2InvLeading => self.id.scale(&(1.0 / nrm)),
            Base::DInvSub | Base::DInvE1 | Base::DInvE2 => {
                let c = self.c_xi(zero, z);
                let dc = cauchy(|x| Ok(self.c_xi(x, z)), zero, DX, 1)?;
                let dn = cauchy(|x| Ok(self.norm2(x, z)), zero, DX, 1)?;
                let chc = &(&c * &self.sigma0()) * &c;
                let cn = &c * self.gn;
                let e1 = &chc.scale(&(1.0 / (nrm * nrm))) + &(&cn * &dc).scale(&(1.0 / (nrm * nrm)));
                let e2 = (&cn * &c).scale(&(dn / (nrm * nrm * nrm)));
                match b {
                    Base::DInvE1 => e1,
                    Base::DInvE2 => e2,
                    _ => {
                        // c H c / |xi|^4 + c c(dx_n) (d c |xi|^2 - c d|xi|^2) / |xi|^6
                        let inner = &dc.scale(&nrm) - &c.scale(&dn);
                        &chc.scale(&(1.0 / (nrm * nrm))) + &(&cn * &inner).scale(&(1.0 / (nrm * nrm * nrm)))
                    }
                }
            }
            Base::D2InvSub => {
                // -i |xi|^-4 xi_k (Gamma^k - 2 delta^k) - 2i xi^n d_n(g^{ab}) xi_a xi_b |xi|^-6
                let dn = cauchy(|x| Ok(self.norm2(x, z)), zero, DX, 1)?;
                let gamma_n = 2.5 * self.hp;
                let mut t = self.id.scale(&(z * gamma_n));
                t.add_scaled(&(&self.cxt * self.gn), &C::new(-0.5 * self.hp, 0.0));
                let mut out = t.scale(&(-I / (nrm * nrm)));
                out.add_scaled(&self.id, &(-2.0 * I * z * dn / (nrm * nrm * nrm)));
                out
            }
        })
    }

    /// The factor at every point of `etas`, split by word copy.
    fn factor(&self, spec: &FactorSpec, etas: &[f64]) -> Result<Vec<(Piece, Vec<M>)>> {
        let zero = C::new(0.0, 0.0);
        let b = spec.base;
        let level = |dx: u32| {
            move |z: C| -> Result<M> {
                if dx == 0 {
                    self.base(b, zero, z)
                } else {
                    cauchy(|x| self.base(b, x, z), zero, DX, dx)
                }
            }
        };
        let mut pieces: Vec<(Piece, u32)> = Vec::new();
        match (spec.dx, spec.word) {
            (0, _) => pieces.push((Piece::Word, 0)),
            (1, true) => {
                pieces.push((Piece::Derivative, 0));
                pieces.push((Piece::Word, 1));
            }
            (d, false) => pieces.push((Piece::Word, d as u32)),
            _ => return Err(Error::InvalidArgument("at most one x_n derivative next to the word".into())),
        }
        let mut out = Vec::new();
        for (piece, dx) in pieces {
            let g = level(dx);
            let pre = spec.dxi_before as u32;
            let post = spec.dxi_after as u32;
            let vals = if spec.pi_plus {
                let (r, m) = PI_PLUS;
                let mut samples = Vec::with_capacity(m);
                for k in 0..m {
                    let w = root_of_unity(k, m);
                    let z = I + w * r;
                    samples.push((z, w * r, cauchy(&g, z, DXI_CIRCLE, pre)?));
                }
                let mut fact = 1.0;
                for t in 2..=post {
                    fact *= t as f64;
                }
                let sign = if post % 2 == 0 { 1.0 } else { -1.0 };
                etas.iter()
                    .map(|&eta| {
                        let mut acc = M::zero(self.id.dim());
                        for (z, dz, v) in &samples {
                            let kern = *dz * sign * fact / ((C::new(eta, 0.0) - z).powi(post as i32 + 1) * m as f64);
                            acc.add_scaled(v, &kern);
                        }
                        acc
                    })
                    .collect()
            } else {
                etas.iter()
                    .map(|&eta| cauchy(&g, C::new(eta, 0.0), DXI_LINE, pre + post))
                    .collect::<Result<Vec<_>>>()?
            };
            out.push((piece, vals));
        }
        Ok(out)
    }
}

/// Accumulated `K` matrices: the quantity is `tr[W K_word] + tr[dW K_deriv]`.
#[derive(Clone, Debug)]
pub struct Kernels {
    pub word: M,
    pub deriv: M,
}

impl Kernels {
    fn zero(dim: usize) -> Self {
        Kernels {
            word: M::zero(dim),
            deriv: M::zero(dim),
        }
    }

    pub fn contract(&self, w: &M, dw: &M) -> C {
        w.trace_product(&self.word) + dw.trace_product(&self.deriv)
    }
}

/// Adds `weight * tr`-kernels of `left x right` at every `eta`.
fn accumulate(
    k: &mut Kernels,
    left: &[(Piece, Vec<M>)],
    right: &[(Piece, Vec<M>)],
    word_left: bool,
    weights: &[f64],
    scale: f64,
) {
    for (pl, lv) in left {
        for (pr, rv) in right {
            let target = if *pl == Piece::Derivative || *pr == Piece::Derivative {
                &mut k.deriv
            } else {
                &mut k.word
            };
            for ((a, b), w) in lv.iter().zip(rv).zip(weights) {
                // tr[W A B] or tr[A W B] = tr[W B A]
                let prod = if word_left { a * b } else { b * a };
                target.add_scaled(&prod, &C::new(scale * w, 0.0));
            }
        }
    }
}

fn word_left(left: &FactorSpec, right: &FactorSpec) -> Result<bool> {
    match (left.word, right.word) {
        (true, false) => Ok(true),
        (false, true) => Ok(false),
        _ => Err(Error::InvalidArgument("exactly one factor carries the word".into())),
    }
}

/// Factor pair of a boundary case: `d_{x_n}^j d_{xi_n}^k pi^+ sigma_r(L D^{-m})`
/// against `d_{xi_n}^{j+1} d_{x_n}^k sigma_l(D^{-m})`. `None` for case aI,
/// whose right factor carries a tangential `x` derivative and so vanishes
/// identically for the jet.
pub fn case_factor_specs(setting: Setting, label: CaseLabel) -> Option<(FactorSpec, FactorSpec)> {
    let [hi, _] = setting.orders();
    let other = setting.order_sum() + 2;
    let (r, l, j, k) = match label {
        CaseLabel::AI => return None,
        CaseLabel::AII => (hi, hi, 1, 0),
        CaseLabel::AIII => (hi, hi, 0, 1),
        CaseLabel::B => (-2, other, 0, 0),
        CaseLabel::C => (other, -2, 0, 0),
    };
    Some((
        FactorSpec {
            base: Base::for_order(setting, r),
            word: true,
            dx: j,
            dxi_before: 0,
            pi_plus: true,
            dxi_after: k,
        },
        FactorSpec {
            base: Base::for_order(setting, l),
            word: false,
            dx: k,
            dxi_before: j + 1,
            pi_plus: false,
            dxi_after: 0,
        },
    ))
}

/// `(-i)^{j+k+1} / (j+k+1)!` for the case.
fn case_prefactor(label: CaseLabel) -> C {
    match label {
        CaseLabel::AI => C::new(0.0, 0.0),
        CaseLabel::AII | CaseLabel::AIII => (-I).powi(2) / 2.0,
        CaseLabel::B | CaseLabel::C => -I,
    }
}

/// Factor pair of a checkpoint integrand.
pub fn checkpoint_factor_specs(cp: Checkpoint) -> (FactorSpec, FactorSpec) {
    let setting = cp.setting();
    let [hi, lo] = setting.orders();
    let hi = Base::for_order(setting, hi);
    let lo = Base::for_order(setting, lo);
    let left = |base, dx, after| FactorSpec {
        base,
        word: true,
        dx,
        dxi_before: 0,
        pi_plus: true,
        dxi_after: after,
    };
    let right = |base, dx, before| FactorSpec {
        dx,
        dxi_before: before,
        ..FactorSpec::plain(base)
    };
    match cp {
        Checkpoint::Dim4AII | Checkpoint::Dim6AII => (left(hi, 1, 0), right(hi, 0, 2)),
        Checkpoint::Dim4AIII => (left(hi, 0, 1), right(hi, 1, 1)),
        Checkpoint::Dim6AIII => (left(hi, 0, 2), right(hi, 1, 0)),
        Checkpoint::Dim4BE2 => (left(Base::DInvE2, 0, 0), right(hi, 0, 1)),
        Checkpoint::Dim4BE1 => (left(Base::DInvE1, 0, 0), right(hi, 0, 1)),
        Checkpoint::Dim4C => (left(hi, 0, 0), right(lo, 0, 1)),
        Checkpoint::Dim6B => (left(hi, 0, 1), right(lo, 0, 0)),
        Checkpoint::Dim6C => (
            FactorSpec {
                dxi_before: 1,
                pi_plus: true,
                ..FactorSpec::plain(hi)
            },
            FactorSpec {
                word: true,
                ..FactorSpec::plain(lo)
            },
        ),
    }
}

/// The vector word `c(X_1) ... c(X_l)` and its `x_n` derivative at the
/// boundary point.
pub fn numeric_word(rep: &GammaRep<C>, assignment: &Assignment, l: usize) -> Result<(M, M)> {
    let n = rep.rank();
    let vec_of = |atom: fn(u8, u8) -> Atom, j: usize| -> Result<M> {
        let mut m = M::zero(rep.dim());
        for a in 1..=n {
            let at = atom(j as u8, a as u8);
            let v = assignment
                .get(at)
                .ok_or_else(|| Error::MissingAssignment(at.to_string()))?;
            m.add_scaled(rep.gamma(a), &v);
        }
        Ok(m)
    };
    let mut w = M::identity(rep.dim());
    let mut dw = M::zero(rep.dim());
    for j in 1..=l {
        let c = vec_of(Atom::A, j)?;
        let dc = vec_of(Atom::DA, j)?;
        dw = &(&dw * &c) + &(&w * &dc);
        w = &w * &c;
    }
    Ok((w, dw))
}

fn h_prime(assignment: &Assignment) -> Result<f64> {
    assignment
        .get(Atom::HPrime)
        .map(|v| v.re)
        .ok_or_else(|| Error::MissingAssignment(Atom::HPrime.to_string()))
}

/// Random numeric assignment for rank `n` and word length `l`: nonzero
/// integers in `[-3, 3]` for `h'` and `s`, integers in `[-3, 3]` for `a`
/// and `da`, true values for `pi`, `Omega` and the trace of the identity.
pub fn random_assignment(n: usize, l: usize, rng: &mut impl Rng) -> Assignment {
    let mut a = Assignment::with_constants(n);
    for atom in [Atom::HPrime, Atom::SCurv] {
        let v = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { -1 } else { 1 };
        a.set(atom, C::new(v as f64, 0.0));
    }
    let mut int = || C::new(rng.gen_range(-3..=3) as f64, 0.0);
    for j in 1..=l.max(2) as u8 {
        for al in 1..=n as u8 {
            a.set(Atom::A(j, al), int());
            a.set(Atom::DA(j, al), int());
        }
    }
    a
}

/// `cfg.trials` assignments drawn from `cfg.seed`.
pub fn trial_assignments(n: usize, l: usize, cfg: &OracleConfig) -> Vec<Assignment> {
    let mut rng = cfg.rng();
    (0..cfg.trials).map(|_| random_assignment(n, l, &mut rng)).collect()
}

/// Numeric replay of boundary cases and checkpoints, caching the
/// word-independent kernels per `(setting, case, h')`.
pub struct Oracle {
    cfg: OracleConfig,
    reps: HashMap<usize, GammaRep<C>>,
    kernels: HashMap<(Setting, CaseLabel, u64), Kernels>,
}

impl Oracle {
    pub fn new(cfg: OracleConfig) -> Result<Self> {
        cfg.validate()?;
        let mut reps = HashMap::new();
        for n in [4, 6] {
            reps.insert(n, GammaRep::new(n)?);
        }
        Ok(Oracle {
            cfg,
            reps,
            kernels: HashMap::new(),
        })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    pub fn rep(&self, setting: Setting) -> &GammaRep<C> {
        &self.reps[&setting.n()]
    }

    fn kernels_over(&self, setting: Setting, specs: (FactorSpec, FactorSpec), hp: f64, rule: &SphereRule) -> Result<Kernels> {
        let rep = self.rep(setting);
        let (left, right) = specs;
        let wl = word_left(&left, &right)?;
        let line = line_rule(self.cfg.line_samples);
        let etas: Vec<f64> = line.iter().map(|(t, _)| *t).collect();
        let lw: Vec<f64> = line.iter().map(|(_, w)| *w).collect();
        let mut k = Kernels::zero(rep.dim());
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let jet = Jet::new(rep, hp, p);
            let lv = jet.factor(&left, &etas)?;
            let rv = jet.factor(&right, &etas)?;
            accumulate(&mut k, &lv, &rv, wl, &lw, *w);
        }
        Ok(k)
    }

    /// Kernels of a case with the prefactor and the sphere volume included.
    pub fn case_kernels(&mut self, setting: Setting, label: CaseLabel, hp: f64) -> Result<Kernels> {
        let key = (setting, label, hp.to_bits());
        if let Some(k) = self.kernels.get(&key) {
            return Ok(k.clone());
        }
        let dim = self.rep(setting).dim();
        let k = match case_factor_specs(setting, label) {
            None => Kernels::zero(dim),
            Some(specs) => {
                let rule = SphereRule::product_gauss(setting.n() - 1, self.cfg.sphere_degree)?;
                let raw = self.kernels_over(setting, specs, hp, &rule)?;
                let s = case_prefactor(label) * sphere_area(setting.n() - 1);
                Kernels {
                    word: raw.word.scale(&s),
                    deriv: raw.deriv.scale(&s),
                }
            }
        };
        self.kernels.insert(key, k.clone());
        Ok(k)
    }

    /// Numeric value of one boundary case under the assignment.
    pub fn boundary_case(&mut self, setting: Setting, label: CaseLabel, l: usize, assignment: &Assignment) -> Result<C> {
        let hp = h_prime(assignment)?;
        let k = self.case_kernels(setting, label, hp)?;
        let (w, dw) = numeric_word(self.rep(setting), assignment, l)?;
        Ok(k.contract(&w, &dw))
    }

    /// Interior term `-(n-2) (4 pi)^{n/2} / (12 (n/2-1)!) s tr[L]` with the
    /// trace of the word taken on matrices.
    pub fn interior(&self, setting: Setting, l: usize, assignment: &Assignment) -> Result<C> {
        let n = setting.n();
        let s = assignment
            .get(Atom::SCurv)
            .ok_or_else(|| Error::MissingAssignment(Atom::SCurv.to_string()))?;
        let fact: f64 = (1..n / 2).map(|k| k as f64).product();
        let c = -((n - 2) as f64) * (4.0 * PI).powi(n as i32 / 2) / (12.0 * fact);
        let (w, _) = numeric_word(self.rep(setting), assignment, l)?;
        Ok(w.trace() * s * c)
    }

    /// Monte Carlo estimate of a boundary case: mean and standard error.
    pub fn boundary_case_monte_carlo(
        &self,
        setting: Setting,
        label: CaseLabel,
        l: usize,
        assignment: &Assignment,
        rng: &mut impl Rng,
    ) -> Result<(C, f64)> {
        let Some(specs) = case_factor_specs(setting, label) else {
            return Ok((C::new(0.0, 0.0), 0.0));
        };
        let hp = h_prime(assignment)?;
        let (w, dw) = numeric_word(self.rep(setting), assignment, l)?;
        let s = case_prefactor(label) * sphere_area(setting.n() - 1);
        let rule = SphereRule::monte_carlo(setting.n() - 1, self.cfg.sphere_samples.max(2), rng);
        let mut vals = Vec::with_capacity(rule.len());
        for p in &rule.points {
            let one = SphereRule {
                points: vec![p.clone()],
                weights: vec![1.0],
            };
            let k = self.kernels_over(setting, specs, hp, &one)?;
            vals.push(k.contract(&w, &dw) * s);
        }
        let m = vals.len() as f64;
        let mean = vals.iter().sum::<C>() / m;
        let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (m - 1.0);
        Ok((mean, (var / m).sqrt()))
    }

    /// Checkpoint integrand at `xi_n`, averaged over `|xi'| = 1`, for the
    /// word of length 2.
    pub fn checkpoint(&self, cp: Checkpoint, assignment: &Assignment, xi_n: f64) -> Result<C> {
        let setting = cp.setting();
        let hp = h_prime(assignment)?;
        let specs = checkpoint_factor_specs(cp);
        let wl = word_left(&specs.0, &specs.1)?;
        let rep = self.rep(setting);
        let rule = SphereRule::product_gauss(setting.n() - 1, self.cfg.sphere_degree)?;
        let mut k = Kernels::zero(rep.dim());
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let jet = Jet::new(rep, hp, p);
            let lv = jet.factor(&specs.0, &[xi_n])?;
            let rv = jet.factor(&specs.1, &[xi_n])?;
            accumulate(&mut k, &lv, &rv, wl, &[1.0], *w);
        }
        let (w, dw) = numeric_word(rep, assignment, 2)?;
        Ok(k.contract(&w, &dw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_symbol;
    use crate::pipeline::{boundary_case, checkpoint_integrand};
    use crate::scalar::GaussRat;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn contour_of_simple_pole_pair_is_pi() {
        let f = parse_symbol("1/((xin-i)*(xin+i))", 4).unwrap();
        let v = numeric_contour(&f, &Assignment::new(), &cfg()).unwrap();
        assert!((v - C::new(PI, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn contour_without_inner_pole_vanishes() {
        let f = parse_symbol("1/(xin+i)^3", 4).unwrap();
        let v = numeric_contour(&f, &Assignment::new(), &cfg()).unwrap();
        assert!(v.norm() < 1e-10);
    }

    #[test]
    fn contour_radius_is_checked() {
        let f = parse_symbol("1/(xin+i)", 4).unwrap();
        let bad = OracleConfig {
            contour_radius: 1.5,
            ..cfg()
        };
        assert!(matches!(
            numeric_contour(&f, &Assignment::new(), &bad),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn pole_on_contour_is_reported() {
        let s = NumericSymbol {
            n: 4,
            blades: vec![(0, vec![C::new(1.0, 0.0)])],
            p: 0,
            q: 0,
        };
        let r = contour_integral(|z| s.eval(z).coeff(0) / (z - C::new(0.5, 1.0)), I, 0.5, 4);
        assert_eq!(r, Err(Error::ContourSingularity));
    }

    #[test]
    fn line_rule_integrates_rationals() {
        let v: f64 = line_rule(32).iter().map(|(t, w)| w / (1.0 + t * t).powi(2)).sum();
        assert!((v - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn product_gauss_moments() {
        // xi_1^2 on S^2 -> 1/3, xi_1^2 xi_2^2 on S^4 -> 1/35
        let s2 = SphereRule::product_gauss(3, 5).unwrap();
        assert!((s2.mean(|p| p[0] * p[0]) - 1.0 / 3.0).abs() < 1e-14);
        let s4 = SphereRule::product_gauss(5, 5).unwrap();
        assert!((s4.mean(|p| p[0] * p[0] * p[1] * p[1]) - 1.0 / 35.0).abs() < 1e-14);
        assert!((s4.mean(|p| p[3].powi(4)) - 3.0 / 35.0).abs() < 1e-14);
        assert!(s4.mean(|p| p[2] * p[4]).abs() < 1e-14);
    }

    #[test]
    fn monte_carlo_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = SphereRule::monte_carlo(3, 20000, &mut rng);
        assert!((r.mean(|p| p[0] * p[0]) - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn numeric_pi_plus_keeps_upper_poles() {
        let f = parse_symbol("1/((xin-i)^2*(xin+i))", 4).unwrap();
        let pp = f.pi_plus().unwrap();
        let a = Assignment::new();
        let num = numeric_pi_plus(&f, &a, 0.3, &cfg()).unwrap().coeff(0);
        let exact = NumericSymbol::new(&pp, &a).unwrap().eval_scalar(C::new(0.3, 0.0)).unwrap();
        assert!(rel_err(num, exact) < 1e-12);
    }

    #[test]
    fn dim4_case_aiii_against_engine() {
        let mut o = Oracle::new(cfg()).unwrap();
        let mut rng = cfg().rng();
        let a = random_assignment(4, 2, &mut rng);
        let sym = boundary_case::<GaussRat>(Setting::Dim4, CaseLabel::AIII, 2).unwrap();
        let exact = sym.eval(&a).unwrap();
        let num = o.boundary_case(Setting::Dim4, CaseLabel::AIII, 2, &a).unwrap();
        assert!(rel_err(num, exact) < 1e-9, "{num} vs {exact}");
    }

    #[test]
    fn checkpoint_matches_engine_pointwise() {
        let o = Oracle::new(cfg()).unwrap();
        let mut rng = cfg().rng();
        let a = random_assignment(4, 2, &mut rng);
        let sym = checkpoint_integrand::<GaussRat>(Checkpoint::Dim4C).unwrap();
        let exact = NumericSymbol::new(&sym, &a).unwrap().eval_scalar(C::new(0.7, 0.0)).unwrap();
        let num = o.checkpoint(Checkpoint::Dim4C, &a, 0.7).unwrap();
        assert!(rel_err(num, exact) < 1e-9, "{num} vs {exact}");
    }
}
