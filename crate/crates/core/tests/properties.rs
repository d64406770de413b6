mod common;

use num_complex::Complex64;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use residue_audit::clifford::{wick_trace, Clifford};
use residue_audit::dsl::parse_poly;
use residue_audit::gamma::{GammaRep, Matrix};
use residue_audit::oracle::{numeric_contour, rel_err, OracleConfig, SphereRule};
use residue_audit::pipeline::{boundary_case, interior_term, CaseLabel, Setting};
use residue_audit::poly::{Assignment, Atom, Poly};
use residue_audit::report::readable_poly;
use residue_audit::symbol::sphere_mean;
use residue_audit::{ExactPoly, GaussRat};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_split_the_identity(seed in any::<u64>()) {
        let f = common::random_symbol(&mut rng(seed), 1, false);
        let plus = f.pi_plus().unwrap();
        let minus = f.pi_minus().unwrap();
        prop_assert_eq!(plus.checked_add(&minus).unwrap(), f.restrict());
        prop_assert_eq!(plus.pi_plus().unwrap(), plus.clone());
        prop_assert!(minus.pi_plus().unwrap().is_zero());
    }

    #[test]
    fn residue_matches_contour_quadrature(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = common::random_symbol(&mut r, 2, true);
        let a = common::assignment(&mut r);
        let exact = f.integrate_scalar().unwrap().eval(&a).unwrap();
        let numeric = numeric_contour(&f, &a, &OracleConfig::default()).unwrap();
        prop_assert!(rel_err(numeric, exact) <= 1e-9, "{numeric} vs {exact}");
    }

    #[test]
    fn contour_converged_in_samples(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = common::random_symbol(&mut r, 2, true);
        let a = common::assignment(&mut r);
        let cfg = OracleConfig::default();
        let fine = OracleConfig { contour_samples: 2 * cfg.contour_samples, ..cfg.clone() };
        let x = numeric_contour(&f, &a, &cfg).unwrap();
        let y = numeric_contour(&f, &a, &fine).unwrap();
        prop_assert!(rel_err(x, y) < 1e-12);
    }

    #[test]
    fn normal_derivative_of_covariable_is_leibniz(s1 in any::<u64>(), s2 in any::<u64>()) {
        let f = common::random_symbol(&mut rng(s1), 1, false);
        let g = common::random_symbol(&mut rng(s2), 1, false);
        let lhs = f.checked_mul(&g).unwrap().d_xi_n();
        let rhs = f.d_xi_n().checked_mul(&g).unwrap()
            .checked_add(&f.checked_mul(&g.d_xi_n()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn clifford_product_is_associative(masks in proptest::collection::vec(0u32..64, 3), cs in proptest::collection::vec(-5i64..5, 3)) {
        let b = |k: usize| &Clifford::blade(6, masks[k], GaussRat::from(cs[k])) + &Clifford::one(6);
        let (x, y, z) = (b(0), b(1), b(2));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn vectors_anticommute_to_the_metric(u in proptest::collection::vec(-4i64..4, 4), v in proptest::collection::vec(-4i64..4, 4)) {
        let q = |w: &[i64]| w.iter().map(|&x| GaussRat::from(x)).collect::<Vec<_>>();
        let (cu, cv) = (Clifford::from_vector(4, &q(&u)).unwrap(), Clifford::from_vector(4, &q(&v)).unwrap());
        let mut anti = &cu * &cv;
        anti.add_assign(&(&cv * &cu));
        let g: i64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        prop_assert_eq!(anti, Clifford::scalar(4, GaussRat::from(-2 * g)));
    }

    #[test]
    fn wick_matches_gamma_matrices(seed in any::<u64>(), half in 1usize..=4, six in any::<bool>()) {
        use rand::Rng;
        let n = if six { 6 } else { 4 };
        let mut r = rng(seed);
        let rep = GammaRep::<Complex64>::new(n).unwrap();
        let vs: Vec<Clifford<Complex64>> = (0..2 * half)
            .map(|_| {
                let c: Vec<Complex64> = (0..n).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
                Clifford::from_vector(n, &c).unwrap()
            })
            .collect();
        let mut m = Matrix::identity(rep.dim());
        for v in &vs {
            m = &m * &rep.represent(v);
        }
        prop_assert!(rel_err(m.trace(), wick_trace(&vs).unwrap()) <= 1e-9);
    }

    #[test]
    fn sphere_mean_matches_product_rule(exps in proptest::collection::vec(0u16..=3, 3)) {
        let m = 3;
        let mut p: ExactPoly = Poly::one();
        for (k, &e) in exps.iter().enumerate() {
            p = &p * &Poly::atom_pow(Atom::Xi(k as u8 + 1), e);
        }
        let exact = sphere_mean(&p, m).eval(&Assignment::new()).unwrap().re;
        let rule = SphereRule::product_gauss(m, 9).unwrap();
        let numeric = rule.mean(|x| x.iter().zip(&exps).map(|(t, &e)| t.powi(e as i32)).product());
        prop_assert!((numeric - exact).abs() < 1e-12, "{numeric} vs {exact}");
    }
}

#[test]
fn readable_forms_parse_back() {
    for l in 1..=4 {
        for c in CaseLabel::ALL {
            let p = boundary_case::<GaussRat>(Setting::Dim4, c, l).unwrap();
            assert_eq!(parse_poly(&readable_poly(&p, 4, l), 4).unwrap(), p, "{c} l={l}");
        }
    }
    for s in Setting::ALL {
        for l in 1..=s.n() {
            let p = interior_term::<GaussRat>(s, l).unwrap();
            assert_eq!(parse_poly(&readable_poly(&p, s.n(), l), s.n()).unwrap(), p, "{s} l={l}");
        }
    }
}
