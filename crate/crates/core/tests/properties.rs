use isospec_core::forms::{eta_form, lambda_form, torus_act, torus_push};
use isospec_core::jmaps::{
    commutant_dim, equivalence_obstruction, is_isospectral_pair, JMapPair, SignedPermutation,
    ZVector,
};
use isospec_core::mat::{char_poly, conjugate, eigenvalue_multiset, su_defect, ComplexMatrix};
use isospec_core::metrics::{gram, tangent_frame, MetricSpec};
use isospec_core::sampling::{self, stream_rng};
use num_complex::Complex64;
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, 0)
}

fn random_pair(rng: &mut ChaCha8Rng, m: usize) -> JMapPair {
    JMapPair::new(sampling::su_element(rng, m), sampling::su_element(rng, m)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn char_poly_is_conjugation_invariant(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let x = sampling::su_element(&mut r, m);
        let u = sampling::unitary(&mut r, m);
        let y = conjugate(&u, x.matrix()).unwrap();
        let scale = x.matrix().frobenius_norm().powi(m as i32).max(1.0);
        prop_assert!(char_poly(x.matrix()).max_distance(&char_poly(&y)) <= 1e-11 * scale);
    }

    #[test]
    fn eigenvalues_are_roots(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let x = sampling::su_element(&mut r, m);
        let cp = char_poly(x.matrix());
        let scale = x.matrix().frobenius_norm().max(1.0).powi(m as i32);
        for ev in eigenvalue_multiset(x.matrix()).unwrap() {
            prop_assert!(cp.eval(ev).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn skew_hermitian_spectra_are_imaginary(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let x = sampling::su_element(&mut r, m);
        let evs = eigenvalue_multiset(x.matrix()).unwrap();
        let sum: Complex64 = evs.iter().sum();
        prop_assert!(sum.norm() <= 1e-12 * x.matrix().frobenius_norm().max(1.0));
        for ev in evs {
            prop_assert!(ev.re.abs() <= 1e-12 * x.matrix().frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn bracket_stays_in_su(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let x = sampling::su_element(&mut r, m);
        let y = sampling::su_element(&mut r, m);
        let b = x.bracket(&y).unwrap();
        let (skew, trace) = su_defect(b.matrix());
        prop_assert!(skew <= 1e-12 && trace <= 1e-12);
        // antisymmetry
        let c = y.bracket(&x).unwrap();
        prop_assert!((b.matrix() + c.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn commutant_dimension_is_conjugation_invariant(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        let u = sampling::special_unitary(&mut r, m);
        // a pair sharing a diagonal factor has a nontrivial commutant
        let d = ComplexMatrix::from_diagonal(
            &(0..m).map(|k| Complex64::new(0.0, k as f64 - (m as f64 - 1.0) / 2.0)).collect::<Vec<_>>(),
        );
        let special = JMapPair::new(d.clone().try_into().unwrap(), d.scale(2.0).try_into().unwrap()).unwrap();
        for j in [random_pair(&mut r, m), special] {
            let k = j.conjugate_by(&u).unwrap();
            prop_assert_eq!(commutant_dim(&j), commutant_dim(&k));
        }
    }

    #[test]
    fn obstruction_is_an_equivalence_invariant(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        let j = random_pair(&mut r, m);
        let o = equivalence_obstruction(&j);
        let tol = 1e-10 * o.abs().max(1.0);
        let u = sampling::unitary(&mut r, m);
        prop_assert!((equivalence_obstruction(&j.conjugate_by(&u).unwrap()) - o).abs() <= tol);
        prop_assert!((equivalence_obstruction(&j.conj()) - o).abs() <= tol);
        for psi in SignedPermutation::all() {
            prop_assert!((equivalence_obstruction(&j.compose(psi)) - o).abs() <= tol);
        }
    }

    #[test]
    fn conjugate_pairs_are_isospectral(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        let j = random_pair(&mut r, m);
        let k = j.conjugate_by(&sampling::special_unitary(&mut r, m)).unwrap();
        let rep = is_isospectral_pair(&j, &k, 16).unwrap();
        prop_assert!(rep.max_residual <= 1e-9);
    }

    #[test]
    fn j_is_linear_in_z(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut r = rng(seed);
        let j = random_pair(&mut r, 3);
        let lhs = j.eval(ZVector::new(a, b));
        let rhs = j.j_z1().combine(a, j.j_z2(), b);
        prop_assert!((lhs.matrix() - rhs.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn forms_are_homogeneous_and_torus_invariant(
        seed in any::<u64>(),
        c in -4.0f64..4.0,
        s in 0.0f64..6.3,
        u in 0.0f64..6.3,
    ) {
        let mut r = rng(seed);
        let j = random_pair(&mut r, 3);
        let p = sampling::sphere_point(&mut r, 4);
        let x = sampling::hopf_horizontal(&mut r, &p);
        for form in [lambda_form, eta_form] {
            let base = form(&j, &p, &x).unwrap();
            let scaled = form(&j, &p, &x.scale(c)).unwrap();
            prop_assert!(scaled.sub(base.scale(c)).max_abs() <= 1e-12 * (1.0 + c.abs()));
            let moved = form(&j, &torus_act(s, u, &p), &torus_push(s, u, &x)).unwrap();
            prop_assert!(moved.sub(base).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn deformed_metrics_are_positive_definite(seed in any::<u64>(), size in 0.1f64..5.0) {
        let mut r = rng(seed);
        let j = random_pair(&mut r, 3);
        let j = JMapPair::new(j.j_z1().combine(size, j.j_z1(), 0.0), j.j_z2().combine(size, j.j_z2(), 0.0)).unwrap();
        let p = sampling::sphere_point(&mut r, 4);
        for spec in [MetricSpec::sphere(j.clone(), 4).unwrap(), MetricSpec::cpn(j, 4).unwrap()] {
            let g = gram(&spec, &p, &tangent_frame(&spec, &p)).unwrap();
            prop_assert!(g.min_eigenvalue() > 0.0);
        }
    }
}
