use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tannaka_forge::algebra::AlgebraSpec;
use tannaka_forge::coalgebra::{coalgebra_check, comodule_check};
use tannaka_forge::linalg;
use tannaka_forge::mf;
use tannaka_forge::module::{FinModule, Submodule};
use tannaka_forge::report::{Report, Status};
use tannaka_forge::suite;
use tannaka_forge::tannaka;
use tannaka_forge::{Matrix, Ring, RingElem};

const RINGS: [(u64, u32, usize); 6] = [(2, 1, 1), (2, 3, 1), (3, 2, 1), (2, 1, 2), (2, 2, 2), (3, 1, 2)];

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop::sample::select(RINGS.to_vec()).prop_map(|(p, n, f)| Ring::new(p, n, f).unwrap())
}

fn elem(r: &Ring, c: &[i64]) -> RingElem {
    r.from_coeffs(&c[..r.f()])
}

fn matrix(r: &Ring, rows: usize, cols: usize, seed: u64) -> Matrix {
    suite::random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), r, rows, cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(r in ring_strategy(), a in prop::array::uniform3(-40i64..40),
                   b in prop::array::uniform3(-40i64..40), c in prop::array::uniform3(-40i64..40)) {
        let (a, b, c) = (elem(&r, &a), elem(&r, &b), elem(&r, &c));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
        if r.is_unit(&a) {
            prop_assert_eq!(r.mul(&a, &r.inv(&a).unwrap()), r.one());
        } else {
            prop_assert!(r.val(&a) >= 1);
        }
    }

    #[test]
    fn frobenius_is_a_lift(r in ring_strategy(), a in prop::array::uniform3(0i64..100), b in prop::array::uniform3(0i64..100)) {
        let (a, b) = (elem(&r, &a), elem(&r, &b));
        prop_assert_eq!(r.frobenius(&r.mul(&a, &b)), r.mul(&r.frobenius(&a), &r.frobenius(&b)));
        prop_assert_eq!(r.frobenius(&r.add(&a, &b)), r.add(&r.frobenius(&a), &r.frobenius(&b)));
        prop_assert!(r.val(&r.sub(&r.frobenius(&a), &r.pow(&a, r.p()))) >= 1);
        prop_assert_eq!(r.frobenius_pow(&a, r.f()), a.clone());
        let t = r.teichmuller(&a);
        prop_assert_eq!(r.frobenius(&t), r.pow(&t, r.p()));
    }

    #[test]
    fn elements_print_and_parse(r in ring_strategy(), a in prop::array::uniform3(0i64..100)) {
        let a = elem(&r, &a);
        prop_assert_eq!(r.parse_elem(&r.format(&a)).unwrap(), a);
    }

    #[test]
    fn smith_decomposes(r in ring_strategy(), rows in 0usize..6, cols in 0usize..6, seed in any::<u64>()) {
        let a = matrix(&r, rows, cols, seed);
        prop_assert_eq!(suite::smith_violation(&a), None);
    }

    #[test]
    fn kernel_and_image_lengths_add_up(r in ring_strategy(), rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let a = matrix(&r, rows, cols, seed);
        let k = linalg::kernel(&a);
        prop_assert!(a.mul(&k).is_zero());
        let ker = Submodule::generated(&FinModule::free(&r, cols), &k);
        let ck = linalg::cokernel_of(&a);
        let coker = FinModule::new(&r, &ck.exps).unwrap();
        // len(ker) + len(im) = len(R^cols) and len(im) + len(coker) = len(R^rows).
        let free = |k: usize| FinModule::free(&r, k).length();
        prop_assert_eq!(free(cols) - ker.module().length() + coker.length(), free(rows));
    }

    #[test]
    fn solve_finds_preimages(r in ring_strategy(), rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let a = matrix(&r, rows, cols, seed);
        let x = matrix(&r, cols, 1, seed ^ 1).column(0);
        let b = a.mul_vec(&x);
        let y = linalg::solve(&a, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&y), b);
    }
}

fn small_alg() -> impl Strategy<Value = AlgebraSpec> {
    prop::sample::select(vec![(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1)]).prop_map(|(p, n, f)| suite::alg_for(p, n, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coend_is_a_coalgebra_with_lifted_fibers(alg in small_alg(), seed in any::<u64>()) {
        let d = suite::random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), &alg);
        let cr = tannaka::coend(&d).unwrap();
        let c = &cr.coalgebra;
        prop_assert!(coalgebra_check(c.bimodule().clone(), c.comult().clone(), c.counit().clone()).is_ok());
        let lifted = tannaka::lift_coaction(&d, &cr).unwrap();
        for m in &lifted {
            prop_assert!(comodule_check(m.coalgebra(), m.module().clone(), m.rho().clone()).is_ok());
        }
        prop_assert_eq!(tannaka::check_morphisms_are_comodule_maps(&d, &lifted), None);
        prop_assert!(suite::generator_robust(&d).unwrap());
    }

    #[test]
    fn tate_sums_are_projective(p in prop::sample::select(vec![2u64, 3]), n in 1u32..3,
                                twists in prop::collection::vec(0i32..3, 1..4)) {
        let w = Ring::new(p, n, 1).unwrap();
        let x = tannaka_forge::text::tate_sum(&w, &twists).unwrap();
        prop_assert!(mf::is_mf_proj(&x));
        prop_assert_eq!(mf::mbar(&x).unwrap().mbar.length(), x.module().length());
        let h = mf::mf_hom(&x, &x).unwrap();
        prop_assert!(h.maps.iter().all(|g| mf::is_mf_morphism(&x, &x, g)));
        prop_assert!(mf::is_mf_morphism(&x, &x, &Matrix::identity(&w, x.module().len())));
    }

    #[test]
    fn report_digest_ignores_timings(names in prop::collection::vec("[a-z]{1,6}", 1..6), fail in any::<bool>()) {
        let mut a = Report::new("coend", b"input", 7);
        for n in &names {
            a.check(n.clone(), Status::Pass, serde_json::Value::Null);
        }
        if fail {
            a.check("x", Status::Fail, serde_json::Value::Null);
        }
        let mut b = a.clone();
        b.timings_ms.insert("coend".into(), 42);
        prop_assert_eq!(a.digest(), b.digest());
        prop_assert_eq!(a.exit_code(), if fail { 1 } else { 0 });
    }
}

#[test]
fn comatrix_counit_is_iso_over_galois_ring() {
    let alg = suite::alg_for(2, 2, 1);
    let c = Arc::new(tannaka_forge::coalgebra::Coalgebra::comatrix(&alg, 2));
    let cu = tannaka::counit_map(&c, &[suite::standard_comodule(&c, 2).unwrap()]).unwrap();
    assert!(cu.iso && cu.coalgebra_morphism);
}
