//! Property checks over random fields, gauges and words.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hlgf::charge::{charge, topological_charge, Route};
use hlgf::complex::build_builtin;
use hlgf::field::{random_field, random_gauge, EXACT_TOLERANCE};
use hlgf::format::{field_from_json, field_to_json};
use hlgf::gauge_group::{Backend, LoopClass};
use hlgf::laws::{check_homomorphism, check_laws, composable_pairs, WordPool};

fn surface() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("s2_five_vertex"), Just("s2_tetra")]
}

fn backend() -> impl Strategy<Value = Backend> {
    prop_oneof![Just(Backend::U1), Just(Backend::SO3), Just(Backend::SU2)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn charge_is_gauge_invariant(name in surface(), b in prop_oneof![Just(Backend::U1), Just(Backend::SO3)], seed in 0u64..10_000, gseed in any::<u64>()) {
        let c = build_builtin(name).unwrap();
        let f = random_field(&c, b, seed);
        let g = random_gauge(&c, b, &mut ChaCha8Rng::seed_from_u64(gseed));
        let q = topological_charge(&f).unwrap().value;
        prop_assert_eq!(topological_charge(&f.gauge_transform(&g).unwrap()).unwrap().value, q);
    }

    #[test]
    fn routes_agree(name in surface(), b in backend(), seed in 0u64..10_000) {
        let f = random_field(&build_builtin(name).unwrap(), b, seed);
        let q = charge(&f, Route::CoveringWord).unwrap().value;
        prop_assert_eq!(charge(&f, Route::FaceSum).unwrap().value, q);
        prop_assert_eq!(charge(&f, Route::TransitionWinding).unwrap().value, q);
    }

    #[test]
    fn gauge_action_composes(name in surface(), b in backend(), seed in 0u64..10_000, gseed in any::<u64>()) {
        let c = build_builtin(name).unwrap();
        let f = random_field(&c, b, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(gseed);
        let g = random_gauge(&c, b, &mut rng);
        let h = random_gauge(&c, b, &mut rng);
        let gh = g.iter().map(|(v, x)| (*v, x.mul(&h[v]).unwrap())).collect();
        let two_steps = f.gauge_transform(&h).unwrap().gauge_transform(&g).unwrap();
        let one_step = f.gauge_transform(&gh).unwrap();
        for (e, a) in two_steps.edges() {
            prop_assert!(a.approx_eq(&one_step.edges()[e], 1e-9));
        }
        for (s, l) in two_steps.faces() {
            prop_assert!(l.approx_eq(&one_step.faces()[s], 1e-9));
        }
    }

    #[test]
    fn fields_survive_serialization(name in prop_oneof![Just("s2_five_vertex"), Just("s2_tetra"), Just("s3_pentachoron")], b in backend(), seed in any::<u64>()) {
        let f = random_field(&build_builtin(name).unwrap(), b, seed);
        let text = serde_json::to_string(&field_to_json(&f)).unwrap();
        prop_assert_eq!(field_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), f);
    }

    #[test]
    fn u1_interchange(x in prop::array::uniform4(-20.0f64..20.0), base in prop::array::uniform2(0.0f64..std::f64::consts::TAU)) {
        // a ∘1 b and c ∘1 d composable at level 1, then glued at level 0
        let b = LoopClass::u1(base[0], x[0]);
        let a = LoopClass::u1(base[0] + x[0], x[1]);
        let d = LoopClass::u1(base[1], x[2]);
        let c = LoopClass::u1(base[1] + x[2], x[3]);
        let lhs = a.compose1(&b, 1e-9).unwrap().compose0(&c.compose1(&d, 1e-9).unwrap()).unwrap();
        let rhs = a.compose0(&c).unwrap().compose1(&b.compose0(&d).unwrap(), 1e-9).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn laws_hold(name in prop_oneof![Just("s2_five_vertex"), Just("s2_tetra"), Just("s3_pentachoron")], b in backend(), seed in any::<u64>()) {
        let c = build_builtin(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = WordPool::new(&c, 200, &mut rng);
        let f = random_field(&c, b, seed);
        let report = check_laws(&f, &pool, 10, EXACT_TOLERANCE, &mut rng);
        prop_assert!(report.passed(), "{:?}", report.failures.first());
        let pairs = composable_pairs(&pool, 20, &mut rng);
        prop_assert!(check_homomorphism(&f, &pairs, EXACT_TOLERANCE).passed());
    }
}
