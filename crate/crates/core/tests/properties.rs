mod common;

use common::*;
use polyode::closedform::ClosedFormSolution;
use polyode::io;
use polyode::polysys::binomial;
use polyode::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn rhs_is_homogeneous(
        n in 2usize..=4,
        m in 2u32..=5,
        seed in any::<u64>(),
        lambda in complex(2.0),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let system = random_dense_system(n, m, &mut rng);
        let z = random_state(n, 2.0, &mut rng);
        let scaled = scale_state(&z, lambda);
        let lhs = system.evaluate_rhs(&scaled).unwrap();
        let rhs: Vec<Complex64> = system
            .evaluate_rhs(&z)
            .unwrap()
            .iter()
            .map(|v| v * lambda.powu(m))
            .collect();
        for (a, b) in lhs.iter().zip(&rhs) {
            prop_assert!((a - b).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn index_count_is_binomial(n in 1usize..=6, m in 0u32..=6) {
        let list = enumerate_multi_indices(n, m).unwrap();
        prop_assert_eq!(list.len() as u64, binomial(n as u64 + m as u64 - 1, m as u64));
        prop_assert!(list.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(list.iter().all(|i| i.degree() == m));
    }

    #[test]
    fn generation_is_deterministic(n in 2usize..=3, m in 2u32..=4, seed in 0u64..1000) {
        let a = generate_random_instance(n, m, seed, 1.0).unwrap();
        let b = generate_random_instance(n, m, seed, 1.0).unwrap();
        prop_assert_eq!(io::instance_to_json(&a), io::instance_to_json(&b));
        let ea = ClosedFormSolution::from_instance(&a).eval(0.1).unwrap();
        let eb = ClosedFormSolution::from_instance(&b).eval(0.1).unwrap();
        prop_assert_eq!(ea.0, eb.0);
    }

    #[test]
    fn instance_json_round_trips(n in 2usize..=3, m in 2u32..=4, seed in 0u64..1000, density in 0.1f64..1.0) {
        let inst = generate_random_instance(n, m, seed, density).unwrap();
        let text = io::instance_to_json(&inst);
        let back = io::instance_from_json(&text).unwrap();
        prop_assert_eq!(back.system(), inst.system());
        prop_assert_eq!(&back.z0().0, &inst.z0().0);
        prop_assert_eq!(back.k(), inst.k());
    }

    #[test]
    fn multi_index_text_round_trips(exps in proptest::collection::vec(0u32..10, 1..6)) {
        let idx = MultiIndex::new(exps);
        let back: MultiIndex = idx.to_string().parse().unwrap();
        prop_assert_eq!(back, idx);
    }

    #[test]
    fn closed_form_starts_at_initial_data(seed in 0u64..500) {
        let inst = generate_random_instance(2, 3, seed, 1.0).unwrap();
        let z = ClosedFormSolution::from_instance(&inst).eval(0.0).unwrap();
        prop_assert_eq!(&z.0, &inst.z0().0);
    }
}
