use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use voltsurf::homology::betti1;
use voltsurf::random::{random_small_embedding, random_voltage_embedding};
use voltsurf::Embedding;

fn embedding(seed: u64) -> Embedding {
    random_small_embedding(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switching_and_reflection_keep_the_surface(seed in any::<u64>(), v in 0usize..6) {
        let e = embedding(seed);
        let s = e.classify_surface().unwrap();
        let v = v % e.graph().vertex_count();
        prop_assert_eq!(e.switch_vertex(v).classify_surface().unwrap(), s);
        prop_assert_eq!(e.reflect().classify_surface().unwrap(), s);
    }

    #[test]
    fn betti_is_two_minus_chi(seed in any::<u64>()) {
        let e = embedding(seed);
        prop_assert_eq!(betti1(&e) as i64, 2 - e.euler_characteristic());
    }

    #[test]
    fn derived_switching_keeps_the_lift(seed in any::<u64>(), v in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ve = random_voltage_embedding(&mut rng, 5, 7);
        let v = v % ve.base().graph().vertex_count();
        let switched = voltsurf::VoltageEmbedding::new(
            ve.base().switch_vertex(v),
            ve.group().clone(),
            ve.voltages().to_vec(),
        ).unwrap();
        let (a, b) = (ve.derived_embedding(), switched.derived_embedding());
        prop_assert_eq!(a.euler_characteristic(), b.euler_characteristic());
        prop_assert_eq!(a.is_orientable(), b.is_orientable());
    }
}
