mod common;

use alequot::pipeline::{metric_csv, parse_metric_csv};
use alequot::solver::MetricSample;
use alequot::{MatrixPair, Zeta};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{small_module, SMALL};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
    ]
}

fn matrix4() -> impl Strategy<Value = [[f64; 4]; 4]> {
    prop::array::uniform4(prop::array::uniform4(finite()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_csv_round_trips_bitwise(gram in matrix4(), iq in matrix4(), jq in matrix4(), kq in matrix4()) {
        let m = MetricSample { gram, iq, jq, kq };
        let back = parse_metric_csv(&metric_csv(&m)).unwrap();
        let bits = |s: &MetricSample| -> Vec<u64> {
            [s.gram, s.iq, s.jq, s.kq].iter().flatten().flatten().map(|x| x.to_bits()).collect()
        };
        prop_assert_eq!(bits(&back), bits(&m));
    }

    #[test]
    fn zeta_json_round_trips(c in prop::collection::vec(finite(), 3..9)) {
        let z = Zeta::new([c.clone(), c.iter().map(|x| -x).collect(), c.iter().rev().copied().collect()]);
        let back: Zeta = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn pair_json_round_trips(i in 0..SMALL.len(), seed in any::<u64>()) {
        let p = small_module(i).random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        let back: MatrixPair = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }
}
