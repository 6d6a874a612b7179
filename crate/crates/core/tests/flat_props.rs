mod common;

use alequot::flat::{quaternion_i, quaternion_j, quaternion_k, BlockCentral};
use alequot::linalg::c64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{small_module, SMALL};

fn random_f(m: &alequot::FlatModule, rng: &mut ChaCha8Rng) -> nalgebra::DMatrix<alequot::linalg::C64> {
    use rand::Rng;
    let y = m.algebra.f_basis.iter().fold(BlockCentral::zeros(&m.mckay.n), |acc, b| {
        acc.add(&b.scaled(rng.random_range(-2.0..2.0)))
    });
    m.exp_central(&y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quaternion_relations(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        let tol = 1e-12 * (1.0 + p.norm());
        prop_assert!(quaternion_i(&quaternion_i(&p)).add(&p).norm() <= tol);
        prop_assert!(quaternion_j(&quaternion_j(&p)).add(&p).norm() <= tol);
        prop_assert!(quaternion_k(&quaternion_k(&p)).add(&p).norm() <= tol);
        prop_assert!(quaternion_i(&quaternion_j(&quaternion_k(&p))).add(&p).norm() <= tol);
    }

    #[test]
    fn j_is_a_skew_isometry(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (m.random_point(&mut rng, 1.0), m.random_point(&mut rng, 1.0));
        let lhs = quaternion_j(&p).inner(&quaternion_j(&q));
        prop_assert!((lhs - p.inner(&q).conj()).norm() <= 1e-10 * (1.0 + p.norm() * q.norm()));
    }

    #[test]
    fn module_closed_under_quaternions(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        for op in [quaternion_i, quaternion_j, quaternion_k] {
            prop_assert!(m.membership_defect(&op(&p)) <= 1e-9);
        }
    }

    #[test]
    fn f_action_is_quaternionic_and_isometric(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (m.random_point(&mut rng, 1.0), m.random_point(&mut rng, 1.0));
        let f = random_f(m, &mut rng);
        let (fp, fq) = (m.f_action(&f, &p).unwrap(), m.f_action(&f, &q).unwrap());
        prop_assert!((fp.real_inner(&fq) - p.real_inner(&q)).abs() <= 1e-10 * (1.0 + p.norm() * q.norm()));
        for op in [quaternion_i, quaternion_j, quaternion_k] {
            let a = m.f_action(&f, &op(&p)).unwrap();
            prop_assert!(a.distance(&op(&fp)) <= 1e-10 * (1.0 + p.norm()));
        }
        prop_assert!(m.is_member(&fp));
    }

    #[test]
    fn non_commuting_f_is_rejected(i in 1..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let n = m.order();
        let mut f = nalgebra::DMatrix::identity(n, n);
        // swapping two frame coordinates from different blocks breaks commutation
        let a = 0;
        let b = n - 1;
        f[(a, a)] = c64(0.0, 0.0);
        f[(b, b)] = c64(0.0, 0.0);
        f[(a, b)] = c64(1.0, 0.0);
        f[(b, a)] = c64(1.0, 0.0);
        let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        prop_assert!(m.f_action(&f, &p).is_err());
    }

    #[test]
    fn coordinates_round_trip(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        prop_assert!(m.pair(&m.coords(&p)).distance(&p) <= 1e-12 * (1.0 + p.norm()));
    }
}
