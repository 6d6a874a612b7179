mod common;

use alequot::flat::BlockCentral;
use alequot::linalg::{c64, commutator, frobenius, trace};
use alequot::{is_good_zeta, moment, Zeta};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{small_module, SMALL};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moment_is_equivariant(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = m.random_point(&mut rng, 1.0);
        let y = m.algebra.f_basis.iter().fold(BlockCentral::zeros(&m.mckay.n), |acc, b| {
            acc.add(&b.scaled(rng.random_range(-2.0..2.0)))
        });
        let f = m.exp_central(&y);
        let moved = moment(&m.f_action(&f, &p).unwrap());
        let before = moment(&p);
        let finv = f.adjoint();
        for (a, b) in moved.components().iter().zip(before.components()) {
            prop_assert!(frobenius(&(*a - &f * b * &finv)) <= 1e-9 * (1.0 + p.norm().powi(2)));
        }
    }

    #[test]
    fn moment_values_are_traceless_and_invariant(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        let mu = moment(&p);
        for c in mu.components() {
            prop_assert!(trace(c).norm() <= 1e-10 * (1.0 + p.norm().powi(2)));
        }
        let d = mu.invariant_defects(m.iso());
        prop_assert!(d.anti_hermitian <= 1e-10 && d.commutation <= 1e-9 * (1.0 + p.norm().powi(2)));
    }

    #[test]
    fn derivative_along_orbits_is_a_commutator(i in 0..SMALL.len(), seed in any::<u64>()) {
        // dμ_p([Y, p]) = [Y, μ(p)]
        let m = small_module(i);
        let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(seed), 1.0);
        let mu = moment(&p);
        let h = 1e-3;
        for (y, v) in m.algebra.ft_basis.iter().zip(m.orbit_directions(&p)) {
            let yd = y.to_dense(m.iso());
            let plus = moment(&p.add(&v.scaled(c64(h, 0.0))));
            let minus = moment(&p.sub(&v.scaled(c64(h, 0.0))));
            for ((a, b), c) in plus.components().iter().zip(minus.components()).zip(mu.components()) {
                let fd = (*a - b) / c64(2.0 * h, 0.0);
                prop_assert!(frobenius(&(fd - commutator(&yd, c))) <= 1e-8 * (1.0 + p.norm().powi(2)));
            }
        }
    }

    #[test]
    fn goodness_is_scale_invariant(i in 0..SMALL.len(), seed in any::<u64>(), exp in -3i32..=3) {
        let m = small_module(i);
        let z = Zeta::random(&m.mckay, &mut ChaCha8Rng::seed_from_u64(seed));
        let s = 10f64.powi(exp);
        prop_assert_eq!(is_good_zeta(&z, &m.mckay).good, is_good_zeta(&z.scaled(s), &m.mckay).good);
        prop_assert_eq!(is_good_zeta(&z, &m.mckay).good, is_good_zeta(&z.scaled(-s), &m.mckay).good);
    }

    #[test]
    fn zero_is_never_good(i in 0..SMALL.len()) {
        let m = small_module(i);
        let v = is_good_zeta(&Zeta::zero(m.mckay.n.len()), &m.mckay);
        prop_assert!(!v.good);
        prop_assert!(v.witness.is_some());
    }
}
