mod common;

use alequot::bridge::{
    build_sphere_sample, build_sphere_sample_gamma, flat_forms, quadrature_forms, section_from_pair,
    section_from_pair_checked, SampleStrategy,
};
use alequot::flat::MatrixPair;
use alequot::linalg::c64;
use alequot::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{small_module, SMALL};

fn strategy() -> impl Strategy<Value = SampleStrategy> {
    prop_oneof![Just(SampleStrategy::Random), Just(SampleStrategy::Design)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn forms_have_the_right_symmetry(i in 0..SMALL.len(), seed in any::<u64>(), st in strategy()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = build_sphere_sample(400, st, rng.random()).unwrap();
        let (p, q) = (m.random_point(&mut rng, 1.0), m.random_point(&mut rng, 1.0));
        let (sp, sq) = (section_from_pair(&p, &s), section_from_pair(&q, &s));
        let f = quadrature_forms(&sp, &sq, &s).unwrap();
        let b = quadrature_forms(&sq, &sp, &s).unwrap();
        let scale = 1.0 + p.norm() * q.norm();
        prop_assert!((f.g - b.g).abs() <= 1e-10 * scale);
        prop_assert!((f.omega1 + b.omega1).abs() <= 1e-12 * scale);
        prop_assert!((f.omega2 + b.omega2).abs() <= 1e-10 * scale);
        prop_assert!((f.omega3 + b.omega3).abs() <= 1e-10 * scale);
        let flat = flat_forms(&p, &q);
        prop_assert!((f.g - flat.g).abs() <= 1e-9 * scale);
        prop_assert!((f.omega1 - flat.omega1).abs() <= 1e-9 * scale);
        prop_assert!((f.omega2 - flat.omega2).abs() <= 1e-9 * scale);
        prop_assert!((f.omega3 - flat.omega3).abs() <= 1e-9 * scale);
    }

    #[test]
    fn gamma_relabelling_leaves_quadrature_unchanged(i in 0..SMALL.len(), seed in any::<u64>(), st in strategy()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = build_sphere_sample_gamma(200, st, rng.random(), &m.group).unwrap();
        let gamma = rng.random_range(0..m.order());
        let map = s.relabel(&m.group, gamma).unwrap();
        let (p, q) = (m.random_point(&mut rng, 1.0), m.random_point(&mut rng, 1.0));
        let (sp, sq) = (section_from_pair(&p, &s), section_from_pair(&q, &s));
        let base = quadrature_forms(&sp, &sq, &s).unwrap();
        // sections evaluated at the moved points are conjugates of the originals
        let iso = m.iso();
        for (k, &j) in map.iter().enumerate().take(50) {
            let direct = &sp.values[j];
            let conj = iso.conjugate(gamma, &sp.values[k]);
            prop_assert!((direct - conj).norm() <= 1e-9 * (1.0 + p.norm()));
        }
        let moved = |sec: &alequot::bridge::SectionSample| {
            let mut out = sec.clone();
            out.values = map.iter().map(|&j| sec.values[j].clone()).collect();
            out
        };
        let f = quadrature_forms(&moved(&sp), &moved(&sq), &s).unwrap();
        let scale = 1.0 + p.norm() * q.norm();
        prop_assert!((f.g - base.g).abs() <= 1e-9 * scale);
        prop_assert!((f.omega1 - base.omega1).abs() <= 1e-9 * scale);
        prop_assert!((f.omega2 - base.omega2).abs() <= 1e-9 * scale);
        prop_assert!((f.omega3 - base.omega3).abs() <= 1e-9 * scale);
    }

    #[test]
    fn non_invariant_pairs_are_rejected(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let s = build_sphere_sample(100, SampleStrategy::Random, seed).unwrap();
        let n = m.order();
        let mut alpha = nalgebra::DMatrix::zeros(n, n);
        alpha[(0, 0)] = c64(1.0, 0.0);
        let p = MatrixPair::new(alpha, nalgebra::DMatrix::zeros(n, n));
        let rejected = matches!(section_from_pair_checked(m, &p, &s), Err(Error::NotInvariant { .. }));
        prop_assert!(rejected);
    }
}
