mod common;

use alequot::flat::{quaternion_j, BlockCentral};
use alequot::pipeline::random_good_zeta;
use alequot::solver::{horizontal_frame, metric_sample, residual, Seed, ZetaSign};
use alequot::{moment, solve_moment, SolveOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{e6_module, small_module, SMALL};

fn gram_spectrum(m: &alequot::FlatModule, p: &alequot::MatrixPair) -> Vec<f64> {
    let frame = horizontal_frame(m, p).unwrap();
    let s = metric_sample(m, &frame).unwrap();
    let g = nalgebra::DMatrix::from_fn(4, 4, |r, c| s.gram[r][c]);
    let mut e: Vec<f64> = g.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn converged_solutions_certify(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_good_zeta(m, &mut rng);
        let r = solve_moment(m, &z, Seed::Rng(rng.random()), &SolveOptions::default()).unwrap();
        prop_assume!(r.converged);
        // recomputed from scratch
        let mu = moment(&r.point);
        prop_assert!(mu.distance(&z.dense(m.iso())) <= 1e-8);
        prop_assert_eq!(horizontal_frame(m, &r.point).unwrap().vectors.len(), 4);
    }

    #[test]
    fn gauge_covariance(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_good_zeta(m, &mut rng);
        let start = m.random_point(&mut rng, 0.5);
        let y = m.algebra.f_basis.iter().fold(BlockCentral::zeros(&m.mckay.n), |acc, b| {
            acc.add(&b.scaled(rng.random_range(-2.0..2.0)))
        });
        let moved = m.f_action(&m.exp_central(&y), &start).unwrap();
        let opts = SolveOptions::default();
        let a = solve_moment(m, &z, Seed::Point(start), &opts).unwrap();
        let b = solve_moment(m, &z, Seed::Point(moved), &opts).unwrap();
        prop_assume!(a.converged && b.converged);
        prop_assert!(a.residual <= 1e-8 && b.residual <= 1e-8);
        let (sa, sb) = (gram_spectrum(m, &a.point), gram_spectrum(m, &b.point));
        for (x, y) in sa.iter().zip(&sb) {
            prop_assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn j_rotates_the_level(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_good_zeta(m, &mut rng);
        let r = solve_moment(m, &z, Seed::Rng(rng.random()), &SolveOptions::default()).unwrap();
        prop_assume!(r.converged);
        let jp = quaternion_j(&r.point);
        prop_assert!(residual(m, &z.rotated_by_j(), ZetaSign::Direct, &jp) <= 1e-8);
    }

    #[test]
    fn reversed_sign_solves_the_negated_level(i in 0..SMALL.len(), seed in any::<u64>()) {
        let m = small_module(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_good_zeta(m, &mut rng);
        let opts = SolveOptions { sign: ZetaSign::Reversed, ..SolveOptions::default() };
        let r = solve_moment(m, &z, Seed::Rng(rng.random()), &opts).unwrap();
        prop_assume!(r.converged);
        prop_assert!(residual(m, &z.scaled(-1.0), ZetaSign::Direct, &r.point) <= 1e-8);
    }
}

#[test]
fn e6_frame_dimension() {
    let m = e6_module();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..3 {
        let z = random_good_zeta(m, &mut rng);
        let r = solve_moment(m, &z, Seed::Rng(rng.random()), &SolveOptions::default()).unwrap();
        assert!(r.converged, "residual {}", r.residual);
        assert_eq!(horizontal_frame(m, &r.point).unwrap().vectors.len(), 4);
    }
}
