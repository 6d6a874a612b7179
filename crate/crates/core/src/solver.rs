//! Levenberg–Marquardt solution of `μ(p) = ζ` on `M`, free-action checks,
//! horizontal frames and the induced quotient metric.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::{quaternion_i, quaternion_j, quaternion_k, BlockCentral, FlatModule, MatrixPair};
use crate::linalg::{c64, column_span, singular_values, svd_full, trace, RMat};
use crate::moment::{moment, moment_jacobian, Zeta};
use crate::par;

/// Which level set is solved for: `μ = ζ`, or `μ = −ζ̃` when `ζ` is read as the
/// gauge-theoretic parameter `ζ̃`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaSign {
    #[default]
    Direct,
    Reversed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub damping: f64,
    pub damping_up: f64,
    pub damping_down: f64,
    /// Residual at which iteration stops.
    pub target: f64,
    /// Residual certifying convergence.
    pub converged: f64,
    /// Seed norm; by default `0.5·‖ζ‖^{1/2}`.
    pub seed_scale: Option<f64>,
    pub sign: ZetaSign,
    /// Consecutive rejected steps before giving up.
    pub stall_limit: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iter: 500,
            damping: 1e-3,
            damping_up: 3.0,
            damping_down: 0.3,
            target: 1e-10,
            converged: 1e-8,
            seed_scale: None,
            sign: ZetaSign::Direct,
            stall_limit: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Seed {
    Rng(u64),
    Point(MatrixPair),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub point: MatrixPair,
    /// `sqrt(Σ_a ‖μ_a − ζ_a‖²)` recomputed from the dense moment maps.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn target_coords(module: &FlatModule, z: &Zeta, sign: ZetaSign) -> Vec<f64> {
    let c = z.ft_coords(module);
    match sign {
        ZetaSign::Direct => c,
        ZetaSign::Reversed => c.into_iter().map(|x| -x).collect(),
    }
}

/// The level actually solved for, as dense matrices.
pub fn level(module: &FlatModule, z: &Zeta, sign: ZetaSign) -> [crate::linalg::CMat; 3] {
    let d = z.dense(module.iso());
    match sign {
        ZetaSign::Direct => d,
        ZetaSign::Reversed => d.map(|m| -m),
    }
}

/// `‖μ(p) − level‖` from scratch.
pub fn residual(module: &FlatModule, z: &Zeta, sign: ZetaSign, p: &MatrixPair) -> f64 {
    moment(p).distance(&level(module, z, sign))
}

fn residual_vector(module: &FlatModule, target: &[f64], x: &[f64]) -> DVector<f64> {
    let mu = moment(&module.pair(x)).ft_coords(module);
    DVector::from_iterator(mu.len(), mu.iter().zip(target).map(|(a, b)| a - b))
}

fn seed_point(module: &FlatModule, z: &Zeta, seed: Seed, opts: &SolveOptions) -> Vec<f64> {
    match seed {
        Seed::Point(p) => module.coords(&p),
        Seed::Rng(s) => {
            let scale = opts
                .seed_scale
                .unwrap_or_else(|| 0.5 * z.norm(&module.mckay.n).sqrt());
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let x: Vec<f64> = (0..module.dim()).map(|_| rng.sample(StandardNormal)).collect();
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.into_iter().map(|v| v * scale / norm).collect()
        }
    }
}

/// Damped Gauss–Newton on the basis coordinates. Non-convergence is reported
/// through `converged = false` with the best iterate.
pub fn solve_moment(module: &FlatModule, z: &Zeta, seed: Seed, opts: &SolveOptions) -> Result<SolveResult> {
    z.check_shape(module.mckay.n.len())?;
    let target = target_coords(module, z, opts.sign);
    let mut x = seed_point(module, z, seed, opts);
    let mut r = residual_vector(module, &target, &x);
    let mut lambda = opts.damping;
    let mut iterations = 0;
    let mut rejected = 0;
    while iterations < opts.max_iter && r.norm() > opts.target && rejected < opts.stall_limit {
        iterations += 1;
        let jac = moment_jacobian(module, &module.pair(&x));
        let jjt = &jac * jac.transpose();
        let mut step = None;
        while step.is_none() && rejected < opts.stall_limit {
            let mut a = jjt.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda;
            }
            let y = match a.clone().cholesky() {
                Some(ch) => ch.solve(&r),
                None => a.lu().solve(&r).unwrap_or_else(|| DVector::zeros(r.len())),
            };
            let delta = -(jac.transpose() * y);
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            let rt = residual_vector(module, &target, &trial);
            if rt.norm() < r.norm() {
                lambda = (lambda * opts.damping_down).max(1e-15);
                rejected = 0;
                step = Some((trial, rt));
            } else {
                lambda *= opts.damping_up;
                rejected += 1;
            }
        }
        match step {
            Some((trial, rt)) => {
                x = trial;
                r = rt;
            }
            None => break,
        }
    }
    let point = module.pair(&x);
    let res = residual(module, z, opts.sign, &point);
    Ok(SolveResult {
        point,
        residual: res,
        iterations,
        converged: res <= opts.converged,
    })
}

/// Independent solves, one per `(ζ, seed)` entry, in input order.
pub fn solve_batch(
    module: &FlatModule,
    jobs: &[(Zeta, u64)],
    opts: &SolveOptions,
) -> Vec<Result<SolveResult>> {
    par::map_slice(jobs, |(z, s)| solve_moment(module, z, Seed::Rng(*s), opts))
}

/// Smallest singular value of `Y ↦ ([Y,α],[Y,β])` on `f/t`.
pub fn stabilizer_check(module: &FlatModule, p: &MatrixPair) -> f64 {
    singular_values(&module.orbit_matrix(p))
        .last()
        .copied()
        .unwrap_or(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCheck {
    pub samples: usize,
    /// Samples `f` with `f·p = p` up to the tolerance.
    pub fixed: usize,
    pub min_relative_motion: f64,
}

/// Heuristic check for finite stabilizers: applies `exp(Y)` for random `Y ∈ f/t`,
/// and block phases, and counts elements that fix `p`.
pub fn discrete_stabilizer_check(module: &FlatModule, p: &MatrixPair, seed: u64, samples: usize) -> DiscreteCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = &module.algebra;
    let dims = &module.mckay.n;
    let norm = p.norm().max(f64::MIN_POSITIVE);
    let mut fixed = 0;
    let mut min_motion = f64::INFINITY;
    for s in 0..samples {
        let y = if s % 2 == 0 {
            alg.ft_basis.iter().fold(BlockCentral::zeros(dims), |acc, b| {
                acc.add(&b.scaled(std::f64::consts::PI * rng.sample::<f64, _>(StandardNormal)))
            })
        } else {
            // a phase on one nontrivial block, which is where finite stabilizers live
            let i = 1 + rng.random_range(0..dims.len().saturating_sub(1).max(1));
            let i = i.min(dims.len() - 1);
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            let mut b = BlockCentral::zeros(dims);
            b.blocks[i] = crate::linalg::CMat::identity(dims[i], dims[i]) * c64(0.0, theta);
            b
        };
        let f = module.exp_central(&y);
        let finv = f.adjoint();
        let moved = MatrixPair::new(&f * &p.alpha * &finv, &f * &p.beta * &finv);
        let motion = moved.distance(p) / norm;
        // exp(Y) close to a scalar acts trivially and says nothing
        let n = f.nrows() as f64;
        let scalar_part = trace(&f) / n;
        let off_scalar = (&f - crate::linalg::CMat::identity(f.nrows(), f.nrows()) * scalar_part).norm();
        if off_scalar < 1e-6 {
            continue;
        }
        if motion < 1e-9 {
            fixed += 1;
        }
        min_motion = min_motion.min(motion);
    }
    DiscreteCheck {
        samples,
        fixed,
        min_relative_motion: min_motion,
    }
}

/// Orthonormal basis of `ker dμ ∩ (orbit)⊥` at a solution, in basis coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizontalFrame {
    pub at: MatrixPair,
    /// Four coordinate vectors of length `4|Γ|`.
    pub vectors: Vec<Vec<f64>>,
    pub jacobian_rank: usize,
}

impl HorizontalFrame {
    pub fn matrix(&self) -> RMat {
        let dim = self.vectors.first().map_or(0, Vec::len);
        RMat::from_fn(dim, self.vectors.len(), |r, c| self.vectors[c][r])
    }

    pub fn pairs(&self, module: &FlatModule) -> Vec<MatrixPair> {
        self.vectors.iter().map(|v| module.pair(v)).collect()
    }

    /// Largest `‖dμ(v)‖` and largest `|⟨v, orbit⟩|` over the frame.
    pub fn defects(&self, module: &FlatModule) -> (f64, f64) {
        let jac = moment_jacobian(module, &self.at);
        let v = self.matrix();
        let kernel = (&jac * &v).column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        let orbit = module.orbit_matrix(&self.at);
        let cross = (orbit.transpose() * &v).amax();
        (kernel, cross)
    }
}

pub fn horizontal_frame(module: &FlatModule, p: &MatrixPair) -> Result<HorizontalFrame> {
    let cut = module.tol.kernel_cut;
    let jac = moment_jacobian(module, p);
    let (s, v) = svd_full(&jac);
    let smax = s.first().copied().unwrap_or(0.0);
    let jacobian_rank = if smax == 0.0 {
        0
    } else {
        s.iter().filter(|&&x| x > cut * smax).count()
    };
    let kernel = v.columns(jacobian_rank, v.ncols() - jacobian_rank).into_owned();
    let orbit = column_span(&module.orbit_matrix(p), cut);
    let remainder = &kernel - &orbit * (orbit.transpose() * &kernel);
    let frame = column_span(&remainder, cut);
    if frame.ncols() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            found: frame.ncols(),
        });
    }
    Ok(HorizontalFrame {
        at: p.clone(),
        vectors: frame.column_iter().map(|c| c.iter().copied().collect()).collect(),
        jacobian_rank,
    })
}

/// Flat metric and projected complex structures on a horizontal frame. Entry
/// `(r, c)` of `iq` is the `r`-th frame coordinate of `I v_c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub gram: [[f64; 4]; 4],
    pub iq: [[f64; 4]; 4],
    pub jq: [[f64; 4]; 4],
    pub kq: [[f64; 4]; 4],
}

fn to_array(m: &RMat) -> [[f64; 4]; 4] {
    let mut a = [[0.0; 4]; 4];
    for (r, row) in a.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m[(r, c)];
        }
    }
    a
}

pub fn from_array(a: &[[f64; 4]; 4]) -> RMat {
    RMat::from_fn(4, 4, |r, c| a[r][c])
}

pub fn metric_sample(module: &FlatModule, frame: &HorizontalFrame) -> Result<MetricSample> {
    let v = frame.matrix();
    let gram = v.transpose() * &v;
    let gram_inv = gram
        .clone()
        .try_inverse()
        .ok_or(Error::WrongDimension { expected: 4, found: 0 })?;
    let pairs = frame.pairs(module);
    let mut mats = Vec::with_capacity(3);
    let mut worst: f64 = 0.0;
    for op in [quaternion_i, quaternion_j, quaternion_k] {
        let mut q = RMat::zeros(4, 4);
        for (c, pair) in pairs.iter().enumerate() {
            let image = op(pair);
            let x = module.coords(&image);
            let outside_m = image.distance(&module.pair(&x));
            let xv = nalgebra::DVector::from_vec(x);
            let y = &gram_inv * (v.transpose() * &xv);
            let outside_frame = (&xv - &v * &y).norm();
            worst = worst.max(outside_m.hypot(outside_frame));
            q.set_column(c, &y);
        }
        mats.push(q);
    }
    if worst > module.tol.projection {
        return Err(Error::ProjectionDefect { defect: worst });
    }
    Ok(MetricSample {
        gram: to_array(&gram),
        iq: to_array(&mats[0]),
        jq: to_array(&mats[1]),
        kq: to_array(&mats[2]),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperkahlerDefects {
    pub i_squared: f64,
    pub j_squared: f64,
    pub k_squared: f64,
    pub ijk: f64,
    pub gram_symmetry: f64,
    /// Largest `‖Qᵀ G Q − G‖` over `Q ∈ {Iq, Jq, Kq}`.
    pub compatibility: f64,
    pub gram_min_eigenvalue: f64,
}

impl HyperkahlerDefects {
    pub fn max_defect(&self) -> f64 {
        [
            self.i_squared,
            self.j_squared,
            self.k_squared,
            self.ijk,
            self.gram_symmetry,
            self.compatibility,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max_defect() <= tol && self.gram_min_eigenvalue > 0.0
    }
}

impl MetricSample {
    pub fn defects(&self) -> HyperkahlerDefects {
        let g = from_array(&self.gram);
        let (i, j, k) = (from_array(&self.iq), from_array(&self.jq), from_array(&self.kq));
        let id = RMat::identity(4, 4);
        let minus_one = |m: RMat| (m + &id).norm();
        let compat = |q: &RMat| (q.transpose() * &g * q - &g).norm();
        HyperkahlerDefects {
            i_squared: minus_one(&i * &i),
            j_squared: minus_one(&j * &j),
            k_squared: minus_one(&k * &k),
            ijk: minus_one(&i * &j * &k),
            gram_symmetry: (&g - g.transpose()).norm(),
            compatibility: compat(&i).max(compat(&j)).max(compat(&k)),
            gram_min_eigenvalue: g.clone().symmetric_eigen().eigenvalues.min(),
        }
    }
}

/// `|tr(α²)tr(β²) − tr(αβ)²|`, which vanishes on the `Γ = Z/2` level set `μ = 0`.
pub fn cone_defect(p: &MatrixPair) -> f64 {
    let taa = trace(&(&p.alpha * &p.alpha));
    let tbb = trace(&(&p.beta * &p.beta));
    let tab = trace(&(&p.alpha * &p.beta));
    (taa * tbb - tab * tab).norm()
}

pub fn cone_oracle_a1(points: &[MatrixPair]) -> f64 {
    points.iter().map(cone_defect).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use crate::group::{Family, GroupLabel};

    fn module(family: Family, k: u32) -> FlatModule {
        FlatModule::build(GroupLabel::new(family, k).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn zero_zeta_zero_seed() {
        let m = module(Family::A, 1);
        let r = solve_moment(&m, &Zeta::zero(2), Seed::Rng(1), &SolveOptions::default()).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.converged);
        assert_eq!(r.point.norm(), 0.0);
        assert_eq!(stabilizer_check(&m, &r.point), 0.0);
        assert!(matches!(horizontal_frame(&m, &r.point), Err(Error::WrongDimension { .. })));
    }

    #[test]
    fn a1_good_zeta_gives_hyperkahler_frame() {
        let m = module(Family::A, 1);
        let z = Zeta::new([vec![1.0, -1.0], vec![0.3, -0.3], vec![0.0, 0.0]]);
        let r = solve_moment(&m, &z, Seed::Rng(42), &SolveOptions::default()).unwrap();
        assert!(r.converged, "residual {}", r.residual);
        assert!(stabilizer_check(&m, &r.point) > 1e-8);
        let frame = horizontal_frame(&m, &r.point).unwrap();
        assert_eq!(frame.jacobian_rank, 3);
        let sample = metric_sample(&m, &frame).unwrap();
        assert!(sample.defects().within(1e-6), "{:?}", sample.defects());
        let d = discrete_stabilizer_check(&m, &r.point, 3, 20);
        assert_eq!(d.fixed, 0);
    }

    #[test]
    fn cone_relation_on_explicit_pair() {
        let (a1, a2, b1) = (c64(0.7, 0.2), c64(-0.3, 0.5), c64(0.4, -0.1));
        let b2 = a2 * b1 / a1;
        let mut alpha = crate::linalg::CMat::zeros(2, 2);
        alpha[(0, 1)] = a1;
        alpha[(1, 0)] = a2;
        let mut beta = crate::linalg::CMat::zeros(2, 2);
        beta[(0, 1)] = b1;
        beta[(1, 0)] = b2;
        assert!(cone_defect(&MatrixPair::new(alpha, beta)) < 1e-15);
    }
}
