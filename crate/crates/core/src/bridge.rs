//! Equivariant sections over a sampled three-sphere.
//!
//! A pair `(α, β)` gives the section `λ(z₁, z₂) = z₁α + z₂β`. Sample sets are
//! closed under `J(z₁, z₂) = (−z̄₂, z̄₁)`, which makes the second moments
//! `Σw|z₁|² = Σw|z₂|²` and `Σw z₁z̄₂ = 0` hold exactly; weights are scaled so
//! that `Σw|z₁|² = 1` (total mass 2). With this normalization every quadrature
//! form of holomorphic sections equals its flat-module counterpart.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::flat::{quaternion_j, quaternion_k, FlatModule, MatrixPair};
use crate::group::FiniteSubgroup;
use crate::linalg::{c64, commutator, frobenius, hermitian_pairing, CMat, C64};
use crate::par;
use crate::report::Check;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStrategy {
    #[default]
    Random,
    Design,
}

impl std::str::FromStr for SampleStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(SampleStrategy::Random),
            "design" => Ok(SampleStrategy::Design),
            other => Err(Error::InvalidInput(format!("unknown sample strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SphereSample {
    pub points: Vec<[C64; 2]>,
    pub weights: Vec<f64>,
    /// Index of `J(p)` for each point `p`; applying it twice gives `−p`, the
    /// same base point.
    pub tau_pairing: Vec<usize>,
    /// Number of group elements each base point was multiplied by.
    pub orbit: usize,
    id: u64,
}

pub const MIN_POINTS: usize = 100;

fn j_point([z1, z2]: [C64; 2]) -> [C64; 2] {
    [-z2.conj(), z1.conj()]
}

/// Right action `(z₁, z₂)·γ = (u z₁ − v̄ z₂, v z₁ + ū z₂)`.
pub fn right_act(p: [C64; 2], u: C64, v: C64) -> [C64; 2] {
    [u * p[0] - v.conj() * p[1], v * p[0] + u.conj() * p[1]]
}

/// Gauss–Legendre nodes and weights on `[0, 1]` by the Golub–Welsch method.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(m, m, |i, j| {
        if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            ((x + 1.0) / 2.0, w / 2.0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn base_points(n_base: usize, strategy: SampleStrategy, seed: u64) -> Vec<([C64; 2], f64)> {
    match strategy {
        SampleStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n_base)
                .map(|_| {
                    let mut x = [0.0f64; 4];
                    for v in &mut x {
                        *v = rng.sample(StandardNormal);
                    }
                    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    ([c64(x[0] / r, x[1] / r), c64(x[2] / r, x[3] / r)], 1.0)
                })
                .collect()
        }
        SampleStrategy::Design => {
            let m = ((n_base as f64).cbrt().ceil() as usize).max(2);
            let (nodes, weights) = gauss_legendre(m);
            let tau = std::f64::consts::TAU;
            let mut out = Vec::with_capacity(m * m * m);
            for (t, w) in nodes.iter().zip(&weights) {
                for a in 0..m {
                    for b in 0..m {
                        let p1 = tau * (a as f64 + 0.25) / m as f64;
                        let p2 = tau * (b as f64 + 0.5) / m as f64;
                        let z1 = C64::from_polar(t.sqrt(), p1);
                        let z2 = C64::from_polar((1.0 - t).sqrt(), p2);
                        out.push(([z1, z2], *w));
                    }
                }
            }
            out
        }
    }
}

fn assemble(base: Vec<([C64; 2], f64)>, group: Option<&FiniteSubgroup>, id: u64) -> SphereSample {
    let orbit = group.map_or(1, FiniteSubgroup::order);
    let mut points = Vec::with_capacity(base.len() * orbit * 4);
    let mut weights = Vec::with_capacity(points.capacity());
    for (p, w) in base {
        for g in 0..orbit {
            let q = match group {
                Some(gr) => right_act(p, gr.elements[g].u(), gr.elements[g].v()),
                None => p,
            };
            let jq = j_point(q);
            for s in [q, jq, [-q[0], -q[1]], [-jq[0], -jq[1]]] {
                points.push(s);
                weights.push(w);
            }
        }
    }
    let tau_pairing = (0..points.len()).map(|i| (i & !3) | ((i + 1) & 3)).collect();
    let mass: f64 = points.iter().zip(&weights).map(|(p, w)| w * p[0].norm_sqr()).sum();
    for w in &mut weights {
        *w /= mass;
    }
    SphereSample {
        points,
        weights,
        tau_pairing,
        orbit,
        id,
    }
}

fn sample_id(n: usize, strategy: SampleStrategy, seed: u64, orbit: usize) -> u64 {
    let tag = match strategy {
        SampleStrategy::Random => 1u64,
        SampleStrategy::Design => 2,
    };
    (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ seed.rotate_left(17) ^ (tag << 60) ^ (orbit as u64) << 40
}

/// At least `n` points, closed under `J` and the antipode.
pub fn build_sphere_sample(n: usize, strategy: SampleStrategy, seed: u64) -> Result<SphereSample> {
    if n < MIN_POINTS {
        return Err(Error::InvalidInput(format!("sphere samples need at least {MIN_POINTS} points, got {n}")));
    }
    let base = base_points(n.div_ceil(4), strategy, seed);
    Ok(assemble(base, None, sample_id(n, strategy, seed, 1)))
}

/// As [`build_sphere_sample`], additionally closed under the right Γ-action.
/// Point `((b·|Γ| + γ)·4 + s)` is `J^s(p_b·γ)` up to sign.
pub fn build_sphere_sample_gamma(
    n: usize,
    strategy: SampleStrategy,
    seed: u64,
    group: &FiniteSubgroup,
) -> Result<SphereSample> {
    if n < MIN_POINTS {
        return Err(Error::InvalidInput(format!("sphere samples need at least {MIN_POINTS} points, got {n}")));
    }
    let per_base = 4 * group.order();
    let base = base_points(n.div_ceil(per_base).max(1), strategy, seed);
    Ok(assemble(base, Some(group), sample_id(n, strategy, seed, group.order())))
}

impl SphereSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of `p·γ` for every point, for Γ-closed samples.
    pub fn relabel(&self, group: &FiniteSubgroup, gamma: usize) -> Option<Vec<usize>> {
        if self.orbit != group.order() || self.orbit == 1 {
            return None;
        }
        let n = self.orbit;
        Some(
            (0..self.len())
                .map(|i| {
                    let s = i % 4;
                    let g = (i / 4) % n;
                    let b = i / (4 * n);
                    ((b * n + group.mul(g, gamma)) * 4) + s
                })
                .collect(),
        )
    }

    pub fn defects(&self) -> SampleDefects {
        let mut d = SampleDefects::default();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut cross = C64::new(0.0, 0.0);
        for (p, &w) in self.points.iter().zip(&self.weights) {
            m1 += w * p[0].norm_sqr();
            m2 += w * p[1].norm_sqr();
            cross += p[0] * p[1].conj() * w;
            d.unit = d.unit.max((p[0].norm_sqr() + p[1].norm_sqr() - 1.0).abs());
        }
        d.normalization = (m1 - 1.0).abs();
        d.balance = (m1 - m2).abs();
        d.cross_moment = cross.norm();
        d.tau = self
            .points
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let q = self.points[self.tau_pairing[i]];
                let jp = j_point(p);
                (q[0] - jp[0]).norm().max((q[1] - jp[1]).norm())
            })
            .fold(0.0, f64::max);
        d.min_weight = self.weights.iter().copied().fold(f64::INFINITY, f64::min);
        d
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleDefects {
    /// `|Σw|z₁|² − 1|`
    pub normalization: f64,
    /// `|Σw|z₁|² − Σw|z₂|²|`
    pub balance: f64,
    /// `|Σw z₁z̄₂|`
    pub cross_moment: f64,
    pub unit: f64,
    pub tau: f64,
    pub min_weight: f64,
}

/// Values of `λ = z₁α + z₂β` at every sample point.
#[derive(Clone, Debug)]
pub struct SectionSample {
    pub pair: MatrixPair,
    pub values: Vec<CMat>,
    sample_id: u64,
}

pub fn section_from_pair(p: &MatrixPair, s: &SphereSample) -> SectionSample {
    let values = par::map_slice(&s.points, |&[z1, z2]| &p.alpha * z1 + &p.beta * z2);
    SectionSample {
        pair: p.clone(),
        values,
        sample_id: s.id,
    }
}

/// [`section_from_pair`] after checking that the pair is Γ-invariant.
pub fn section_from_pair_checked(module: &FlatModule, p: &MatrixPair, s: &SphereSample) -> Result<SectionSample> {
    module.require_member(p)?;
    Ok(section_from_pair(p, s))
}

fn same_sample(sec: &SectionSample, s: &SphereSample) -> Result<()> {
    if sec.sample_id != s.id || sec.values.len() != s.len() {
        return Err(Error::SampleMismatch);
    }
    Ok(())
}

/// `(JΘ)(p) = −λ(J(p))*` at every sample point.
pub fn j_on_section(sec: &SectionSample, s: &SphereSample) -> Result<Vec<CMat>> {
    same_sample(sec, s)?;
    Ok(s.tau_pairing.iter().map(|&t| -sec.values[t].adjoint()).collect())
}

/// Applies the pointwise `J` rule to raw values.
fn j_on_values(values: &[CMat], s: &SphereSample) -> Vec<CMat> {
    s.tau_pairing.iter().map(|&t| -values[t].adjoint()).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadratureForms {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub g: f64,
}

fn forms_from_values(v1: &[CMat], v2: &[CMat], jv1: &[CMat], weights: &[f64]) -> QuadratureForms {
    let mut f = QuadratureForms::default();
    for i in 0..weights.len() {
        let w = weights[i];
        let h = hermitian_pairing(&v1[i], &v2[i]);
        let hj = hermitian_pairing(&jv1[i], &v2[i]);
        f.omega1 -= w * h.im;
        f.g += w * h.re;
        f.omega2 += w * hj.re;
        f.omega3 -= w * hj.im;
    }
    f
}

/// Weighted sums of the pointwise pairings `Tr(λ₁λ₂*)` and `Tr((Jλ₁)λ₂*)`.
pub fn quadrature_forms(sec1: &SectionSample, sec2: &SectionSample, s: &SphereSample) -> Result<QuadratureForms> {
    same_sample(sec1, s)?;
    same_sample(sec2, s)?;
    let j1 = j_on_values(&sec1.values, s);
    Ok(forms_from_values(&sec1.values, &sec2.values, &j1, &s.weights))
}

/// Flat-module values of the same forms.
pub fn flat_forms(p1: &MatrixPair, p2: &MatrixPair) -> QuadratureForms {
    QuadratureForms {
        omega1: -p1.inner(p2).im,
        omega2: quaternion_j(p1).real_inner(p2),
        omega3: quaternion_k(p1).real_inner(p2),
        g: p1.real_inner(p2),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedMoment {
    /// Largest pointwise deviation of the commutator part from its mean.
    pub constancy_defect: f64,
    /// `‖∫(commutator part) − μ‖`, the identity with the closed form.
    pub direct_defect: f64,
    /// `‖∫μ̃ − μ‖`.
    pub tilde_plus_defect: f64,
    /// `‖∫μ̃ + μ‖`, the comparison under `ζ̃ = −ζ`.
    pub tilde_minus_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedMoments {
    pub mu2: ReducedMoment,
    pub mu3: ReducedMoment,
}

fn reduce(pointwise: &[CMat], weights: &[f64], closed: &CMat) -> ReducedMoment {
    let n = closed.nrows();
    let mass: f64 = weights.iter().sum();
    let integral = pointwise
        .iter()
        .zip(weights)
        .fold(CMat::zeros(n, n), |acc, (m, &w)| acc + m * c64(w, 0.0));
    let mean = &integral / c64(mass, 0.0);
    let constancy_defect = pointwise.iter().map(|m| frobenius(&(m - &mean))).fold(0.0, f64::max);
    // the moment-map integrand is minus the commutator part
    let tilde = -&integral;
    ReducedMoment {
        constancy_defect,
        direct_defect: frobenius(&(&integral - closed)),
        tilde_plus_defect: frobenius(&(&tilde - closed)),
        tilde_minus_defect: frobenius(&(&tilde + closed)),
    }
}

/// Pointwise `(1/4)([JΘ,Θ*] − [Θ,JΘ*])` and `(i/4)([JΘ,Θ*] + [Θ,JΘ*])`, compared
/// with `μ₂ = ½([α,β] + [α*,β*])` and `μ₃ = (i/2)([α*,β*] − [α,β])`.
pub fn reduced_moment_integrands(sec: &SectionSample, s: &SphereSample) -> Result<ReducedMoments> {
    let w = j_on_section(sec, s)?;
    let (p2, p3): (Vec<CMat>, Vec<CMat>) = sec
        .values
        .iter()
        .zip(&w)
        .map(|(l, jl)| {
            let a = commutator(jl, &l.adjoint());
            let b = commutator(l, &jl.adjoint());
            ((&a - &b) * c64(0.25, 0.0), (a + b) * c64(0.0, 0.25))
        })
        .unzip();
    let (al, be) = (&sec.pair.alpha, &sec.pair.beta);
    let c = commutator(al, be);
    let c_adj = commutator(&al.adjoint(), &be.adjoint());
    let mu2 = (&c + &c_adj) * c64(0.5, 0.0);
    let mu3 = (c_adj - c) * c64(0.0, 0.5);
    Ok(ReducedMoments {
        mu2: reduce(&p2, &s.weights, &mu2),
        mu3: reduce(&p3, &s.weights, &mu3),
    })
}

/// Weighted integral of `(i/2)[λ, λ*]` against `μ₁ = (i/2)([α,α*] + [β,β*])`.
/// `direct_defect` tests the identity itself; the `tilde_*` fields compare
/// `∫μ̃₁ = −∫(i/2)[λ,λ*]` with `±μ₁`. The constancy field is not meaningful here
/// and is reported for completeness.
pub fn mu1_reduction_check(sec: &SectionSample, s: &SphereSample) -> Result<ReducedMoment> {
    same_sample(sec, s)?;
    let pointwise: Vec<CMat> = sec
        .values
        .iter()
        .map(|l| commutator(l, &l.adjoint()) * c64(0.0, 0.5))
        .collect();
    let (al, be) = (&sec.pair.alpha, &sec.pair.beta);
    let mu1 = (commutator(al, &al.adjoint()) + commutator(be, &be.adjoint())) * c64(0.0, 0.5);
    Ok(reduce(&pointwise, &s.weights, &mu1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeReport {
    pub points: usize,
    pub pairs: usize,
    pub strategy: SampleStrategy,
    pub checks: Vec<Check>,
}

impl GaugeReport {
    pub fn passed(&self) -> bool {
        crate::report::all_pass(&self.checks)
    }
}

#[derive(Clone, Debug, Default)]
struct Worst {
    values: std::collections::BTreeMap<&'static str, f64>,
}

impl Worst {
    fn push(&mut self, key: &'static str, v: f64) {
        let e = self.values.entry(key).or_insert(0.0);
        *e = e.max(v);
    }

    fn get(&self, key: &str) -> f64 {
        self.values.get(key).copied().unwrap_or(0.0)
    }
}

/// Runs every section-level identity on `pairs` random points of `M`.
pub fn gauge_verify(
    module: &FlatModule,
    n: usize,
    strategy: SampleStrategy,
    seed: u64,
    pairs: usize,
) -> Result<GaugeReport> {
    let tol: &Tolerances = &module.tol;
    let sample = build_sphere_sample(n, strategy, seed)?;
    let gamma_sample = build_sphere_sample_gamma(MIN_POINTS, strategy, seed ^ 0x5a5a, &module.group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let points: Vec<MatrixPair> = (0..pairs.max(2)).map(|_| module.random_point(&mut rng, 1.0)).collect();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    let gamma = rng.random_range(0..module.order());

    let mut worst = Worst::default();
    let per_pair: Vec<Vec<(&'static str, f64)>> = par::map_range(points.len(), |idx| {
        let p = &points[idx];
        let q = &points[(idx + 1) % points.len()];
        let mut out = Vec::new();
        let sec = section_from_pair(p, &sample);
        let sec_q = section_from_pair(q, &sample);
        let scale = p.norm().max(1.0);

        // J on sections is the section of J(α, β)
        let jv = j_on_values(&sec.values, &sample);
        let target = section_from_pair(&quaternion_j(p), &sample);
        let jd = jv.iter().zip(&target.values).map(|(a, b)| frobenius(&(a - b))).fold(0.0, f64::max);
        out.push(("j_reduction", jd / scale));
        let jj = j_on_values(&jv, &sample);
        let jjd = jj.iter().zip(&sec.values).map(|(a, b)| frobenius(&(a + b))).fold(0.0, f64::max);
        out.push(("j_squared_on_sections", jjd / scale));

        // circle equivariance λ(e^{iθ}p) = e^{iθ}λ(p)
        let ph = C64::from_polar(1.0, theta);
        let circ = sample
            .points
            .iter()
            .zip(&sec.values)
            .take(64)
            .map(|(z, v)| frobenius(&(&p.alpha * (z[0] * ph) + &p.beta * (z[1] * ph) - v * ph)))
            .fold(0.0, f64::max);
        out.push(("circle_equivariance", circ / scale));

        // Γ-equivariance λ(pγ) = R'(γ)⁻¹ λ(p) R'(γ)
        let (u, v) = (module.group.elements[gamma].u(), module.group.elements[gamma].v());
        let geq = sample
            .points
            .iter()
            .zip(&sec.values)
            .take(64)
            .map(|(z, val)| {
                let zg = right_act(*z, u, v);
                let lhs = &p.alpha * zg[0] + &p.beta * zg[1];
                frobenius(&(lhs - module.iso().conjugate(gamma, val)))
            })
            .fold(0.0, f64::max);
        out.push(("gamma_equivariance", geq / scale));

        // forms against their flat values, and symmetry
        let f = quadrature_forms(&sec, &sec_q, &sample).expect("same sample");
        let fr = quadrature_forms(&sec_q, &sec, &sample).expect("same sample");
        let flat = flat_forms(p, q);
        let s2 = scale * q.norm().max(1.0);
        out.push(("metric_agreement", (f.g - flat.g).abs() / s2));
        out.push(("omega1_flat", (f.omega1 - flat.omega1).abs() / s2));
        out.push(("omega2_flat", (f.omega2 - flat.omega2).abs() / s2));
        out.push(("omega3_flat", (f.omega3 - flat.omega3).abs() / s2));
        out.push(("g_symmetry", (f.g - fr.g).abs() / s2));
        out.push(("omega1_skew", (f.omega1 + fr.omega1).abs() / s2));
        out.push(("omega2_skew", (f.omega2 + fr.omega2).abs() / s2));
        out.push(("omega3_skew", (f.omega3 + fr.omega3).abs() / s2));

        // moment-map reductions
        let red = reduced_moment_integrands(&sec, &sample).expect("same sample");
        let s_sq = scale * scale;
        out.push(("mu3_constancy", red.mu3.constancy_defect / s_sq));
        out.push(("mu3_reduction", red.mu3.direct_defect / s_sq));
        out.push(("mu3_tilde_equals_minus_mu3", red.mu3.tilde_minus_defect / s_sq));
        out.push(("mu2_constancy", red.mu2.constancy_defect / s_sq));
        out.push(("mu2_reduction", red.mu2.direct_defect / s_sq));
        out.push(("mu2_tilde_equals_minus_mu2", red.mu2.tilde_minus_defect / s_sq));
        let m1 = mu1_reduction_check(&sec, &sample).expect("same sample");
        out.push(("mu1_reduction", m1.direct_defect / s_sq));
        out.push(("mu1_tilde_equals_minus_mu1", m1.tilde_minus_defect / s_sq));

        // relabelling a Γ-closed sample by γ leaves the quadrature unchanged
        let gs1 = section_from_pair(p, &gamma_sample);
        let gs2 = section_from_pair(q, &gamma_sample);
        let base = quadrature_forms(&gs1, &gs2, &gamma_sample).expect("same sample");
        let map = gamma_sample.relabel(&module.group, gamma);
        let relabel_defect = match map {
            Some(map) => {
                let v1: Vec<CMat> = map.iter().map(|&i| gs1.values[i].clone()).collect();
                let v2: Vec<CMat> = map.iter().map(|&i| gs2.values[i].clone()).collect();
                let j1 = j_on_values(&v1, &gamma_sample);
                let moved = forms_from_values(&v1, &v2, &j1, &gamma_sample.weights);
                [
                    moved.g - base.g,
                    moved.omega1 - base.omega1,
                    moved.omega2 - base.omega2,
                    moved.omega3 - base.omega3,
                ]
                .into_iter()
                .map(f64::abs)
                .fold(0.0, f64::max)
                    / s2
            }
            None => f64::INFINITY,
        };
        out.push(("gamma_relabel_invariance", relabel_defect));
        out
    });
    for row in per_pair {
        for (k, v) in row {
            worst.push(k, v);
        }
    }

    let d = sample.defects();
    let stat_band = match strategy {
        SampleStrategy::Design => tol.quadrature,
        SampleStrategy::Random => 3.0 / (sample.len() as f64).sqrt(),
    };
    let pw = tol.pointwise;
    let q = tol.quadrature;
    let mut checks = vec![
        Check::at_most("sample_normalization", d.normalization, pw),
        Check::at_most("sample_unit_norm", d.unit, pw),
        Check::at_most("sample_tau_closure", d.tau, pw),
        Check::at_most("sample_cross_moment", d.cross_moment, stat_band),
        Check::at_most("sample_second_moment_balance", d.balance, stat_band),
    ];
    let bounds: [(&str, f64); 21] = [
        ("j_reduction", pw),
        ("j_squared_on_sections", pw),
        ("circle_equivariance", pw),
        ("gamma_equivariance", tol.membership),
        ("metric_agreement", tol.metric),
        ("omega1_flat", tol.metric),
        ("omega2_flat", tol.metric),
        ("omega3_flat", tol.metric),
        ("g_symmetry", q),
        ("omega1_skew", q),
        ("omega2_skew", q),
        ("omega3_skew", q),
        ("mu3_constancy", q),
        ("mu3_reduction", q),
        ("mu3_tilde_equals_minus_mu3", q),
        ("mu2_constancy", q),
        ("mu2_reduction", q),
        ("mu2_tilde_equals_minus_mu2", q),
        ("mu1_reduction", q),
        ("mu1_tilde_equals_minus_mu1", q),
        ("gamma_relabel_invariance", tol.membership),
    ];
    for (name, t) in bounds {
        checks.push(Check::at_most(name, worst.get(name), t));
    }
    Ok(GaugeReport {
        points: sample.len(),
        pairs: points.len(),
        strategy,
        checks,
    })
}
