//! Hyperkähler moment maps on `M`, their differential, the `ζ` parameters and
//! the root-hyperplane test for good values of `ζ`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::Result;
use crate::flat::{BlockCentral, FlatModule, MatrixPair, SparsePair};
use crate::linalg::{c64, cmat_serde, commutator, frobenius, trace, trace_projected, CMat, RMat};
use crate::mckay::{Isotypic, McKayData};
use crate::par;

/// `(μ₁, μ₂, μ₃)` at a point, each an anti-Hermitian traceless element of `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    #[serde(with = "cmat_serde")]
    pub m1: CMat,
    #[serde(with = "cmat_serde")]
    pub m2: CMat,
    #[serde(with = "cmat_serde")]
    pub m3: CMat,
}

impl MomentValue {
    pub fn components(&self) -> [&CMat; 3] {
        [&self.m1, &self.m2, &self.m3]
    }

    pub fn from_components([m1, m2, m3]: [CMat; 3]) -> Self {
        MomentValue { m1, m2, m3 }
    }

    /// Frobenius norm of the stacked components.
    pub fn norm(&self) -> f64 {
        self.components().iter().map(|m| frobenius(m).powi(2)).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &[CMat; 3]) -> f64 {
        self.components()
            .iter()
            .zip(other)
            .map(|(a, b)| frobenius(&(*a - b)).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest anti-hermiticity, trace and commutation defects.
    pub fn invariant_defects(&self, iso: &Isotypic) -> MomentDefects {
        let mut d = MomentDefects::default();
        for m in self.components() {
            d.anti_hermitian = d.anti_hermitian.max(frobenius(&(m + m.adjoint())));
            d.trace = d.trace.max(trace(m).norm());
            for g in 0..iso.order() {
                let r = iso.frame_matrix(g);
                d.commutation = d.commutation.max(frobenius(&commutator(m, &r)));
            }
        }
        d
    }

    /// Stacked `f/t` coordinates, ordered `(a, k)`.
    pub fn ft_coords(&self, module: &FlatModule) -> Vec<f64> {
        self.components()
            .iter()
            .flat_map(|m| module.algebra.ft_coords(m, module.iso()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentDefects {
    pub anti_hermitian: f64,
    pub trace: f64,
    pub commutation: f64,
}

impl MomentDefects {
    pub fn within(&self, tol: &Tolerances) -> bool {
        self.anti_hermitian <= tol.moment && self.trace <= tol.moment && self.commutation <= tol.membership
    }
}

/// `μ₁ = (i/2)([α,α*] + [β,β*])`, `μ₂ = ½([α,β] + [α*,β*])`,
/// `μ₃ = (i/2)(−[α,β] + [α*,β*])`, each trace-projected.
pub fn moment(p: &MatrixPair) -> MomentValue {
    let half_i = c64(0.0, 0.5);
    let (a, b) = (&p.alpha, &p.beta);
    let (a_adj, b_adj) = (a.adjoint(), b.adjoint());
    let s = commutator(a, &a_adj) + commutator(b, &b_adj);
    let c = commutator(a, b);
    let c_adj = commutator(&a_adj, &b_adj);
    MomentValue {
        m1: trace_projected(&(s * half_i)),
        m2: trace_projected(&((&c + &c_adj) * c64(0.5, 0.0))),
        m3: trace_projected(&((c_adj - c) * half_i)),
    }
}

/// [`moment`] after checking that the pair lies in `M`.
pub fn moment_checked(module: &FlatModule, p: &MatrixPair) -> Result<MomentValue> {
    module.require_member(p)?;
    Ok(moment(p))
}

fn sparse_times(s: &[(usize, usize, [f64; 2])], m: &CMat) -> CMat {
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for &(r, c, v) in s {
        let v = c64(v[0], v[1]);
        for col in 0..m.ncols() {
            out[(r, col)] += v * m[(c, col)];
        }
    }
    out
}

fn times_sparse(m: &CMat, s: &[(usize, usize, [f64; 2])]) -> CMat {
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for &(r, c, v) in s {
        let v = c64(v[0], v[1]);
        for row in 0..m.nrows() {
            out[(row, c)] += m[(row, r)] * v;
        }
    }
    out
}

/// `[s, m]` for sparse `s`.
fn sparse_commutator(s: &[(usize, usize, [f64; 2])], m: &CMat) -> CMat {
    sparse_times(s, m) - times_sparse(m, s)
}

/// Directional derivative of the three moment maps at `p` along `v`.
pub fn moment_derivative(p: &MatrixPair, v: &SparsePair) -> [CMat; 3] {
    let half_i = c64(0.0, 0.5);
    let s = sparse_commutator(&v.alpha, &p.alpha.adjoint()) + sparse_commutator(&v.beta, &p.beta.adjoint());
    // [δα, β] + [α, δβ]
    let c = sparse_commutator(&v.alpha, &p.beta) - sparse_commutator(&v.beta, &p.alpha);
    let s_sym = &s + s.adjoint();
    let c_adj = c.adjoint();
    [
        s_sym * half_i,
        (&c - &c_adj) * c64(0.5, 0.0),
        (-(&c + &c_adj)) * half_i,
    ]
}

/// Jacobian of `p ↦ μ(p)` from basis coordinates to stacked `f/t` coordinates;
/// shape `3(|Γ|−1) × 4|Γ|`, rows ordered `(a, k)`.
pub fn moment_jacobian(module: &FlatModule, p: &MatrixPair) -> RMat {
    let iso = module.iso();
    let alg = &module.algebra;
    let columns: Vec<Vec<f64>> = par::map_slice(&module.basis.vectors, |v| {
        moment_derivative(p, v)
            .iter()
            .flat_map(|m| alg.ft_coords(m, iso))
            .collect()
    });
    let rows = 3 * alg.ft_dim();
    RMat::from_fn(rows, columns.len(), |r, c| columns[c][r])
}

/// Real coefficients `c_{a,i}` with `ζ_a = Σ_i c_{a,i} √−1 π_i` after trace projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zeta {
    pub coeffs: [Vec<f64>; 3],
}

impl Zeta {
    pub fn new(coeffs: [Vec<f64>; 3]) -> Self {
        Zeta { coeffs }
    }

    pub fn zero(nodes: usize) -> Self {
        Zeta::new([vec![0.0; nodes], vec![0.0; nodes], vec![0.0; nodes]])
    }

    /// Random traceless coefficients, each drawn from `N(0, 1)` before projection.
    pub fn random(mckay: &McKayData, rng: &mut impl Rng) -> Self {
        let k = mckay.n.len();
        let mut draw = || (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect::<Vec<_>>();
        let z = Zeta::new([draw(), draw(), draw()]);
        z.projected(&mckay.n)
    }

    pub fn nodes(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn check_shape(&self, nodes: usize) -> Result<()> {
        if self.coeffs.iter().any(|c| c.len() != nodes) {
            return Err(crate::Error::DimensionMismatch {
                what: "zeta coefficients",
                expected: nodes,
                found: self.nodes(),
            });
        }
        Ok(())
    }

    /// `Σ_i c_{a,i} n_i²` per component.
    pub fn trace_defect(&self, marks: &[usize]) -> [f64; 3] {
        let t = |c: &Vec<f64>| c.iter().zip(marks).map(|(x, &n)| x * (n * n) as f64).sum();
        [t(&self.coeffs[0]), t(&self.coeffs[1]), t(&self.coeffs[2])]
    }

    /// Removes the scalar part so that each component is traceless.
    pub fn projected(&self, marks: &[usize]) -> Zeta {
        let order: usize = marks.iter().map(|n| n * n).sum();
        let defect = self.trace_defect(marks);
        let shift = |a: usize| -> Vec<f64> {
            self.coeffs[a].iter().map(|x| x - defect[a] / order as f64).collect()
        };
        Zeta::new([shift(0), shift(1), shift(2)])
    }

    pub fn scaled(&self, s: f64) -> Zeta {
        let f = |c: &Vec<f64>| c.iter().map(|x| x * s).collect();
        Zeta::new([f(&self.coeffs[0]), f(&self.coeffs[1]), f(&self.coeffs[2])])
    }

    /// The triple `(−ζ₁, ζ₂, −ζ₃)` reached by applying `J` to a solution.
    pub fn rotated_by_j(&self) -> Zeta {
        let neg = |c: &Vec<f64>| c.iter().map(|x| -x).collect();
        Zeta::new([neg(&self.coeffs[0]), self.coeffs[1].clone(), neg(&self.coeffs[2])])
    }

    pub fn central(&self, marks: &[usize]) -> [BlockCentral; 3] {
        let p = self.projected(marks);
        let block = |a: usize| BlockCentral {
            blocks: marks
                .iter()
                .zip(&p.coeffs[a])
                .map(|(&n, &c)| CMat::identity(n, n) * c64(0.0, c))
                .collect(),
        };
        [block(0), block(1), block(2)]
    }

    pub fn dense(&self, iso: &Isotypic) -> [CMat; 3] {
        self.central(&iso.dims).map(|b| b.to_dense(iso))
    }

    /// Stacked `f/t` coordinates, ordered `(a, k)`.
    pub fn ft_coords(&self, module: &FlatModule) -> Vec<f64> {
        self.dense(module.iso())
            .iter()
            .flat_map(|m| module.algebra.ft_coords(m, module.iso()))
            .collect()
    }

    pub fn norm(&self, marks: &[usize]) -> f64 {
        let p = self.projected(marks);
        p.coeffs
            .iter()
            .map(|c| c.iter().zip(marks).map(|(x, &n)| x * x * (n * n) as f64).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }
}

/// `ι(ζ_a)` in simple-root coordinates, one vector per component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanImage {
    pub components: [Vec<f64>; 3],
}

fn cartan_inverse(mckay: &McKayData) -> DMatrix<f64> {
    let r = mckay.r;
    let c = DMatrix::from_fn(r, r, |i, j| mckay.cartan[i][j] as f64);
    c.try_inverse().expect("finite Cartan matrix is positive definite")
}

/// Pairings `⟨ξ_j, ι(ζ_a)⟩ = n_j c_{a,j}` with the simple roots, `j = 1..r`.
fn simple_pairings(z: &Zeta, mckay: &McKayData) -> [Vec<f64>; 3] {
    let p = z.projected(&mckay.n);
    let f = |a: usize| (1..=mckay.r).map(|j| mckay.n[j] as f64 * p.coeffs[a][j]).collect();
    [f(0), f(1), f(2)]
}

/// The Cartan image is dual to `l: √−1 π_i ↦ n_i ξ_i` under the Gram form
/// `⟨ξ_i, ξ_j⟩ = c_ij`, so `ι(ζ_a) = C⁻¹ (n_j c_{a,j})_j`.
pub fn zeta_to_cartan(z: &Zeta, mckay: &McKayData) -> CartanImage {
    let inv = cartan_inverse(mckay);
    let pairings = simple_pairings(z, mckay);
    let apply = |w: &Vec<f64>| -> Vec<f64> {
        (0..mckay.r).map(|i| (0..mckay.r).map(|j| inv[(i, j)] * w[j]).sum()).collect()
    };
    CartanImage {
        components: [apply(&pairings[0]), apply(&pairings[1]), apply(&pairings[2])],
    }
}

/// `⟨m, ι(ζ_a)⟩` for an integer vector `m` in simple-root coordinates.
pub fn root_pairing(m: &[i64], z: &Zeta, mckay: &McKayData) -> [f64; 3] {
    let w = simple_pairings(z, mckay);
    let f = |a: usize| m.iter().zip(&w[a]).map(|(&mi, wi)| mi as f64 * wi).sum();
    [f(0), f(1), f(2)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodVerdict {
    pub good: bool,
    /// A positive root whose hyperplane contains `ζ`.
    pub witness: Option<Vec<i64>>,
    /// Smallest over roots of the largest pairing modulus.
    pub margin: f64,
}

/// `ζ` is good when no root `ξ` has `⟨ξ, ι(ζ_a)⟩ = 0` for all three components.
pub fn is_good_zeta(z: &Zeta, mckay: &McKayData) -> GoodVerdict {
    is_good_zeta_with(z, mckay, &Tolerances::default())
}

pub fn is_good_zeta_with(z: &Zeta, mckay: &McKayData, tol: &Tolerances) -> GoodVerdict {
    let w = simple_pairings(z, mckay);
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for m in mckay.roots.iter().filter(|m| m.iter().all(|&x| x >= 0)) {
        let largest = (0..3)
            .map(|a| m.iter().zip(&w[a]).map(|(&mi, wi)| mi as f64 * wi).sum::<f64>().abs())
            .fold(0.0, f64::max);
        if largest <= tol.good_set && witness.is_none() {
            witness = Some(m.clone());
        }
        margin = margin.min(largest);
    }
    GoodVerdict {
        good: witness.is_none(),
        witness,
        margin,
    }
}

/// `|Tr(m)|` for the stacked components, useful for reports.
pub fn trace_moduli(v: &MomentValue) -> [f64; 3] {
    let t = |m: &CMat| -> f64 { trace(m).norm() };
    [t(&v.m1), t(&v.m2), t(&v.m3)]
}
