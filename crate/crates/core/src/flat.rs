//! The flat quaternionic module `M` of Γ-invariant matrix pairs and the gauge
//! algebra acting on it.
//!
//! Everything is expressed in the isotypic frame. Invariant pairs are built
//! block by block: block `(j, i)` of `α` and `β` is `E_{k'k} ⊗ Y` where
//! `(Y_α, Y_β)` runs over the invariant pairs in `Hom(R_i, R_j)²`, a space of
//! complex dimension `a_ij`.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::group::{build_group_with, FiniteSubgroup, GroupLabel};
use crate::linalg::{
    c64, cmat_serde, commutator, frobenius, hermitian_eigen, hermitian_pairing, orthogonal_complement, real_pairing,
    CMat, RMat, C64, I, ONE, ZERO,
};
use crate::mckay::{mckay_data_with, Isotypic, McKayData, RegularRep};
use crate::par;

/// A point `(α, β)` of `End(R)²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixPair {
    #[serde(with = "cmat_serde")]
    pub alpha: CMat,
    #[serde(with = "cmat_serde")]
    pub beta: CMat,
}

impl MatrixPair {
    pub fn new(alpha: CMat, beta: CMat) -> Self {
        MatrixPair { alpha, beta }
    }

    pub fn zeros(n: usize) -> Self {
        MatrixPair::new(CMat::zeros(n, n), CMat::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.alpha.nrows()
    }

    /// `Tr(α₁α₂*) + Tr(β₁β₂*)`.
    pub fn inner(&self, other: &MatrixPair) -> C64 {
        hermitian_pairing(&self.alpha, &other.alpha) + hermitian_pairing(&self.beta, &other.beta)
    }

    /// Flat metric `Re⟨p₁, p₂⟩`.
    pub fn real_inner(&self, other: &MatrixPair) -> f64 {
        real_pairing(&self.alpha, &other.alpha) + real_pairing(&self.beta, &other.beta)
    }

    pub fn norm(&self) -> f64 {
        self.real_inner(self).sqrt()
    }

    pub fn scaled(&self, s: C64) -> MatrixPair {
        MatrixPair::new(&self.alpha * s, &self.beta * s)
    }

    pub fn add(&self, other: &MatrixPair) -> MatrixPair {
        MatrixPair::new(&self.alpha + &other.alpha, &self.beta + &other.beta)
    }

    pub fn sub(&self, other: &MatrixPair) -> MatrixPair {
        MatrixPair::new(&self.alpha - &other.alpha, &self.beta - &other.beta)
    }

    pub fn distance(&self, other: &MatrixPair) -> f64 {
        self.sub(other).norm()
    }

    /// The same pair in the permutation basis of the regular representation.
    pub fn to_permutation_basis(&self, iso: &Isotypic) -> MatrixPair {
        let u = &iso.change;
        let ua = u.adjoint();
        MatrixPair::new(u * &self.alpha * &ua, u * &self.beta * &ua)
    }
}

pub fn quaternion_i(p: &MatrixPair) -> MatrixPair {
    p.scaled(I)
}

/// `J(α, β) = (−β*, α*)`.
pub fn quaternion_j(p: &MatrixPair) -> MatrixPair {
    MatrixPair::new(-p.beta.adjoint(), p.alpha.adjoint())
}

/// `K = I∘J`, so `K(α, β) = (−iβ*, iα*)`.
pub fn quaternion_k(p: &MatrixPair) -> MatrixPair {
    quaternion_i(&quaternion_j(p))
}

/// A pair with few nonzero entries, stored as `(row, col, value)` lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsePair {
    pub alpha: Vec<(usize, usize, [f64; 2])>,
    pub beta: Vec<(usize, usize, [f64; 2])>,
}

fn z(v: [f64; 2]) -> C64 {
    c64(v[0], v[1])
}

impl SparsePair {
    pub fn to_dense(&self, n: usize) -> MatrixPair {
        let mut p = MatrixPair::zeros(n);
        self.add_scaled_to(&mut p, 1.0);
        p
    }

    pub fn add_scaled_to(&self, p: &mut MatrixPair, s: f64) {
        for &(r, c, v) in &self.alpha {
            p.alpha[(r, c)] += z(v) * s;
        }
        for &(r, c, v) in &self.beta {
            p.beta[(r, c)] += z(v) * s;
        }
    }

    /// `Re⟨p, self⟩`.
    pub fn real_inner(&self, p: &MatrixPair) -> f64 {
        let a: f64 = self.alpha.iter().map(|&(r, c, v)| (p.alpha[(r, c)] * z(v).conj()).re).sum();
        let b: f64 = self.beta.iter().map(|&(r, c, v)| (p.beta[(r, c)] * z(v).conj()).re).sum();
        a + b
    }
}

/// Real-orthonormal basis of `M`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantBasis {
    pub order: usize,
    pub vectors: Vec<SparsePair>,
}

impl InvariantBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Complex dimension of the ambient space `End(R)²`.
    pub fn ambient_dim(&self) -> usize {
        2 * self.order * self.order
    }

    pub fn pair_from_coords(&self, x: &[f64]) -> MatrixPair {
        let mut p = MatrixPair::zeros(self.order);
        for (v, &c) in self.vectors.iter().zip(x) {
            if c != 0.0 {
                v.add_scaled_to(&mut p, c);
            }
        }
        p
    }

    pub fn coords(&self, p: &MatrixPair) -> Vec<f64> {
        self.vectors.iter().map(|v| v.real_inner(p)).collect()
    }

    /// Orthogonal projection onto `M`.
    pub fn project(&self, p: &MatrixPair) -> MatrixPair {
        self.pair_from_coords(&self.coords(p))
    }

    /// Largest `|⟨v_a, v_b⟩ − δ_ab|` over the basis.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut touching: HashMap<(u8, usize, usize), Vec<(usize, C64)>> = HashMap::new();
        for (idx, v) in self.vectors.iter().enumerate() {
            for &(r, c, val) in &v.alpha {
                touching.entry((0, r, c)).or_default().push((idx, z(val)));
            }
            for &(r, c, val) in &v.beta {
                touching.entry((1, r, c)).or_default().push((idx, z(val)));
            }
        }
        let mut gram: HashMap<(usize, usize), f64> = HashMap::new();
        for entries in touching.values() {
            for &(a, va) in entries {
                for &(b, vb) in entries {
                    if a <= b {
                        *gram.entry((a, b)).or_default() += (va * vb.conj()).re;
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for a in 0..self.len() {
            let d = gram.get(&(a, a)).copied().unwrap_or(0.0);
            worst = worst.max((d - 1.0).abs());
        }
        for (&(a, b), &g) in &gram {
            if a != b {
                worst = worst.max(g.abs());
            }
        }
        worst
    }
}

/// Invariant pairs `(Y_α, Y_β) ∈ Hom(C^{n_i}, C^{n_j})²`, orthonormal.
fn hom_solutions(group: &FiniteSubgroup, iso: &Isotypic, i: usize, j: usize) -> Vec<(CMat, CMat)> {
    let (ni, nj) = (iso.dims[i], iso.dims[j]);
    let half = ni * nj;
    let dim = 2 * half;
    let n = group.order();
    let unpack = |x: &[C64]| {
        let ya = CMat::from_fn(nj, ni, |r, c| x[r * ni + c]);
        let yb = CMat::from_fn(nj, ni, |r, c| x[half + r * ni + c]);
        (ya, yb)
    };
    let mut proj = CMat::zeros(dim, dim);
    for g in 0..n {
        let (u, v) = (group.elements[g].u(), group.elements[g].v());
        let rho_i = iso.rho(i, g);
        let rho_j_inv = iso.rho(j, g).adjoint();
        for col in 0..dim {
            let mut e = vec![ZERO; dim];
            e[col] = ONE;
            let (ya, yb) = unpack(&e);
            let ca = &rho_j_inv * ya * rho_i;
            let cb = &rho_j_inv * yb * rho_i;
            // γ⁻¹ acting on (a, b): (u* a − v b, v* a + u b)
            let na = &ca * u.conj() - &cb * v;
            let nb = &ca * v.conj() + &cb * u;
            for r in 0..nj {
                for c in 0..ni {
                    proj[(r * ni + c, col)] += na[(r, c)];
                    proj[(half + r * ni + c, col)] += nb[(r, c)];
                }
            }
        }
    }
    proj /= c64(n as f64, 0.0);
    let herm = (&proj + proj.adjoint()) * c64(0.5, 0.0);
    let (values, vectors) = hermitian_eigen(&herm);
    values
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &v)| v > 0.5)
        .map(|(col, _)| {
            let x: Vec<C64> = vectors.column(col).iter().copied().collect();
            unpack(&x)
        })
        .collect()
}

fn to_triples(m: &CMat, row0: usize, col0: usize, out: &mut Vec<(usize, usize, [f64; 2])>) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if v.norm() > 1e-15 {
                out.push((row0 + r, col0 + c, [v.re, v.im]));
            }
        }
    }
}

/// Structural construction of the basis of `M` from the Hom-space decomposition.
pub fn invariant_basis(group: &FiniteSubgroup, mckay: &McKayData) -> Result<InvariantBasis> {
    let iso = &mckay.isotypic;
    let k = iso.irreps();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| mckay.a[i][j] != 0)
        .collect();
    let solutions = par::map_slice(&pairs, |&(i, j)| hom_solutions(group, iso, i, j));

    let mut vectors = Vec::new();
    for (&(i, j), sols) in pairs.iter().zip(&solutions) {
        if sols.len() as i64 != mckay.a[i][j] {
            return Err(Error::DimensionMismatch {
                what: "invariant Hom space",
                expected: mckay.a[i][j] as usize,
                found: sols.len(),
            });
        }
        let (ni, nj) = (iso.dims[i], iso.dims[j]);
        for (ya, yb) in sols {
            for kp in 0..nj {
                for kk in 0..ni {
                    let row0 = iso.offsets[j] + kp * nj;
                    let col0 = iso.offsets[i] + kk * ni;
                    for phase in [ONE, I] {
                        let mut v = SparsePair {
                            alpha: Vec::new(),
                            beta: Vec::new(),
                        };
                        to_triples(&(ya * phase), row0, col0, &mut v.alpha);
                        to_triples(&(yb * phase), row0, col0, &mut v.beta);
                        vectors.push(v);
                    }
                }
            }
        }
    }
    let expected = 4 * group.order();
    if vectors.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "invariant basis",
            expected,
            found: vectors.len(),
        });
    }
    Ok(InvariantBasis {
        order: group.order(),
        vectors,
    })
}

/// Largest defect of the invariance equations over the whole group.
pub fn membership_defect(group: &FiniteSubgroup, iso: &Isotypic, p: &MatrixPair) -> f64 {
    par::map_range(group.order(), |g| {
        let (u, v) = (group.elements[g].u(), group.elements[g].v());
        let ca = iso.conjugate(g, &p.alpha);
        let cb = iso.conjugate(g, &p.beta);
        let ea = frobenius(&(ca - (&p.alpha * u + &p.beta * v)));
        let eb = frobenius(&(cb - (&p.alpha * (-v.conj()) + &p.beta * u.conj())));
        ea.max(eb)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Outcome of the dense Γ-averaging cross-check in the permutation basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseCheck {
    /// Real rank of the averaging projector, `2 Re Tr P`.
    pub projector_rank: usize,
    pub structural_rank: usize,
    pub idempotence_defect: f64,
    pub symmetry_defect: f64,
    /// Largest `‖P v − v‖` over the structural basis mapped to the permutation basis.
    pub fixed_defect: f64,
}

impl DenseCheck {
    pub fn agrees(&self, tol: f64) -> bool {
        self.projector_rank == self.structural_rank
            && self.idempotence_defect <= tol
            && self.symmetry_defect <= tol
            && self.fixed_defect <= tol
    }
}

/// Γ-averaging projector applied to a pair in the permutation basis.
fn average(group: &FiniteSubgroup, reg: &RegularRep, p: &MatrixPair) -> MatrixPair {
    let n = group.order();
    let mut acc = MatrixPair::zeros(n);
    for g in 0..n {
        let (u, v) = (group.elements[g].u(), group.elements[g].v());
        let img = &reg.images[g];
        for a in 0..n {
            for b in 0..n {
                // (R(γ)⁻¹ α R(γ))[a][b] = α[γa][γb]
                let ca = p.alpha[(img[a], img[b])];
                let cb = p.beta[(img[a], img[b])];
                acc.alpha[(a, b)] += u.conj() * ca - v * cb;
                acc.beta[(a, b)] += v.conj() * ca + u * cb;
            }
        }
    }
    acc.scaled(c64(1.0 / n as f64, 0.0))
}

fn random_pair(n: usize, rng: &mut ChaCha8Rng) -> MatrixPair {
    let mut entry = || c64(StandardNormal.sample(rng), StandardNormal.sample(rng));
    let alpha = CMat::from_fn(n, n, |_, _| entry());
    let beta = CMat::from_fn(n, n, |_, _| entry());
    MatrixPair::new(alpha, beta)
}

pub fn dense_cross_check(group: &FiniteSubgroup, mckay: &McKayData, basis: &InvariantBasis) -> DenseCheck {
    let n = group.order();
    let reg = RegularRep::new(group);
    // Only fixed index pairs of the permutation contribute to the trace.
    let mut trace = ZERO;
    for g in 0..n {
        let (u, _) = (group.elements[g].u(), group.elements[g].v());
        let fixed = reg.character(g) * reg.character(g);
        trace += (u.conj() + u) * fixed as f64;
    }
    trace /= n as f64;
    let projector_rank = (2.0 * trace.re).round().max(0.0) as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(0xde45e);
    let mut idempotence_defect: f64 = 0.0;
    let mut symmetry_defect: f64 = 0.0;
    for _ in 0..3 {
        let x = random_pair(n, &mut rng);
        let y = random_pair(n, &mut rng);
        let px = average(group, &reg, &x);
        let ppx = average(group, &reg, &px);
        let py = average(group, &reg, &y);
        idempotence_defect = idempotence_defect.max(ppx.distance(&px) / x.norm());
        let s = (px.inner(&y) - x.inner(&py)).norm() / (x.norm() * y.norm());
        symmetry_defect = symmetry_defect.max(s);
    }

    let fixed_defect = par::map_slice(&basis.vectors, |v| {
        let dense = v.to_dense(n).to_permutation_basis(&mckay.isotypic);
        average(group, &reg, &dense).distance(&dense)
    })
    .into_iter()
    .fold(0.0, f64::max);

    DenseCheck {
        projector_rank,
        structural_rank: basis.len(),
        idempotence_defect,
        symmetry_defect,
        fixed_defect,
    }
}

/// An element `⊕ X_i ⊗ I_{n_i}` of `End(R)` commuting with Γ; `X_i` acts on the
/// copy index of block `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCentral {
    #[serde(with = "cmat_serde::vec")]
    pub blocks: Vec<CMat>,
}

impl BlockCentral {
    pub fn zeros(dims: &[usize]) -> Self {
        BlockCentral {
            blocks: dims.iter().map(|&d| CMat::zeros(d, d)).collect(),
        }
    }

    pub fn to_dense(&self, iso: &Isotypic) -> CMat {
        let n = iso.order();
        let mut m = CMat::zeros(n, n);
        for (i, x) in self.blocks.iter().enumerate() {
            let d = iso.dims[i];
            for k in 0..d {
                for kp in 0..d {
                    let val = x[(k, kp)];
                    if val == ZERO {
                        continue;
                    }
                    for a in 0..d {
                        m[(iso.offsets[i] + k * d + a, iso.offsets[i] + kp * d + a)] = val;
                    }
                }
            }
        }
        m
    }

    pub fn scaled(&self, s: f64) -> BlockCentral {
        BlockCentral {
            blocks: self.blocks.iter().map(|b| b * c64(s, 0.0)).collect(),
        }
    }

    pub fn add(&self, other: &BlockCentral) -> BlockCentral {
        BlockCentral {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Partial trace of block `i` over the representation index.
pub fn partial_trace(m: &CMat, iso: &Isotypic, i: usize) -> CMat {
    let d = iso.dims[i];
    let o = iso.offsets[i];
    CMat::from_fn(d, d, |k, kp| (0..d).map(|a| m[(o + k * d + a, o + kp * d + a)]).sum())
}

/// `Re Tr(m Y*)` for `Y = ⊕ X_i ⊗ I`.
pub fn pair_with_central(m: &CMat, y: &BlockCentral, iso: &Isotypic) -> f64 {
    y.blocks
        .iter()
        .enumerate()
        .map(|(i, x)| real_pairing(&partial_trace(m, iso, i), x))
        .sum()
}

/// The Lie algebra `f` of `F = ×U(n_i)`, the complement `f/t` of the scalars,
/// and the centre `Z` of traceless combinations of `√−1 π_i`. All bases are
/// orthonormal for `Re Tr(Y₁Y₂*)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaugeAlgebra {
    pub dims: Vec<usize>,
    pub f_basis: Vec<BlockCentral>,
    pub ft_basis: Vec<BlockCentral>,
    pub z_basis: Vec<BlockCentral>,
}

impl GaugeAlgebra {
    pub fn new(mckay: &McKayData) -> Self {
        let dims = mckay.n.clone();
        let order: usize = dims.iter().map(|d| d * d).sum();
        let single = |i: usize, x: CMat| {
            let mut b = BlockCentral::zeros(&dims);
            b.blocks[i] = x;
            b
        };

        let mut diagonal = Vec::new();
        let mut weights = Vec::new();
        let mut off_diagonal = Vec::new();
        for (i, &d) in dims.iter().enumerate() {
            let s = 1.0 / (d as f64).sqrt();
            for a in 0..d {
                let mut x = CMat::zeros(d, d);
                x[(a, a)] = c64(0.0, s);
                diagonal.push(single(i, x));
                weights.push((d as f64).sqrt() / (order as f64).sqrt());
            }
            let s2 = 1.0 / (2.0 * d as f64).sqrt();
            for a in 0..d {
                for b in a + 1..d {
                    let mut x = CMat::zeros(d, d);
                    x[(a, b)] = c64(s2, 0.0);
                    x[(b, a)] = c64(-s2, 0.0);
                    off_diagonal.push(single(i, x));
                    let mut y = CMat::zeros(d, d);
                    y[(a, b)] = c64(0.0, s2);
                    y[(b, a)] = c64(0.0, s2);
                    off_diagonal.push(single(i, y));
                }
            }
        }
        let combine = |basis: &[BlockCentral], coeffs: nalgebra::DVectorView<f64>| {
            basis
                .iter()
                .zip(coeffs.iter())
                .fold(BlockCentral::zeros(&dims), |acc, (b, &c)| acc.add(&b.scaled(c)))
        };

        let f_basis: Vec<BlockCentral> = diagonal.iter().chain(&off_diagonal).cloned().collect();
        let complement = orthogonal_complement(&weights);
        let mut ft_basis: Vec<BlockCentral> = (0..complement.ncols())
            .map(|c| combine(&diagonal, complement.column(c)))
            .collect();
        ft_basis.extend(off_diagonal.iter().cloned());

        let projectors: Vec<BlockCentral> = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| single(i, CMat::identity(d, d) * c64(0.0, 1.0 / d as f64)))
            .collect();
        let z_weights: Vec<f64> = dims.iter().map(|&d| d as f64 / (order as f64).sqrt()).collect();
        let zc = orthogonal_complement(&z_weights);
        let z_basis = (0..zc.ncols()).map(|c| combine(&projectors, zc.column(c))).collect();

        GaugeAlgebra {
            dims,
            f_basis,
            ft_basis,
            z_basis,
        }
    }

    pub fn ft_dim(&self) -> usize {
        self.ft_basis.len()
    }

    /// Coordinates of `m` against the `f/t` basis.
    pub fn ft_coords(&self, m: &CMat, iso: &Isotypic) -> Vec<f64> {
        let traces: Vec<CMat> = (0..self.dims.len()).map(|i| partial_trace(m, iso, i)).collect();
        self.ft_basis
            .iter()
            .map(|y| y.blocks.iter().zip(&traces).map(|(x, t)| real_pairing(t, x)).sum())
            .collect()
    }

    /// Largest `‖[Y, R'(γ)]‖` over the `f` basis and the group.
    pub fn commutation_defect(&self, iso: &Isotypic) -> f64 {
        let dense: Vec<CMat> = self.f_basis.iter().map(|y| y.to_dense(iso)).collect();
        (0..iso.order())
            .map(|g| {
                let r = iso.frame_matrix(g);
                dense
                    .iter()
                    .map(|y| frobenius(&commutator(y, &r)))
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Tangent directions `([Y, α], [Y, β])` of the `F`-orbit, one per `f/t` generator.
pub fn orbit_directions(p: &MatrixPair, alg: &GaugeAlgebra, iso: &Isotypic) -> Vec<MatrixPair> {
    alg.ft_basis
        .iter()
        .map(|y| {
            let y = y.to_dense(iso);
            MatrixPair::new(commutator(&y, &p.alpha), commutator(&y, &p.beta))
        })
        .collect()
}

/// Everything needed to work on `M` for one group.
#[derive(Clone, Debug)]
pub struct FlatModule {
    pub group: FiniteSubgroup,
    pub mckay: McKayData,
    pub basis: InvariantBasis,
    pub algebra: GaugeAlgebra,
    pub tol: Tolerances,
}

impl FlatModule {
    pub fn build(label: GroupLabel, tol: &Tolerances) -> Result<Self> {
        let group = build_group_with(label, tol)?;
        let mckay = mckay_data_with(&group, tol)?;
        let basis = invariant_basis(&group, &mckay)?;
        Ok(Self::from_parts(group, mckay, basis, tol.clone()))
    }

    pub fn from_parts(group: FiniteSubgroup, mckay: McKayData, basis: InvariantBasis, tol: Tolerances) -> Self {
        let algebra = GaugeAlgebra::new(&mckay);
        FlatModule {
            group,
            mckay,
            basis,
            algebra,
            tol,
        }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn iso(&self) -> &Isotypic {
        &self.mckay.isotypic
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn membership_defect(&self, p: &MatrixPair) -> f64 {
        membership_defect(&self.group, self.iso(), p)
    }

    pub fn is_member(&self, p: &MatrixPair) -> bool {
        self.membership_defect(p) <= self.tol.membership * (1.0 + p.norm())
    }

    pub fn require_member(&self, p: &MatrixPair) -> Result<()> {
        let defect = self.membership_defect(p);
        if defect <= self.tol.membership * (1.0 + p.norm()) {
            Ok(())
        } else {
            Err(Error::NotInvariant { defect })
        }
    }

    pub fn coords(&self, p: &MatrixPair) -> Vec<f64> {
        self.basis.coords(p)
    }

    pub fn pair(&self, x: &[f64]) -> MatrixPair {
        self.basis.pair_from_coords(x)
    }

    /// Random point of `M` with coordinates drawn from `N(0, scale²)`.
    pub fn random_point(&self, rng: &mut impl rand::Rng, scale: f64) -> MatrixPair {
        let x: Vec<f64> = (0..self.dim())
            .map(|_| scale * Distribution::<f64>::sample(&StandardNormal, rng))
            .collect();
        self.pair(&x)
    }

    /// `(fαf⁻¹, fβf⁻¹)` for a unitary `f` commuting with Γ.
    pub fn f_action(&self, f: &CMat, p: &MatrixPair) -> Result<MatrixPair> {
        let iso = self.iso();
        let defect = (0..self.order())
            .map(|g| frobenius(&commutator(f, &iso.frame_matrix(g))))
            .fold(0.0, f64::max);
        if defect > self.tol.commutation {
            return Err(Error::NotInF { defect });
        }
        let finv = f.adjoint();
        Ok(MatrixPair::new(f * &p.alpha * &finv, f * &p.beta * &finv))
    }

    /// Group element `exp(Y)` for `Y` in `f`, as a dense unitary.
    pub fn exp_central(&self, y: &BlockCentral) -> CMat {
        BlockCentral {
            blocks: y.blocks.iter().map(|x| x.clone().exp()).collect(),
        }
        .to_dense(self.iso())
    }

    pub fn orbit_directions(&self, p: &MatrixPair) -> Vec<MatrixPair> {
        orbit_directions(p, &self.algebra, self.iso())
    }

    /// Matrix of orbit directions in `M` coordinates, one column per `f/t` generator.
    pub fn orbit_matrix(&self, p: &MatrixPair) -> RMat {
        let dirs = self.orbit_directions(p);
        let cols: Vec<Vec<f64>> = par::map_slice(&dirs, |d| self.coords(d));
        RMat::from_fn(self.dim(), cols.len(), |r, c| cols[c][r])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    fn module(family: Family, k: u32) -> FlatModule {
        FlatModule::build(GroupLabel::new(family, k).unwrap(), &Tolerances::default()).unwrap()
    }

    #[test]
    fn a1_basis_is_off_diagonal() {
        let m = module(Family::A, 1);
        assert_eq!(m.dim(), 8);
        for v in &m.basis.vectors {
            for &(r, c, _) in v.alpha.iter().chain(&v.beta) {
                assert_ne!(r, c);
            }
        }
        assert!(m.basis.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn quaternion_relations() {
        let m = module(Family::A, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = m.random_point(&mut rng, 1.0);
        let jj = quaternion_j(&quaternion_j(&p));
        assert!(jj.add(&p).norm() < 1e-12);
        let kk = quaternion_k(&quaternion_k(&p));
        assert!(kk.add(&p).norm() < 1e-12);
        assert!(m.is_member(&quaternion_j(&p)));
        assert!(m.is_member(&quaternion_k(&p)));
    }

    #[test]
    fn gauge_dimensions_d2() {
        let m = module(Family::D, 2);
        assert_eq!(m.algebra.f_basis.len(), 8);
        assert_eq!(m.algebra.ft_basis.len(), 7);
        assert_eq!(m.algebra.z_basis.len(), 4);
        assert!(m.algebra.commutation_defect(m.iso()) < 1e-10);
    }

    #[test]
    fn dense_check_agrees_for_d2() {
        let m = module(Family::D, 2);
        let check = dense_cross_check(&m.group, &m.mckay, &m.basis);
        assert!(check.agrees(1e-9), "{check:?}");
    }

    #[test]
    fn scalar_acts_trivially() {
        let m = module(Family::A, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = m.random_point(&mut rng, 1.0);
        let f = CMat::identity(2, 2) * c64(0.3f64.cos(), 0.3f64.sin());
        assert!(m.f_action(&f, &p).unwrap().distance(&p) < 1e-12);
        let mut bad = CMat::identity(2, 2);
        bad[(0, 1)] = ONE;
        assert!(matches!(m.f_action(&bad, &p), Err(Error::NotInF { .. })));
    }
}
