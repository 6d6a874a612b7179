//! Regular representation, isotypic decomposition and McKay data.
//!
//! The isotypic frame orders the regular representation as
//! `⊕_i C^{n_i} ⊗ R_i`: block `i` occupies `n_i²` consecutive indices and
//! index `off_i + k·n_i + a` is copy `k` of basis vector `a` of `R_i`. In this
//! frame `R(γ)` is block diagonal with blocks `I_{n_i} ⊗ ρ_i(γ)`, and irrep 0
//! is the trivial representation. Irreps are numbered as the nodes of the
//! matching affine Dynkin template.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::dynkin::{identify, AffineType};
use crate::error::{Error, Result};
use crate::group::FiniteSubgroup;
use crate::linalg::{c64, cluster_sorted, cmat_serde, frobenius, hermitian_eigen, trace, CMat, C64, ONE, ZERO};
use crate::par;
use crate::roots::enumerate_roots;

/// Left regular representation stored as permutations:
/// `R(γ) e_h = e_{γh}`, so `images[γ][h]` is the index of `γh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularRep {
    pub images: Vec<Vec<usize>>,
}

impl RegularRep {
    pub fn new(g: &FiniteSubgroup) -> Self {
        RegularRep {
            images: g.cayley.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn matrix(&self, g: usize) -> CMat {
        let n = self.order();
        let mut m = CMat::zeros(n, n);
        for h in 0..n {
            m[(self.images[g][h], h)] = ONE;
        }
        m
    }

    /// Number of fixed points of `R(γ)`.
    pub fn character(&self, g: usize) -> usize {
        self.images[g].iter().enumerate().filter(|(h, &gh)| *h == gh).count()
    }

    /// `R(γh) = R(γ)R(h)` as permutations.
    pub fn is_homomorphism_at(&self, group: &FiniteSubgroup, g: usize, h: usize) -> bool {
        let gh = group.mul(g, h);
        (0..self.order()).all(|x| self.images[gh][x] == self.images[g][self.images[h][x]])
    }

    /// `R(γ) · m`: row `γh` of the result is row `h` of `m`.
    pub fn left_apply(&self, g: usize, m: &CMat) -> CMat {
        let mut out = CMat::zeros(m.nrows(), m.ncols());
        for h in 0..self.order() {
            out.row_mut(self.images[g][h]).copy_from(&m.row(h));
        }
        out
    }
}

/// Change of basis to the isotypic frame plus the irreducible blocks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Isotypic {
    pub dims: Vec<usize>,
    pub offsets: Vec<usize>,
    /// Unitary `U`; its columns are the isotypic frame in the permutation basis.
    #[serde(with = "cmat_serde")]
    pub change: CMat,
    /// `ρ_i(γ)` stored at `i * |Γ| + γ`.
    #[serde(with = "cmat_serde::vec")]
    pub rho: Vec<CMat>,
}

impl Isotypic {
    pub fn order(&self) -> usize {
        self.change.nrows()
    }

    pub fn irreps(&self) -> usize {
        self.dims.len()
    }

    pub fn rho(&self, i: usize, g: usize) -> &CMat {
        &self.rho[i * self.order() + g]
    }

    pub fn character(&self, i: usize, g: usize) -> C64 {
        trace(self.rho(i, g))
    }

    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.dims[i] * self.dims[i]
    }

    /// Block of index `x` in the frame.
    pub fn block_of(&self, x: usize) -> usize {
        self.offsets.iter().rposition(|&o| o <= x).unwrap_or(0)
    }

    /// `R'(γ) = ⊕ I ⊗ ρ_i(γ)` as a dense matrix.
    pub fn frame_matrix(&self, g: usize) -> CMat {
        let n = self.order();
        let mut m = CMat::zeros(n, n);
        for (i, &d) in self.dims.iter().enumerate() {
            let rho = self.rho(i, g);
            for k in 0..d {
                let base = self.offsets[i] + k * d;
                m.view_mut((base, base), (d, d)).copy_from(rho);
            }
        }
        m
    }

    /// `m · R'(γ)` using the block structure.
    pub fn right_apply(&self, m: &CMat, g: usize) -> CMat {
        let mut out = CMat::zeros(m.nrows(), m.ncols());
        for (i, &d) in self.dims.iter().enumerate() {
            let rho = self.rho(i, g);
            for k in 0..d {
                let base = self.offsets[i] + k * d;
                let cols = m.columns(base, d) * rho;
                out.columns_mut(base, d).copy_from(&cols);
            }
        }
        out
    }

    /// `R'(γ) · m` using the block structure.
    pub fn left_apply(&self, g: usize, m: &CMat) -> CMat {
        let mut out = CMat::zeros(m.nrows(), m.ncols());
        for (i, &d) in self.dims.iter().enumerate() {
            let rho = self.rho(i, g);
            for k in 0..d {
                let base = self.offsets[i] + k * d;
                let rows = rho * m.rows(base, d);
                out.rows_mut(base, d).copy_from(&rows);
            }
        }
        out
    }

    /// `R'(γ)⁻¹ m R'(γ)`.
    pub fn conjugate(&self, g: usize, m: &CMat) -> CMat {
        let right = self.right_apply(m, g);
        // R'(γ)⁻¹ = R'(γ)* blockwise
        let mut out = CMat::zeros(m.nrows(), m.ncols());
        for (i, &d) in self.dims.iter().enumerate() {
            let rho_inv = self.rho(i, g).adjoint();
            for k in 0..d {
                let base = self.offsets[i] + k * d;
                let rows = &rho_inv * right.rows(base, d);
                out.rows_mut(base, d).copy_from(&rows);
            }
        }
        out
    }

    /// Largest `‖U* R(γ) U − R'(γ)‖` over the group.
    pub fn reconstruction_error(&self, reg: &RegularRep) -> f64 {
        let u_adj = self.change.adjoint();
        par::map_range(self.order(), |g| {
            let ru = reg.left_apply(g, &self.change);
            frobenius(&(&u_adj * ru - self.frame_matrix(g)))
        })
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn reordered(&self, perm: &[usize]) -> Isotypic {
        let n = self.order();
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let offsets = offsets_of(&dims);
        let mut change = CMat::zeros(n, n);
        let mut rho = Vec::with_capacity(self.rho.len());
        for (t, &p) in perm.iter().enumerate() {
            let size = dims[t] * dims[t];
            change
                .columns_mut(offsets[t], size)
                .copy_from(&self.change.columns(self.offsets[p], size));
            rho.extend((0..n).map(|g| self.rho(p, g).clone()));
        }
        Isotypic {
            dims,
            offsets,
            change,
            rho,
        }
    }
}

fn offsets_of(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d * d;
            Some(o)
        })
        .collect()
}

/// Random Hermitian element of the commutant, `H[a][b] = c(a⁻¹b)` with
/// `c(s⁻¹) = c(s)*`.
fn random_commutant(group: &FiniteSubgroup, rng: &mut ChaCha8Rng) -> CMat {
    let n = group.order();
    let mut c = vec![ZERO; n];
    for s in 0..n {
        let t = group.inverse[s];
        if t < s {
            continue;
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if t == s { 0.0 } else { rng.sample(StandardNormal) };
        c[s] = c64(re, im);
        c[t] = c64(re, -im);
    }
    CMat::from_fn(n, n, |a, b| c[group.mul(group.inverse[a], b)])
}

fn characters_close(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
}

/// Matrices of the restriction of `R` to the orthonormal columns `v`.
fn restrict(reg: &RegularRep, v: &CMat) -> Vec<CMat> {
    let v_adj = v.adjoint();
    (0..reg.order()).map(|g| &v_adj * reg.left_apply(g, v)).collect()
}

/// Unitary intertwiner `W` with `W* σ(γ) W = ρ(γ)`, for equivalent irreducible `σ`, `ρ`.
fn intertwiner(sigma: &[CMat], rho: &[CMat]) -> Option<CMat> {
    let d = rho[0].nrows();
    let mut seeds = vec![CMat::identity(d, d)];
    for a in 0..d {
        for b in 0..d {
            let mut e = CMat::zeros(d, d);
            e[(a, b)] = ONE;
            seeds.push(e);
        }
    }
    let mut best: Option<(f64, CMat)> = None;
    for m in seeds {
        let t: CMat = sigma
            .iter()
            .zip(rho)
            .fold(CMat::zeros(d, d), |acc, (s, r)| acc + s * &m * r.adjoint());
        let norm = frobenius(&t);
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, t));
        }
    }
    let (norm, t) = best?;
    if norm < 1e-6 {
        return None;
    }
    Some(t * c64((d as f64).sqrt() / norm, 0.0))
}

struct RawIrrep {
    dim: usize,
    character: Vec<C64>,
    copies: Vec<CMat>,
}

fn split_once(group: &FiniteSubgroup, reg: &RegularRep, rng: &mut ChaCha8Rng) -> Result<Vec<RawIrrep>> {
    let n = group.order();
    let h = random_commutant(group, rng);
    let (values, vectors) = hermitian_eigen(&h);
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let clusters = cluster_sorted(&values, 1e-7 * scale);

    let mut irreps: Vec<RawIrrep> = Vec::new();
    for range in clusters {
        let v = vectors.columns(range.start, range.len()).into_owned();
        let v_adj = v.adjoint();
        let character: Vec<C64> = (0..n).map(|g| trace(&(&v_adj * reg.left_apply(g, &v)))).collect();
        match irreps
            .iter_mut()
            .find(|r| r.dim == range.len() && characters_close(&r.character, &character, 1e-6))
        {
            Some(r) => r.copies.push(v),
            None => irreps.push(RawIrrep {
                dim: range.len(),
                character,
                copies: vec![v],
            }),
        }
    }

    let total: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
    if total != n || irreps.iter().any(|r| r.copies.len() != r.dim) {
        return Err(Error::DecompositionFailed(format!(
            "eigen-split gives Σ n_i² = {total} for a group of order {n}"
        )));
    }
    for r in &irreps {
        let norm: f64 = r.character.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::DecompositionFailed(format!(
                "cluster of size {} is reducible (character norm {norm})",
                r.dim
            )));
        }
    }

    // trivial first, then by dimension, then by rounded characters
    let key = |r: &RawIrrep| {
        let trivial = r.dim == 1 && r.character.iter().all(|c| (c - ONE).norm() < 1e-6);
        let chars: Vec<(i64, i64)> = r
            .character
            .iter()
            .map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64))
            .collect();
        (!trivial, r.dim, chars)
    };
    irreps.sort_by_cached_key(key);
    Ok(irreps)
}

fn assemble(group: &FiniteSubgroup, reg: &RegularRep, irreps: Vec<RawIrrep>) -> Result<Isotypic> {
    let n = group.order();
    let dims: Vec<usize> = irreps.iter().map(|r| r.dim).collect();
    let offsets = offsets_of(&dims);
    let mut change = CMat::zeros(n, n);
    let mut rho = Vec::with_capacity(n * dims.len());
    for (i, r) in irreps.iter().enumerate() {
        let reference = restrict(reg, &r.copies[0]);
        for (k, v) in r.copies.iter().enumerate() {
            let aligned = if k == 0 {
                v.clone()
            } else {
                let sigma = restrict(reg, v);
                let w = intertwiner(&sigma, &reference)
                    .ok_or_else(|| Error::DecompositionFailed("copies are not equivalent".into()))?;
                v * w
            };
            change
                .columns_mut(offsets[i] + k * r.dim, r.dim)
                .copy_from(&aligned);
        }
        rho.extend(reference);
    }
    Ok(Isotypic {
        dims,
        offsets,
        change,
        rho,
    })
}

/// Isotypic decomposition from a random Hermitian commutant element. The
/// random stream is internal and fixed, so the result is reproducible.
pub fn isotypic_decompose(group: &FiniteSubgroup, reg: &RegularRep, tol: &Tolerances) -> Result<Isotypic> {
    let mut last = Error::DecompositionFailed("no attempt made".into());
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d63_6b61_7900 + attempt);
        let outcome = split_once(group, reg, &mut rng).and_then(|irreps| assemble(group, reg, irreps));
        match outcome {
            Ok(iso) => {
                let err = iso.reconstruction_error(reg);
                if err <= tol.isotypic {
                    return Ok(iso);
                }
                last = Error::DecompositionFailed(format!("reconstruction error {err:.3e}"));
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McKayData {
    pub order: usize,
    /// Number of nontrivial irreps.
    pub r: usize,
    /// Marks `n_i = dim R_i`, with `n_0 = 1`.
    pub n: Vec<usize>,
    pub a: Vec<Vec<i64>>,
    pub cartan_ext: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
    pub dynkin: AffineType,
    pub roots: Vec<Vec<i64>>,
    pub isotypic: Isotypic,
}

impl McKayData {
    pub fn sum_of_squares(&self) -> usize {
        self.n.iter().map(|d| d * d).sum()
    }

    /// `Σ_j a_ij n_j − 2 n_i` for every node; all zero for an affine diagram.
    pub fn null_vector_defect(&self) -> Vec<i64> {
        self.cartan_ext
            .iter()
            .map(|row| row.iter().zip(&self.n).map(|(c, &m)| c * m as i64).sum())
            .collect()
    }

    pub fn symmetric_without_loops(&self) -> bool {
        let k = self.a.len();
        (0..k).all(|i| self.a[i][i] == 0 && (0..k).all(|j| self.a[i][j] == self.a[j][i]))
    }

    pub fn root_count_matches(&self) -> bool {
        self.roots.len() == self.dynkin.root_count()
    }
}

/// Compact JSON view used by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McKaySummary {
    pub label: String,
    pub order: usize,
    pub marks: Vec<usize>,
    pub adjacency: Vec<Vec<i64>>,
    pub dynkin: String,
    pub root_count: usize,
    pub sum_of_squares: usize,
    pub null_vector_ok: bool,
}

impl McKayData {
    pub fn summary(&self, label: &str) -> McKaySummary {
        McKaySummary {
            label: label.to_string(),
            order: self.order,
            marks: self.n.clone(),
            adjacency: self.a.clone(),
            dynkin: self.dynkin.to_string(),
            root_count: self.roots.len(),
            sum_of_squares: self.sum_of_squares(),
            null_vector_ok: self.null_vector_defect().iter().all(|&d| d == 0),
        }
    }
}

/// Multiplicities `a_ij = (1/|Γ|) Σ χ_Q χ_i χ_j*`, rounded.
pub fn mckay_adjacency(group: &FiniteSubgroup, iso: &Isotypic, tol: &Tolerances) -> Result<Vec<Vec<i64>>> {
    let n = group.order();
    let k = iso.irreps();
    let chi_q: Vec<f64> = group.elements.iter().map(|e| e.trace().re).collect();
    let chars: Vec<Vec<C64>> = (0..k)
        .map(|i| (0..n).map(|g| iso.character(i, g)).collect())
        .collect();
    let mut a = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let s: C64 = (0..n).map(|g| chars[i][g] * chars[j][g].conj() * chi_q[g]).sum::<C64>() / n as f64;
            let rounded = s.re.round();
            let residual = (s - c64(rounded, 0.0)).norm();
            if residual > tol.integrality {
                return Err(Error::NonIntegralMultiplicity {
                    i,
                    j,
                    value: s.re,
                    residual,
                });
            }
            a[i][j] = rounded as i64;
        }
    }
    Ok(a)
}

pub fn mckay_data(group: &FiniteSubgroup) -> Result<McKayData> {
    mckay_data_with(group, &Tolerances::default())
}

pub fn mckay_data_with(group: &FiniteSubgroup, tol: &Tolerances) -> Result<McKayData> {
    let reg = RegularRep::new(group);
    let iso = isotypic_decompose(group, &reg, tol)?;
    let a = mckay_adjacency(group, &iso, tol)?;
    let (dynkin, perm) = identify(&iso.dims, &a)
        .ok_or_else(|| Error::NotADE(format!("marks {:?}, adjacency {:?}", iso.dims, a)))?;
    let iso = iso.reordered(&perm);
    let a: Vec<Vec<i64>> = perm.iter().map(|&p| perm.iter().map(|&q| a[p][q]).collect()).collect();
    let k = a.len();
    let cartan_ext: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 2 } else { 0 } - a[i][j]).collect())
        .collect();
    let cartan: Vec<Vec<i64>> = cartan_ext[1..].iter().map(|row| row[1..].to_vec()).collect();
    let roots = enumerate_roots(&cartan);
    Ok(McKayData {
        order: group.order(),
        r: k - 1,
        n: iso.dims.clone(),
        a,
        cartan_ext,
        cartan,
        dynkin,
        roots,
        isotypic: iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, Family};

    #[test]
    fn a1_regular_rep_swaps() {
        let g = build_group(Family::A, 1).unwrap();
        let reg = RegularRep::new(&g);
        let m = reg.matrix(1);
        assert_eq!(m[(0, 1)], ONE);
        assert_eq!(m[(1, 0)], ONE);
        assert_eq!(reg.character(0), 2);
        assert_eq!(reg.character(1), 0);
    }

    #[test]
    fn a1_double_edge() {
        let g = build_group(Family::A, 1).unwrap();
        let m = mckay_data(&g).unwrap();
        assert_eq!(m.a, vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(m.dynkin, AffineType::A(1));
        assert_eq!(m.roots.len(), 2);
    }

    #[test]
    fn cyclic_three_is_a_triangle() {
        let g = build_group(Family::A, 2).unwrap();
        let m = mckay_data(&g).unwrap();
        assert_eq!(m.n, vec![1, 1, 1]);
        assert_eq!(m.dynkin, AffineType::A(2));
        assert!(m.symmetric_without_loops());
    }

    #[test]
    fn quaternion_group_is_d4() {
        let g = build_group(Family::D, 2).unwrap();
        let m = mckay_data(&g).unwrap();
        assert_eq!(m.n, vec![1, 1, 1, 1, 2]);
        assert_eq!(m.dynkin, AffineType::D(4));
        assert_eq!(m.roots.len(), 24);
        assert!(m.null_vector_defect().iter().all(|&d| d == 0));
        let reg = RegularRep::new(&g);
        assert!(m.isotypic.reconstruction_error(&reg) < 1e-8);
    }

    #[test]
    fn cyclic_four_from_dihedral_family() {
        let g = build_group(Family::D, 1).unwrap();
        let m = mckay_data(&g).unwrap();
        assert_eq!(m.dynkin, AffineType::A(3));
    }

    #[test]
    fn block_helpers_agree_with_dense() {
        let g = build_group(Family::D, 2).unwrap();
        let m = mckay_data(&g).unwrap();
        let iso = &m.isotypic;
        let x = CMat::from_fn(8, 8, |r, c| c64((r * 3 + c) as f64, (r as f64) - (c as f64)));
        for e in 0..8 {
            let r = iso.frame_matrix(e);
            assert!(frobenius(&(iso.right_apply(&x, e) - &x * &r)) < 1e-12);
            assert!(frobenius(&(iso.left_apply(e, &x) - &r * &x)) < 1e-12);
            assert!(frobenius(&(iso.conjugate(e, &x) - r.adjoint() * &x * &r)) < 1e-12);
        }
    }
}
