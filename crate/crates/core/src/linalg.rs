//! Small dense linear-algebra helpers over `nalgebra`.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// `Re Tr(a b*)`.
pub fn real_pairing(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x * y.conj()).re).sum()
}

/// `Tr(a b*)`.
pub fn hermitian_pairing(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Removes the trace part: `m - Tr(m)/n · Id`.
pub fn trace_projected(m: &CMat) -> CMat {
    let n = m.nrows();
    let shift = trace(m) / n as f64;
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] -= shift;
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending
/// and eigenvectors in the matching column order.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Groups sorted values into runs whose consecutive gaps are at most `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Singular values (descending) and a full orthogonal set of right singular
/// vectors, as the columns of the returned matrix.
pub fn svd_full(m: &RMat) -> (Vec<f64>, RMat) {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = RMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = RMat::from_fn(cols, order.len(), |r, c| v_t[(order[c], r)]);
    (values, v)
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &RMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis of the column span, keeping singular directions above
/// `cut` times the largest singular value.
pub fn column_span(m: &RMat, cut: f64) -> RMat {
    if m.ncols() == 0 {
        return RMat::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return RMat::zeros(m.nrows(), 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cut * smax)
        .collect();
    RMat::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Numerical rank with a relative singular-value cut.
pub fn rank(m: &RMat, cut: f64) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > cut * smax).count()
}

/// Orthonormal completion of a unit vector: the columns of the returned
/// `n × (n-1)` matrix together with `unit` form an orthonormal basis.
pub fn orthogonal_complement(unit: &[f64]) -> RMat {
    let n = unit.len();
    // Householder reflection taking e_0 to `unit`; its other columns span the complement.
    let mut v: Vec<f64> = unit.to_vec();
    v[0] -= 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let mut h = RMat::identity(n, n);
    if vv > 1e-30 {
        for r in 0..n {
            for c in 0..n {
                h[(r, c)] -= 2.0 * v[r] * v[c] / vv;
            }
        }
    }
    h.columns(1, n - 1).into_owned()
}

/// Serde adapter storing complex matrices as `{rows, cols, data: [[re, im], ...]}`
/// in row-major order.
pub mod cmat_serde {
    use super::{c64, CMat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        rows: usize,
        cols: usize,
        data: Vec<[f64; 2]>,
    }

    fn to_repr(m: &CMat) -> Repr {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        Repr {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<CMat, E> {
        if r.data.len() != r.rows * r.cols {
            return Err(E::custom("matrix data length does not match shape"));
        }
        Ok(CMat::from_fn(r.rows, r.cols, |i, j| {
            let [re, im] = r.data[i * r.cols + j];
            c64(re, im)
        }))
    }

    pub fn serialize<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
        to_repr(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(ms: &[CMat], s: S) -> Result<S::Ok, S::Error> {
            ms.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMat>, D::Error> {
            Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let a = CMat::identity(2, 2);
        let b = CMat::identity(3, 3);
        assert_eq!(kron(&a, &b), CMat::identity(6, 6));
    }

    #[test]
    fn complement_is_orthonormal() {
        let unit = [0.5, 0.5, 0.5, 0.5];
        let h = orthogonal_complement(&unit);
        let u = RVec::from_column_slice(&unit);
        assert!((h.transpose() * &h - RMat::identity(3, 3)).norm() < 1e-14);
        assert!((h.transpose() * u).norm() < 1e-14);
    }

    #[test]
    fn clusters_split_on_gaps() {
        let v = [0.0, 1e-12, 1.0, 2.0, 2.0 + 1e-13];
        let c = cluster_sorted(&v, 1e-8);
        assert_eq!(c, vec![0..2, 2..3, 3..5]);
    }

    #[test]
    fn full_svd_of_wide_matrix_has_kernel() {
        let m = RMat::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let (s, v) = svd_full(&m);
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14 && s[2].abs() < 1e-14);
        assert_eq!(v.shape(), (3, 3));
        assert!((v.transpose() * &v - RMat::identity(3, 3)).norm() < 1e-12);
    }
}
