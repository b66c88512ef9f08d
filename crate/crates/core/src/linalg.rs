//! Dense symmetric linear algebra: Jacobi eigendecomposition, PSD cone
//! projection, matrix square roots, Gram decompositions, polar factors, and
//! numeric rank.
//!
//! Everything here is plain `f64` on row-major dense storage. The problems
//! this crate solves are small (a few dozen rows at most), so a single
//! trusted eigensolver carries the whole module: the SVD is obtained from
//! the symmetric embedding `[[0, A], [A^T, 0]]` rather than a second
//! factorization routine.

use crate::error::{Error, Result};

/// Off-diagonal Frobenius threshold (relative to matrix norm) at which a
/// Jacobi sweep is considered converged.
pub const JACOBI_OFF_TOL: f64 = 1e-12;

/// Jacobi sweep cap. Cyclic Jacobi converges quadratically; exceeding this
/// is a defect, not an input condition.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Default relative eigenvalue tolerance separating structural rank from
/// solver noise.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// Numerical negativity tolerated before an input is rejected as not PSD.
pub const PSD_NEGATIVITY_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Dense matrix
// ---------------------------------------------------------------------------

/// Row-major dense matrix. Used for eigenvector blocks, polar factors, and
/// the rectangular systems in the nondegeneracy test.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }
}

// ---------------------------------------------------------------------------
// Symmetric matrix
// ---------------------------------------------------------------------------

/// Dense real symmetric matrix. Construction symmetrizes the input as
/// `(A + A^T)/2`, so `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds from a row-major `dim x dim` buffer, symmetrizing.
    pub fn new(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), dim * dim, "buffer length must be dim^2");
        let mut m = SymMatrix { dim, data };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = 0.5 * (m.data[i * dim + j] + m.data[j * dim + i]);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set_sym(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Writes both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        SymMatrix { dim: self.dim, data }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        SymMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        SymMatrix { dim: self.dim, data }
    }

    /// Trace inner product `<A, B> = sum_ij A_ij B_ij`.
    pub fn trace_inner(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn distance(&self, other: &SymMatrix) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// Copy into a general matrix, for mixed products.
    pub fn to_mat(&self) -> Mat {
        Mat { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub(crate) fn data(&self) -> &[f64] {
        &self.data
    }
}

// ---------------------------------------------------------------------------
// Eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

/// Full spectral decomposition `A = Q diag(eigenvalues) Q^T` with
/// eigenvalues sorted in descending order and orthonormal columns in
/// `eigenvectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
}

impl EigenDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap_or(&0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.first().unwrap_or(&0.0)
    }
}

/// Spectral decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Panics if the sweep cap is exceeded, which would indicate a defect: the
/// off-diagonal mass of a symmetric matrix decreases monotonically under
/// Jacobi sweeps and vanishes quadratically.
pub fn eigh(a: &SymMatrix) -> EigenDecomposition {
    let n = a.dim();
    if n == 0 {
        return EigenDecomposition { eigenvalues: vec![], eigenvectors: Mat::zeros(0, 0) };
    }
    let mut m: Vec<f64> = a.data().to_vec();
    let mut q = Mat::identity(n);
    let stop = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diag_frobenius(&m, n) <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                jacobi_rotate(&mut m, &mut q, n, p, r);
            }
        }
    }
    if !converged && off_diag_frobenius(&m, n) > stop {
        panic!("jacobi eigensolver failed to converge within {JACOBI_MAX_SWEEPS} sweeps");
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].partial_cmp(&m[i * n + i]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let mut eigenvectors = Mat::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors.set(i, new_col, q.get(i, old_col));
        }
    }
    EigenDecomposition { eigenvalues, eigenvectors }
}

fn off_diag_frobenius(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = m[i * n + j];
            s += 2.0 * v * v;
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `m[p][r]`, accumulated into `q`.
fn jacobi_rotate(m: &mut [f64], q: &mut Mat, n: usize, p: usize, r: usize) {
    let apq = m[p * n + r];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[r * n + r];
    // Entry already negligible at this scale: zero it outright so the sweep
    // cannot stall on a rotation angle that underflows.
    if 100.0 * apq.abs() <= f64::EPSILON * app.abs().max(aqq.abs()) {
        m[p * n + r] = 0.0;
        m[r * n + p] = 0.0;
        return;
    }
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    m[p * n + p] = app - t * apq;
    m[r * n + r] = aqq + t * apq;
    m[p * n + r] = 0.0;
    m[r * n + p] = 0.0;
    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let akp = m[k * n + p];
        let akq = m[k * n + r];
        m[k * n + p] = c * akp - s * akq;
        m[p * n + k] = m[k * n + p];
        m[k * n + r] = s * akp + c * akq;
        m[r * n + k] = m[k * n + r];
    }
    for k in 0..n {
        let qkp = q.get(k, p);
        let qkq = q.get(k, r);
        q.set(k, p, c * qkp - s * qkq);
        q.set(k, r, s * qkp + c * qkq);
    }
}

// ---------------------------------------------------------------------------
// Cone and factorization operations
// ---------------------------------------------------------------------------

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues are
/// clipped to zero.
pub fn psd_project(a: &SymMatrix) -> SymMatrix {
    let eig = eigh(a);
    reconstruct(&eig.eigenvectors, &clip_nonneg(&eig.eigenvalues))
}

fn clip_nonneg(vals: &[f64]) -> Vec<f64> {
    vals.iter().map(|&v| v.max(0.0)).collect()
}

fn reconstruct(q: &Mat, eigenvalues: &[f64]) -> SymMatrix {
    let n = q.rows();
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut v = 0.0;
            for (k, &lam) in eigenvalues.iter().enumerate() {
                if lam != 0.0 {
                    v += lam * q.get(i, k) * q.get(j, k);
                }
            }
            out.set_sym(i, j, v);
        }
    }
    out
}

/// Positive semidefinite square root.
///
/// Eigenvalues in `[-PSD_NEGATIVITY_TOL, 0)` are treated as numerical noise
/// and clipped; anything more negative is rejected. Positive eigenvalues
/// below `1e-12 * lambda_max` are also floored to zero: taking their square
/// root would amplify representation noise into the result.
pub fn sqrt_psd(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = eigh(a);
    let min = eig.min_eigenvalue();
    if min < -PSD_NEGATIVITY_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let floor = 1e-12 * eig.max_eigenvalue().max(0.0);
    let roots: Vec<f64> =
        eig.eigenvalues.iter().map(|&v| if v > floor { v.sqrt() } else { 0.0 }).collect();
    Ok(reconstruct(&eig.eigenvectors, &roots))
}

/// Gram decomposition of a PSD matrix at relative rank tolerance `rank_tol`:
/// returns one vector per row, each of length equal to the numeric rank,
/// with `<v_i, v_j> = a(i, j)` up to the truncated spectrum.
pub fn gram_decompose(a: &SymMatrix, rank_tol: f64) -> Result<Vec<Vec<f64>>> {
    let eig = eigh(a);
    let lam_max = eig.max_eigenvalue().max(0.0);
    let min = eig.min_eigenvalue();
    if min < -PSD_NEGATIVITY_TOL.max(rank_tol * lam_max) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let threshold = rank_tol * lam_max;
    let kept: Vec<(usize, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v > threshold && v > 0.0)
        .map(|(k, &v)| (k, v.sqrt()))
        .collect();
    let n = a.dim();
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        vectors.push(kept.iter().map(|&(k, s)| s * eig.eigenvectors.get(i, k)).collect());
    }
    Ok(vectors)
}

/// Singular values of a rectangular matrix, descending, computed from the
/// eigenvalues of the symmetric embedding `[[0, A], [A^T, 0]]` (whose
/// spectrum is `{+sigma_i} u {-sigma_i} u {0}`).
pub fn singular_values(a: &Mat) -> Vec<f64> {
    let (m, k) = (a.rows(), a.cols());
    let q = m.min(k);
    if q == 0 {
        return vec![];
    }
    let eig = eigh(&embed(a));
    let mut sv: Vec<f64> = eig.eigenvalues.into_iter().filter(|&v| v > 0.0).collect();
    sv.truncate(q);
    sv.resize(q, 0.0);
    sv
}

fn embed(a: &Mat) -> SymMatrix {
    let (m, k) = (a.rows(), a.cols());
    let mut h = SymMatrix::zeros(m + k);
    for i in 0..m {
        for j in 0..k {
            h.set_sym(i, m + j, a.get(i, j));
        }
    }
    h
}

/// Number of singular values above `tol * sigma_max`; zero for the zero
/// matrix.
pub fn numeric_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let sv = singular_values(&Mat::from_rows(rows));
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    if sigma_max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * sigma_max).count()
}

/// Orthogonal factor of the left polar decomposition `V = |V| U` with
/// `|V| = (V V^T)^{1/2}`.
///
/// Computed from the singular triples of `V`; for rank-deficient input the
/// null directions are completed deterministically against the standard
/// basis, which yields a valid polar factor for any completion.
pub fn polar_unitary(v: &Mat) -> Mat {
    assert_eq!(v.rows(), v.cols(), "polar factor requires a square matrix");
    let d = v.rows();
    if d == 0 {
        return Mat::zeros(0, 0);
    }
    let eig = eigh(&embed(v));
    let cutoff = 1e-13 * eig.max_eigenvalue().max(1.0);

    // Eigenvector (u; w)/sqrt(2) of the embedding at eigenvalue +sigma gives
    // the singular pair: V w = sigma u. Near the eigensolver's resolution
    // the +sigma/-sigma spaces can mix and skew the u/w split; such columns
    // are left to the deterministic completion, which changes the factor
    // only on directions where |V| is below the cutoff anyway.
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam <= cutoff || left.len() == d {
            break;
        }
        let col = eig.eigenvectors.col(k);
        let sqrt2 = std::f64::consts::SQRT_2;
        let u: Vec<f64> = col[..d].iter().map(|&x| sqrt2 * x).collect();
        let w: Vec<f64> = col[d..].iter().map(|&x| sqrt2 * x).collect();
        if norm2(&u) < 0.9 || norm2(&w) < 0.9 {
            continue;
        }
        left.push(u);
        right.push(w);
    }
    let p = complete_orthonormal(&left, d);
    let q = complete_orthonormal(&right, d);
    p.matmul(&q.transpose())
}

/// Extends a set of (near-)orthonormal columns to a full orthonormal basis
/// of `R^d` via modified Gram-Schmidt over the standard basis, in a fixed
/// candidate order so the completion is deterministic.
fn complete_orthonormal(cols: &[Vec<f64>], d: usize) -> Mat {
    let mut basis: Vec<Vec<f64>> = cols.to_vec();
    for b in &mut basis {
        let norm = norm2(b);
        assert!(norm > 0.5, "input columns must be near-unit");
        for x in b.iter_mut() {
            *x /= norm;
        }
    }
    let mut e = 0;
    while basis.len() < d {
        assert!(e < d, "failed to complete orthonormal basis");
        let mut v = vec![0.0; d];
        v[e] = 1.0;
        e += 1;
        for _ in 0..2 {
            for b in &basis {
                let proj: f64 = b.iter().zip(&v).map(|(a, x)| a * x).sum();
                for (x, bb) in v.iter_mut().zip(b) {
                    *x -= proj * bb;
                }
            }
        }
        let norm = norm2(&v);
        if norm > 1e-4 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    let mut m = Mat::zeros(d, d);
    for (j, b) in basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

/// Euclidean norm of a slice.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Dot product of equal-length slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
