//! Dense complex linear algebra helpers on top of `nalgebra`.
//!
//! Everything downstream works with `DMatrix<Complex<f64>>`.  This module
//! centralizes the handful of decompositions the rest of the crate relies on
//! (operator norm via SVD, Hermitian eigendecompositions, polar parts, null
//! spaces) plus seeded random matrices and a Frobenius-orthonormal span
//! tracker used for *-algebra closures.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Shorthand complex constructors.
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}
pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const ZERO: C64 = Complex::new(0.0, 0.0);

/// Largest singular value; `0` for empty matrices.
pub fn op_norm_mat(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub fn frob_norm(m: &CMat) -> f64 {
    m.norm()
}

/// Frobenius inner product `tr(a* b)`.
pub fn frob_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized first, so a matrix that is Hermitian only up to
/// roundoff is handled gracefully.  Returns `(eigenvalues, eigenvectors)`
/// with `m ≈ V diag(λ) V*` and `V` unitary.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigen: square input required");
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = (m + m.adjoint()).scale(0.5);
    let se = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Clamp the spectrum of a Hermitian matrix into `[lo, hi]`.
pub fn clip_spectrum(m: &CMat, lo: f64, hi: f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&v| cr(v.clamp(lo, hi))),
    ));
    &vecs * d * vecs.adjoint()
}

/// `‖U*U − I‖` in operator norm.
pub fn unitary_defect(u: &CMat) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    op_norm_mat(&(u.adjoint() * u - CMat::identity(n, n)))
}

/// Unitary polar factor of a (square, generically invertible) matrix.
///
/// For `m = U Σ V*` this is `U V*`, the unitary closest to `m` in Frobenius
/// norm.  Returns `None` when `m` is singular beyond `rank_tol` relative to
/// its largest singular value (the polar part is then not determined).
pub fn polar_unitary(m: &CMat, rank_tol: f64) -> Option<CMat> {
    let svd = nalgebra::SVD::new(m.clone(), true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin <= rank_tol * smax {
        return None;
    }
    Some(svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap())
}

/// Orthonormal basis of the right null space `{v : m v = 0}`.
///
/// Singular vectors with singular value `≤ tol · max(σ, 1)` count as null.
pub fn null_space(m: &CMat, tol: f64) -> Vec<CVec> {
    let (r, cdim) = (m.nrows(), m.ncols());
    if cdim == 0 {
        return Vec::new();
    }
    // Pad with zero rows: nalgebra's thin SVD would otherwise drop null
    // directions of a wide matrix.
    let n = r.max(cdim);
    let mut padded = CMat::zeros(n, cdim);
    padded.view_mut((0, 0), (r, cdim)).copy_from(m);
    let svd = nalgebra::SVD::new(padded, false, true);
    let v_t = svd.v_t.as_ref().unwrap();
    let smax = svd.singular_values.max().max(1.0);
    let mut out = Vec::new();
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] <= tol * smax {
            out.push(v_t.row(i).adjoint());
        }
    }
    out
}

/// Numerical rank with threshold `tol · max(σ_max, 1)`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.max().max(1.0);
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Standard complex Gaussian matrix (entries `N(0,1) + i N(0,1)`).
pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let a = random_complex_matrix(rng, n, n);
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix column phases so the factorization (hence the sample) is unique.
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / cr(d.norm()) } else { ONE };
        let col = q.column(j) * phase.conj();
        q.set_column(j, &col);
    }
    q
}

/// Random Hermitian matrix `(A + A*)/2` with Gaussian `A`.
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, n);
    (&a + a.adjoint()).scale(0.5)
}

/// A growing span of matrices of a fixed shape, kept Frobenius-orthonormal.
///
/// Used to close generating sets into *-algebras and to answer membership
/// questions.  Gram–Schmidt is run twice per insertion for stability.
#[derive(Debug, Clone)]
pub struct MatSpan {
    rows: usize,
    cols: usize,
    basis: Vec<CMat>,
}

impl MatSpan {
    pub fn new(rows: usize, cols: usize) -> Self {
        MatSpan { rows, cols, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    fn project_out(&self, m: &CMat) -> CMat {
        let mut resid = m.clone();
        for b in &self.basis {
            let coef = frob_inner(b, &resid);
            resid -= b * coef;
        }
        resid
    }

    /// Residual Frobenius norm of `m` against the current span.
    pub fn residual(&self, m: &CMat) -> f64 {
        frob_norm(&self.project_out(&self.project_out(m)))
    }

    /// Insert `m` if it adds a new direction (residual > `tol`); report whether
    /// the span grew.
    pub fn insert(&mut self, m: &CMat, tol: f64) -> bool {
        assert!(m.nrows() == self.rows && m.ncols() == self.cols, "MatSpan: shape mismatch");
        let resid = self.project_out(&self.project_out(m));
        let norm = frob_norm(&resid);
        if norm > tol {
            self.basis.push(resid.unscale(norm));
            true
        } else {
            false
        }
    }

    /// Coordinates of `m` in the orthonormal basis (valid if `m` is in the span).
    pub fn coords(&self, m: &CMat) -> Vec<C64> {
        self.basis.iter().map(|b| frob_inner(b, m)).collect()
    }
}
