//! Small dense linear-algebra helpers shared by the state, channel and
//! entanglement modules. Everything works on `nalgebra` dynamic matrices in
//! the interleaved `(x1, p1, x2, p2, ...)` quadrature ordering.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Quadrature variance of the vacuum (ħ = 1/2).
pub const VACUUM_VARIANCE: f64 = 0.25;

/// The 2N×2N block-diagonal symplectic form built from `J = [[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut lambda = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        lambda[(2 * k, 2 * k + 1)] = 1.0;
        lambda[(2 * k + 1, 2 * k)] = -1.0;
    }
    lambda
}

/// Largest absolute element of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest element of `|V - Vᵀ|`.
pub fn asymmetry(v: &DMatrix<f64>) -> f64 {
    max_abs_diff(v, &v.transpose())
}

/// Smallest eigenvalue of the Hermitian matrix `V + (i/4) Λ`.
///
/// `H = A + iB` with `A` symmetric and `B` antisymmetric is embedded as the
/// real symmetric matrix `[[A, -B], [B, A]]`, whose spectrum is that of `H`
/// with every eigenvalue doubled.
pub fn uncertainty_min_eigenvalue(v: &DMatrix<f64>) -> f64 {
    let dim = v.nrows();
    let b = symplectic_form(dim / 2) * VACUUM_VARIANCE;
    let sym = (v + v.transpose()) * 0.5;
    let mut real = DMatrix::zeros(2 * dim, 2 * dim);
    real.view_mut((0, 0), (dim, dim)).copy_from(&sym);
    real.view_mut((dim, dim), (dim, dim)).copy_from(&sym);
    real.view_mut((0, dim), (dim, dim)).copy_from(&(-&b));
    real.view_mut((dim, 0), (dim, dim)).copy_from(&b);
    SymmetricEigen::new(real).eigenvalues.min()
}

/// Symplectic eigenvalues of a covariance-shaped matrix, ascending.
///
/// They are the moduli of the eigenvalues of `Λ V`, which come in `±iν`
/// pairs; each pair is averaged into a single value.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Vec<f64> {
    let n = v.nrows() / 2;
    let lv = symplectic_form(n) * v;
    let mut moduli: Vec<f64> = lv.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    moduli.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

/// Copies the rows/columns of the listed modes out of a 2N×2N matrix.
pub fn mode_submatrix(v: &DMatrix<f64>, modes: &[usize]) -> DMatrix<f64> {
    let idx = quadrature_indices(modes);
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| v[(idx[r], idx[c])])
}

pub fn mode_subvector(m: &DVector<f64>, modes: &[usize]) -> DVector<f64> {
    let idx = quadrature_indices(modes);
    DVector::from_fn(idx.len(), |r, _| m[idx[r]])
}

pub fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect()
}

/// Block-diagonal direct sum of two square matrices.
pub fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    out
}
