//! Small dense helpers on 4×4 real matrices.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};

use crate::error::{Error, Result};
use crate::numeric::ROUNDOFF;

/// `σ_y ⊗ σ_y`, which is real.
pub fn spin_flip() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    )
}

/// Eigenvalues (ascending) and eigenvectors of a real symmetric matrix.
pub fn symmetric_eigen(m: &Matrix4<f64>) -> (Vector4<f64>, Matrix4<f64>) {
    let eig = SymmetricEigen::new(*m);
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = Vector4::from_fn(|i, _| eig.eigenvalues[order[i]]);
    let vectors = Matrix4::from_fn(|r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues of a positive semidefinite matrix with round-off negatives clamped to zero.
pub fn psd_eigenvalues(m: &Matrix4<f64>) -> Result<Vector4<f64>> {
    let (values, _) = symmetric_eigen(m);
    clamp_psd(values)
}

fn clamp_psd(values: Vector4<f64>) -> Result<Vector4<f64>> {
    if values.iter().any(|&v| v < -ROUNDOFF || v.is_nan()) {
        return Err(Error::InvalidState(format!(
            "matrix is not positive semidefinite (eigenvalues {:?})",
            values.as_slice()
        )));
    }
    Ok(values.map(|v| v.max(0.0)))
}

/// Principal square root of a positive semidefinite symmetric matrix.
pub fn psd_sqrt(m: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let (values, vectors) = symmetric_eigen(m);
    let roots = clamp_psd(values)?.map(f64::sqrt);
    Ok(vectors * Matrix4::from_diagonal(&roots) * vectors.transpose())
}

/// The spin-flip spectrum `λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄` of a real two-qubit density matrix: the
/// square roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// Computed as the singular values of `√ρ (σ_y⊗σ_y) √ρ`, whose squares are exactly those
/// eigenvalues. Taking square roots of the eigenvalues of the product directly would
/// amplify their absolute round-off (~1e-16) to ~1e-8.
pub fn spin_flip_spectrum(rho: &Matrix4<f64>) -> Result<[f64; 4]> {
    let root = psd_sqrt(rho)?;
    let m = root * spin_flip() * root;
    let svd = m.svd(false, false);
    let mut values: [f64; 4] = std::array::from_fn(|i| svd.singular_values[i]);
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Eigenvalues of the nonsymmetric product `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)` from a general
/// (Schur-based) eigen solver, in decreasing order.
///
/// Imaginary parts above `1e-10` are reported as an error. This is the direct route; the
/// primary path uses [`spin_flip_spectrum`].
pub fn spin_flip_eigenvalues(rho: &Matrix4<f64>) -> Result<[f64; 4]> {
    let yy = spin_flip();
    let product = rho * yy * rho * yy;
    let eigenvalues = product.complex_eigenvalues();
    if let Some(z) = eigenvalues.iter().find(|z| z.im.abs() > 1e-10) {
        return Err(Error::Numerical(format!(
            "spin-flipped product has a complex eigenvalue {z}"
        )));
    }
    let mut values: [f64; 4] = std::array::from_fn(|i| eigenvalues[i].re);
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// `Tr₂ ρ` (reduced state of the first qubit).
pub fn trace_out_second(rho: &Matrix4<f64>) -> Matrix2<f64> {
    Matrix2::from_fn(|i, k| rho[(2 * i, 2 * k)] + rho[(2 * i + 1, 2 * k + 1)])
}

/// `Tr₁ ρ` (reduced state of the second qubit).
pub fn trace_out_first(rho: &Matrix4<f64>) -> Matrix2<f64> {
    Matrix2::from_fn(|l, m| rho[(l, m)] + rho[(2 + l, 2 + m)])
}

/// Eigenvalues of a 2×2 real symmetric matrix, larger first.
pub fn symmetric2_eigenvalues(m: &Matrix2<f64>) -> [f64; 2] {
    hermitian2_eigenvalues(m[(0, 0)], m[(1, 1)], m[(0, 1)].hypot(0.0))
}

/// Eigenvalues of the Hermitian matrix `[[p, z], [z*, q]]` given `|z|`, larger first.
pub fn hermitian2_eigenvalues(p: f64, q: f64, off_abs: f64) -> [f64; 2] {
    let mean = 0.5 * (p + q);
    let half_gap = (0.5 * (p - q)).hypot(off_abs);
    [mean + half_gap, mean - half_gap]
}
