//! Dense complex linear algebra helpers shared by the numeric layer.
//!
//! Everything here is deterministic given the same input: eigenbases are
//! ordered by descending eigenvalue, and eigenvector phases are normalized
//! so the first non-negligible coordinate is real positive.

use crate::{C64, CMat, NEAR_SINGULAR};

// nalgebra's implicit-shift QR needs its blessed tolerance; a bare machine
// epsilon makes it mis-converge on clustered spectra
const SVD_EPS: f64 = f64::EPSILON * 5.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is near-singular: smallest/largest singular value = {0:.3e}")]
    NearSingular(f64),
    #[error("matrix is not unitary, defect {0:.3e}")]
    NotUnitary(f64),
    #[error("decomposition did not converge")]
    NoConvergence,
    #[error("matrix is empty")]
    Empty,
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .try_svd(false, false, SVD_EPS, 0)
        .map(|svd| svd.singular_values.max())
        .unwrap_or(f64::NAN)
}

/// `‖m† m - 1‖` in operator norm.
pub fn unitary_defect(m: &CMat) -> f64 {
    op_norm(&(m.adjoint() * m - CMat::identity(m.nrows(), m.ncols())))
}

/// Unitary polar factor `U` of `m = U·(m†m)^{1/2}` via the singular value
/// decomposition. Rejects inputs with relative smallest singular value below
/// [`NEAR_SINGULAR`].
pub fn polar(m: &CMat) -> Result<CMat, LinalgError> {
    let svd = m
        .clone()
        .try_svd(true, true, SVD_EPS, 0)
        .ok_or(LinalgError::NoConvergence)?;
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin / smax <= NEAR_SINGULAR {
        return Err(LinalgError::NearSingular(if smax == 0.0 {
            0.0
        } else {
            smin / smax
        }));
    }
    let u = svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap();
    Ok(u)
}

/// Eigendecomposition of a Hermitian matrix, eigenpairs sorted by descending
/// eigenvalue, eigenvector phases normalized.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut values = Vec::with_capacity(n);
    let mut vectors = CMat::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        values.push(se.eigenvalues[j]);
        let mut col = se.eigenvectors.column(j).clone_owned();
        phase_normalize(&mut col);
        vectors.set_column(k, &col);
    }
    (values, vectors)
}

/// Multiply a vector by the phase making its first coordinate of magnitude
/// above `1e-10` real positive.
pub fn phase_normalize(v: &mut nalgebra::DVector<C64>) {
    if let Some(lead) = v.iter().find(|c| c.norm() > 1e-10) {
        let phase = lead.conj() / lead.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Eigendecomposition of a unitary matrix: angles in `(-π, π]` plus an
/// orthonormal eigenbasis.
///
/// A unitary is normal, so its Hermitian real part and imaginary part
/// commute; we diagonalize the real part, then split each eigenvalue
/// cluster by the imaginary part restricted to it. The angle of each
/// eigenvector is recovered from both Rayleigh quotients.
pub fn unitary_eigen(u: &CMat) -> Result<(Vec<f64>, CMat), LinalgError> {
    let n = u.nrows();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    let defect = unitary_defect(u);
    if defect > crate::UNITARY_PRE_TOL {
        return Err(LinalgError::NotUnitary(defect));
    }
    let re = (u + u.adjoint()) * C64::new(0.5, 0.0);
    let im = (u - u.adjoint()) * C64::new(0.0, -0.5);
    let (cos_vals, basis) = hermitian_eigen(&re);
    let mut vectors = CMat::zeros(n, n);
    let mut angles = Vec::with_capacity(n);
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && (cos_vals[end] - cos_vals[end - 1]).abs() < 1e-7 {
            end += 1;
        }
        let cluster = basis.columns(start, end - start).clone_owned();
        let small = cluster.adjoint() * &im * &cluster;
        let (_, w) = hermitian_eigen(&small);
        let rotated = &cluster * w;
        for k in 0..(end - start) {
            let mut col = rotated.column(k).clone_owned();
            phase_normalize(&mut col);
            let cos = (col.adjoint() * &re * &col)[(0, 0)].re;
            let sin = (col.adjoint() * &im * &col)[(0, 0)].re;
            angles.push(sin.atan2(cos));
            vectors.set_column(start + k, &col);
        }
        start = end;
    }
    // residual check: each vector must actually be an eigenvector of u
    let mut resid = 0.0f64;
    for (k, &angle) in angles.iter().enumerate() {
        let v = vectors.column(k).clone_owned();
        let ev = C64::from_polar(1.0, angle);
        resid = resid.max((u * &v - &v * ev).norm());
    }
    if resid > 1e-6 {
        return Err(LinalgError::NoConvergence);
    }
    Ok((angles, vectors))
}

/// `exp(i·t·h)` for Hermitian `h`.
pub fn exp_i_hermitian(h: &CMat, t: f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(h);
    let phases = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| C64::from_polar(1.0, t * l)),
    ));
    &vecs * phases * vecs.adjoint()
}

/// Geodesic path from a unitary `z` to the identity: `m + 1` unitaries
/// `z = z_0, ..., z_m = 1` with spacing `‖z_t - z_{t+1}‖ = 2 sin(θ*/2m)
/// ≤ π/m`, where `θ*` is the largest principal eigenangle of `z`.
pub fn geodesic_path(z: &CMat, steps: usize) -> Result<(Vec<CMat>, f64), LinalgError> {
    let n = z.nrows();
    let (angles, vectors) = unitary_eigen(z)?;
    let max_angle = angles.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut path = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        if t == 0 {
            path.push(z.clone());
            continue;
        }
        if t == steps {
            path.push(CMat::identity(n, n));
            continue;
        }
        let frac = 1.0 - t as f64 / steps as f64;
        let phases = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            angles.iter().map(|&a| C64::from_polar(1.0, a * frac)),
        ));
        path.push(&vectors * phases * vectors.adjoint());
    }
    Ok((path, max_angle))
}

/// Orthonormal basis of the range of a projection, as columns, built by
/// Gram-Schmidt over the projection's columns in index order.
pub fn projection_range_basis(p: &CMat, rank: usize) -> CMat {
    let n = p.nrows();
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(rank);
    for j in 0..n {
        if basis.len() == rank {
            break;
        }
        let mut v = p.column(j).clone_owned();
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= C64::new(norm, 0.0);
            phase_normalize(&mut v);
            basis.push(v);
        }
    }
    let mut out = CMat::zeros(n, basis.len());
    for (k, b) in basis.iter().enumerate() {
        out.set_column(k, b);
    }
    out
}
