//! The averaged projection over the index-shift model.
//!
//! With `L = 2^{N+1}` and matrix units `e_{ij}` over `{-L, ..., L}`, the
//! projection
//!
//! ```text
//! E = e_{00} + Σ_{ℓ=1}^{L-1} (1-e_{00}) { (L-ℓ)/L · e_{ℓ,ℓ}
//!       + ℓ/L · e_{ℓ-L,ℓ-L}
//!       + √((L-ℓ)ℓ)/L · (e_{ℓ,ℓ-L} + e_{ℓ-L,ℓ}) } (1-e_{00})
//! ```
//!
//! is exact (each `ℓ` contributes a rank-1 block on the coordinate pair
//! `(ℓ, ℓ-L)`) and its translate differs from it in norm by exactly
//! `2^{-(N+1)/2}`. Its support stays strictly inside the index range, so
//! the translation loses nothing; this is asserted, not assumed.

use super::ConstructError;
use crate::linalg;
use crate::shift::IndexModel;
use crate::{C64, CMat};

/// The averaged projection together with every measured defect.
#[derive(Clone, Debug)]
pub struct KishimotoProjection {
    /// The exponent `N`.
    pub exponent: u32,
    /// Index radius `2^{N+1}` of the carrier.
    pub radius: i64,
    /// The projection over indices `{-radius, ..., radius}`.
    pub matrix: CMat,
    /// `‖σ(E) - E‖`.
    pub shift_defect: f64,
    /// `‖E² - E‖`.
    pub idempotent_defect: f64,
    /// `‖E* - E‖`.
    pub adjoint_defect: f64,
    /// Largest entry on the boundary rows/columns (must vanish for the
    /// translation to be exact).
    pub boundary_mass: f64,
}

/// Build the averaged projection for exponent `N` (1 ≤ N ≤ 6) and measure
/// `‖σ(E) - E‖`.
pub fn kishimoto_projection(exponent: u32) -> Result<KishimotoProjection, ConstructError> {
    if !(1..=6).contains(&exponent) {
        return Err(ConstructError::ExponentOutOfRange(exponent));
    }
    let l: i64 = 1 << (exponent + 1);
    let model = IndexModel::new(l)?;
    let dim = model.dim();
    let lf = l as f64;

    let e00 = model.unit(0, 0)?;
    let mut inner = CMat::zeros(dim, dim);
    for ell in 1..l {
        let row = model.offset(ell)?;
        let neg = model.offset(ell - l)?;
        let a = (lf - ell as f64) / lf;
        let b = ell as f64 / lf;
        let c = ((lf - ell as f64) * ell as f64).sqrt() / lf;
        inner[(row, row)] += C64::new(a, 0.0);
        inner[(neg, neg)] += C64::new(b, 0.0);
        inner[(row, neg)] += C64::new(c, 0.0);
        inner[(neg, row)] += C64::new(c, 0.0);
    }
    let one = CMat::identity(dim, dim);
    let cut = &one - &e00;
    let matrix = &e00 + &cut * inner * &cut;

    let idempotent_defect = linalg::op_norm(&(&matrix * &matrix - &matrix));
    let adjoint_defect = linalg::op_norm(&(matrix.adjoint() - &matrix));
    let boundary_mass = model.boundary_mass(&matrix);
    if boundary_mass > 0.0 {
        return Err(ConstructError::VerificationFailed(format!(
            "averaged projection touches the index boundary (mass {boundary_mass:.3e})"
        )));
    }
    let shift_defect = linalg::op_norm(&(model.shift(&matrix) - &matrix));

    Ok(KishimotoProjection {
        exponent,
        radius: l,
        matrix,
        shift_defect,
        idempotent_defect,
        adjoint_defect,
        boundary_mass,
    })
}
