//! Support-swap smoothing: a unitary that moves one projection onto another
//! while staying close to the identity on the rest.
//!
//! Given projections `e1, e2` and a partial isometry `w` with `w*w = e1`,
//! `ww* = e2`, the approximate unitary
//!
//! ```text
//! T = w + (1-e2) w* (1-e1) + (1-e2)(1-e1)
//! ```
//!
//! satisfies `T e1 = w` and `e2 T = w` on the nose, and `T*T` commutes with
//! `e1`, so the polar factor `v = T·(T*T)^{-1/2}` inherits the exact
//! intertwining `v e1 = w e1 = e2 w = e2 v`. Near-orthogonality (or
//! equality) of `e1, e2` keeps `T` invertible; in between, `T` can become
//! singular, which is why the overlap gate exists.

use super::ConstructError;
use crate::linalg;
use crate::matrix::{polar_unitary, LevelMatrix};
use crate::{ALMOST_ORTHOGONAL, MATRIX_TOL};

/// A smoothed swap unitary with its measured defects.
#[derive(Clone, Debug)]
pub struct SmoothSwap {
    pub unitary: LevelMatrix,
    /// `‖e1·e2‖`, the overlap the inputs were gated on.
    pub overlap: f64,
    /// `max(‖v·e1 - w·e1‖, ‖e2·v - e2·w‖)`.
    pub intertwine_defect: f64,
    /// `‖v† v - 1‖`.
    pub unitarity_defect: f64,
}

/// Smooth the swap `w : e1 → e2` into a full unitary with exact
/// intertwining.
///
/// Preconditions: `e1, e2` projections, `w*w = e1`, `ww* = e2`, and either
/// `‖e1·e2‖ ≤ 0.1` (almost orthogonal) or `e1 = e2`.
pub fn smooth_swap(
    e1: &LevelMatrix,
    e2: &LevelMatrix,
    w: &LevelMatrix,
) -> Result<SmoothSwap, ConstructError> {
    for p in [e1, e2] {
        let defect = p.projection_defect();
        if defect > MATRIX_TOL {
            return Err(ConstructError::NotProjection(defect));
        }
    }
    let initial = linalg::op_norm(&(w.data().adjoint() * w.data() - e1.data()));
    let range = linalg::op_norm(&(w.data() * w.data().adjoint() - e2.data()));
    if initial.max(range) > MATRIX_TOL {
        return Err(ConstructError::NotPartialIsometry(initial.max(range)));
    }
    let overlap = linalg::op_norm(&(e1.data() * e2.data()));
    let equal = linalg::op_norm(&(e1.data() - e2.data())) <= crate::UNITARY_PRE_TOL;
    if overlap > ALMOST_ORTHOGONAL + 1e-12 && !equal {
        return Err(ConstructError::NotAlmostOrthogonal(overlap));
    }

    let dim = e1.dim();
    let one = crate::CMat::identity(dim, dim);
    let c1 = &one - e1.data();
    let c2 = &one - e2.data();
    let approx = w.data() + &c2 * w.data().adjoint() * &c1 + &c2 * &c1;
    let approx = LevelMatrix::new(e1.d(), e1.level(), approx)?;
    let v = polar_unitary(&approx)?;

    let left = linalg::op_norm(&(v.data() * e1.data() - w.data() * e1.data()));
    let right = linalg::op_norm(&(e2.data() * v.data() - e2.data() * w.data()));
    let intertwine_defect = left.max(right);
    let unitarity_defect = linalg::unitary_defect(v.data());
    if unitarity_defect > MATRIX_TOL {
        return Err(ConstructError::NotUnitary(unitarity_defect));
    }
    // the polar step preserves the intertwining exactly; 10·overlap is the
    // recorded envelope, float noise aside
    if intertwine_defect > 10.0 * overlap + 1e-9 {
        return Err(ConstructError::VerificationFailed(format!(
            "intertwining defect {intertwine_defect:.3e} exceeds 10·overlap"
        )));
    }
    Ok(SmoothSwap {
        unitary: v,
        overlap,
        intertwine_defect,
        unitarity_defect,
    })
}
