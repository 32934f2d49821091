//! The approximate one-cocycle construction: given a unitary `u` and cyclic
//! towers for the shift, a unitary `v` with `‖v - u·λ̂(v)‖ < 4/p`.
//!
//! Write `Φ(x) = v_2 u λ̂(x) v_1*`, where `v_1, v_2` are the polar
//! corrections making the tower relations exact. Then `Φ^i` of the
//! connector `w : e_0 → f_0` is a partial isometry `e_i → f_i`, the
//! holonomy `z = w* Φ^p(w)` is a unitary in the corner `e_0 · e_0`, and
//!
//! ```text
//! v = Σ_{i=0}^{p-1} Φ^i(w z_i)
//! ```
//!
//! is a unitary whose cocycle defect telescopes into the path increments of
//! `z_i`. Taking the `z_i` along the geodesic from `z` to `1` in `p` steps
//! gives `‖v - Φ(v)‖ ≤ 2 sin(θ*/2p) ≤ π/p`, where `θ*` is the largest
//! eigenangle of the holonomy; the corrections add at most
//! `‖v_1 - 1‖ + ‖v_2 - 1‖`. With exact towers both corrections vanish and
//! the achieved bound is `π/p < 4/p`, deterministically.

use super::ConstructError;
use crate::linalg;
use crate::shift::ShiftSystem;
use crate::{CMat, MATRIX_TOL, UNITARY_PRE_TOL};

/// Full transcript of one cocycle construction.
#[derive(Clone, Debug)]
pub struct RordamData {
    pub period: usize,
    /// Towers `e_i` for the shift.
    pub towers_initial: Vec<CMat>,
    /// Towers `f_i` for the `u`-twisted shift.
    pub towers_final: Vec<CMat>,
    /// `max_i ‖λ̂(e_i) - e_{i+1}‖`.
    pub tower_defect_initial: f64,
    /// `max_i ‖u·λ̂(f_i)·u* - f_{i+1}‖`.
    pub tower_defect_final: f64,
    /// Connector `w` with `w*w = e_0`, `ww* = f_0`.
    pub connector: CMat,
    /// Correction `v_1` with `Ad(v_1)∘λ̂` cycling the `e`-tower exactly.
    pub correction_initial: CMat,
    /// Correction `v_2` with `Ad(v_2 u)∘λ̂` cycling the `f`-tower exactly.
    pub correction_final: CMat,
    /// `(‖v_1 - 1‖, ‖v_2 - 1‖)`.
    pub correction_sizes: (f64, f64),
    /// Corner path `z = z_0, ..., z_p = 1` (corner-compressed unitaries).
    pub path: Vec<CMat>,
    /// Largest path increment.
    pub path_spacing: f64,
    /// The output unitary `v`.
    pub cocycle: CMat,
    /// `‖v†v - 1‖`.
    pub unitarity_defect: f64,
    /// `‖v - u·λ̂(v)‖`, the achieved cocycle bound.
    pub achieved: f64,
    /// `4/p`.
    pub bound: f64,
}

/// Run the construction with the system's own (exact) towers.
pub fn rordam_v(sys: &ShiftSystem, u: &CMat) -> Result<RordamData, ConstructError> {
    let towers = sys.towers()?;
    let final_towers = towers.clone();
    rordam_v_with_towers(sys, u, towers, final_towers)
}

/// Run the construction with caller-supplied towers (e.g. jittered ones, to
/// exercise the corrections).
pub fn rordam_v_with_towers(
    sys: &ShiftSystem,
    u: &CMat,
    towers_initial: Vec<CMat>,
    towers_final: Vec<CMat>,
) -> Result<RordamData, ConstructError> {
    let p = towers_initial.len();
    if p < 2 || towers_final.len() != p {
        return Err(ConstructError::TowerDefectTooLarge(f64::INFINITY));
    }
    let dim = sys
        .dim()
        .ok_or(ConstructError::Shift(crate::shift::ShiftError::NoTowers))?;
    let one = CMat::identity(dim, dim);

    let u_defect = linalg::unitary_defect(u);
    if u_defect > UNITARY_PRE_TOL {
        return Err(ConstructError::NotUnitary(u_defect));
    }
    if let ShiftSystem::Cyclic(model) = sys {
        let off = model.carrier_defect(u);
        if off > MATRIX_TOL {
            return Err(ConstructError::Shift(
                crate::shift::ShiftError::NotInCarrier(off),
            ));
        }
    }
    for tower in [&towers_initial, &towers_final] {
        let sum = tower.iter().fold(CMat::zeros(dim, dim), |a, e| a + e);
        let defect = linalg::op_norm(&(&sum - &one));
        if defect > MATRIX_TOL {
            return Err(ConstructError::TowersIncomplete(defect));
        }
        for e in tower.iter() {
            let proj = linalg::op_norm(&(e * e - e)).max(linalg::op_norm(&(e.adjoint() - e)));
            if proj > UNITARY_PRE_TOL {
                return Err(ConstructError::NotProjection(proj));
            }
        }
    }

    let shift = |x: &CMat| sys.shift_matrix(x);
    let twisted = |x: &CMat| -> Result<CMat, ConstructError> { Ok(u * shift(x)? * u.adjoint()) };

    let mut tower_defect_initial = 0.0f64;
    let mut tower_defect_final = 0.0f64;
    for i in 0..p {
        let next = (i + 1) % p;
        tower_defect_initial = tower_defect_initial.max(linalg::op_norm(
            &(shift(&towers_initial[i])? - &towers_initial[next]),
        ));
        tower_defect_final = tower_defect_final.max(linalg::op_norm(
            &(twisted(&towers_final[i])? - &towers_final[next]),
        ));
    }

    // polar corrections: T = Σ e_{i+1}·L(e_i) intertwines the tower exactly
    // (T·L(e_i) = e_{i+1}·T), and ‖T - 1‖ is controlled by the defect
    let correction = |tower: &[CMat],
                      map: &dyn Fn(&CMat) -> Result<CMat, ConstructError>|
     -> Result<(CMat, f64), ConstructError> {
        let mut t = CMat::zeros(dim, dim);
        for i in 0..p {
            t += &tower[(i + 1) % p] * map(&tower[i])?;
        }
        let gap = linalg::op_norm(&(&t - &one));
        if gap >= 0.5 {
            return Err(ConstructError::TowerDefectTooLarge(gap));
        }
        let v = linalg::polar(&t)?;
        let size = linalg::op_norm(&(&v - &one));
        Ok((v, size))
    };
    let (correction_initial, size1) = correction(&towers_initial, &|x| shift(x).map_err(Into::into))?;
    let (correction_final, size2) = correction(&towers_final, &|x| twisted(x))?;

    // connector between the tower bases
    let rank_e = projection_rank(&towers_initial[0]);
    let rank_f = projection_rank(&towers_final[0]);
    if rank_e != rank_f {
        return Err(ConstructError::RankObstruction(rank_e, rank_f));
    }
    let basis_e = linalg::projection_range_basis(&towers_initial[0], rank_e);
    let basis_f = linalg::projection_range_basis(&towers_final[0], rank_f);
    let connector = &basis_f * basis_e.adjoint();

    let phi = |x: &CMat| -> Result<CMat, ConstructError> {
        Ok(&correction_final * u * shift(x)? * correction_initial.adjoint())
    };

    // holonomy z = w* Φ^p(w), a unitary in the corner of e_0
    let mut q = connector.clone();
    for _ in 0..p {
        q = phi(&q)?;
    }
    let z_full = connector.adjoint() * &q;
    let z_small = basis_e.adjoint() * &z_full * &basis_e;
    let z_defect = linalg::unitary_defect(&z_small);
    if z_defect > UNITARY_PRE_TOL {
        return Err(ConstructError::VerificationFailed(format!(
            "holonomy is not unitary on the corner, defect {z_defect:.3e}"
        )));
    }
    let (small_path, max_angle) = linalg::geodesic_path(&z_small, p)?;
    let path_spacing = 2.0 * (max_angle / (2.0 * p as f64)).sin();

    // v = Σ Φ^i(w·z'_i) with z'_i the (i+1)-th path point pushed back to
    // the corner; the extra path point absorbs the holonomy closing term
    let mut cocycle = CMat::zeros(dim, dim);
    for i in 0..p {
        let corner = &basis_e * &small_path[i + 1] * basis_e.adjoint();
        let mut term = &connector * corner;
        for _ in 0..i {
            term = phi(&term)?;
        }
        cocycle += term;
    }

    let unitarity_defect = linalg::unitary_defect(&cocycle);
    let achieved = linalg::op_norm(&(&cocycle - u * shift(&cocycle)?));
    Ok(RordamData {
        period: p,
        towers_initial,
        towers_final,
        tower_defect_initial,
        tower_defect_final,
        connector,
        correction_initial,
        correction_final,
        correction_sizes: (size1, size2),
        path: small_path,
        path_spacing,
        cocycle,
        unitarity_defect,
        achieved,
        bound: 4.0 / p as f64,
    })
}

fn projection_rank(p: &CMat) -> usize {
    let (vals, _) = linalg::hermitian_eigen(p);
    vals.iter().filter(|&&v| v > 0.5).count()
}
