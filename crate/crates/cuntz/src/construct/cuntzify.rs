//! From a finitely supported pure state to a Cuntz state: the unitary `u`
//! with `φ(u s_1) = 1`, the local rotation aligning an arbitrary rank-1
//! support with a cylinder, and the phase strengthening `u_1 = e^{2πih} u`.

use super::ConstructError;
use crate::cylinder::{cylinder_equivalence, PrefixFreeSet};
use crate::linalg;
use crate::matrix::{embed_level, lift_level, LevelMatrix};
use crate::state::ProductState;
use crate::word::{AlgebraElement, MultiIndex};
use crate::{C64, CMat};

/// The unitary `u = P s_1* + w` for a proper cylinder projection
/// `P = Σ_{I ∈ e} s_I s_I*`.
///
/// `P s_1*` is a partial isometry from `s_1 P s_1*` to `P`; the cylinder
/// complement counts always agree mod `d-1`, so `w` connecting
/// `1 - s_1 P s_1*` to `1 - P` exists and `u` is unitary. The key identity
/// `u s_1 P = P` makes `φ(u s_1) = 1` for every state supported under `P`.
/// Both `u*u = uu* = 1` and `u s_1 P = P` are verified symbolically before
/// returning.
pub fn pure_to_cuntz_unitary(e: &PrefixFreeSet) -> Result<AlgebraElement, ConstructError> {
    if e.is_empty() {
        return Err(ConstructError::EmptySupport);
    }
    let d = e.d();
    let complement = e.complement();
    if complement.is_empty() {
        return Err(ConstructError::SupportNotProper);
    }
    let shifted = e.prepend(1)?;
    let p_set = shifted.complement(); // 1 - s_1 P s_1*
    let q_set = complement; // 1 - P
    // counts differ by |e|·(d-1) plus the level-one split, always congruent
    if p_set.len() % (d as usize - 1) != q_set.len() % (d as usize - 1) {
        return Err(ConstructError::VerificationFailed(
            "complement counts disagree mod d-1; this is a bug".into(),
        ));
    }
    let w = cylinder_equivalence(&p_set, &q_set)?;
    let projection = e.projection();
    let s1_star = AlgebraElement::generator(d, 1)?.adjoint();
    let u = projection.multiply(&s1_star)?.add(&w)?;

    let check = u.is_unitary();
    if !check.unitary {
        return Err(ConstructError::VerificationFailed(format!(
            "u is not unitary, defect {:.3e}",
            check.defect
        )));
    }
    let s1 = AlgebraElement::generator(d, 1)?;
    let fixed = u.multiply(&s1)?.multiply(&projection)?;
    if !fixed.approx_eq(&projection, 1e-12) {
        return Err(ConstructError::VerificationFailed(
            "u·s_1·P does not fix P".into(),
        ));
    }
    Ok(u)
}

/// A local unitary `g ∈ A_n` rotating the level-`n` support of a product
/// state onto the cylinder of the all-ones word, returned together with
/// that cylinder.
///
/// `g` maps the (phase-normalized) state vector to the first basis vector;
/// when the state is already aligned, `g` is the identity.
pub fn align_support(
    psi: &ProductState,
    n: u32,
) -> Result<(LevelMatrix, PrefixFreeSet), ConstructError> {
    if n < psi.head_level() {
        return Err(ConstructError::LevelBelowHead {
            head: psi.head_level(),
            level: n,
        });
    }
    let mut omega = nalgebra::DVector::<C64>::from_vec(psi.level_vector(n)?);
    linalg::phase_normalize(&mut omega);
    let dim = omega.len();
    // complete {Ω, standard basis} to an orthonormal basis; if Ω is already
    // a standard cylinder vector this yields the identity
    let mut columns: Vec<nalgebra::DVector<C64>> = vec![omega.clone()];
    for j in 0..dim {
        if columns.len() == dim {
            break;
        }
        let mut v = nalgebra::DVector::<C64>::zeros(dim);
        v[j] = C64::new(1.0, 0.0);
        for b in &columns {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= C64::new(norm, 0.0);
            columns.push(v);
        }
    }
    let mut basis = CMat::zeros(dim, dim);
    for (k, b) in columns.iter().enumerate() {
        basis.set_column(k, b);
    }
    let g = LevelMatrix::new(psi.d(), n, basis.adjoint())?;
    let target = PrefixFreeSet::new(psi.d(), [MultiIndex::new(vec![1; n as usize])])?;
    // g Ω = e_{(1,...,1)} up to float noise
    let moved = g.data() * &omega;
    if (moved[0].re - 1.0).abs() > 1e-10 || moved.norm_squared() - moved[0].norm_sqr() > 1e-10 {
        return Err(ConstructError::VerificationFailed(
            "support alignment failed".into(),
        ));
    }
    Ok((g, target))
}

/// Result of the phase-strengthening step.
#[derive(Clone, Debug)]
pub struct StrengthenResult {
    /// `u_1 = e^{2πi h_m} u`.
    pub unitary: AlgebraElement,
    /// Matrix level at which the exponential was computed.
    pub level: u32,
    /// Guaranteed phase bound `2π·2^{-m}` on `|φ(u_1 s_1) - 1|` for the
    /// aligned state.
    pub bound: f64,
}

/// Multiply `u` by `e^{2πi h_m}` with `h_m = Σ_{k≤m} 2^{-k}·proj(e_k)`, for
/// a decreasing sequence of cylinder projections.
///
/// `m = 0` returns `u` unchanged (with the trivial bound `2π`).
pub fn strengthen_unitary(
    u: &AlgebraElement,
    cylinders: &[PrefixFreeSet],
    m: usize,
) -> Result<StrengthenResult, ConstructError> {
    if m > cylinders.len() {
        return Err(ConstructError::TruncationTooLong {
            m,
            len: cylinders.len(),
        });
    }
    for k in 1..m {
        // every cylinder of e_{k+1} must refine one of e_k
        let coarse = &cylinders[k - 1];
        let fine = &cylinders[k];
        let nested = fine
            .words()
            .all(|w| coarse.words().any(|c| w.starts_with(c)));
        if !nested {
            return Err(ConstructError::NotDecreasing(k));
        }
    }
    if m == 0 {
        return Ok(StrengthenResult {
            unitary: u.clone(),
            level: 0,
            bound: std::f64::consts::TAU,
        });
    }
    let d = u.d();
    let mut h = AlgebraElement::zero(d);
    for (k, e) in cylinders.iter().take(m).enumerate() {
        h = h.add(&e.projection().scale(C64::new(0.5f64.powi(k as i32 + 1), 0.0)))?;
    }
    let level = h.max_word_len() as u32;
    let embedded = embed_level(&h, level)?;
    let phase = linalg::exp_i_hermitian(embedded.data(), std::f64::consts::TAU);
    let phase_elem = lift_level(&LevelMatrix::new(d, level, phase)?);
    let unitary = phase_elem.multiply(u)?;
    Ok(StrengthenResult {
        unitary,
        level,
        bound: std::f64::consts::TAU * 0.5f64.powi(m as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::CuntzState;
    use crate::word::ReducedWord;
    use rand::Rng;
    use rand::SeedableRng;

    fn set(d: u32, words: &[&[u32]]) -> PrefixFreeSet {
        PrefixFreeSet::new(d, words.iter().map(|w| MultiIndex::new(w.to_vec()))).unwrap()
    }

    #[test]
    fn standard_cylinder_unitary_d2() {
        let d = 2;
        let u = pure_to_cuntz_unitary(&set(d, &[&[1]])).unwrap();
        // u = s_1 s_11* + s_21 s_12* + s_22 s_2*
        let expect = AlgebraElement::from_terms(
            d,
            vec![
                (
                    ReducedWord::new(MultiIndex::new(vec![1]), MultiIndex::new(vec![1, 1])),
                    C64::new(1.0, 0.0),
                ),
                (
                    ReducedWord::new(MultiIndex::new(vec![2, 1]), MultiIndex::new(vec![1, 2])),
                    C64::new(1.0, 0.0),
                ),
                (
                    ReducedWord::new(MultiIndex::new(vec![2, 2]), MultiIndex::new(vec![2])),
                    C64::new(1.0, 0.0),
                ),
            ],
        )
        .unwrap();
        assert!(u.approx_eq(&expect, 1e-14));
        // u s_1 = s_1 s_1* + s_21 s_2*, and f_0(u s_1) = 1 exactly
        let s1 = AlgebraElement::generator(d, 1).unwrap();
        let us1 = u.multiply(&s1).unwrap();
        let expect_us1 = AlgebraElement::from_terms(
            d,
            vec![
                (
                    ReducedWord::new(MultiIndex::new(vec![1]), MultiIndex::new(vec![1])),
                    C64::new(1.0, 0.0),
                ),
                (
                    ReducedWord::new(MultiIndex::new(vec![2, 1]), MultiIndex::new(vec![2])),
                    C64::new(1.0, 0.0),
                ),
            ],
        )
        .unwrap();
        assert!(us1.approx_eq(&expect_us1, 1e-14));
        let f0 = CuntzState::standard(d);
        let value = f0.eval(&us1).unwrap();
        assert!((value - C64::new(1.0, 0.0)).norm() == 0.0);
    }

    #[test]
    fn works_for_d3_and_random_supports() {
        let f0 = CuntzState::standard(3);
        let u = pure_to_cuntz_unitary(&set(3, &[&[1]])).unwrap();
        let check = u.is_unitary();
        assert!(check.unitary && check.defect < 1e-12);
        let s1 = AlgebraElement::generator(3, 1).unwrap();
        let v = f0.eval(&u.multiply(&s1).unwrap()).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-14);

        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(12);
        for d in [2u32, 3] {
            for _ in 0..5 {
                let e = random_cylinder(d, &mut rng);
                let u = pure_to_cuntz_unitary(&e).unwrap();
                let check = u.is_unitary();
                assert!(check.unitary && check.defect < 1e-12);
            }
        }
    }

    pub(super) fn random_cylinder(d: u32, rng: &mut impl Rng) -> PrefixFreeSet {
        loop {
            let count = rng.random_range(1..=3usize);
            let words: Vec<MultiIndex> = (0..count)
                .map(|_| {
                    let len = rng.random_range(1..=3usize);
                    MultiIndex::new(
                        (0..len)
                            .map(|_| rng.random_range(1..=d))
                            .collect::<Vec<u32>>(),
                    )
                })
                .collect();
            if let Ok(set) = PrefixFreeSet::new(d, words) {
                if !set.is_empty() && !set.complement().is_empty() {
                    return set;
                }
            }
        }
    }

    #[test]
    fn improper_supports_are_rejected() {
        let d = 2;
        assert!(matches!(
            pure_to_cuntz_unitary(&set(d, &[&[1], &[2]])),
            Err(ConstructError::SupportNotProper)
        ));
        let empty = PrefixFreeSet::new(d, Vec::<MultiIndex>::new()).unwrap();
        assert!(matches!(
            pure_to_cuntz_unitary(&empty),
            Err(ConstructError::EmptySupport)
        ));
    }

    #[test]
    fn align_identity_and_hadamard() {
        let d = 2;
        let aligned = ProductState::constant_tail(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
            .unwrap();
        let (g, e) = align_support(&aligned, 2).unwrap();
        assert!(linalg::max_abs(&(g.data() - &CMat::identity(4, 4))) < 1e-12);
        assert_eq!(e.len(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let tilted =
            ProductState::constant_tail(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let (g, _) = align_support(&tilted, 1).unwrap();
        // Hadamard-type rotation
        let expect = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
            ],
        );
        assert!(linalg::max_abs(&(g.data() - &expect)) < 1e-12);
        let _ = d;
    }

    #[test]
    fn aligned_state_sees_the_cylinder() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(77);
        let mut xi: Vec<C64> = (0..2)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = xi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        xi.iter_mut().for_each(|x| *x /= norm);
        let psi = ProductState::constant_tail(xi).unwrap();
        let n = 2;
        let (g, e) = align_support(&psi, n).unwrap();
        let omega = nalgebra::DVector::from_vec(psi.level_vector(n).unwrap());
        let proj = embed_level(&e.projection(), n).unwrap();
        let rotated = g.data().adjoint() * proj.data() * g.data();
        let val = (omega.adjoint() * rotated * &omega)[(0, 0)];
        assert!((val.re - 1.0).abs() < 1e-12 && val.im.abs() < 1e-13);
    }

    #[test]
    fn strengthening_phases_halve() {
        let d = 2;
        let u = pure_to_cuntz_unitary(&set(d, &[&[1]])).unwrap();
        let cylinders: Vec<PrefixFreeSet> = (1..=6)
            .map(|k| {
                PrefixFreeSet::new(d, [MultiIndex::new(vec![1; 1 + k])]).unwrap()
            })
            .collect();
        let f0 = CuntzState::standard(d);
        let s1 = AlgebraElement::generator(d, 1).unwrap();
        // m = 0 returns u unchanged
        let same = strengthen_unitary(&u, &cylinders, 0).unwrap();
        assert!(same.unitary.approx_eq(&u, 1e-14));
        let mut prev_angle = f64::NAN;
        for m in 1..=4usize {
            let out = strengthen_unitary(&u, &cylinders, m).unwrap();
            let val = f0.eval(&out.unitary.multiply(&s1).unwrap()).unwrap();
            let defect = (val - C64::new(1.0, 0.0)).norm();
            assert!(defect <= out.bound + 1e-12, "m={m} defect={defect}");
            // measured value is e^{-2πi·2^{-m}} on the nose
            let expect = C64::from_polar(1.0, -std::f64::consts::TAU * 0.5f64.powi(m as i32));
            assert!((val - expect).norm() < 1e-10, "m={m} val={val}");
            let angle = val.arg().abs();
            if m > 1 {
                assert!((angle - prev_angle / 2.0).abs() < 1e-10);
            }
            prev_angle = angle;
        }
    }

    #[test]
    fn strengthening_validates_nesting() {
        let d = 2;
        let u = pure_to_cuntz_unitary(&set(d, &[&[1]])).unwrap();
        let bad = vec![set(d, &[&[1, 1]]), set(d, &[&[2]])];
        assert!(matches!(
            strengthen_unitary(&u, &bad, 2),
            Err(ConstructError::NotDecreasing(1))
        ));
    }
}
