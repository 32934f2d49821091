//! Numerical realization of the gauge-fixed filtration `A_1 ⊂ A_2 ⊂ ...` as
//! tensor-product matrix algebras `A_n ≅ M_{d^n}`.
//!
//! A degree-0 word `s_I s_J*` with `|I| = |J| = k ≤ n` embeds at level `n`
//! as the matrix unit block `e_{i_1 j_1} ⊗ ... ⊗ e_{i_k j_k} ⊗ 1^{⊗(n-k)}`,
//! where the first tensor factor is the most significant index. Under this
//! embedding the canonical endomorphism becomes the one-sided shift
//! `x ↦ 1 ⊗ x`.

use crate::linalg::{self, LinalgError};
use crate::word::{AlgebraElement, MultiIndex, ReducedWord};
use crate::{C64, CMat, DEFAULT_DIM_CAP, DROP_TOL, MATRIX_TOL, UNITARY_PRE_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("term {0:?} has nonzero gauge degree; only degree-0 elements embed")]
    NonzeroDegree(String),
    #[error("word length {len} exceeds level {level}")]
    WordTooLong { len: usize, level: u32 },
    #[error("dimension d^{level} = {dim} exceeds the cap {cap}")]
    DimensionCap { level: u32, dim: usize, cap: usize },
    #[error("levels differ: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("alphabet size mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),
    #[error("matrix is not a projection, defect {0:.3e}")]
    NotProjection(f64),
    #[error("matrix is not unitary, defect {0:.3e}")]
    NotUnitary(f64),
    #[error("projection ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("path needs at least one step")]
    NoSteps,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An element of the level-`n` matrix algebra `A_n ≅ M_{d^n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelMatrix {
    d: u32,
    level: u32,
    data: CMat,
}

/// `d^n` with a cap guard.
pub fn level_dim(d: u32, level: u32, cap: usize) -> Result<usize, MatrixError> {
    let mut dim = 1usize;
    for _ in 0..level {
        dim = dim
            .checked_mul(d as usize)
            .filter(|&x| x <= cap)
            .ok_or(MatrixError::DimensionCap {
                level,
                dim: usize::MAX,
                cap,
            })?;
    }
    Ok(dim)
}

impl LevelMatrix {
    pub fn new(d: u32, level: u32, data: CMat) -> Result<Self, MatrixError> {
        let dim = level_dim(d, level, usize::MAX)?;
        if data.nrows() != dim || data.ncols() != dim {
            return Err(MatrixError::DimensionCap {
                level,
                dim: data.nrows(),
                cap: dim,
            });
        }
        Ok(LevelMatrix { d, level, data })
    }

    pub fn identity(d: u32, level: u32) -> Result<Self, MatrixError> {
        let dim = level_dim(d, level, DEFAULT_DIM_CAP)?;
        Ok(LevelMatrix {
            d,
            level,
            data: CMat::identity(dim, dim),
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &CMat {
        &self.data
    }

    pub fn into_data(self) -> CMat {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        LevelMatrix {
            d: self.d,
            level: self.level,
            data: self.data.adjoint(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        Ok(LevelMatrix {
            d: self.d,
            level: self.level,
            data: &self.data * &other.data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        Ok(LevelMatrix {
            d: self.d,
            level: self.level,
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        Ok(LevelMatrix {
            d: self.d,
            level: self.level,
            data: &self.data - &other.data,
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MatrixError> {
        if self.d != other.d {
            return Err(MatrixError::AlphabetMismatch(self.d, other.d));
        }
        if self.level != other.level {
            return Err(MatrixError::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    /// Operator norm (largest singular value).
    pub fn op_norm(&self) -> f64 {
        linalg::op_norm(&self.data)
    }

    /// Distance of `self` from being a projection.
    pub fn projection_defect(&self) -> f64 {
        let idem = linalg::op_norm(&(&self.data * &self.data - &self.data));
        let herm = linalg::op_norm(&(self.data.adjoint() - &self.data));
        idem.max(herm)
    }

    /// Rank counted from the spectrum (eigenvalues above 1/2).
    pub fn projection_rank(&self) -> usize {
        let (vals, _) = linalg::hermitian_eigen(&self.data);
        vals.iter().filter(|&&v| v > 0.5).count()
    }
}

/// Embed a degree-0 element at level `n` (dimension capped at
/// [`DEFAULT_DIM_CAP`]; use [`embed_level_capped`] to override).
pub fn embed_level(a: &AlgebraElement, n: u32) -> Result<LevelMatrix, MatrixError> {
    embed_level_capped(a, n, DEFAULT_DIM_CAP)
}

/// Embed a degree-0 element at level `n` under an explicit dimension cap.
pub fn embed_level_capped(
    a: &AlgebraElement,
    n: u32,
    cap: usize,
) -> Result<LevelMatrix, MatrixError> {
    let d = a.d();
    let dim = level_dim(d, n, cap)?;
    let mut m = CMat::zeros(dim, dim);
    for (w, c) in a.terms() {
        if w.degree() != 0 {
            return Err(MatrixError::NonzeroDegree(format!("{w:?}")));
        }
        let k = w.left.len();
        if k > n as usize {
            return Err(MatrixError::WordTooLong {
                len: k,
                level: n,
            });
        }
        let tail = level_dim(d, n - k as u32, cap)?;
        let row = w.left.axis_index(d) * tail;
        let col = w.right.axis_index(d) * tail;
        for t in 0..tail {
            m[(row + t, col + t)] += c;
        }
    }
    Ok(LevelMatrix { d, level: n, data: m })
}

/// Expand a level matrix in matrix units, producing a degree-0 element all
/// of whose words have length `n`. Entries below [`DROP_TOL`] relative to
/// the largest one are dropped. `embed ∘ lift` is the identity; `lift ∘
/// embed` is expansion to uniform level-`n` words.
pub fn lift_level(m: &LevelMatrix) -> AlgebraElement {
    let d = m.d;
    let n = m.level as usize;
    let scale = linalg::max_abs(&m.data).max(f64::MIN_POSITIVE);
    let words = MultiIndex::enumerate(d, n);
    let mut terms: Vec<(ReducedWord, C64)> = Vec::new();
    for (r, wr) in words.iter().enumerate() {
        for (c, wc) in words.iter().enumerate() {
            let x = m.data[(r, c)];
            if x.norm() > DROP_TOL * scale {
                terms.push((ReducedWord::new(wr.clone(), wc.clone()), x));
            }
        }
    }
    AlgebraElement::from_terms(d, terms).expect("indices are in range by construction")
}

/// The one-sided shift `x ↦ 1 ⊗ x`, one level up.
pub fn shift_level(m: &LevelMatrix) -> Result<LevelMatrix, MatrixError> {
    let dim = m.dim();
    let new_dim = dim
        .checked_mul(m.d as usize)
        .ok_or(MatrixError::DimensionCap {
            level: m.level + 1,
            dim: usize::MAX,
            cap: usize::MAX,
        })?;
    let mut out = CMat::zeros(new_dim, new_dim);
    for b in 0..m.d as usize {
        out.view_mut((b * dim, b * dim), (dim, dim)).copy_from(&m.data);
    }
    Ok(LevelMatrix {
        d: m.d,
        level: m.level + 1,
        data: out,
    })
}

/// Embed one level up without shifting: `x ↦ x ⊗ 1`, the filtration
/// inclusion `A_n ⊂ A_{n+1}`.
pub fn include_level(m: &LevelMatrix) -> Result<LevelMatrix, MatrixError> {
    let d = m.d as usize;
    let dim = m.dim();
    let new_dim = dim.checked_mul(d).ok_or(MatrixError::DimensionCap {
        level: m.level + 1,
        dim: usize::MAX,
        cap: usize::MAX,
    })?;
    let mut out = CMat::zeros(new_dim, new_dim);
    for r in 0..dim {
        for c in 0..dim {
            let x = m.data[(r, c)];
            if x.norm() == 0.0 {
                continue;
            }
            for t in 0..d {
                out[(r * d + t, c * d + t)] = x;
            }
        }
    }
    Ok(LevelMatrix {
        d: m.d,
        level: m.level + 1,
        data: out,
    })
}

/// Operator norm of a level matrix.
pub fn op_norm(m: &LevelMatrix) -> f64 {
    m.op_norm()
}

/// Unitary polar factor, with the contract `‖U - m‖ ≤ ‖m*m - 1‖` checked.
pub fn polar_unitary(m: &LevelMatrix) -> Result<LevelMatrix, MatrixError> {
    let u = linalg::polar(&m.data)?;
    let dist = linalg::op_norm(&(&u - &m.data));
    let defect = linalg::op_norm(&(m.data.adjoint() * &m.data - CMat::identity(m.dim(), m.dim())));
    if dist > defect + 1e-9 {
        return Err(MatrixError::Linalg(LinalgError::NoConvergence));
    }
    Ok(LevelMatrix {
        d: m.d,
        level: m.level,
        data: u,
    })
}

/// A partial isometry `w` with `w*w = p` and `ww* = q`, for projections of
/// equal rank at the same level.
///
/// The range bases are taken from the spectral decomposition, ordered by
/// descending eigenvalue with phases normalized, and `w` maps the `k`-th
/// range vector of `p` to the `k`-th of `q`, so the output is deterministic.
pub fn connect_projections(p: &LevelMatrix, q: &LevelMatrix) -> Result<LevelMatrix, MatrixError> {
    p.check_compatible(q)?;
    for m in [p, q] {
        let defect = m.projection_defect();
        if defect > MATRIX_TOL {
            return Err(MatrixError::NotProjection(defect));
        }
    }
    let bp = spectral_range_basis(&p.data);
    let bq = spectral_range_basis(&q.data);
    if bp.ncols() != bq.ncols() {
        return Err(MatrixError::RankMismatch(bp.ncols(), bq.ncols()));
    }
    let w = &bq * bp.adjoint();
    let initial = linalg::op_norm(&(w.adjoint() * &w - &p.data));
    let range = linalg::op_norm(&(&w * w.adjoint() - &q.data));
    if initial.max(range) > MATRIX_TOL {
        return Err(MatrixError::NotProjection(initial.max(range)));
    }
    Ok(LevelMatrix {
        d: p.d,
        level: p.level,
        data: w,
    })
}

/// Orthonormal basis (as columns) of the eigenvalue-1 eigenspace of a
/// projection.
fn spectral_range_basis(p: &CMat) -> CMat {
    let (vals, vecs) = linalg::hermitian_eigen(p);
    let rank = vals.iter().filter(|&&v| v > 0.5).count();
    vecs.columns(0, rank).clone_owned()
}

/// A discrete unitary path `z = z_0, ..., z_m = 1` with spacing
/// `max_t ‖z_t - z_{t+1}‖ ≤ π/m`, following the geodesic determined by the
/// principal eigenangles of `z`.
pub fn unitary_path(z: &LevelMatrix, steps: usize) -> Result<Vec<LevelMatrix>, MatrixError> {
    if steps == 0 {
        return Err(MatrixError::NoSteps);
    }
    let defect = linalg::unitary_defect(&z.data);
    if defect > UNITARY_PRE_TOL {
        return Err(MatrixError::NotUnitary(defect));
    }
    let (path, _) = linalg::geodesic_path(&z.data, steps)?;
    Ok(path
        .into_iter()
        .map(|data| LevelMatrix {
            d: z.d,
            level: z.level,
            data,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::AlgebraElement;
    use rand::Rng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn word(d: u32, left: &[u32], right: &[u32]) -> AlgebraElement {
        AlgebraElement::from_word(
            d,
            ReducedWord::new(MultiIndex::new(left.to_vec()), MultiIndex::new(right.to_vec())),
            c(1.0, 0.0),
        )
        .unwrap()
    }

    fn random_degree_zero(d: u32, level: u32, rng: &mut impl Rng) -> AlgebraElement {
        let mut terms = Vec::new();
        for _ in 0..4 {
            let len = rng.random_range(0..=level as usize);
            let letters = |rng: &mut dyn rand::RngCore, len: usize| {
                (0..len).map(|_| (rng.next_u32() % d) + 1).collect::<Vec<u32>>()
            };
            let l = MultiIndex::new(letters(rng, len));
            let r = MultiIndex::new(letters(rng, len));
            terms.push((
                ReducedWord::new(l, r),
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            ));
        }
        AlgebraElement::from_terms(d, terms).unwrap()
    }

    #[test]
    fn embed_matrix_unit_rules() {
        let d = 2;
        // s_1 s_1* at level 1 = diag(1, 0)
        let m = embed_level(&word(d, &[1], &[1]), 1).unwrap();
        assert_eq!(m.data[(0, 0)], c(1.0, 0.0));
        assert_eq!(m.data[(1, 1)], c(0.0, 0.0));
        // s_1 s_2* at level 2 = e_{12} ⊗ 1
        let m = embed_level(&word(d, &[1], &[2]), 2).unwrap();
        for (r, cc) in [(0usize, 2usize), (1, 3)] {
            assert_eq!(m.data[(r, cc)], c(1.0, 0.0));
        }
        assert_eq!(m.data.iter().map(|x| x.norm()).sum::<f64>(), 2.0);
        // unit at any level = identity
        let m = embed_level(&AlgebraElement::unit(d), 3).unwrap();
        assert!(linalg::op_norm(&(&m.data - &CMat::identity(8, 8))) < 1e-15);
    }

    #[test]
    fn embed_rejects_bad_inputs() {
        let d = 2;
        let s1 = AlgebraElement::generator(d, 1).unwrap();
        assert!(matches!(
            embed_level(&s1, 3),
            Err(MatrixError::NonzeroDegree(_))
        ));
        assert!(matches!(
            embed_level(&word(d, &[1, 2], &[1, 2]), 1),
            Err(MatrixError::WordTooLong { .. })
        ));
    }

    #[test]
    fn lift_level_examples() {
        let d = 2;
        let m = embed_level(&word(d, &[1], &[1]), 1).unwrap();
        assert!(lift_level(&m).approx_eq(&word(d, &[1], &[1]), 1e-14));
        let id = LevelMatrix::identity(d, 2).unwrap();
        assert!(lift_level(&id).approx_eq(&AlgebraElement::unit(d), 1e-14));
    }

    #[test]
    fn lift_embed_roundtrip_random() {
        let d = 2;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.random_range(1..=3u32);
            let dim = level_dim(d, n, 64).unwrap();
            let m = CMat::from_fn(dim, dim, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let lm = LevelMatrix::new(d, n, m.clone()).unwrap();
            let back = embed_level(&lift_level(&lm), n).unwrap();
            assert!(linalg::max_abs(&(&back.data - &m)) < 1e-12);
        }
    }

    #[test]
    fn shift_is_canonical_endo_at_matrix_level() {
        let d = 2;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(1..=3u32);
            let x = random_degree_zero(d, n, &mut rng);
            let lhs = shift_level(&embed_level(&x, n).unwrap()).unwrap();
            let rhs = embed_level(&x.canonical_endo(), n + 1).unwrap();
            assert!(linalg::max_abs(&(&lhs.data - &rhs.data)) < 1e-12);
        }
    }

    #[test]
    fn embed_respects_filtration() {
        let d = 2;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        let x = random_degree_zero(d, 2, &mut rng);
        let low = embed_level(&x, 2).unwrap();
        let high = embed_level(&x, 3).unwrap();
        assert!(linalg::max_abs(&(&include_level(&low).unwrap().data - &high.data)) < 1e-12);
    }

    #[test]
    fn embed_is_star_homomorphism() {
        let d = 2;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = random_degree_zero(d, 2, &mut rng);
            let b = random_degree_zero(d, 2, &mut rng);
            let ma = embed_level(&a, 2).unwrap();
            let mb = embed_level(&b, 2).unwrap();
            let prod = embed_level(&a.multiply(&b).unwrap(), 2).unwrap();
            assert!(linalg::max_abs(&(&(&ma.data * &mb.data) - &prod.data)) < 1e-11);
            let adj = embed_level(&a.adjoint(), 2).unwrap();
            assert!(linalg::max_abs(&(&ma.data.adjoint() - &adj.data)) < 1e-12);
        }
    }

    #[test]
    fn op_norm_examples() {
        let d = 2;
        let p = embed_level(&word(d, &[1], &[1]), 2).unwrap();
        assert!((p.op_norm() - 1.0).abs() < 1e-12);
        let two = LevelMatrix::new(d, 1, CMat::identity(2, 2) * c(2.0, 0.0)).unwrap();
        assert!((two.op_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_submultiplicative_and_unitarily_invariant() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(77);
        for _ in 0..20 {
            let a = CMat::from_fn(4, 4, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let b = CMat::from_fn(4, 4, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let prod = linalg::op_norm(&(&a * &b));
            assert!(prod <= linalg::op_norm(&a) * linalg::op_norm(&b) + 1e-12);
            let u = linalg::polar(&CMat::from_fn(4, 4, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            }))
            .unwrap();
            let conj = &u * &a * u.adjoint();
            assert!((linalg::op_norm(&conj) - linalg::op_norm(&a)).abs() < 1e-10);
        }
    }

    #[test]
    fn polar_examples() {
        let d = 2;
        let m = LevelMatrix::new(
            d,
            1,
            CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(0.5, 0.0)])),
        )
        .unwrap();
        let u = polar_unitary(&m).unwrap();
        assert!(linalg::max_abs(&(&u.data - &CMat::identity(2, 2))) < 1e-12);
        let sing = LevelMatrix::new(
            d,
            1,
            CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])),
        )
        .unwrap();
        assert!(polar_unitary(&sing).is_err());
    }

    #[test]
    fn polar_minimizes_distance_to_unitaries() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(21);
        let dim = 4usize;
        let m = CMat::from_fn(dim, dim, |_, _| {
            c(rng.random::<f64>() + 0.3, rng.random::<f64>() - 0.5)
        });
        if linalg::polar(&m).is_err() {
            return; // nearly singular draw; nothing to check
        }
        let lm = LevelMatrix::new(2, 2, m.clone()).unwrap();
        let u = polar_unitary(&lm).unwrap();
        let best = linalg::op_norm(&(&u.data - &m));
        for _ in 0..100 {
            let q = linalg::polar(&CMat::from_fn(dim, dim, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            }))
            .unwrap();
            assert!(linalg::op_norm(&(&q - &m)) >= best - 1e-10);
        }
    }

    #[test]
    fn connect_projection_examples() {
        let d = 2;
        let p = embed_level(&word(d, &[1], &[1]), 1).unwrap();
        let q = embed_level(&word(d, &[2], &[2]), 1).unwrap();
        let w = connect_projections(&p, &q).unwrap();
        // e_{21}
        assert!((w.data[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(linalg::max_abs(&w.data) - 1.0 < 1e-12);
        // p = q gives w = p
        let same = connect_projections(&p, &p).unwrap();
        assert!(linalg::max_abs(&(&same.data - &p.data)) < 1e-10);
        // rank mismatch errors
        let id = LevelMatrix::identity(d, 1).unwrap();
        assert!(matches!(
            connect_projections(&p, &id),
            Err(MatrixError::RankMismatch(1, 2))
        ));
    }

    #[test]
    fn unitary_path_scalar_case() {
        // 1x1 z = -1, m = 4: z_t = e^{iπ(1 - t/4)}, spacing 2 sin(π/8)
        let z = LevelMatrix::new(2, 0, CMat::from_element(1, 1, c(-1.0, 0.0))).unwrap();
        let path = unitary_path(&z, 4).unwrap();
        assert_eq!(path.len(), 5);
        let expected_gap = 2.0 * (std::f64::consts::PI / 8.0).sin();
        for t in 0..4 {
            let gap = linalg::op_norm(&(&path[t + 1].data - &path[t].data));
            assert!((gap - expected_gap).abs() < 1e-10, "gap {gap}");
        }
        for (t, p) in path.iter().enumerate() {
            let expect = C64::from_polar(1.0, std::f64::consts::PI * (1.0 - t as f64 / 4.0));
            assert!((p.data[(0, 0)] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_path_rejects_non_unitaries() {
        let z = LevelMatrix::new(2, 1, CMat::identity(2, 2) * c(2.0, 0.0)).unwrap();
        assert!(matches!(
            unitary_path(&z, 4),
            Err(MatrixError::NotUnitary(_))
        ));
        let id = LevelMatrix::identity(2, 1).unwrap();
        assert!(matches!(unitary_path(&id, 0), Err(MatrixError::NoSteps)));
    }

    #[test]
    fn unitary_path_identity_is_constant() {
        let z = LevelMatrix::identity(2, 1).unwrap();
        let path = unitary_path(&z, 3).unwrap();
        for p in &path {
            assert!(linalg::max_abs(&(&p.data - &CMat::identity(2, 2))) < 1e-12);
        }
    }

    #[test]
    fn unitary_path_random_spacing() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        let g = CMat::from_fn(4, 4, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let u = linalg::polar(&g).unwrap();
        let z = LevelMatrix::new(2, 2, u).unwrap();
        let m = 16usize;
        let path = unitary_path(&z, m).unwrap();
        let bound = std::f64::consts::PI / m as f64;
        for t in 0..m {
            let gap = linalg::op_norm(&(&path[t + 1].data - &path[t].data));
            assert!(gap <= bound + 1e-10);
        }
    }
}
