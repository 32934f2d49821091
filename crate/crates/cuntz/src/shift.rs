//! Desk-scale carriers with a shift-like endomorphism and, where the model
//! allows it, exact cyclic towers.
//!
//! Three models:
//!
//! - [`CyclicModel`]: the block-diagonal algebra `⊕_{i ∈ Z_p} M_b` inside
//!   `M_{p·b}`, shifted by conjugation with the cyclic slot permutation.
//!   The slot indicators are central in the carrier, so they form an exact
//!   tower for the shift *and* for every `Ad(u)∘shift` with `u` in the
//!   carrier. This is the model with exact Rohlin towers.
//! - [`IndexModel`]: matrix units `e_{ij}` indexed by `{-L, ..., L}`, with
//!   the shift translating indices by one and dropping anything that falls
//!   off the range. Used for the averaged-projection construction, whose
//!   output is supported strictly inside the range.
//! - [`UhfLevelModel`]: honest matrix levels with the level-raising shift
//!   `x ↦ 1 ⊗ x`. It carries no towers; constructions that need them
//!   report that instead of inventing defective ones.

use rand::Rng;

use crate::linalg;
use crate::matrix::{shift_level, LevelMatrix, MatrixError};
use crate::{C64, CMat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShiftError {
    #[error("period must be at least 2, got {0}")]
    PeriodTooSmall(usize),
    #[error("block size must be at least 1")]
    BlockTooSmall,
    #[error("radius must be at least 1")]
    RadiusTooSmall,
    #[error("element is {got}x{got}, carrier is {expected}x{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not in the carrier (off-block mass {0:.3e})")]
    NotInCarrier(f64),
    #[error("index {0} outside radius {1}")]
    IndexOutOfRange(i64, i64),
    #[error("this shift system provides no towers")]
    NoTowers,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `⊕_{i ∈ Z_p} M_b` with the cyclic slot shift.
#[derive(Clone, Debug)]
pub struct CyclicModel {
    period: usize,
    block: usize,
}

impl CyclicModel {
    pub fn new(period: usize, block: usize) -> Result<Self, ShiftError> {
        if period < 2 {
            return Err(ShiftError::PeriodTooSmall(period));
        }
        if block < 1 {
            return Err(ShiftError::BlockTooSmall);
        }
        Ok(CyclicModel { period, block })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn dim(&self) -> usize {
        self.period * self.block
    }

    /// The cyclic permutation matrix `C ⊗ 1_b` mapping slot `i` to `i + 1`.
    pub fn cycle(&self) -> CMat {
        let mut m = CMat::zeros(self.dim(), self.dim());
        for i in 0..self.period {
            let j = (i + 1) % self.period;
            for t in 0..self.block {
                m[(j * self.block + t, i * self.block + t)] = C64::new(1.0, 0.0);
            }
        }
        m
    }

    /// Conjugation by the cyclic permutation; on the carrier this rotates
    /// the slots.
    pub fn shift(&self, x: &CMat) -> CMat {
        let c = self.cycle();
        &c * x * c.adjoint()
    }

    /// The central slot indicator projections `e_0, ..., e_{p-1}`.
    pub fn towers(&self) -> Vec<CMat> {
        (0..self.period)
            .map(|i| {
                let mut m = CMat::zeros(self.dim(), self.dim());
                for t in 0..self.block {
                    m[(i * self.block + t, i * self.block + t)] = C64::new(1.0, 0.0);
                }
                m
            })
            .collect()
    }

    /// Largest entry outside the block-diagonal carrier.
    pub fn carrier_defect(&self, x: &CMat) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if r / self.block != c / self.block {
                    worst = worst.max(x[(r, c)].norm());
                }
            }
        }
        worst
    }

    /// A random unitary in the carrier: one independent unitary block per
    /// slot.
    pub fn random_carrier_unitary(&self, rng: &mut impl Rng) -> CMat {
        let mut m = CMat::zeros(self.dim(), self.dim());
        for i in 0..self.period {
            let u = loop {
                let g = CMat::from_fn(self.block, self.block, |_, _| {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                if let Ok(u) = linalg::polar(&g) {
                    break u;
                }
            };
            for r in 0..self.block {
                for c in 0..self.block {
                    m[(i * self.block + r, i * self.block + c)] = u[(r, c)];
                }
            }
        }
        m
    }

    /// The exact towers conjugated by `exp(i·eps·H)` for a random Hermitian
    /// `H`: still projections summing to one, but with a shift defect of
    /// order `eps`. Useful for exercising tower corrections.
    pub fn jittered_towers(&self, eps: f64, rng: &mut impl Rng) -> Vec<CMat> {
        let n = self.dim();
        let a = CMat::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        let g = linalg::exp_i_hermitian(&h, eps);
        self.towers()
            .into_iter()
            .map(|e| &g * e * g.adjoint())
            .collect()
    }
}

/// Matrix units over the index range `{-radius, ..., radius}`, shifted by
/// index translation.
#[derive(Clone, Debug)]
pub struct IndexModel {
    radius: i64,
}

impl IndexModel {
    pub fn new(radius: i64) -> Result<Self, ShiftError> {
        if radius < 1 {
            return Err(ShiftError::RadiusTooSmall);
        }
        Ok(IndexModel { radius })
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    pub fn offset(&self, i: i64) -> Result<usize, ShiftError> {
        if i.abs() > self.radius {
            return Err(ShiftError::IndexOutOfRange(i, self.radius));
        }
        Ok((i + self.radius) as usize)
    }

    /// The matrix unit `e_{ij}`.
    pub fn unit(&self, i: i64, j: i64) -> Result<CMat, ShiftError> {
        let mut m = CMat::zeros(self.dim(), self.dim());
        m[(self.offset(i)?, self.offset(j)?)] = C64::new(1.0, 0.0);
        Ok(m)
    }

    /// `e_{ij} ↦ e_{i+1,j+1}`, dropping units that leave the range.
    pub fn shift(&self, x: &CMat) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for r in 0..n - 1 {
            for c in 0..n - 1 {
                out[(r + 1, c + 1)] = x[(r, c)];
            }
        }
        out
    }

    /// Largest entry on the outermost row/column pair; nonzero means the
    /// shift would truncate.
    pub fn boundary_mass(&self, x: &CMat) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for k in 0..n {
            worst = worst
                .max(x[(0, k)].norm())
                .max(x[(k, 0)].norm())
                .max(x[(n - 1, k)].norm())
                .max(x[(k, n - 1)].norm());
        }
        worst
    }
}

/// Matrix levels with the level-raising shift.
#[derive(Clone, Debug)]
pub struct UhfLevelModel {
    pub d: u32,
    pub level_cap: u32,
}

impl UhfLevelModel {
    pub fn shift(&self, m: &LevelMatrix) -> Result<LevelMatrix, ShiftError> {
        if m.level() >= self.level_cap {
            return Err(ShiftError::Matrix(MatrixError::DimensionCap {
                level: m.level() + 1,
                dim: m.dim() * self.d as usize,
                cap: crate::DEFAULT_DIM_CAP,
            }));
        }
        Ok(shift_level(m)?)
    }
}

/// An abstract carrier with a shift-like endomorphism and optional towers.
#[derive(Clone, Debug)]
pub enum ShiftSystem {
    Cyclic(CyclicModel),
    Index(IndexModel),
    UhfLevel(UhfLevelModel),
}

impl ShiftSystem {
    pub fn cyclic(period: usize, block: usize) -> Result<Self, ShiftError> {
        Ok(ShiftSystem::Cyclic(CyclicModel::new(period, block)?))
    }

    pub fn index(radius: i64) -> Result<Self, ShiftError> {
        Ok(ShiftSystem::Index(IndexModel::new(radius)?))
    }

    pub fn uhf_level(d: u32, level_cap: u32) -> Self {
        ShiftSystem::UhfLevel(UhfLevelModel { d, level_cap })
    }

    /// Carrier dimension for the matrix-backed models.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ShiftSystem::Cyclic(m) => Some(m.dim()),
            ShiftSystem::Index(m) => Some(m.dim()),
            ShiftSystem::UhfLevel(_) => None,
        }
    }

    /// Apply the shift to a carrier element.
    pub fn shift_matrix(&self, x: &CMat) -> Result<CMat, ShiftError> {
        self.check_dim(x)?;
        match self {
            ShiftSystem::Cyclic(m) => Ok(m.shift(x)),
            ShiftSystem::Index(m) => Ok(m.shift(x)),
            ShiftSystem::UhfLevel(_) => Err(ShiftError::NoTowers),
        }
    }

    fn check_dim(&self, x: &CMat) -> Result<(), ShiftError> {
        if let Some(dim) = self.dim() {
            if x.nrows() != dim || x.ncols() != dim {
                return Err(ShiftError::DimensionMismatch {
                    expected: dim,
                    got: x.nrows(),
                });
            }
        }
        Ok(())
    }

    /// Exact towers, where the model has them.
    pub fn towers(&self) -> Result<Vec<CMat>, ShiftError> {
        match self {
            ShiftSystem::Cyclic(m) => Ok(m.towers()),
            _ => Err(ShiftError::NoTowers),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn cyclic_towers_are_exact_for_shift_and_twisted_shift() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        let model = CyclicModel::new(4, 2).unwrap();
        let towers = model.towers();
        let sum = towers.iter().fold(CMat::zeros(8, 8), |a, e| a + e);
        assert!(linalg::max_abs(&(&sum - &CMat::identity(8, 8))) < 1e-15);
        let u = model.random_carrier_unitary(&mut rng);
        assert!(model.carrier_defect(&u) == 0.0);
        assert!(linalg::unitary_defect(&u) < 1e-12);
        for i in 0..4 {
            let next = &towers[(i + 1) % 4];
            let plain = model.shift(&towers[i]);
            assert!(linalg::max_abs(&(&plain - next)) < 1e-15);
            let twisted = &u * &plain * u.adjoint();
            assert!(linalg::op_norm(&(&twisted - next)) < 1e-12);
        }
    }

    #[test]
    fn jittered_towers_have_small_defect() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        let model = CyclicModel::new(4, 1).unwrap();
        let eps = 1e-3;
        let towers = model.jittered_towers(eps, &mut rng);
        let sum = towers.iter().fold(CMat::zeros(4, 4), |a, e| a + e);
        assert!(linalg::max_abs(&(&sum - &CMat::identity(4, 4))) < 1e-12);
        let mut defect = 0.0f64;
        for i in 0..4 {
            defect = defect.max(linalg::op_norm(
                &(model.shift(&towers[i]) - &towers[(i + 1) % 4]),
            ));
            assert!(linalg::op_norm(&(&towers[i] * &towers[i] - &towers[i])) < 1e-12);
        }
        assert!(defect > 0.0 && defect < 20.0 * eps, "defect {defect}");
    }

    #[test]
    fn index_shift_translates_and_truncates() {
        let model = IndexModel::new(2).unwrap();
        let e = model.unit(0, 1).unwrap();
        let shifted = model.shift(&e);
        assert!(linalg::max_abs(&(&shifted - &model.unit(1, 2).unwrap())) < 1e-15);
        let edge = model.unit(2, 2).unwrap();
        assert!(linalg::max_abs(&model.shift(&edge)) == 0.0);
        assert!(model.boundary_mass(&edge) == 1.0);
    }
}
