//! Constructive algorithms with checkable norm bounds.
//!
//! Each construction is a pure function from inputs to a result record that
//! carries every measured defect and the bound it was checked against;
//! nothing is assumed that is not recomputed on the output.

mod cuntzify;
mod kishimoto;
mod rordam;
mod swap;
mod transport;

pub use cuntzify::{
    align_support, pure_to_cuntz_unitary, strengthen_unitary, StrengthenResult,
};
pub use kishimoto::{kishimoto_projection, KishimotoProjection};
pub use rordam::{rordam_v, rordam_v_with_towers, RordamData};
pub use swap::{smooth_swap, SmoothSwap};
pub use transport::{intertwiner_pipeline, transport_agreement, BlockMatch};

use crate::linalg::LinalgError;
use crate::matrix::MatrixError;
use crate::shift::ShiftError;
use crate::state::StateError;
use crate::word::WordError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructError {
    #[error("exponent {0} outside the supported range 1..=6")]
    ExponentOutOfRange(u32),
    #[error("matrix is not a projection, defect {0:.3e}")]
    NotProjection(f64),
    #[error("partial isometry precondition fails, defect {0:.3e}")]
    NotPartialIsometry(f64),
    #[error("projections overlap too much: ‖e1·e2‖ = {0:.3} > 0.1 (and e1 ≠ e2)")]
    NotAlmostOrthogonal(f64),
    #[error("block boundaries must be strictly increasing and start above 0")]
    BadBoundaries,
    #[error("state head (level {head}) crosses the first block boundary {boundary}")]
    HeadCrossesBlock { head: u32, boundary: u32 },
    #[error("block support has rank {0}, expected 1")]
    SupportRankNotOne(usize),
    #[error("towers do not sum to the identity, defect {0:.3e}")]
    TowersIncomplete(f64),
    #[error("tower defect {0:.3} too large to certify any bound")]
    TowerDefectTooLarge(f64),
    #[error("tower ranks obstruct a connector: {0} vs {1}")]
    RankObstruction(usize, usize),
    #[error("element is not unitary, defect {0:.3e}")]
    NotUnitary(f64),
    #[error("prefix-free set is empty")]
    EmptySupport,
    #[error("support covers the whole algebra; a proper cylinder is required")]
    SupportNotProper,
    #[error("cylinder sequence is not decreasing at step {0}")]
    NotDecreasing(usize),
    #[error("truncation {m} exceeds the sequence length {len}")]
    TruncationTooLong { m: usize, len: usize },
    #[error("level {level} is below the state head {head}")]
    LevelBelowHead { head: u32, level: u32 },
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
