//! A workbench that makes the Cuntz algebra `O_d` computable.
//!
//! `O_d` is the C*-algebra generated by `d` isometries `s_1, ..., s_d` with
//! `s_j* s_i = δ_ij 1` and `Σ_i s_i s_i* = 1`. The dense *-subalgebra spanned
//! by reduced words `s_I s_J*` admits exact symbolic calculus; the
//! gauge-fixed part embeds into finite tensor-product matrix algebras
//! `A_n ≅ M_{d^n}` where norm estimates become computable. This crate
//! provides both layers plus the constructions that connect them:
//!
//! - [`word`]: reduced words, normal forms, the gauge actions, the
//!   conditional expectation onto the gauge-fixed subalgebra, the canonical
//!   endomorphism, and the unitary/endomorphism dictionary.
//! - [`cylinder`]: prefix-free word sets, cylinder projections, and explicit
//!   partial isometries realizing `K_0`-equivalence of such projections.
//! - [`matrix`]: matrix levels `A_n`, the one-sided shift, operator norms,
//!   polar smoothing, projection connectors, and unitary paths.
//! - [`state`]: Cuntz states, (gauge-invariant) product states, state
//!   evaluation, and finite-level purity/disjointness diagnostics.
//! - [`shift`]: desk-scale shift systems (cyclic slot model, matrix-unit
//!   index model, matrix levels) carrying exact or approximate towers.
//! - [`construct`]: executable versions of the averaged-projection,
//!   support-swap, state-transport, approximate-cocycle, and
//!   state-to-Cuntz-state constructions, each reporting its achieved bounds.
//! - [`parse`] / [`display`]: an expression grammar for elements of `O_d`.
//! - [`experiment`] / [`report`]: batch experiments emitting JSON/CSV
//!   reports; the `cuntz` binary exposes them as subcommands.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so everything here is safe to use from multiple threads.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability, e.g. `cargo run --example word_calculus`.

pub mod construct;
pub mod cylinder;
pub mod display;
pub mod experiment;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod report;
pub mod shift;
pub mod state;
pub mod word;

pub mod cli;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix used by the numeric layer.
pub type CMat = nalgebra::DMatrix<C64>;

/// Relative magnitude below which stored coefficients are dropped.
pub const DROP_TOL: f64 = 1e-12;
/// Relative tolerance for the sibling-family collapse inside canonical forms.
pub const COLLAPSE_TOL: f64 = 1e-10;
/// Tolerance for matrix-level identities (projections, partial isometries).
pub const MATRIX_TOL: f64 = 1e-10;
/// Tolerance accepted on unitarity preconditions of numeric inputs.
pub const UNITARY_PRE_TOL: f64 = 1e-8;
/// Smallest relative singular value accepted by polar smoothing.
pub const NEAR_SINGULAR: f64 = 1e-8;
/// Overlap `‖e1·e2‖` up to which two projections count as almost orthogonal.
pub const ALMOST_ORTHOGONAL: f64 = 0.1;
/// Default cap on the matrix-level dimension `d^n` (4096 = level 12 at d=2).
pub const DEFAULT_DIM_CAP: usize = 4096;

pub use cylinder::{cylinder_equivalence, PrefixFreeSet};
pub use word::{AlgebraElement, MultiIndex, ReducedWord, WordError};
