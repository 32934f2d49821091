//! States on `O_d`: Cuntz states, gauge-invariant product states (with an
//! optional entangled head block), composition with endomorphisms, and
//! finite-level purity/disjointness diagnostics.

use crate::linalg;
use crate::matrix::{level_dim, LevelMatrix, MatrixError};
use crate::word::{AlgebraElement, WordError};
use crate::C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("alphabet size mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),
    #[error("vector norm is {0}, expected 1 within 1e-12")]
    NonUnitVector(f64),
    #[error("vector has length {got}, expected {expected}")]
    WrongVectorLength { expected: usize, got: usize },
    #[error("tail needs a nonempty period")]
    EmptyPeriod,
    #[error(
        "element has a degree-{0} term; a product state without the gauge-invariant \
         extension flag is undefined off the gauge-fixed subalgebra"
    )]
    UndefinedExtension(i64),
    #[error("head occupies levels up to {head}, beyond the requested level {level}")]
    HeadTooDeep { head: u32, level: u32 },
    #[error("window {window} is smaller than the first free site {start}")]
    WindowTooSmall { window: u32, start: u32 },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn check_unit(v: &[C64]) -> Result<(), StateError> {
    let norm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    if (norm2.sqrt() - 1.0).abs() > 1e-12 {
        return Err(StateError::NonUnitVector(norm2.sqrt()));
    }
    Ok(())
}

/// The pure state determined by a unit vector `ξ ∈ C^d` through the product
/// formula `φ_ξ(s_I s_J*) = ξ_I · conj(ξ)_J`.
#[derive(Clone, Debug)]
pub struct CuntzState {
    d: u32,
    xi: Vec<C64>,
}

impl CuntzState {
    pub fn new(xi: Vec<C64>) -> Result<Self, StateError> {
        check_unit(&xi)?;
        if xi.len() < 2 {
            return Err(StateError::WrongVectorLength {
                expected: 2,
                got: xi.len(),
            });
        }
        Ok(CuntzState {
            d: xi.len() as u32,
            xi,
        })
    }

    /// `f_0`, the Cuntz state with `ξ = (1, 0, ..., 0)`.
    pub fn standard(d: u32) -> Self {
        assert!(d >= 2, "alphabet size must be at least 2");
        let mut xi = vec![C64::new(0.0, 0.0); d as usize];
        xi[0] = C64::new(1.0, 0.0);
        CuntzState { d, xi }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn xi(&self) -> &[C64] {
        &self.xi
    }

    pub fn eval(&self, a: &AlgebraElement) -> Result<C64, StateError> {
        if a.d() != self.d {
            return Err(StateError::AlphabetMismatch(self.d, a.d()));
        }
        let mut out = C64::new(0.0, 0.0);
        for (w, c) in a.terms() {
            let mut v = *c;
            for &i in w.left.letters() {
                v *= self.xi[i as usize - 1];
            }
            for &j in w.right.letters() {
                v *= self.xi[j as usize - 1].conj();
            }
            out += v;
        }
        Ok(out)
    }
}

/// A product state with an optional entangled head: a unit vector on the
/// first `head_level` sites, then one unit vector per site, eventually
/// periodic.
///
/// With `gauge_invariant` set, evaluation factors through the conditional
/// expectation (degree-0 part); without it, evaluation is only defined on
/// the gauge-fixed subalgebra.
#[derive(Clone, Debug)]
pub struct ProductState {
    d: u32,
    head_level: u32,
    head: Vec<C64>,
    prefix: Vec<Vec<C64>>,
    period: Vec<Vec<C64>>,
    gauge_invariant: bool,
}

impl ProductState {
    /// The infinite product of copies of one site vector.
    pub fn constant_tail(site: Vec<C64>) -> Result<Self, StateError> {
        Self::new(site.len() as u32, 0, vec![C64::new(1.0, 0.0)], vec![], vec![site], true)
    }

    pub fn new(
        d: u32,
        head_level: u32,
        head: Vec<C64>,
        prefix: Vec<Vec<C64>>,
        period: Vec<Vec<C64>>,
        gauge_invariant: bool,
    ) -> Result<Self, StateError> {
        if d < 2 {
            return Err(StateError::Word(WordError::AlphabetTooSmall(d)));
        }
        if period.is_empty() {
            return Err(StateError::EmptyPeriod);
        }
        let head_dim = level_dim(d, head_level, usize::MAX)?;
        if head.len() != head_dim {
            return Err(StateError::WrongVectorLength {
                expected: head_dim,
                got: head.len(),
            });
        }
        check_unit(&head)?;
        for site in prefix.iter().chain(period.iter()) {
            if site.len() != d as usize {
                return Err(StateError::WrongVectorLength {
                    expected: d as usize,
                    got: site.len(),
                });
            }
            check_unit(site)?;
        }
        Ok(ProductState {
            d,
            head_level,
            head,
            prefix,
            period,
            gauge_invariant,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn head_level(&self) -> u32 {
        self.head_level
    }

    pub fn gauge_invariant(&self) -> bool {
        self.gauge_invariant
    }

    /// The site vector at 1-based site `k > head_level`.
    pub fn site_vector(&self, k: u32) -> &[C64] {
        debug_assert!(k > self.head_level);
        let offset = (k - self.head_level - 1) as usize;
        if offset < self.prefix.len() {
            &self.prefix[offset]
        } else {
            &self.period[(offset - self.prefix.len()) % self.period.len()]
        }
    }

    /// The level-`n` state vector `head ⊗ site_{m+1} ⊗ ... ⊗ site_n`.
    pub fn level_vector(&self, n: u32) -> Result<Vec<C64>, StateError> {
        if n < self.head_level {
            return Err(StateError::HeadTooDeep {
                head: self.head_level,
                level: n,
            });
        }
        let mut v = self.head.clone();
        for k in self.head_level + 1..=n {
            let site = self.site_vector(k);
            let mut next = Vec::with_capacity(v.len() * site.len());
            for a in &v {
                for b in site {
                    next.push(a * b);
                }
            }
            v = next;
        }
        Ok(v)
    }

    /// Rank-1 projection onto the level-`n` state vector.
    pub fn support_projection(&self, n: u32) -> Result<LevelMatrix, StateError> {
        let v = self.level_vector(n)?;
        let dim = v.len();
        let mut m = crate::CMat::zeros(dim, dim);
        for (r, a) in v.iter().enumerate() {
            for (c, b) in v.iter().enumerate() {
                m[(r, c)] = a * b.conj();
            }
        }
        Ok(LevelMatrix::new(self.d, n, m)?)
    }

    /// Evaluate on an element.
    ///
    /// Gauge-invariant specs first apply the conditional expectation; other
    /// specs reject terms of nonzero degree, whose value the product data
    /// does not determine.
    pub fn eval(&self, a: &AlgebraElement) -> Result<C64, StateError> {
        if a.d() != self.d {
            return Err(StateError::AlphabetMismatch(self.d, a.d()));
        }
        let fixed = if self.gauge_invariant {
            a.expect_uhf()
        } else {
            if let Some((w, _)) = a.terms().find(|(w, _)| w.degree() != 0) {
                return Err(StateError::UndefinedExtension(w.degree()));
            }
            a.clone()
        };
        let m = self.head_level as usize;
        let mut out = C64::new(0.0, 0.0);
        for (w, c) in fixed.terms() {
            let k = w.left.len();
            let mut v = *c;
            if k <= m {
                // contract the word block against the head
                let block = level_dim(self.d, (m - k) as u32, usize::MAX)?;
                let row = w.left.axis_index(self.d) * block;
                let col = w.right.axis_index(self.d) * block;
                let mut h = C64::new(0.0, 0.0);
                for t in 0..block {
                    h += self.head[row + t].conj() * self.head[col + t];
                }
                v *= h;
            } else {
                let li = w.left.letters();
                let ri = w.right.letters();
                let row = crate::word::MultiIndex::new(li[..m].to_vec()).axis_index(self.d);
                let col = crate::word::MultiIndex::new(ri[..m].to_vec()).axis_index(self.d);
                v *= self.head[row].conj() * self.head[col];
                for (t, (&i, &j)) in li[m..].iter().zip(ri[m..].iter()).enumerate() {
                    let site = self.site_vector(m as u32 + 1 + t as u32);
                    v *= site[i as usize - 1].conj() * site[j as usize - 1];
                }
            }
            out += v;
        }
        Ok(out)
    }
}

/// A state precomposed with a chain of unitary-induced endomorphisms:
/// `φ ∘ α_{u_1} ∘ α_{u_2} ∘ ...` in list order.
///
/// The unitaries are stored lazily and applied to arguments at evaluation
/// time, avoiding symbolic blow-up of composed endomorphism images.
#[derive(Clone, Debug)]
pub struct StateHandle {
    base: BaseState,
    precompositions: Vec<AlgebraElement>,
}

#[derive(Clone, Debug)]
pub enum BaseState {
    Cuntz(CuntzState),
    Product(ProductState),
}

impl StateHandle {
    pub fn cuntz(s: CuntzState) -> Self {
        StateHandle {
            base: BaseState::Cuntz(s),
            precompositions: Vec::new(),
        }
    }

    pub fn product(s: ProductState) -> Self {
        StateHandle {
            base: BaseState::Product(s),
            precompositions: Vec::new(),
        }
    }

    pub fn d(&self) -> u32 {
        match &self.base {
            BaseState::Cuntz(s) => s.d(),
            BaseState::Product(s) => s.d(),
        }
    }

    pub fn precompositions(&self) -> &[AlgebraElement] {
        &self.precompositions
    }

    /// Append `α_u`. With `verify` set, `u` must pass the symbolic
    /// unitarity check; otherwise the caller declares it unitary.
    pub fn compose_endo(mut self, u: AlgebraElement, verify: bool) -> Result<Self, StateError> {
        if u.d() != self.d() {
            return Err(StateError::AlphabetMismatch(self.d(), u.d()));
        }
        if verify {
            let check = u.is_unitary();
            if !check.unitary {
                return Err(StateError::Word(WordError::NotUnitary(check.defect)));
            }
        }
        self.precompositions.push(u);
        Ok(self)
    }

    pub fn eval(&self, a: &AlgebraElement) -> Result<C64, StateError> {
        let mut x = a.clone();
        for u in self.precompositions.iter().rev() {
            x = x.apply_endo(u, false)?;
        }
        match &self.base {
            BaseState::Cuntz(s) => s.eval(&x),
            BaseState::Product(s) => s.eval(&x),
        }
    }
}

/// Finite-window site-overlap product
/// `Π_k |⟨site_k(Ψ1), site_{k+n}(Ψ2)⟩|` for `k` from the first site beyond
/// both heads up to `window`.
///
/// Values near 0 across growing windows are evidence that the shifted state
/// is disjoint; values near 1 evidence of equivalence. This is a
/// diagnostic, not a proof: disjointness is an asymptotic property no
/// finite computation certifies, so no boolean is returned.
pub fn disjointness_defect(
    psi1: &ProductState,
    psi2: &ProductState,
    shift: u32,
    window: u32,
) -> Result<f64, StateError> {
    if psi1.d != psi2.d {
        return Err(StateError::AlphabetMismatch(psi1.d, psi2.d));
    }
    let start = (psi1.head_level + 1).max(psi2.head_level.saturating_sub(shift) + 1);
    if window < start {
        return Err(StateError::WindowTooSmall { window, start });
    }
    let mut product = 1.0f64;
    for k in start..=window {
        let a = psi1.site_vector(k);
        let b = psi2.site_vector(k + shift);
        let overlap: C64 = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        product *= overlap.norm();
    }
    Ok(product)
}

/// `1 - λ_max` of the level-`n` reduced density matrix; 0 means the state
/// looks pure at this level.
pub fn purity_defect_level(psi: &ProductState, n: u32) -> Result<f64, StateError> {
    let full = n.max(psi.head_level);
    let v = psi.level_vector(full)?;
    let rows = level_dim(psi.d, n, usize::MAX)?;
    let cols = v.len() / rows;
    // reshape the state vector and read the top Schmidt coefficient
    let m = crate::CMat::from_fn(rows, cols, |r, c| v[r * cols + c]);
    let top = linalg::op_norm(&m);
    Ok(1.0 - top * top)
}
