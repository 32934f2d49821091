//! Exact symbolic calculus in the dense *-subalgebra of `O_d` spanned by
//! reduced words `s_I s_J*`.
//!
//! The only relations are `s_j* s_i = δ_ij 1` and `Σ_i s_i s_i* = 1`. The
//! first makes products of reduced words reduce to a single word or vanish;
//! the second makes raw words linearly dependent, which is resolved here by
//! a canonical form (see [`AlgebraElement::canonicalize`]).

use std::collections::BTreeMap;
use std::fmt;

use crate::{C64, CMat, COLLAPSE_TOL, DROP_TOL, UNITARY_PRE_TOL};

/// Errors from the symbolic layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WordError {
    #[error("alphabet size mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("letter {letter} out of range 1..={d}")]
    LetterOutOfRange { letter: u32, d: u32 },
    #[error("scalar must lie on the unit circle, |z| = {0}")]
    NonUnitScalar(f64),
    #[error("matrix must be {d}x{d} unitary, defect {defect:.3e}")]
    NonUnitaryMatrix { d: u32, defect: f64 },
    #[error("element is not unitary, defect {0:.3e}")]
    NotUnitary(f64),
    #[error("generator images do not satisfy the Cuntz relations, defect {0:.3e}")]
    RelationCheckFailed(f64),
    #[error("expected exactly {expected} generator images, got {got}")]
    WrongImageCount { expected: u32, got: usize },
    #[error("word {0:?} is a prefix of {1:?}; set is not prefix-free")]
    PrefixOverlap(Vec<u32>, Vec<u32>),
    #[error("projection counts {0} and {1} differ mod {2}; no partial isometry exists")]
    CongruenceMismatch(usize, usize, u32),
    #[error("prefix-free set is empty")]
    EmptySet,
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}

/// A finite sequence of letters in `{1, ..., d}`; the empty sequence indexes
/// the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(letters: impl Into<Vec<u32>>) -> Self {
        MultiIndex(letters.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    pub fn child(&self, letter: u32) -> MultiIndex {
        let mut v = self.0.clone();
        v.push(letter);
        MultiIndex(v)
    }

    pub fn parent(&self) -> Option<(MultiIndex, u32)> {
        let (&last, rest) = self.0.split_last()?;
        Some((MultiIndex(rest.to_vec()), last))
    }

    pub fn starts_with(&self, prefix: &MultiIndex) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// Remainder `K` with `self = prefix · K`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &MultiIndex) -> Option<MultiIndex> {
        self.starts_with(prefix)
            .then(|| MultiIndex(self.0[prefix.0.len()..].to_vec()))
    }

    pub fn max_letter(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(1)
    }

    /// Row/column index of the matrix unit block addressed by this word at a
    /// level of its own length; the first letter is the most significant
    /// digit.
    pub fn axis_index(&self, d: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * d as usize + (l as usize - 1))
    }

    /// All words of the given length over `{1, ..., d}`, in lexicographic
    /// order.
    pub fn enumerate(d: u32, len: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (1..=d).map(move |k| w.child(k)))
                .collect();
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A reduced word `s_I s_J*`; `(∅, ∅)` denotes the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ReducedWord {
    pub left: MultiIndex,
    pub right: MultiIndex,
}

impl ReducedWord {
    pub fn new(left: MultiIndex, right: MultiIndex) -> Self {
        ReducedWord { left, right }
    }

    pub fn unit() -> Self {
        ReducedWord::new(MultiIndex::empty(), MultiIndex::empty())
    }

    pub fn is_unit(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// Gauge degree `|I| - |J|`.
    pub fn degree(&self) -> i64 {
        self.left.len() as i64 - self.right.len() as i64
    }

    pub fn adjoint(&self) -> ReducedWord {
        ReducedWord::new(self.right.clone(), self.left.clone())
    }

    pub fn max_letter(&self) -> u32 {
        self.left.max_letter().max(self.right.max_letter())
    }
}

/// Product of two reduced words under `s_j* s_i = δ_ij 1`.
///
/// The middle block `s_{J1}* s_{I2}` collapses: if `I2 = J1 · K` the result
/// is `s_{I1·K} s_{J2}*`, if `J1 = I2 · J'` it is `s_{I1} s_{J2·J'}*`, and
/// otherwise the product vanishes.
pub fn reduce_words(w1: &ReducedWord, w2: &ReducedWord) -> Option<ReducedWord> {
    if let Some(k) = w2.left.strip_prefix(&w1.right) {
        return Some(ReducedWord::new(w1.left.concat(&k), w2.right.clone()));
    }
    w1.right
        .strip_prefix(&w2.left)
        .map(|j| ReducedWord::new(w1.left.clone(), w2.right.concat(&j)))
}

/// Word product as an element: zero or a single reduced word.
pub fn reduce_word_product(
    d: u32,
    w1: &ReducedWord,
    w2: &ReducedWord,
) -> Result<AlgebraElement, WordError> {
    check_word(d, w1)?;
    check_word(d, w2)?;
    match reduce_words(w1, w2) {
        Some(w) => AlgebraElement::from_word(d, w, C64::new(1.0, 0.0)),
        None => Ok(AlgebraElement::zero(d)),
    }
}

fn check_d(d: u32) -> Result<(), WordError> {
    if d < 2 {
        return Err(WordError::AlphabetTooSmall(d));
    }
    Ok(())
}

fn check_index(d: u32, idx: &MultiIndex) -> Result<(), WordError> {
    for &l in idx.letters() {
        if l == 0 || l > d {
            return Err(WordError::LetterOutOfRange { letter: l, d });
        }
    }
    Ok(())
}

fn check_word(d: u32, w: &ReducedWord) -> Result<(), WordError> {
    check_index(d, &w.left)?;
    check_index(d, &w.right)
}

/// Result of a symbolic unitarity check.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryCheck {
    pub unitary: bool,
    /// Largest coefficient magnitude of `a*a - 1` and `aa* - 1` in canonical
    /// form.
    pub defect: f64,
}

/// A finite complex combination of reduced words over a fixed alphabet.
///
/// Coefficients with magnitude below [`DROP_TOL`] relative to the largest
/// one are dropped. The `canonical` flag records whether the element is in
/// the canonical form produced by [`AlgebraElement::canonicalize`].
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    d: u32,
    terms: BTreeMap<ReducedWord, C64>,
    canonical: bool,
}

impl AlgebraElement {
    pub fn zero(d: u32) -> Self {
        AlgebraElement {
            d,
            terms: BTreeMap::new(),
            canonical: true,
        }
    }

    pub fn unit(d: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ReducedWord::unit(), C64::new(1.0, 0.0));
        AlgebraElement {
            d,
            terms,
            canonical: true,
        }
    }

    /// The generator `s_i`.
    pub fn generator(d: u32, i: u32) -> Result<Self, WordError> {
        check_d(d)?;
        if i == 0 || i > d {
            return Err(WordError::LetterOutOfRange { letter: i, d });
        }
        Self::from_word(
            d,
            ReducedWord::new(MultiIndex::new(vec![i]), MultiIndex::empty()),
            C64::new(1.0, 0.0),
        )
    }

    pub fn from_word(d: u32, word: ReducedWord, coeff: C64) -> Result<Self, WordError> {
        check_d(d)?;
        check_word(d, &word)?;
        let mut terms = BTreeMap::new();
        if coeff.norm() > 0.0 {
            terms.insert(word, coeff);
        }
        Ok(AlgebraElement {
            d,
            terms,
            canonical: false,
        })
    }

    pub fn from_terms(
        d: u32,
        it: impl IntoIterator<Item = (ReducedWord, C64)>,
    ) -> Result<Self, WordError> {
        check_d(d)?;
        let mut terms: BTreeMap<ReducedWord, C64> = BTreeMap::new();
        for (w, c) in it {
            check_word(d, &w)?;
            *terms.entry(w).or_insert_with(|| C64::new(0.0, 0.0)) += c;
        }
        let mut el = AlgebraElement {
            d,
            terms,
            canonical: false,
        };
        el.cleanup();
        Ok(el)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ReducedWord, &C64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn coeff(&self, w: &ReducedWord) -> C64 {
        self.terms.get(w).copied().unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Longest left/right index length over all terms.
    pub fn max_word_len(&self) -> usize {
        self.terms
            .keys()
            .map(|w| w.left.len().max(w.right.len()))
            .max()
            .unwrap_or(0)
    }

    /// Largest `|degree|` over all terms.
    pub fn max_abs_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|w| w.degree().abs())
            .max()
            .unwrap_or(0)
    }

    fn cleanup(&mut self) {
        let scale = self.max_coeff();
        if scale == 0.0 {
            self.terms.clear();
            self.canonical = true;
            return;
        }
        self.terms.retain(|_, c| c.norm() > DROP_TOL * scale);
    }

    fn check_same_d(&self, other: &Self) -> Result<(), WordError> {
        if self.d != other.d {
            return Err(WordError::AlphabetMismatch(self.d, other.d));
        }
        Ok(())
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = AlgebraElement {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(w, x)| (w.clone(), x * c))
                .collect(),
            canonical: self.canonical,
        };
        out.cleanup();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, WordError> {
        self.check_same_d(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            *terms.entry(w.clone()).or_insert_with(|| C64::new(0.0, 0.0)) += c;
        }
        let mut out = AlgebraElement {
            d: self.d,
            terms,
            canonical: false,
        };
        out.cleanup();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WordError> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Bilinear extension of the word product.
    pub fn multiply(&self, other: &Self) -> Result<Self, WordError> {
        self.check_same_d(other)?;
        let mut terms: BTreeMap<ReducedWord, C64> = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if let Some(w) = reduce_words(w1, w2) {
                    *terms.entry(w).or_insert_with(|| C64::new(0.0, 0.0)) += c1 * c2;
                }
            }
        }
        let mut out = AlgebraElement {
            d: self.d,
            terms,
            canonical: false,
        };
        out.cleanup();
        Ok(out)
    }

    /// The involution: each term `(I, J, c)` becomes `(J, I, conj c)`.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.adjoint(), c.conj()))
                .collect(),
            canonical: self.canonical,
        }
    }

    /// Gauge rotation `τ_z`: scales each term by `z^{|I|-|J|}`.
    pub fn gauge_rotate(&self, z: C64) -> Result<Self, WordError> {
        if (z.norm() - 1.0).abs() > UNITARY_PRE_TOL {
            return Err(WordError::NonUnitScalar(z.norm()));
        }
        let mut out = AlgebraElement {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * z.powi(w.degree() as i32)))
                .collect(),
            canonical: self.canonical,
        };
        out.cleanup();
        Ok(out)
    }

    /// The `U(d)` rotation `γ_g`: multiplicative *-extension of
    /// `s_i ↦ Σ_j g_{ji} s_j`.
    pub fn unitary_rotate(&self, g: &CMat) -> Result<Self, WordError> {
        let d = self.d as usize;
        if g.nrows() != d || g.ncols() != d {
            return Err(WordError::NonUnitaryMatrix {
                d: self.d,
                defect: f64::INFINITY,
            });
        }
        let defect = (g.adjoint() * g - CMat::identity(d, d))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if defect > UNITARY_PRE_TOL {
            return Err(WordError::NonUnitaryMatrix { d: self.d, defect });
        }
        let mut terms: BTreeMap<ReducedWord, C64> = BTreeMap::new();
        for (w, c) in &self.terms {
            // every left letter i is replaced by i' with weight g_{i'i},
            // every right letter j by j' with weight conj(g_{j'j})
            let mut images: Vec<(ReducedWord, C64)> = vec![(ReducedWord::unit(), *c)];
            for &i in w.left.letters() {
                images = images
                    .into_iter()
                    .flat_map(|(wv, cv)| {
                        (1..=self.d).map(move |ip| {
                            (
                                ReducedWord::new(wv.left.child(ip), MultiIndex::empty()),
                                cv * g[(ip as usize - 1, i as usize - 1)],
                            )
                        })
                    })
                    .collect();
            }
            // right letters build J' left-to-right; adjoint weights conjugate
            let mut rights: Vec<(MultiIndex, C64)> = vec![(MultiIndex::empty(), C64::new(1.0, 0.0))];
            for &j in w.right.letters() {
                rights = rights
                    .into_iter()
                    .flat_map(|(rv, cv)| {
                        (1..=self.d).map(move |jp| {
                            (rv.child(jp), cv * g[(jp as usize - 1, j as usize - 1)].conj())
                        })
                    })
                    .collect();
            }
            for (lw, lc) in &images {
                for (rv, rc) in &rights {
                    let word = ReducedWord::new(lw.left.clone(), rv.clone());
                    *terms.entry(word).or_insert_with(|| C64::new(0.0, 0.0)) += lc * rc;
                }
            }
        }
        let mut out = AlgebraElement {
            d: self.d,
            terms,
            canonical: false,
        };
        out.cleanup();
        Ok(out)
    }

    /// Conditional expectation onto the gauge-fixed part: keeps exactly the
    /// degree-0 terms. This is the exact symbolic version of averaging the
    /// gauge rotation over the circle.
    pub fn expect_uhf(&self) -> Self {
        let mut out = AlgebraElement {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() == 0)
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
            canonical: self.canonical,
        };
        out.cleanup();
        out
    }

    /// The canonical endomorphism `λ(x) = Σ_j s_j x s_j*`.
    pub fn canonical_endo(&self) -> Self {
        let mut terms: BTreeMap<ReducedWord, C64> = BTreeMap::new();
        for (w, c) in &self.terms {
            for j in 1..=self.d {
                let word = ReducedWord::new(
                    MultiIndex::new(vec![j]).concat(&w.left),
                    MultiIndex::new(vec![j]).concat(&w.right),
                );
                *terms.entry(word).or_insert_with(|| C64::new(0.0, 0.0)) += c;
            }
        }
        let mut out = AlgebraElement {
            d: self.d,
            terms,
            canonical: false,
        };
        out.cleanup();
        out
    }

    /// The endomorphism attached to a unitary: the multiplicative
    /// *-extension of `s_i ↦ u s_i` applied to `self`.
    ///
    /// Unitarity of `u` is only verified when `verify` is set; symbolic
    /// products can be large, so the check is opt-in.
    pub fn apply_endo(&self, u: &Self, verify: bool) -> Result<Self, WordError> {
        self.check_same_d(u)?;
        if verify {
            let check = u.is_unitary();
            if !check.unitary {
                return Err(WordError::NotUnitary(check.defect));
            }
        }
        // cache u·s_i and (u·s_i)* per letter
        let mut img: Vec<AlgebraElement> = Vec::with_capacity(self.d as usize);
        for i in 1..=self.d {
            img.push(u.multiply(&AlgebraElement::generator(self.d, i)?)?);
        }
        let mut out = AlgebraElement::zero(self.d);
        for (w, c) in &self.terms {
            let mut acc = AlgebraElement::unit(self.d).scale(*c);
            for &i in w.left.letters() {
                acc = acc.multiply(&img[i as usize - 1])?;
            }
            for &j in w.right.letters().iter().rev() {
                acc = acc.multiply(&img[j as usize - 1].adjoint())?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// The unitary attached to an endomorphism: `u = Σ_i α(s_i) s_i*`,
    /// given the images `α(s_i)`.
    ///
    /// The images must satisfy the Cuntz relations symbolically.
    pub fn endo_unitary(d: u32, images: &[AlgebraElement]) -> Result<Self, WordError> {
        check_d(d)?;
        if images.len() != d as usize {
            return Err(WordError::WrongImageCount {
                expected: d,
                got: images.len(),
            });
        }
        let unit = AlgebraElement::unit(d);
        let mut defect = 0.0f64;
        for (i, ti) in images.iter().enumerate() {
            for (j, tj) in images.iter().enumerate() {
                let prod = tj.adjoint().multiply(ti)?;
                let target = if i == j { unit.clone() } else { AlgebraElement::zero(d) };
                defect = defect.max(prod.sub(&target)?.canonicalize().max_coeff());
            }
        }
        let mut ranges = AlgebraElement::zero(d);
        for t in images {
            ranges = ranges.add(&t.multiply(&t.adjoint())?)?;
        }
        defect = defect.max(ranges.sub(&unit)?.canonicalize().max_coeff());
        if defect > 1e-10 {
            return Err(WordError::RelationCheckFailed(defect));
        }
        let mut u = AlgebraElement::zero(d);
        for (i, t) in images.iter().enumerate() {
            let si_star = AlgebraElement::generator(d, i as u32 + 1)?.adjoint();
            u = u.add(&t.multiply(&si_star)?)?;
        }
        Ok(u)
    }

    /// Checks `a*a = aa* = 1` in canonical form.
    pub fn is_unitary(&self) -> UnitaryCheck {
        let unit = AlgebraElement::unit(self.d);
        let d1 = self
            .adjoint()
            .multiply(self)
            .and_then(|p| p.sub(&unit))
            .map(|x| x.canonicalize().max_coeff())
            .unwrap_or(f64::INFINITY);
        let d2 = self
            .multiply(&self.adjoint())
            .and_then(|p| p.sub(&unit))
            .map(|x| x.canonicalize().max_coeff())
            .unwrap_or(f64::INFINITY);
        let defect = d1.max(d2);
        UnitaryCheck {
            unitary: defect <= 1e-12,
            defect,
        }
    }

    /// Canonical form.
    ///
    /// Within each degree class `g = |I| - |J|` every term is expanded via
    /// `s_I s_J* = Σ_k s_{Ik} s_{Jk}*` until the class shares the maximal
    /// right-length present, coefficients are combined, and complete sibling
    /// families with equal coefficients are collapsed back to their parent
    /// word. Equal elements therefore have identical canonical forms; in
    /// particular `1` and `Σ_i s_i s_i*` canonicalize identically.
    pub fn canonicalize(&self) -> Self {
        if self.canonical {
            return self.clone();
        }
        let mut classes: BTreeMap<i64, BTreeMap<ReducedWord, C64>> = BTreeMap::new();
        for (w, c) in &self.terms {
            classes
                .entry(w.degree())
                .or_default()
                .insert(w.clone(), *c);
        }
        // expand every class to its maximal right length
        let mut expanded: BTreeMap<ReducedWord, C64> = BTreeMap::new();
        for class in classes.values() {
            let rmax = class.keys().map(|w| w.right.len()).max().unwrap_or(0);
            for (w, c) in class {
                let grow = rmax - w.right.len();
                if grow == 0 {
                    *expanded
                        .entry(w.clone())
                        .or_insert_with(|| C64::new(0.0, 0.0)) += c;
                } else {
                    for k in MultiIndex::enumerate(self.d, grow) {
                        let word =
                            ReducedWord::new(w.left.concat(&k), w.right.concat(&k));
                        *expanded.entry(word).or_insert_with(|| C64::new(0.0, 0.0)) += c;
                    }
                }
            }
        }
        let scale = expanded
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut out = AlgebraElement {
            d: self.d,
            terms: collapse_families(self.d, expanded, COLLAPSE_TOL * scale),
            canonical: true,
        };
        out.cleanup();
        out
    }

    /// Display form: greedily replaces complete sibling families
    /// `Σ_k c·s_{Ik} s_{Jk}*` by `c·s_I s_J*`, without prior expansion.
    pub fn compress(&self) -> Self {
        let scale = self.max_coeff().max(f64::MIN_POSITIVE);
        let mut out = AlgebraElement {
            d: self.d,
            terms: collapse_families(self.d, self.terms.clone(), COLLAPSE_TOL * scale),
            canonical: false,
        };
        out.cleanup();
        out
    }

    /// Canonical-form equality within `tol` (absolute on coefficients,
    /// measured on the canonicalized difference).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match self.sub(other) {
            Ok(diff) => diff.canonicalize().max_coeff() <= tol,
            Err(_) => false,
        }
    }
}

/// Collapse complete sibling families bottom-up. `tol` is the absolute
/// coefficient tolerance for treating siblings as equal.
fn collapse_families(
    d: u32,
    mut terms: BTreeMap<ReducedWord, C64>,
    tol: f64,
) -> BTreeMap<ReducedWord, C64> {
    let mut r = terms.keys().map(|w| w.right.len()).max().unwrap_or(0);
    while r >= 1 {
        // group right-length-r terms by parent; both last letters must agree
        let mut buckets: BTreeMap<ReducedWord, Vec<(u32, C64)>> = BTreeMap::new();
        for (w, c) in terms.iter() {
            if w.right.len() != r || w.left.is_empty() {
                continue;
            }
            if let (Some((lp, ll)), Some((rp, rl))) = (w.left.parent(), w.right.parent()) {
                if ll == rl {
                    buckets
                        .entry(ReducedWord::new(lp, rp))
                        .or_default()
                        .push((ll, *c));
                }
            }
        }
        for (parent, kids) in buckets {
            if kids.len() != d as usize {
                continue;
            }
            let mean = kids.iter().map(|(_, c)| c).sum::<C64>() / d as f64;
            if kids.iter().all(|(_, c)| (c - mean).norm() <= tol) {
                for (k, _) in &kids {
                    terms.remove(&ReducedWord::new(
                        parent.left.child(*k),
                        parent.right.child(*k),
                    ));
                }
                *terms
                    .entry(parent)
                    .or_insert_with(|| C64::new(0.0, 0.0)) += mean;
            }
        }
        // collapsed parents have right length r-1 and are handled next round
        r -= 1;
    }
    terms
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::add(self, rhs).expect("alphabet mismatch")
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::sub(self, rhs).expect("alphabet mismatch")
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::multiply(self, rhs).expect("alphabet mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn gen(d: u32, i: u32) -> AlgebraElement {
        AlgebraElement::generator(d, i).unwrap()
    }

    fn word(d: u32, left: &[u32], right: &[u32]) -> AlgebraElement {
        AlgebraElement::from_word(
            d,
            ReducedWord::new(MultiIndex::new(left.to_vec()), MultiIndex::new(right.to_vec())),
            c(1.0, 0.0),
        )
        .unwrap()
    }

    // Independent oracle: reduce a product of literal generator letters by
    // rewriting s_j* s_i -> delta_ij step by step.
    #[derive(Clone, Copy, PartialEq, Debug)]
    enum Lit {
        Gen(u32),
        Star(u32),
    }

    fn rewrite_oracle(d: u32, w1: &ReducedWord, w2: &ReducedWord) -> Option<ReducedWord> {
        let _ = d;
        let mut seq: Vec<Lit> = Vec::new();
        seq.extend(w1.left.letters().iter().map(|&i| Lit::Gen(i)));
        seq.extend(w1.right.letters().iter().rev().map(|&j| Lit::Star(j)));
        seq.extend(w2.left.letters().iter().map(|&i| Lit::Gen(i)));
        seq.extend(w2.right.letters().iter().rev().map(|&j| Lit::Star(j)));
        loop {
            let mut reduced = false;
            for t in 0..seq.len().saturating_sub(1) {
                if let (Lit::Star(j), Lit::Gen(i)) = (seq[t], seq[t + 1]) {
                    if i == j {
                        seq.drain(t..t + 2);
                        reduced = true;
                        break;
                    } else {
                        return None; // product is zero
                    }
                }
            }
            if !reduced {
                break;
            }
        }
        let split = seq.iter().position(|l| matches!(l, Lit::Star(_))).unwrap_or(seq.len());
        let left: Vec<u32> = seq[..split]
            .iter()
            .map(|l| match l {
                Lit::Gen(i) => *i,
                _ => unreachable!(),
            })
            .collect();
        let right: Vec<u32> = seq[split..]
            .iter()
            .rev()
            .map(|l| match l {
                Lit::Star(j) => *j,
                _ => unreachable!(),
            })
            .collect();
        Some(ReducedWord::new(MultiIndex::new(left), MultiIndex::new(right)))
    }

    #[test]
    fn word_products_match_rewrite_oracle() {
        for d in [2u32, 3] {
            let mut words = Vec::new();
            for li in 0..=3usize {
                for lj in 0..=3usize {
                    for i in MultiIndex::enumerate(d, li) {
                        for j in MultiIndex::enumerate(d, lj) {
                            words.push(ReducedWord::new(i.clone(), j));
                        }
                    }
                }
            }
            for w1 in &words {
                for w2 in &words {
                    assert_eq!(
                        reduce_words(w1, w2),
                        rewrite_oracle(d, w1, w2),
                        "d={d} w1={w1:?} w2={w2:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let d = 2;
        // (s_1 s_2*)(s_2 s_1*) = s_1 s_1*
        let a = word(d, &[1], &[2]).multiply(&word(d, &[2], &[1])).unwrap();
        assert!(a.approx_eq(&word(d, &[1], &[1]), 1e-14));
        // (s_1 s_2*)(s_1 s_2*) = 0
        let b = word(d, &[1], &[2]).multiply(&word(d, &[1], &[2])).unwrap();
        assert!(b.is_zero());
        // s_1 (s_1 s_1*) = s_11 s_1*
        let c_ = gen(d, 1).multiply(&word(d, &[1], &[1])).unwrap();
        assert!(c_.approx_eq(&word(d, &[1, 1], &[1]), 1e-14));
    }

    #[test]
    fn multiply_unit_and_scalars() {
        let d = 2;
        let a = word(d, &[1, 2], &[2]).add(&gen(d, 2).scale(c(0.5, 1.0))).unwrap();
        let unit = AlgebraElement::unit(d);
        assert!(unit.multiply(&a).unwrap().approx_eq(&a, 1e-14));
        assert!(a.multiply(&unit).unwrap().approx_eq(&a, 1e-14));
        let p = gen(d, 1).scale(c(2.0, 0.0));
        let q = gen(d, 1).adjoint().scale(c(3.0, 0.0));
        let pq = p.multiply(&q).unwrap();
        assert!(pq.approx_eq(&word(d, &[1], &[1]).scale(c(6.0, 0.0)), 1e-14));
    }

    #[test]
    fn range_sum_acts_as_unit() {
        let d = 2;
        let ones = word(d, &[1], &[1]).add(&word(d, &[2], &[2])).unwrap();
        let a = word(d, &[1, 2], &[2, 1]).add(&gen(d, 2).scale(c(0.3, -0.7))).unwrap();
        assert!(ones.multiply(&a).unwrap().approx_eq(&a, 1e-12));
    }

    #[test]
    fn adjoint_examples() {
        let d = 2;
        assert!(word(d, &[1], &[2]).adjoint().approx_eq(&word(d, &[2], &[1]), 1e-14));
        let a = gen(d, 1).scale(c(2.0, 1.0));
        assert!(a.adjoint().approx_eq(&gen(d, 1).adjoint().scale(c(2.0, -1.0)), 1e-14));
    }

    #[test]
    fn canonical_form_identifies_unit() {
        let d = 2;
        let ones = word(d, &[1], &[1]).add(&word(d, &[2], &[2])).unwrap();
        let lhs = ones.canonicalize();
        let rhs = AlgebraElement::unit(d).canonicalize();
        assert_eq!(lhs.terms, rhs.terms);
        assert!(lhs.approx_eq(&rhs, 1e-14));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let d = 2;
        let a = word(d, &[1], &[1])
            .add(&word(d, &[1, 2], &[1, 2]))
            .unwrap()
            .add(&gen(d, 1).scale(c(0.0, 1.0)))
            .unwrap();
        let c1 = a.canonicalize();
        let c2 = c1.canonicalize();
        assert_eq!(c1.terms, c2.terms);
    }

    #[test]
    fn compress_collapses_full_families() {
        let d = 2;
        let fam = word(d, &[1, 1], &[1, 1]).add(&word(d, &[1, 2], &[1, 2])).unwrap();
        let comp = fam.compress();
        assert_eq!(comp.terms, word(d, &[1], &[1]).terms);
        // a lone child stays put
        let lone = word(d, &[1, 1], &[1, 1]);
        assert_eq!(lone.compress().terms, lone.terms);
    }

    #[test]
    fn gauge_rotation_scales_by_degree() {
        let d = 2;
        let z = C64::from_polar(1.0, 0.9);
        let a = word(d, &[1], &[2]);
        assert!(a.gauge_rotate(z).unwrap().approx_eq(&a, 1e-14));
        let s1 = gen(d, 1);
        assert!(s1
            .gauge_rotate(z)
            .unwrap()
            .approx_eq(&s1.scale(z), 1e-14));
        let w = word(d, &[1, 2], &[1]);
        assert!(w
            .gauge_rotate(c(-1.0, 0.0))
            .unwrap()
            .approx_eq(&w.scale(c(-1.0, 0.0)), 1e-14));
        assert!(s1.gauge_rotate(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn unitary_rotation_permutation_case() {
        let d = 2;
        let mut g = CMat::zeros(2, 2);
        g[(0, 1)] = c(1.0, 0.0);
        g[(1, 0)] = c(1.0, 0.0);
        let out = gen(d, 1).unitary_rotate(&g).unwrap();
        assert!(out.approx_eq(&gen(d, 2), 1e-14));
        let id = CMat::identity(2, 2);
        let a = word(d, &[1, 2], &[2]);
        assert!(a.unitary_rotate(&id).unwrap().approx_eq(&a, 1e-14));
    }

    #[test]
    fn expectation_keeps_degree_zero() {
        let d = 2;
        assert!(gen(d, 1).expect_uhf().is_zero());
        let a = word(d, &[1], &[2]);
        assert!(a.expect_uhf().approx_eq(&a, 1e-14));
    }

    #[test]
    fn expectation_matches_quadrature() {
        let d = 2;
        let a = gen(d, 1)
            .add(&word(d, &[1, 2], &[2, 1]))
            .unwrap()
            .add(&word(d, &[2, 1, 1], &[2]).scale(c(0.3, 0.4)))
            .unwrap()
            .add(&gen(d, 2).adjoint().scale(c(0.0, -1.0)))
            .unwrap();
        let m = 8usize; // max |degree| = 2 < 8
        let mut avg = AlgebraElement::zero(d);
        for k in 0..m {
            let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
            avg = avg.add(&a.gauge_rotate(z).unwrap()).unwrap();
        }
        avg = avg.scale(c(1.0 / m as f64, 0.0));
        assert!(avg.approx_eq(&a.expect_uhf(), 1e-10));
    }

    #[test]
    fn canonical_endo_examples() {
        let d = 2;
        let lam1 = AlgebraElement::unit(d).canonical_endo();
        assert!(lam1.approx_eq(&AlgebraElement::unit(d), 1e-14));
        let lam = word(d, &[1], &[1]).canonical_endo();
        let expect = word(d, &[1, 1], &[1, 1]).add(&word(d, &[2, 1], &[2, 1])).unwrap();
        assert!(lam.approx_eq(&expect, 1e-14));
    }

    #[test]
    fn endo_dictionary_roundtrip() {
        let d = 2;
        // u = sum s_i s_j s_i* s_j*  gives alpha_u = lambda
        let mut u = AlgebraElement::zero(d);
        for i in 1..=d {
            for j in 1..=d {
                u = u
                    .add(&word(d, &[i, j], &[j, i]))
                    .unwrap();
            }
        }
        assert!(u.is_unitary().unitary);
        for i in 1..=d {
            let img = gen(d, i).apply_endo(&u, false).unwrap();
            assert!(img.approx_eq(&gen(d, i).canonical_endo(), 1e-12));
        }
        // dictionary: endo_unitary(lambda images) recovers u
        let images: Vec<_> = (1..=d).map(|i| gen(d, i).canonical_endo()).collect();
        let u2 = AlgebraElement::endo_unitary(d, &images).unwrap();
        assert!(u2.approx_eq(&u, 1e-12));
        // flip automorphism
        let flip = gen(d, 2)
            .multiply(&gen(d, 1).adjoint())
            .unwrap()
            .add(&gen(d, 1).multiply(&gen(d, 2).adjoint()).unwrap())
            .unwrap();
        let img = gen(d, 1).apply_endo(&flip, true).unwrap();
        assert!(img.approx_eq(&gen(d, 2), 1e-12));
        // identity unitary is the identity endomorphism
        let a = word(d, &[1, 2], &[2]);
        assert!(a
            .apply_endo(&AlgebraElement::unit(d), true)
            .unwrap()
            .approx_eq(&a, 1e-12));
        // images = generators -> u = 1
        let gens: Vec<_> = (1..=d).map(|i| gen(d, i)).collect();
        let one = AlgebraElement::endo_unitary(d, &gens).unwrap();
        assert!(one.approx_eq(&AlgebraElement::unit(d), 1e-12));
    }

    #[test]
    fn apply_endo_verification_catches_non_unitaries() {
        let d = 2;
        let a = word(d, &[1], &[2]);
        let not_unitary = gen(d, 1);
        assert!(matches!(
            a.apply_endo(&not_unitary, true),
            Err(WordError::NotUnitary(_))
        ));
        // without verification the caller's declaration is trusted
        assert!(a.apply_endo(&not_unitary, false).is_ok());
    }

    #[test]
    fn endo_unitary_rejects_bad_images() {
        let d = 2;
        let bad = vec![gen(d, 1), gen(d, 1)];
        assert!(matches!(
            AlgebraElement::endo_unitary(d, &bad),
            Err(WordError::RelationCheckFailed(_))
        ));
    }

    #[test]
    fn is_unitary_examples() {
        let d = 2;
        let one = AlgebraElement::unit(d).is_unitary();
        assert!(one.unitary && one.defect == 0.0);
        let s1 = gen(d, 1).is_unitary();
        assert!(!s1.unitary); // isometry, not unitary for d >= 2
    }

    fn arb_element(d: u32, max_len: usize, max_terms: usize) -> impl Strategy<Value = AlgebraElement> {
        let letter = 1..=d;
        let index = prop::collection::vec(letter, 0..=max_len);
        let term = (index.clone(), index, -1.0f64..1.0, -1.0f64..1.0).prop_map(
            move |(l, r, re, im)| {
                (
                    ReducedWord::new(MultiIndex::new(l), MultiIndex::new(r)),
                    C64::new(re, im),
                )
            },
        );
        prop::collection::vec(term, 1..=max_terms)
            .prop_map(move |ts| AlgebraElement::from_terms(d, ts).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associativity(
            (a, b, x) in (2u32..=4).prop_flat_map(|d| (
                arb_element(d, 2, 3),
                arb_element(d, 2, 3),
                arb_element(d, 2, 3),
            ))
        ) {
            let ab_c = a.multiply(&b).unwrap().multiply(&x).unwrap();
            let a_bc = a.multiply(&b.multiply(&x).unwrap()).unwrap();
            let scale = ab_c.max_coeff().max(a_bc.max_coeff()).max(1.0);
            prop_assert!(ab_c.approx_eq(&a_bc, 1e-11 * scale));
        }

        #[test]
        fn involution_antimultiplicative(
            (a, b) in (2u32..=3).prop_flat_map(|d| (arb_element(d, 2, 3), arb_element(d, 2, 3)))
        ) {
            let lhs = a.multiply(&b).unwrap().adjoint();
            let rhs = b.adjoint().multiply(&a.adjoint()).unwrap();
            let scale = lhs.max_coeff().max(1.0);
            prop_assert!(lhs.approx_eq(&rhs, 1e-11 * scale));
            let back = a.adjoint().adjoint();
            prop_assert!(back.approx_eq(&a, 1e-12));
        }

        #[test]
        fn gauge_action_laws(
            (a, b, t1, t2) in (2u32..=3).prop_flat_map(|d| (
                arb_element(d, 2, 3),
                arb_element(d, 2, 3),
                0.0f64..std::f64::consts::TAU,
                0.0f64..std::f64::consts::TAU,
            ))
        ) {
            let z = C64::from_polar(1.0, t1);
            let w = C64::from_polar(1.0, t2);
            // multiplicative
            let lhs = a.multiply(&b).unwrap().gauge_rotate(z).unwrap();
            let rhs = a.gauge_rotate(z).unwrap().multiply(&b.gauge_rotate(z).unwrap()).unwrap();
            let scale = lhs.max_coeff().max(1.0);
            prop_assert!(lhs.approx_eq(&rhs, 1e-11 * scale));
            // group law
            let two = a.gauge_rotate(z).unwrap().gauge_rotate(w).unwrap();
            let one = a.gauge_rotate(z * w).unwrap();
            prop_assert!(two.approx_eq(&one, 1e-11 * a.max_coeff().max(1.0)));
        }

        #[test]
        fn expectation_idempotent_and_commutes_with_endo(
            a in (2u32..=3).prop_flat_map(|d| arb_element(d, 2, 4))
        ) {
            let e = a.expect_uhf();
            prop_assert!(e.expect_uhf().approx_eq(&e, 1e-12));
            let lhs = a.canonical_endo().expect_uhf();
            let rhs = a.expect_uhf().canonical_endo();
            prop_assert!(lhs.approx_eq(&rhs, 1e-11 * a.max_coeff().max(1.0)));
        }

        #[test]
        fn canonical_form_stable_under_expansion(
            a in (2u32..=3).prop_flat_map(|d| arb_element(d, 2, 3))
        ) {
            // expanding every term by one level gives an equal element with
            // the structurally identical canonical form
            let d = a.d();
            let mut expanded: Vec<(ReducedWord, C64)> = Vec::new();
            for (w, c) in a.terms() {
                for k in 1..=d {
                    expanded.push((
                        ReducedWord::new(w.left.child(k), w.right.child(k)),
                        *c,
                    ));
                }
            }
            let b = AlgebraElement::from_terms(d, expanded).unwrap();
            prop_assert!(a.approx_eq(&b, 1e-11 * a.max_coeff().max(1.0)));
            let ca = a.canonicalize();
            let cb = b.canonicalize();
            let keys_a: Vec<_> = ca.terms().map(|(w, _)| w.clone()).collect();
            let keys_b: Vec<_> = cb.terms().map(|(w, _)| w.clone()).collect();
            prop_assert_eq!(keys_a, keys_b);
            let scale = ca.max_coeff().max(1.0);
            for (w, c) in ca.terms() {
                prop_assert!((c - cb.coeff(w)).norm() <= 1e-11 * scale);
            }
        }

        #[test]
        fn compress_preserves_canonical_form(
            a in (2u32..=3).prop_flat_map(|d| arb_element(d, 3, 4))
        ) {
            let comp = a.compress();
            prop_assert!(comp.approx_eq(&a, 1e-11 * a.max_coeff().max(1.0)));
        }

        #[test]
        fn unitary_rotation_action_law(
            (a, s1, s2) in (2u32..=2).prop_flat_map(|d| (
                arb_element(d, 2, 2),
                -1.0f64..1.0,
                -1.0f64..1.0,
            ))
        ) {
            // two rotations about orthogonal axes
            let g = rotation(s1);
            let h = rotation(s2);
            let gh = &g * &h;
            let lhs = a.unitary_rotate(&h).unwrap().unitary_rotate(&g).unwrap();
            let rhs = a.unitary_rotate(&gh).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-10 * a.max_coeff().max(1.0)));
        }
    }

    fn rotation(t: f64) -> CMat {
        let mut g = CMat::zeros(2, 2);
        g[(0, 0)] = C64::new(t.cos(), 0.0);
        g[(0, 1)] = C64::new(-t.sin(), 0.0);
        g[(1, 0)] = C64::new(t.sin(), 0.0);
        g[(1, 1)] = C64::new(t.cos(), 0.0);
        g
    }

    #[test]
    fn endo_composition_law() {
        // alpha_u . alpha_v = alpha_{alpha_u(v) u}
        let d = 2;
        let u = gen(d, 2)
            .multiply(&gen(d, 1).adjoint())
            .unwrap()
            .add(&gen(d, 1).multiply(&gen(d, 2).adjoint()).unwrap())
            .unwrap();
        let phase = word(d, &[1], &[1])
            .scale(c(0.0, 1.0))
            .add(&word(d, &[2], &[2]))
            .unwrap();
        let mut lam = AlgebraElement::zero(d);
        for i in 1..=d {
            for j in 1..=d {
                lam = lam.add(&word(d, &[i, j], &[j, i])).unwrap();
            }
        }
        for (u, v) in [(u.clone(), phase.clone()), (phase, lam), (u.clone(), u)] {
            for x in [gen(d, 1), word(d, &[1], &[2])] {
                let lhs = x.apply_endo(&v, false).unwrap().apply_endo(&u, false).unwrap();
                let w = v.apply_endo(&u, false).unwrap().multiply(&u).unwrap();
                let rhs = x.apply_endo(&w, false).unwrap();
                assert!(lhs.approx_eq(&rhs, 1e-11));
            }
        }
    }
}
