//! Prefix-free word sets and cylinder projections.
//!
//! A finite antichain of multi-indices `{I}` determines the projection
//! `Σ_I s_I s_I*`. Two such projections are equivalent via an explicit
//! partial isometry exactly when their word counts agree mod `d - 1`, the
//! class of a projection in `K_0(O_d) = Z/(d-1)Z`.

use std::collections::BTreeSet;

use crate::word::{AlgebraElement, MultiIndex, ReducedWord, WordError};
use crate::C64;

/// A finite antichain of multi-indices over `{1, ..., d}`.
///
/// No word is a prefix of another, so the corresponding sum of word
/// projections is a projection. The empty set represents the zero
/// projection; `{∅}` represents the unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrefixFreeSet {
    d: u32,
    words: BTreeSet<MultiIndex>,
}

impl PrefixFreeSet {
    pub fn new(d: u32, words: impl IntoIterator<Item = MultiIndex>) -> Result<Self, WordError> {
        if d < 2 {
            return Err(WordError::AlphabetTooSmall(d));
        }
        let words: BTreeSet<MultiIndex> = words.into_iter().collect();
        for w in &words {
            for &l in w.letters() {
                if l == 0 || l > d {
                    return Err(WordError::LetterOutOfRange { letter: l, d });
                }
            }
        }
        // BTreeSet is lexicographically sorted, so a prefix of w precedes w;
        // checking consecutive pairs is not enough (e.g. {1, 12, 2}), so
        // check each word against all that follow it.
        let list: Vec<&MultiIndex> = words.iter().collect();
        for (k, w) in list.iter().enumerate() {
            for v in &list[k + 1..] {
                if v.starts_with(w) {
                    return Err(WordError::PrefixOverlap(
                        w.letters().to_vec(),
                        v.letters().to_vec(),
                    ));
                }
            }
        }
        Ok(PrefixFreeSet { d, words })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &MultiIndex> {
        self.words.iter()
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// The cylinder projection `Σ_I s_I s_I*`.
    pub fn projection(&self) -> AlgebraElement {
        let terms = self
            .words
            .iter()
            .map(|w| (ReducedWord::new(w.clone(), w.clone()), C64::new(1.0, 0.0)));
        AlgebraElement::from_terms(self.d, terms).expect("validated on construction")
    }

    /// `{a · I : I ∈ self}`, the set for `s_a (Σ s_I s_I*) s_a*`.
    pub fn prepend(&self, letter: u32) -> Result<Self, WordError> {
        if letter == 0 || letter > self.d {
            return Err(WordError::LetterOutOfRange {
                letter,
                d: self.d,
            });
        }
        let words = self
            .words
            .iter()
            .map(|w| MultiIndex::new(vec![letter]).concat(w));
        PrefixFreeSet::new(self.d, words)
    }

    /// The antichain of the complementary projection `1 - Σ s_I s_I*`.
    ///
    /// Consists of the minimal words whose cylinders avoid every member's
    /// cylinder. The complement of the empty set is `{∅}`.
    pub fn complement(&self) -> PrefixFreeSet {
        if self.words.is_empty() {
            return PrefixFreeSet {
                d: self.d,
                words: [MultiIndex::empty()].into_iter().collect(),
            };
        }
        let mut prefixes: BTreeSet<MultiIndex> = BTreeSet::new();
        for w in &self.words {
            for k in 0..=w.len() {
                prefixes.insert(MultiIndex::new(w.letters()[..k].to_vec()));
            }
        }
        let mut out = BTreeSet::new();
        for node in &prefixes {
            if self.words.contains(node) {
                continue;
            }
            for k in 1..=self.d {
                let child = node.child(k);
                if !prefixes.contains(&child) {
                    out.insert(child);
                }
            }
        }
        PrefixFreeSet {
            d: self.d,
            words: out,
        }
    }

    /// True when the cylinders cover everything (complement empty).
    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    /// Replace the lexicographically smallest word by its `d` children,
    /// `count` times. Each expansion grows the set by `d - 1` words.
    pub fn refine_lex_smallest(&self, count: usize) -> PrefixFreeSet {
        let mut words = self.words.clone();
        for _ in 0..count {
            let smallest = match words.iter().next().cloned() {
                Some(w) => w,
                None => break,
            };
            words.remove(&smallest);
            for k in 1..=self.d {
                words.insert(smallest.child(k));
            }
        }
        PrefixFreeSet { d: self.d, words }
    }
}

/// An explicit partial isometry between two cylinder projections.
///
/// Returns `w = Σ_m s_{Q_m} s_{P_m}*` with `w*w = proj(p)` and
/// `ww* = proj(q)` (verified symbolically before returning). The
/// smaller-count side is refined by expanding its lexicographically smallest
/// words, exactly `(|larger| - |smaller|)/(d-1)` times, and the refined
/// lists are paired lexicographically, so the output is deterministic.
///
/// Fails with [`WordError::CongruenceMismatch`] when the counts disagree
/// mod `d - 1`: the projections then have distinct `K_0` classes and no
/// such partial isometry exists.
pub fn cylinder_equivalence(
    p: &PrefixFreeSet,
    q: &PrefixFreeSet,
) -> Result<AlgebraElement, WordError> {
    if p.d != q.d {
        return Err(WordError::AlphabetMismatch(p.d, q.d));
    }
    if p.is_empty() || q.is_empty() {
        return Err(WordError::EmptySet);
    }
    let d = p.d;
    let step = (d - 1) as usize;
    if p.len() % step != q.len() % step {
        return Err(WordError::CongruenceMismatch(p.len(), q.len(), d - 1));
    }
    let (p_ref, q_ref) = if p.len() <= q.len() {
        (p.refine_lex_smallest((q.len() - p.len()) / step), q.clone())
    } else {
        (p.clone(), q.refine_lex_smallest((p.len() - q.len()) / step))
    };
    debug_assert_eq!(p_ref.len(), q_ref.len());
    let terms = p_ref
        .words
        .iter()
        .zip(q_ref.words.iter())
        .map(|(pw, qw)| (ReducedWord::new(qw.clone(), pw.clone()), C64::new(1.0, 0.0)));
    let w = AlgebraElement::from_terms(d, terms)?;
    // verify both identities in canonical form before returning
    let initial = w.adjoint().multiply(&w)?;
    if !initial.approx_eq(&p.projection(), 1e-12) {
        return Err(WordError::VerificationFailed(
            "w*w does not match the source projection".into(),
        ));
    }
    let range = w.multiply(&w.adjoint())?;
    if !range.approx_eq(&q.projection(), 1e-12) {
        return Err(WordError::VerificationFailed(
            "ww* does not match the target projection".into(),
        ));
    }
    Ok(w)
}
