//! Deterministic pretty-printing of elements, inverse to [`crate::parse`].
//!
//! Terms are ordered by gauge degree, then right index length, then
//! lexicographically on `(I, J)`. Scalars print in Rust's shortest
//! round-trip form, so `parse(format(a))` recovers `a` exactly in canonical
//! form.

use std::fmt::Write as _;

use crate::word::{AlgebraElement, MultiIndex, ReducedWord};
use crate::C64;

/// Which normal form to print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatMode {
    /// The canonical form.
    Canonical,
    /// The greedily compressed display form.
    Compressed,
}

/// Render an element in the expression grammar.
pub fn format_element(a: &AlgebraElement, mode: FormatMode) -> String {
    let shaped = match mode {
        FormatMode::Canonical => a.canonicalize(),
        FormatMode::Compressed => a.canonicalize().compress(),
    };
    if shaped.is_zero() {
        return "0*I".to_string();
    }
    let mut terms: Vec<(&ReducedWord, &C64)> = shaped.terms().collect();
    terms.sort_by(|(w1, _), (w2, _)| {
        w1.degree()
            .cmp(&w2.degree())
            .then(w1.right.len().cmp(&w2.right.len()))
            .then(w1.left.cmp(&w2.left))
            .then(w1.right.cmp(&w2.right))
    });
    let mut out = String::new();
    for (k, (w, c)) in terms.iter().enumerate() {
        let (joiner, coeff) = if k == 0 {
            ("", **c)
        } else if c.im == 0.0 && c.re < 0.0 {
            (" - ", -**c)
        } else {
            (" + ", **c)
        };
        out.push_str(joiner);
        write_term(&mut out, shaped.d(), w, coeff);
    }
    out
}

fn write_term(out: &mut String, d: u32, w: &ReducedWord, c: C64) {
    if w.is_unit() {
        if c.im != 0.0 {
            let _ = write!(out, "({},{})*I", c.re, c.im);
        } else if c.re == 1.0 {
            out.push('I');
        } else {
            let _ = write!(out, "{}*I", c.re);
        }
        return;
    }
    if c.im != 0.0 {
        let _ = write!(out, "({},{})*", c.re, c.im);
    } else if c.re != 1.0 {
        let _ = write!(out, "{}*", c.re);
    }
    if !w.left.is_empty() {
        write_index(out, d, &w.left, false);
    }
    if !w.right.is_empty() {
        if !w.left.is_empty() {
            out.push('*');
        }
        write_index(out, d, &w.right, true);
    }
}

fn write_index(out: &mut String, d: u32, idx: &MultiIndex, adjoint: bool) {
    // the digit shorthand is only unambiguous (and parseable) for d ≤ 9
    let compact = d <= 9;
    out.push('s');
    if compact {
        for &l in idx.letters() {
            let _ = write!(out, "{l}");
        }
    } else {
        out.push('[');
        for (k, &l) in idx.letters().iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{l}");
        }
        out.push(']');
    }
    if adjoint {
        out.push('\'');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn unit_forms() {
        let one = AlgebraElement::unit(2);
        assert_eq!(format_element(&one, FormatMode::Canonical), "I");
        // Σ s_i s_i* compresses to the unit
        let ones = parse_element("s1s1' + s2s2'", 2).unwrap();
        assert_eq!(format_element(&ones, FormatMode::Compressed), "I");
        assert_eq!(format_element(&ones, FormatMode::Canonical), "I");
    }

    #[test]
    fn zero_and_scalars() {
        let zero = AlgebraElement::zero(2);
        assert_eq!(format_element(&zero, FormatMode::Canonical), "0*I");
        let z = AlgebraElement::unit(2).scale(C64::new(0.0, 1.0));
        assert_eq!(format_element(&z, FormatMode::Canonical), "(0,1)*I");
    }

    #[test]
    fn large_alphabet_uses_brackets() {
        let a = parse_element("s[10,2]'", 12).unwrap();
        assert_eq!(format_element(&a, FormatMode::Canonical), "s[10,2]'");
    }

    #[test]
    fn roundtrip_random_elements() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(55);
        for _ in 0..200 {
            let d = rng.random_range(2..=3u32);
            let mut terms = Vec::new();
            for _ in 0..rng.random_range(1..=4usize) {
                let llen = rng.random_range(0..=2usize);
                let rlen = rng.random_range(0..=2usize);
                let left: Vec<u32> = (0..llen).map(|_| rng.random_range(1..=d)).collect();
                let right: Vec<u32> = (0..rlen).map(|_| rng.random_range(1..=d)).collect();
                terms.push((
                    ReducedWord::new(MultiIndex::new(left), MultiIndex::new(right)),
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                ));
            }
            let a = AlgebraElement::from_terms(d, terms).unwrap();
            let text = format_element(&a, FormatMode::Canonical);
            let back = parse_element(&text, d).unwrap();
            assert!(back.approx_eq(&a, 1e-12), "text {text}");
        }
    }
}
