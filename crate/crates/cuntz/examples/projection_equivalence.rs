//! Cylinder projections and their equivalence classes: two sums of word
//! projections are connected by an explicit partial isometry exactly when
//! their word counts agree mod d-1.
//!
//! ```bash
//! cargo run --example projection_equivalence
//! ```

use cuntz::cylinder::{cylinder_equivalence, PrefixFreeSet};
use cuntz::display::{format_element, FormatMode};
use cuntz::word::{MultiIndex, WordError};

fn set(d: u32, words: &[&[u32]]) -> PrefixFreeSet {
    PrefixFreeSet::new(d, words.iter().map(|w| MultiIndex::new(w.to_vec()))).unwrap()
}

fn main() {
    let d = 2;
    println!("d = 2: every pair of cylinder counts is congruent mod 1.\n");

    let p = set(d, &[&[1]]);
    let q = set(d, &[&[2]]);
    let w = cylinder_equivalence(&p, &q).unwrap();
    println!(
        "{{(1)}} ~ {{(2)}} via w = {}",
        format_element(&w, FormatMode::Compressed)
    );

    let p = set(d, &[&[1], &[2]]);
    let q = set(d, &[&[1]]);
    let w = cylinder_equivalence(&p, &q).unwrap();
    println!(
        "{{(1),(2)}} ~ {{(1)}} via w = {} (a proper isometry: w'w = 1, ww' = s1s1')",
        format_element(&w, FormatMode::Canonical)
    );
    let initial = w.adjoint().multiply(&w).unwrap();
    let range = w.multiply(&w.adjoint()).unwrap();
    println!(
        "  verified: w'w = {}, ww' = {}",
        format_element(&initial, FormatMode::Compressed),
        format_element(&range, FormatMode::Compressed),
    );

    println!("\nd = 3: counts live in Z/2Z, and mismatches are obstructed:");
    let p = set(3, &[&[1]]);
    let q = set(3, &[&[1], &[2]]);
    match cylinder_equivalence(&p, &q) {
        Err(WordError::CongruenceMismatch(a, b, m)) => {
            println!("  |p| = {a}, |q| = {b}: no partial isometry, counts differ mod {m}")
        }
        other => println!("  unexpected: {other:?}"),
    }
    let q3 = set(3, &[&[1], &[2], &[3]]);
    let w = cylinder_equivalence(&p, &q3).unwrap();
    println!(
        "  but {{(1)}} ~ {{(1),(2),(3)}} = 1: w = {}",
        format_element(&w, FormatMode::Canonical)
    );

    println!("\nComplements: the antichain of 1 - P for P over {{(1,1),(2)}}:");
    let e = set(2, &[&[1, 1], &[2]]);
    let comp = e.complement();
    let words: Vec<String> = comp
        .words()
        .map(|w| {
            w.letters()
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join("")
        })
        .collect();
    println!("  complement words: {{{}}}", words.join(", "));
}
