//! Exact word calculus: the defining relations, products, adjoints, and
//! canonical forms.
//!
//! ```bash
//! cargo run --example word_calculus
//! ```

use cuntz::display::{format_element, FormatMode};
use cuntz::parse::parse_element;
use cuntz::word::AlgebraElement;

fn show(label: &str, a: &AlgebraElement) {
    println!(
        "  {label:<28} = {}",
        format_element(a, FormatMode::Compressed)
    );
}

fn main() {
    let d = 2;
    println!("O_{d} is generated by isometries s_1, ..., s_{d} with");
    println!("s_j'·s_i = δ_ij·I and Σ_i s_i·s_i' = I.\n");

    let s1 = parse_element("s1", d).unwrap();
    let s2 = parse_element("s2", d).unwrap();

    println!("Products of reduced words reduce or vanish:");
    show("s1'·s1", &s1.adjoint().multiply(&s1).unwrap());
    show("s2'·s1", &s2.adjoint().multiply(&s1).unwrap());
    show("(s1s2')·(s2s1')", &parse_element("s1s2' * s2s1'", d).unwrap());
    show("(s1s2')·(s1s2')", &parse_element("s1s2' * s1s2'", d).unwrap());

    println!("\nThe range relation makes raw words linearly dependent:");
    let ones = parse_element("s1s1' + s2s2'", d).unwrap();
    println!(
        "  canonical(s1s1' + s2s2')     = {}",
        format_element(&ones, FormatMode::Canonical)
    );
    let mixed = parse_element("s1s1' + s1s2s2's1'", d).unwrap();
    println!(
        "  canonical(s1s1' + s12s12')   = {}",
        format_element(&mixed, FormatMode::Canonical)
    );

    println!("\nEquality is decidable through canonical forms:");
    let lhs = parse_element("s1 s1' s1", d).unwrap();
    println!(
        "  s1s1's1 equals s1: {}",
        lhs.approx_eq(&s1, 1e-12)
    );

    println!("\nThe involution is conjugate-linear and antimultiplicative:");
    let a = parse_element("(0,1)*s1 + 2*s2s1'", d).unwrap();
    show("a", &a);
    show("a*", &a.adjoint());
    let b = parse_element("s1s2'", d).unwrap();
    let prod_adj = a.multiply(&b).unwrap().adjoint();
    let adj_prod = b.adjoint().multiply(&a.adjoint()).unwrap();
    println!(
        "  (ab)* = b*a*: {}",
        prod_adj.approx_eq(&adj_prod, 1e-12)
    );

    println!("\nUnitarity is checked symbolically:");
    let flip = parse_element("s2s1' + s1s2'", d).unwrap();
    let check = flip.is_unitary();
    println!(
        "  s2s1' + s1s2' unitary: {} (defect {:.1e})",
        check.unitary, check.defect
    );
    let iso = s1.is_unitary();
    println!(
        "  s1 unitary: {} (defect {:.1e}, an isometry is not onto)",
        iso.unitary, iso.defect
    );
}
