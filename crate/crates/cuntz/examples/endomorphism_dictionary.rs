//! The one-one correspondence between unitaries and unital endomorphisms:
//! `α_u(s_i) = u·s_i` one way, `u = Σ_i α(s_i)·s_i*` the other.
//!
//! ```bash
//! cargo run --example endomorphism_dictionary
//! ```

use cuntz::display::{format_element, FormatMode};
use cuntz::parse::parse_element;
use cuntz::word::AlgebraElement;

fn main() {
    let d = 2;

    // the canonical endomorphism λ(x) = Σ_j s_j x s_j* is α_u for
    // u = Σ_ij s_i s_j s_i* s_j*
    let u = parse_element("s[1,1]s[1,1]' + s[1,2]s[2,1]' + s[2,1]s[1,2]' + s[2,2]s[2,2]'", d)
        .unwrap();
    println!(
        "u = {}  (unitary: {})",
        format_element(&u, FormatMode::Compressed),
        u.is_unitary().unitary
    );
    for i in 1..=d {
        let si = AlgebraElement::generator(d, i).unwrap();
        let img = si.apply_endo(&u, false).unwrap();
        let lam = si.canonical_endo();
        println!(
            "  α_u(s{i}) = {:<24} λ(s{i}) = {:<24} equal: {}",
            format_element(&img, FormatMode::Compressed),
            format_element(&lam, FormatMode::Compressed),
            img.approx_eq(&lam, 1e-12)
        );
    }

    // dictionary direction: images -> unitary
    let images: Vec<AlgebraElement> = (1..=d)
        .map(|i| AlgebraElement::generator(d, i).unwrap().canonical_endo())
        .collect();
    let recovered = AlgebraElement::endo_unitary(d, &images).unwrap();
    println!(
        "\nendo_unitary(λ(s_1), λ(s_2)) recovers u: {}",
        recovered.approx_eq(&u, 1e-12)
    );

    // composition law: α_u ∘ α_v = α_{α_u(v)·u}
    let v = parse_element("s2s1' + s1s2'", d).unwrap();
    let x = parse_element("s1s2'", d).unwrap();
    let chained = x
        .apply_endo(&v, false)
        .unwrap()
        .apply_endo(&u, false)
        .unwrap();
    let merged = v
        .apply_endo(&u, false)
        .unwrap()
        .multiply(&u)
        .unwrap();
    let direct = x.apply_endo(&merged, false).unwrap();
    println!(
        "α_u(α_v(x)) = α_(α_u(v)·u)(x): {}",
        chained.approx_eq(&direct, 1e-12)
    );

    // a flip automorphism
    println!("\nThe flip u = s2s1' + s1s2' exchanges the generators:");
    for i in 1..=d {
        let si = AlgebraElement::generator(d, i).unwrap();
        println!(
            "  α_u(s{i}) = {}",
            format_element(&si.apply_endo(&v, true).unwrap(), FormatMode::Compressed)
        );
    }
}
