//! The circle and unitary-group rotations, and the conditional expectation
//! onto the gauge-fixed subalgebra.
//!
//! ```bash
//! cargo run --example gauge_and_expectation
//! ```

use cuntz::display::{format_element, FormatMode};
use cuntz::parse::parse_element;
use cuntz::word::AlgebraElement;
use cuntz::{C64, CMat};

fn main() {
    let d = 2;
    let a = parse_element("s1 + s1s2' + 0.5*s2s1s1'", d).unwrap();
    println!("a = {}", format_element(&a, FormatMode::Compressed));

    println!("\nGauge rotation scales each word by z^(|I|-|J|):");
    let z = C64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let rotated = a.gauge_rotate(z).unwrap();
    println!("  τ_z(a) = {}", format_element(&rotated, FormatMode::Compressed));

    println!("\nThe expectation keeps exactly the degree-0 part:");
    let fixed = a.expect_uhf();
    println!("  ε(a)   = {}", format_element(&fixed, FormatMode::Compressed));

    // the m-point quadrature average reproduces ε once m exceeds the
    // largest degree present
    let m = 8usize;
    let mut avg = AlgebraElement::zero(d);
    for k in 0..m {
        let w = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64);
        avg = avg.add(&a.gauge_rotate(w).unwrap()).unwrap();
    }
    avg = avg.scale(C64::new(1.0 / m as f64, 0.0));
    let err = avg.sub(&fixed).unwrap().canonicalize().max_coeff();
    println!("  ‖(1/{m})Σ τ_ω^k(a) - ε(a)‖_coeff = {err:.2e}");

    println!("\nA unitary rotation mixes the generators, s_i ↦ Σ_j g_ji s_j:");
    let t = 0.4f64;
    let mut g = CMat::zeros(2, 2);
    g[(0, 0)] = C64::new(t.cos(), 0.0);
    g[(0, 1)] = C64::new(-t.sin(), 0.0);
    g[(1, 0)] = C64::new(t.sin(), 0.0);
    g[(1, 1)] = C64::new(t.cos(), 0.0);
    let s1 = parse_element("s1", d).unwrap();
    println!(
        "  γ_g(s1) = {}",
        format_element(&s1.unitary_rotate(&g).unwrap(), FormatMode::Compressed)
    );

    // ε commutes with the canonical endomorphism
    let lhs = a.canonical_endo().expect_uhf();
    let rhs = a.expect_uhf().canonical_endo();
    println!(
        "\nε∘λ = λ∘ε: {}",
        lhs.approx_eq(&rhs, 1e-12)
    );
}
