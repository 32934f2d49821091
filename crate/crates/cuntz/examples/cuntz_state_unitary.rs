//! From a finitely supported pure state to a Cuntz state: build the unitary
//! u with φ(u·s_1) = 1, align general supports, and strengthen the phase.
//!
//! ```bash
//! cargo run --example cuntz_state_unitary
//! ```

use cuntz::construct::{align_support, pure_to_cuntz_unitary, strengthen_unitary};
use cuntz::cylinder::PrefixFreeSet;
use cuntz::display::{format_element, FormatMode};
use cuntz::matrix::lift_level;
use cuntz::state::{CuntzState, ProductState, StateHandle};
use cuntz::word::{AlgebraElement, MultiIndex};
use cuntz::C64;

fn main() {
    let d = 2;
    let f0 = CuntzState::standard(d);
    let s1 = AlgebraElement::generator(d, 1).unwrap();

    // the support of f_0 at level 1 is the cylinder over {(1)}
    let e = PrefixFreeSet::new(d, [MultiIndex::new(vec![1])]).unwrap();
    let u = pure_to_cuntz_unitary(&e).unwrap();
    println!("u = {}", format_element(&u, FormatMode::Canonical));
    println!(
        "u·s1 = {}",
        format_element(&u.multiply(&s1).unwrap(), FormatMode::Canonical)
    );
    println!(
        "f_0(u·s1) = {:.4}  (unitary defect {:.1e})",
        f0.eval(&u.multiply(&s1).unwrap()).unwrap(),
        u.is_unitary().defect
    );

    // a tilted product state: align its support with a cylinder first
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi = ProductState::constant_tail(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
    let level = 2;
    let (g, cylinder) = align_support(&psi, level).unwrap();
    println!(
        "\ntilted tail (1/√2, 1/√2): aligning rotation g at level {level} has",
    );
    println!("g[0][..2] = [{:.4}, {:.4}] (a Hadamard-type rotation per site)",
        g.data()[(0, 0)].re, g.data()[(0, 1)].re);

    // ω = Ψ ∘ Ad(g*) is supported under the cylinder, and Ad(g*) = α_w for
    // w = g*·λ(g)
    let g_elem = lift_level(&g);
    let w = g_elem
        .adjoint()
        .multiply(&g_elem.canonical_endo())
        .unwrap();
    let u2 = pure_to_cuntz_unitary(&cylinder).unwrap();
    let handle = StateHandle::product(psi).compose_endo(w, false).unwrap();
    let value = handle.eval(&u2.multiply(&s1).unwrap()).unwrap();
    println!("(Ψ∘Ad g*)(u·s1) = {:.6}", value);

    // strengthening: multiply by exponential phases over nested cylinders;
    // the phase of φ(u_1·s1) halves with each extra cylinder
    println!("\nstrengthening over nested cylinders (1), (1,1), (1,1,1), ...:");
    let cylinders: Vec<PrefixFreeSet> = (1..=6usize)
        .map(|k| PrefixFreeSet::new(d, [MultiIndex::new(vec![1; 1 + k])]).unwrap())
        .collect();
    println!("m   |φ(u1·s1) - 1|   bound 2π·2^-m   phase angle");
    for m in 1..=6 {
        let out = strengthen_unitary(&u, &cylinders, m).unwrap();
        let value = f0.eval(&out.unitary.multiply(&s1).unwrap()).unwrap();
        let defect = (value - C64::new(1.0, 0.0)).norm();
        println!(
            "{m}   {:<15.6} {:<15.6} {:.6}",
            defect,
            out.bound,
            value.arg().abs()
        );
    }
}
