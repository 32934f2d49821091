//! Cuntz states, gauge-invariant product states, and the finite-level
//! purity and disjointness diagnostics.
//!
//! ```bash
//! cargo run --example states_and_purity
//! ```

use cuntz::parse::parse_element;
use cuntz::state::{disjointness_defect, purity_defect_level, CuntzState, ProductState};
use cuntz::C64;

fn main() {
    let d = 2;

    // a Cuntz state evaluates words through the product formula
    let xi = vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)];
    let f = CuntzState::new(xi).unwrap();
    let word = parse_element("s1s2's1'", d).unwrap();
    println!("f_ξ(s1s2's1') = {:.4}", f.eval(&word).unwrap());
    println!(
        "f_ξ(ξ̄_1 s1 + ξ̄_2 s2) = {:.4} (the state is pinned by this unitary)",
        f.eval(&parse_element("0.6*s1 + 0.8*s2", d).unwrap()).unwrap()
    );

    // Cuntz states are not gauge-invariant
    let z = C64::from_polar(1.0, 1.0);
    let s1 = parse_element("s1", d).unwrap();
    println!(
        "f_ξ(τ_z(s1)) = {:.4} vs f_ξ(s1) = {:.4}",
        f.eval(&s1.gauge_rotate(z).unwrap()).unwrap(),
        f.eval(&s1).unwrap()
    );

    // its gauge-invariant cousin: the product state from the same vector
    let psi = ProductState::constant_tail(vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]).unwrap();
    println!(
        "\nproduct state: Ψ(s1) = {:.4} (the expectation kills degree ±1)",
        psi.eval(&s1).unwrap()
    );
    println!("Ψ(s1s1') = {:.4}", psi.eval(&parse_element("s1s1'", d).unwrap()).unwrap());

    // purity at finite level: product states are pure, an entangled head
    // shows up below its level
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bell = ProductState::new(
        d,
        2,
        vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)],
        vec![],
        vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]],
        true,
    )
    .unwrap();
    println!("\npurity defect by level (pure tail vs entangled head):");
    for n in 1..=3 {
        println!(
            "  level {n}: tail {:.3}   bell-head {:.3}",
            purity_defect_level(&psi, n).unwrap(),
            purity_defect_level(&bell, n).unwrap()
        );
    }

    // the shifted-overlap diagnostic: a constant tail is shift-invariant
    // (overlap 1, so its gauge-invariant extension is not pure), while an
    // alternating tail is orthogonal to its own shift
    let alt = ProductState::new(
        d,
        0,
        vec![C64::new(1.0, 0.0)],
        vec![],
        vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ],
        true,
    )
    .unwrap();
    println!("\nshift-overlap over a window of 20 sites:");
    println!(
        "  constant tail vs its shift: {:.3}",
        disjointness_defect(&psi, &psi, 1, 20).unwrap()
    );
    println!(
        "  alternating tail vs its shift: {:.3}",
        disjointness_defect(&alt, &alt, 1, 20).unwrap()
    );
    println!("  (near 0 is evidence of disjointness, near 1 of equivalence)");
}
