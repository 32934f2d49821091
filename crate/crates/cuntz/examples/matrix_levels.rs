//! The gauge-fixed subalgebra at finite level: matrix embeddings, the
//! one-sided shift, operator norms, polar smoothing, and unitary paths.
//!
//! ```bash
//! cargo run --example matrix_levels
//! ```

use cuntz::linalg;
use cuntz::matrix::{
    connect_projections, embed_level, lift_level, polar_unitary, shift_level, unitary_path,
    LevelMatrix,
};
use cuntz::parse::parse_element;
use cuntz::{C64, CMat};

fn main() {
    let d = 2;

    let x = parse_element("s1s1' + 0.5*s1s2' + 0.5*s2s1'", d).unwrap();
    let m2 = embed_level(&x, 2).unwrap();
    println!("x embeds at level 2 into M_4, ‖x‖ = {:.6}", m2.op_norm());

    // the canonical endomorphism becomes the one-sided shift 1 ⊗ ·
    let shifted = shift_level(&m2).unwrap();
    let lam = embed_level(&x.canonical_endo(), 3).unwrap();
    println!(
        "shift(embed(x)) = embed(λ(x)): {}",
        linalg::max_abs(&(shifted.data() - lam.data())) < 1e-13
    );

    // lift is inverse to embed
    let back = lift_level(&m2);
    println!("lift∘embed recovers x: {}", back.approx_eq(&x, 1e-12));

    // polar smoothing of a near-unitary
    let mut near = CMat::identity(4, 4);
    near[(0, 1)] = C64::new(0.05, 0.02);
    near[(2, 3)] = C64::new(-0.03, 0.0);
    let near = LevelMatrix::new(d, 2, near).unwrap();
    let u = polar_unitary(&near).unwrap();
    println!(
        "\npolar smoothing: ‖U - m‖ = {:.4} ≤ ‖m*m - 1‖ = {:.4}, unitary defect {:.1e}",
        linalg::op_norm(&(u.data() - near.data())),
        linalg::op_norm(&(near.data().adjoint() * near.data() - CMat::identity(4, 4))),
        linalg::unitary_defect(u.data())
    );

    // connecting equal-rank projections by a partial isometry
    let p = embed_level(&parse_element("s1s1'", d).unwrap(), 1).unwrap();
    let q = embed_level(&parse_element("s2s2'", d).unwrap(), 1).unwrap();
    let w = connect_projections(&p, &q).unwrap();
    println!(
        "\nconnector w for diag(1,0) → diag(0,1): w[1,0] = {:.1}",
        w.data()[(1, 0)].re
    );

    // a discrete unitary path from z to 1 with spacing ≤ π/m
    let z = LevelMatrix::new(
        d,
        1,
        CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::from_polar(1.0, 2.8),
            C64::from_polar(1.0, -1.3),
        ])),
    )
    .unwrap();
    let steps = 8;
    let path = unitary_path(&z, steps).unwrap();
    let mut spacing = 0.0f64;
    for t in 0..steps {
        spacing = spacing.max(linalg::op_norm(&(path[t + 1].data() - path[t].data())));
    }
    println!(
        "\nunitary path with {steps} steps: spacing {:.4} ≤ π/{steps} = {:.4}",
        spacing,
        std::f64::consts::PI / steps as f64
    );
}
