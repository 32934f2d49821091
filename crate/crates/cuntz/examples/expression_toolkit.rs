//! The expression grammar: parsing, normal forms, and round-tripping.
//!
//! ```bash
//! cargo run --example expression_toolkit
//! ```

use cuntz::display::{format_element, FormatMode};
use cuntz::parse::parse_element;

fn main() {
    let samples = [
        ("s1*s2'", 2),
        ("s[1,2]'", 12),
        ("(0,1)*s1 + s2*s2'", 2),
        ("2.5*s11s2' - s2", 2),
        ("I - s1s1' - s2s2'", 2),
        ("s1s1' + s2s2' + s1s2'", 2),
    ];
    println!("{:<24} {:<6} canonical / compressed", "input", "d");
    for (text, d) in samples {
        let a = parse_element(text, d).unwrap();
        println!(
            "{text:<24} {d:<6} {}   /   {}",
            format_element(&a, FormatMode::Canonical),
            format_element(&a, FormatMode::Compressed)
        );
    }

    println!("\nErrors carry byte positions:");
    for bad in ["s1 + s3", "s[1,2", "2**s1", "s12"] {
        let d = if bad == "s12" { 12 } else { 2 };
        match parse_element(bad, d) {
            Err(e) => println!("  {bad:<10} (d={d}) → {e}"),
            Ok(_) => println!("  {bad:<10} (d={d}) → parsed unexpectedly"),
        }
    }

    println!("\nRound trip: parse(format(a)) always recovers a —");
    let a = parse_element("0.125*s112s21' + (0,-3)*s2 + I", 2).unwrap();
    let text = format_element(&a, FormatMode::Canonical);
    let back = parse_element(&text, 2).unwrap();
    println!("  {} → round-trips: {}", text, back.approx_eq(&a, 1e-12));
}
