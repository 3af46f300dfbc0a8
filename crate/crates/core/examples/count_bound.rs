//! Counting light codewords and finding the dense part of a code.
//!
//! Run with `cargo run --example count_bound`.

use codesparse::code::GeneratorMatrix;
use codesparse::counting::{check_counting_bound, code_decomposition, densest_subcode_exact, DEFAULT_NODE_BUDGET};
use codesparse::numeric::format_rational;

fn main() -> codesparse::Result<()> {
    let g = GeneratorMatrix::hamming74();
    println!("Hamming [7,4] code, minimum distance {}", g.min_distance()?);
    for d in 1..=3 {
        let report = check_counting_bound(&g, d)?;
        println!("d = {d}: bound {}", if report.pass() { "holds" } else { "fails" });
        for row in &report.per_alpha {
            println!("  alpha {:>2}: {:>3} codewords of weight <= {:>2}, bound {}", row.alpha, row.count, row.alpha * d as usize, row.bound);
        }
    }

    let dense = densest_subcode_exact(&g, DEFAULT_NODE_BUDGET)?;
    println!("densest subcode: dim {} on {} coordinates (density {})", dense.dim, dense.support.len(), format_rational(&dense.density));

    let dec = code_decomposition(&g, 2)?;
    println!("decomposition at d = 2 removed coordinates {:?} in {} steps", dec.removed, dec.steps.len());
    Ok(())
}
