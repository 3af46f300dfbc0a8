//! Sparsifying an unweighted code with many redundant coordinates and
//! checking every codeword exactly.
//!
//! Run with `cargo run --release --example sparsify_code`.

use codesparse::code::{verify_sparsifier, CoordinateWeights};
use codesparse::corpus::redundancy_code;
use codesparse::numeric::{decimal_string, rat};
use codesparse::sparsify::{code_sparsify, SparsifyParams};

fn main() -> codesparse::Result<()> {
    let n = 10_000;
    let g = redundancy_code(2, 8, n, 42)?;
    let eps = rat(1, 2);
    let params = SparsifyParams::aggressive(eps.clone(), 7)?;
    let sp = code_sparsify(&g, &params)?;
    let report = verify_sparsifier(&g, &CoordinateWeights::unit(n), &sp, &eps)?;
    println!("kept {} of {n} coordinates", sp.len());
    println!(
        "checked {} messages: {} (max relative error {})",
        report.checked,
        if report.pass { "pass" } else { "fail" },
        decimal_string(&report.max_relative_error, 4)
    );
    Ok(())
}
