//! The weighted pipeline on weights spanning six orders of magnitude, with
//! the size of every stage.
//!
//! Run with `cargo run --release --example weighted_pipeline`.

use codesparse::code::verify_sparsifier;
use codesparse::corpus::{random_code, spanning_weights};
use codesparse::numeric::{decimal_string, rat};
use codesparse::sparsify::{final_code_sparsify_traced, SparsifyParams};

fn main() -> codesparse::Result<()> {
    let n = 2_000;
    let g = random_code(3, 5, n, 1)?;
    let w = spanning_weights(n, 2);
    let eps = rat(1, 2);
    let trace = final_code_sparsify_traced(&g, &w, &SparsifyParams::aggressive(eps.clone(), 3)?)?;
    println!("importance sampling kept {} of {n}", trace.quadratic_retained);
    println!("weight band ratio {}", trace.alpha);
    for b in &trace.blocks {
        println!(
            "  {} band {:>2}: {:>4} rows, rank {}, {:>6} after duplication, {:>4} kept",
            if b.odd { "odd " } else { "even" },
            b.class,
            b.rows,
            b.rank,
            b.duplicated_length,
            b.retained_rows
        );
    }
    let report = verify_sparsifier(&g, &w, &trace.sparsifier, &eps)?;
    println!(
        "final: {} coordinates, {} with max relative error {}",
        trace.sparsifier.len(),
        if report.pass { "verified" } else { "not verified" },
        decimal_string(&report.max_relative_error, 4)
    );
    Ok(())
}
