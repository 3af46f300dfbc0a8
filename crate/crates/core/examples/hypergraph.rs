//! Hypergraph cuts through a code over a prime field, and the split into
//! dense and well-connected parts.
//!
//! Run with `cargo run --release --example hypergraph`.

use codesparse::corpus::random_hypergraph;
use codesparse::hypergraphs::{hypergraph_code, hypergraph_decomposition, sparsify_hypergraph, verify_hypergraph_sparsifier, Hypergraph};
use codesparse::numeric::{decimal_string, rat};
use codesparse::sparsify::SparsifyParams;

fn main() -> codesparse::Result<()> {
    let h = random_hypergraph(9, 400, 4, 11)?;
    let (code, q) = hypergraph_code(&h)?;
    println!("{} hyperedges on {} vertices, code over F_{q} of rank {}", h.m(), h.n(), code.rank());

    let eps = rat(1, 2);
    let s = sparsify_hypergraph(&h, &SparsifyParams::aggressive(eps.clone(), 2)?)?;
    let report = verify_hypergraph_sparsifier(&h, &s, &eps)?;
    println!("sparsifier: {} hyperedges, max cut error {}", s.m(), decimal_string(&report.max_relative_error, 4));

    let sunflower = Hypergraph::unweighted(6, &[vec![0, 1, 2], vec![0, 3, 4], vec![1, 2, 3, 4], vec![0, 1, 5]])?;
    let dec = hypergraph_decomposition(&sunflower, 1)?;
    println!("decomposition at d = 1 removes hyperedges {:?}", dec.removed);
    for (alpha, count, bound) in &dec.report.per_alpha {
        println!("  alpha {alpha}: {count} cuts, bound {bound}");
    }
    Ok(())
}
