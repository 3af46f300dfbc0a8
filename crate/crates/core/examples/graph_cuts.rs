//! Graph cut sparsification by two routes: through the cut code, and by the
//! recursive peel-and-sample procedure.
//!
//! Run with `cargo run --release --example graph_cuts`.

use codesparse::corpus::gnp;
use codesparse::graphs::{cut_code, graph_sparsify_appendix, peel_small_cuts, sparsify_graph_via_code, verify_cut_sparsifier, Graph};
use codesparse::numeric::{decimal_string, int, rat};
use codesparse::sparsify::SparsifyParams;

fn main() -> codesparse::Result<()> {
    let g = gnp(18, &rat(4, 5), 5)?;
    let eps = rat(1, 2);
    let (c, _) = g.min_cut().expect("at least two vertices");
    println!("G(18, 4/5): {} edges, min cut {c}", g.m());
    println!("cut code: {} rows over {} vertices, rank {}", g.m(), g.n(), cut_code(&g).0.rank());

    let h = sparsify_graph_via_code(&g, &SparsifyParams::aggressive(eps.clone(), 1)?)?;
    let report = verify_cut_sparsifier(&g, &h, &eps)?;
    println!("via code: {} weighted edges, max cut error {}", h.m(), decimal_string(&report.max_relative_error, 4));

    let big = Graph::complete(40);
    let sparse = graph_sparsify_appendix(&big, &rat(9, 10), 1, Some(&rat(1, 8)))?;
    println!("recursive on K40: {} of {} edges", sparse.m(), big.m());

    let peeled = peel_small_cuts(&Graph::path(6), &int(1));
    println!("peeling cuts of size <= 1 from a 6-vertex path removes {} edges", peeled.removed.len());
    Ok(())
}
