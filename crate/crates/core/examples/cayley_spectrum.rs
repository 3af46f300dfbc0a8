//! Laplacian spectra of Cayley graphs over F_2^k and spectral sparsification
//! of the complete graph.
//!
//! Run with `cargo run --release --example cayley_spectrum`.

use std::collections::BTreeMap;

use codesparse::cayley::{laplacian_spectrum, sparsify_cayley, verify_spectrum, CayleySpec};
use codesparse::numeric::{decimal_string, format_rational, rat};
use codesparse::sparsify::SparsifyParams;

fn histogram(spec: &CayleySpec) -> codesparse::Result<BTreeMap<String, usize>> {
    let mut h = BTreeMap::new();
    for lambda in laplacian_spectrum(spec)? {
        *h.entry(format_rational(&lambda)).or_insert(0) += 1;
    }
    Ok(h)
}

fn main() -> codesparse::Result<()> {
    println!("3-cube: {:?}", histogram(&CayleySpec::hypercube(3)?)?);
    let complete = CayleySpec::complete(10)?;
    println!("complete graph on 1024 vertices: {:?}", histogram(&complete)?);

    let eps = rat(1, 2);
    let sparse = sparsify_cayley(&complete, &SparsifyParams::aggressive(eps.clone(), 9)?)?;
    let report = verify_spectrum(&complete, &sparse, &eps)?;
    println!(
        "sparsified to {} of {} generators, max eigenvalue error {}",
        sparse.len(),
        complete.len(),
        decimal_string(&report.max_relative_error, 4)
    );
    Ok(())
}
