//! Classifying Boolean ternary predicates and sparsifying an XOR instance.
//!
//! Run with `cargo run --release --example csp_classify`.

use codesparse::csp::{sparsify_affine_csp, ternary_classify, verify_csp_sparsifier, CspInstance, Predicate, TernaryClassification};
use codesparse::numeric::{decimal_string, rat};
use codesparse::sparsify::SparsifyParams;

fn main() -> codesparse::Result<()> {
    for table in ["11111110", "10010110", "10000000", "11101000"] {
        let p = Predicate::from_table_str(table)?;
        match ternary_classify(&p)? {
            TernaryClassification::SparsifiableLinear(a) => {
                println!("{table}: sparsifiable, nonzero of a linear form over F_{} with coefficients {:?}", a.modulus(), a.coefficients())
            }
            TernaryClassification::RequiresQuadratic(lits) => {
                let shown: Vec<String> = lits.iter().map(ToString::to_string).collect();
                println!("{table}: projects to AND via ({})", shown.join(", "))
            }
        }
    }

    let instance = CspInstance::xor2_complete(12);
    let eps = rat(1, 2);
    let sparse = sparsify_affine_csp(&instance, &SparsifyParams::aggressive(eps.clone(), 4)?)?;
    let report = verify_csp_sparsifier(&instance, &sparse, &eps)?;
    println!(
        "complete XOR on 12 variables: {} of {} constraints, max error {}",
        sparse.len(),
        instance.len(),
        decimal_string(&report.max_relative_error, 4)
    );
    Ok(())
}
