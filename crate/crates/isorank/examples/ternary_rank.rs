//! Isotropic rank of a ternary harmonic form, end to end: the quadric
//! vz = (x0 − i·x1)·x2 has rank 4, and its decomposition into squares of
//! isotropic linear forms comes out exactly over Q(i).
//!
//!     cargo run --example ternary_rank

use isorank::decompose::lift_poly;
use isorank::field::{rat_i, Field, TowerField};
use isorank::poly::MultiPoly;
use isorank::ternary::{ternary_decompose, TernaryOutcome};

fn main() {
    let fld = TowerField::qi();
    // vz = (x0 − i x1) x2, harmonic for the standard form on 3 variables.
    let vz = MultiPoly::from_terms(
        fld.clone(),
        3,
        2,
        [
            (vec![1u8, 0, 1], fld.from_gauss(rat_i(1, 0))),
            (vec![0u8, 1, 1], fld.from_gauss(rat_i(0, -1))),
        ],
    )
    .unwrap();
    println!("target: {}", vz.display(&["x0", "x1", "x2"]));

    let dec = ternary_decompose(&vz).expect("vz is harmonic");
    println!("first nontrivial catalecticant: k = {}", dec.r0);
    println!("isotropic rank: {}", dec.rank);

    match &dec.outcome {
        TernaryOutcome::Exact {
            field,
            decomposition,
        } => {
            println!("decomposition ({} terms, exact):", decomposition.size());
            for (c, l) in &decomposition.terms {
                println!(
                    "  {} * ({})^2",
                    field.display(c),
                    l.to_poly(field).display(&["x0", "x1", "x2"])
                );
            }
            let report = decomposition.verify(&lift_poly(field, &vz));
            println!("recomposes exactly: {}", report.valid);
        }
        TernaryOutcome::Float { terms, residual } => {
            println!("float decomposition, {} terms, residual {:.2e}", terms.len(), residual);
        }
    }
}
