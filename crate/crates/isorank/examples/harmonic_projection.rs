//! The Fischer split f = q·g + h with h harmonic, plus harmonic bases and
//! perps from the contraction pairing.
//!
//!     cargo run --example harmonic_projection

use isorank::apolarity::{
    contract, harmonic_basis, harmonic_dim, harmonic_project, perp, QuadraticFormSpec,
};
use isorank::field::{GaussField, GaussQ};
use isorank::poly::MultiPoly;
use num::Zero;

fn gp(terms: &[(&[u8], i64)]) -> MultiPoly<GaussField> {
    let arity = terms[0].0.len();
    let degree = terms[0].0.iter().map(|&x| x as usize).sum();
    MultiPoly::from_terms(
        GaussField,
        arity,
        degree,
        terms
            .iter()
            .map(|(e, c)| {
                (
                    e.to_vec(),
                    GaussQ::new(num::BigRational::from_integer((*c).into()), Zero::zero()),
                )
            })
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn main() {
    let vars = ["x0", "x1", "x2"];
    let w = QuadraticFormSpec::standard(GaussField, 2);

    // x0² is not harmonic; its projection is (2x0² − x1² − x2²)/3.
    let f = gp(&[(&[2, 0, 0], 1)]);
    let (h, g) = harmonic_project(&f, &w).unwrap();
    println!("{} = q*({}) + {}", f.display(&vars), g.display(&vars), h.display(&vars));
    assert!(contract(&w.omega_poly(), &h).unwrap().is_zero());

    // Harmonic dimensions follow the two-binomial count.
    for d in 1..=5 {
        let basis = harmonic_basis(2, d, &w).unwrap();
        println!("dim H_(2,{}) = {} (= {})", d, basis.len(), harmonic_dim(2, d));
    }

    // The perp of x0·x1 in two variables is spanned by α0² and α1².
    let span = vec![gp(&[(&[1, 1], 1)])];
    let p = perp(&span, 1, 2, &GaussField).unwrap();
    println!("perp of x0*x1 has dimension {}:", p.len());
    for phi in &p {
        println!("  {}", phi.display(&["a0", "a1"]));
        assert!(contract(phi, &span[0]).unwrap().is_zero());
    }
}
