//! Harmonic monomials: recognition, the product rank formula, and the two
//! decomposition regimes. With exactly one non-isotropic factor the
//! isotropic rank doubles the Waring rank; otherwise the two agree.
//!
//!     cargo run --example monomial_rank

use isorank::apolarity::{LinearForm, QuadraticFormSpec};
use isorank::field::{Field, TowerField};
use isorank::matrix::MatrixExact;
use isorank::monomials::{
    is_harmonic_monomial, monomial_decompose, monomial_irk, MonomialDecomposition, MonomialSpec,
};

fn coord(f: &TowerField, n1: usize, j: usize) -> LinearForm<TowerField> {
    let mut v = vec![f.zero(); n1];
    v[j] = f.one();
    LinearForm(v)
}

/// ω = α0² + α1·α2: x0 is non-isotropic, x1 is isotropic, x0 ⊥ x1.
fn doubling_frame(f: &TowerField) -> QuadraticFormSpec<TowerField> {
    let mut gram = MatrixExact::zeros(f.clone(), 3, 3);
    *gram.at_mut(0, 0) = f.one();
    let half = f.inv(&f.from_i64(2)).unwrap();
    *gram.at_mut(1, 2) = half.clone();
    *gram.at_mut(2, 1) = half;
    QuadraticFormSpec::from_gram(f.clone(), gram)
}

fn main() {
    let fld = TowerField::qi();

    // The doubling family x0 · x1^(d-1).
    for d in 2..=5usize {
        let m = MonomialSpec::new(
            vec![coord(&fld, 3, 0), coord(&fld, 3, 1)],
            vec![1, d - 1],
            doubling_frame(&fld),
        )
        .unwrap();
        let ranks = monomial_irk(&m).unwrap();
        let dec = monomial_decompose(&m, 7).unwrap();
        let backend = match &dec {
            MonomialDecomposition::Exact { .. } => "exact",
            MonomialDecomposition::Float { .. } => "float",
        };
        println!(
            "x0*x1^{}: waring rank {}, isotropic rank {} = 2d, {} terms ({})",
            d - 1,
            ranks.waring_rank,
            ranks.isotropic_rank,
            dec.size(),
            backend
        );
    }

    // A rank-preserving monomial: both factors isotropic under two
    // hyperbolic pairs, so the ranks agree.
    let w = QuadraticFormSpec::hyperbolic(fld.clone(), 3, 2);
    let m = MonomialSpec::new(
        vec![coord(&fld, 4, 0), coord(&fld, 4, 1)],
        vec![2, 2],
        w,
    )
    .unwrap();
    let rep = is_harmonic_monomial(&m);
    let ranks = monomial_irk(&m).unwrap();
    let dec = monomial_decompose(&m, 7).unwrap();
    println!(
        "x0^2*x1^2 (both isotropic): harmonic {}, waring {} = isotropic {}, {} terms",
        rep.harmonic,
        ranks.waring_rank,
        ranks.isotropic_rank,
        dec.size()
    );

    // A non-example: x0^2 for the standard form is rejected.
    let std1 = QuadraticFormSpec::standard(fld.clone(), 1);
    let bad = MonomialSpec::new(vec![coord(&fld, 2, 0)], vec![2], std1).unwrap();
    let rep = is_harmonic_monomial(&bad);
    println!(
        "x0^2 under the standard form: harmonic {} (violations {:?})",
        rep.harmonic, rep.violations
    );
}
