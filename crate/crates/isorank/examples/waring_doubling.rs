//! Turning a Waring decomposition of a harmonic form into an isotropic one
//! of at most twice the size: non-isotropic points are replaced by the two
//! intersections of a line through a sampled vertex with the quadric, and
//! the coefficients are re-solved exactly (adjoining square roots as
//! needed).
//!
//!     cargo run --example waring_doubling

use isorank::apolarity::{is_isotropic, LinearForm, QuadraticFormSpec};
use isorank::decompose::{catalecticant_lower_bound, double_from_waring, lift_poly};
use isorank::field::{Field, TowerField};
use isorank::poly::MultiPoly;

fn main() {
    let fld = TowerField::qi();
    let w = QuadraticFormSpec::standard(fld.clone(), 1);
    // x0² − x1² is harmonic; its Waring points (1,0) and (0,1) are not
    // isotropic, so both get doubled through the quadric.
    let target = MultiPoly::from_terms(
        fld.clone(),
        2,
        2,
        [
            (vec![2u8, 0], fld.from_i64(1)),
            (vec![0u8, 2], fld.from_i64(-1)),
        ],
    )
    .unwrap();
    let points = vec![
        LinearForm(vec![fld.one(), fld.zero()]),
        LinearForm(vec![fld.zero(), fld.one()]),
    ];
    for p in &points {
        assert!(!is_isotropic(p, &w));
    }
    println!("target: {}", target.display(&["x0", "x1"]));
    println!("catalecticant lower bound: {}", catalecticant_lower_bound(&target, 1));

    let out = double_from_waring(&target, &points, &w, 42).unwrap();
    let dec = &out.decomposition;
    println!(
        "doubled into {} isotropic squares (bound was 2r = {}):",
        dec.size(),
        2 * points.len()
    );
    for (c, l) in &dec.terms {
        println!(
            "  {} * ({})^2",
            out.field.display(c),
            l.to_poly(&out.field).display(&["x0", "x1"])
        );
    }
    let report = dec.verify(&lift_poly(&out.field, &target));
    println!("verified: {}", report.valid);
}
