//! Postulation of point schemes on quadrics over F_p: double points impose
//! n conditions each on degree-d forms of the quadric, and the golden base
//! cases fill their space of sections exactly.
//!
//!     cargo run --release --example postulation

use isorank::secant::appendix::run_appendix_case;
use isorank::secant::{
    f_dim, postulation_check, scheme_length, FpQuadric, Presentation, SchemeComponent, SchemeSpec,
};
use rand::SeedableRng;

fn main() {
    let p = 32003;
    let n = 4;
    let quadric = FpQuadric::new(n, p, Presentation::Hyperbolic).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);

    // Growing unions of double points on Q_4 in degree 3.
    println!("double points on Q_{} in degree 3 (dim H = {}):", n, f_dim(n, 3));
    let mut components = Vec::new();
    for r in 1..=8usize {
        let pt = quadric.random_point(&mut rng).unwrap();
        components.push(SchemeComponent::DoublePoint { point: pt });
        let spec = SchemeSpec {
            n,
            p,
            presentation: Presentation::Hyperbolic,
            components: components.clone(),
        };
        let rep = postulation_check(&spec, 3).unwrap();
        println!(
            "  r={}: length {:2}, h0 = {:2}, conditions {:2} (expected h0 = {})",
            r,
            scheme_length(&spec),
            rep.h0,
            rep.conditions_rank,
            f_dim(n, 3).saturating_sub(r * n)
        );
    }

    // One golden base case: quartics through 21 double points of Q_5.
    let case = run_appendix_case("postfin-n5", 3, 7);
    println!(
        "appendix {}: h0 = {} over F_{} ({})",
        case.name,
        case.computed_h0,
        case.prime,
        if case.pass { "reproduced" } else { "failed" }
    );
}
