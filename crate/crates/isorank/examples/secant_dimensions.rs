//! Dimensions of secant varieties of the isotropic Veronese, measured over
//! F_32003 by stacking Terracini tangent spaces at random quadric points.
//! At d = 2 every proper secant is defective; from d = 3 on the dimensions
//! fill the expected min{rn−1, dim H − 1}.
//!
//!     cargo run --release --example secant_dimensions

use isorank::secant::{expected_secant_dim, f_dim, generic_irk, terracini_stream};

fn main() {
    let p = 32003;
    println!("d = 2 (defective range), n = 6:");
    let n = 6;
    let ranks = terracini_stream(n, 2, p, 1, n + 1).unwrap();
    for r in 1..=n + 1 {
        let computed = ranks[r - 1] - 1;
        let expected = expected_secant_dim(n, 2, r);
        let expdim_naive = (r * n - 1).min(f_dim(n, 2) - 1);
        println!(
            "  r={:2}  dim sigma_r = {:3}  (closed form {:3}, naive expectation {:3}{})",
            r,
            computed,
            expected,
            expdim_naive,
            if computed < expdim_naive { ", defective" } else { "" }
        );
        assert_eq!(computed, expected);
    }

    println!("d = 3..4, n = 3..5 (never defective):");
    for d in 3..=4usize {
        for n in 3..=5usize {
            let rmax = f_dim(n, d).div_ceil(n);
            let ranks = terracini_stream(n, d, p, 1, rmax).unwrap();
            let all_match = (1..=rmax).all(|r| ranks[r - 1] - 1 == expected_secant_dim(n, d, r));
            println!(
                "  n={} d={}: every r up to {} matches; generic isotropic rank {}",
                n,
                d,
                rmax,
                generic_irk(n, d)
            );
            assert!(all_match);
        }
    }
}
