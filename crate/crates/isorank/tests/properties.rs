//! Randomized property tests: field axioms per field tag, polynomial ring
//! laws, substitution as a ring homomorphism, and the bridge invariants.

use isorank::apolarity::{harmonic_basis, harmonic_dim, QuadraticFormSpec};
use isorank::field::{rat, Field, FpField, GaussField, GaussQ, TowerField};
use isorank::poly::{MonomialIndex, MultiPoly};
use isorank::ternary::{beta, binary_rank, BinaryForm, UVZForm};
use proptest::prelude::*;

fn small_gauss() -> impl Strategy<Value = GaussQ> {
    (-6i64..=6, -6i64..=6, 1i64..=3, 1i64..=3)
        .prop_map(|(a, b, d1, d2)| GaussQ::new(rat(a, d1), rat(b, d2)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_field_axioms(a in small_gauss(), b in small_gauss(), c in small_gauss()) {
        let f = GaussField;
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn fp_field_axioms(a in 0u64..101, b in 0u64..101, c in 0u64..101) {
        let f = FpField::new(101);
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        if a != 0 {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn tower_field_axioms(a0 in small_gauss(), a1 in small_gauss(), b0 in small_gauss(), b1 in small_gauss()) {
        // Work in Q(i, √2).
        let f = TowerField::qi();
        let (f, s2) = f.adjoin_sqrt(&f.from_i64(2)).unwrap();
        let mk = |x: &GaussQ, y: &GaussQ| {
            f.add(&f.from_gauss(x.clone()), &f.mul(&f.from_gauss(y.clone()), &s2))
        };
        let a = mk(&a0, &a1);
        let b = mk(&b0, &b1);
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert!(f.is_zero(&f.sub(&a, &a)));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
        // (a·b)·b⁻¹ = a
        if !f.is_zero(&b) {
            let ab = f.mul(&a, &b);
            prop_assert_eq!(f.mul(&ab, &f.inv(&b).unwrap()), a);
        }
    }
}

fn random_poly(
    rng: &mut rand_chacha::ChaCha8Rng,
    arity: usize,
    degree: usize,
) -> MultiPoly<GaussField> {
    use rand::Rng as _;
    let idx = MonomialIndex::new(arity, degree);
    let mut terms: Vec<(Vec<u8>, GaussQ)> = Vec::new();
    for e in idx.iter() {
        if rng.gen_bool(0.4) {
            terms.push((
                e.clone(),
                GaussQ::new(rat(rng.gen_range(-4..=4), 1), rat(rng.gen_range(-4..=4), 1)),
            ));
        }
    }
    MultiPoly::from_terms(GaussField, arity, degree, terms).unwrap()
}

#[test]
fn poly_ring_laws() {
    use rand::{Rng as _, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let arity = rng.gen_range(2..=5usize);
        let da = rng.gen_range(1..=3usize);
        let db = rng.gen_range(1..=3usize);
        let dc = rng.gen_range(1..=2usize);
        let a = random_poly(&mut rng, arity, da);
        let b = random_poly(&mut rng, arity, db);
        let c = random_poly(&mut rng, arity, dc);
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        // Distributivity over same-degree sums.
        let b2 = random_poly(&mut rng, arity, db);
        assert_eq!(
            a.mul(&b.add(&b2).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&b2).unwrap()).unwrap()
        );
    }
}

#[test]
fn substitution_is_a_ring_homomorphism() {
    use rand::{Rng as _, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for _ in 0..25 {
        let arity = rng.gen_range(2..=5usize);
        let target = rng.gen_range(2..=4usize);
        let images: Vec<Vec<GaussQ>> = (0..arity)
            .map(|_| {
                (0..target)
                    .map(|_| GaussQ::new(rat(rng.gen_range(-3..=3), 1), rat(rng.gen_range(-2..=2), 1)))
                    .collect()
            })
            .collect();
        let da = rng.gen_range(1..=2usize);
        let db = rng.gen_range(1..=2usize);
        let a = random_poly(&mut rng, arity, da);
        let b = random_poly(&mut rng, arity, db);
        let lhs = a.mul(&b).unwrap().substitute(&images, target).unwrap();
        let rhs = a
            .substitute(&images, target)
            .unwrap()
            .mul(&b.substitute(&images, target).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn harmonic_dimensions_across_the_grid() {
    // dim H_{n,d} = C(n+d,n) − C(n+d−2,n) for 1 ≤ n ≤ 6, 1 ≤ d ≤ 6, exactly.
    for n in 1..=6usize {
        let w = QuadraticFormSpec::standard(GaussField, n);
        for d in 1..=6usize {
            let basis = harmonic_basis(n, d, &w).unwrap();
            assert_eq!(basis.len(), harmonic_dim(n, d), "(n, d) = ({}, {})", n, d);
        }
    }
}

#[test]
fn beta_is_injective_on_harmonics() {
    // For d ≤ 5 the bridge has full rank on a harmonic basis.
    let f = TowerField::qi();
    let w = isorank::ternary::uvz_form_spec(&f);
    for d in 1..=5usize {
        let basis = harmonic_basis(2, d, &w).unwrap();
        assert_eq!(basis.len(), 2 * d + 1);
        let m = isorank::MatrixExact::from_fn(f.clone(), 2 * d + 1, basis.len(), |i, j| {
            beta(&UVZForm(basis[j].clone())).coeffs[i].clone()
        });
        assert_eq!(m.rank(), 2 * d + 1, "beta drops rank at d = {}", d);
    }
}

#[test]
fn comas_seiguer_consistency_on_random_binary_forms() {
    use rand::{Rng, SeedableRng};
    let f = TowerField::qi();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..60 {
        let d = rng.gen_range(1..=5usize);
        let dd = 2 * d;
        let coeffs: Vec<_> = (0..=dd)
            .map(|_| {
                f.from_gauss(GaussQ::new(
                    rat(rng.gen_range(-5..=5), 1),
                    rat(rng.gen_range(-5..=5), 1),
                ))
            })
            .collect();
        let b = BinaryForm::new(dd, coeffs);
        if b.is_zero(&f) {
            continue;
        }
        let info = binary_rank(&b, &f).unwrap();
        let (r, r0) = (info.rank, info.r0);
        assert!(r == r0 || r == dd - r0 + 2);
        if r == r0 {
            assert!(r <= d + 1);
        } else {
            assert!(r >= d + 1);
        }
    }
}

#[test]
fn cli_reports_are_deterministic() {
    // Identical argv + seed must give byte-identical JSON reports.
    use std::process::Command;
    let exe = env!("CARGO_BIN_EXE_isorank");
    let run = || {
        Command::new(exe)
            .args([
                "secant-dim", "--n", "3", "--d", "3", "--grid", "--seed", "5",
                "--format", "json",
            ])
            .output()
            .expect("run binary")
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emitted_decompositions_reverify_through_the_cli() {
    // Round trip: decompose → verify exits 0 on the emitted JSON.
    use std::process::Command;
    let exe = env!("CARGO_BIN_EXE_isorank");
    let dir = std::env::temp_dir().join("isorank-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let poly = dir.join("vz.json");
    std::fs::write(
        &poly,
        r#"{"field":"QI","arity":3,"degree":2,
            "terms":[{"exp":[1,0,1],"re":"1"},{"exp":[0,1,1],"re":"0","im":"-1"}]}"#,
    )
    .unwrap();
    let out = Command::new(exe)
        .args(["decompose", "ternary"])
        .arg(&poly)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dec = dir.join("dec.json");
    std::fs::write(&dec, serde_json::to_string(&report["decomposition"]).unwrap()).unwrap();
    let verify = Command::new(exe)
        .arg("verify")
        .arg(&poly)
        .arg(&dec)
        .output()
        .unwrap();
    assert!(verify.status.success(), "verify must exit 0");
}
