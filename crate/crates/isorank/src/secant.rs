//! Secant-dimension experiments over large prime fields, and exact
//! postulation of point schemes on quadrics.
//!
//! Dimensions of secant varieties of the isotropic Veronese are measured by
//! stacking Terracini tangent spaces at seeded random quadric points over
//! F_p and taking ranks. Specialization can only undershoot the complex
//! dimension, never overshoot, so the acceptance predicate is "the maximum
//! over retries matches the closed form". Postulation of unions of double
//! points, truncated double points, and linear sections is computed from
//! explicit linear functionals, replacing ideal saturation.

use crate::apolarity::{tangent_space, LinearForm, QuadraticFormSpec};
use crate::field::{Field, FpField};
use crate::matrix::{MatrixExact, RowEchelon};
use crate::poly::{binomial, MonomialIndex, MultiPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod appendix;

#[derive(thiserror::Error, Debug)]
pub enum SecantError {
    #[error("standard presentation unsolvable over F_{0} (p ≡ 3 mod 4); use the hyperbolic one")]
    PresentationUnsolvable(u64),
    #[error("point sampling failed after {0} attempts")]
    SamplingFailed(usize),
    #[error("scheme component invalid: {0}")]
    InvalidScheme(String),
    #[error("characteristic failure: harmonic kernel has dimension {got}, expected {expected}")]
    CharacteristicFailure { got: usize, expected: usize },
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
}

// ---------------------------------------------------------------------------
// Closed-form dimension counts.
// ---------------------------------------------------------------------------

/// f_{n,d} = h⁰(O_{Q_n}(d)) = C(n+d, n) − C(n+d−2, n) = dim H_{n,d}.
pub fn f_dim(n: usize, d: usize) -> usize {
    if d == 0 {
        return 1;
    }
    if d == 1 {
        return n + 1;
    }
    binomial(n + d, n) - binomial(n + d - 2, n)
}

/// dim σ_r(Isot_{n,d}): min{rn−1, f−1} for d ≥ 3; the defective formula
/// rn − C(r−1,2) − 1 for d = 2, r ≤ n, filling at r ≥ n+1.
pub fn expected_secant_dim(n: usize, d: usize, r: usize) -> usize {
    assert!(n >= 1 && d >= 2 && r >= 1);
    if d == 2 {
        if r <= n {
            r * n - binomial(r - 1, 2) - 1
        } else {
            f_dim(n, 2) - 1
        }
    } else {
        (r * n - 1).min(f_dim(n, d) - 1)
    }
}

/// The generic isotropic rank: n+1 for quadrics, ⌈f_{n,d}/n⌉ for d ≥ 3.
pub fn generic_irk(n: usize, d: usize) -> usize {
    assert!(n >= 1 && d >= 2);
    if d == 2 {
        n + 1
    } else {
        f_dim(n, d).div_ceil(n)
    }
}

/// k_n = ⌊f_{n,3}/n⌋ and δ_n = f_{n,3} − n·k_n.
pub fn cubic_k_delta(n: usize) -> (usize, usize) {
    let f = f_dim(n, 3);
    (f / n, f % n)
}

/// The closed forms of k_n and δ_n in terms of n = 6p + r.
pub fn cubic_k_delta_closed_form(n: usize) -> (usize, usize) {
    let p = n / 6;
    let r = n % 6;
    let k = match r {
        0 => 6 * p * p + 6 * p,
        1 => 6 * p * p + 8 * p + 2,
        2 => 6 * p * p + 10 * p + 3,
        3 => 6 * p * p + 12 * p + 5,
        4 => 6 * p * p + 14 * p + 7,
        _ => 6 * p * p + 16 * p + 10,
    };
    let d = match r {
        0 => 5 * p,
        1 => 0,
        2 => 3 * p + 1,
        3 => 2 * p + 1,
        4 => 3 * p + 2,
        _ => 0,
    };
    (k, d)
}

/// The arithmetic side conditions of the inductive step for d ≥ 4.
#[derive(Clone, Debug)]
pub struct HoraceParameters {
    pub u: usize,
    pub eps: usize,
    pub k_n: usize,
    pub delta_n: usize,
    /// (1): (n−1)ε + u ≤ f_{n−1,d−1}
    pub check1: bool,
    /// (2): f_{n,d−2} ≤ (r−u−ε)n
    pub check2: bool,
    /// (3): r − u − ε ≥ 0
    pub check3: bool,
    /// (4): u ≥ ε, under the hypothesis r ≥ ⌊f_{n,d}/n⌋ (None otherwise)
    pub check4: Option<bool>,
    /// (5): r − u − ε ≥ n+1, under d = 4 and n ≥ 9 (None otherwise)
    pub check5: Option<bool>,
}

/// u and ε from rn − (n−1)u − ε = f_{n,d−1} with 0 ≤ ε < n−1, plus the
/// boolean conclusions of the numerical lemma under their hypotheses.
pub fn horace_parameters(n: usize, d: usize, r: usize) -> Result<HoraceParameters, SecantError> {
    if n < 2 || d < 2 {
        return Err(SecantError::OutOfRange(format!("n={} d={}", n, d)));
    }
    let (k_n, delta_n) = cubic_k_delta(n);
    let lower = f_dim(n, d - 1);
    if r * n < lower {
        return Err(SecantError::OutOfRange(format!(
            "rn = {} below f(n, d-1) = {}",
            r * n,
            lower
        )));
    }
    let excess = r * n - lower;
    let u = excess / (n - 1);
    let eps = excess % (n - 1);
    let check1 = (n - 1) * eps + u <= f_dim(n - 1, d - 1);
    let check3_signed = r as i64 - u as i64 - eps as i64;
    let check3 = check3_signed >= 0;
    let check2 = check3 && f_dim(n, d - 2) <= (r - u - eps) * n;
    let check4 = if r >= f_dim(n, d) / n {
        Some(u >= eps)
    } else {
        None
    };
    let check5 = if d == 4 && n >= 9 {
        Some(check3 && r - u - eps >= n + 1)
    } else {
        None
    };
    Ok(HoraceParameters {
        u,
        eps,
        k_n,
        delta_n,
        check1,
        check2,
        check3,
        check4,
        check5,
    })
}

// ---------------------------------------------------------------------------
// Quadrics over F_p and point sampling.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Presentation {
    /// x_0² + x_1² + … + x_n² (needs −1 a square mod p).
    Standard,
    /// x_0x_1 + x_2² + … + x_n² (always solvable).
    Hyperbolic,
}

/// A quadric over F_p with its Gram matrix and sampling helpers.
#[derive(Clone, Debug)]
pub struct FpQuadric {
    pub field: FpField,
    pub n: usize,
    pub gram: MatrixExact<FpField>,
}

impl FpQuadric {
    pub fn new(n: usize, p: u64, presentation: Presentation) -> Result<Self, SecantError> {
        let field = FpField::new(p);
        match presentation {
            Presentation::Standard => {
                if field.sqrt(p - 1).is_none() {
                    return Err(SecantError::PresentationUnsolvable(p));
                }
                Ok(FpQuadric {
                    field,
                    n,
                    gram: MatrixExact::identity(field, n + 1),
                })
            }
            Presentation::Hyperbolic => {
                let mut gram = MatrixExact::zeros(field, n + 1, n + 1);
                let half = field.inv(&2).unwrap();
                *gram.at_mut(0, 1) = half;
                *gram.at_mut(1, 0) = half;
                for j in 2..=n {
                    *gram.at_mut(j, j) = 1;
                }
                Ok(FpQuadric { field, n, gram })
            }
        }
    }

    pub fn form_spec(&self) -> QuadraticFormSpec<FpField> {
        QuadraticFormSpec::from_gram(self.field, self.gram.clone())
    }

    pub fn value(&self, x: &[u64]) -> u64 {
        let f = &self.field;
        let mut acc = 0u64;
        for i in 0..=self.n {
            for j in 0..=self.n {
                acc = f.add(&acc, &f.mul(&x[i], &f.mul(self.gram.at(i, j), &x[j])));
            }
        }
        acc
    }

    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let f = &self.field;
        let mut acc = 0u64;
        for i in 0..=self.n {
            for j in 0..=self.n {
                acc = f.add(&acc, &f.mul(&x[i], &f.mul(self.gram.at(i, j), &y[j])));
            }
        }
        acc
    }

    /// A seeded point with q(P) = 0, P ≠ 0, via the presentation's
    /// parametrization.
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Result<Vec<u64>, SecantError> {
        let p = self.field.p;
        let f = &self.field;
        let identityish = (0..=self.n).all(|j| *self.gram.at(j, j) == 1);
        if identityish {
            // Standard: solve x_0² = −(t_1² + … + t_n²).
            for _ in 0..200 {
                let tail: Vec<u64> = (0..self.n).map(|_| rng.gen_range(0..p)).collect();
                let s: u64 = tail.iter().fold(0u64, |acc, t| f.add(&acc, &f.mul(t, t)));
                if let Some(x0) = f.sqrt(f.neg(&s)) {
                    let mut pt = vec![x0];
                    pt.extend(tail);
                    if pt.iter().any(|c| *c != 0) {
                        return Ok(pt);
                    }
                }
            }
            return Err(SecantError::SamplingFailed(200));
        }
        // Hyperbolic: x_0 = 1, x_1 = −Σ t_i².
        if self.n == 1 {
            // Only the two coordinate points up to scale.
            return Ok(if rng.gen_bool(0.5) {
                vec![1, 0]
            } else {
                vec![0, 1]
            });
        }
        let tail: Vec<u64> = (2..=self.n).map(|_| rng.gen_range(0..p)).collect();
        let s: u64 = tail.iter().fold(0u64, |acc, t| f.add(&acc, &f.mul(t, t)));
        let mut pt = vec![1, f.neg(&s)];
        pt.extend(tail);
        // Random rescale keeps the distribution spread out projectively.
        let c = rng.gen_range(1..p);
        Ok(pt.into_iter().map(|x| f.mul(&x, &c)).collect())
    }

    /// A point on the intersection of the quadric with the column space of
    /// `basis` (a parametrized linear subspace), by intersecting with a
    /// random line in the subspace.
    pub fn random_point_in_subspace(
        &self,
        basis: &[Vec<u64>],
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<u64>, SecantError> {
        let p = self.field.p;
        let f = &self.field;
        let dim = basis.len();
        let combine = |c: &[u64]| -> Vec<u64> {
            let mut v = vec![0u64; self.n + 1];
            for (ck, bk) in c.iter().zip(basis) {
                for j in 0..=self.n {
                    v[j] = f.add(&v[j], &f.mul(ck, &bk[j]));
                }
            }
            v
        };
        for _ in 0..400 {
            let c1: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..p)).collect();
            let c2: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..p)).collect();
            let y1 = combine(&c1);
            let y2 = combine(&c2);
            let a = self.value(&y2);
            if a == 0 {
                if y2.iter().any(|v| *v != 0) {
                    return Ok(y2);
                }
                continue;
            }
            let b = self.pairing(&y1, &y2);
            let c0 = self.value(&y1);
            let disc = f.sub(&f.mul(&b, &b), &f.mul(&a, &c0));
            let Some(root) = f.sqrt(disc) else { continue };
            let t = f.mul(&f.add(&f.neg(&b), &root), &f.inv(&a).unwrap());
            let pt: Vec<u64> = y1
                .iter()
                .zip(&y2)
                .map(|(u, v)| f.add(u, &f.mul(&t, v)))
                .collect();
            if pt.iter().any(|v| *v != 0) {
                debug_assert_eq!(self.value(&pt), 0);
                return Ok(pt);
            }
        }
        Err(SecantError::SamplingFailed(400))
    }

    /// Basis of the tangent space at a quadric point: kernel of Pᵀ·Gram.
    pub fn tangent_basis(&self, point: &[u64]) -> Vec<Vec<u64>> {
        let f = &self.field;
        let row: Vec<u64> = (0..=self.n)
            .map(|j| {
                let mut acc = 0u64;
                for i in 0..=self.n {
                    acc = f.add(&acc, &f.mul(&point[i], self.gram.at(i, j)));
                }
                acc
            })
            .collect();
        MatrixExact::from_rows(*f, vec![row]).rank_kernel().kernel
    }
}

// ---------------------------------------------------------------------------
// Terracini dimensions.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub p: u64,
    pub seed: u64,
    pub retries: usize,
}

impl ExperimentConfig {
    pub fn new(n: usize, d: usize, r: usize) -> Self {
        ExperimentConfig {
            n,
            d,
            r,
            p: 32003,
            seed: 0,
            retries: 3,
        }
    }
}

/// Ranks of the stacked tangent spaces after 1, 2, …, rmax points: one
/// incremental elimination pass serves every r at once.
pub fn terracini_stream(
    n: usize,
    d: usize,
    p: u64,
    seed: u64,
    rmax: usize,
) -> Result<Vec<usize>, SecantError> {
    let quadric = FpQuadric::new(n, p, Presentation::Hyperbolic)?;
    let w = quadric.form_spec();
    let idx = MonomialIndex::new(n + 1, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ech = RowEchelon::new(quadric.field, idx.len());
    let mut out = Vec::with_capacity(rmax);
    for _ in 0..rmax {
        let pt = quadric.random_point(&mut rng)?;
        let l = LinearForm::<FpField>::new(pt);
        let polys = tangent_space(&l, d, &w).expect("sampled point is isotropic");
        for poly in polys {
            ech.push(poly.to_dense(&idx));
        }
        out.push(ech.rank());
    }
    Ok(out)
}

/// dim σ_r(Isot_{n,d}) measured over F_p: the rank of the r·n stacked
/// tangent generators minus one, maximized over seeded retries.
pub fn terracini_dimension(cfg: &ExperimentConfig) -> Result<usize, SecantError> {
    let mut best = 0usize;
    for attempt in 0..cfg.retries.max(1) {
        let ranks = terracini_stream(
            cfg.n,
            cfg.d,
            cfg.p,
            cfg.seed.wrapping_add(attempt as u64),
            cfg.r,
        )?;
        let dim = ranks[cfg.r - 1] - 1;
        best = best.max(dim);
        if best == expected_secant_dim(cfg.n, cfg.d, cfg.r) {
            break;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Postulation of point schemes on quadrics.
// ---------------------------------------------------------------------------

/// One component of a 0-dimensional scheme on the quadric.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub enum SchemeComponent {
    /// The evaluation functional at a quadric point.
    SimplePoint { point: Vec<u64> },
    /// Evaluation plus every tangential first derivative (length n).
    DoublePoint { point: Vec<u64> },
    /// Evaluation plus the listed tangent directions (length 1 + #dirs).
    PartialDoublePoint {
        point: Vec<u64>,
        directions: Vec<Vec<u64>>,
    },
    /// The section of the quadric cut by the given linear forms: the
    /// restriction of f must be a multiple of the restricted quadric.
    LinearSection { forms: Vec<Vec<u64>> },
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SchemeSpec {
    pub n: usize,
    pub p: u64,
    pub presentation: Presentation,
    pub components: Vec<SchemeComponent>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PostulationReport {
    /// h⁰(I_{X,Q}(d)).
    pub h0: usize,
    /// Independent conditions imposed on H_{n,d} = f(n,d) − h0.
    pub conditions_rank: usize,
    /// dim H_{n,d}.
    pub ambient_dim: usize,
}

/// Length (degree) of the scheme, for expected counts.
pub fn scheme_length(s: &SchemeSpec) -> usize {
    s.components
        .iter()
        .map(|c| match c {
            SchemeComponent::SimplePoint { .. } => 1,
            SchemeComponent::DoublePoint { .. } => s.n,
            SchemeComponent::PartialDoublePoint { directions, .. } => 1 + directions.len(),
            SchemeComponent::LinearSection { .. } => 0,
        })
        .sum()
}

/// h⁰ of the ideal sheaf of the scheme in degree d: the dimension of
/// {f ∈ R_{n,d} : all conditions vanish} modulo multiples of the quadric.
/// Asserts the harmonic kernel has dimension f(n,d) over the chosen prime.
pub fn postulation_check(s: &SchemeSpec, d: usize) -> Result<PostulationReport, SecantError> {
    assert!(d >= 1);
    let quadric = FpQuadric::new(s.n, s.p, s.presentation)?;
    let f = quadric.field;
    let n1 = s.n + 1;
    let idx = MonomialIndex::new(n1, d);
    let ambient_dim = f_dim(s.n, d);

    // Characteristic sanity: the harmonic kernel must have the right size.
    if d >= 2 {
        let lo = MonomialIndex::new(n1, d - 2);
        let omega = quadric.form_spec().omega_poly();
        let mut c = MatrixExact::zeros(f, lo.len(), idx.len());
        for col in 0..idx.len() {
            let mono = MultiPoly::monomial(f, idx.exp(col), f.one());
            let img = crate::apolarity::contract(&omega, &mono).expect("degree ok");
            for (e, v) in &img.terms {
                *c.at_mut(lo.rank(e), col) = *v;
            }
        }
        let got = idx.len() - c.rank();
        if got != ambient_dim {
            return Err(SecantError::CharacteristicFailure {
                got,
                expected: ambient_dim,
            });
        }
    }

    let mut ech = RowEchelon::new(f, idx.len());
    let eval_row = |point: &[u64]| -> Vec<u64> {
        idx.iter()
            .map(|e| {
                let mut acc = 1u64;
                for (j, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        acc = f.mul(&acc, &point[j]);
                    }
                }
                acc
            })
            .collect()
    };
    let deriv_row = |point: &[u64], dir: &[u64]| -> Vec<u64> {
        // ∂_v f (P) = Σ_j v_j ∂_j f(P).
        idx.iter()
            .map(|e| {
                let mut acc = 0u64;
                for j in 0..n1 {
                    if e[j] == 0 || dir[j] == 0 {
                        continue;
                    }
                    let mut t = f.mul(&dir[j], &f.from_i64(e[j] as i64));
                    for (jj, &k) in e.iter().enumerate() {
                        let k = if jj == j { k - 1 } else { k };
                        for _ in 0..k {
                            t = f.mul(&t, &point[jj]);
                        }
                    }
                    acc = f.add(&acc, &t);
                }
                acc
            })
            .collect()
    };

    for comp in &s.components {
        match comp {
            SchemeComponent::SimplePoint { point } => {
                check_on_quadric(&quadric, point)?;
                ech.push(eval_row(point));
            }
            SchemeComponent::DoublePoint { point } => {
                check_on_quadric(&quadric, point)?;
                ech.push(eval_row(point));
                for v in quadric.tangent_basis(point) {
                    ech.push(deriv_row(point, &v));
                }
            }
            SchemeComponent::PartialDoublePoint { point, directions } => {
                check_on_quadric(&quadric, point)?;
                // Directions must be tangent and independent modulo the point.
                let mut span = RowEchelon::new(f, n1);
                span.push(point.clone());
                for v in directions {
                    if quadric.pairing(point, v) != 0 {
                        return Err(SecantError::InvalidScheme(
                            "direction not tangent to the quadric".into(),
                        ));
                    }
                    if !span.push(v.clone()) {
                        return Err(SecantError::InvalidScheme(
                            "directions dependent modulo the support point".into(),
                        ));
                    }
                }
                ech.push(eval_row(point));
                for v in directions {
                    ech.push(deriv_row(point, v));
                }
            }
            SchemeComponent::LinearSection { forms } => {
                for row in section_condition_rows(&quadric, forms, d, &idx)? {
                    ech.push(row);
                }
            }
        }
    }
    let solution_dim = idx.len() - ech.rank();
    let lower = if d >= 2 {
        MonomialIndex::new(n1, d - 2).len()
    } else {
        0
    };
    let h0 = solution_dim - lower;
    Ok(PostulationReport {
        h0,
        conditions_rank: ambient_dim - h0,
        ambient_dim,
    })
}

fn check_on_quadric(q: &FpQuadric, point: &[u64]) -> Result<(), SecantError> {
    if point.len() != q.n + 1 || point.iter().all(|c| *c == 0) {
        return Err(SecantError::InvalidScheme("bad point".into()));
    }
    if q.value(point) != 0 {
        return Err(SecantError::InvalidScheme(
            "point does not lie on the quadric".into(),
        ));
    }
    Ok(())
}

/// Conditions imposed by a linear section: the restriction of f to the
/// subspace must be a multiple of the restricted quadric, expressed through
/// a basis of functionals annihilating q_Λ · R(Λ)_{d−2}.
fn section_condition_rows(
    quadric: &FpQuadric,
    forms: &[Vec<u64>],
    d: usize,
    idx: &MonomialIndex,
) -> Result<Vec<Vec<u64>>, SecantError> {
    let f = quadric.field;
    let n1 = quadric.n + 1;
    let k = forms.len();
    if k == 0 || forms.iter().any(|r| r.len() != n1) {
        return Err(SecantError::InvalidScheme("bad section forms".into()));
    }
    let cut = MatrixExact::from_rows(f, forms.to_vec());
    let kernel = cut.rank_kernel();
    if kernel.rank != k {
        return Err(SecantError::InvalidScheme(
            "section forms are dependent".into(),
        ));
    }
    let basis = kernel.kernel; // columns of the parametrization, length n1
    let m1 = basis.len(); // subspace coordinate count
    if m1 < 2 {
        return Err(SecantError::InvalidScheme("section too small".into()));
    }
    // Restricted Gram: MᵀBM.
    let mmat = MatrixExact::from_fn(f, n1, m1, |i, j| basis[j][i]);
    let bm = quadric.gram.mul(&mmat);
    let restricted_gram = mmat.transpose().mul(&bm);
    if f.is_zero(&restricted_gram.det()) {
        return Err(SecantError::InvalidScheme(
            "restricted quadric is degenerate; resample the section".into(),
        ));
    }
    // Restriction matrix R_{n,d} → R(Λ)_d by substituting x = M y.
    let sub_images: Vec<Vec<u64>> = (0..n1).map(|i| (0..m1).map(|j| basis[j][i]).collect()).collect();
    let tgt = MonomialIndex::new(m1, d);
    let mut restr = MatrixExact::zeros(f, tgt.len(), idx.len());
    for col in 0..idx.len() {
        let mono = MultiPoly::monomial(f, idx.exp(col), 1u64);
        let img = mono.substitute(&sub_images, m1).expect("arity ok");
        for (e, c) in &img.terms {
            *restr.at_mut(tgt.rank(e), col) = *c;
        }
    }
    // q_Λ as a polynomial and the multiplication matrix N: R(Λ)_{d−2} → R(Λ)_d.
    let qspec = QuadraticFormSpec::from_gram(f, restricted_gram);
    // The subspace points' quadric is yᵀ(MᵀBM)y; as a polynomial its Gram
    // is exactly the restricted Gram.
    let qpoly = qspec.omega_poly();
    let ann_rows: Vec<Vec<u64>> = if d >= 2 {
        let lo = MonomialIndex::new(m1, d - 2);
        let mut nmat = MatrixExact::zeros(f, tgt.len(), lo.len());
        for col in 0..lo.len() {
            let mono = MultiPoly::monomial(f, lo.exp(col), 1u64);
            let prod = qpoly.mul(&mono).expect("arity ok");
            for (e, c) in &prod.terms {
                *nmat.at_mut(tgt.rank(e), col) = *c;
            }
        }
        let ker = nmat.transpose().rank_kernel();
        if ker.rank != lo.len() {
            return Err(SecantError::InvalidScheme(
                "restricted quadric multiplication not injective".into(),
            ));
        }
        ker.kernel
    } else {
        // d = 1: the condition is plain vanishing on the subspace.
        (0..tgt.len())
            .map(|r| {
                let mut v = vec![0u64; tgt.len()];
                v[r] = 1;
                v
            })
            .collect()
    };
    // Condition rows: wᵀ · Restr for each annihilator w.
    let mut rows = Vec::with_capacity(ann_rows.len());
    for w in ann_rows {
        let mut row = vec![0u64; idx.len()];
        for (t, wc) in w.iter().enumerate() {
            if *wc == 0 {
                continue;
            }
            for c in 0..idx.len() {
                let rc = restr.at(t, c);
                if *rc == 0 {
                    continue;
                }
                row[c] = f.add(&row[c], &f.mul(wc, rc));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Scheme builders used by the appendix suite and the CLI.
// ---------------------------------------------------------------------------

/// Samples k independent random linear forms (a codimension-k subspace).
pub fn random_section_forms(
    quadric: &FpQuadric,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<u64>> {
    let p = quadric.field.p;
    loop {
        let forms: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..=quadric.n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let m = MatrixExact::from_rows(quadric.field, forms.clone());
        if m.rank() == k {
            // Reject sections with a degenerate restricted quadric.
            let kernel = m.rank_kernel().kernel;
            let n1 = quadric.n + 1;
            let m1 = kernel.len();
            let mmat = MatrixExact::from_fn(quadric.field, n1, m1, |i, j| kernel[j][i]);
            let rg = mmat.transpose().mul(&quadric.gram.mul(&mmat));
            if !quadric.field.is_zero(&rg.det()) {
                return forms;
            }
        }
    }
}

/// The parametrization basis of the subspace cut by the forms.
pub fn section_basis(quadric: &FpQuadric, forms: &[Vec<u64>]) -> Vec<Vec<u64>> {
    MatrixExact::from_rows(quadric.field, forms.to_vec())
        .rank_kernel()
        .kernel
}

/// Distinct (projectively) random points on the quadric inside a subspace.
pub fn sample_points_on_section(
    quadric: &FpQuadric,
    basis: &[Vec<u64>],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<u64>>, SecantError> {
    let f = quadric.field;
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut guard = 0;
    while out.len() < count {
        guard += 1;
        if guard > 200 * count + 400 {
            return Err(SecantError::SamplingFailed(guard));
        }
        let pt = quadric.random_point_in_subspace(basis, rng)?;
        let normalized = normalize_fp(&f, &pt);
        if !out.iter().any(|q| normalize_fp(&f, q) == normalized) {
            out.push(pt);
        }
    }
    Ok(out)
}

fn normalize_fp(f: &FpField, v: &[u64]) -> Vec<u64> {
    let Some(pos) = v.iter().position(|c| *c != 0) else {
        return v.to_vec();
    };
    let inv = f.inv(&v[pos]).unwrap();
    v.iter().map(|c| f.mul(c, &inv)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_formulas() {
        assert_eq!(f_dim(2, 3), 7);
        assert_eq!(f_dim(3, 4), 25);
        assert_eq!(f_dim(16, 3), 952);
        assert_eq!(expected_secant_dim(4, 2, 3), 10);
        assert_eq!(expected_secant_dim(3, 4, 5), 14);
        assert_eq!(generic_irk(2, 3), 4);
        assert_eq!(generic_irk(4, 2), 5);
    }

    #[test]
    fn cubic_counts() {
        assert_eq!(cubic_k_delta(6), (12, 5));
        for n in 1..=60 {
            assert_eq!(cubic_k_delta(n), cubic_k_delta_closed_form(n), "n = {}", n);
        }
        for n in 12..=30 {
            let (kn, _) = cubic_k_delta(n);
            let (kn6, _) = cubic_k_delta(n - 6);
            assert_eq!(kn - kn6, 2 * n);
        }
        for n in 13..=30 {
            let (kn, _) = cubic_k_delta(n);
            let (kn6, _) = cubic_k_delta(n - 6);
            let (kn12, _) = cubic_k_delta(n - 12);
            assert_eq!(kn + kn12 - 2 * kn6, 12);
        }
    }

    #[test]
    fn presentation_solvability() {
        // 32003 ≡ 3 (mod 4): the standard presentation must be refused.
        assert!(matches!(
            FpQuadric::new(4, 32003, Presentation::Standard),
            Err(SecantError::PresentationUnsolvable(32003))
        ));
        // 104729 ≡ 1 (mod 4): fine, and points verify.
        let q = FpQuadric::new(4, 104729, Presentation::Standard).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let pt = q.random_point(&mut rng).unwrap();
            assert_eq!(q.value(&pt), 0);
        }
        // Hyperbolic always works.
        let q = FpQuadric::new(4, 32003, Presentation::Hyperbolic).unwrap();
        for _ in 0..5 {
            let pt = q.random_point(&mut rng).unwrap();
            assert_eq!(q.value(&pt), 0);
        }
        // n = 1: the two coordinate points.
        let q1 = FpQuadric::new(1, 32003, Presentation::Hyperbolic).unwrap();
        let pt = q1.random_point(&mut rng).unwrap();
        assert!(pt == vec![1, 0] || pt == vec![0, 1]);
    }

    #[test]
    fn terracini_small_cases() {
        // One tangent space has dimension n, so dim σ_1 = n − 1.
        let cfg = ExperimentConfig::new(3, 3, 1);
        assert_eq!(terracini_dimension(&cfg).unwrap(), 2);
        // The quadratic defective case (n=4, d=2, r=3) → 10.
        let cfg = ExperimentConfig::new(4, 2, 3);
        assert_eq!(terracini_dimension(&cfg).unwrap(), 10);
        // (n=4, d=3, r=6) → min(24, 30) − 1 = 23.
        let cfg = ExperimentConfig::new(4, 3, 6);
        assert_eq!(terracini_dimension(&cfg).unwrap(), 23);
    }

    #[test]
    fn postulation_small_cases() {
        // Empty scheme: h0 = f(n,d).
        let s = SchemeSpec {
            n: 3,
            p: 32003,
            presentation: Presentation::Hyperbolic,
            components: vec![],
        };
        let rep = postulation_check(&s, 3).unwrap();
        assert_eq!(rep.h0, f_dim(3, 3));
        assert_eq!(rep.conditions_rank, 0);
        // One double point on Q_2 in degree 1: h0 = 3 − 2 = 1.
        let quadric = FpQuadric::new(2, 32003, Presentation::Hyperbolic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pt = quadric.random_point(&mut rng).unwrap();
        let s = SchemeSpec {
            n: 2,
            p: 32003,
            presentation: Presentation::Hyperbolic,
            components: vec![SchemeComponent::DoublePoint { point: pt }],
        };
        let rep = postulation_check(&s, 1).unwrap();
        assert_eq!(rep.h0, 1);
        assert_eq!(rep.conditions_rank, 2);
    }

    #[test]
    fn horace_parameter_checks() {
        let hp = horace_parameters(6, 4, 23).unwrap();
        assert!(hp.check1 && hp.check2 && hp.check3);
        // All five conclusions over the full admissible range 4 ≤ n ≤ 12,
        // 4 ≤ d ≤ 6 (the acceptance suite covers the larger grid).
        for n in 4..=12usize {
            for d in 4..=6usize {
                let rmax = f_dim(n, d).div_ceil(n);
                for r in 1..=rmax {
                    if r * n < f_dim(n, d - 1) {
                        continue;
                    }
                    let hp = horace_parameters(n, d, r).unwrap();
                    assert!(hp.check1, "check1 at {:?}", (n, d, r));
                    assert!(hp.check2, "check2 at {:?}", (n, d, r));
                    assert!(hp.check3, "check3 at {:?}", (n, d, r));
                    if let Some(c4) = hp.check4 {
                        assert!(c4, "check4 at {:?}", (n, d, r));
                    }
                    if let Some(c5) = hp.check5 {
                        assert!(c5, "check5 at {:?}", (n, d, r));
                    }
                }
            }
        }
    }

    #[test]
    fn section_conditions_count() {
        // A codimension-1 section of Q_3 in degree 2: conditions are the
        // harmonic dimension of the restricted quadric's space, f(2,2) = 5.
        let quadric = FpQuadric::new(3, 32003, Presentation::Hyperbolic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let forms = random_section_forms(&quadric, 1, &mut rng);
        let s = SchemeSpec {
            n: 3,
            p: 32003,
            presentation: Presentation::Hyperbolic,
            components: vec![SchemeComponent::LinearSection { forms }],
        };
        let rep = postulation_check(&s, 2).unwrap();
        assert_eq!(rep.conditions_rank, f_dim(2, 2));
        assert_eq!(rep.h0, f_dim(3, 2) - f_dim(2, 2));
    }
}
