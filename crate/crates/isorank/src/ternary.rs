//! Ternary harmonic forms via binary forms: the (u,v,z) coordinates, the
//! degree-doubling bridge β_d, Sylvester's catalecticant algorithm for
//! binary Waring ranks, and exact or floating decomposition of ternary
//! harmonics into powers of isotropic linear forms.
//!
//! The bridge sends u^a v^b z^c ↦ 2^c d! s^{d+a-b} t^{d-a+b}; it kills
//! multiples of z² − 4uv and is a bijection on harmonic representatives.
//! All decomposition coefficients are re-solved against the original form,
//! so the bridge normalization never leaks into results.

use crate::apolarity::{is_harmonic, LinearForm, QuadraticFormSpec};
use crate::decompose::{solve_power_coefficients, IsotropicDecomposition};
use crate::field::{rat, Field, FieldError, GaussQ, Rat, TowerElem, TowerField};
use crate::matrix::MatrixExact;
use crate::poly::{MonomialIndex, MultiPoly, PolyError};
use num::complex::Complex64;
use num::{BigInt, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(thiserror::Error, Debug)]
pub enum TernaryError {
    #[error("expected a ternary (arity 3) polynomial, got arity {0}")]
    NotTernary(usize),
    #[error("form is not harmonic")]
    NotHarmonic,
    #[error("zero input")]
    ZeroInput,
    #[error("no square-free kernel element found after {0} attempts")]
    NoSquareFreeKernel(usize),
    #[error("root finding did not converge")]
    RootFindingFailed,
    #[error("coefficient solve failed on the float path")]
    FloatSolveFailed,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Apolarity(#[from] crate::apolarity::ApolarityError),
    #[error(transparent)]
    Decompose(#[from] crate::decompose::DecomposeError),
}

/// A binary form Σ c_j s^{D-j} t^j by its coefficient vector c_0..c_D.
#[derive(Clone, Debug)]
pub struct BinaryForm<F: Field> {
    pub degree: usize,
    pub coeffs: Vec<F::Elem>,
}

impl<F: Field> PartialEq for BinaryForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.coeffs == other.coeffs
    }
}

impl<F: Field> BinaryForm<F> {
    pub fn new(degree: usize, coeffs: Vec<F::Elem>) -> Self {
        assert_eq!(coeffs.len(), degree + 1);
        BinaryForm { degree, coeffs }
    }

    pub fn zero(field: &F, degree: usize) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![field.zero(); degree + 1],
        }
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.coeffs.iter().all(|c| field.is_zero(c))
    }
}

/// A ternary form read in the coordinates (u, v, z) with
/// u = -(x0+ix1)/2, v = (x0-ix1)/2, z = x2, so that q2 = z² - 4uv.
#[derive(Clone, Debug)]
pub struct UVZForm<F: Field>(pub MultiPoly<F>);

impl<F: Field> PartialEq for UVZForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// Images of x0, x1, x2 as linear forms in (u, v, z).
fn x_to_uvz_images(fld: &TowerField) -> Vec<Vec<TowerElem>> {
    let i = fld.i();
    vec![
        // x0 = v - u
        vec![fld.from_i64(-1), fld.from_i64(1), fld.from_i64(0)],
        // x1 = i(u + v)
        vec![i.clone(), i, fld.from_i64(0)],
        // x2 = z
        vec![fld.from_i64(0), fld.from_i64(0), fld.from_i64(1)],
    ]
}

/// Images of u, v, z as linear forms in (x0, x1, x2).
fn uvz_to_x_images(fld: &TowerField) -> Vec<Vec<TowerElem>> {
    let half = fld.from_gauss(GaussQ::new(rat(1, 2), Rat::zero()));
    let ihalf = fld.from_gauss(GaussQ::new(Rat::zero(), rat(1, 2)));
    vec![
        // u = -(x0 + i x1)/2
        vec![fld.neg(&half), fld.neg(&ihalf), fld.from_i64(0)],
        // v = (x0 - i x1)/2
        vec![half, fld.neg(&ihalf), fld.from_i64(0)],
        // z = x2
        vec![fld.from_i64(0), fld.from_i64(0), fld.from_i64(1)],
    ]
}

/// Rewrites a ternary form in the (u, v, z) coordinates.
pub fn to_uvz(f: &MultiPoly<TowerField>) -> Result<UVZForm<TowerField>, TernaryError> {
    if f.arity != 3 {
        return Err(TernaryError::NotTernary(f.arity));
    }
    Ok(UVZForm(f.substitute(&x_to_uvz_images(&f.field), 3)?))
}

/// Inverse of [`to_uvz`]; exact round trip over Q(i).
pub fn from_uvz(g: &UVZForm<TowerField>) -> Result<MultiPoly<TowerField>, TernaryError> {
    if g.0.arity != 3 {
        return Err(TernaryError::NotTernary(g.0.arity));
    }
    Ok(g.0.substitute(&uvz_to_x_images(&g.0.field), 3)?)
}

fn factorial<F: Field>(field: &F, n: usize) -> F::Elem {
    let mut acc = field.one();
    for k in 2..=n as i64 {
        acc = field.mul(&acc, &field.from_i64(k));
    }
    acc
}

/// The bridge β_d on monomials: u^a v^b z^{d-a-b} ↦ 2^{d-a-b} d! s^{d+a-b} t^{d-a+b}.
pub fn beta<F: Field>(g: &UVZForm<F>) -> BinaryForm<F> {
    let f = &g.0.field;
    let d = g.0.degree;
    let mut out = BinaryForm::zero(f, 2 * d);
    let fact = factorial(f, d);
    for (e, c) in &g.0.terms {
        let (a, b, cz) = (e[0] as usize, e[1] as usize, e[2] as usize);
        let mut coeff = f.mul(c, &fact);
        for _ in 0..cz {
            coeff = f.mul(&coeff, &f.from_i64(2));
        }
        let j = d - a + b;
        out.coeffs[j] = f.add(&out.coeffs[j], &coeff);
    }
    out
}

/// The harmonic section of β: returns the unique harmonic (u,v,z)-form with
/// the given image, by inverting β on a harmonic basis.
pub fn beta_inverse<F: Field>(
    b: &BinaryForm<F>,
    field: &F,
) -> Result<UVZForm<F>, TernaryError> {
    assert!(b.degree % 2 == 0, "β images have even degree");
    let d = b.degree / 2;
    let w = uvz_form_spec(field);
    let basis = crate::apolarity::harmonic_basis(2, d, &w)?;
    debug_assert_eq!(basis.len(), 2 * d + 1);
    let m = MatrixExact::from_fn(field.clone(), 2 * d + 1, basis.len(), |i, j| {
        beta(&UVZForm(basis[j].clone())).coeffs[i].clone()
    });
    let sol = m
        .solve(&b.coeffs)
        .expect("β is bijective on harmonics");
    let mut acc = MultiPoly::zero(field.clone(), 3, d);
    for (j, c) in sol.iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        acc = acc.add(&basis[j].scale(c))?;
    }
    Ok(UVZForm(acc))
}

/// The quadratic form ω = α_z² − α_uα_v that plays the standard form's role
/// in (u, v, z) coordinates (its operator is ∂_z² − ∂_u∂_v).
pub fn uvz_form_spec<F: Field>(field: &F) -> QuadraticFormSpec<F> {
    let mut gram = MatrixExact::zeros(field.clone(), 3, 3);
    let mhalf = field.neg(
        &field
            .inv(&field.from_i64(2))
            .expect("characteristic 2 unsupported"),
    );
    *gram.at_mut(0, 1) = mhalf.clone();
    *gram.at_mut(1, 0) = mhalf;
    *gram.at_mut(2, 2) = field.one();
    QuadraticFormSpec::from_gram(field.clone(), gram)
}

/// The catalecticant Cat_k of a binary form: the matrix of
/// D_{1,k} → R_{1,D−k}, φ ↦ φ∘b, over monomial bases.
pub fn catalecticant<F: Field>(b: &BinaryForm<F>, k: usize, field: &F) -> MatrixExact<F> {
    let dd = b.degree;
    assert!(k <= dd);
    MatrixExact::from_fn(field.clone(), dd - k + 1, k + 1, |row, m| {
        // φ = α_s^{k-m} α_t^m applied to c_j s^{D-j} t^j lands on
        // s^{D-k-row} t^{row} when j = row + m.
        let j = row + m;
        let se = dd - j;
        let sk = k - m;
        if se < sk || j < m {
            return field.zero();
        }
        let mut c = b.coeffs[j].clone();
        for t in 0..sk {
            c = field.mul(&c, &field.from_i64((se - t) as i64));
        }
        for t in 0..m {
            c = field.mul(&c, &field.from_i64((j - t) as i64));
        }
        c
    })
}

fn kernel_to_binary<F: Field>(v: &[F::Elem]) -> BinaryForm<F> {
    BinaryForm {
        degree: v.len() - 1,
        coeffs: v.to_vec(),
    }
}

/// Univariate gcd (coefficients low-to-high), monic output.
fn poly_gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let trim = |v: &[F::Elem]| -> Vec<F::Elem> {
        let mut v = v.to_vec();
        while v.len() > 1 && field.is_zero(v.last().unwrap()) {
            v.pop();
        }
        v
    };
    let is_zero_poly =
        |v: &[F::Elem]| v.len() == 1 && field.is_zero(&v[0]);
    let mut a = trim(a);
    let mut b = trim(b);
    while !is_zero_poly(&b) {
        // r = a mod b
        let mut r = a.clone();
        while !is_zero_poly(&r) && r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = field
                .div(r.last().unwrap(), b.last().unwrap())
                .expect("nonzero lead");
            for j in 0..b.len() {
                let t = field.mul(&factor, &b[j]);
                r[j + shift] = field.sub(&r[j + shift], &t);
            }
            r = trim(&r);
        }
        a = b;
        b = r;
    }
    if is_zero_poly(&a) {
        return a;
    }
    let lead_inv = field.inv(a.last().unwrap()).expect("nonzero");
    a.iter().map(|c| field.mul(c, &lead_inv)).collect()
}

/// Square-freeness of a binary form, including the point at infinity.
pub fn is_square_free<F: Field>(b: &BinaryForm<F>, field: &F) -> bool {
    // Affine part A(z) = b(1, z) = Σ c_j z^j; the s-multiplicity is
    // deg b − deg A.
    let mut affine = b.coeffs.clone();
    while affine.len() > 1 && field.is_zero(affine.last().unwrap()) {
        affine.pop();
    }
    if field.is_zero(&affine[0]) && affine.len() == 1 {
        return false; // zero form
    }
    let s_mult = b.degree - (affine.len() - 1);
    if s_mult > 1 {
        return false;
    }
    if affine.len() == 1 {
        return true;
    }
    let deriv: Vec<F::Elem> = (1..affine.len())
        .map(|j| field.mul(&affine[j], &field.from_i64(j as i64)))
        .collect();
    poly_gcd(field, &affine, &deriv).len() == 1
}

/// Result of the Sylvester rank computation.
#[derive(Clone, Debug)]
pub struct BinaryRank<F: Field> {
    /// Least k with a nontrivial catalecticant kernel.
    pub r0: usize,
    pub rank: usize,
    /// The selected square-free kernel element of Cat_rank whose roots give
    /// the decomposition points (the first candidate).
    pub kernel_form: BinaryForm<F>,
    /// Remaining square-free kernel elements, used as fallbacks when hunting
    /// for roots that stay inside a quadratic tower.
    pub alternates: Vec<BinaryForm<F>>,
}

/// Sylvester's algorithm with the Comas–Seiguer dichotomy: the rank is r0
/// when Cat_{r0} has a square-free kernel element, and D − r0 + 2 otherwise.
pub fn binary_rank<F: Field>(b: &BinaryForm<F>, field: &F) -> Result<BinaryRank<F>, TernaryError> {
    if b.is_zero(field) {
        return Err(TernaryError::ZeroInput);
    }
    let dd = b.degree;
    let mut r0 = 0;
    let mut kernel: Vec<Vec<F::Elem>> = Vec::new();
    for k in 1..=dd {
        let rk = catalecticant(b, k, field).rank_kernel();
        if !rk.kernel.is_empty() {
            r0 = k;
            kernel = rk.kernel;
            break;
        }
    }
    assert!(r0 >= 1, "every nonzero binary form has r0 <= D");
    let mut cands = square_free_candidates(field, &kernel, 0x5e_ed);
    if !cands.is_empty() {
        let g = cands.remove(0);
        return Ok(BinaryRank {
            r0,
            rank: r0,
            kernel_form: g,
            alternates: cands,
        });
    }
    let rank = dd - r0 + 2;
    let rk = catalecticant(b, rank, field).rank_kernel();
    let mut cands = square_free_candidates(field, &rk.kernel, 0xbeef);
    if cands.is_empty() {
        return Err(TernaryError::NoSquareFreeKernel(50));
    }
    let g = cands.remove(0);
    Ok(BinaryRank {
        r0,
        rank,
        kernel_form: g,
        alternates: cands,
    })
}

/// Square-free elements of the kernel span in a deterministic candidate
/// order: basis vectors, then pairs with ±1 and ±i coefficients, then seeded
/// random small combinations (cap 50 attempts).
fn square_free_candidates<F: Field>(
    field: &F,
    kernel: &[Vec<F::Elem>],
    seed: u64,
) -> Vec<BinaryForm<F>> {
    let mut out: Vec<BinaryForm<F>> = Vec::new();
    let push = |v: &[F::Elem], out: &mut Vec<BinaryForm<F>>| {
        let g = kernel_to_binary::<F>(v);
        if !g.is_zero(field) && is_square_free(&g, field) && !out.contains(&g) {
            out.push(g);
        }
    };
    for v in kernel {
        push(v, &mut out);
    }
    let mut units = vec![field.one(), field.from_i64(-1)];
    if let Some(i) = field.imaginary_unit() {
        units.push(field.neg(&i));
        units.push(i);
    }
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            for u in &units {
                let v: Vec<F::Elem> = kernel[i]
                    .iter()
                    .zip(&kernel[j])
                    .map(|(a, b)| field.add(a, &field.mul(u, b)))
                    .collect();
                push(&v, &mut out);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..50 {
        let mut v = vec![field.zero(); kernel[0].len()];
        for kv in kernel {
            let c = field.from_i64(rng.gen_range(-5..=5));
            for (x, y) in v.iter_mut().zip(kv) {
                field.add_mul_assign(x, &c, y);
            }
        }
        push(&v, &mut out);
    }
    out
}

/// A decomposition of a binary form as Σ c_j (p_j s + q_j t)^D.
#[derive(Clone, Debug)]
pub enum BinaryDecomposition {
    Exact {
        field: TowerField,
        terms: Vec<(TowerElem, [TowerElem; 2])>,
    },
    Float {
        terms: Vec<(Complex64, [Complex64; 2])>,
        residual: f64,
    },
}

/// Exact roots of a square-free binary form of degree ≤ 2 over a tower
/// (adjoining one square root if needed); returns the points (p, q) of the
/// linear factors q·α_s − p·α_t.
fn exact_roots_low_degree(
    g: &BinaryForm<TowerField>,
    fld: &TowerField,
) -> Result<Option<(TowerField, Vec<[TowerElem; 2]>)>, TernaryError> {
    let mut affine = g.coeffs.clone();
    while affine.len() > 1 && fld.is_zero(affine.last().unwrap()) {
        affine.pop();
    }
    let s_mult = g.degree - (affine.len() - 1);
    let mut pts: Vec<[TowerElem; 2]> = Vec::new();
    if s_mult == 1 {
        // factor α_s ↔ point (0, 1), i.e. the form t.
        pts.push([fld.from_i64(0), fld.from_i64(1)]);
    }
    match affine.len() - 1 {
        0 => Ok(Some((fld.clone(), pts))),
        1 => {
            // a0 + a1 z = 0 → z0 = -a0/a1; point (1, z0).
            let z0 = fld.neg(&fld.div(&affine[0], &affine[1])?);
            pts.push([fld.from_i64(1), z0]);
            Ok(Some((fld.clone(), pts)))
        }
        2 => {
            let (a0, a1, a2) = (&affine[0], &affine[1], &affine[2]);
            let disc = fld.sub(
                &fld.mul(a1, a1),
                &fld.mul(&fld.from_i64(4), &fld.mul(a0, a2)),
            );
            let (f2, root) = fld.adjoin_sqrt(&disc)?;
            let two_a2_inv = f2.inv(&f2.mul(&f2.from_i64(2), &f2.lift_elem(a2)))?;
            for sign in [1i64, -1] {
                let num = if sign > 0 {
                    f2.add(&f2.neg(&f2.lift_elem(a1)), &root)
                } else {
                    f2.sub(&f2.neg(&f2.lift_elem(a1)), &root)
                };
                let z = f2.mul(&num, &two_a2_inv);
                pts.push([f2.from_i64(1), z]);
            }
            let pts = pts
                .into_iter()
                .map(|[p, q]| [f2.lift_elem(&p), f2.lift_elem(&q)])
                .collect();
            Ok(Some((f2, pts)))
        }
        _ => Ok(None),
    }
}

/// Tries to recognize the float roots of a higher-degree kernel form as
/// Gaussian rationals with small denominators; all roots must verify
/// exactly for the snap to be used.
fn snapped_roots(
    g: &BinaryForm<TowerField>,
    fld: &TowerField,
) -> Option<Vec<[TowerElem; 2]>> {
    let float_pts = float_roots_of_binary(&binary_to_complex(g, fld)).ok()?;
    let mut pts = Vec::new();
    for [p, q] in float_pts {
        // Normalize to (1, z) or (0, 1).
        if p.norm() < 1e-9 {
            pts.push([fld.from_i64(0), fld.from_i64(1)]);
            continue;
        }
        let z = q / p;
        let zg = snap_to_gauss(z, 24)?;
        let ze = fld.from_gauss(zg);
        // Exact check: g(1, z) = 0.
        let mut acc = fld.zero();
        let mut zp = fld.one();
        for c in &g.coeffs {
            acc = fld.add(&acc, &fld.mul(c, &zp));
            zp = fld.mul(&zp, &ze);
        }
        if !fld.is_zero(&acc) {
            return None;
        }
        pts.push([fld.from_i64(1), ze]);
    }
    Some(pts)
}

fn snap_to_gauss(z: Complex64, max_den: i64) -> Option<GaussQ> {
    for den in 1..=max_den {
        let re = (z.re * den as f64).round();
        let im = (z.im * den as f64).round();
        if re.abs() > 1e15 || im.abs() > 1e15 {
            return None;
        }
        let approx = Complex64::new(re / den as f64, im / den as f64);
        if (approx - z).norm() < 1e-8 {
            return Some(GaussQ::new(
                rat(re as i64, den),
                rat(im as i64, den),
            ));
        }
    }
    None
}

/// Decomposes a binary form into `rank` powers of linear forms, exactly
/// when the kernel roots live in a quadratic tower and through the float
/// backend otherwise.
pub fn binary_decompose(
    b: &BinaryForm<TowerField>,
    rank_info: &BinaryRank<TowerField>,
    fld: &TowerField,
) -> Result<BinaryDecomposition, TernaryError> {
    // Exact path: low degree or snap-recognized roots, over any of the
    // square-free kernel candidates (deterministic order).
    for g in std::iter::once(&rank_info.kernel_form).chain(rank_info.alternates.iter()) {
        let exact_pts = match exact_roots_low_degree(g, fld)? {
            Some((f2, pts)) => Some((f2, pts)),
            None => snapped_roots(g, fld).map(|pts| (fld.clone(), pts)),
        };
        if let Some((f2, pts)) = exact_pts {
            let bl = BinaryForm {
                degree: b.degree,
                coeffs: b.coeffs.iter().map(|c| f2.lift_elem(c)).collect(),
            };
            if let Some(terms) = solve_binary_coefficients(&bl, &pts, &f2) {
                return Ok(BinaryDecomposition::Exact { field: f2, terms });
            }
        }
    }
    // Float path.
    let g = &rank_info.kernel_form;
    let bc = binary_to_complex(b, fld);
    let gc = binary_to_complex(g, fld);
    let pts = float_roots_of_binary(&gc)?;
    let (terms, residual) = solve_binary_coefficients_float(&bc, &pts)?;
    Ok(BinaryDecomposition::Float { terms, residual })
}

fn solve_binary_coefficients(
    b: &BinaryForm<TowerField>,
    pts: &[[TowerElem; 2]],
    fld: &TowerField,
) -> Option<Vec<(TowerElem, [TowerElem; 2])>> {
    let dd = b.degree;
    // Row j = coefficient of s^{D-j} t^j of (p s + q t)^D: C(D,j) p^{D-j} q^j.
    let m = MatrixExact::from_fn(fld.clone(), dd + 1, pts.len(), |j, col| {
        let [p, q] = &pts[col];
        let mut c = fld.from_i64(crate::poly::binomial(dd, j) as i64);
        for _ in 0..dd - j {
            c = fld.mul(&c, p);
        }
        for _ in 0..j {
            c = fld.mul(&c, q);
        }
        c
    });
    let sol = m.solve(&b.coeffs)?;
    Some(
        sol.into_iter()
            .zip(pts.iter().cloned())
            .filter(|(c, _)| !fld.is_zero(c))
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Float backend: complex-f64 roots and linear solves.
// ---------------------------------------------------------------------------

pub const FLOAT_ROOT_POLISH_ITERS: usize = 60;
pub const FLOAT_ROOT_RESIDUAL: f64 = 1e-10;
pub const FLOAT_VANDERMONDE_COND_MAX: f64 = 1e12;

pub fn tower_to_complex(fld: &TowerField, e: &TowerElem) -> Complex64 {
    // Numeric values of the generators, principal branch, innermost first.
    let mut gen_vals: Vec<Complex64> = Vec::new();
    for k in 0..fld.depth() {
        let g = fld.generator(k);
        let disc = fld.mul(&g, &g);
        let dv = eval_coords(&disc, &gen_vals);
        gen_vals.push(dv.sqrt());
    }
    eval_coords(&fld.lift_elem(e), &gen_vals)
}

fn eval_coords(e: &TowerElem, gen_vals: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for (idx, g) in e.coords().iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut t = Complex64::new(rat_to_f64(&g.re), rat_to_f64(&g.im));
        for (k, gv) in gen_vals.iter().enumerate() {
            if idx & (1 << k) != 0 {
                t *= gv;
            }
        }
        acc += t;
    }
    acc
}

fn rat_to_f64(r: &Rat) -> f64 {
    let scale: BigInt = BigInt::from(1u64 << 53);
    let scaled = (r * Rat::from_integer(scale.clone())).round();
    scaled.to_integer().to_f64().unwrap_or(f64::NAN) / (1u64 << 53) as f64
}

fn binary_to_complex(b: &BinaryForm<TowerField>, fld: &TowerField) -> Vec<Complex64> {
    b.coeffs.iter().map(|c| tower_to_complex(fld, c)).collect()
}

/// Roots of a square-free binary form as projective points (p, q); affine
/// roots come from Durand–Kerner with Newton polishing.
pub fn float_roots_of_binary(coeffs: &[Complex64]) -> Result<Vec<[Complex64; 2]>, TernaryError> {
    let deg = coeffs.len() - 1;
    let mut affine = coeffs.to_vec();
    while affine.len() > 1 && affine.last().unwrap().norm() < 1e-13 * max_norm(coeffs) {
        affine.pop();
    }
    let s_mult = deg - (affine.len() - 1);
    let mut pts: Vec<[Complex64; 2]> = Vec::new();
    if s_mult >= 1 {
        pts.push([Complex64::zero(), Complex64::new(1.0, 0.0)]);
    }
    if affine.len() > 1 {
        for z in croots(&affine)? {
            pts.push([Complex64::new(1.0, 0.0), z]);
        }
    }
    Ok(pts)
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(1e-300, f64::max)
}

/// Durand–Kerner roots of a dense univariate polynomial (low-to-high).
pub fn croots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, TernaryError> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::zero();
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let deriv: Vec<Complex64> = (1..=n)
        .map(|j| monic[j] * Complex64::new(j as f64, 0.0))
        .collect();
    let eval_d = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::zero();
        for c in deriv.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius)
        .collect();
    for _ in 0..200 {
        let mut shift = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 {
            break;
        }
    }
    // Newton polish.
    for r in roots.iter_mut() {
        for _ in 0..FLOAT_ROOT_POLISH_ITERS {
            let f = eval(*r);
            let df = eval_d(*r);
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            *r -= step;
            if step.norm() < 1e-15 * (1.0 + r.norm()) {
                break;
            }
        }
    }
    let scale = max_norm(&monic).max(1.0);
    for r in roots.iter() {
        if eval(*r).norm() > FLOAT_ROOT_RESIDUAL * scale * (1.0 + r.norm()).powi(n as i32) {
            return Err(TernaryError::RootFindingFailed);
        }
    }
    Ok(roots)
}

/// Solves for coefficients of Σ c_j (p_j s + q_j t)^D = b in floats; returns
/// the terms and the max-norm recomposition residual (relative).
fn solve_binary_coefficients_float(
    b: &[Complex64],
    pts: &[[Complex64; 2]],
) -> Result<(Vec<(Complex64, [Complex64; 2])>, f64), TernaryError> {
    let dd = b.len() - 1;
    let mut rows: Vec<Vec<Complex64>> = (0..=dd)
        .map(|j| {
            pts.iter()
                .map(|[p, q]| {
                    let c = crate::poly::binomial(dd, j) as f64;
                    Complex64::new(c, 0.0) * p.powu((dd - j) as u32) * q.powu(j as u32)
                })
                .collect()
        })
        .collect();
    let mut rhs: Vec<Complex64> = b.to_vec();
    let sol = clsq(&mut rows, &mut rhs, pts.len())?;
    // Residual.
    let mut res = 0.0f64;
    for j in 0..=dd {
        let mut acc = Complex64::zero();
        for (col, [p, q]) in pts.iter().enumerate() {
            let c = crate::poly::binomial(dd, j) as f64;
            acc += sol[col] * Complex64::new(c, 0.0) * p.powu((dd - j) as u32) * q.powu(j as u32);
        }
        res = res.max((acc - b[j]).norm());
    }
    let rel = res / max_norm(b);
    Ok((
        sol.into_iter().zip(pts.iter().cloned()).collect(),
        rel,
    ))
}

/// Least-squares-flavored complex solve by column-pivoted elimination on an
/// overdetermined system; checks a crude condition estimate.
pub(crate) fn clsq(
    rows: &mut [Vec<Complex64>],
    rhs: &mut [Complex64],
    ncols: usize,
) -> Result<Vec<Complex64>, TernaryError> {
    let nrows = rows.len();
    let mut perm: Vec<usize> = (0..nrows).collect();
    let mut piv_max = 0.0f64;
    let mut piv_min = f64::INFINITY;
    for c in 0..ncols {
        let (best, bestval) = (c..nrows)
            .map(|r| (r, rows[perm[r]][c].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(TernaryError::FloatSolveFailed)?;
        if bestval < 1e-300 {
            return Err(TernaryError::FloatSolveFailed);
        }
        piv_max = piv_max.max(bestval);
        piv_min = piv_min.min(bestval);
        perm.swap(c, best);
        let prow = perm[c];
        for r in 0..nrows {
            if r == c {
                continue;
            }
            let row = perm[r];
            let f = rows[row][c] / rows[prow][c];
            if f.norm() == 0.0 {
                continue;
            }
            for j in c..ncols {
                let t = f * rows[prow][j];
                rows[row][j] -= t;
            }
            let t = f * rhs[prow];
            rhs[row] -= t;
        }
    }
    if piv_max / piv_min > FLOAT_VANDERMONDE_COND_MAX {
        return Err(TernaryError::FloatSolveFailed);
    }
    Ok((0..ncols).map(|c| rhs[perm[c]] / rows[perm[c]][c]).collect())
}

pub(crate) fn clsq_public(
    rows: &mut [Vec<Complex64>],
    rhs: &mut [Complex64],
    ncols: usize,
) -> Result<Vec<Complex64>, TernaryError> {
    clsq(rows, rhs, ncols)
}

// ---------------------------------------------------------------------------
// The full ternary pipeline.
// ---------------------------------------------------------------------------

/// A ternary decomposition: exact over a tower when the kernel roots are
/// reachable, floating with a verified residual otherwise.
#[derive(Debug)]
pub enum TernaryOutcome {
    Exact {
        field: TowerField,
        decomposition: IsotropicDecomposition<TowerField>,
    },
    Float {
        terms: Vec<(Complex64, [Complex64; 3])>,
        residual: f64,
    },
}

#[derive(Debug)]
pub struct TernaryDecomposition {
    pub rank: usize,
    pub r0: usize,
    pub outcome: TernaryOutcome,
}

impl TernaryDecomposition {
    pub fn size(&self) -> usize {
        match &self.outcome {
            TernaryOutcome::Exact { decomposition, .. } => decomposition.size(),
            TernaryOutcome::Float { terms, .. } => terms.len(),
        }
    }
}

/// Maps a binary point (p, q) to the isotropic (u,v,z) linear form
/// p²·u + q²·v + pq·z and transports it back to x-coordinates.
fn binary_point_to_x(fld: &TowerField, p: &TowerElem, q: &TowerElem) -> LinearForm<TowerField> {
    let a = fld.mul(p, p); // coefficient of u
    let b = fld.mul(q, q); // of v
    let c = fld.mul(p, q); // of z
    let img = uvz_to_x_images(fld);
    LinearForm(
        (0..3)
            .map(|j| {
                let mut acc = fld.mul(&a, &img[0][j]);
                fld.add_mul_assign(&mut acc, &b, &img[1][j]);
                fld.add_mul_assign(&mut acc, &c, &img[2][j]);
                acc
            })
            .collect(),
    )
}

fn binary_point_to_x_float(p: Complex64, q: Complex64) -> [Complex64; 3] {
    let a = p * p;
    let b = q * q;
    let c = p * q;
    // u = -(x0+ix1)/2, v = (x0-ix1)/2, z = x2.
    let i = Complex64::new(0.0, 1.0);
    [
        (b - a) * 0.5,
        -i * (a + b) * 0.5,
        c,
    ]
}

/// Computes the isotropic rank of a ternary harmonic and a decomposition of
/// exactly that size, for the standard quadratic form.
pub fn ternary_decompose(
    h: &MultiPoly<TowerField>,
) -> Result<TernaryDecomposition, TernaryError> {
    let fld = h.field.clone();
    if h.arity != 3 {
        return Err(TernaryError::NotTernary(h.arity));
    }
    if h.is_zero() {
        return Err(TernaryError::ZeroInput);
    }
    let w = QuadraticFormSpec::standard(fld.clone(), 2);
    if !is_harmonic(h, &w)? {
        return Err(TernaryError::NotHarmonic);
    }
    let g = to_uvz(h)?;
    let b = beta(&g);
    let info = binary_rank(&b, &fld)?;
    match binary_decompose(&b, &info, &fld)? {
        BinaryDecomposition::Exact { field: f2, terms } => {
            let points: Vec<LinearForm<TowerField>> = terms
                .iter()
                .map(|(_, [p, q])| binary_point_to_x(&f2, p, q))
                .collect();
            let hl = crate::decompose::lift_poly(&f2, h);
            let coeffs = solve_power_coefficients(&hl, &points)
                .ok_or(TernaryError::FloatSolveFailed)?;
            let dec = IsotropicDecomposition {
                degree: h.degree,
                arity: 3,
                terms: coeffs
                    .into_iter()
                    .zip(points)
                    .filter(|(c, _)| !f2.is_zero(c))
                    .collect(),
                form: QuadraticFormSpec::standard(f2.clone(), 2),
            };
            let rep = dec.verify(&hl);
            debug_assert!(rep.valid, "{:?}", rep.failures);
            Ok(TernaryDecomposition {
                rank: info.rank,
                r0: info.r0,
                outcome: TernaryOutcome::Exact {
                    field: f2,
                    decomposition: dec,
                },
            })
        }
        BinaryDecomposition::Float { terms, .. } => {
            let pts: Vec<[Complex64; 3]> = terms
                .iter()
                .map(|(_, [p, q])| binary_point_to_x_float(*p, *q))
                .collect();
            let (cf, residual) = solve_ternary_coefficients_float(h, &fld, &pts)?;
            Ok(TernaryDecomposition {
                rank: info.rank,
                r0: info.r0,
                outcome: TernaryOutcome::Float {
                    terms: cf.into_iter().zip(pts).collect(),
                    residual,
                },
            })
        }
    }
}

fn solve_ternary_coefficients_float(
    h: &MultiPoly<TowerField>,
    fld: &TowerField,
    pts: &[[Complex64; 3]],
) -> Result<(Vec<Complex64>, f64), TernaryError> {
    let d = h.degree;
    let idx = MonomialIndex::new(3, d);
    let target: Vec<Complex64> = idx
        .iter()
        .map(|e| tower_to_complex(fld, &h.coeff(e)))
        .collect();
    // Row per monomial: multinomial(d; e) Π pt_j^{e_j}.
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(idx.len());
    for r in 0..idx.len() {
        let e = idx.exp(r);
        let mut multi = 1.0f64;
        let mut rem = d;
        for &k in e {
            multi *= crate::poly::binomial(rem, k as usize) as f64;
            rem -= k as usize;
        }
        rows.push(
            pts.iter()
                .map(|pt| {
                    let mut acc = Complex64::new(multi, 0.0);
                    for (j, &k) in e.iter().enumerate() {
                        acc *= pt[j].powu(k as u32);
                    }
                    acc
                })
                .collect(),
        );
    }
    let mut rhs = target.clone();
    let sol = clsq(&mut rows.clone(), &mut rhs, pts.len())?;
    // Residual against the original coefficients.
    let mut res = 0.0f64;
    for (r, row) in rows.iter().enumerate() {
        let mut acc = Complex64::zero();
        for (c, s) in row.iter().zip(&sol) {
            acc += c * s;
        }
        res = res.max((acc - target[r]).norm());
    }
    Ok((sol, res / max_norm(&target)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_i;

    fn qi() -> TowerField {
        TowerField::qi()
    }

    fn tp(fld: &TowerField, terms: &[(&[u8], (i64, i64))]) -> MultiPoly<TowerField> {
        let arity = terms[0].0.len();
        let degree = terms[0].0.iter().map(|&x| x as usize).sum();
        MultiPoly::from_terms(
            fld.clone(),
            arity,
            degree,
            terms
                .iter()
                .map(|(e, (re, im))| (e.to_vec(), fld.from_gauss(rat_i(*re, *im))))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn vz(fld: &TowerField) -> MultiPoly<TowerField> {
        tp(fld, &[(&[1, 0, 1], (1, 0)), (&[0, 1, 1], (0, -1))])
    }

    #[test]
    fn uvz_coordinates() {
        let f = qi();
        // x2 → z
        let x2 = tp(&f, &[(&[0, 0, 1], (1, 0))]);
        assert_eq!(to_uvz(&x2).unwrap().0, tp(&f, &[(&[0, 0, 1], (1, 0))]));
        // (x0 - i x1) x2 → 2 v z
        let g = to_uvz(&vz(&f)).unwrap();
        assert_eq!(g.0, tp(&f, &[(&[0, 1, 1], (2, 0))]));
        // q2 = x0²+x1²+x2² → z² − 4uv
        let q2 = tp(&f, &[(&[2, 0, 0], (1, 0)), (&[0, 2, 0], (1, 0)), (&[0, 0, 2], (1, 0))]);
        let gq = to_uvz(&q2).unwrap();
        assert_eq!(
            gq.0,
            tp(&f, &[(&[0, 0, 2], (1, 0)), (&[1, 1, 0], (-4, 0))])
        );
        // Round trip.
        assert_eq!(from_uvz(&gq).unwrap(), q2);
        assert_eq!(from_uvz(&to_uvz(&vz(&f)).unwrap()).unwrap(), vz(&f));
    }

    #[test]
    fn beta_values() {
        let f = qi();
        // β_2(z² − 4uv) = 0
        let g = UVZForm(tp(&f, &[(&[0, 0, 2], (1, 0)), (&[1, 1, 0], (-4, 0))]));
        assert!(beta(&g).is_zero(&f));
        // β_2(vz) follows the displayed monomial formula: 4 s t³.
        let gvz = to_uvz(&vz(&f)).unwrap();
        let b = beta(&gvz);
        // to_uvz(vz) = 2vz so β_2 gives 2 · (2^1·2!· s^{2-1} t^{2+1}) = 8 st³.
        let mut expect = BinaryForm::zero(&f, 4);
        expect.coeffs[3] = f.from_i64(8);
        assert_eq!(b, expect);
        // β_1(u + v) = s² + t²
        let g1 = UVZForm(tp(&f, &[(&[1, 0, 0], (1, 0)), (&[0, 1, 0], (1, 0))]));
        let b1 = beta(&g1);
        assert_eq!(b1.coeffs, vec![f.from_i64(1), f.from_i64(0), f.from_i64(1)]);
    }

    #[test]
    fn beta_inverse_is_a_section() {
        let f = qi();
        for d in 1..=4usize {
            for j in 0..=2 * d {
                let mut b = BinaryForm::zero(&f, 2 * d);
                b.coeffs[j] = f.from_i64(1);
                let g = beta_inverse(&b, &f).unwrap();
                assert_eq!(beta(&g), b, "d={} j={}", d, j);
                // And the section lands on harmonics.
                let w = uvz_form_spec(&f);
                assert!(is_harmonic(&g.0, &w).unwrap());
            }
        }
        // b = s^{2d} pulls back to a multiple of u^d.
        let d = 3;
        let mut b = BinaryForm::zero(&f, 2 * d);
        b.coeffs[0] = f.from_i64(1);
        let g = beta_inverse(&b, &f).unwrap();
        assert_eq!(g.0.num_terms(), 1);
        assert!(g.0.terms.contains_key(&vec![3u8, 0, 0]));
        // b = 0 → 0
        let z = BinaryForm::zero(&f, 2 * d);
        assert!(beta_inverse(&z, &f).unwrap().0.is_zero());
    }

    #[test]
    fn binary_ranks() {
        let f = qi();
        // st³: rank 4 (r0 = 2, kernel spanned by the square α_s²).
        let mut st3 = BinaryForm::zero(&f, 4);
        st3.coeffs[3] = f.from_i64(1);
        let r = binary_rank(&st3, &f).unwrap();
        assert_eq!((r.r0, r.rank), (2, 4));
        // (s+t)^4: rank 1.
        let p4: Vec<_> = (0..=4)
            .map(|j| f.from_i64(crate::poly::binomial(4, j) as i64))
            .collect();
        let r = binary_rank(&BinaryForm::new(4, p4), &f).unwrap();
        assert_eq!(r.rank, 1);
        // s²t²: rank 3.
        let mut s2t2 = BinaryForm::zero(&f, 4);
        s2t2.coeffs[2] = f.from_i64(1);
        let r = binary_rank(&s2t2, &f).unwrap();
        assert_eq!((r.r0, r.rank), (3, 3));
    }

    #[test]
    fn binary_decompositions() {
        let f = qi();
        // (s+t)^4 → single point (1,1), coefficient 1.
        let p4: Vec<_> = (0..=4)
            .map(|j| f.from_i64(crate::poly::binomial(4, j) as i64))
            .collect();
        let b = BinaryForm::new(4, p4);
        let info = binary_rank(&b, &f).unwrap();
        match binary_decompose(&b, &info, &f).unwrap() {
            BinaryDecomposition::Exact { field, terms } => {
                assert_eq!(terms.len(), 1);
                let (c, [p, q]) = &terms[0];
                assert!(field.is_one(c));
                assert_eq!(field.div(q, p).unwrap(), field.from_i64(1));
            }
            _ => panic!("expected exact decomposition"),
        }
        // st³ → 4 points; the snap path makes this exact (roots ±1, ±i).
        let mut st3 = BinaryForm::zero(&f, 4);
        st3.coeffs[3] = f.from_i64(1);
        let info = binary_rank(&st3, &f).unwrap();
        match binary_decompose(&st3, &info, &f).unwrap() {
            BinaryDecomposition::Exact { field, terms } => {
                assert_eq!(terms.len(), 4);
                // Recompose exactly.
                let mut acc = BinaryForm::zero(&field, 4);
                for (c, [p, q]) in &terms {
                    for j in 0..=4 {
                        let mut t =
                            field.from_i64(crate::poly::binomial(4, j) as i64);
                        for _ in 0..4 - j {
                            t = field.mul(&t, p);
                        }
                        for _ in 0..j {
                            t = field.mul(&t, q);
                        }
                        let t = field.mul(&t, c);
                        acc.coeffs[j] = field.add(&acc.coeffs[j], &t);
                    }
                }
                for j in 0..=4 {
                    assert_eq!(acc.coeffs[j], field.lift_elem(&st3.coeffs[j]));
                }
            }
            BinaryDecomposition::Float { terms, residual } => {
                assert_eq!(terms.len(), 4);
                assert!(residual < 1e-10);
            }
        }
        // s²t² → 3 points.
        let mut s2t2 = BinaryForm::zero(&f, 4);
        s2t2.coeffs[2] = f.from_i64(1);
        let info = binary_rank(&s2t2, &f).unwrap();
        match binary_decompose(&s2t2, &info, &f).unwrap() {
            BinaryDecomposition::Exact { terms, .. } => assert_eq!(terms.len(), 3),
            BinaryDecomposition::Float { terms, residual } => {
                assert_eq!(terms.len(), 3);
                assert!(residual < 1e-10);
            }
        }
    }

    #[test]
    fn ternary_vz_has_rank_4() {
        let f = qi();
        let dec = ternary_decompose(&vz(&f)).unwrap();
        assert_eq!(dec.rank, 4);
        assert_eq!(dec.size(), 4);
        match dec.outcome {
            TernaryOutcome::Exact {
                field,
                decomposition,
            } => {
                let target = crate::decompose::lift_poly(&field, &vz(&f));
                let rep = decomposition.verify(&target);
                assert!(rep.valid, "{:?}", rep.failures);
            }
            TernaryOutcome::Float { residual, .. } => {
                panic!("vz should take the exact path (residual {})", residual)
            }
        }
    }

    #[test]
    fn ternary_isotropic_power_has_rank_1() {
        let f = qi();
        // (x0 + i x1)^3
        let l = tp(&f, &[(&[1, 0, 0], (1, 0)), (&[0, 1, 0], (0, 1))]);
        let h = l.pow(3);
        let dec = ternary_decompose(&h).unwrap();
        assert_eq!(dec.rank, 1);
        assert_eq!(dec.size(), 1);
    }

    #[test]
    fn float_roots_of_quartic() {
        // z^4 - 1: roots ±1, ±i.
        let coeffs = vec![
            Complex64::new(-1.0, 0.0),
            Complex64::zero(),
            Complex64::zero(),
            Complex64::zero(),
            Complex64::new(1.0, 0.0),
        ];
        let mut roots = croots(&coeffs).unwrap();
        roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        assert_eq!(roots.len(), 4);
        for r in roots {
            assert!((r.powu(4) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }
}
