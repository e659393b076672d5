//! Harmonic monomials: recognition, the isotropic-rank formula, and
//! explicit decompositions for the rank-preserving and rank-doubling
//! classes.
//!
//! A product of powers of independent linear forms is harmonic exactly when
//! the forms are pairwise orthogonal and every form with exponent ≥ 2 is
//! isotropic. Its Waring rank is the product of (aᵢ+1) over all exponents
//! except one minimal; the isotropic rank doubles that exactly when one and
//! only one of the forms is non-isotropic.

use crate::apolarity::{is_isotropic, is_orthogonal, LinearForm, QuadraticFormSpec};
use crate::decompose::{
    double_from_waring, lift_poly, solve_power_coefficients, IsotropicDecomposition,
};
use crate::field::{Field, FieldError, TowerElem, TowerField};
use crate::poly::{MonomialIndex, MultiPoly};
use num::complex::Complex64;
use num::Zero;

#[derive(thiserror::Error, Debug)]
pub enum MonomialError {
    #[error("monomial is not harmonic: {0:?}")]
    NotHarmonic(Vec<MonomialViolation>),
    #[error("forms must be distinct coordinate directions in the supplied frame")]
    TemplateRequired,
    #[error("exponents must be >= 1 and forms nonzero")]
    BadSpec,
    #[error("float backend failed to converge (residual {0})")]
    FloatBackend(f64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Decompose(#[from] crate::decompose::DecomposeError),
}

/// A monomial m = ℓ_0^{a_0} ⋯ ℓ_r^{a_r} with its quadratic form.
#[derive(Clone, Debug)]
pub struct MonomialSpec {
    pub forms: Vec<LinearForm<TowerField>>,
    pub exponents: Vec<usize>,
    pub form_spec: QuadraticFormSpec<TowerField>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialViolation {
    /// ω∘(ℓ_i ℓ_j) ≠ 0.
    NonOrthogonalPair(usize, usize),
    /// exponent ≥ 2 but ω∘ℓ² ≠ 0.
    NonIsotropicRepeated(usize),
}

#[derive(Clone, Debug)]
pub struct HarmonicMonomialReport {
    pub harmonic: bool,
    pub violations: Vec<MonomialViolation>,
}

impl MonomialSpec {
    pub fn new(
        forms: Vec<LinearForm<TowerField>>,
        exponents: Vec<usize>,
        form_spec: QuadraticFormSpec<TowerField>,
    ) -> Result<Self, MonomialError> {
        let f = &form_spec.field;
        if forms.len() != exponents.len()
            || forms.is_empty()
            || exponents.iter().any(|a| *a == 0)
            || forms.iter().any(|l| l.is_zero(f))
        {
            return Err(MonomialError::BadSpec);
        }
        Ok(MonomialSpec {
            forms,
            exponents,
            form_spec,
        })
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.form_spec.arity()
    }

    /// The product Π ℓ_i^{a_i} as a polynomial.
    pub fn to_poly(&self) -> MultiPoly<TowerField> {
        let f = &self.form_spec.field;
        let mut acc = MultiPoly::constant(f.clone(), self.arity(), f.one());
        for (l, a) in self.forms.iter().zip(&self.exponents) {
            acc = acc.mul(&l.to_poly(f).pow(*a)).unwrap();
        }
        acc
    }
}

/// Harmonicity of a monomial: pairwise orthogonality plus isotropy of every
/// repeated form.
pub fn is_harmonic_monomial(m: &MonomialSpec) -> HarmonicMonomialReport {
    let w = &m.form_spec;
    let mut violations = Vec::new();
    for i in 0..m.forms.len() {
        for j in i + 1..m.forms.len() {
            if !is_orthogonal(&m.forms[i], &m.forms[j], w) {
                violations.push(MonomialViolation::NonOrthogonalPair(i, j));
            }
        }
        if m.exponents[i] >= 2 && !is_isotropic(&m.forms[i], w) {
            violations.push(MonomialViolation::NonIsotropicRepeated(i));
        }
    }
    HarmonicMonomialReport {
        harmonic: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRanks {
    pub waring_rank: usize,
    pub isotropic_rank: usize,
}

/// Waring rank Π_{i≠i_min}(a_i+1) and the isotropic rank, which doubles it
/// exactly when one and only one form is non-isotropic.
pub fn monomial_irk(m: &MonomialSpec) -> Result<MonomialRanks, MonomialError> {
    let rep = is_harmonic_monomial(m);
    if !rep.harmonic {
        return Err(MonomialError::NotHarmonic(rep.violations));
    }
    let imin = m
        .exponents
        .iter()
        .enumerate()
        .min_by_key(|(_, a)| **a)
        .map(|(i, _)| i)
        .unwrap();
    let waring: usize = m
        .exponents
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != imin)
        .map(|(_, a)| a + 1)
        .product();
    let non_iso = m
        .forms
        .iter()
        .filter(|l| !is_isotropic(l, &m.form_spec))
        .count();
    let isotropic = if non_iso == 1 { 2 * waring } else { waring };
    Ok(MonomialRanks {
        waring_rank: waring,
        isotropic_rank: isotropic,
    })
}

/// An explicit decomposition: exact when the roots of unity involved lie in
/// Q(i) (orders 1, 2, 4), floating with a verified residual otherwise.
#[derive(Debug)]
pub enum MonomialDecomposition {
    Exact {
        field: TowerField,
        decomposition: IsotropicDecomposition<TowerField>,
    },
    Float {
        terms: Vec<(Complex64, Vec<Complex64>)>,
        residual: f64,
    },
}

impl MonomialDecomposition {
    pub fn size(&self) -> usize {
        match self {
            MonomialDecomposition::Exact { decomposition, .. } => decomposition.size(),
            MonomialDecomposition::Float { terms, .. } => terms.len(),
        }
    }
}

/// The coordinate index of each form, required to be a distinct coordinate
/// direction (the caller supplies the orthogonal reduction to this frame).
fn coordinate_indices(m: &MonomialSpec) -> Result<Vec<usize>, MonomialError> {
    let f = &m.form_spec.field;
    let mut idx = Vec::with_capacity(m.forms.len());
    for l in &m.forms {
        let nz: Vec<usize> = (0..l.arity()).filter(|j| !f.is_zero(&l.0[*j])).collect();
        if nz.len() != 1 {
            return Err(MonomialError::TemplateRequired);
        }
        idx.push(nz[0]);
    }
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return Err(MonomialError::TemplateRequired);
    }
    Ok(idx)
}

/// Decomposes a harmonic monomial into isotropic powers with size exactly
/// its isotropic rank. Rank-preserving classes use root-of-unity point sets
/// from the complete-intersection apolar ideal; the doubling class routes
/// its Waring points through the cone construction.
pub fn monomial_decompose(m: &MonomialSpec, seed: u64) -> Result<MonomialDecomposition, MonomialError> {
    let rep = is_harmonic_monomial(m);
    if !rep.harmonic {
        return Err(MonomialError::NotHarmonic(rep.violations));
    }
    let ranks = monomial_irk(m)?;
    let f0 = m.form_spec.field.clone();
    let coords = coordinate_indices(m)?;
    let target = m.to_poly();
    let non_iso: Vec<usize> = (0..m.forms.len())
        .filter(|i| !is_isotropic(&m.forms[*i], &m.form_spec))
        .collect();

    // Sort so a minimal exponent comes first among the excluded index; for
    // the doubling class the non-isotropic form has exponent 1 and is the
    // natural base point.
    let mut order: Vec<usize> = (0..m.forms.len()).collect();
    if non_iso.len() == 1 {
        let ni = non_iso[0];
        order.sort_by_key(|&i| (i != ni, m.exponents[i]));
    } else {
        order.sort_by_key(|&i| (!non_iso.contains(&i), m.exponents[i]));
    }
    let base = order[0];
    let rest: Vec<usize> = order[1..].to_vec();
    let orders: Vec<usize> = rest.iter().map(|&i| m.exponents[i] + 1).collect();
    let exact_orders = orders.iter().all(|o| matches!(o, 1 | 2 | 4));

    if non_iso.len() == 1 {
        // Doubling class: Waring points (1 on the base coordinate, roots of
        // unity elsewhere), handed to the cone construction.
        if exact_orders {
            let pts = unity_grid_exact(&f0, m, &coords, base, &rest);
            let out = double_from_waring(&target, &pts, &m.form_spec, seed)?;
            debug_assert_eq!(out.decomposition.size(), ranks.isotropic_rank);
            return Ok(MonomialDecomposition::Exact {
                field: out.field,
                decomposition: out.decomposition,
            });
        }
        let pts = unity_grid_float(&f0, m, &coords, base, &rest, &[]);
        return float_double_from_waring(m, &pts, seed, ranks.isotropic_rank);
    }

    // Rank-preserving classes.
    if non_iso.is_empty() {
        if exact_orders {
            let pts = unity_grid_exact(&f0, m, &coords, base, &rest);
            return finish_exact(m, &target, pts, ranks.isotropic_rank, f0);
        }
        let pts = unity_grid_float(&f0, m, &coords, base, &rest, &[]);
        return finish_float(m, &pts, ranks.isotropic_rank);
    }

    // Two or more non-isotropic forms (all with exponent 1): the base and
    // the other non-isotropic coordinates carry ±t_i with
    // t_i² = −g_bb/(k·g_ii), k the number of non-base non-isotropic forms.
    let others: Vec<usize> = rest
        .iter()
        .copied()
        .filter(|i| non_iso.contains(i))
        .collect();
    let k = others.len();
    let gbb = m.form_spec.pairing(&m.forms[base], &m.forms[base]);
    let mut fld = f0.clone();
    let mut signs_exact: Vec<(usize, TowerElem)> = Vec::new();
    let mut ok_exact = exact_orders;
    if ok_exact {
        for &i in &others {
            let gii = m.form_spec.pairing(&m.forms[i], &m.forms[i]);
            let t2 = fld.neg(&fld.div(
                &fld.lift_elem(&gbb),
                &fld.mul(&fld.from_i64(k as i64), &fld.lift_elem(&gii)),
            )?);
            match fld.adjoin_sqrt(&t2) {
                Ok((f2, t)) => {
                    fld = f2;
                    signs_exact.push((i, t));
                }
                Err(FieldError::ExtensionOverflow(_)) => {
                    ok_exact = false;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    if ok_exact {
        let pts = mixed_grid_exact(&fld, m, &coords, base, &rest, &signs_exact);
        return finish_exact(m, &target, pts, ranks.isotropic_rank, fld);
    }
    let tvals: Vec<(usize, Complex64)> = others
        .iter()
        .map(|&i| {
            let gii = m.form_spec.pairing(&m.forms[i], &m.forms[i]);
            let gbbc = crate::ternary::tower_to_complex(&f0, &gbb);
            let giic = crate::ternary::tower_to_complex(&f0, &gii);
            (i, (-gbbc / (k as f64 * giic)).sqrt())
        })
        .collect();
    let pts = unity_grid_float(&f0, m, &coords, base, &rest, &tvals);
    finish_float(m, &pts, ranks.isotropic_rank)
}

/// Exact grid of points: 1 on the base coordinate, ζ^e on each remaining
/// coordinate with ζ a root of unity of order a_i+1 ∈ {1, 2, 4}.
fn unity_grid_exact(
    f: &TowerField,
    m: &MonomialSpec,
    coords: &[usize],
    base: usize,
    rest: &[usize],
) -> Vec<LinearForm<TowerField>> {
    let n1 = m.arity();
    let mut pts = vec![vec![f.zero(); n1]];
    for (slot, v) in pts[0].iter_mut().enumerate() {
        if slot == coords[base] {
            *v = f.one();
        }
    }
    for &i in rest {
        let o = m.exponents[i] + 1;
        let roots: Vec<TowerElem> = match o {
            1 => vec![f.one()],
            2 => vec![f.one(), f.from_i64(-1)],
            4 => vec![f.one(), f.i(), f.from_i64(-1), f.neg(&f.i())],
            _ => unreachable!("exact path requires orders 1, 2, 4"),
        };
        let mut next = Vec::with_capacity(pts.len() * o);
        for p in &pts {
            for z in &roots {
                let mut q = p.clone();
                q[coords[i]] = z.clone();
                next.push(q);
            }
        }
        pts = next;
    }
    pts.into_iter().map(LinearForm).collect()
}

/// Exact grid for the multi-non-isotropic class: ±t_i on the other
/// non-isotropic coordinates, roots of unity on the isotropic ones.
fn mixed_grid_exact(
    f: &TowerField,
    m: &MonomialSpec,
    coords: &[usize],
    base: usize,
    rest: &[usize],
    tvals: &[(usize, TowerElem)],
) -> Vec<LinearForm<TowerField>> {
    let n1 = m.arity();
    let mut start = vec![f.zero(); n1];
    start[coords[base]] = f.one();
    let mut pts = vec![start];
    for &i in rest {
        let choices: Vec<TowerElem> = if let Some((_, t)) = tvals.iter().find(|(j, _)| *j == i) {
            vec![f.lift_elem(t), f.neg(&f.lift_elem(t))]
        } else {
            match m.exponents[i] + 1 {
                1 => vec![f.one()],
                2 => vec![f.one(), f.from_i64(-1)],
                4 => vec![f.one(), f.i(), f.from_i64(-1), f.neg(&f.i())],
                _ => unreachable!(),
            }
        };
        let mut next = Vec::with_capacity(pts.len() * choices.len());
        for p in &pts {
            for z in &choices {
                let mut q = p.clone();
                q[coords[i]] = z.clone();
                next.push(q);
            }
        }
        pts = next;
    }
    pts.into_iter().map(LinearForm).collect()
}

fn unity_grid_float(
    _f: &TowerField,
    m: &MonomialSpec,
    coords: &[usize],
    base: usize,
    rest: &[usize],
    tvals: &[(usize, Complex64)],
) -> Vec<Vec<Complex64>> {
    let n1 = m.arity();
    let mut start = vec![Complex64::zero(); n1];
    start[coords[base]] = Complex64::new(1.0, 0.0);
    let mut pts = vec![start];
    for &i in rest {
        let choices: Vec<Complex64> = if let Some((_, t)) = tvals.iter().find(|(j, _)| *j == i) {
            vec![*t, -*t]
        } else {
            let o = m.exponents[i] + 1;
            (0..o)
                .map(|e| {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / o as f64)
                })
                .collect()
        };
        let mut next = Vec::with_capacity(pts.len() * choices.len());
        for p in &pts {
            for z in &choices {
                let mut q = p.clone();
                q[coords[i]] = *z;
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

fn finish_exact(
    m: &MonomialSpec,
    target: &MultiPoly<TowerField>,
    pts: Vec<LinearForm<TowerField>>,
    expect: usize,
    fld: TowerField,
) -> Result<MonomialDecomposition, MonomialError> {
    let target = lift_poly(&fld, target);
    let pts: Vec<LinearForm<TowerField>> = pts
        .into_iter()
        .map(|l| crate::decompose::lift_linear(&fld, &l))
        .collect();
    let coeffs =
        solve_power_coefficients(&target, &pts).ok_or(MonomialError::TemplateRequired)?;
    let dec = IsotropicDecomposition {
        degree: m.degree(),
        arity: m.arity(),
        terms: coeffs
            .into_iter()
            .zip(pts)
            .filter(|(c, _)| !fld.is_zero(c))
            .collect(),
        form: crate::decompose::lift_form_spec(&fld, &m.form_spec),
    };
    let rep = dec.verify(&target);
    debug_assert!(rep.valid, "{:?}", rep.failures);
    debug_assert_eq!(dec.size(), expect);
    Ok(MonomialDecomposition::Exact {
        field: fld,
        decomposition: dec,
    })
}

/// Float coefficient solve against the monomial, with residual check and an
/// exact size assertion.
fn finish_float(
    m: &MonomialSpec,
    pts: &[Vec<Complex64>],
    expect: usize,
) -> Result<MonomialDecomposition, MonomialError> {
    let (terms, residual) = solve_float_terms(m, pts)?;
    if residual > 1e-9 {
        return Err(MonomialError::FloatBackend(residual));
    }
    if terms.len() != expect {
        return Err(MonomialError::FloatBackend(residual));
    }
    Ok(MonomialDecomposition::Float { terms, residual })
}

fn solve_float_terms(
    m: &MonomialSpec,
    pts: &[Vec<Complex64>],
) -> Result<(Vec<(Complex64, Vec<Complex64>)>, f64), MonomialError> {
    let f = &m.form_spec.field;
    let target = m.to_poly();
    let d = target.degree;
    let idx = MonomialIndex::new(m.arity(), d);
    let rhs0: Vec<Complex64> = idx
        .iter()
        .map(|e| crate::ternary::tower_to_complex(f, &target.coeff(e)))
        .collect();
    let rows: Vec<Vec<Complex64>> = (0..idx.len())
        .map(|r| {
            let e = idx.exp(r);
            let mut multi = 1.0f64;
            let mut rem = d;
            for &k in e {
                multi *= crate::poly::binomial(rem, k as usize) as f64;
                rem -= k as usize;
            }
            pts.iter()
                .map(|pt| {
                    let mut acc = Complex64::new(multi, 0.0);
                    for (j, &k) in e.iter().enumerate() {
                        acc *= pt[j].powu(k as u32);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut rows_m = rows.clone();
    let mut rhs = rhs0.clone();
    let sol = crate::ternary::clsq_public(&mut rows_m, &mut rhs, pts.len())
        .map_err(|_| MonomialError::FloatBackend(f64::INFINITY))?;
    let mut res = 0.0f64;
    let scale = rhs0.iter().map(|c| c.norm()).fold(1e-300, f64::max);
    for (r, row) in rows.iter().enumerate() {
        let mut acc = Complex64::zero();
        for (c, s) in row.iter().zip(&sol) {
            acc += c * s;
        }
        res = res.max((acc - rhs0[r]).norm());
    }
    let terms: Vec<(Complex64, Vec<Complex64>)> = sol
        .into_iter()
        .zip(pts.iter().cloned())
        .filter(|(c, _)| c.norm() > 1e-9)
        .collect();
    Ok((terms, res / scale))
}

/// Float version of the doubling: replaces each (non-isotropic) Waring
/// point by the two intersections of its vertex line with the quadric.
fn float_double_from_waring(
    m: &MonomialSpec,
    pts: &[Vec<Complex64>],
    seed: u64,
    expect: usize,
) -> Result<MonomialDecomposition, MonomialError> {
    use rand::{Rng, SeedableRng};
    let f = &m.form_spec.field;
    let n1 = m.arity();
    let gram: Vec<Vec<Complex64>> = (0..n1)
        .map(|i| {
            (0..n1)
                .map(|j| crate::ternary::tower_to_complex(f, m.form_spec.gram.at(i, j)))
                .collect()
        })
        .collect();
    let pair = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::zero();
        for i in 0..n1 {
            for j in 0..n1 {
                acc += a[i] * gram[i][j] * b[j];
            }
        }
        acc
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut vertex = None;
    for _ in 0..100 {
        let cand: Vec<Complex64> = (0..n1)
            .map(|_| Complex64::new(rng.gen_range(-10..=10i64) as f64, 0.0))
            .collect();
        let qp = pair(&cand, &cand);
        if qp.norm() < 1e-6 {
            continue;
        }
        let ok = pts.iter().all(|x| {
            let b = pair(&cand, x);
            let qx = pair(x, x);
            (b * b - qp * qx).norm() > 1e-6
        });
        if ok {
            vertex = Some(cand);
            break;
        }
    }
    let vertex = vertex.ok_or(MonomialError::FloatBackend(f64::INFINITY))?;
    let qp = pair(&vertex, &vertex);
    let mut collected: Vec<Vec<Complex64>> = Vec::new();
    for x in pts {
        let b = pair(&vertex, x);
        let qx = pair(x, x);
        let disc = (b * b - qp * qx).sqrt();
        for sign in [1.0, -1.0] {
            let s = (-b + disc * sign) / qp;
            collected.push((0..n1).map(|j| s * vertex[j] + x[j]).collect());
        }
    }
    finish_float(m, &collected, expect)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> TowerField {
        TowerField::qi()
    }

    fn coord(f: &TowerField, n1: usize, j: usize) -> LinearForm<TowerField> {
        let mut v = vec![f.zero(); n1];
        v[j] = f.one();
        LinearForm(v)
    }

    /// ω = α_0² + α_1α_2 on three coordinates, as in the closing example.
    fn omega_012(f: &TowerField) -> QuadraticFormSpec<TowerField> {
        let mut gram = crate::matrix::MatrixExact::zeros(f.clone(), 3, 3);
        *gram.at_mut(0, 0) = f.one();
        let half = f.inv(&f.from_i64(2)).unwrap();
        *gram.at_mut(1, 2) = half.clone();
        *gram.at_mut(2, 1) = half;
        QuadraticFormSpec::from_gram(f.clone(), gram)
    }

    #[test]
    fn harmonicity_recognition() {
        let f = qi();
        // x_0 x_1^{d-1} under ω = α_0² + α_1α_2: harmonic.
        let w = omega_012(&f);
        let m = MonomialSpec::new(
            vec![coord(&f, 3, 0), coord(&f, 3, 1)],
            vec![1, 3],
            w.clone(),
        )
        .unwrap();
        assert!(is_harmonic_monomial(&m).harmonic);
        // x_0 x_1 under the standard form: harmonic (orthogonal coordinates).
        let std2 = QuadraticFormSpec::standard(f.clone(), 1);
        let m = MonomialSpec::new(
            vec![coord(&f, 2, 0), coord(&f, 2, 1)],
            vec![1, 1],
            std2.clone(),
        )
        .unwrap();
        assert!(is_harmonic_monomial(&m).harmonic);
        // x_0² under the standard form: x_0 repeated but not isotropic.
        let m = MonomialSpec::new(vec![coord(&f, 2, 0)], vec![2], std2).unwrap();
        let rep = is_harmonic_monomial(&m);
        assert!(!rep.harmonic);
        assert_eq!(rep.violations, vec![MonomialViolation::NonIsotropicRepeated(0)]);
    }

    #[test]
    fn rank_formulas() {
        let f = qi();
        // x_0 x_1^{d-1}, d = 4: waring 4, isotropic 8.
        let w = omega_012(&f);
        let m = MonomialSpec::new(
            vec![coord(&f, 3, 0), coord(&f, 3, 1)],
            vec![1, 3],
            w,
        )
        .unwrap();
        let r = monomial_irk(&m).unwrap();
        assert_eq!((r.waring_rank, r.isotropic_rank), (4, 8));
        // ℓ_1²ℓ_2², both isotropic and orthogonal: 3 and 3.
        // Frame: ω with two hyperbolic pairs on 4 coordinates:
        // ω = α_0α_2 + α_1α_3 (x_0, x_1 isotropic, mutually orthogonal).
        let w = QuadraticFormSpec::hyperbolic(f.clone(), 3, 2);
        let m = MonomialSpec::new(
            vec![coord(&f, 4, 0), coord(&f, 4, 1)],
            vec![2, 2],
            w,
        )
        .unwrap();
        let r = monomial_irk(&m).unwrap();
        assert_eq!((r.waring_rank, r.isotropic_rank), (3, 3));
        // x_0 x_1 standard: both non-isotropic: 2 and 2.
        let std2 = QuadraticFormSpec::standard(f.clone(), 1);
        let m = MonomialSpec::new(
            vec![coord(&f, 2, 0), coord(&f, 2, 1)],
            vec![1, 1],
            std2,
        )
        .unwrap();
        let r = monomial_irk(&m).unwrap();
        assert_eq!((r.waring_rank, r.isotropic_rank), (2, 2));
    }

    #[test]
    fn decompose_doubling_class_small() {
        let f = qi();
        // x_0 x_1 with x_1 isotropic: 2·2 = 4 terms.
        let w = omega_012(&f);
        let m = MonomialSpec::new(
            vec![coord(&f, 3, 0), coord(&f, 3, 1)],
            vec![1, 1],
            w,
        )
        .unwrap();
        let out = monomial_decompose(&m, 13).unwrap();
        assert_eq!(out.size(), 4);
        match out {
            MonomialDecomposition::Exact { field, decomposition } => {
                let target = lift_poly(&field, &m.to_poly());
                assert!(decomposition.verify(&target).valid);
            }
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn decompose_rank_preserving_exact() {
        let f = qi();
        // Both non-isotropic: x_0 x_1 under the standard form: 2 terms.
        let std2 = QuadraticFormSpec::standard(f.clone(), 1);
        let m = MonomialSpec::new(
            vec![coord(&f, 2, 0), coord(&f, 2, 1)],
            vec![1, 1],
            std2,
        )
        .unwrap();
        let out = monomial_decompose(&m, 1).unwrap();
        assert_eq!(out.size(), 2);
        // All isotropic: x_0x_1 (wait: need isotropic coordinates) —
        // hyperbolic pairs: x_0³ x_1 with both isotropic orthogonal: product
        // (1+1)(…)? exponents (1,3): waring = 4, isotropic = 4.
        let w = QuadraticFormSpec::hyperbolic(f.clone(), 3, 2);
        let m = MonomialSpec::new(
            vec![coord(&f, 4, 0), coord(&f, 4, 1)],
            vec![1, 3],
            w,
        )
        .unwrap();
        let r = monomial_irk(&m).unwrap();
        assert_eq!(r.isotropic_rank, 4);
        let out = monomial_decompose(&m, 2).unwrap();
        assert_eq!(out.size(), 4);
        match out {
            MonomialDecomposition::Exact { field, decomposition } => {
                let target = lift_poly(&field, &m.to_poly());
                assert!(decomposition.verify(&target).valid);
            }
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn decompose_float_orders() {
        let f = qi();
        // x_0 x_1² all-isotropic class needs cube roots of unity: float.
        let w = QuadraticFormSpec::hyperbolic(f.clone(), 3, 2);
        let m = MonomialSpec::new(
            vec![coord(&f, 4, 0), coord(&f, 4, 1)],
            vec![1, 2],
            w,
        )
        .unwrap();
        let out = monomial_decompose(&m, 3).unwrap();
        assert_eq!(out.size(), 3);
        match out {
            MonomialDecomposition::Float { residual, .. } => assert!(residual < 1e-9),
            _ => panic!("expected float path for order 3"),
        }
    }

    #[test]
    fn isotropic_power_is_rank_one() {
        let f = qi();
        // ℓ³ with ℓ isotropic (hyperbolic frame): size 1.
        let w = QuadraticFormSpec::hyperbolic(f.clone(), 2, 1);
        let m = MonomialSpec::new(vec![coord(&f, 3, 0)], vec![3], w).unwrap();
        let r = monomial_irk(&m).unwrap();
        assert_eq!((r.waring_rank, r.isotropic_rank), (1, 1));
        let out = monomial_decompose(&m, 5).unwrap();
        assert_eq!(out.size(), 1);
    }
}
