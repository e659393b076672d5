//! The apolar (contraction) action, harmonicity and isotropy predicates,
//! harmonic projection, perps, harmonic bases, and tangent spaces to the
//! variety of powers of isotropic linear forms.
//!
//! A quadratic form is carried as its Gram matrix G. The dual-side operator
//! acts on forms by differentiation, Σ g_ij ∂_i∂_j, and the pairing of two
//! linear forms with coefficient vectors a, b is aᵀGb. Harmonic projection
//! splits f = q·g + h against the dual quadric q (Gram G⁻¹), the unique
//! complement on which the operator vanishes.

use crate::field::{Field, FieldError};
use crate::matrix::{MatrixExact, RowEchelon};
use crate::poly::{MonomialIndex, MultiPoly, PolyError};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum ApolarityError {
    #[error("contraction degree {0} exceeds target degree {1}")]
    ContractDegree(usize, usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("linear form is not isotropic")]
    NotIsotropic,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A linear form by its coefficient vector.
#[derive(Clone, Debug)]
pub struct LinearForm<F: Field>(pub Vec<F::Elem>);

impl<F: Field> PartialEq for LinearForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<F: Field> LinearForm<F> {
    pub fn new(coeffs: Vec<F::Elem>) -> Self {
        LinearForm(coeffs)
    }
    pub fn arity(&self) -> usize {
        self.0.len()
    }
    pub fn to_poly(&self, field: &F) -> MultiPoly<F> {
        MultiPoly::linear(field.clone(), &self.0)
    }
    pub fn is_zero(&self, field: &F) -> bool {
        self.0.iter().all(|c| field.is_zero(c))
    }
}

/// A non-degenerate (unless stated otherwise) quadratic form given by a
/// symmetric Gram matrix; serves both as the dual-side operator ω and, via
/// the inverse Gram, as the quadric q on the form side.
#[derive(Clone, Debug)]
pub struct QuadraticFormSpec<F: Field> {
    pub field: F,
    pub gram: MatrixExact<F>,
    nondegenerate: bool,
}

impl<F: Field> QuadraticFormSpec<F> {
    pub fn from_gram(field: F, gram: MatrixExact<F>) -> Self {
        assert!(gram.is_symmetric(), "Gram matrix must be symmetric");
        let nondegenerate = !field.is_zero(&gram.det());
        QuadraticFormSpec {
            field,
            gram,
            nondegenerate,
        }
    }

    /// ω = α_0² + … + α_n².
    pub fn standard(field: F, n: usize) -> Self {
        let gram = MatrixExact::identity(field.clone(), n + 1);
        QuadraticFormSpec {
            field,
            gram,
            nondegenerate: true,
        }
    }

    /// k hyperbolic pairs α_j α_{j+k} plus squares on the remaining
    /// coordinates: ω = Σ_{j<k} α_j α_{j+k} + Σ_{j≥2k} α_j².
    pub fn hyperbolic(field: F, n: usize, k: usize) -> Self {
        assert!(2 * k <= n + 1);
        let mut gram = MatrixExact::zeros(field.clone(), n + 1, n + 1);
        let half = field
            .inv(&field.from_i64(2))
            .expect("characteristic 2 unsupported");
        for j in 0..k {
            *gram.at_mut(j, j + k) = half.clone();
            *gram.at_mut(j + k, j) = half.clone();
        }
        for j in 2 * k..=n {
            *gram.at_mut(j, j) = field.one();
        }
        Self::from_gram(field, gram)
    }

    pub fn arity(&self) -> usize {
        self.gram.rows
    }

    pub fn n(&self) -> usize {
        self.arity() - 1
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// The operator as a dual-side polynomial Σ g_ii α_i² + 2Σ_{i<j} g_ij α_iα_j.
    pub fn omega_poly(&self) -> MultiPoly<F> {
        let f = &self.field;
        let n1 = self.arity();
        let mut terms = Vec::new();
        for i in 0..n1 {
            for j in i..n1 {
                let g = self.gram.at(i, j);
                if f.is_zero(g) {
                    continue;
                }
                let mut e = vec![0u8; n1];
                let c = if i == j {
                    g.clone()
                } else {
                    f.add(g, g)
                };
                e[i] += 1;
                e[j] += 1;
                terms.push((e, c));
            }
        }
        MultiPoly::from_terms(f.clone(), n1, 2, terms).unwrap()
    }

    /// The dual quadric q on the form side, from the inverse Gram matrix.
    pub fn dual_quadric(&self) -> Result<MultiPoly<F>, ApolarityError> {
        if !self.nondegenerate {
            return Err(ApolarityError::DegenerateForm);
        }
        let inv = self.gram.inverse()?;
        let spec = QuadraticFormSpec {
            field: self.field.clone(),
            gram: inv,
            nondegenerate: true,
        };
        Ok(spec.omega_poly())
    }

    /// The bilinear pairing aᵀ G b of two coefficient vectors.
    pub fn pairing(&self, a: &LinearForm<F>, b: &LinearForm<F>) -> F::Elem {
        let f = &self.field;
        assert_eq!(a.arity(), self.arity());
        assert_eq!(b.arity(), self.arity());
        let mut acc = f.zero();
        for i in 0..self.arity() {
            if f.is_zero(&a.0[i]) {
                continue;
            }
            for j in 0..self.arity() {
                if f.is_zero(&b.0[j]) || f.is_zero(self.gram.at(i, j)) {
                    continue;
                }
                let t = f.mul(&a.0[i], &f.mul(self.gram.at(i, j), &b.0[j]));
                acc = f.add(&acc, &t);
            }
        }
        acc
    }
}

/// Contraction φ∘f: every monomial of the dual-side φ acts on f as the
/// corresponding iterated partial derivative.
pub fn contract<F: Field>(
    phi: &MultiPoly<F>,
    f: &MultiPoly<F>,
) -> Result<MultiPoly<F>, ApolarityError> {
    if phi.arity != f.arity {
        return Err(ApolarityError::ArityMismatch(phi.arity, f.arity));
    }
    if phi.degree > f.degree {
        return Err(ApolarityError::ContractDegree(phi.degree, f.degree));
    }
    let fld = &f.field;
    let mut out = MultiPoly::zero(fld.clone(), f.arity, f.degree - phi.degree);
    for (pe, pc) in &phi.terms {
        for (fe, fc) in &f.terms {
            if pe.iter().zip(fe).any(|(a, b)| a > b) {
                continue;
            }
            let mut c = fld.mul(pc, fc);
            let mut e = fe.clone();
            for j in 0..e.len() {
                for _ in 0..pe[j] {
                    c = fld.mul(&c, &fld.from_i64(e[j] as i64));
                    e[j] -= 1;
                }
            }
            let t = MultiPoly::from_terms(fld.clone(), f.arity, f.degree - phi.degree, [(e, c)])?;
            out = out.add(&t)?;
        }
    }
    Ok(out)
}

/// True when ω∘f = 0; degrees 0 and 1 are vacuously harmonic.
pub fn is_harmonic<F: Field>(
    f: &MultiPoly<F>,
    w: &QuadraticFormSpec<F>,
) -> Result<bool, ApolarityError> {
    if f.arity != w.arity() {
        return Err(ApolarityError::ArityMismatch(f.arity, w.arity()));
    }
    if f.degree < 2 {
        return Ok(true);
    }
    Ok(contract(&w.omega_poly(), f)?.is_zero())
}

/// Splits f = q·g + h with h harmonic; the unique such pair.
pub fn harmonic_project<F: Field>(
    f: &MultiPoly<F>,
    w: &QuadraticFormSpec<F>,
) -> Result<(MultiPoly<F>, MultiPoly<F>), ApolarityError> {
    if !w.is_nondegenerate() {
        return Err(ApolarityError::DegenerateForm);
    }
    let fld = &f.field;
    let d = f.degree;
    if d < 2 {
        return Ok((f.clone(), MultiPoly::zero(fld.clone(), f.arity, 0)));
    }
    let q = w.dual_quadric()?;
    let omega = w.omega_poly();
    let idx = MonomialIndex::new(f.arity, d - 2);
    // Matrix of g ↦ ω∘(q·g) on the degree d-2 coefficient space.
    let m = MatrixExact::from_fn(fld.clone(), idx.len(), idx.len(), |_, _| fld.zero());
    let mut m = m;
    for col in 0..idx.len() {
        let g = MultiPoly::monomial(fld.clone(), idx.exp(col), fld.one());
        let img = contract(&omega, &q.mul(&g)?)?;
        for (e, c) in &img.terms {
            *m.at_mut(idx.rank(e), col) = c.clone();
        }
    }
    let rhs = contract(&omega, f)?.to_dense(&idx);
    let sol = m.solve(&rhs).ok_or(ApolarityError::DegenerateForm)?;
    let mut g = MultiPoly::zero(fld.clone(), f.arity, d - 2);
    for (col, c) in sol.iter().enumerate() {
        if fld.is_zero(c) {
            continue;
        }
        g = g.add(&MultiPoly::monomial(fld.clone(), idx.exp(col), c.clone()))?;
    }
    let h = f.sub(&q.mul(&g)?)?;
    debug_assert!(is_harmonic(&h, w)?);
    Ok((h, g))
}

/// ω∘ℓ² = 0, evaluated through the Gram pairing.
pub fn is_isotropic<F: Field>(l: &LinearForm<F>, w: &QuadraticFormSpec<F>) -> bool {
    w.field.is_zero(&w.pairing(l, l))
}

/// ω∘(ℓ₁ℓ₂) = 0.
pub fn is_orthogonal<F: Field>(
    l1: &LinearForm<F>,
    l2: &LinearForm<F>,
    w: &QuadraticFormSpec<F>,
) -> bool {
    w.field.is_zero(&w.pairing(l1, l2))
}

/// Exact basis of the space of degree-d harmonic forms, computed as the
/// kernel of contraction by ω from degree d to degree d-2.
pub fn harmonic_basis<F: Field>(
    n: usize,
    d: usize,
    w: &QuadraticFormSpec<F>,
) -> Result<Vec<MultiPoly<F>>, ApolarityError> {
    if !w.is_nondegenerate() {
        return Err(ApolarityError::DegenerateForm);
    }
    let fld = &w.field;
    assert_eq!(w.arity(), n + 1);
    let idx_d = MonomialIndex::new(n + 1, d);
    if d < 2 {
        return Ok(idx_d
            .iter()
            .map(|e| MultiPoly::monomial(fld.clone(), e, fld.one()))
            .collect());
    }
    let idx_lo = MonomialIndex::new(n + 1, d - 2);
    let omega = w.omega_poly();
    let mut m = MatrixExact::zeros(fld.clone(), idx_lo.len(), idx_d.len());
    for col in 0..idx_d.len() {
        let mono = MultiPoly::monomial(fld.clone(), idx_d.exp(col), fld.one());
        let img = contract(&omega, &mono)?;
        for (e, c) in &img.terms {
            *m.at_mut(idx_lo.rank(e), col) = c.clone();
        }
    }
    let rk = m.rank_kernel();
    Ok(rk
        .kernel
        .into_iter()
        .map(|v| dense_to_poly(fld, &idx_d, &v))
        .collect())
}

/// Basis of {φ ∈ D_{n,d} : φ∘f = 0 for every f in the span}.
pub fn perp<F: Field>(
    span: &[MultiPoly<F>],
    n: usize,
    d: usize,
    field: &F,
) -> Result<Vec<MultiPoly<F>>, ApolarityError> {
    let idx = MonomialIndex::new(n + 1, d);
    // φ-monomial e acts on f as the iterated derivative; the full pairing of
    // α^e with x^e is Π e_j!.
    let mut rows = Vec::with_capacity(span.len());
    for f in span {
        assert_eq!(f.degree, d);
        assert_eq!(f.arity, n + 1);
        let mut row = vec![field.zero(); idx.len()];
        for (e, c) in &f.terms {
            let mut fac = field.one();
            for &k in e {
                for t in 1..=k as i64 {
                    fac = field.mul(&fac, &field.from_i64(t));
                }
            }
            row[idx.rank(e)] = field.mul(c, &fac);
        }
        rows.push(row);
    }
    let m = MatrixExact::from_rows(field.clone(), rows);
    let m = if span.is_empty() {
        MatrixExact::zeros(field.clone(), 1, idx.len())
    } else {
        m
    };
    let rk = m.rank_kernel();
    Ok(rk
        .kernel
        .into_iter()
        .map(|v| dense_to_poly(field, &idx, &v))
        .collect())
}

/// Basis of ℓ^⊥ = {m : ω∘(ℓm) = 0}, with ℓ itself first when it is
/// isotropic (deterministic completion by coordinate pivots).
pub fn perp_of_linear<F: Field>(
    l: &LinearForm<F>,
    w: &QuadraticFormSpec<F>,
) -> Vec<LinearForm<F>> {
    let fld = &w.field;
    let n1 = w.arity();
    let mut ech = RowEchelon::new(fld.clone(), n1);
    let mut basis: Vec<LinearForm<F>> = Vec::new();
    // The defining functional of ℓ^⊥ is b ↦ ℓᵀ G b.
    let row: Vec<F::Elem> = (0..n1)
        .map(|j| {
            let mut acc = fld.zero();
            for i in 0..n1 {
                fld.add_mul_assign(&mut acc, &l.0[i], w.gram.at(i, j));
            }
            acc
        })
        .collect();
    let feed = |cand: Vec<F::Elem>, basis: &mut Vec<LinearForm<F>>, ech: &mut RowEchelon<F>| {
        let mut acc = fld.zero();
        for (c, r) in cand.iter().zip(&row) {
            fld.add_mul_assign(&mut acc, c, r);
        }
        if !fld.is_zero(&acc) {
            return;
        }
        if ech.push(cand.clone()) {
            basis.push(LinearForm(cand));
        }
    };
    if is_isotropic(l, w) {
        feed(l.0.clone(), &mut basis, &mut ech);
    }
    // Complete with kernel vectors of the single functional, in column order.
    let m = MatrixExact::from_rows(fld.clone(), vec![row.clone()]);
    for v in m.rank_kernel().kernel {
        feed(v, &mut basis, &mut ech);
    }
    basis
}

/// Tangent space to the isotropic Veronese at ℓ^d: the span of ℓ^{d-1}·m
/// over m ∈ ℓ^⊥, a space of dimension n, every element harmonic.
pub fn tangent_space<F: Field>(
    l: &LinearForm<F>,
    d: usize,
    w: &QuadraticFormSpec<F>,
) -> Result<Vec<MultiPoly<F>>, ApolarityError> {
    if !is_isotropic(l, w) {
        return Err(ApolarityError::NotIsotropic);
    }
    assert!(d >= 2);
    let fld = &w.field;
    let lp = l.to_poly(fld).pow(d - 1);
    let basis = perp_of_linear(l, w);
    debug_assert_eq!(basis.len(), w.n());
    basis
        .iter()
        .map(|m| lp.mul(&m.to_poly(fld)).map_err(ApolarityError::from))
        .collect()
}

pub fn dense_to_poly<F: Field>(field: &F, idx: &MonomialIndex, v: &[F::Elem]) -> MultiPoly<F> {
    let terms: Vec<(Vec<u8>, F::Elem)> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(r, c)| (idx.exp(r).to_vec(), c.clone()))
        .collect();
    MultiPoly::from_terms(field.clone(), idx.arity, idx.degree, terms).unwrap()
}

/// dim H_{n,d} = C(n+d, n) − C(n+d−2, n).
pub fn harmonic_dim(n: usize, d: usize) -> usize {
    let a = crate::poly::binomial(n + d, n);
    let b = if d >= 2 {
        crate::poly::binomial(n + d - 2, n)
    } else {
        0
    };
    a - b
}
