//! Sparse homogeneous multivariate polynomials over an exact field.

use crate::field::{Field, FieldError};
use std::collections::BTreeMap;

/// Errors from polynomial construction and arithmetic.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("inhomogeneous term: exponents sum to {0}, declared degree {1}")]
    Inhomogeneous(usize, usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A homogeneous polynomial of fixed arity and degree. Terms are kept in a
/// sorted map from exponent vectors to nonzero coefficients, so equality is
/// structural.
#[derive(Clone, Debug)]
pub struct MultiPoly<F: Field> {
    pub field: F,
    pub arity: usize,
    pub degree: usize,
    pub terms: BTreeMap<Vec<u8>, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.degree == other.degree && self.terms == other.terms
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, arity: usize, degree: usize) -> Self {
        MultiPoly {
            field,
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: F,
        arity: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<u8>, F::Elem)>,
    ) -> Result<Self, PolyError> {
        let mut map: BTreeMap<Vec<u8>, F::Elem> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != arity {
                return Err(PolyError::ArityMismatch(e.len(), arity));
            }
            let s: usize = e.iter().map(|&x| x as usize).sum();
            if s != degree {
                return Err(PolyError::Inhomogeneous(s, degree));
            }
            match map.get_mut(&e) {
                Some(old) => {
                    let v = field.add(old, &c);
                    if field.is_zero(&v) {
                        map.remove(&e);
                    } else {
                        *old = v;
                    }
                }
                None => {
                    if !field.is_zero(&c) {
                        map.insert(e, c);
                    }
                }
            }
        }
        Ok(MultiPoly {
            field,
            arity,
            degree,
            terms: map,
        })
    }

    /// A single monomial c·x^e.
    pub fn monomial(field: F, exps: &[u8], coeff: F::Elem) -> Self {
        let degree = exps.iter().map(|&x| x as usize).sum();
        Self::from_terms(field, exps.len(), degree, [(exps.to_vec(), coeff)]).unwrap()
    }

    /// The linear form with the given coefficient vector.
    pub fn linear(field: F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().filter_map(|(j, c)| {
            if field.is_zero(c) {
                None
            } else {
                let mut e = vec![0u8; n];
                e[j] = 1;
                Some((e, c.clone()))
            }
        });
        Self::from_terms(field.clone(), n, 1, terms.collect::<Vec<_>>()).unwrap()
    }

    /// A degree-0 polynomial wrapping a scalar.
    pub fn constant(field: F, arity: usize, value: F::Elem) -> Self {
        if field.is_zero(&value) {
            return Self::zero(field, arity, 0);
        }
        Self::from_terms(field, arity, 0, [(vec![0u8; arity], value)]).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The scalar value of a degree-0 polynomial.
    pub fn as_scalar(&self) -> F::Elem {
        assert_eq!(self.degree, 0);
        self.terms
            .values()
            .next()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeff(&self, e: &[u8]) -> F::Elem {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch(self.arity, other.arity));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(PolyError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            match out.get_mut(e) {
                Some(v) => {
                    let s = self.field.add(v, c);
                    if self.field.is_zero(&s) {
                        out.remove(e);
                    } else {
                        *v = s;
                    }
                }
                None => {
                    out.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(MultiPoly {
            field: self.field.clone(),
            arity: self.arity,
            degree: self.degree.max(other.degree),
            terms: out,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.neg(v);
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(self.field.clone(), self.arity, self.degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.field.mul(v, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch(self.arity, other.arity));
        }
        let f = &self.field;
        let mut out: BTreeMap<Vec<u8>, F::Elem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = f.mul(ca, cb);
                match out.get_mut(&e) {
                    Some(v) => {
                        let s = f.add(v, &c);
                        if f.is_zero(&s) {
                            out.remove(&e);
                        } else {
                            *v = s;
                        }
                    }
                    None => {
                        if !f.is_zero(&c) {
                            out.insert(e, c);
                        }
                    }
                }
            }
        }
        Ok(MultiPoly {
            field: f.clone(),
            arity: self.arity,
            degree: self.degree + other.degree,
            terms: out,
        })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::constant(self.field.clone(), self.arity, self.field.one());
        for _ in 0..k {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// ∂/∂x_j.
    pub fn derivative(&self, j: usize) -> Self {
        let f = &self.field;
        let mut out: BTreeMap<Vec<u8>, F::Elem> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[j] -= 1;
            let k = f.from_i64(e[j] as i64);
            let c2 = f.mul(c, &k);
            match out.get_mut(&e2) {
                Some(v) => *v = f.add(v, &c2),
                None => {
                    out.insert(e2, c2);
                }
            }
        }
        out.retain(|_, v| !f.is_zero(v));
        MultiPoly {
            field: f.clone(),
            arity: self.arity,
            degree: self.degree.saturating_sub(1),
            terms: out,
        }
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.arity);
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = f.mul(&t, &point[j]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes x_j ↦ images[j], a linear form over `target_arity`
    /// variables; implements linear changes of variables and restriction to
    /// linear subspaces.
    pub fn substitute(
        &self,
        images: &[Vec<F::Elem>],
        target_arity: usize,
    ) -> Result<Self, PolyError> {
        if images.len() != self.arity {
            return Err(PolyError::ArityMismatch(images.len(), self.arity));
        }
        let f = self.field.clone();
        let lins: Vec<MultiPoly<F>> = images
            .iter()
            .map(|row| {
                assert_eq!(row.len(), target_arity);
                MultiPoly::linear(f.clone(), row)
            })
            .collect();
        let mut acc = MultiPoly::zero(f.clone(), target_arity, self.degree);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(f.clone(), target_arity, c.clone());
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&lins[j])?;
                }
            }
            acc = acc.add(&t)?;
        }
        acc.degree = self.degree;
        Ok(acc)
    }

    /// Dense coefficient vector over the monomial basis given by `index`.
    pub fn to_dense(&self, index: &MonomialIndex) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); index.len()];
        for (e, c) in &self.terms {
            v[index.rank(e)] = c.clone();
        }
        v
    }

    pub fn display(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut mono = String::new();
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(vars[j]);
                if k > 1 {
                    mono.push_str(&format!("^{}", k));
                }
            }
            let cs = self.field.display(c);
            if mono.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(mono);
            } else {
                parts.push(format!("({})*{}", cs, mono));
            }
        }
        parts.join(" + ")
    }
}

/// Enumerates the monomials of fixed arity and degree in the same order the
/// BTreeMap uses (lexicographic on exponent vectors), with O(1) rank lookup.
pub struct MonomialIndex {
    pub arity: usize,
    pub degree: usize,
    exps: Vec<Vec<u8>>,
    ranks: std::collections::HashMap<Vec<u8>, usize>,
}

impl MonomialIndex {
    pub fn new(arity: usize, degree: usize) -> Self {
        let mut exps = Vec::new();
        let mut cur = vec![0u8; arity];
        gen_exps(arity, degree, 0, &mut cur, &mut exps);
        exps.sort();
        let ranks = exps
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        MonomialIndex {
            arity,
            degree,
            exps,
            ranks,
        }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn rank(&self, e: &[u8]) -> usize {
        self.ranks[e]
    }

    pub fn exp(&self, rank: usize) -> &[u8] {
        &self.exps[rank]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u8>> {
        self.exps.iter()
    }
}

fn gen_exps(arity: usize, rem: usize, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if pos == arity - 1 {
        cur[pos] = rem as u8;
        out.push(cur.clone());
        return;
    }
    for k in 0..=rem {
        cur[pos] = k as u8;
        gen_exps(arity, rem - k, pos + 1, cur, out);
    }
}

/// dim R_{n,d} = C(n+d, n) as usize.
pub fn dim_forms(n: usize, d: usize) -> usize {
    binomial(n + d, n)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_i, GaussField};

    fn gp(terms: &[(&[u8], i64)], arity: usize, degree: usize) -> MultiPoly<GaussField> {
        MultiPoly::from_terms(
            GaussField,
            arity,
            degree,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), rat_i(*c, 0)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = gp(&[(&[1, 0], 1), (&[0, 1], 1)], 2, 1);
        let g = gp(&[(&[1, 0], 1), (&[0, 1], -1)], 2, 1);
        let prod = f.mul(&g).unwrap();
        assert_eq!(prod, gp(&[(&[2, 0], 1), (&[0, 2], -1)], 2, 2));
    }

    #[test]
    fn substitution_collapses_variables() {
        // x0·x1 with x0 ↦ u, x1 ↦ u gives u².
        let f = gp(&[(&[1, 1], 1)], 2, 2);
        let images = vec![vec![rat_i(1, 0)], vec![rat_i(1, 0)]];
        let g = f.substitute(&images, 1).unwrap();
        assert_eq!(g, gp(&[(&[2], 1)], 1, 2));
    }

    #[test]
    fn evaluation() {
        // x0²x1 at (2,3) = 12
        let f = gp(&[(&[2, 1], 1)], 2, 3);
        let v = f.eval(&[rat_i(2, 0), rat_i(3, 0)]);
        assert_eq!(v, rat_i(12, 0));
    }

    #[test]
    fn homogeneity_enforced() {
        let r = MultiPoly::from_terms(GaussField, 2, 2, [(vec![1u8, 0], rat_i(1, 0))]);
        assert!(matches!(r, Err(PolyError::Inhomogeneous(1, 2))));
    }

    #[test]
    fn monomial_index_counts() {
        let idx = MonomialIndex::new(3, 4);
        assert_eq!(idx.len(), dim_forms(2, 4));
        assert_eq!(idx.len(), 15);
        for r in 0..idx.len() {
            assert_eq!(idx.rank(idx.exp(r)), r);
        }
    }
}
