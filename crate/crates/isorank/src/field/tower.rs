//! Towers of quadratic extensions over Q(i).
//!
//! A tower of depth m is Q(i)(t_1, ..., t_m) with t_k² = c_k, where each
//! discriminant c_k is a (non-square) element of the layer below. Elements
//! are coordinate vectors over the 2^m basis products of the generators;
//! index bit j of a basis monomial records whether t_{j+1} divides it, so a
//! shallower tower embeds into a deeper one by zero-padding.

use super::gauss::{gauss_sqrt, GaussField, GaussQ, Rat};
use super::{Field, FieldError};
use num::Zero;
use std::fmt::Write as _;
use std::sync::Arc;

/// Default cap on the number of adjoined square-root generators.
pub const DEFAULT_TOWER_DEPTH_CAP: usize = 8;

#[derive(Debug, PartialEq)]
struct TowerCtx {
    /// gens[k] is the discriminant of generator t_{k+1}, as coordinates over
    /// the depth-k basis (length 2^k).
    gens: Vec<Vec<GaussQ>>,
    cap: usize,
}

/// An element of a quadratic-extension tower; coordinates over the basis of
/// some tower depth. Comparison ignores trailing zero padding, so elements
/// of a sub-tower compare equal to their embeddings.
#[derive(Clone, Debug)]
pub struct TowerElem {
    c: Vec<GaussQ>,
}

impl TowerElem {
    pub fn coords(&self) -> &[GaussQ] {
        &self.c
    }

    /// The Q(i) value, when the element lies in the base layer.
    pub fn as_gauss(&self) -> Option<GaussQ> {
        if self.c[1..].iter().all(|g| g.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        let n = self.c.len().max(other.c.len());
        let zero = GaussQ::from_i64(0);
        (0..n).all(|j| {
            self.c.get(j).unwrap_or(&zero) == other.c.get(j).unwrap_or(&zero)
        })
    }
}

/// A tower field Q(i)(√c_1, ..., √c_m).
#[derive(Clone, Debug)]
pub struct TowerField {
    ctx: Arc<TowerCtx>,
}

impl Default for TowerField {
    fn default() -> Self {
        Self::qi()
    }
}

const G: GaussField = GaussField;

fn halves(a: &[GaussQ]) -> (&[GaussQ], &[GaussQ]) {
    let h = a.len() / 2;
    (&a[..h], &a[h..])
}

fn vadd(a: &[GaussQ], b: &[GaussQ]) -> Vec<GaussQ> {
    a.iter().zip(b).map(|(x, y)| G.add(x, y)).collect()
}

fn vsub(a: &[GaussQ], b: &[GaussQ]) -> Vec<GaussQ> {
    a.iter().zip(b).map(|(x, y)| G.sub(x, y)).collect()
}

fn vneg(a: &[GaussQ]) -> Vec<GaussQ> {
    a.iter().map(|x| G.neg(x)).collect()
}

fn vzero(a: &[GaussQ]) -> bool {
    a.iter().all(|x| x.is_zero())
}

impl TowerField {
    /// The base field Q(i) as a depth-0 tower.
    pub fn qi() -> Self {
        TowerField {
            ctx: Arc::new(TowerCtx {
                gens: Vec::new(),
                cap: DEFAULT_TOWER_DEPTH_CAP,
            }),
        }
    }

    pub fn with_cap(cap: usize) -> Self {
        TowerField {
            ctx: Arc::new(TowerCtx {
                gens: Vec::new(),
                cap,
            }),
        }
    }

    pub fn depth(&self) -> usize {
        self.ctx.gens.len()
    }

    fn dim(&self) -> usize {
        1 << self.depth()
    }

    pub fn from_gauss(&self, g: GaussQ) -> TowerElem {
        let mut c = vec![GaussQ::from_i64(0); self.dim()];
        c[0] = g;
        TowerElem { c }
    }

    pub fn from_rat(&self, r: Rat) -> TowerElem {
        self.from_gauss(GaussQ::from_rat(r))
    }

    pub fn i(&self) -> TowerElem {
        self.from_gauss(GaussQ::i())
    }

    /// The k-th adjoined generator t_{k+1} (0-based k).
    pub fn generator(&self, k: usize) -> TowerElem {
        assert!(k < self.depth());
        let mut c = vec![GaussQ::from_i64(0); self.dim()];
        c[1 << k] = GaussQ::from_i64(1);
        TowerElem { c }
    }

    /// Pads (or checks) an element to this field's coordinate length.
    pub fn lift(&self, a: &TowerElem) -> Vec<GaussQ> {
        let d = self.dim();
        assert!(
            a.c.len() <= d,
            "element of deeper tower used in shallower field"
        );
        let mut c = a.c.clone();
        c.resize(d, GaussQ::from_i64(0));
        c
    }

    fn gen_disc(&self, level: usize) -> &[GaussQ] {
        &self.ctx.gens[level - 1]
    }

    fn mul_level(&self, level: usize, a: &[GaussQ], b: &[GaussQ]) -> Vec<GaussQ> {
        if level == 0 {
            return vec![G.mul(&a[0], &b[0])];
        }
        let (a0, a1) = halves(a);
        let (b0, b1) = halves(b);
        if vzero(a1) && vzero(b1) {
            let lo = self.mul_level(level - 1, a0, b0);
            let hi = vec![GaussQ::from_i64(0); a1.len()];
            return [lo, hi].concat();
        }
        let c = self.gen_disc(level);
        // Karatsuba split: a0b1 + a1b0 = (a0+a1)(b0+b1) − a0b0 − a1b1.
        let a0b0 = self.mul_level(level - 1, a0, b0);
        let a1b1 = self.mul_level(level - 1, a1, b1);
        let sum = self.mul_level(level - 1, &vadd(a0, a1), &vadd(b0, b1));
        let cross = self.mul_level(level - 1, &a1b1, c);
        let lo = vadd(&a0b0, &cross);
        let hi = vsub(&vsub(&sum, &a0b0), &a1b1);
        [lo, hi].concat()
    }

    fn inv_level(&self, level: usize, a: &[GaussQ]) -> Result<Vec<GaussQ>, FieldError> {
        if level == 0 {
            return Ok(vec![G.inv(&a[0])?]);
        }
        let (a0, a1) = halves(a);
        if vzero(a1) {
            let lo = self.inv_level(level - 1, a0)?;
            let hi = vec![GaussQ::from_i64(0); a1.len()];
            return Ok([lo, hi].concat());
        }
        let c = self.gen_disc(level);
        let a0sq = self.mul_level(level - 1, a0, a0);
        let a1sq = self.mul_level(level - 1, a1, a1);
        let a1sqc = self.mul_level(level - 1, &a1sq, c);
        let den = vsub(&a0sq, &a1sqc);
        if vzero(&den) {
            return Err(FieldError::DivisionByZero);
        }
        let deninv = self.inv_level(level - 1, &den)?;
        let lo = self.mul_level(level - 1, a0, &deninv);
        let hi = vneg(&self.mul_level(level - 1, a1, &deninv));
        Ok([lo, hi].concat())
    }

    /// Square root within the tower at `level`, if one exists.
    fn sqrt_level(&self, level: usize, a: &[GaussQ]) -> Option<Vec<GaussQ>> {
        if level == 0 {
            return gauss_sqrt(&a[0]).map(|g| vec![g]);
        }
        let (a0, a1) = halves(a);
        let h = a0.len();
        let c = self.gen_disc(level);
        if vzero(a1) {
            if let Some(r) = self.sqrt_level(level - 1, a0) {
                return Some([r, vec![GaussQ::from_i64(0); h]].concat());
            }
            // x = b·t with b² = a0/c.
            let cinv = self.inv_level(level - 1, c).ok()?;
            let q = self.mul_level(level - 1, a0, &cinv);
            if let Some(b) = self.sqrt_level(level - 1, &q) {
                return Some([vec![GaussQ::from_i64(0); h], b].concat());
            }
            return None;
        }
        // x = x0 + x1·t: norm N = a0² − a1²·c must be square below, then
        // x0² = (a0 ± √N)/2.
        let a0sq = self.mul_level(level - 1, a0, a0);
        let a1sq = self.mul_level(level - 1, a1, a1);
        let norm = vsub(&a0sq, &self.mul_level(level - 1, &a1sq, c));
        let d = self.sqrt_level(level - 1, &norm)?;
        let half: Vec<GaussQ> = {
            let mut v = vec![GaussQ::from_i64(0); h];
            v[0] = GaussQ::new(Rat::new(1.into(), 2.into()), Rat::zero());
            v
        };
        let two = {
            let mut v = vec![GaussQ::from_i64(0); h];
            v[0] = GaussQ::from_i64(2);
            v
        };
        for d in [d.clone(), vneg(&d)] {
            let x0sq = self.mul_level(level - 1, &vadd(a0, &d), &half);
            if let Some(x0) = self.sqrt_level(level - 1, &x0sq) {
                if vzero(&x0) {
                    continue;
                }
                // x1 = a1 / (2 x0)
                let denom = self.mul_level(level - 1, &two, &x0);
                let denom_inv = self.inv_level(level - 1, &denom).ok()?;
                let x1 = self.mul_level(level - 1, a1, &denom_inv);
                let cand = [x0, x1].concat();
                if self.mul_level(level, &cand, &cand) == a {
                    return Some(cand);
                }
            }
        }
        None
    }

    /// Exact square root of `a` in this tower, if it exists.
    pub fn sqrt_in_tower(&self, a: &TowerElem) -> Option<TowerElem> {
        let a = self.lift(a);
        self.sqrt_level(self.depth(), &a).map(|c| TowerElem { c })
    }

    /// Returns a field containing a square root of `c` together with the
    /// root. Reuses the present tower when the root already exists there;
    /// otherwise adjoins one new generator (subject to the depth cap).
    pub fn adjoin_sqrt(&self, c: &TowerElem) -> Result<(TowerField, TowerElem), FieldError> {
        if self.is_zero(c) {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(r) = self.sqrt_in_tower(c) {
            return Ok((self.clone(), r));
        }
        if self.depth() >= self.ctx.cap {
            return Err(FieldError::ExtensionOverflow(self.ctx.cap));
        }
        let mut gens = self.ctx.gens.clone();
        gens.push(self.lift(c));
        let next = TowerField {
            ctx: Arc::new(TowerCtx {
                gens,
                cap: self.ctx.cap,
            }),
        };
        let root = next.generator(next.depth() - 1);
        Ok((next, root))
    }

    /// True when `other`'s generators are a prefix of this field's, so its
    /// elements embed canonically.
    pub fn extends(&self, other: &TowerField) -> bool {
        other.ctx.gens.len() <= self.ctx.gens.len()
            && other.ctx.gens == self.ctx.gens[..other.ctx.gens.len()]
    }
}

impl Field for TowerField {
    type Elem = TowerElem;

    fn zero(&self) -> TowerElem {
        self.from_gauss(GaussQ::from_i64(0))
    }
    fn one(&self) -> TowerElem {
        self.from_gauss(GaussQ::from_i64(1))
    }
    fn from_i64(&self, n: i64) -> TowerElem {
        self.from_gauss(GaussQ::from_i64(n))
    }
    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            c: vadd(&self.lift(a), &self.lift(b)),
        }
    }
    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            c: vsub(&self.lift(a), &self.lift(b)),
        }
    }
    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            c: self.mul_level(self.depth(), &self.lift(a), &self.lift(b)),
        }
    }
    fn neg(&self, a: &TowerElem) -> TowerElem {
        TowerElem {
            c: vneg(&self.lift(a)),
        }
    }
    fn inv(&self, a: &TowerElem) -> Result<TowerElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(TowerElem {
            c: self.inv_level(self.depth(), &self.lift(a))?,
        })
    }
    fn is_zero(&self, a: &TowerElem) -> bool {
        vzero(&a.c)
    }
    fn imaginary_unit(&self) -> Option<TowerElem> {
        Some(self.i())
    }
    fn display(&self, a: &TowerElem) -> String {
        let mut out = String::new();
        let mut first = true;
        for (idx, g) in a.c.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if !first {
                out.push_str(" + ");
            }
            first = false;
            if idx == 0 {
                let _ = write!(out, "{}", g);
            } else {
                let mut mono = String::new();
                for k in 0..usize::BITS {
                    if idx & (1 << k) != 0 {
                        if !mono.is_empty() {
                            mono.push('*');
                        }
                        let _ = write!(mono, "t{}", k + 1);
                    }
                }
                let _ = write!(out, "({})*{}", g, mono);
            }
        }
        if first {
            out.push('0');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::rat_i;

    #[test]
    fn sqrt_of_2i_reuses_qi() {
        let f = TowerField::qi();
        let c = f.from_gauss(rat_i(0, 2));
        let (f2, t) = f.adjoin_sqrt(&c).unwrap();
        assert_eq!(f2.depth(), 0);
        assert_eq!(f2.mul(&t, &t), c);
        assert_eq!(t, f.from_gauss(rat_i(1, 1)));
    }

    #[test]
    fn adjoin_sqrt2_then_detect() {
        let f = TowerField::qi();
        let two = f.from_i64(2);
        let (f1, s2) = f.adjoin_sqrt(&two).unwrap();
        assert_eq!(f1.depth(), 1);
        assert_eq!(f1.mul(&s2, &s2), f1.from_i64(2));
        // √8 = 2√2 must be found without a new generator.
        let (f2, s8) = f1.adjoin_sqrt(&f1.from_i64(8)).unwrap();
        assert_eq!(f2.depth(), 1);
        assert_eq!(f2.mul(&s8, &s8), f2.from_i64(8));
        // √(-2) = i√2 also reuses the generator.
        let (f3, sm2) = f1.adjoin_sqrt(&f1.from_i64(-2)).unwrap();
        assert_eq!(f3.depth(), 1);
        assert_eq!(f3.mul(&sm2, &sm2), f3.from_i64(-2));
    }

    #[test]
    fn nested_towers_and_inverse() {
        let f = TowerField::qi();
        let (f1, s2) = f.adjoin_sqrt(&f.from_i64(2)).unwrap();
        // 1 + √2 is not a square in Q(i,√2); adjoin √(1+√2).
        let c = f1.add(&f1.one(), &s2);
        let (f2, r) = f1.adjoin_sqrt(&c).unwrap();
        assert_eq!(f2.depth(), 2);
        assert_eq!(f2.mul(&r, &r), f2.lift_elem(&c));
        let rinv = f2.inv(&r).unwrap();
        assert!(f2.is_one(&f2.mul(&r, &rinv)));
        // (√(1+√2))⁴ = (1+√2)² = 3 + 2√2, which therefore has a root already.
        let sq = f2.mul(&c, &c);
        let (f3, _) = f2.adjoin_sqrt(&sq).unwrap();
        assert_eq!(f3.depth(), 2);
    }

    #[test]
    fn depth_cap_overflow() {
        let f = TowerField::with_cap(1);
        let (f1, _) = f.adjoin_sqrt(&f.from_i64(2)).unwrap();
        let err = f1.adjoin_sqrt(&f1.from_i64(3)).unwrap_err();
        assert!(matches!(err, FieldError::ExtensionOverflow(1)));
    }
}

impl TowerField {
    /// Embeds an element of a sub-tower as an element padded to this field.
    pub fn lift_elem(&self, a: &TowerElem) -> TowerElem {
        TowerElem { c: self.lift(a) }
    }
}
