//! Gaussian rationals Q(i) with arbitrary-precision components.

use super::{Field, FieldError};
use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use std::fmt;

pub type Rat = BigRational;

/// Shorthand for the rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A Gaussian rational re + im·i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussQ {
    pub re: Rat,
    pub im: Rat,
}

impl GaussQ {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussQ { re, im }
    }
    pub fn from_rat(re: Rat) -> Self {
        GaussQ {
            re,
            im: Rat::zero(),
        }
    }
    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(rat(n, 1))
    }
    pub fn i() -> Self {
        GaussQ {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        GaussQ {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    /// re² + im², the field norm down to Q.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// re + im·i built from integers (re, im).
pub fn rat_i(re: i64, im: i64) -> GaussQ {
    GaussQ::new(rat(re, 1), rat(im, 1))
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

/// The field Q(i).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GaussField;

impl Field for GaussField {
    type Elem = GaussQ;

    fn zero(&self) -> GaussQ {
        GaussQ::from_rat(Rat::zero())
    }
    fn one(&self) -> GaussQ {
        GaussQ::from_rat(Rat::one())
    }
    fn from_i64(&self, n: i64) -> GaussQ {
        GaussQ::from_i64(n)
    }
    fn add(&self, a: &GaussQ, b: &GaussQ) -> GaussQ {
        GaussQ::new(&a.re + &b.re, &a.im + &b.im)
    }
    fn sub(&self, a: &GaussQ, b: &GaussQ) -> GaussQ {
        GaussQ::new(&a.re - &b.re, &a.im - &b.im)
    }
    fn mul(&self, a: &GaussQ, b: &GaussQ) -> GaussQ {
        GaussQ::new(
            &a.re * &b.re - &a.im * &b.im,
            &a.re * &b.im + &a.im * &b.re,
        )
    }
    fn neg(&self, a: &GaussQ) -> GaussQ {
        GaussQ::new(-a.re.clone(), -a.im.clone())
    }
    fn inv(&self, a: &GaussQ) -> Result<GaussQ, FieldError> {
        let n = a.norm();
        if n.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(GaussQ::new(&a.re / &n, -a.im.clone() / &n))
    }
    fn is_zero(&self, a: &GaussQ) -> bool {
        a.is_zero()
    }
    fn imaginary_unit(&self) -> Option<GaussQ> {
        Some(GaussQ::i())
    }
    fn display(&self, a: &GaussQ) -> String {
        a.to_string()
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// Exact square root of a Gaussian rational within Q(i), if one exists.
pub fn gauss_sqrt(z: &GaussQ) -> Option<GaussQ> {
    if z.is_zero() {
        return Some(GaussQ::from_rat(Rat::zero()));
    }
    if z.im.is_zero() {
        if !z.re.is_negative() {
            return rat_sqrt(&z.re).map(GaussQ::from_rat);
        }
        return rat_sqrt(&(-z.re.clone())).map(|r| GaussQ::new(Rat::zero(), r));
    }
    // z = x + iy with y ≠ 0: need x² + y² = s² in Q, then a² = (x+s)/2 square.
    let s = rat_sqrt(&z.norm())?;
    let half = rat(1, 2);
    let a2 = (&z.re + &s) * &half;
    let a = rat_sqrt(&a2)?;
    if a.is_zero() {
        return None;
    }
    let b = &z.im / (&a * rat(2, 1));
    let cand = GaussQ::new(a, b);
    let f = GaussField;
    if f.mul(&cand, &cand) == *z {
        Some(cand)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_norm_product() {
        // (1+i)(1-i) = 2
        let f = GaussField;
        let a = rat_i(1, 1);
        let b = rat_i(1, -1);
        assert_eq!(f.mul(&a, &b), rat_i(2, 0));
    }

    #[test]
    fn inverse() {
        let f = GaussField;
        let a = rat_i(3, 4);
        let v = f.mul(&a, &f.inv(&a).unwrap());
        assert!(f.is_one(&v));
    }

    #[test]
    fn sqrt_of_2i_is_1_plus_i() {
        let r = gauss_sqrt(&rat_i(0, 2)).unwrap();
        let f = GaussField;
        assert_eq!(f.mul(&r, &r), rat_i(0, 2));
        assert_eq!(r, rat_i(1, 1));
    }

    #[test]
    fn sqrt_failures() {
        assert!(gauss_sqrt(&rat_i(2, 0)).is_none()); // √2 ∉ Q(i)
        assert!(gauss_sqrt(&rat_i(1, 1)).is_none()); // √(1+i) ∉ Q(i)
        assert_eq!(gauss_sqrt(&rat_i(-9, 0)).unwrap(), rat_i(0, 3));
        assert_eq!(
            gauss_sqrt(&GaussQ::new(rat(9, 4), Rat::zero())).unwrap(),
            GaussQ::new(rat(3, 2), Rat::zero())
        );
    }
}
