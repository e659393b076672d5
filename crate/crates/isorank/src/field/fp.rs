//! Prime fields F_p with u64 residues.

use super::{Field, FieldError};

/// The field F_p for an odd prime `p` (p < 2^32 in intended use).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FpField {
    pub p: u64,
}

impl FpField {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        FpField { p }
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Legendre symbol; returns 1, p-1 (for -1), or 0.
    pub fn legendre(&self, a: u64) -> u64 {
        self.pow(a, (self.p - 1) / 2)
    }

    /// Tonelli–Shanks square root mod p. Returns `None` for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        // General Tonelli–Shanks.
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.legendre(z) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul_raw(tt, tt);
                i += 1;
                if i == m {
                    return None;
                }
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul_raw(b, b);
            t = self.mul_raw(t, c);
            r = self.mul_raw(r, b);
        }
        Some(r)
    }
}

impl Field for FpField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(*a, self.p - 2))
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn imaginary_unit(&self) -> Option<u64> {
        self.sqrt(self.p - 1)
    }
    fn display(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Deterministic Miller–Rabin primality test for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let f = FpField::new(n);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = f.mul(&x, &x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_f32003() {
        let f = FpField::new(32003);
        assert_eq!(f.inv(&2).unwrap(), 16002);
        assert_eq!(f.mul(&2, &16002), 1);
    }

    #[test]
    fn minus_one_not_square_mod_32003() {
        // 32003 ≡ 3 (mod 4), so -1 is a non-residue there.
        let f = FpField::new(32003);
        assert_eq!(f.legendre(32002), 32002);
        assert!(f.sqrt(32002).is_none());
        // 104729 ≡ 1 (mod 4): -1 has a square root.
        let g = FpField::new(104729);
        let r = g.sqrt(104728).unwrap();
        assert_eq!(g.mul(&r, &r), 104728);
    }

    #[test]
    fn tonelli_shanks_roundtrip() {
        for p in [32003u64, 65003, 104729] {
            let f = FpField::new(p);
            let mut found = 0;
            for a in 1..200u64 {
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(&r, &r), a % p);
                    found += 1;
                }
            }
            assert!(found > 50);
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(32003));
        assert!(is_prime_u64(65003));
        assert!(is_prime_u64(104729));
        assert!(!is_prime_u64(32001));
    }
}
