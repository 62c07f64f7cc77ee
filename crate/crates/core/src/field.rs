//! Arithmetic in the prime field F_p for small p.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted anywhere in the crate.
pub const MAX_PRIME: u32 = 97;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<u32> {
    if is_prime(p) && p <= MAX_PRIME {
        Ok(p)
    } else {
        Err(Error::InvalidPrime(p))
    }
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue.
pub fn inv(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    pow(a, (p - 2) as u64, p)
}

/// Reduce a signed integer into [0, p).
#[inline]
pub fn from_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// An element of F_p carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpElement {
    value: u32,
    modulus: u32,
}

impl FpElement {
    pub fn new(value: i64, modulus: u32) -> Self {
        Self {
            value: from_i64(value, modulus),
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        Self {
            value: pow(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| Self {
            value: inv(self.value, self.modulus),
            modulus: self.modulus,
        })
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl std::ops::Add for FpElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: add(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for FpElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: sub(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for FpElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: mul(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for FpElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: neg(self.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_up_to_cap() {
        let ps: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(check_prime(97).is_ok());
        assert!(check_prime(101).is_err());
        assert!(check_prime(9).is_err());
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 97] {
            for a in 1..p {
                assert_eq!(mul(a, inv(a, p), p), 1);
            }
        }
    }

    #[test]
    fn element_ops() {
        let a = FpElement::new(-1, 7);
        assert_eq!(a.value(), 6);
        assert_eq!((a * a).value(), 1);
        assert_eq!((a + FpElement::new(1, 7)).value(), 0);
        assert_eq!(a.inverse().unwrap().value(), 6);
        assert!(FpElement::new(14, 7).inverse().is_none());
    }
}
