use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A validated prime modulus. Kept below 2^31 so that products of two
/// residues fit in a `u64` without overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        a %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 - 2)
    }

    /// `(-1)^k` as a residue.
    pub fn sign(self, k: i64) -> u64 {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of a prime field, carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u64,
    p: Prime,
}

impl Fp {
    pub fn new(value: i64, p: Prime) -> Self {
        Fp {
            residue: p.reduce(value),
            p,
        }
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn inv(self) -> Option<Fp> {
        if self.residue == 0 {
            None
        } else {
            Some(Fp {
                residue: self.p.inv(self.residue),
                p: self.p,
            })
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        Fp {
            residue: self.p.add(self.residue, rhs.residue),
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        Fp {
            residue: self.p.sub(self.residue, rhs.residue),
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        Fp {
            residue: self.p.mul(self.residue, rhs.residue),
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            residue: self.p.neg(self.residue),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_is_validated() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(101).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(Error::NotPrime(91)));
        assert!(Prime::new(1 << 31).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let p = Prime::new(7).unwrap();
        let a = Fp::new(3, p);
        let b = Fp::new(-2, p);
        assert_eq!(b.residue(), 5);
        assert_eq!((a + b).residue(), 1);
        assert_eq!((a - b).residue(), 5);
        assert_eq!((a * b).residue(), 1);
        assert_eq!(a.inv().unwrap().residue(), 5);
        assert!(Fp::new(14, p).inv().is_none());
        for x in 1..7 {
            assert_eq!(p.mul(x, p.inv(x)), 1);
        }
    }
}
