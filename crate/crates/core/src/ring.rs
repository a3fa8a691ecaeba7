//! Coefficient rings: exact rationals and residues modulo a prime power.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A validated prime power modulus m = p^e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    m: u64,
    p: u64,
    e: u32,
}

impl Modulus {
    /// Validates that `m` is a prime power and records its factorization.
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        let mut p = m;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                p = d;
                break;
            }
            d += 1;
        }
        let mut rest = m;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Modulus { m, p, e })
    }

    /// The modulus itself.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// The prime p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent e with m = p^e.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce_i64(&self, n: i64) -> u64 {
        let m = self.m as i128;
        (((n as i128 % m) + m) % m) as u64
    }

    /// Canonical representative of a big integer.
    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.m);
        let mut r = n % &m;
        if r.is_negative() {
            r += &m;
        }
        u64::try_from(r).expect("residue fits u64")
    }

    /// Reduces a rational a/b to ab^{-1} mod m. Fails when gcd(b, m) > 1.
    pub fn reduce_rational(&self, q: &BigRational) -> Result<u64> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        let inv = inv_mod(den, self.m).ok_or(Error::NonInvertible {
            value: den,
            modulus: self.m,
        })?;
        Ok(mul_mod(num, inv, self.m))
    }
}

/// Extended Euclid; inverse of a modulo m when gcd(a, m) = 1.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    let m = m as i128;
    Some((((t0 % m) + m) % m) as u64)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// The coefficient ring a series lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    /// Exact rational numbers.
    Rationals,
    /// Integers modulo a prime power.
    Residues(Modulus),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "Q"),
            Ring::Residues(md) => write!(f, "Z/{}", md.m()),
        }
    }
}

/// A single coefficient, tagged with its ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coeff {
    Rat(BigRational),
    Res(u64, Modulus),
}

impl Coeff {
    pub fn ring(&self) -> Ring {
        match self {
            Coeff::Rat(_) => Ring::Rationals,
            Coeff::Res(_, md) => Ring::Residues(*md),
        }
    }

    pub fn zero(ring: Ring) -> Self {
        Coeff::from_i64(0, ring)
    }

    pub fn one(ring: Ring) -> Self {
        Coeff::from_i64(1, ring)
    }

    pub fn from_i64(n: i64, ring: Ring) -> Self {
        match ring {
            Ring::Rationals => Coeff::Rat(BigRational::from_integer(BigInt::from(n))),
            Ring::Residues(md) => Coeff::Res(md.reduce_i64(n), md),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Coeff::Rat(q)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(q) => q.is_zero(),
            Coeff::Res(r, _) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rat(q) => q.is_one(),
            Coeff::Res(r, _) => *r == 1,
        }
    }

    /// Underlying rational; only valid over Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rat(q) => Some(q),
            Coeff::Res(..) => None,
        }
    }

    fn check_same(&self, other: &Coeff) -> Modulus2 {
        match (self, other) {
            (Coeff::Rat(_), Coeff::Rat(_)) => Modulus2::Q,
            (Coeff::Res(_, a), Coeff::Res(_, b)) if a == b => Modulus2::M(*a),
            _ => panic!("coefficient ring mismatch: {} vs {}", self.ring(), other.ring()),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match self.check_same(other) {
            Modulus2::Q => rat2(self, other, |a, b| a + b),
            Modulus2::M(md) => res2(self, other, |a, b| {
                (((a as u128) + (b as u128)) % md.m() as u128) as u64
            }),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        match self.check_same(other) {
            Modulus2::Q => rat2(self, other, |a, b| a - b),
            Modulus2::M(md) => res2(self, other, |a, b| {
                let m = md.m() as u128;
                (((a as u128) + m - (b as u128)) % m) as u64
            }),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match self.check_same(other) {
            Modulus2::Q => rat2(self, other, |a, b| a * b),
            Modulus2::M(md) => res2(self, other, |a, b| mul_mod(a, b, md.m())),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rat(q) => Coeff::Rat(-q),
            Coeff::Res(r, md) => Coeff::Res(if *r == 0 { 0 } else { md.m() - r }, *md),
        }
    }

    /// Multiplicative inverse; fails on zero or a non-unit residue.
    pub fn inverse(&self) -> Result<Coeff> {
        match self {
            Coeff::Rat(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero {
                        numer_val: 0,
                        denom_val: 0,
                    })
                } else {
                    Ok(Coeff::Rat(q.recip()))
                }
            }
            Coeff::Res(r, md) => inv_mod(*r, md.m())
                .map(|i| Coeff::Res(i, *md))
                .ok_or(Error::NonInvertible {
                    value: *r,
                    modulus: md.m(),
                }),
        }
    }

    pub fn div(&self, other: &Coeff) -> Result<Coeff> {
        Ok(self.mul(&other.inverse()?))
    }
}

enum Modulus2 {
    Q,
    M(Modulus),
}

fn rat2(a: &Coeff, b: &Coeff, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Coeff {
    match (a, b) {
        (Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(f(x, y)),
        _ => unreachable!(),
    }
}

fn res2(a: &Coeff, b: &Coeff, f: impl Fn(u64, u64) -> u64) -> Coeff {
    match (a, b) {
        (Coeff::Res(x, md), Coeff::Res(y, _)) => Coeff::Res(f(*x, *y), *md),
        _ => unreachable!(),
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(q) => write!(f, "{}", q),
            Coeff::Res(r, _) => write!(f, "{}", r),
        }
    }
}
