//! Truncated power series with explicit valid-order bookkeeping.
//!
//! A `Series` of order N certifies coefficients a_0..a_N and nothing past
//! them. Every operation returns a result whose order states exactly how
//! many coefficients are still trustworthy: binary operations truncate to
//! the shorter operand, division by a series of valuation v loses v orders,
//! and substitution x -> x^m stretches the window to m*N + m - 1.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ring::{Coeff, Ring};

/// Exact truncated power series over Q or Z/p^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    ring: Ring,
    coeffs: Vec<Coeff>,
}

impl Series {
    /// Wraps explicit coefficients a_0..a_N. All must live in `ring`.
    pub fn new(ring: Ring, coeffs: Vec<Coeff>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        for c in &coeffs {
            if c.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring.to_string(),
                    right: c.ring().to_string(),
                });
            }
        }
        Ok(Series { ring, coeffs })
    }

    pub fn from_i64(ring: Ring, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&n| Coeff::from_i64(n, ring)).collect();
        Series { ring, coeffs }
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        Series {
            ring: Ring::Rationals,
            coeffs: coeffs.into_iter().map(Coeff::Rat).collect(),
        }
    }

    /// The zero series known through `order`.
    pub fn zero(ring: Ring, order: usize) -> Self {
        Series {
            ring,
            coeffs: vec![Coeff::zero(ring); order + 1],
        }
    }

    /// The constant 1 known through `order`.
    pub fn one(ring: Ring, order: usize) -> Self {
        let mut s = Series::zero(ring, order);
        s.coeffs[0] = Coeff::one(ring);
        s
    }

    /// c * x^k known through `order`. Requires k <= order.
    pub fn monomial(ring: Ring, c: Coeff, k: usize, order: usize) -> Result<Self> {
        if k > order {
            return Err(Error::OrderExceeded { index: k, order });
        }
        let mut s = Series::zero(ring, order);
        if c.ring() != ring {
            return Err(Error::RingMismatch {
                left: ring.to_string(),
                right: c.ring().to_string(),
            });
        }
        s.coeffs[k] = c;
        Ok(s)
    }

    /// Uniform random integer coefficients in [-bound, bound].
    pub fn random_integer(ring: Ring, order: usize, bound: i64, rng: &mut impl Rng) -> Self {
        let coeffs = (0..=order)
            .map(|_| Coeff::from_i64(rng.gen_range(-bound..=bound), ring))
            .collect();
        Series { ring, coeffs }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Highest certified exponent N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All certified coefficients a_0..a_N.
    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    /// Coefficient a_i, or an error past the certified order.
    pub fn coeff(&self, i: usize) -> Result<&Coeff> {
        self.coeffs.get(i).ok_or(Error::OrderExceeded {
            index: i,
            order: self.order(),
        })
    }

    /// Index of the first nonzero certified coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Drops certified coefficients past `order`. Fails if the series does
    /// not reach `order` in the first place.
    pub fn truncated(&self, order: usize) -> Result<Series> {
        if order > self.order() {
            return Err(Error::InsufficientOrder {
                need: order,
                have: self.order(),
            });
        }
        Ok(Series {
            ring: self.ring,
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_ring(&self, other: &Series) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| self.coeffs[i].add(&other.coeffs[i]))
            .collect();
        Ok(Series { ring: self.ring, coeffs })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| self.coeffs[i].sub(&other.coeffs[i]))
            .collect();
        Ok(Series { ring: self.ring, coeffs })
    }

    pub fn neg(&self) -> Series {
        Series {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(Coeff::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Result<Series> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: c.ring().to_string(),
            });
        }
        Ok(Series {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        })
    }

    /// Truncated Cauchy product to the shorter operand's order.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        let zero = Coeff::zero(self.ring);
        let mut coeffs = vec![zero; n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        Ok(Series { ring: self.ring, coeffs })
    }

    /// Valuation-aware exact division.
    ///
    /// With g = x^v * ghat, ghat(0) != 0, requires the numerator's first v
    /// coefficients to vanish; the quotient is certified to
    /// min(order(f), order(g)) - v.
    pub fn div(&self, other: &Series) -> Result<Series> {
        self.check_ring(other)?;
        let v = match other.valuation() {
            Some(v) => v,
            None => {
                return Err(Error::DivisionByZero {
                    numer_val: self.valuation().unwrap_or(self.order() + 1),
                    denom_val: other.order() + 1,
                })
            }
        };
        if let Some(nv) = self.coeffs[..v.min(self.coeffs.len())]
            .iter()
            .position(|c| !c.is_zero())
        {
            return Err(Error::DivisionByZero {
                numer_val: nv,
                denom_val: v,
            });
        }
        if self.order() < v {
            return Err(Error::InsufficientOrder {
                need: v,
                have: self.order(),
            });
        }
        let n = self.order().min(other.order()) - v;
        let lead_inv = other.coeffs[v].inverse()?;
        let zero = Coeff::zero(self.ring);
        let mut q = vec![zero; n + 1];
        for i in 0..=n {
            // a_{v+i} = sum_{j<=i} q_j * g_{v+i-j}
            let mut acc = self.coeffs[v + i].clone();
            for j in 0..i {
                if q[j].is_zero() {
                    continue;
                }
                acc = acc.sub(&q[j].mul(&other.coeffs[v + i - j]));
            }
            q[i] = acc.mul(&lead_inv);
        }
        Ok(Series { ring: self.ring, coeffs: q })
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn pow(&self, k: i64) -> Result<Series> {
        if k < 0 {
            let inv = Series::one(self.ring, self.order()).div(self)?;
            return inv.pow(-k);
        }
        let mut acc = Series::one(self.ring, self.order());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Square root with constant term 1, certified to the input's order.
    pub fn sqrt(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SqrtConstantTerm {
                found: self.coeffs[0].to_string(),
            });
        }
        let two = Coeff::from_i64(2, self.ring);
        let half = match two.inverse() {
            Ok(h) => h,
            Err(_) => match self.ring {
                Ring::Residues(md) => return Err(Error::SqrtEvenModulus(md.m())),
                Ring::Rationals => unreachable!(),
            },
        };
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(Coeff::one(self.ring));
        for i in 1..=n {
            // a_i = 2 b_0 b_i + sum_{0<j<i} b_j b_{i-j}
            let mut acc = self.coeffs[i].clone();
            for j in 1..i {
                acc = acc.sub(&b[j].mul(&b[i - j]));
            }
            b.push(acc.mul(&half));
        }
        Ok(Series { ring: self.ring, coeffs: b })
    }

    /// Substitution f(x^m); certified order grows to m*N + m - 1.
    pub fn subst_power(&self, m: usize) -> Result<Series> {
        if m == 0 {
            return Err(Error::ParamOutOfRange {
                name: "m",
                value: m.to_string(),
                reason: "substitution exponent must be positive",
            });
        }
        let n = self.order();
        let mut coeffs = vec![Coeff::zero(self.ring); m * n + m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[m * i] = c.clone();
        }
        Ok(Series { ring: self.ring, coeffs })
    }

    /// Multiplication by x^k; exact, so the order grows by k.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut coeffs = vec![Coeff::zero(self.ring); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { ring: self.ring, coeffs }
    }

    /// Division by x^k; the first k coefficients must vanish.
    pub fn div_x_pow(&self, k: usize) -> Result<Series> {
        if self.order() < k {
            return Err(Error::InsufficientOrder {
                need: k,
                have: self.order(),
            });
        }
        if let Some(nv) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::DivisionByZero {
                numer_val: nv,
                denom_val: k,
            });
        }
        Ok(Series {
            ring: self.ring,
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// First index below `upto` where the two series disagree.
    pub fn first_difference(&self, other: &Series, upto: usize) -> Result<Option<usize>> {
        self.check_ring(other)?;
        let n = upto.min(self.order()).min(other.order());
        for i in 0..=n {
            if self.coeffs[i] != other.coeffs[i] {
                return Ok(Some(i));
            }
        }
        if n < upto {
            return Err(Error::InsufficientOrder {
                need: upto,
                have: n,
            });
        }
        Ok(None)
    }

    /// Text format: a `# ring=.. order=..` header, one coefficient per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# ring={} order={}", self.ring, self.order());
        for c in &self.coeffs {
            let _ = writeln!(out, "{}", c);
        }
        out
    }

    /// Parses the `to_text` format.
    pub fn from_text(text: &str) -> Result<Series> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty series text".into()))?;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("missing # header, found {header:?}")))?
            .trim();
        let mut ring = None;
        let mut order = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("ring", "Q")) => ring = Some(Ring::Rationals),
                Some(("ring", r)) => {
                    let m = r
                        .strip_prefix("Z/")
                        .and_then(|m| m.parse::<u64>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad ring {r:?}")))?;
                    ring = Some(Ring::Residues(crate::ring::Modulus::new(m)?));
                }
                Some(("order", n)) => {
                    order = Some(
                        n.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad order {n:?}")))?,
                    );
                }
                _ => return Err(Error::Parse(format!("bad header field {field:?}"))),
            }
        }
        let ring = ring.ok_or_else(|| Error::Parse("header missing ring".into()))?;
        let order = order.ok_or_else(|| Error::Parse("header missing order".into()))?;
        let mut coeffs = Vec::with_capacity(order + 1);
        for line in lines {
            let line = line.trim();
            let c = match ring {
                Ring::Rationals => Coeff::Rat(
                    line.parse::<BigRational>()
                        .map_err(|_| Error::Parse(format!("bad rational {line:?}")))?,
                ),
                Ring::Residues(md) => {
                    let n = line
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad residue {line:?}")))?;
                    Coeff::Res(md.reduce_i64(n), md)
                }
            };
            coeffs.push(c);
        }
        if coeffs.len() != order + 1 {
            return Err(Error::Parse(format!(
                "header promises order {order} but {} coefficients follow",
                coeffs.len()
            )));
        }
        Series::new(ring, coeffs)
    }
}

/// Whether f(x)^p = f(x^p) modulo p holds through order `upto`.
pub fn frobenius_check(f: &Series, p: u64, upto: usize) -> Result<bool> {
    let md = crate::ring::Modulus::new(p)?;
    if md.e() != 1 {
        return Err(Error::ParamOutOfRange {
            name: "p",
            value: p.to_string(),
            reason: "Frobenius congruence needs a prime modulus",
        });
    }
    if f.order() < upto {
        return Err(Error::InsufficientOrder { need: upto, have: f.order() });
    }
    let fp = crate::modular::reduce_series(&f.truncated(upto)?, md)?;
    let lhs = fp.pow(p as i64)?;
    let rhs = fp.subst_power(p as usize)?.truncated(upto)?;
    Ok(lhs.first_difference(&rhs, upto)?.is_none())
}

/// Converts an i64 to an exact rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The rational p/q.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
