//! Hankel determinants of power series, exact over Q and over Z/p^e.
//!
//! H_n^{(k)}(f) is the determinant of the n x n matrix (a_{k+i+j}); H_0 = 1.
//! The values grow superexponentially, so everything here is exact: rational
//! matrices are cleared to integer ones row by row, integer determinants go
//! through fraction-free Bareiss elimination, and residue determinants are
//! lifted to Z and reduced at the end (a prime modulus gets a direct
//! Gaussian elimination instead).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::par;
use crate::ring::{Coeff, Modulus, Ring};
use crate::series::Series;

/// Required series order for H_n^{(k)}: the matrix reads a_k..a_{k+2n-2}.
pub fn required_order(n: usize, k: usize) -> usize {
    if n == 0 {
        0
    } else {
        k + 2 * n - 2
    }
}

fn check_order(f: &Series, n: usize, k: usize) -> Result<()> {
    let need = required_order(n, k);
    if f.order() < need {
        return Err(Error::InsufficientOrder {
            need,
            have: f.order(),
        });
    }
    Ok(())
}

/// The shifted Hankel determinant H_n^{(k)}(f).
pub fn hankel_det(f: &Series, n: usize, k: usize) -> Result<Coeff> {
    check_order(f, n, k)?;
    if n == 0 {
        return Ok(Coeff::one(f.ring()));
    }
    match f.ring() {
        Ring::Rationals => {
            let (mat, denom) = cleared_int_matrix(f, n, k);
            let det = bareiss_det(mat);
            Ok(Coeff::Rat(BigRational::new(det, denom)))
        }
        Ring::Residues(md) if md.e() == 1 => {
            let mat = residue_matrix(f, n, k, md);
            Ok(Coeff::Res(gauss_det_mod_p(mat, md.p()), md))
        }
        Ring::Residues(md) => {
            let mat = lifted_int_matrix(f, n, k);
            let det = bareiss_det(mat);
            Ok(Coeff::Res(md.reduce_bigint(&det), md))
        }
    }
}

/// H_0^{(k)}..H_n^{(k)} in one scan.
///
/// A single no-swap elimination yields every leading principal minor until
/// one vanishes; the sizes past the first zero are finished independently
/// (in parallel when the `parallel` feature is on).
pub fn hankel_sequence(f: &Series, n_max: usize, k: usize) -> Result<Vec<Coeff>> {
    sequence_impl(f, n_max, k, true)
}

/// Sequential twin of `hankel_sequence`, for benchmarking the speedup.
pub fn hankel_sequence_seq(f: &Series, n_max: usize, k: usize) -> Result<Vec<Coeff>> {
    sequence_impl(f, n_max, k, false)
}

fn sequence_impl(f: &Series, n_max: usize, k: usize, parallel: bool) -> Result<Vec<Coeff>> {
    check_order(f, n_max, k)?;
    let ring = f.ring();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Coeff::one(ring));
    if n_max == 0 {
        return Ok(out);
    }

    // Shared scan: minors[j] = H_{j+1} (scaled for the rational path), valid
    // until the first zero minor stops the no-swap elimination.
    let (scanned, scale): (Vec<BigInt>, Option<Vec<BigInt>>) = match ring {
        Ring::Rationals => {
            let (mat, row_mults) = cleared_int_matrix_rows(f, n_max, k);
            (principal_minors(mat), Some(row_mults))
        }
        Ring::Residues(md) if md.e() == 1 => {
            let mat = residue_matrix(f, n_max, k, md);
            (principal_minors_mod_p(mat, md.p()), None)
        }
        Ring::Residues(_) => (principal_minors(lifted_int_matrix(f, n_max, k)), None),
    };

    for (j, m) in scanned.iter().enumerate() {
        out.push(unscale(m, j + 1, &scale, ring));
    }
    if out.len() == n_max + 1 {
        return Ok(out);
    }

    // Finish the sizes the shared scan could not reach.
    let rest: Vec<usize> = (out.len()..=n_max).collect();
    let compute = |n: usize| hankel_det(f, n, k).expect("order already checked");
    let rest = if parallel {
        par::map(rest, compute)
    } else {
        par::map_seq(rest, compute)
    };
    out.extend(rest);
    Ok(out)
}

/// H_n as determinant scaled by the first n row multipliers.
fn unscale(minor: &BigInt, n: usize, scale: &Option<Vec<BigInt>>, ring: Ring) -> Coeff {
    match ring {
        Ring::Rationals => {
            let mults = scale.as_ref().expect("rational scan keeps row multipliers");
            let denom: BigInt = mults[..n].iter().product();
            Coeff::Rat(BigRational::new(minor.clone(), denom))
        }
        Ring::Residues(md) => Coeff::Res(md.reduce_bigint(minor), md),
    }
}

/// Cofactor-expansion determinant, kept as an independent cross-check.
/// Division-free, so it works verbatim over any coefficient ring.
pub fn hankel_det_naive(f: &Series, n: usize, k: usize) -> Result<Coeff> {
    if n > 8 {
        return Err(Error::OracleTooLarge(n));
    }
    check_order(f, n, k)?;
    let ring = f.ring();
    if n == 0 {
        return Ok(Coeff::one(ring));
    }
    let entry = |i: usize, j: usize| f.coeff(k + i + j).cloned();
    let cols: Vec<usize> = (0..n).collect();
    cofactor(&entry, 0, &cols, ring)
}

fn cofactor(
    entry: &impl Fn(usize, usize) -> Result<Coeff>,
    row: usize,
    cols: &[usize],
    ring: Ring,
) -> Result<Coeff> {
    if cols.is_empty() {
        return Ok(Coeff::one(ring));
    }
    let mut acc = Coeff::zero(ring);
    for (pos, &c) in cols.iter().enumerate() {
        let a = entry(row, c)?;
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols
            .iter()
            .copied()
            .filter(|&other| other != c)
            .collect();
        let minor = cofactor(entry, row + 1, &rest, ring)?;
        let term = a.mul(&minor);
        acc = if pos % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// Hankel matrix of a rational series with each row cleared to integers;
/// returns the matrix and the product of all row multipliers.
fn cleared_int_matrix(f: &Series, n: usize, k: usize) -> (Vec<Vec<BigInt>>, BigInt) {
    let (mat, mults) = cleared_int_matrix_rows(f, n, k);
    (mat, mults.iter().product())
}

fn cleared_int_matrix_rows(f: &Series, n: usize, k: usize) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut mat = Vec::with_capacity(n);
    let mut mults = Vec::with_capacity(n);
    for i in 0..n {
        let row: Vec<&BigRational> = (0..n)
            .map(|j| {
                f.coeff(k + i + j)
                    .expect("order checked")
                    .as_rational()
                    .expect("rational ring")
            })
            .collect();
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        mat.push(
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect(),
        );
        mults.push(lcm);
    }
    (mat, mults)
}

fn lifted_int_matrix(f: &Series, n: usize, k: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match f.coeff(k + i + j).expect("order checked") {
                    Coeff::Res(r, _) => BigInt::from(*r),
                    Coeff::Rat(_) => unreachable!("residue ring"),
                })
                .collect()
        })
        .collect()
}

fn residue_matrix(f: &Series, n: usize, k: usize, _md: Modulus) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match f.coeff(k + i + j).expect("order checked") {
                    Coeff::Res(r, _) => *r,
                    Coeff::Rat(_) => unreachable!("residue ring"),
                })
                .collect()
        })
        .collect()
}

/// Fraction-free Bareiss determinant with row pivoting. Exact over Z.
fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..n - 1 {
        if mat[c][c].is_zero() {
            let Some(p) = (c + 1..n).find(|&r| !mat[r][c].is_zero()) else {
                return BigInt::zero();
            };
            mat.swap(c, p);
            sign = -sign;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                let t = &mat[r][j] * &mat[c][c] - &mat[r][c] * &mat[c][j];
                mat[r][j] = &t / &prev;
            }
            mat[r][c] = BigInt::zero();
        }
        prev = mat[c][c].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// No-swap Bareiss scan: returns the leading principal minors M_1, M_2, ...
/// stopping after the first zero (whose value is still reported).
fn principal_minors(mut mat: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let n = mat.len();
    let mut minors = Vec::with_capacity(n);
    if n == 0 {
        return minors;
    }
    let mut prev = BigInt::one();
    for c in 0..n {
        minors.push(mat[c][c].clone());
        if mat[c][c].is_zero() || c + 1 == n {
            break;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                let t = &mat[r][j] * &mat[c][c] - &mat[r][c] * &mat[c][j];
                mat[r][j] = &t / &prev;
            }
        }
        prev = mat[c][c].clone();
    }
    minors
}

/// Pivoted Gaussian determinant modulo a prime.
fn gauss_det_mod_p(mut mat: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = mat.len();
    let mut det: u64 = 1;
    let mut negate = false;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| mat[r][c] % p != 0) else {
            return 0;
        };
        if piv != c {
            mat.swap(c, piv);
            negate = !negate;
        }
        let pivot = mat[c][c] % p;
        det = ((det as u128 * pivot as u128) % p as u128) as u64;
        let inv = inv_mod_p(pivot, p);
        for r in c + 1..n {
            let factor = ((mat[r][c] % p) as u128 * inv as u128 % p as u128) as u64;
            if factor == 0 {
                continue;
            }
            for j in c..n {
                let sub = (factor as u128 * (mat[c][j] % p) as u128) % p as u128;
                mat[r][j] = ((mat[r][j] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
    }
    if negate && det != 0 {
        p - det
    } else {
        det
    }
}

/// No-swap Gaussian scan mod p: principal minors M_1, M_2, ... as residues,
/// stopping after the first zero.
fn principal_minors_mod_p(mut mat: Vec<Vec<u64>>, p: u64) -> Vec<BigInt> {
    let n = mat.len();
    let mut minors = Vec::with_capacity(n);
    let mut det: u64 = 1;
    for c in 0..n {
        let pivot = mat[c][c] % p;
        det = ((det as u128 * pivot as u128) % p as u128) as u64;
        minors.push(BigInt::from(det));
        if pivot == 0 || c + 1 == n {
            break;
        }
        let inv = inv_mod_p(pivot, p);
        for r in c + 1..n {
            let factor = ((mat[r][c] % p) as u128 * inv as u128 % p as u128) as u64;
            if factor == 0 {
                continue;
            }
            for j in c..n {
                let sub = (factor as u128 * (mat[c][j] % p) as u128) % p as u128;
                mat[r][j] = ((mat[r][j] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
    }
    minors
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}
