//! Shared generators for the property suites. Each suite is its own test
//! crate, so unused helpers are expected per crate.
#![allow(dead_code)]

use hdcalc::series::rat;
use hdcalc::{Coeff, Modulus, Ring, Series};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nonzero_i64(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let n = r.gen_range(lo..=hi);
        if n != 0 {
            return n;
        }
    }
}

/// Random integer series over Q with coefficients in [-5, 5].
pub fn int_series(r: &mut ChaCha8Rng, order: usize, a0_nonzero: bool) -> Series {
    let mut coeffs: Vec<i64> = (0..=order).map(|_| r.gen_range(-5..=5)).collect();
    if a0_nonzero {
        coeffs[0] = nonzero_i64(r, -5, 5);
    }
    Series::from_i64(Ring::Rationals, &coeffs)
}

/// Random series over Z/m; with `a0_unit` the constant term is coprime to p.
pub fn res_series(r: &mut ChaCha8Rng, order: usize, md: Modulus, a0_unit: bool) -> Series {
    let mut coeffs: Vec<i64> = (0..=order).map(|_| r.gen_range(0..md.m() as i64)).collect();
    if a0_unit {
        loop {
            let c = r.gen_range(1..md.m() as i64);
            if c as u64 % md.p() != 0 {
                coeffs[0] = c;
                break;
            }
        }
    }
    Series::from_i64(Ring::Residues(md), &coeffs)
}

/// Random rational series; denominators stay coprime to `p_coprime` if given.
pub fn rational_series(r: &mut ChaCha8Rng, order: usize, p_coprime: Option<u64>) -> Series {
    let coeffs: Vec<BigRational> = (0..=order)
        .map(|_| {
            let num = r.gen_range(-9..=9);
            let den = loop {
                let d = r.gen_range(1..=6i64);
                match p_coprime {
                    Some(p) if d as u64 % p == 0 => continue,
                    _ => break d,
                }
            };
            BigRational::new(num.into(), den.into())
        })
        .collect();
    Series::from_rationals(coeffs)
}

/// Random series over the given ring with a unit constant term.
pub fn unit_series(r: &mut ChaCha8Rng, order: usize, ring: Ring) -> Series {
    match ring {
        Ring::Rationals => int_series(r, order, true),
        Ring::Residues(md) => res_series(r, order, md, true),
    }
}

pub fn coeff_i64(n: i64, ring: Ring) -> Coeff {
    Coeff::from_i64(n, ring)
}

pub fn rats_of(f: &Series) -> Vec<BigRational> {
    f.coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational series").clone())
        .collect()
}

pub fn q(n: i64) -> BigRational {
    rat(n)
}
