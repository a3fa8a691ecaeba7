//! Reduction of exact objects modulo a prime power, and congruence checks.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hankel;
use crate::ring::{Coeff, Modulus, Ring};
use crate::series::Series;

/// Reduces a series coefficientwise modulo m.
///
/// Rational input needs every denominator coprime to m; the first offender
/// is reported by index. Residue input may step down to a divisor modulus
/// of the same prime.
pub fn reduce_series(f: &Series, md: Modulus) -> Result<Series> {
    let ring = Ring::Residues(md);
    let mut coeffs = Vec::with_capacity(f.order() + 1);
    for (i, c) in f.coeffs().iter().enumerate() {
        coeffs.push(Coeff::Res(reduce_coeff(c, md, i)?, md));
    }
    Series::new(ring, coeffs)
}

fn reduce_coeff(c: &Coeff, md: Modulus, index: usize) -> Result<u64> {
    match c {
        Coeff::Rat(q) => md.reduce_rational(q).map_err(|_| Error::NotPIntegral {
            index,
            value: q.to_string(),
            modulus: md.m(),
        }),
        Coeff::Res(r, from) => {
            if from.p() != md.p() || from.e() < md.e() {
                return Err(Error::RingMismatch {
                    left: Ring::Residues(*from).to_string(),
                    right: Ring::Residues(md).to_string(),
                });
            }
            Ok(r % md.m())
        }
    }
}

/// Whether a/b and c/d agree modulo m; both denominators must be units.
pub fn rational_congruent(a: &BigRational, b: &BigRational, md: Modulus) -> Result<bool> {
    Ok(md.reduce_rational(a)? == md.reduce_rational(b)?)
}

/// First index up to `upto` where f and g disagree modulo m, if any.
///
/// Errors when the congruence holds as far as the data reaches but the data
/// stops short of `upto`: an unverified tail is not a verified congruence.
pub fn series_congruence_witness(
    f: &Series,
    g: &Series,
    md: Modulus,
    upto: usize,
) -> Result<Option<usize>> {
    let fr = reduce_series(f, md)?;
    let gr = reduce_series(g, md)?;
    fr.first_difference(&gr, upto)
}

/// Whether f and g agree coefficientwise modulo m up to order `upto`.
pub fn series_congruent(f: &Series, g: &Series, md: Modulus, upto: usize) -> Result<bool> {
    Ok(series_congruence_witness(f, g, md, upto)?.is_none())
}

/// Whether H_n(f) = H_n(g) modulo m for every 1 <= n <= n_max.
///
/// This is the conclusion transferred by a coefficientwise congruence
/// f = g (mod m): callers establish that premise up to order 2*n_max - 2,
/// and this check confirms the determinant congruences. Determinants are
/// computed exactly in each operand's own ring, then reduced.
pub fn hankel_transfer_check(f: &Series, g: &Series, md: Modulus, n_max: usize) -> Result<bool> {
    let hf = hankel::hankel_sequence(f, n_max, 0)?;
    let hg = hankel::hankel_sequence(g, n_max, 0)?;
    for n in 1..=n_max {
        if reduce_coeff(&hf[n], md, n)? != reduce_coeff(&hg[n], md, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Determinants commute with reduction: H_n(f mod m) = H_n(f) mod m.
///
/// Computes both sides for n <= n_max and reports the first mismatch; a
/// `Some` return would mean an arithmetic defect, so callers treat it as a
/// self-check.
pub fn hankel_reduction_self_check(
    f: &Series,
    md: Modulus,
    n_max: usize,
    k: usize,
) -> Result<Option<usize>> {
    let fm = reduce_series(f, md)?;
    let exact = hankel::hankel_sequence(f, n_max, k)?;
    let direct = hankel::hankel_sequence(&fm, n_max, k)?;
    for n in 0..=n_max {
        if Coeff::Res(reduce_coeff(&exact[n], md, n)?, md) != direct[n] {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, ratio};

    #[test]
    fn reduce_rational_series() {
        let md = Modulus::new(9).unwrap();
        let f = Series::from_rationals(vec![rat(10), ratio(1, 2), rat(-1)]);
        let r = reduce_series(&f, md).unwrap();
        assert_eq!(r, Series::from_i64(Ring::Residues(md), &[1, 5, 8]));
    }

    #[test]
    fn reduce_reports_bad_denominator() {
        let md = Modulus::new(4).unwrap();
        let f = Series::from_rationals(vec![rat(1), ratio(1, 3), ratio(1, 6)]);
        assert_eq!(
            reduce_series(&f, md),
            Err(Error::NotPIntegral {
                index: 2,
                value: "1/6".into(),
                modulus: 4
            })
        );
    }

    #[test]
    fn reduce_steps_down_residue_rings() {
        let m9 = Modulus::new(9).unwrap();
        let m3 = Modulus::new(3).unwrap();
        let f = Series::from_i64(Ring::Residues(m9), &[7, 3, 5]);
        let r = reduce_series(&f, m3).unwrap();
        assert_eq!(r, Series::from_i64(Ring::Residues(m3), &[1, 0, 2]));
        assert!(reduce_series(&r, m9).is_err());
        let m2 = Modulus::new(2).unwrap();
        assert!(reduce_series(&f, m2).is_err());
    }

    #[test]
    fn congruence_of_rationals() {
        let md = Modulus::new(9).unwrap();
        // 1/2 = 5 and 14/2 = 7, so 1/2 != 7 but 1/2 = 5 and 10/2 = 5.
        assert!(rational_congruent(&ratio(1, 2), &ratio(10, 2), md).unwrap());
        assert!(!rational_congruent(&ratio(1, 2), &ratio(7, 1), md).unwrap());
        assert!(rational_congruent(&ratio(1, 2), &rat(5), md).unwrap());
        assert!(rational_congruent(&ratio(1, 3), &rat(1), md).is_err());
    }

    #[test]
    fn series_congruence_witness_and_verdict() {
        let md = Modulus::new(2).unwrap();
        let f = Series::from_i64(Ring::Rationals, &[1, 3, 5, 7, 10, 11]);
        let g = Series::from_i64(Ring::Rationals, &[1, 1, 1, 1, 1, 1]);
        assert_eq!(series_congruence_witness(&f, &g, md, 5).unwrap(), Some(4));
        assert!(!series_congruent(&f, &g, md, 5).unwrap());
        assert!(series_congruent(&f, &g, md, 3).unwrap());
        // A congruence that holds as far as the data reaches cannot be
        // certified past it.
        let h = Series::from_i64(Ring::Rationals, &[1, 1, 1, 1, 0, 1]);
        assert!(matches!(
            series_congruent(&f, &h, md, 9),
            Err(Error::InsufficientOrder { need: 9, have: 5 })
        ));
    }

    #[test]
    fn transfer_between_congruent_series() {
        let md = Modulus::new(2).unwrap();
        let f = Series::from_i64(Ring::Rationals, &[1, 3, 5, 7, 9, 11, 13, 15, 17]);
        let g = Series::from_i64(Ring::Rationals, &[1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert!(series_congruent(&f, &g, md, 8).unwrap());
        assert!(hankel_transfer_check(&f, &g, md, 5).unwrap());

        // Non-congruent pair with differing determinants mod 2.
        let a = Series::from_i64(Ring::Rationals, &[1, 1, 0, 0, 0]);
        let b = Series::from_i64(Ring::Rationals, &[1, 1, 1, 1, 1]);
        assert!(!hankel_transfer_check(&a, &b, md, 2).unwrap());
    }

    #[test]
    fn transfer_mixed_rings() {
        let md = Modulus::new(3).unwrap();
        let f = Series::from_i64(Ring::Rationals, &[1, 4, 2, -2, 5, 1, 0]);
        let fr = reduce_series(&f, md).unwrap();
        // Exact-then-reduce on one side, residue arithmetic on the other.
        assert!(hankel_transfer_check(&f, &fr, md, 4).unwrap());
    }

    #[test]
    fn reduction_self_check_passes() {
        let f = Series::from_i64(Ring::Rationals, &[1, -1, 2, 0, 3, -5, 1, 4, 4, -2, 0, 1, 6]);
        for m in [2u64, 3, 4, 9] {
            let md = Modulus::new(m).unwrap();
            assert_eq!(hankel_reduction_self_check(&f, md, 6, 0).unwrap(), None);
            assert_eq!(hankel_reduction_self_check(&f, md, 5, 2).unwrap(), None);
        }
    }
}
