//! Randomized closure properties for algebraic-equation guessing and the
//! quadratic solver, plus the quartic tail family they must reproduce.

mod common;

use common::{nonzero_i64, q, rng};
use hdcalc::algebraic::{chop, guess_algebraic, solve_quadratic, verify_equation, BivarPoly};
use hdcalc::expr::{expand, parse};
use hdcalc::jfraction::{jfrac_to_series, stieltjes_expand, EPSeq, JFraction};
use hdcalc::{Coeff, Ring, Series};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const CASES: usize = 200;

/// Random rational function num/den with den(0) = 1, as a series.
fn rational_function(r: &mut ChaCha8Rng, order: usize) -> Series {
    loop {
        let num: Vec<i64> = (0..=2).map(|_| r.gen_range(-4..=4)).collect();
        if num.iter().all(|&c| c == 0) {
            continue;
        }
        let deg = r.gen_range(1..=3usize);
        let mut den = vec![1i64];
        den.extend((0..deg).map(|_| r.gen_range(-3..=3)));
        let mut np = num;
        np.resize(order + 1, 0);
        let mut dp = den;
        dp.resize(order + 1, 0);
        let n = Series::from_i64(Ring::Rationals, &np);
        let d = Series::from_i64(Ring::Rationals, &dp);
        return n.div(&d).unwrap();
    }
}

#[test]
fn guesses_verify_and_prefer_linear_equations() {
    let mut r = rng(0xA19_E001);
    for case in 0..CASES {
        let f = rational_function(&mut r, 40);
        let p = guess_algebraic(&f, 4, 2, 10)
            .unwrap()
            .unwrap_or_else(|| panic!("no equation found in case {case}"));
        assert!(
            verify_equation(&p, &f, 40).unwrap(),
            "guessed equation fails its own series in case {case}"
        );
        assert_eq!(p.df(), 1, "rational series got a nonlinear equation in case {case}");
    }
}

#[test]
fn solver_inverts_guessing() {
    let mut r = rng(0xA19_E002);
    for case in 0..CASES {
        let f = rational_function(&mut r, 40);
        let p = guess_algebraic(&f, 4, 2, 10)
            .unwrap()
            .unwrap_or_else(|| panic!("no equation found in case {case}"));
        let f0 = f.coeff(0).unwrap().as_rational().unwrap().clone();
        let solved = solve_quadratic(&p, &[f0], 40).unwrap();
        assert_eq!(solved, f, "solver did not reproduce the series in case {case}");
    }
}

#[test]
fn quartic_tails_recover_their_frozen_equations() {
    let depth = 33;
    let base = expand(
        &parse("(1-sqrt(1-4*x^4/(1-x^2)))/(2*x^4)").unwrap(),
        2 * depth,
        Ring::Rationals,
    )
    .unwrap();
    let j = stieltjes_expand(&base, depth).unwrap();

    let frozen: [&[(i64, usize, usize)]; 3] = [
        &[(1, 6, 2), (-3, 4, 2), (1, 2, 2), (-3, 2, 1), (1, 0, 1), (-1, 0, 0)],
        &[(1, 6, 2), (-7, 4, 2), (2, 2, 2), (-5, 2, 1), (1, 0, 1), (-1, 0, 0)],
        &[(1, 6, 2), (-13, 4, 2), (3, 2, 2), (-7, 2, 1), (1, 0, 1), (-1, 0, 0)],
    ];
    for (idx, terms) in frozen.iter().enumerate() {
        let levels = 4 * (idx + 1);
        let tail = chop(&j, levels).unwrap();
        let fz = jfrac_to_series(&tail, 2 * (depth - levels))
            .unwrap()
            .truncated(40)
            .unwrap();
        let want = BivarPoly::from_int_terms(terms).unwrap();
        let p = guess_algebraic(&fz, 6, 2, 10)
            .unwrap()
            .unwrap_or_else(|| panic!("no equation found for tail {idx}"));
        assert_eq!(p, want, "tail {idx} produced a different equation");
        assert!(verify_equation(&want, &fz, 40).unwrap());
        let solved = solve_quadratic(&want, &[q(1)], 40).unwrap();
        assert_eq!(solved, fz, "solver did not reproduce tail {idx}");
    }
}

#[test]
fn chopping_rows_matches_reexpanding_the_tail_series() {
    let mut r = rng(0xA19_E004);
    let depth = 12usize;
    for case in 0..CASES {
        let u: Vec<Coeff> = (0..depth)
            .map(|_| Coeff::from_i64(r.gen_range(-4..=4), Ring::Rationals))
            .collect();
        let v: Vec<Coeff> = (0..=depth)
            .map(|_| Coeff::from_i64(nonzero_i64(&mut r, -4, 4), Ring::Rationals))
            .collect();
        let j = JFraction::new(EPSeq::finite(u), EPSeq::finite(v));
        let k = r.gen_range(1..=4usize);
        let tail = chop(&j, k).unwrap();
        let tf = jfrac_to_series(&tail, 2 * (depth - k)).unwrap();
        let j2 = stieltjes_expand(&tf, depth - k).unwrap();
        assert_eq!(
            j2.u.take(depth - k).unwrap(),
            tail.u.take(depth - k).unwrap(),
            "u rows differ after chopping {k} levels in case {case}"
        );
        assert_eq!(
            j2.v.take(depth - k + 1).unwrap(),
            tail.v.take(depth - k + 1).unwrap(),
            "v rows differ after chopping {k} levels in case {case}"
        );
    }
}
