//! Randomized algebra laws for truncated power series.

mod common;

use common::{rng, unit_series};
use hdcalc::expr::{expand, parse};
use hdcalc::{Modulus, Ring, Series};

const CASES: usize = 200;

fn ring_for(case: usize) -> Ring {
    const MODS: [u64; 6] = [2, 3, 4, 5, 9, 27];
    if case % 2 == 0 {
        Ring::Rationals
    } else {
        Ring::Residues(Modulus::new(MODS[(case / 2) % MODS.len()]).unwrap())
    }
}

#[test]
fn ring_axioms_hold_at_truncation() {
    let mut r = rng(0xA11_A410);
    for case in 0..CASES {
        let ring = ring_for(case);
        let order = 32;
        let f = unit_series(&mut r, order, ring);
        let g = unit_series(&mut r, order, ring);
        let h = unit_series(&mut r, order, ring);

        let lhs = f.add(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "distributivity failed in case {case}");

        let lhs = f.mul(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "associativity failed in case {case}");
    }
}

#[test]
fn div_mul_roundtrip() {
    let mut r = rng(0xD1F_0001);
    for case in 0..CASES {
        let ring = ring_for(case);
        let f = unit_series(&mut r, 24, ring);
        let g = unit_series(&mut r, 24, ring);
        let q = f.div(&g).unwrap();
        assert_eq!(g.mul(&q).unwrap(), f, "g*(f/g) != f in case {case}");
    }
}

#[test]
fn sqrt_squares_back() {
    let mut r = rng(0x5C12_0002);
    const ODD_MODS: [u64; 4] = [3, 5, 9, 27];
    for case in 0..CASES {
        let ring = if case % 2 == 0 {
            Ring::Rationals
        } else {
            Ring::Residues(Modulus::new(ODD_MODS[(case / 2) % ODD_MODS.len()]).unwrap())
        };
        let mut h = unit_series(&mut r, 20, ring);
        // Force h(0) = 1 so the square root picks h's own branch.
        let one = Series::one(ring, 20);
        let h0 = h.coeff(0).unwrap().clone();
        h = h.sub(&one.scale(&h0).unwrap()).unwrap().add(&one).unwrap();
        let f = h.mul(&h).unwrap();
        assert_eq!(f.sqrt().unwrap(), h, "sqrt(h^2) != h in case {case}");
    }
}

#[test]
fn subst_power_composes() {
    let mut r = rng(0x5B57_0003);
    for case in 0..CASES {
        let ring = ring_for(case);
        let f = unit_series(&mut r, 10, ring);
        let a = 1 + case % 3;
        let b = 1 + (case / 3) % 3;
        let one_step = f.subst_power(a * b).unwrap();
        let two_step = f.subst_power(a).unwrap().subst_power(b).unwrap();
        assert_eq!(two_step, one_step, "subst_power composition failed in case {case}");
    }
}

#[test]
fn period_doubling_recursion_holds() {
    let order = 256;
    let p2 = expand(&parse("P2").unwrap(), order, Ring::Rationals).unwrap();
    let doubled = p2.subst_power(2).unwrap();
    let mut poly = vec![1i64, -1];
    poly.resize(doubled.order() + 1, 0);
    let one_minus_x = Series::from_i64(Ring::Rationals, &poly);
    let lhs = one_minus_x.mul(&doubled).unwrap().truncated(order).unwrap();
    assert_eq!(lhs, p2);
}
