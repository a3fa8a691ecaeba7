//! Bodies of the catalog checks.
//!
//! Conventions: every fail witness names the first offending index; pass
//! witnesses summarize what was confirmed and at which bound. Exact scans
//! and row freezes use the rational engines, residue scans reduce first and
//! compute in Z/m throughout.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebraic::{self, series_sqrt_any, BivarPoly};
use crate::error::{Error, Result};
use crate::expr::{expand, parse};
use crate::hankel::{self, required_order};
use crate::jfraction::{
    detect_periodicity, graft, graft_ratio_check, hankel_from_jfrac, jfrac_to_series,
    stieltjes_expand, EPSeq, JFraction,
};
use crate::modular::{hankel_transfer_check, series_congruence_witness};
use crate::ring::{Coeff, Modulus, Ring};
use crate::series::{rat, ratio, Series};
use crate::verify::Status;

type Outcome = (Status, String);

pub(super) fn run(id: &str, order: usize, params: &BTreeMap<String, String>) -> Result<Outcome> {
    let seed = parse_seed(params)?;
    match id {
        "T1.1" => t1_1(order),
        "T1.2" => t1_2(order),
        "T1.3" => t1_3(order),
        "T1.4" => t1_4(order),
        "P2.3" => p2_3(order),
        "P2.4" => p2_4(order),
        "P2.5" => p2_5(order),
        "P2.6" => p2_6(order),
        "T2.7" => t2_7(order),
        "P3.1" => p3_1(order),
        "P3.2" => p3_2(order),
        "T3.3" => t3_3(order, seed),
        "T3.4" => t3_4(order, seed),
        "T3.5" => t3_5(order, seed),
        "P3.6" => p3_6(order),
        "P3.7" => p3_7(order),
        "P3.8" => p3_8(order),
        "L4.1" => l4_1(order),
        "E4.7" => e4_7(order),
        "REMARK-M4" => remark_m4(order),
        "SCAN-P2.5R" => scan_p2_5r(order),
        other => Err(Error::UnknownCheck(other.to_string())),
    }
}

// Optional seed switching the parameterized checks from the fixed published
// tuples to random ones. Off unless the spec carries a "seed" entry.
fn parse_seed(params: &BTreeMap<String, String>) -> Result<Option<u64>> {
    match params.get("seed") {
        None => Ok(None),
        Some(text) => text.parse::<u64>().map(Some).map_err(|_| Error::ParamOutOfRange {
            name: "seed",
            value: text.clone(),
            reason: "must be an unsigned 64-bit integer",
        }),
    }
}

// ---------- shared helpers ----------

const QUARTIC: &str = "(1-sqrt(1-4*x^4/(1-x^2)))/(2*x^4)";
const SQRT_13: &str = "sqrt(1/((1-x)*(1+3*x)))";

fn qx(src: &str, order: usize) -> Result<Series> {
    expand(&parse(src)?, order, Ring::Rationals)
}

fn pass(msg: String) -> Result<Outcome> {
    Ok((Status::Pass, msg))
}

fn fail(msg: String) -> Result<Outcome> {
    Ok((Status::Fail, msg))
}

// Coefficient congruences run deeper than determinant scans.
fn cong_order(order: usize) -> usize {
    (8 * order).clamp(64, 512)
}

fn unrat(c: &Coeff) -> BigRational {
    c.as_rational().expect("rational coefficient").clone()
}

fn res_of(q: &BigRational, m: u64) -> Result<u64> {
    Modulus::new(m)?.reduce_rational(q)
}

fn congruent(a: &Series, b: &Series, m: u64, upto: usize) -> Result<Option<usize>> {
    series_congruence_witness(a, b, Modulus::new(m)?, upto)
}

/// Exact Hankel table H_0..H_n of an expression.
fn exact_hankel_table(src: &str, n_max: usize) -> Result<Vec<BigRational>> {
    let f = qx(src, required_order(n_max, 0))?;
    let hs = hankel::hankel_sequence(&f, n_max, 0)?;
    Ok(hs.iter().map(unrat).collect())
}

/// First index where the Hankel table over Z/m departs from a star pattern.
fn hankel_mod_mismatch(
    src: &str,
    m: u64,
    n_max: usize,
    pattern: &str,
) -> Result<Option<(usize, String)>> {
    let ring = Ring::Residues(Modulus::new(m)?);
    let f = expand(&parse(src)?, required_order(n_max, 0), ring)?;
    let hs = hankel::hankel_sequence(&f, n_max, 0)?;
    let pat = EPSeq::parse_star(pattern, ring)?;
    for (n, h) in hs.iter().enumerate() {
        match pat.get(n) {
            Some(w) if w == h => {}
            Some(w) => return Ok(Some((n, format!("H_{n} = {h}, pattern expects {w}")))),
            None => break,
        }
    }
    Ok(None)
}

/// Stieltjes rows (u_1.., v_0..) of an expression, as exact rationals.
fn rows(src: &str, depth: usize) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let f = qx(src, 2 * depth)?;
    let j = stieltjes_expand(&f, depth)?;
    let u = j.u.take(depth)?.iter().map(unrat).collect();
    let v = j.v.take(depth + 1)?.iter().map(unrat).collect();
    Ok((u, v))
}

fn rpoly(coeffs: &[BigRational], order: usize) -> Series {
    let mut v = vec![BigRational::zero(); order + 1];
    for (i, c) in coeffs.iter().enumerate() {
        if i <= order {
            v[i] = c.clone();
        }
    }
    Series::from_rationals(v)
}

/// base^exp as an exact rational, exp >= 0.
fn rpow(base: &BigRational, exp: u32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..exp {
        r *= base;
    }
    r
}

/// (-2)^(n-1) style signed powers.
fn spow(base: i64, exp: usize) -> BigRational {
    rpow(&rat(base), exp as u32)
}

fn scale(f: &Series, q: BigRational) -> Result<Series> {
    f.scale(&Coeff::from_rational(q))
}

// ---------- T1.1 ----------

fn t1_1(order: usize) -> Result<Outcome> {
    // Exact nonvanishing scan with the odd-quotient refinement.
    let hs = exact_hankel_table("P2", order)?;
    for n in 1..=order {
        let h = &hs[n];
        if h.is_zero() {
            return fail(format!("n={n}: H_n(P2) = 0"));
        }
        if !h.is_integer() {
            return fail(format!("n={n}: H_n(P2) is not an integer"));
        }
        let num = h.to_integer();
        let pow: BigInt = BigInt::one() << (n - 1);
        if (&num % &pow) != BigInt::zero() {
            return fail(format!("n={n}: H_n(P2) not divisible by 2^{}", n - 1));
        }
        if (num / pow).is_even() {
            return fail(format!("n={n}: H_n(P2)/2^{} is even", n - 1));
        }
    }

    // Companion with constant rows u = v = (1)^*.
    let (u, v) = rows("(1+x-sqrt((1-x)*(1+3*x)))/(2*x^2)", 16)?;
    if let Some(i) = u.iter().position(|c| *c != rat(1)) {
        return fail(format!("companion u_{} = {}, expected 1", i + 1, u[i]));
    }
    if let Some(j) = v.iter().position(|c| *c != rat(1)) {
        return fail(format!("companion v_{j} = {}, expected 1", v[j]));
    }

    // Grafting the constant tail onto the first level of P2 pins the
    // determinants to (-2)^(n-1): check via the v-product relation and via
    // raw determinants of the grafted series.
    let depth = order.clamp(8, 32);
    let jp2 = stieltjes_expand(&qx("P2", 2 * depth)?, depth)?;
    let one = Coeff::one(Ring::Rationals);
    let tail = JFraction::new(EPSeq::constant(one.clone()), EPSeq::constant(one));
    let grafted = graft(&jp2, &tail, 1)?;
    let nbar = order.min(20);
    let rel = hankel_from_jfrac(&grafted, nbar)?;
    let direct = hankel::hankel_sequence(&jfrac_to_series(&grafted, required_order(nbar, 0))?, nbar, 0)?;
    for n in 1..=nbar {
        let want = spow(-2, n - 1);
        if unrat(&rel[n]) != want {
            return fail(format!("n={n}: grafted v-product gives {}, expected (-2)^{}", unrat(&rel[n]), n - 1));
        }
        if unrat(&direct[n]) != want {
            return fail(format!("n={n}: grafted series determinant differs from (-2)^{}", n - 1));
        }
    }
    if !graft_ratio_check(&jp2, &grafted, Modulus::new(2)?, depth)? {
        return fail(format!("determinant ratio not 1 mod 2 within n<={depth}"));
    }

    // Reciprocal bridge mod 4.
    let c = cong_order(order);
    if let Some(i) = congruent(&qx("1/P2", c)?, &qx("sqrt((1-x)*(1+3*x))", c)?, 4, c)? {
        return fail(format!("index {i}: 1/P2 differs from the square-root form mod 4"));
    }

    pass(format!(
        "H_n(P2)/2^(n-1) is an odd integer for 1<=n<={order}; grafted tail yields (-2)^(n-1) by both routes for n<={nbar}; ratios are 1 mod 2; reciprocal bridge holds mod 4 to order {c}"
    ))
}

// ---------- T1.2 ----------

fn t1_2(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("S2", 2, order, "((1)*)")? {
        return fail(format!("n={n}: {msg}"));
    }

    let gexpr = "(1-sqrt((1-3*x)/(1+x)))/(2*x)";
    let (u, v) = rows(gexpr, 16)?;
    for (i, ui) in u.iter().enumerate() {
        let want = if i == 0 { rat(0) } else { rat(-1) };
        if *ui != want {
            return fail(format!("companion u_{} = {ui}, expected {want}", i + 1));
        }
    }
    if let Some(j) = v.iter().position(|c| *c != rat(1)) {
        return fail(format!("companion v_{j} = {}, expected 1", v[j]));
    }

    // All-ones determinants by both routes.
    let ng = order.min(20);
    let hg = exact_hankel_table(gexpr, ng)?;
    if let Some(n) = hg.iter().position(|h| *h != rat(1)) {
        return fail(format!("n={n}: companion determinant {} != 1", hg[n]));
    }
    let j = stieltjes_expand(&qx(gexpr, 32)?, 16)?;
    let rel = hankel_from_jfrac(&j, 16)?;
    if let Some(n) = rel.iter().position(|h| unrat(h) != rat(1)) {
        return fail(format!("n={n}: v-product route gives {} != 1", unrat(&rel[n])));
    }

    let c = cong_order(order);
    if let Some(i) = congruent(&qx("S2", c)?, &qx(gexpr, c)?, 2, c)? {
        return fail(format!("index {i}: S2 differs from the companion mod 2"));
    }
    let nt = order.min(32);
    if !hankel_transfer_check(
        &qx("S2", required_order(nt, 0))?,
        &qx(gexpr, required_order(nt, 0))?,
        Modulus::new(2)?,
        nt,
    )? {
        return fail(format!("determinant transfer fails mod 2 within n<={nt}"));
    }

    pass(format!(
        "H_n(S2) = 1 mod 2 for 1<=n<={order}; companion rows, unit determinants, coefficient congruence to order {c}, and determinant transfer to n<={nt} all confirmed"
    ))
}

// ---------- T1.3 ----------

fn t1_3(order: usize) -> Result<Outcome> {
    let ring = Ring::Residues(Modulus::new(3)?);
    let f = expand(&parse("P3")?, required_order(order, 0), ring)?;
    let hs = hankel::hankel_sequence(&f, order, 0)?;
    for n in 1..=order {
        let want = if (n - 1) % 2 == 0 { 1 } else { 2 };
        let got = match &hs[n] {
            Coeff::Res(r, _) => *r,
            Coeff::Rat(_) => unreachable!("residue scan"),
        };
        if got != want {
            return fail(format!("n={n}: H_n(P3) = {got} mod 3, expected 2^{}", n - 1));
        }
    }

    // Cofactor oracle pins the first sign flip exactly.
    let h2 = hankel::hankel_det_naive(&qx("P3", 2)?, 2, 0)?;
    if unrat(&h2) != rat(-1) {
        return fail(format!("n=2: cofactor oracle gives {}, expected -1", unrat(&h2)));
    }

    let c = cong_order(order);
    if let Some(i) = congruent(&qx("P3", c)?, &qx("sqrt(1/(1-x))", c)?, 3, c)? {
        return fail(format!("index {i}: P3 differs from sqrt(1/(1-x)) mod 3"));
    }

    // Rows of the bridge series, exact and reduced.
    let (u, v) = rows("sqrt(1/(1-x))", 16)?;
    for (i, ui) in u.iter().enumerate() {
        if *ui != ratio(-1, 2) {
            return fail(format!("bridge u_{} = {ui}, expected -1/2", i + 1));
        }
        if res_of(ui, 3)? != 1 {
            return fail(format!("bridge u_{} not 1 mod 3", i + 1));
        }
    }
    for (j, vj) in v.iter().enumerate() {
        let want = match j {
            0 => rat(1),
            1 => ratio(1, 8),
            _ => ratio(1, 16),
        };
        if *vj != want {
            return fail(format!("bridge v_{j} = {vj}, expected {want}"));
        }
        let wres = if j == 1 { 2 } else { 1 };
        if res_of(vj, 3)? != wres {
            return fail(format!("bridge v_{j} not {wres} mod 3"));
        }
    }

    pass(format!(
        "H_n(P3) = 2^(n-1) = (-1)^(n-1) mod 3 for 1<=n<={order} (the (-1)^n variant is off by one); H_2 = -1 by the cofactor oracle; bridge congruence to order {c} and bridge rows confirmed"
    ))
}

// ---------- T1.4 ----------

fn t1_4(order: usize) -> Result<Outcome> {
    let s = qx(SQRT_13, order)?;
    if let Some(i) = congruent(&s, &qx("P2", order)?, 4, order)? {
        return fail(format!("index {i}: square-root form differs from P2 mod 4"));
    }
    if let Some(i) = congruent(&s, &qx("P3", order)?, 3, order)? {
        return fail(format!("index {i}: square-root form differs from P3 mod 3"));
    }

    // Sparse mod-4 form of sqrt(1-4x), replayed deep.
    let lord = order.max(1024);
    if let Some(i) = sqrt_sparse_mismatch(lord)? {
        return fail(format!("index {i}: sqrt(1-4x) differs from the sparse form mod 4"));
    }

    // Telescoping difference identity mod 4.
    let lhs = qx("(1-x^2)*subs(P2,2)-(1-x)*P2", order)?;
    let rhs = qx("2*x/(1+x)", order)?;
    if let Some(i) = congruent(&lhs, &rhs, 4, order)? {
        return fail(format!("index {i}: telescoping identity fails mod 4"));
    }

    // Self-similar recursion closing at the constant term.
    let r = qx(&format!("{SQRT_13}-P2"), order)?;
    let rr = qx(&format!("(1+x)*subs({SQRT_13}-P2,2)"), order)?;
    if let Some(i) = congruent(&r, &rr, 4, order)? {
        return fail(format!("index {i}: self-similar recursion fails mod 4"));
    }
    if !r.coeff(0)?.is_zero() {
        return fail("index 0: recursion does not close at the constant term".to_string());
    }

    pass(format!(
        "both congruences hold to order {order}; sparse sqrt(1-4x) form to order {lord}; telescoping and the closing recursion hold mod 4"
    ))
}

// 1 + 2*sum x^(2^k) compared against sqrt(1-4x) over Z/4.
fn sqrt_sparse_mismatch(order: usize) -> Result<Option<usize>> {
    let lhs = qx("sqrt(1-4*x)", order)?;
    let mut coeffs = vec![0i64; order + 1];
    coeffs[0] = 1;
    let mut e = 1usize;
    while e <= order {
        coeffs[e] += 2;
        match e.checked_mul(2) {
            Some(n) => e = n,
            None => break,
        }
    }
    let rhs = Series::from_i64(Ring::Rationals, &coeffs);
    congruent(&lhs, &rhs, 4, order)
}

// ---------- P2.3 / P2.4 ----------

fn p2_3(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("DELTA", 2, order, "((1)*)")? {
        return fail(format!("n={n}: {msg}"));
    }

    let gexpr = "(1-sqrt((1-x)/(1+3*x)))/(2*x)";
    let (u, v) = rows(gexpr, 16)?;
    for (i, ui) in u.iter().enumerate() {
        let want = if i == 0 { rat(2) } else { rat(1) };
        if *ui != want {
            return fail(format!("companion u_{} = {ui}, expected {want}", i + 1));
        }
    }
    if let Some(j) = v.iter().position(|c| *c != rat(1)) {
        return fail(format!("companion v_{j} = {}, expected 1", v[j]));
    }
    let hg = exact_hankel_table(gexpr, order.min(20))?;
    if let Some(n) = hg.iter().position(|h| *h != rat(1)) {
        return fail(format!("n={n}: companion determinant {} != 1", hg[n]));
    }

    let c = cong_order(order);
    if let Some(i) = congruent(&qx("DELTA", c)?, &qx(gexpr, c)?, 2, c)? {
        return fail(format!("index {i}: halved difference differs from companion mod 2"));
    }
    let nt = order.min(32);
    if !hankel_transfer_check(
        &qx("DELTA", required_order(nt, 0))?,
        &qx(gexpr, required_order(nt, 0))?,
        Modulus::new(2)?,
        nt,
    )? {
        return fail(format!("determinant transfer fails mod 2 within n<={nt}"));
    }

    pass(format!(
        "H_n odd for 1<=n<={order}; companion has unit determinants and rows J[2,(1)*/(1)*]; congruence to order {c} and transfer to n<={nt} hold"
    ))
}

fn p2_4(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("GAMMA", 2, order, "((1)*)")? {
        return fail(format!("n={n}: {msg}"));
    }

    let gexpr = "-(1-x-(1+x)*sqrt((1-x)/(1+3*x)))/(2*x^2)";
    let (u, v) = rows(gexpr, 16)?;
    for (i, ui) in u.iter().enumerate() {
        let want = if i % 2 == 0 { rat(3) } else { rat(-1) };
        if *ui != want {
            return fail(format!("companion u_{} = {ui}, expected {want}", i + 1));
        }
    }
    for (j, vj) in v.iter().enumerate() {
        let want = if j == 0 { rat(1) } else { rat(-1) };
        if *vj != want {
            return fail(format!("companion v_{j} = {vj}, expected {want}"));
        }
    }
    let ng = order.min(16);
    let hg = exact_hankel_table(gexpr, ng)?;
    for (n, h) in hg.iter().enumerate() {
        let want = if (n * n.saturating_sub(1) / 2) % 2 == 0 { rat(1) } else { rat(-1) };
        if *h != want {
            return fail(format!("n={n}: companion determinant {h}, expected {want}"));
        }
    }

    let c = cong_order(order);
    if let Some(i) = congruent(&qx("GAMMA", c)?, &qx(gexpr, c)?, 2, c)? {
        return fail(format!("index {i}: double-step difference differs from companion mod 2"));
    }
    let nt = order.min(32);
    if !hankel_transfer_check(
        &qx("GAMMA", required_order(nt, 0))?,
        &qx(gexpr, required_order(nt, 0))?,
        Modulus::new(2)?,
        nt,
    )? {
        return fail(format!("determinant transfer fails mod 2 within n<={nt}"));
    }

    pass(format!(
        "H_n odd for 1<=n<={order}; companion rows J[(3,-1)*/1,(-1)*] with unit-magnitude determinants; congruence to order {c} and transfer to n<={nt} hold"
    ))
}

// ---------- P2.5 ----------

fn p2_5(order: usize) -> Result<Outcome> {
    let nmax = order.min(48);
    let f = qx("PROP25", required_order(nmax, 0))?;
    let hs = hankel::hankel_sequence(&f, nmax, 0)?;
    for n in 1..=nmax {
        if hs[n].is_zero() {
            return fail(format!("n={n}: determinant vanishes"));
        }
    }

    // Frozen leading rows.
    let (u, v) = rows("PROP25", 8)?;
    let u_want = [rat(2), ratio(-7, 2), ratio(7, 10), ratio(32, 65), ratio(-187, 26), ratio(259, 34), ratio(-49, 272), ratio(241, 16)];
    let v_want = [rat(1), rat(-6), ratio(-5, 4), ratio(-26, 25), ratio(10, 169), ratio(-221, 4), ratio(64, 289), ratio(-17, 256)];
    for i in 0..8 {
        if u[i] != u_want[i] {
            return fail(format!("u_{} = {}, expected {}", i + 1, u[i], u_want[i]));
        }
        if v[i] != v_want[i] {
            return fail(format!("v_{i} = {}, expected {}", v[i], v_want[i]));
        }
    }

    // Depressed tail: determinants transfer with a (-6)^(n-1) factor.
    let n27 = order.min(20);
    let g = qx("(1/PROP25-1-2*x)/(6*x^2)", required_order(n27.max(2) - 1, 0))?;
    let hg = hankel::hankel_sequence(&g, n27 - 1, 0)?;
    for n in 1..=n27 {
        let want = spow(-6, n - 1) * unrat(&hg[n - 1]);
        if unrat(&hs[n]) != want {
            return fail(format!("n={n}: H_n differs from (-6)^(n-1) H_(n-1) of the tail"));
        }
    }

    // Mod-9 bridge identity.
    let c9 = order.max(256);
    let lhs = qx(&format!("(1/PROP25)*(3*{SQRT_13}-2)"), c9)?;
    let rhs = qx("1-x", c9)?;
    if let Some(i) = congruent(&lhs, &rhs, 9, c9)? {
        return fail(format!("index {i}: bridge identity fails mod 9"));
    }

    // Auxiliary tail: v-row is (1,(4,-1/2,-1/2)*); its u-row is reported,
    // not asserted, since the computed values override the reference row.
    let hexpr = format!("((1+2*x)*{SQRT_13}-1-x)/x^2");
    let (hu, hv) = rows(&hexpr, 16)?;
    for (j, vj) in hv.iter().enumerate() {
        let want = if j == 0 {
            rat(1)
        } else {
            [rat(4), ratio(-1, 2), ratio(-1, 2)][(j - 1) % 3].clone()
        };
        if *vj != want {
            return fail(format!("auxiliary v_{j} = {vj}, expected {want}"));
        }
    }
    let u_note = match hu.iter().position(|c| *c != rat(-1)) {
        Some(i) => format!("auxiliary u-row departs from the constant -1 reference at u_{} = {}", i + 1, hu[i]),
        None => "auxiliary u-row matches the constant -1 reference".to_string(),
    };
    let nh = order.min(32);
    if let Some((n, msg)) = hankel_mod_mismatch(&hexpr, 3, nh, "((1)*)")? {
        return fail(format!("auxiliary n={n}: {msg}"));
    }

    pass(format!(
        "determinants nonzero for 1<=n<={nmax}; frozen rows, the (-6)^(n-1) tail relation for n<={n27}, the mod-9 bridge to order {c9}, and the auxiliary v-row all hold; {u_note}"
    ))
}

// ---------- P2.6 ----------

fn p2_6(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("(1-P3)/x", 3, order, "((1)*)")? {
        return fail(format!("n={n}: {msg}"));
    }

    let gexpr = "(1-sqrt(1/((1-x)*(1+3*x))))/x";
    let (u, v) = rows(gexpr, 12)?;
    if u[0] != rat(3) {
        return fail(format!("companion u_1 = {}, expected 3", u[0]));
    }
    if v[1] != rat(-2) {
        return fail(format!("companion v_1 = {}, expected -2", v[1]));
    }
    // Reference rows J[3,(-2,5/2,5/2)* / 1,(-2,-2,1/4)*]: computed rows win,
    // the comparison is reported.
    let u_ref = |i: usize| if i == 0 { rat(3) } else { [rat(-2), ratio(5, 2), ratio(5, 2)][(i - 1) % 3].clone() };
    let v_ref = |j: usize| if j == 0 { rat(1) } else { [rat(-2), rat(-2), ratio(1, 4)][(j - 1) % 3].clone() };
    let mism_u = u.iter().enumerate().find(|(i, c)| **c != u_ref(*i));
    let mism_v = v.iter().enumerate().find(|(j, c)| **c != v_ref(*j));
    let row_note = match (mism_u, mism_v) {
        (None, None) => "reference rows match computed rows through depth 12".to_string(),
        (Some((i, c)), _) => format!("computed u_{} = {c} overrides the reference row", i + 1),
        (_, Some((j, c))) => format!("computed v_{j} = {c} overrides the reference row"),
    };

    let c = cong_order(order);
    if let Some(i) = congruent(&qx("(1-P3)/x", c)?, &qx(gexpr, c)?, 3, c)? {
        return fail(format!("index {i}: shifted complement differs from companion mod 3"));
    }
    let nt = order.min(32);
    if !hankel_transfer_check(
        &qx("(1-P3)/x", required_order(nt, 0))?,
        &qx(gexpr, required_order(nt, 0))?,
        Modulus::new(3)?,
        nt,
    )? {
        return fail(format!("determinant transfer fails mod 3 within n<={nt}"));
    }

    pass(format!(
        "H_n = 1 mod 3 for 1<=n<={order}; u_1 = 3 and v_1 = -2 frozen; congruence to order {c} and transfer to n<={nt} hold; {row_note}"
    ))
}

// ---------- T2.7 ----------

fn t2_7(order: usize) -> Result<Outcome> {
    let vb = order.max(512);
    let f = qx("TM27", vb)?;
    for i in 0..=vb {
        let c = unrat(f.coeff(i)?);
        if c != rat(1) && c != rat(-1) {
            return fail(format!("index {i}: coefficient {c} is not +-1"));
        }
    }

    if let Some((n, msg)) = hankel_mod_mismatch("TM27", 3, order, "(1,(1,1,2,2)*)")? {
        return fail(format!("n={n}: {msg}"));
    }

    let bridge = "sqrt(1/(1-x-x^2))";
    let c = cong_order(order);
    if let Some(i) = congruent(&qx("TM27", c)?, &qx(bridge, c)?, 3, c)? {
        return fail(format!("index {i}: product differs from {bridge} mod 3"));
    }

    let (u, v) = rows(bridge, 16)?;
    for (i, ui) in u.iter().enumerate() {
        if *ui != ratio(-1, 2) {
            return fail(format!("bridge u_{} = {ui}, expected -1/2", i + 1));
        }
        if res_of(ui, 3)? != 1 {
            return fail(format!("bridge u_{} not 1 mod 3", i + 1));
        }
    }
    for (j, vj) in v.iter().enumerate() {
        let want = match j {
            0 => rat(1),
            1 => ratio(5, 8),
            _ => ratio(5, 16),
        };
        if *vj != want {
            return fail(format!("bridge v_{j} = {vj}, expected {want}"));
        }
        let wres = if j <= 1 { 1 } else { 2 };
        if res_of(vj, 3)? != wres {
            return fail(format!("bridge v_{j} not {wres} mod 3"));
        }
    }

    pass(format!(
        "coefficients are +-1 to order {vb}; H pattern (1,(1,1,2,2)*) mod 3 for n<={order}; bridge congruence to order {c} and bridge rows confirmed"
    ))
}

// ---------- P3.1 ----------

fn p3_1(order: usize) -> Result<Outcome> {
    let depth = order.max(42);
    let f = qx(QUARTIC, 2 * depth)?;
    let j = stieltjes_expand(&f, depth)?;
    let u = j.u.take(depth)?;
    let v = j.v.take(depth + 1)?;
    if let Some(i) = u.iter().position(|c| !c.is_zero()) {
        return fail(format!("u_{} = {}, expected 0", i + 1, u[i]));
    }
    for (jx, vj) in v.iter().enumerate() {
        let want = if jx == 0 {
            rat(1)
        } else {
            let k = ((jx - 1) / 4) as i64;
            match (jx - 1) % 4 {
                0 => rat(k + 1),
                1 => ratio(1, k + 1),
                2 => ratio(-1, k + 1),
                _ => rat(-(k + 1)),
            }
        };
        if unrat(vj) != want {
            return fail(format!("v_{jx} = {}, expected {want}", unrat(vj)));
        }
    }
    pass(format!(
        "u = 0 and the quartet v-pattern hold through v_{depth}; block openers are v_(4k+1) = k+1, one above the reference description"
    ))
}

// ---------- P3.2 ----------

fn p3_2(order: usize) -> Result<Outcome> {
    let fexpr = "(1-sqrt(1-4*x^4/(1+x)))/(2*x^4)";
    if let Some((n, msg)) = hankel_mod_mismatch(fexpr, 2, order, "((1,1,0,0)*)")? {
        return fail(format!("n={n}: {msg}"));
    }
    let ne = order.min(32);
    let hs = exact_hankel_table(fexpr, ne)?;
    let pat = [1i64, 1, 0, 0, -1, -1, 0, 0];
    for (n, h) in hs.iter().enumerate() {
        if *h != rat(pat[n % 8]) {
            return fail(format!("n={n}: H_n = {h}, expected {}", pat[n % 8]));
        }
    }
    pass(format!(
        "H pattern (1,1,0,0)* mod 2 for n<={order}; exact signed pattern (1,1,0,0,-1,-1,0,0)* for n<={ne}"
    ))
}

// ---------- T3.3 / T3.4 / T3.5 ----------

fn tuples_yzs(seed: Option<u64>) -> [(BigRational, BigRational, BigRational); 3] {
    let Some(seed) = seed else {
        return [
            (rat(1), rat(1), rat(0)),
            (rat(0), rat(1), rat(0)),
            (rat(-1), rat(0), rat(1)),
        ];
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| {
        (
            rat(rng.gen_range(-3..=3)),
            rat(rng.gen_range(-3..=3)),
            rat(rng.gen_range(-2..=2)),
        )
    })
}

fn t_samples(seed: Option<u64>) -> [(BigRational, BigRational, BigRational); 3] {
    // (t, z, s); the frame needs t outside {0, 1, -1} and, for the descent,
    // nonvanishing alpha and denominator constants at K = (-t)^n, n <= 3.
    let Some(seed) = seed else {
        return [
            (rat(2), rat(3), rat(1)),
            (rat(3), rat(2), rat(0)),
            (rat(-2), ratio(1, 2), rat(1)),
        ];
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    std::array::from_fn(|_| {
        for _ in 0..256 {
            let t = ratio(rng.gen_range(-5..=5), [1, 1, 2][rng.gen_range(0..3usize)]);
            let z = ratio(rng.gen_range(-4..=4), [1, 1, 2][rng.gen_range(0..3usize)]);
            let s = rat(rng.gen_range(-2..=2));
            if t_sample_ok(&t, &z) {
                return (t, z, s);
            }
        }
        (rat(2), rat(3), rat(1))
    })
}

fn t_sample_ok(t: &BigRational, z: &BigRational) -> bool {
    if t.is_zero() || *t == rat(1) || *t == rat(-1) {
        return false;
    }
    let one = BigRational::one();
    let t2 = t * t;
    let mut k = BigRational::one();
    for _ in 0..=3 {
        let k2 = &k * &k;
        let (_, _, _, alpha) = t_frame(t, z, &k);
        let q1 = -&one + z * t + &k2 * &t2 - &k2 * (z * t);
        let q3 = -(&k2 * z) + z * &t2 - t + &k2 * t;
        if alpha.is_zero() || q1.is_zero() || q3.is_zero() {
            return false;
        }
        k *= -t.clone();
    }
    true
}

/// Numerator sequence of the two-level v-ratios: (1+zx)/(1+yx+x^2).
fn alpha_series(y: &BigRational, z: &BigRational, order: usize) -> Result<Series> {
    let num = rpoly(&[BigRational::one(), z.clone()], order);
    let den = rpoly(&[BigRational::one(), y.clone(), BigRational::one()], order);
    num.div(&den)
}

/// Closed form of the even/odd interleaved continued fraction.
fn t33_g(y: &BigRational, z: &BigRational, s: &BigRational, order: usize) -> Result<Series> {
    let work = order + 6;
    // p = sx - yx^2 - 1
    let p = rpoly(&[rat(-1), s.clone(), -y.clone()], work);
    let disc = p.mul(&p)?.sub(&rpoly(&[rat(0), rat(0), rat(0), rat(0), rat(4)], work))?;
    let sq = disc.sqrt()?;
    // base = -2zx^2 - p
    let base = rpoly(&[rat(1), -s.clone(), y.clone() - rat(2) * z.clone()], work);
    // den = 2x^2 (z p + (1+z^2) x^2)
    let inner = rpoly(
        &[-z.clone(), s.clone() * z.clone(), rat(1) + z.clone() * z.clone() - y.clone() * z.clone()],
        work,
    );
    let den = scale(&inner.shift_up(2), rat(2))?;
    for cand in [base.sub(&sq)?, base.add(&sq)?] {
        if let Ok(g) = cand.div(&den) {
            if unrat(g.coeff(0)?) == rat(1) {
                return g.truncated(order.min(g.order()));
            }
        }
    }
    Err(Error::BranchMismatch { index: 0 })
}

fn t3_3(order: usize, seed: Option<u64>) -> Result<Outcome> {
    let nmax = order.min(60);
    let mut notes = Vec::new();
    if let Some(seed) = seed {
        notes.push(format!("random tuples from seed {seed}"));
    }
    for (y, z, s) in tuples_yzs(seed) {
        let tag = format!("(y,z,s)=({y},{z},{s})");
        let alpha = alpha_series(&y, &z, nmax / 2 + 32)?;
        let g = t33_g(&y, &z, &s, required_order(nmax, 0))?;
        let hs = hankel::hankel_sequence(&g, nmax, 0)?;
        for n in 0..=nmax {
            let want = unrat(alpha.coeff(n / 2)?);
            if unrat(&hs[n]) != want {
                return fail(format!("{tag}, n={n}: H_n = {}, expected alpha_{}", unrat(&hs[n]), n / 2));
            }
        }

        // Rows hold as far as the alpha entries stay nonzero; the first zero
        // entry forces the expansion to break down exactly at n = 2k.
        let jdepth = 12usize;
        let first_zero = (0..=jdepth / 2 + 1).find(|&k| alpha.coeff(k).map(|c| c.is_zero()).unwrap_or(false));
        match (first_zero, stieltjes_expand(&g, jdepth)) {
            (None, Ok(j)) => {
                if let Some(i) = row_pattern_mismatch(&j, &alpha, &s, jdepth)? {
                    return fail(format!("{tag}: {i}"));
                }
            }
            (None, Err(e)) => return Err(e),
            (Some(k0), Err(Error::StieltjesBreakdown { n })) => {
                if n != 2 * k0 {
                    return fail(format!("{tag}: breakdown at n={n}, expected n={}", 2 * k0));
                }
                if 2 * k0 >= 2 {
                    let safe = 2 * k0 - 2;
                    let j = stieltjes_expand(&g, safe)?;
                    if let Some(i) = row_pattern_mismatch(&j, &alpha, &s, safe)? {
                        return fail(format!("{tag}: {i}"));
                    }
                }
                notes.push(format!("{tag}: expansion stops at n={} where alpha_{k0} = 0", 2 * k0));
            }
            (Some(k0), Ok(_)) => {
                return fail(format!("{tag}: expected breakdown at n={} did not occur", 2 * k0));
            }
            (Some(_), Err(e)) => return Err(e),
        }

        if let Some(p) = detect_periodicity(alpha.coeffs(), 3) {
            notes.push(format!("{tag}: alpha pattern {}", p.to_star()));
        }
    }
    let notes = notes.join("; ");
    pass(format!(
        "H interleaves the alpha sequence as (a0,a0,a1,a1,...) for n<={nmax} at 3 tuples; rows match wherever defined; {notes}"
    ))
}

fn row_pattern_mismatch(
    j: &JFraction,
    alpha: &Series,
    s: &BigRational,
    depth: usize,
) -> Result<Option<String>> {
    let u = j.u.take(depth)?;
    let v = j.v.take(depth + 1)?;
    for (i, ui) in u.iter().enumerate() {
        let want = if i % 2 == 0 { -s.clone() } else { rat(0) };
        if unrat(ui) != want {
            return Ok(Some(format!("u_{} = {}, expected {want}", i + 1, unrat(ui))));
        }
    }
    for (jx, vj) in v.iter().enumerate() {
        let want = if jx == 0 {
            rat(1)
        } else if jx % 2 == 1 {
            let k = (jx - 1) / 2;
            unrat(alpha.coeff(k + 1)?) / unrat(alpha.coeff(k)?)
        } else {
            let k = (jx - 2) / 2;
            unrat(alpha.coeff(k)?) / unrat(alpha.coeff(k + 1)?)
        };
        if unrat(vj) != want {
            return Ok(Some(format!("v_{jx} = {}, expected {want}", unrat(vj))));
        }
    }
    Ok(None)
}

/// The t-frame closed forms (a, b, d, alpha) at a given K.
fn t_frame(
    t: &BigRational,
    z: &BigRational,
    k: &BigRational,
) -> (BigRational, BigRational, BigRational, BigRational) {
    let one = BigRational::one();
    let t2 = t * t;
    let g1 = &t2 - &one;
    let g1sq = &g1 * &g1;
    let g2 = z * t - &one;
    let g3 = t - z;
    let k2 = k * k;
    let y = t + one.clone() / t.clone();

    let a = z * z - &y * z + &one;
    let b = -(&t2 + &one) * &g2 * &g3 / &g1sq - t * &g2 * &g2 / (&k2 * &g1sq)
        - &k2 * &g3 * &g3 * t / &g1sq;
    let d = -rat(2) * t * &g2 * &g3 / &g1sq - &g2 * &g2 / (&k2 * &g1sq)
        - &k2 * &t2 * &g3 * &g3 / &g1sq;
    let alpha = -&g2 / ((&one - &t2) * k) - k * &g3 * t / (&one - &t2);
    (a, b, d, alpha)
}

/// Quadratic relation A f^2 + B f - d = 0 in the (a,b,d;y,s) frame.
fn frame_poly(
    a: &BigRational,
    b: &BigRational,
    d: &BigRational,
    y: &BigRational,
    s: &BigRational,
) -> Result<BivarPoly> {
    let zero = BigRational::zero;
    let row0 = vec![-d.clone(), zero(), zero(), zero(), zero()];
    let row1 = vec![d.clone(), -(s * d), y * d - rat(2) * b.clone(), zero(), zero()];
    let row2 = vec![zero(), zero(), b.clone(), -(s * b), a.clone()];
    BivarPoly::new(vec![row0, row1, row2])
}

fn residual(p: &BivarPoly, f: &Series) -> Result<Series> {
    let order = f.order();
    let mut acc = Series::zero(f.ring(), order);
    let mut fpow = Series::one(f.ring(), order);
    for jx in 0..=p.df() {
        let row: Vec<BigRational> = (0..=p.dx()).map(|i| p.coeff(i, jx)).collect();
        acc = acc.add(&rpoly(&row, order).mul(&fpow)?)?;
        if jx < p.df() {
            fpow = fpow.mul(f)?;
        }
    }
    Ok(acc)
}

fn t3_4(order: usize, seed: Option<u64>) -> Result<Outcome> {
    // Level-zero residual and Hankel interleaving at the three sample tuples.
    let nh = order.min(40);
    for (y, z, s) in tuples_yzs(seed) {
        let tag = format!("(y,z,s)=({y},{z},{s})");
        let a0 = rat(1) - &y * &z + &z * &z;
        let b0 = -z.clone();
        let d0 = rat(-1);
        let p = frame_poly(&a0, &b0, &d0, &y, &s)?;
        let g = t33_g(&y, &z, &s, order.max(required_order(nh, 0)))?;
        let r = residual(&p, &g.truncated(order)?)?;
        if let Some(i) = (0..=r.order()).find(|&i| !r.coeff(i).map(|c| c.is_zero()).unwrap_or(true)) {
            return fail(format!("{tag}: residual coefficient {i} is nonzero"));
        }
        let alpha = alpha_series(&y, &z, nh / 2 + 1)?;
        let hs = hankel::hankel_sequence(&g, nh, 0)?;
        for n in 0..=nh {
            if unrat(&hs[n]) != unrat(alpha.coeff(n / 2)?) {
                return fail(format!("{tag}, n={n}: H_n does not interleave alpha_{}", n / 2));
            }
        }
    }

    // Generating functions of the level coefficients match the K-closed
    // forms under K = (-t)^n.
    for (t, z, _s) in t_samples(seed) {
        let tag = format!("t={t}, z={z}");
        let y = &t + BigRational::one() / t.clone();
        let y2m2 = &y * &y - rat(2);
        let dpoly = rpoly(&[rat(1), rat(-1)], 16).mul(&rpoly(&[rat(1), -y2m2.clone(), rat(1)], 16))?;
        let a0 = rat(1) - &y * &z + &z * &z;
        let a_gf = rpoly(&[a0.clone(), -(&a0 * &y2m2), a0.clone()], 16).div(&dpoly)?;
        let yz1 = &y * &z - rat(1);
        let b_gf = rpoly(&[-z.clone(), &y * &yz1, -(&z * &yz1)], 16).div(&dpoly)?;
        let d_gf = rpoly(
            &[rat(-1), -(rat(1) + &z * &z - rat(2) * &y * &z), -(&z * &z)],
            16,
        )
        .div(&dpoly)?;
        let al_gf = alpha_series(&y, &z, 16)?;
        let mut k = BigRational::one();
        for n in 0..=12usize {
            let (a, b, d, al) = t_frame(&t, &z, &k);
            for (name, gf, want) in [("a", &a_gf, &a), ("b", &b_gf, &b), ("d", &d_gf, &d), ("alpha", &al_gf, &al)] {
                if unrat(gf.coeff(n)?) != *want {
                    return fail(format!("{tag}, n={n}: {name}_n differs from the K-closed form"));
                }
            }
            k *= -t.clone();
        }
    }

    let src = match seed {
        Some(s) => format!("random tuples from seed {s}"),
        None => "the fixed published tuples".to_string(),
    };
    pass(format!(
        "level-zero residual vanishes to order {order} and H interleaves alpha for n<={nh} at 3 tuples; level generating functions match the K-closed forms for n<=12; samples: {src}"
    ))
}

/// Closed-form solution of the K-frame quadratic, built from its explicit
/// radical expression.
fn t35_closed(
    t: &BigRational,
    z: &BigRational,
    s: &BigRational,
    k: &BigRational,
    order: usize,
) -> Result<Series> {
    let work = order + 8;
    let one = BigRational::one;
    let t2 = t * t;
    let k2 = k * k;
    let g1 = &t2 - one();
    let g2 = z * t - one();
    let g3 = t - z;

    let q1 = -one() + z * t + &k2 * &t2 - &k2 * (z * t);
    let q2 = &k2 * &t2 - z * t - &k2 * (z * t) + one();
    let q3 = -(&k2 * z) + z * &t2 - t + &k2 * t;

    // Q0 = (sxt - t - (1+2t+t^2)x^2)(sxt - t - (1-2t+t^2)x^2)
    let p1 = rpoly(&[-t.clone(), s * t, -(one() + rat(2) * t + &t2)], work);
    let p2 = rpoly(&[-t.clone(), s * t, -(one() - rat(2) * t + &t2)], work);
    let q0 = p1.mul(&p2)?;
    let sq = series_sqrt_any(&q0)?;

    // numerator = Q1 ((sx-1) t Q1 - g1^2-free term...) + Q1^2 sqrt(Q0)
    let lin = rpoly(&[-(t * &q1), s * t * &q1, -(&g1 * &q2)], work);
    let num_base = scale(&lin, q1.clone())?;
    let sq_scaled = scale(&sq, &q1 * &q1)?;

    // denominator = 2x^2 (t(1-sx) Q3 Q1 + K^2 g1^2 g2 g3 x^2)
    let inner = rpoly(
        &[
            t * &q3 * &q1,
            -(s * t * &q3 * &q1),
            &k2 * &g1 * &g1 * &g2 * &g3,
        ],
        work,
    );
    let den = scale(&inner.shift_up(2), rat(2))?;

    for cand in [num_base.add(&sq_scaled)?, num_base.sub(&sq_scaled)?] {
        if let Ok(f) = cand.div(&den) {
            if unrat(f.coeff(0)?) == rat(1) && f.order() >= order {
                return f.truncated(order);
            }
        }
    }
    Err(Error::BranchMismatch { index: 0 })
}

fn t3_5(order: usize, seed: Option<u64>) -> Result<Outcome> {
    for (t, z, s) in t_samples(seed) {
        let y = &t + BigRational::one() / t.clone();
        let mut k = BigRational::one();
        for n in 0..=2usize {
            let tag = format!("t={t}, z={z}, n={n}");
            let (a, b, d, al_k) = t_frame(&t, &z, &k);
            let p = frame_poly(&a, &b, &d, &y, &s)?;
            let fs = algebraic::solve_quadratic(&p, &[BigRational::one()], order)?;
            let fq = t35_closed(&t, &z, &s, &k, order)?;
            if fq != fs {
                let i = (0..=order)
                    .find(|&i| fq.coeff(i).ok() != fs.coeff(i).ok())
                    .unwrap_or(0);
                return fail(format!("{tag}: closed form differs from the solved branch at index {i}"));
            }

            // At the base level the determinants interleave the alpha values.
            if n == 0 {
                let nh = order.min(24).min((fs.order() + 2) / 2);
                let hs = hankel::hankel_sequence(&fs, nh, 0)?;
                let mut kk = BigRational::one();
                let mut alphas = Vec::new();
                for _ in 0..=nh / 2 {
                    let (_, _, _, al) = t_frame(&t, &z, &kk);
                    alphas.push(al);
                    kk *= -t.clone();
                }
                for m in 0..=nh {
                    if unrat(&hs[m]) != alphas[m / 2] {
                        return fail(format!("{tag}, n={m}: H_n does not interleave alpha((-t)^{})", m / 2));
                    }
                }
            }

            // Two-level descent onto K' = -tK, with the level ratios
            // alpha(-tK)/alpha(K) and alpha(K)/alpha(-tK).
            let kp = -(&t * &k);
            let (ap, bp, dp, al_kp) = t_frame(&t, &z, &kp);
            if al_k.is_zero() || al_kp.is_zero() {
                return fail(format!("{tag}: degenerate alpha value in the descent"));
            }
            let pp = frame_poly(&ap, &bp, &dp, &y, &s)?;
            let work = order + 6;
            let fp = algebraic::solve_quadratic(&pp, &[BigRational::one()], work)?;
            let r1 = &al_kp / &al_k;
            let r2 = &al_k / &al_kp;
            let one = Series::one(Ring::Rationals, work);
            let inner = one.sub(&scale(&fp.shift_up(2), r2)?.truncated(work)?)?;
            let frac = scale(&Series::one(Ring::Rationals, work).shift_up(2).truncated(work)?, r1)?
                .div(&inner)?;
            let den = one
                .sub(&rpoly(&[BigRational::zero(), s.clone()], work))?
                .sub(&frac.truncated(work.min(frac.order()))?)?;
            let rhs = Series::one(Ring::Rationals, den.order()).div(&den)?;
            let upto = order.min(rhs.order());
            if let Some(i) = fs.first_difference(&rhs, upto)? {
                return fail(format!("{tag}: descent relation fails at index {i}"));
            }
            k *= -t.clone();
        }
    }
    let src = match seed {
        Some(s) => format!("random samples from seed {s}"),
        None => "the fixed published samples".to_string(),
    };
    pass(format!(
        "closed forms match the solved series branch and the two-level descent to order {order} at K = (-t)^n, n<=2; base-level determinants interleave alpha; samples: {src}"
    ))
}

// ---------- P3.6 / P3.7 / P3.8 ----------

fn p3_6(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("S36", 2, order, "((1,1,1,1,1,1,0,0)*)")? {
        return fail(format!("n={n}: {msg}"));
    }
    let ng = order.min(48);
    let hg = exact_hankel_table(QUARTIC, ng)?;
    for (n, h) in hg.iter().enumerate() {
        let k = (n / 4) as i64;
        let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
        let want = if n % 4 < 2 { sign } else { sign * rat(k + 1) };
        if *h != want {
            return fail(format!("n={n}: companion determinant {h}, expected {want}"));
        }
    }
    let c = cong_order(order);
    if let Some(i) = congruent(&qx("S36", c)?, &qx(QUARTIC, c)?, 2, c)? {
        return fail(format!("index {i}: sum differs from the quartic form mod 2"));
    }
    let nt = order.min(32);
    if !hankel_transfer_check(
        &qx("S36", required_order(nt, 0))?,
        &qx(QUARTIC, required_order(nt, 0))?,
        Modulus::new(2)?,
        nt,
    )? {
        return fail(format!("determinant transfer fails mod 2 within n<={nt}"));
    }
    pass(format!(
        "H pattern (1,1,1,1,1,1,0,0)* mod 2 for n<={order}; companion signed pattern exact for n<={ng}; congruence to order {c} and transfer to n<={nt} hold"
    ))
}

fn p3_7(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("S37", 2, order, "((1,1,0,0)*)")? {
        return fail(format!("n={n}: {msg}"));
    }
    // Dual route: exact determinants reduced afterwards.
    let ne = order.min(24);
    let hs = exact_hankel_table("S37", ne)?;
    let pat = [1u64, 1, 0, 0];
    for (n, h) in hs.iter().enumerate() {
        if res_of(h, 2)? != pat[n % 4] {
            return fail(format!("n={n}: exact determinant reduces to {}, expected {}", res_of(h, 2)?, pat[n % 4]));
        }
    }
    pass(format!(
        "H pattern (1,1,0,0)* mod 2 for n<={order}, cross-checked against exact determinants for n<={ne}"
    ))
}

fn p3_8(order: usize) -> Result<Outcome> {
    if let Some((n, msg)) = hankel_mod_mismatch("S38", 2, order, "((1,1,0,0,1,1)*)")? {
        return fail(format!("n={n}: {msg}"));
    }
    let gexpr = "(1-sqrt(1-4*x^2/(1+x^2)))/(2*x^2)";
    let ng = order.min(48);
    let hg = exact_hankel_table(gexpr, ng)?;
    let pat = [1i64, 1, 0, 0, -1, -1, -1, -1, 0, 0, 1, 1];
    for (n, h) in hg.iter().enumerate() {
        if *h != rat(pat[n % 12]) {
            return fail(format!("n={n}: companion determinant {h}, expected {}", pat[n % 12]));
        }
    }
    // The companion interleaves the (1,0,-1,-1,0,1)* sequence.
    let al = qx("ALPHA(-1,-1)", order)?;
    let apat = [1i64, 0, -1, -1, 0, 1];
    for i in 0..=order {
        if unrat(al.coeff(i)?) != rat(apat[i % 6]) {
            return fail(format!("index {i}: alpha coefficient differs from (1,0,-1,-1,0,1)*"));
        }
    }
    for n in 0..=ng {
        if hg[n] != rat(apat[(n / 2) % 6]) {
            return fail(format!("n={n}: companion determinant does not interleave alpha"));
        }
    }
    let c = cong_order(order);
    if let Some(i) = congruent(&qx("S38", c)?, &qx(gexpr, c)?, 2, c)? {
        return fail(format!("index {i}: sum differs from the companion mod 2"));
    }
    let nt = order.min(32);
    if !hankel_transfer_check(
        &qx("S38", required_order(nt, 0))?,
        &qx(gexpr, required_order(nt, 0))?,
        Modulus::new(2)?,
        nt,
    )? {
        return fail(format!("determinant transfer fails mod 2 within n<={nt}"));
    }
    pass(format!(
        "H pattern (1,1,0,0,1,1)* mod 2 for n<={order}; companion pattern exact and interleaving alpha for n<={ng}; congruence to order {c} and transfer to n<={nt} hold"
    ))
}

// ---------- L4.1 / E4.7 ----------

fn catalan_numbers(len: usize) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = Vec::with_capacity(len);
    if len == 0 {
        return c;
    }
    c.push(BigInt::one());
    for n in 1..len {
        let mut s = BigInt::zero();
        for i in 0..n {
            s += &c[i] * &c[n - 1 - i];
        }
        c.push(s);
    }
    c
}

fn catalan_parity(upto: usize) -> Vec<u8> {
    let mut c = vec![0u8; upto + 1];
    c[0] = 1;
    for n in 1..=upto {
        let mut s = 0u8;
        for i in 0..n {
            s ^= c[i] & c[n - 1 - i];
        }
        c[n] = s;
    }
    c
}

fn l4_1(order: usize) -> Result<Outcome> {
    // Convolution recurrence as the independent route to the coefficients.
    let cats = catalan_numbers(order.max(1));
    let s = qx("sqrt(1-4*x)", order)?;
    if unrat(s.coeff(0)?) != rat(1) {
        return fail("index 0: sqrt(1-4x) constant term is not 1".to_string());
    }
    for n in 1..=order {
        let want = BigRational::from(&cats[n - 1] * BigInt::from(-2));
        if unrat(s.coeff(n)?) != want {
            return fail(format!("index {n}: coefficient differs from -2 C_{}", n - 1));
        }
    }

    // Parity criterion, deep.
    let pb = order.max(1024);
    let par = catalan_parity(pb);
    for (n, &p) in par.iter().enumerate() {
        let is_pow2 = (n + 1) & n == 0;
        if (p == 1) != is_pow2 {
            return fail(format!("n={n}: C_n parity {} contradicts the 2^k-1 criterion", p));
        }
    }

    // Sparse mod-4 form at the requested order.
    if let Some(i) = sqrt_sparse_mismatch(order)? {
        return fail(format!("index {i}: sqrt(1-4x) differs from the sparse form mod 4"));
    }

    pass(format!(
        "coefficients are -2 C_(n-1) by the convolution recurrence to order {order}; C_n is odd exactly at n = 2^k-1 up to {pb}; sparse mod-4 form holds to order {order}"
    ))
}

fn e4_7(order: usize) -> Result<Outcome> {
    // The self-similar recursion and its closure at the constant term.
    let r = qx(&format!("{SQRT_13}-P2"), order)?;
    let rr = qx(&format!("(1+x)*subs({SQRT_13}-P2,2)"), order)?;
    if let Some(i) = congruent(&r, &rr, 4, order)? {
        return fail(format!("index {i}: recursion fails mod 4"));
    }
    if !r.coeff(0)?.is_zero() {
        return fail("index 0: difference does not vanish at the constant term".to_string());
    }
    if let Some(i) = congruent(&qx(SQRT_13, order)?, &qx("P2", order)?, 4, order)? {
        return fail(format!("index {i}: recursion conclusion fails mod 4"));
    }

    // Telescoping difference feeding the recursion.
    let lhs = qx("(1-x^2)*subs(P2,2)-(1-x)*P2", order)?;
    let rhs = qx("2*x/(1+x)", order)?;
    if let Some(i) = congruent(&lhs, &rhs, 4, order)? {
        return fail(format!("index {i}: telescoping identity fails mod 4"));
    }

    // Even-part identity, three ways.
    let e1 = qx(&format!("(1-x^2)*subs({SQRT_13},2)"), order)?;
    let t = qx("x/(1+x)", order)?;
    let mut e2 = Series::one(Ring::Rationals, order);
    let mut tp = t.mul(&t)?;
    let mut e = 2usize;
    while e <= order {
        e2 = e2.add(&scale(&tp, rat(2))?)?;
        e *= 2;
        if e <= order {
            tp = tp.mul(&tp)?;
        }
    }
    let e3 = qx(&format!("(1-x)*{SQRT_13}-2*x/(1+x)"), order)?;
    if let Some(i) = congruent(&e1, &e2, 4, order)? {
        return fail(format!("index {i}: even-part identity (sparse route) fails mod 4"));
    }
    if let Some(i) = congruent(&e2, &e3, 4, order)? {
        return fail(format!("index {i}: even-part identity (difference route) fails mod 4"));
    }

    // Exact self-similarity of the base product.
    let p2 = qx("P2", order)?;
    let p2sub = qx("(1-x)*subs(P2,2)", order)?;
    if let Some(i) = p2.first_difference(&p2sub, order)? {
        return fail(format!("index {i}: exact self-similarity of P2 fails"));
    }

    pass(format!(
        "recursion closes at the constant term and all mod-4 identities hold to order {order}; exact self-similarity of P2 confirmed"
    ))
}

// ---------- scans ----------

fn remark_m4(order: usize) -> Result<Outcome> {
    let f = qx("PM(4,-1)", required_order(order, 0))?;
    for n in 1..=order {
        if hankel::hankel_det(&f, n, 0)?.is_zero() {
            return pass(format!("first vanishing determinant at n={n} (scan-derived witness)"));
        }
    }
    fail(format!("no vanishing determinant found for n<={order}"))
}

fn scan_p2_5r(order: usize) -> Result<Outcome> {
    let nmax = order.min(48);
    let f = qx("3*PM(3,1)/(1+x)-2/(1-x)", required_order(nmax, 0))?;
    let hs = hankel::hankel_sequence(&f, nmax, 0)?;
    let msg = match (1..=nmax).find(|&n| hs[n].is_zero()) {
        Some(n) => format!("vanishing observed at n={n}; scan only, nothing asserted"),
        None => format!("nonvanishing observed for 1<=n<={nmax}; scan only, nothing asserted"),
    };
    Ok((Status::Conjectural, msg))
}
