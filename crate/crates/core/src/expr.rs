//! Expression trees over a catalog of named series generators.
//!
//! An expression is evaluated exactly over the rationals and reduced into a
//! residue ring afterwards, so square roots and divisions behave the way the
//! underlying identities demand (compute over Q, then reduce). Division can
//! lose valid order when the divisor has positive valuation; `expand` retries
//! with growing internal slack until the requested order is reached.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Coeff, Ring};
use crate::series::Series;

/// Named generator together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// prod_{k>=0} (1 - x^{2^k})
    P2,
    /// prod_{k>=0} (1 - x^{3^k})
    P3,
    /// (1/x) sum_{n>=0} x^{2^n} / (1 - x^{2^n})
    S2,
    /// prod_{k>=0} (1 + sign * x^{m^k}), m >= 2, sign = +-1
    Pm { m: i64, sign: i64 },
    /// prod_{k>=0} (1 - x^{3^k} - x^{2*3^k})
    Tm27,
    /// (1/x^4) sum_{k>=1} x^{2^{k+1}} / (1 - x^{2^k})
    S36,
    /// (1/x^4) sum_{k>=0} x^{2^{k+2}} / (1 + x^{2^k})
    S37,
    /// (1/x^2) sum_{k>=0} x^{2^{k+1}} / (1 + x^{2^{k+1}})
    S38,
    /// (1 - (1-x) P2) / (2x), the halved first difference of P2
    Delta,
    /// (1 - x - (1-x^2) P2) / (2x^2), the halved second-step difference of P2
    Gamma,
    /// (1 + z x) / (1 + y x + x^2)
    Alpha { y: BigRational, z: BigRational },
    /// (1 - sqrt(1 - 4x)) / (2x)
    Catalan,
    /// 3 prod_{n>=1} (1 - x^{3^n}) - 2/(1-x)
    Prop25,
}

impl Generator {
    /// Catalog name as accepted by the expression grammar.
    pub fn name(&self) -> &'static str {
        match self {
            Generator::P2 => "P2",
            Generator::P3 => "P3",
            Generator::S2 => "S2",
            Generator::Pm { .. } => "PM",
            Generator::Tm27 => "TM27",
            Generator::S36 => "S36",
            Generator::S37 => "S37",
            Generator::S38 => "S38",
            Generator::Delta => "DELTA",
            Generator::Gamma => "GAMMA",
            Generator::Alpha { .. } => "ALPHA",
            Generator::Catalan => "CATALAN",
            Generator::Prop25 => "PROP25",
        }
    }

    /// Expand exactly over the rationals to the given order.
    fn expand_q(&self, order: usize) -> Result<Series> {
        match self {
            Generator::P2 => Ok(power_product(order, 2, 0, &[(1, -1)])),
            Generator::P3 => Ok(power_product(order, 3, 0, &[(1, -1)])),
            Generator::Pm { m, sign } => {
                if *m < 2 {
                    return Err(Error::ParamOutOfRange {
                        name: "m",
                        value: m.to_string(),
                        reason: "PM base must be an integer >= 2",
                    });
                }
                if *sign != 1 && *sign != -1 {
                    return Err(Error::ParamOutOfRange {
                        name: "sign",
                        value: sign.to_string(),
                        reason: "PM sign must be +1 or -1",
                    });
                }
                Ok(power_product(order, *m as usize, 0, &[(1, *sign)]))
            }
            Generator::Tm27 => Ok(power_product(order, 3, 0, &[(1, -1), (2, -1)])),
            Generator::S2 => Ok(shifted_sum(order, 1, |add| {
                let mut step = 1usize;
                loop {
                    add(step, step, 1);
                    match step.checked_mul(2) {
                        Some(s) => step = s,
                        None => break,
                    }
                    if step > order + 1 {
                        break;
                    }
                }
            })),
            Generator::S36 => Ok(shifted_sum(order, 4, |add| {
                let mut step = 2usize;
                while step <= order + 4 {
                    add(2 * step, step, 1);
                    step *= 2;
                }
            })),
            Generator::S37 => Ok(shifted_sum(order, 4, |add| {
                let mut step = 1usize;
                while step <= order + 4 {
                    // x^{4 s} / (1 + x^s): exponents j*s for j >= 4, sign (-1)^j
                    add(4 * step, 2 * step, 1);
                    add(5 * step, 2 * step, -1);
                    step *= 2;
                }
            })),
            Generator::S38 => Ok(shifted_sum(order, 2, |add| {
                let mut step = 2usize;
                while step <= order + 2 {
                    add(step, 2 * step, 1);
                    add(2 * step, 2 * step, -1);
                    step *= 2;
                }
            })),
            Generator::Delta => {
                let p2 = Generator::P2.expand_q(order + 1)?;
                let t = Series::one(Ring::Rationals, order + 1)
                    .sub(&poly_q(&[1, -1], order + 1).mul(&p2)?)?;
                t.div_x_pow(1)?.scale(&Coeff::from_rational(half()))
            }
            Generator::Gamma => {
                let p2 = Generator::P2.expand_q(order + 2)?;
                let t = poly_q(&[1, -1], order + 2)
                    .sub(&poly_q(&[1, 0, -1], order + 2).mul(&p2)?)?;
                t.div_x_pow(2)?.scale(&Coeff::from_rational(half()))
            }
            Generator::Alpha { y, z } => {
                let one = BigRational::one();
                let num = rational_poly(&[one.clone(), z.clone()], order);
                let den = rational_poly(&[one.clone(), y.clone(), one], order);
                num.div(&den)
            }
            Generator::Catalan => {
                let s = poly_q(&[1, -4], order + 1).sqrt()?;
                let t = Series::one(Ring::Rationals, order + 1).sub(&s)?;
                t.div_x_pow(1)?.scale(&Coeff::from_rational(half()))
            }
            Generator::Prop25 => {
                let prod = power_product(order, 3, 1, &[(1, -1)]);
                let three = Coeff::from_rational(BigRational::from(BigInt::from(3)));
                let geo = Series::from_i64(Ring::Rationals, &vec![2; order + 1]);
                prod.scale(&three)?.sub(&geo)
            }
        }
    }
}

/// Multiply out prod_{k>=start} (1 + sum_j c_j x^{j * m^k}) exactly to `order`.
///
/// Each factor is applied in place by a descending scan, so the whole product
/// costs one pass per factor and no factor beyond x^order is ever touched.
fn power_product(order: usize, m: usize, start: u32, terms: &[(usize, i64)]) -> Series {
    let mut f = vec![BigInt::zero(); order + 1];
    f[0] = BigInt::one();
    let mut step = m.pow(start);
    while step <= order {
        for i in (0..=order).rev() {
            for &(j, c) in terms {
                if let Some(src) = i.checked_sub(j * step) {
                    if j * step > 0 {
                        let add = &f[src] * c;
                        f[i] += add;
                    }
                }
            }
        }
        match step.checked_mul(m) {
            Some(s) => step = s,
            None => break,
        }
    }
    Series::from_rationals(f.into_iter().map(BigRational::from).collect())
}

/// Accumulate geometric terms into exponent buckets, then shift down by `shift`.
///
/// The closure receives `add(first, step, sign)` which walks first, first+step,
/// first+2*step, ... up to the internal limit, adding `sign` at each exponent.
fn shifted_sum(order: usize, shift: usize, fill: impl FnOnce(&mut dyn FnMut(usize, usize, i64))) -> Series {
    let limit = order + shift;
    let mut acc = vec![BigInt::zero(); limit + 1];
    let mut add = |first: usize, step: usize, sign: i64| {
        let mut t = first;
        while t <= limit {
            acc[t] += sign;
            match t.checked_add(step) {
                Some(n) => t = n,
                None => break,
            }
        }
    };
    fill(&mut add);
    let coeffs = acc[shift..].iter().map(|b| BigRational::from(b.clone())).collect();
    Series::from_rationals(coeffs)
}

/// Integer polynomial padded with zeros out to `order`.
fn poly_q(coeffs: &[i64], order: usize) -> Series {
    let mut v = vec![0i64; order + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        if i <= order {
            v[i] = c;
        }
    }
    Series::from_i64(Ring::Rationals, &v)
}

fn rational_poly(coeffs: &[BigRational], order: usize) -> Series {
    let mut v = vec![BigRational::zero(); order + 1];
    for (i, c) in coeffs.iter().enumerate() {
        if i <= order {
            v[i] = c.clone();
        }
    }
    Series::from_rationals(v)
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Abstract series expression.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesExpr {
    Lit(BigRational),
    X,
    Gen(Generator),
    Add(Box<SeriesExpr>, Box<SeriesExpr>),
    Sub(Box<SeriesExpr>, Box<SeriesExpr>),
    Mul(Box<SeriesExpr>, Box<SeriesExpr>),
    Div(Box<SeriesExpr>, Box<SeriesExpr>),
    Neg(Box<SeriesExpr>),
    Sqrt(Box<SeriesExpr>),
    Pow(Box<SeriesExpr>, i64),
    /// Substitute x -> x^k, k >= 1.
    Subst(Box<SeriesExpr>, usize),
}

impl SeriesExpr {
    pub fn lit_i64(n: i64) -> SeriesExpr {
        SeriesExpr::Lit(BigRational::from(BigInt::from(n)))
    }

    /// Unary minus with negative literals folded, matching the parser.
    pub fn neg(self) -> SeriesExpr {
        match self {
            SeriesExpr::Lit(q) => SeriesExpr::Lit(-q),
            e => SeriesExpr::Neg(Box::new(e)),
        }
    }

    /// Quotient with literal/literal folded to a rational literal, matching the parser.
    pub fn div(self, rhs: SeriesExpr) -> SeriesExpr {
        match (self, rhs) {
            (SeriesExpr::Lit(a), SeriesExpr::Lit(b)) if !b.is_zero() => SeriesExpr::Lit(a / b),
            (a, b) => SeriesExpr::Div(Box::new(a), Box::new(b)),
        }
    }
}

/// Evaluate to the requested order in the requested ring.
///
/// Evaluation always runs over the rationals; for a residue ring the exact
/// result is reduced afterwards, so denominators must be coprime to p.
pub fn expand(expr: &SeriesExpr, order: usize, ring: Ring) -> Result<Series> {
    let mut slack = 0usize;
    let mut best = 0usize;
    loop {
        match eval_q(expr, order + slack) {
            Ok(f) if f.order() >= order => {
                let f = f.truncated(order)?;
                return match ring {
                    Ring::Rationals => Ok(f),
                    Ring::Residues(md) => crate::modular::reduce_series(&f, md),
                };
            }
            Ok(f) => best = best.max(f.order()),
            Err(Error::InsufficientOrder { have, .. }) => best = best.max(have),
            Err(e) => return Err(e),
        }
        slack = if slack == 0 { 8 } else { slack * 2 };
        if slack > 4096 {
            return Err(Error::InsufficientOrder { need: order, have: best });
        }
    }
}

fn eval_q(expr: &SeriesExpr, order: usize) -> Result<Series> {
    let q = Ring::Rationals;
    match expr {
        SeriesExpr::Lit(c) => Ok(rational_poly(std::slice::from_ref(c), order)),
        SeriesExpr::X => {
            if order == 0 {
                Ok(Series::zero(q, 0))
            } else {
                Series::monomial(q, Coeff::one(q), 1, order)
            }
        }
        SeriesExpr::Gen(g) => g.expand_q(order),
        SeriesExpr::Add(a, b) => eval_q(a, order)?.add(&eval_q(b, order)?),
        SeriesExpr::Sub(a, b) => eval_q(a, order)?.sub(&eval_q(b, order)?),
        SeriesExpr::Mul(a, b) => eval_q(a, order)?.mul(&eval_q(b, order)?),
        SeriesExpr::Div(a, b) => eval_q(a, order)?.div(&eval_q(b, order)?),
        SeriesExpr::Neg(a) => Ok(eval_q(a, order)?.neg()),
        SeriesExpr::Sqrt(a) => eval_q(a, order)?.sqrt(),
        SeriesExpr::Pow(a, e) => eval_q(a, order)?.pow(*e),
        SeriesExpr::Subst(a, k) => eval_q(a, order)?.subst_power(*k),
    }
}

// Precedence levels used by the printer: additive 1, multiplicative 2,
// unary minus 3, power 4, atoms 5. A node is parenthesized whenever its own
// level is below what its context requires.
fn prec(e: &SeriesExpr) -> u8 {
    match e {
        SeriesExpr::Add(..) | SeriesExpr::Sub(..) => 1,
        SeriesExpr::Mul(..) | SeriesExpr::Div(..) => 2,
        SeriesExpr::Neg(..) => 3,
        SeriesExpr::Pow(..) => 4,
        SeriesExpr::Lit(q) if q.is_negative() => 3,
        _ => 5,
    }
}

fn fmt_prec(e: &SeriesExpr, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let wrap = prec(e) < min;
    if wrap {
        out.write_str("(")?;
    }
    match e {
        SeriesExpr::Lit(q) => {
            if q.denom().is_one() {
                write!(out, "{}", q.numer())?;
            } else {
                write!(out, "{}/{}", q.numer(), q.denom())?;
            }
        }
        SeriesExpr::X => out.write_str("x")?,
        SeriesExpr::Gen(g) => {
            out.write_str(g.name())?;
            match g {
                Generator::Pm { m, sign } => write!(out, "({},{})", m, sign)?,
                Generator::Alpha { y, z } => {
                    out.write_str("(")?;
                    fmt_prec(&SeriesExpr::Lit(y.clone()), 0, out)?;
                    out.write_str(",")?;
                    fmt_prec(&SeriesExpr::Lit(z.clone()), 0, out)?;
                    out.write_str(")")?;
                }
                _ => {}
            }
        }
        SeriesExpr::Add(a, b) => {
            fmt_prec(a, 1, out)?;
            out.write_str("+")?;
            fmt_prec(b, 2, out)?;
        }
        SeriesExpr::Sub(a, b) => {
            fmt_prec(a, 1, out)?;
            out.write_str("-")?;
            fmt_prec(b, 2, out)?;
        }
        SeriesExpr::Mul(a, b) => {
            fmt_prec(a, 2, out)?;
            out.write_str("*")?;
            fmt_prec(b, 3, out)?;
        }
        SeriesExpr::Div(a, b) => {
            fmt_prec(a, 2, out)?;
            out.write_str("/")?;
            fmt_prec(b, 3, out)?;
        }
        SeriesExpr::Neg(a) => {
            out.write_str("-")?;
            fmt_prec(a, 4, out)?;
        }
        SeriesExpr::Pow(a, k) => {
            fmt_prec(a, 5, out)?;
            write!(out, "^{}", k)?;
        }
        SeriesExpr::Sqrt(a) => {
            out.write_str("sqrt(")?;
            fmt_prec(a, 0, out)?;
            out.write_str(")")?;
        }
        SeriesExpr::Subst(a, k) => {
            out.write_str("subs(")?;
            fmt_prec(a, 0, out)?;
            write!(out, ",{})", k)?;
        }
    }
    if wrap {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for SeriesExpr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Var,
    Sqrt,
    Subs,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(input: &str) -> Result<Vec<Tok>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                let n: BigInt = digits.parse().expect("digit run parses");
                toks.push(Tok::Int(n));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &input[start..i];
                toks.push(match word {
                    "x" => Tok::Var,
                    "sqrt" => Tok::Sqrt,
                    "subs" => Tok::Subs,
                    _ => Tok::Name(word.to_string()),
                });
            }
            _ => return Err(Error::Parse(format!("unexpected character '{}' at byte {}", c, i))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {}, found {:?}", what, other))),
        }
    }

    fn expr(&mut self) -> Result<SeriesExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = SeriesExpr::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = SeriesExpr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SeriesExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = SeriesExpr::Mul(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<SeriesExpr> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.pos += 1;
        }
        let mut e = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let k = self.signed_int("exponent")?;
            let k = i64::try_from(k).map_err(|_| Error::Parse("exponent out of range".into()))?;
            e = SeriesExpr::Pow(Box::new(e), k);
        }
        Ok(if negate { e.neg() } else { e })
    }

    fn atom(&mut self) -> Result<SeriesExpr> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(SeriesExpr::Lit(BigRational::from(n))),
            Some(Tok::Var) => Ok(SeriesExpr::X),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Sqrt) => {
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(SeriesExpr::Sqrt(Box::new(e)))
            }
            Some(Tok::Subs) => {
                self.expect(Tok::LParen, "'(' after subs")?;
                let e = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let k = self.signed_int("substitution power")?;
                let k = usize::try_from(k)
                    .ok()
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| Error::Parse("substitution power must be >= 1".into()))?;
                self.expect(Tok::RParen, "')'")?;
                Ok(SeriesExpr::Subst(Box::new(e), k))
            }
            Some(Tok::Name(name)) => self.generator(&name),
            other => Err(Error::Parse(format!("expected an atom, found {:?}", other))),
        }
    }

    fn generator(&mut self, name: &str) -> Result<SeriesExpr> {
        let bare = |g: Generator| Ok(SeriesExpr::Gen(g));
        match name {
            "P2" => bare(Generator::P2),
            "P3" => bare(Generator::P3),
            "S2" => bare(Generator::S2),
            "TM27" => bare(Generator::Tm27),
            "S36" => bare(Generator::S36),
            "S37" => bare(Generator::S37),
            "S38" => bare(Generator::S38),
            "DELTA" => bare(Generator::Delta),
            "GAMMA" => bare(Generator::Gamma),
            "CATALAN" => bare(Generator::Catalan),
            "PROP25" => bare(Generator::Prop25),
            "PM" => {
                let (a, b) = self.two_args()?;
                let m = int_arg(&a, "m")?;
                let sign = int_arg(&b, "sign")?;
                Ok(SeriesExpr::Gen(Generator::Pm { m, sign }))
            }
            "ALPHA" => {
                let (y, z) = self.two_args()?;
                Ok(SeriesExpr::Gen(Generator::Alpha { y, z }))
            }
            other => Err(Error::Parse(format!("unknown generator '{}'", other))),
        }
    }

    fn two_args(&mut self) -> Result<(BigRational, BigRational)> {
        self.expect(Tok::LParen, "'(' before generator arguments")?;
        let a = self.rational_arg()?;
        self.expect(Tok::Comma, "','")?;
        let b = self.rational_arg()?;
        self.expect(Tok::RParen, "')'")?;
        Ok((a, b))
    }

    fn rational_arg(&mut self) -> Result<BigRational> {
        let num = self.signed_int("generator argument")?;
        if matches!(self.peek(), Some(Tok::Slash)) {
            self.pos += 1;
            let den = self.signed_int("denominator")?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator in generator argument".into()));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from(num))
        }
    }

    fn signed_int(&mut self, what: &str) -> Result<BigInt> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.pos += 1;
        }
        match self.next() {
            Some(Tok::Int(n)) => Ok(if negate { -n } else { n }),
            other => Err(Error::Parse(format!("expected {}, found {:?}", what, other))),
        }
    }
}

fn int_arg(q: &BigRational, name: &'static str) -> Result<i64> {
    if !q.denom().is_one() {
        return Err(Error::ParamOutOfRange {
            name,
            value: q.to_string(),
            reason: "must be an integer",
        });
    }
    i64::try_from(q.numer().clone()).map_err(|_| Error::ParamOutOfRange {
        name,
        value: q.to_string(),
        reason: "out of range",
    })
}

/// Parse an expression in the calculator grammar.
pub fn parse(input: &str) -> Result<SeriesExpr> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after expression: {:?}",
            &p.toks[p.pos..]
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modulus;
    use crate::series::rat;

    fn q() -> Ring {
        Ring::Rationals
    }

    fn coeffs_i64(f: &Series) -> Vec<i64> {
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.as_rational().expect("rational");
                assert!(r.denom().is_one(), "integer expected, got {}", r);
                i64::try_from(r.numer().clone()).expect("fits i64")
            })
            .collect()
    }

    // Naive dense polynomial multiplication, used as the product oracle.
    fn poly_mul(a: &[i64], b: &[i64], order: usize) -> Vec<i64> {
        let mut out = vec![0i64; order + 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                if i + j <= order {
                    out[i + j] += ai * bj;
                }
            }
        }
        out
    }

    #[test]
    fn p2_matches_catalog_row() {
        let f = expand(&SeriesExpr::Gen(Generator::P2), 16, q()).unwrap();
        let want = [1, -1, -1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1, -1, -1, 1, -1];
        assert_eq!(coeffs_i64(&f), want);
    }

    #[test]
    fn s2_matches_catalog_row() {
        let f = expand(&SeriesExpr::Gen(Generator::S2), 23, q()).unwrap();
        let want = [1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5, 1, 2, 1, 3, 1, 2, 1, 4];
        assert_eq!(coeffs_i64(&f), want);
    }

    #[test]
    fn p3_matches_product_oracle() {
        // Oracle: dense multiplication of (1-x)(1-x^3)(1-x^9).
        let mut oracle = vec![1i64];
        for m in [1usize, 3, 9] {
            let mut factor = vec![0i64; m + 1];
            factor[0] = 1;
            factor[m] = -1;
            oracle = poly_mul(&oracle, &factor, 9);
        }
        assert_eq!(oracle, vec![1, -1, 0, -1, 1, 0, 0, 0, 0, -1]);

        let f = expand(&SeriesExpr::Gen(Generator::P3), 9, q()).unwrap();
        assert_eq!(coeffs_i64(&f), oracle);
    }

    #[test]
    fn pm_generalizes_p2_and_p3() {
        let p2 = expand(&SeriesExpr::Gen(Generator::P2), 40, q()).unwrap();
        let pm2 = expand(&SeriesExpr::Gen(Generator::Pm { m: 2, sign: -1 }), 40, q()).unwrap();
        assert_eq!(p2, pm2);

        let p3 = expand(&SeriesExpr::Gen(Generator::P3), 40, q()).unwrap();
        let pm3 = expand(&SeriesExpr::Gen(Generator::Pm { m: 3, sign: -1 }), 40, q()).unwrap();
        assert_eq!(p3, pm3);

        // Plus sign: prod (1+x^{3^k}) starts 1 + x + x^3 + x^4 + x^9 + ...
        let pp = expand(&SeriesExpr::Gen(Generator::Pm { m: 3, sign: 1 }), 10, q()).unwrap();
        assert_eq!(coeffs_i64(&pp), [1, 1, 0, 1, 1, 0, 0, 0, 0, 1, 1]);

        let bad = expand(&SeriesExpr::Gen(Generator::Pm { m: 1, sign: -1 }), 4, q());
        assert!(matches!(bad, Err(Error::ParamOutOfRange { name: "m", .. })));
    }

    #[test]
    fn tm27_is_plus_minus_one_valued() {
        // Oracle: dense multiplication of (1-x-x^2)(1-x^3-x^6)(1-x^9-x^18).
        let mut oracle = vec![1i64];
        for m in [1usize, 3, 9] {
            let mut factor = vec![0i64; 2 * m + 1];
            factor[0] = 1;
            factor[m] = -1;
            factor[2 * m] = -1;
            oracle = poly_mul(&oracle, &factor, 20);
        }
        let f = expand(&SeriesExpr::Gen(Generator::Tm27), 20, q()).unwrap();
        assert_eq!(coeffs_i64(&f), oracle);

        let g = expand(&SeriesExpr::Gen(Generator::Tm27), 200, q()).unwrap();
        assert!(coeffs_i64(&g).iter().all(|&c| c == 1 || c == -1));
    }

    #[test]
    fn sum_generators_match_series_op_oracle() {
        // Oracle: assemble each sum with generic series division and shifts.
        let n = 48usize;
        let lim = n + 4;
        let x_pow = |e: usize| Series::monomial(q(), Coeff::one(q()), e, lim).unwrap();

        let mut s36 = Series::zero(q(), lim);
        let mut k = 1u32;
        while (1usize << k) <= lim {
            let step = 1usize << k;
            let den = Series::one(q(), lim).sub(&x_pow(step)).unwrap();
            if 2 * step <= lim {
                s36 = s36.add(&x_pow(2 * step).div(&den).unwrap().truncated(lim).unwrap()).unwrap();
            }
            k += 1;
        }
        let s36 = s36.div_x_pow(4).unwrap().truncated(n).unwrap();
        let got = expand(&SeriesExpr::Gen(Generator::S36), n, q()).unwrap();
        assert_eq!(got, s36);

        let mut s37 = Series::zero(q(), lim);
        let mut k = 0u32;
        while (1usize << k) <= lim {
            let step = 1usize << k;
            let den = Series::one(q(), lim).add(&x_pow(step)).unwrap();
            if 4 * step <= lim {
                s37 = s37.add(&x_pow(4 * step).div(&den).unwrap().truncated(lim).unwrap()).unwrap();
            }
            k += 1;
        }
        let s37 = s37.div_x_pow(4).unwrap().truncated(n).unwrap();
        let got = expand(&SeriesExpr::Gen(Generator::S37), n, q()).unwrap();
        assert_eq!(got, s37);

        let lim2 = n + 2;
        let x_pow2 = |e: usize| Series::monomial(q(), Coeff::one(q()), e, lim2).unwrap();
        let mut s38 = Series::zero(q(), lim2);
        let mut k = 0u32;
        while (1usize << (k + 1)) <= lim2 {
            let step = 1usize << (k + 1);
            let den = Series::one(q(), lim2).add(&x_pow2(step)).unwrap();
            s38 = s38.add(&x_pow2(step).div(&den).unwrap().truncated(lim2).unwrap()).unwrap();
            k += 1;
        }
        let s38 = s38.div_x_pow(2).unwrap().truncated(n).unwrap();
        let got = expand(&SeriesExpr::Gen(Generator::S38), n, q()).unwrap();
        assert_eq!(got, s38);

        let lim1 = n + 1;
        let x_pow1 = |e: usize| Series::monomial(q(), Coeff::one(q()), e, lim1).unwrap();
        let mut s2 = Series::zero(q(), lim1);
        let mut step = 1usize;
        while step <= lim1 {
            let den = Series::one(q(), lim1).sub(&x_pow1(step)).unwrap();
            s2 = s2.add(&x_pow1(step).div(&den).unwrap().truncated(lim1).unwrap()).unwrap();
            step *= 2;
        }
        let s2 = s2.div_x_pow(1).unwrap().truncated(n).unwrap();
        let got = expand(&SeriesExpr::Gen(Generator::S2), n, q()).unwrap();
        assert_eq!(got, s2);
    }

    #[test]
    fn delta_and_gamma_are_difference_sequences() {
        let p2 = expand(&SeriesExpr::Gen(Generator::P2), 34, q()).unwrap();
        let eta = coeffs_i64(&p2);
        let delta = expand(&SeriesExpr::Gen(Generator::Delta), 32, q()).unwrap();
        let gamma = expand(&SeriesExpr::Gen(Generator::Gamma), 32, q()).unwrap();
        for n in 0..=32 {
            assert_eq!(coeffs_i64(&delta)[n], (eta[n] - eta[n + 1]) / 2, "delta_{}", n);
            assert_eq!(coeffs_i64(&gamma)[n], (eta[n] - eta[n + 2]) / 2, "gamma_{}", n);
        }
    }

    #[test]
    fn catalan_matches_binomial_oracle() {
        // Oracle: C_n = (2n choose n)/(n+1) by direct factorial arithmetic.
        let mut want = Vec::new();
        for n in 0u64..12 {
            let mut c = BigInt::one();
            for i in 0..n {
                c = c * BigInt::from(2 * n - i) / BigInt::from(i + 1);
            }
            want.push(BigRational::from(c / BigInt::from(n + 1)));
        }
        let f = expand(&SeriesExpr::Gen(Generator::Catalan), 11, q()).unwrap();
        let got: Vec<BigRational> = f.coeffs().iter().map(|c| c.as_rational().unwrap().clone()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn alpha_periodic_patterns() {
        let a = expand(
            &SeriesExpr::Gen(Generator::Alpha { y: rat(1), z: rat(1) }),
            11,
            q(),
        )
        .unwrap();
        assert_eq!(coeffs_i64(&a), [1, 0, -1, 1, 0, -1, 1, 0, -1, 1, 0, -1]);

        let b = expand(
            &SeriesExpr::Gen(Generator::Alpha { y: rat(-1), z: rat(-1) }),
            11,
            q(),
        )
        .unwrap();
        assert_eq!(coeffs_i64(&b), [1, 0, -1, -1, 0, 1, 1, 0, -1, -1, 0, 1]);
    }

    #[test]
    fn prop25_matches_series_op_oracle() {
        let n = 30usize;
        let prod = expand(
            &parse("3*(PM(3,-1)/(1-x)) - 2/(1-x)").unwrap(),
            n,
            q(),
        )
        .unwrap();
        // PM(3,-1) = (1-x) * prod_{k>=1}(1-x^{3^k}), so dividing by 1-x
        // leaves exactly the k>=1 product.
        let got = expand(&SeriesExpr::Gen(Generator::Prop25), n, q()).unwrap();
        assert_eq!(got, prod);
        assert!(coeffs_i64(&got)[0] == 1);
    }

    #[test]
    fn constant_expression_expands_to_constant() {
        let e = parse("x*0 + 1").unwrap();
        let f = expand(&e, 5, q()).unwrap();
        assert_eq!(coeffs_i64(&f), [1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn p2_recursion_holds() {
        // P2(x) = (1-x) * P2(x^2).
        let n = 64usize;
        let lhs = expand(&SeriesExpr::Gen(Generator::P2), n, q()).unwrap();
        let rhs = expand(&parse("(1-x)*subs(P2,2)").unwrap(), n, q()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_slack_recovers_full_order() {
        // CATALAN = (1 - sqrt(1-4x))/(2x) needs one extra internal coefficient.
        let e = parse("(1 - sqrt(1-4*x))/(2*x)").unwrap();
        let f = expand(&e, 10, q()).unwrap();
        assert_eq!(f.order(), 10);
        let direct = expand(&SeriesExpr::Gen(Generator::Catalan), 10, q()).unwrap();
        assert_eq!(f, direct);
    }

    #[test]
    fn reduce_after_rational_evaluation() {
        let md = Modulus::new(3).unwrap();
        let f = expand(&parse("sqrt(1/(1-x))").unwrap(), 3, Ring::Residues(md)).unwrap();
        // (1, 1/2, 3/8, 5/16) reduces to (1, 2, 0, 2) mod 3.
        let want = Series::from_i64(Ring::Residues(md), &[1, 2, 0, 2]);
        assert_eq!(f, want);

        let md4 = Modulus::new(4).unwrap();
        let g = expand(&parse("sqrt(1-4*x)").unwrap(), 8, Ring::Residues(md4)).unwrap();
        let want4 = Series::from_i64(Ring::Residues(md4), &[1, 2, 2, 0, 2, 0, 0, 0, 2]);
        assert_eq!(g, want4);

        let bad = expand(&parse("sqrt(1/(1-x))").unwrap(), 3, Ring::Residues(md4));
        assert!(matches!(bad, Err(Error::NotPIntegral { .. })));
    }

    #[test]
    fn parser_precedence_and_structure() {
        let e = parse("1+2*x^2").unwrap();
        assert_eq!(
            e,
            SeriesExpr::Add(
                Box::new(SeriesExpr::lit_i64(1)),
                Box::new(SeriesExpr::Mul(
                    Box::new(SeriesExpr::lit_i64(2)),
                    Box::new(SeriesExpr::Pow(Box::new(SeriesExpr::X), 2)),
                )),
            )
        );

        let e = parse("-x^2").unwrap();
        assert_eq!(e, SeriesExpr::Neg(Box::new(SeriesExpr::Pow(Box::new(SeriesExpr::X), 2))));

        // Literal quotients and negations fold into rational literals.
        assert_eq!(parse("1/2").unwrap(), SeriesExpr::Lit(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse("-3").unwrap(), SeriesExpr::lit_i64(-3));

        let e = parse("PM(4,-1)").unwrap();
        assert_eq!(e, SeriesExpr::Gen(Generator::Pm { m: 4, sign: -1 }));

        let e = parse("ALPHA(1/2,-3)").unwrap();
        assert_eq!(
            e,
            SeriesExpr::Gen(Generator::Alpha {
                y: BigRational::new(1.into(), 2.into()),
                z: rat(-3),
            })
        );

        assert!(parse("S99").is_err());
        assert!(parse("subs(P2,0)").is_err());
        assert!(parse("1+").is_err());
        assert!(parse("(1").is_err());
        assert!(parse("1 2").is_err());
    }

    #[test]
    fn display_parse_roundtrip() {
        let samples = [
            "P2",
            "1-x",
            "(1-x)*subs(P2,2)",
            "sqrt(1-4*x/(1+3*x))",
            "3*PM(3,-1)-2/(1-x)",
            "-(1+x)^3",
            "x^-1",
            "1/2*x",
            "ALPHA(-1,-1)/CATALAN",
            "subs(S2,3)^2",
        ];
        for s in samples {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(reparsed, e, "roundtrip failed for '{}' -> '{}'", s, printed);
        }
    }

    #[test]
    fn display_uses_minimal_parentheses() {
        let e = parse("(1+x)*(1-x)").unwrap();
        assert_eq!(e.to_string(), "(1+x)*(1-x)");
        let e = parse("1+x*2").unwrap();
        assert_eq!(e.to_string(), "1+x*2");
        let e = parse("x^2/(1-x)").unwrap();
        assert_eq!(e.to_string(), "x^2/(1-x)");
    }
}
