//! Jacobi continued fractions: Stieltjes expansion, reconstruction, the
//! fundamental Hankel product relation, inverse relations, grafting, and
//! eventual-periodicity detection.
//!
//! Conventions, fixed once: a J-fraction is
//!
//!   f = v_0 / (1 + u_1 x - v_1 x^2 / (1 + u_2 x - v_2 x^2 / (1 + ...)))
//!
//! so u starts at u_1, v at v_0, and H_n = v_0^n v_1^{n-1} ... v_{n-1}.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ring::{Coeff, Modulus, Ring};
use crate::series::Series;

/// Eventually periodic sequence: a finite preperiod followed by a repeating
/// period (empty period = plain finite sequence). Kept in normal form: the
/// period is primitive and the preperiod is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPSeq {
    pre: Vec<Coeff>,
    period: Vec<Coeff>,
}

impl EPSeq {
    pub fn new(pre: Vec<Coeff>, period: Vec<Coeff>) -> Self {
        let mut s = EPSeq { pre, period };
        s.normalize();
        s
    }

    pub fn finite(vals: Vec<Coeff>) -> Self {
        EPSeq {
            pre: vals,
            period: Vec::new(),
        }
    }

    pub fn constant(val: Coeff) -> Self {
        EPSeq {
            pre: Vec::new(),
            period: vec![val],
        }
    }

    pub fn pre(&self) -> &[Coeff] {
        &self.pre
    }

    pub fn period(&self) -> &[Coeff] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of available terms; None when the period continues forever.
    pub fn known_len(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(self.pre.len())
        }
    }

    pub fn get(&self, i: usize) -> Option<&Coeff> {
        if i < self.pre.len() {
            return Some(&self.pre[i]);
        }
        if self.period.is_empty() {
            return None;
        }
        Some(&self.period[(i - self.pre.len()) % self.period.len()])
    }

    /// First n terms; fails when a finite sequence is too short.
    pub fn take(&self, n: usize) -> Result<Vec<Coeff>> {
        if let Some(len) = self.known_len() {
            if len < n {
                return Err(Error::InsufficientOrder { need: n, have: len });
            }
        }
        Ok((0..n).map(|i| self.get(i).unwrap().clone()).collect())
    }

    /// The sequence with its first k terms dropped.
    pub fn skip(&self, k: usize) -> EPSeq {
        if k <= self.pre.len() {
            return EPSeq::new(self.pre[k..].to_vec(), self.period.clone());
        }
        if self.period.is_empty() {
            return EPSeq::finite(Vec::new());
        }
        let r = (k - self.pre.len()) % self.period.len();
        let mut period = self.period[r..].to_vec();
        period.extend_from_slice(&self.period[..r]);
        EPSeq::new(Vec::new(), period)
    }

    pub fn prepend(&self, vals: &[Coeff]) -> EPSeq {
        let mut pre = vals.to_vec();
        pre.extend(self.pre.iter().cloned());
        EPSeq::new(pre, self.period.clone())
    }

    /// Primitive period, then pull the boundary as far left as possible.
    fn normalize(&mut self) {
        if self.period.is_empty() {
            return;
        }
        let n = self.period.len();
        for d in 1..n {
            if n % d == 0 && (d..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let Some(last) = self.pre.last() {
            if last != self.period.last().unwrap() {
                break;
            }
            self.pre.pop();
            let last = self.period.pop().unwrap();
            self.period.insert(0, last);
        }
    }

    /// Star notation, e.g. `(1, (3,0)^*)`.
    pub fn to_star(&self) -> String {
        let mut out = String::from("(");
        let mut parts: Vec<String> = self.pre.iter().map(|c| c.to_string()).collect();
        if self.is_periodic() {
            let inner: Vec<String> = self.period.iter().map(|c| c.to_string()).collect();
            parts.push(format!("({})^*", inner.join(",")));
        }
        out.push_str(&parts.join(", "));
        out.push(')');
        out
    }

    /// Pipe notation, e.g. `pre: 1, -2 | per: 1, -1`.
    pub fn to_pipe(&self) -> String {
        let join = |v: &[Coeff]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        match (self.pre.is_empty(), self.period.is_empty()) {
            (_, true) => format!("pre: {}", join(&self.pre)),
            (true, false) => format!("per: {}", join(&self.period)),
            (false, false) => format!("pre: {} | per: {}", join(&self.pre), join(&self.period)),
        }
    }

    /// Parses star notation: `(1,(3,0)*)`, `(1,2)`, `((1)^*)`. Whitespace
    /// is ignored; residues read integer representatives.
    pub fn parse_star(text: &str, ring: Ring) -> Result<EPSeq> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("star sequence must be parenthesized: {text:?}")))?;
        let (pre_part, per_part) = match inner.find('(') {
            Some(pos) => {
                let per = inner[pos..]
                    .strip_suffix('*')
                    .map(|t| t.strip_suffix('^').unwrap_or(t))
                    .and_then(|t| t.strip_prefix('('))
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| {
                        Error::Parse(format!("malformed period in star sequence: {text:?}"))
                    })?;
                let pre = inner[..pos].trim_end_matches(',');
                (pre, per)
            }
            None => (inner, ""),
        };
        let parse_list = |part: &str| -> Result<Vec<Coeff>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',').map(|tok| parse_coeff(tok, ring)).collect()
        };
        Ok(EPSeq::new(parse_list(pre_part)?, parse_list(per_part)?))
    }
}

fn parse_coeff(tok: &str, ring: Ring) -> Result<Coeff> {
    match ring {
        Ring::Rationals => tok
            .parse()
            .map(Coeff::Rat)
            .map_err(|_| Error::Parse(format!("bad rational {tok:?}"))),
        Ring::Residues(md) => tok
            .parse::<i64>()
            .map(|n| Coeff::Res(md.reduce_i64(n), md))
            .map_err(|_| Error::Parse(format!("bad residue {tok:?}"))),
    }
}

/// A J-fraction: u-row u_1, u_2, ... and v-row v_0, v_1, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JFraction {
    pub u: EPSeq,
    pub v: EPSeq,
}

impl JFraction {
    pub fn new(u: EPSeq, v: EPSeq) -> Self {
        JFraction { u, v }
    }

    /// Number of trusted (u_n, v_n) pairs; None when periodic tails provide
    /// arbitrarily many.
    pub fn known_depth(&self) -> Option<usize> {
        match (self.u.known_len(), self.v.known_len()) {
            (None, None) => None,
            (Some(u), None) => Some(u),
            (None, Some(v)) => Some(v.saturating_sub(1)),
            (Some(u), Some(v)) => Some(u.min(v.saturating_sub(1))),
        }
    }

    /// `J[u-row/v-row]` in star notation.
    pub fn to_star(&self) -> String {
        format!("J[{}/{}]", self.u.to_star(), self.v.to_star())
    }

    /// Two-line pipe rendering of both rows.
    pub fn to_pipe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "u: {}", self.u.to_pipe());
        let _ = write!(out, "v: {}", self.v.to_pipe());
        out
    }
}

/// Expands f into its J-fraction by iterated tail inversion, producing
/// u_1..u_d and v_0..v_d.
///
/// Needs order(f) >= 2d. Breakdown at level n (v_n = 0, equivalently
/// H_{n+1}(f) = 0) is reported as n+1, the index of the vanishing Hankel
/// determinant; only v_1..v_{d-1} are ever inverted, so a trailing zero
/// v_d is representable.
pub fn stieltjes_expand(f: &Series, depth: usize) -> Result<JFraction> {
    if f.order() < 2 * depth {
        return Err(Error::InsufficientOrder {
            need: 2 * depth,
            have: f.order(),
        });
    }
    let ring = f.ring();
    let v0 = f.coeff(0)?.clone();
    if v0.is_zero() {
        return Err(Error::StieltjesBreakdown { n: 1 });
    }
    let mut u = Vec::with_capacity(depth);
    let mut v = Vec::with_capacity(depth + 1);
    v.push(v0.clone());
    if depth == 0 {
        return Ok(JFraction::new(EPSeq::finite(u), EPSeq::finite(v)));
    }

    // Tail f_n has constant term 1 by construction; keep v_0 explicit only
    // at the first level.
    let mut tail = f.scale(&v0.inverse()?)?;
    for n in 1..=depth {
        // 1/f_n = 1 + u_n x - v_n x^2 f_{n+1}, so u_n is the x-coefficient.
        let g = Series::one(ring, tail.order()).div(&tail)?;
        let un = g.coeff(1)?.clone();
        u.push(un.clone());
        // h = 1 + u_n x - 1/f_n = v_n x^2 f_{n+1}
        let mut h = Series::one(ring, g.order())
            .add(&Series::monomial(ring, un, 1, g.order())?)?
            .sub(&g)?;
        h = h.div_x_pow(2)?;
        let vn = h.coeff(0)?.clone();
        v.push(vn.clone());
        if n == depth {
            break;
        }
        if vn.is_zero() {
            return Err(Error::StieltjesBreakdown { n: n + 1 });
        }
        tail = h.scale(&vn.inverse()?)?;
    }
    Ok(JFraction::new(EPSeq::finite(u), EPSeq::finite(v)))
}

/// Evaluates the continued fraction bottom-up, exact to order N.
///
/// Uses levels 1..ceil(N/2); dropping the rest only disturbs coefficients
/// past x^N. Needs v_0..v_L and u_1..u_L with L = ceil(N/2).
pub fn jfrac_to_series(j: &JFraction, order: usize) -> Result<Series> {
    let levels = order.div_ceil(2);
    let need = levels + 1; // pairs counted with the v_0 level
    let have = |len: Option<usize>, plus: usize| len.map(|l| l + plus);
    let u_ok = have(j.u.known_len(), 0).map_or(true, |l| l >= levels);
    let v_ok = have(j.v.known_len(), 0).map_or(true, |l| l >= levels + 1);
    if !u_ok || !v_ok {
        return Err(Error::InsufficientDepth {
            depth: j.known_depth().unwrap_or(0),
            order,
            need,
        });
    }
    let v0 = j
        .v
        .get(0)
        .ok_or_else(|| Error::Parse("J-fraction with empty v-row".into()))?
        .clone();
    let ring = v0.ring();
    let one = Series::one(ring, order);
    let mut denom = one.clone();
    for lvl in (1..=levels).rev() {
        let ux = Series::monomial(ring, j.u.get(lvl - 1).unwrap().clone(), 1, order)?;
        let vx2 = if order >= 2 {
            Series::monomial(ring, j.v.get(lvl).unwrap().clone(), 2, order)?
        } else {
            Series::zero(ring, order)
        };
        denom = one.add(&ux)?.sub(&vx2.div(&denom)?)?;
    }
    Series::monomial(ring, v0, 0, order)?.div(&denom)
}

/// The fundamental product relation: H_n = v_0^n v_1^{n-1} ... v_{n-1} for
/// n <= N, returned as (H_0, ..., H_N).
pub fn hankel_from_jfrac(j: &JFraction, n_max: usize) -> Result<Vec<Coeff>> {
    let v = j.v.take(n_max).map_err(|_| Error::InsufficientDepth {
        depth: j.known_depth().unwrap_or(0),
        order: n_max,
        need: n_max,
    })?;
    let ring = match v.first() {
        Some(c) => c.ring(),
        None => Ring::Rationals,
    };
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Coeff::one(ring));
    for n in 1..=n_max {
        // H_n = H_{n-1} * (v_0 v_1 ... v_{n-1})
        let mut h = out[n - 1].clone();
        for vj in &v[..n] {
            h = h.mul(vj);
        }
        out.push(h);
    }
    Ok(out)
}

/// Inverse relations: u_n and v_{n-1} recovered from the two Hankel tables
/// H = (H_n), H1 = (H_n^(1)).
///
/// Entries whose denominators vanish are left as None; `jfraction` upgrades
/// a hole-free prefix into a JFraction.
#[derive(Debug, Clone)]
pub struct UvRecovery {
    /// u[i] = u_{i+1}, None when a denominator vanished.
    pub u: Vec<Option<Coeff>>,
    /// v[i] = v_i, None when a denominator vanished.
    pub v: Vec<Option<Coeff>>,
}

impl UvRecovery {
    /// Strict view: fails at the first unrecoverable index.
    pub fn jfraction(&self) -> Result<JFraction> {
        let u: Option<Vec<Coeff>> = self.u.iter().cloned().collect();
        let v: Option<Vec<Coeff>> = self.v.iter().cloned().collect();
        match (u, v) {
            (Some(u), Some(v)) => Ok(JFraction::new(EPSeq::finite(u), EPSeq::finite(v))),
            _ => {
                let index = self
                    .u
                    .iter()
                    .position(|c| c.is_none())
                    .map(|i| i + 1)
                    .into_iter()
                    .chain(self.v.iter().position(|c| c.is_none()))
                    .min()
                    .unwrap();
                Err(Error::ZeroHankelDenominator { index })
            }
        }
    }
}

/// Recovers u_n = -(1/H1_{n-1}) (H_{n-1} H1_n / H_n + H_n H1_{n-2} / H_{n-1})
/// and v_{n-1} = H_n H_{n-2} / H_{n-1}^2, aligned to the Stieltjes
/// convention (u from u_1, v from v_0).
pub fn uv_from_hankel(h: &[Coeff], h1: &[Coeff]) -> Result<UvRecovery> {
    if h.len() < 2 || h1.len() < 2 {
        return Err(Error::InsufficientOrder {
            need: 2,
            have: h.len().min(h1.len()).saturating_sub(1),
        });
    }
    let n_max = h.len().min(h1.len()) - 1;
    let mut u: Vec<Option<Coeff>> = Vec::new();
    let mut v: Vec<Option<Coeff>> = Vec::new();
    // v_0 = H_1, u_1 = -H1_1 / H_1.
    v.push(h[1].is_zero().then(|| None).unwrap_or(Some(h[1].clone())));
    u.push(match h1[1].div(&h[1]) {
        Ok(q) => Some(q.neg()),
        Err(_) => None,
    });
    for n in 2..=n_max {
        let un = (|| {
            let a = h[n - 1].mul(&h1[n]).div(&h[n]).ok()?;
            let b = h[n].mul(&h1[n - 2]).div(&h[n - 1]).ok()?;
            a.add(&b).div(&h1[n - 1]).ok().map(|q| q.neg())
        })();
        u.push(un);
        let vn = h[n]
            .mul(&h[n - 2])
            .div(&h[n - 1].mul(&h[n - 1]))
            .ok();
        v.push(vn);
    }
    Ok(UvRecovery { u, v })
}

/// Grafts G onto F's first k levels: u = (u_1..u_k, a_1, a_2, ...),
/// v = (v_0..v_k, b_1, b_2, ...). G must have b_0 = 1.
pub fn graft(f: &JFraction, g: &JFraction, k: usize) -> Result<JFraction> {
    match g.v.get(0) {
        Some(b0) if b0.is_one() => {}
        Some(b0) => {
            return Err(Error::GraftBasis {
                found: b0.to_string(),
            })
        }
        None => return Err(Error::GraftBasis { found: "".into() }),
    }
    let fu = f.u.take(k).map_err(insufficient_pairs(f, k))?;
    let fv = f.v.take(k + 1).map_err(insufficient_pairs(f, k))?;
    Ok(JFraction::new(
        g.u.prepend(&fu),
        g.v.skip(1).prepend(&fv),
    ))
}

/// The tail of F past level k, with v_0 reset to 1; inverse of `graft`.
pub fn chop(f: &JFraction, k: usize) -> Result<JFraction> {
    let ring = f
        .v
        .get(0)
        .ok_or_else(|| Error::Parse("J-fraction with empty v-row".into()))?
        .ring();
    f.v.take(k + 1).map_err(insufficient_pairs(f, k))?;
    Ok(JFraction::new(
        f.u.skip(k),
        f.v.skip(k + 1).prepend(&[Coeff::one(ring)]),
    ))
}

fn insufficient_pairs(f: &JFraction, k: usize) -> impl Fn(Error) -> Error + '_ {
    move |_| Error::InsufficientDepth {
        depth: f.known_depth().unwrap_or(0),
        order: k,
        need: k,
    }
}

/// Whether H_n(F) / H_n(Fbar) = 1 (mod m) for 1 <= n <= N, with both sides
/// taken from the v-row products. Rational inputs must be p-integral
/// where it counts: a ratio with non-unit denominator is an error.
pub fn graft_ratio_check(
    f: &JFraction,
    fbar: &JFraction,
    md: Modulus,
    n_max: usize,
) -> Result<bool> {
    let hf = hankel_from_jfrac(f, n_max)?;
    let hg = hankel_from_jfrac(fbar, n_max)?;
    for n in 1..=n_max {
        let ratio = hf[n].div(&hg[n])?;
        let ok = match ratio {
            Coeff::Rat(q) => md.reduce_rational(&q)? == 1 % md.m(),
            Coeff::Res(r, from) => {
                if from.p() != md.p() || from.e() < md.e() {
                    return Err(Error::RingMismatch {
                        left: Ring::Residues(from).to_string(),
                        right: Ring::Residues(md).to_string(),
                    });
                }
                r % md.m() == 1 % md.m()
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Finds the smallest (preperiod, period) covering the whole observed tail
/// with at least `min_reps` full repetitions. Heuristic: the caller must
/// treat a hit as conjectural.
pub fn detect_periodicity(s: &[Coeff], min_reps: usize) -> Option<EPSeq> {
    assert!(min_reps >= 3, "min_reps below 3 invites noise");
    for pre in 0..s.len() {
        let tail = &s[pre..];
        let max_per = tail.len() / min_reps;
        for per in 1..=max_per {
            if tail.iter().enumerate().all(|(i, c)| c == &tail[i % per]) {
                return Some(EPSeq::new(s[..pre].to_vec(), tail[..per].to_vec()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{hankel_det, hankel_sequence};
    use crate::series::{rat, ratio};
    use num_rational::BigRational;

    const Q: Ring = Ring::Rationals;

    fn c(n: i64) -> Coeff {
        Coeff::Rat(rat(n))
    }

    fn cr(p: i64, q: i64) -> Coeff {
        Coeff::Rat(ratio(p, q))
    }

    /// prod (1 - x^(2^k)) to the given order, built by in-place sparse
    /// multiplication; independent of the expression engine.
    fn pd_series(order: usize) -> Series {
        let mut f = vec![rat(1); order + 1];
        for i in 1..=order {
            f[i] = rat(0);
        }
        let mut m = 1;
        while m <= order {
            for i in (m..=order).rev() {
                let t = f[i - m].clone();
                f[i] -= t;
            }
            m *= 2;
        }
        Series::from_rationals(f)
    }

    #[test]
    fn pd_series_prefix() {
        let f = pd_series(16);
        let expect = [1, -1, -1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1, -1, -1, 1, -1];
        assert_eq!(f, Series::from_i64(Q, &expect));
    }

    #[test]
    fn stieltjes_period_doubling() {
        let j = stieltjes_expand(&pd_series(24), 12).unwrap();
        let u_expect: Vec<Coeff> = (0..12).map(|i| c(if i % 2 == 0 { 1 } else { -1 })).collect();
        assert_eq!(j.u, EPSeq::finite(u_expect));
        let v_expect = vec![
            c(1),
            c(-2),
            c(1),
            c(-1),
            c(-1),
            c(-1),
            c(1),
            c(-1),
            c(1),
            c(-3),
            cr(1, 3),
            cr(-1, 3),
            c(-3),
        ];
        assert_eq!(j.v, EPSeq::finite(v_expect));
        assert_eq!(j.known_depth(), Some(12));
    }

    #[test]
    fn stieltjes_ruler_sequence() {
        let s2 = Series::from_i64(
            Q,
            &[1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5, 1, 2, 1, 3, 1, 2, 1, 4],
        );
        let j = stieltjes_expand(&s2, 4).unwrap();
        assert_eq!(
            j.u,
            EPSeq::finite(vec![c(-2), cr(7, 3), cr(23, 3), cr(-167, 21)])
        );
        assert_eq!(
            j.v,
            EPSeq::finite(vec![c(1), c(-3), cr(-1, 9), c(-63), cr(-1, 441)])
        );
    }

    #[test]
    fn stieltjes_breakdown_matches_zero_hankel() {
        let ones = Series::from_i64(Q, &[1; 9]);
        assert_eq!(
            stieltjes_expand(&ones, 2),
            Err(Error::StieltjesBreakdown { n: 2 })
        );
        assert!(hankel_det(&ones, 2, 0).unwrap().is_zero());
        assert!(!hankel_det(&ones, 1, 0).unwrap().is_zero());
        // Depth 1 stops before inverting v_1, so it still succeeds.
        let j = stieltjes_expand(&ones, 1).unwrap();
        assert_eq!(j.v, EPSeq::finite(vec![c(1), c(0)]));
        assert_eq!(j.u, EPSeq::finite(vec![c(-1)]));
        let msg = Error::StieltjesBreakdown { n: 2 }.to_string();
        assert_eq!(msg, "Stieltjes breakdown at n=2 (H_2=0)");
    }

    /// Catalan numbers by the convolution recurrence, as an oracle.
    fn catalan(n: usize) -> Vec<BigRational> {
        let mut c = vec![rat(1)];
        for m in 1..=n {
            let mut acc = rat(0);
            for i in 0..m {
                acc += c[i].clone() * c[m - 1 - i].clone();
            }
            c.push(acc);
        }
        c
    }

    #[test]
    fn jfrac_catalan_in_x_squared() {
        let j = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(c(1)));
        let f = jfrac_to_series(&j, 8).unwrap();
        let cat = catalan(4);
        let expect: Vec<BigRational> = (0..=8)
            .map(|i| {
                if i % 2 == 0 {
                    cat[i / 2].clone()
                } else {
                    rat(0)
                }
            })
            .collect();
        assert_eq!(expect[..], [1, 0, 1, 0, 2, 0, 5, 0, 14].map(rat));
        assert_eq!(f, Series::from_rationals(expect));
    }

    #[test]
    fn jfrac_depth_one_geometric() {
        let j = JFraction::new(
            EPSeq::finite(vec![c(-1), c(0), c(0), c(0)]),
            EPSeq::finite(vec![c(1), c(0), c(0), c(0)]),
        );
        let f = jfrac_to_series(&j, 6).unwrap();
        assert_eq!(f, Series::from_i64(Q, &[1; 7]));
    }

    #[test]
    fn jfrac_refuses_shallow_prefix() {
        let j = JFraction::new(EPSeq::finite(vec![c(0)]), EPSeq::finite(vec![c(1), c(1)]));
        // known_depth = 1, so orders past 2 must be refused.
        assert!(jfrac_to_series(&j, 2).is_ok());
        assert_eq!(
            jfrac_to_series(&j, 3),
            Err(Error::InsufficientDepth {
                depth: 1,
                order: 3,
                need: 3
            })
        );
    }

    #[test]
    fn roundtrip_series_jfrac_series() {
        let f = pd_series(24);
        let j = stieltjes_expand(&f, 12).unwrap();
        let back = jfrac_to_series(&j, 24).unwrap();
        assert_eq!(back, f.truncated(24).unwrap());
    }

    #[test]
    fn fundamental_relation_on_period_doubling() {
        let f = pd_series(24);
        let j = stieltjes_expand(&f, 12).unwrap();
        let via_products = hankel_from_jfrac(&j, 11).unwrap();
        let expect: Vec<Coeff> = [1, 1, -2, 4, 8, -16, -32, -64, 128, -256, -1536, -3072]
            .iter()
            .map(|&n| c(n))
            .collect();
        assert_eq!(via_products, expect);
        assert_eq!(hankel_sequence(&f, 11, 0).unwrap(), expect);
    }

    #[test]
    fn hankel_products_of_quartic_pattern() {
        // v = (1, 1, 1, -1, -1, 2, 1/2, -1/2, -2, 3, 1/3, -1/3) and u = 0.
        let v = vec![
            c(1),
            c(1),
            c(1),
            c(-1),
            c(-1),
            c(2),
            cr(1, 2),
            cr(-1, 2),
            c(-2),
            c(3),
            cr(1, 3),
            cr(-1, 3),
        ];
        let j = JFraction::new(EPSeq::constant(c(0)), EPSeq::finite(v));
        let h = hankel_from_jfrac(&j, 12).unwrap();
        let expect: Vec<Coeff> = [1, 1, 1, 1, -1, -1, -2, -2, 1, 1, 3, 3, -1]
            .iter()
            .map(|&n| c(n))
            .collect();
        assert_eq!(h, expect);
    }

    #[test]
    fn all_ones_v_row() {
        let j = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(c(1)));
        let h = hankel_from_jfrac(&j, 9).unwrap();
        assert!(h.iter().all(Coeff::is_one));
    }

    #[test]
    fn uv_recovery_agrees_with_stieltjes() {
        let f = pd_series(24);
        let j = stieltjes_expand(&f, 10).unwrap();
        let h = hankel_sequence(&f, 11, 0).unwrap();
        let h1 = hankel_sequence(&f, 11, 1).unwrap();
        let rec = uv_from_hankel(&h, &h1).unwrap();
        for n in 1..=10usize {
            if let Some(un) = &rec.u[n - 1] {
                assert_eq!(un, j.u.get(n - 1).unwrap(), "u_{n}");
            }
            if let Some(vn) = &rec.v[n - 1] {
                assert_eq!(vn, j.v.get(n - 1).unwrap(), "v_{}", n - 1);
            }
        }
        // The shifted table has a vanishing determinant, so at least one
        // u-slot is unrecoverable and the strict view reports it.
        assert!(rec.u.iter().any(|c| c.is_none()));
        assert!(matches!(
            rec.jfraction(),
            Err(Error::ZeroHankelDenominator { .. })
        ));
    }

    #[test]
    fn uv_recovery_constant_series() {
        let ones = Series::from_i64(Q, &[1; 9]);
        let h = hankel_sequence(&ones, 4, 0).unwrap();
        let h1 = hankel_sequence(&ones, 4, 1).unwrap();
        let rec = uv_from_hankel(&h, &h1).unwrap();
        assert_eq!(rec.v[0], Some(c(1)));
        assert_eq!(rec.v[1], Some(c(0)));
        assert_eq!(rec.u[0], Some(c(-1)));
        assert_eq!(rec.u[1], None);
        assert_eq!(
            rec.jfraction(),
            Err(Error::ZeroHankelDenominator { index: 2 })
        );
    }

    #[test]
    fn graft_reproduces_scaled_hankel() {
        let f = pd_series(24);
        let jf = stieltjes_expand(&f, 12).unwrap();
        let gbar = JFraction::new(EPSeq::constant(c(1)), EPSeq::constant(c(1)));
        let grafted = graft(&jf, &gbar, 1).unwrap();
        let h = hankel_from_jfrac(&grafted, 12).unwrap();
        for (n, hn) in h.iter().enumerate().skip(1) {
            // v = (1, -2, 1, 1, ...) gives H_n = (-2)^(n-1).
            let expect = if (n - 1) % 2 == 0 {
                c(1 << (n - 1))
            } else {
                c(-(1 << (n - 1)))
            };
            assert_eq!(hn, &expect, "n={n}");
        }
        assert!(graft_ratio_check(&jf, &grafted, Modulus::new(2).unwrap(), 11).unwrap());
    }

    #[test]
    fn graft_chop_roundtrip() {
        let f = pd_series(24);
        let jf = stieltjes_expand(&f, 12).unwrap();
        for k in 0..4 {
            let tail = chop(&jf, k).unwrap();
            let back = graft(&jf, &tail, k).unwrap();
            assert_eq!(back.u.take(12).unwrap(), jf.u.take(12).unwrap(), "k={k}");
            assert_eq!(back.v.take(13).unwrap(), jf.v.take(13).unwrap(), "k={k}");
        }
    }

    #[test]
    fn graft_needs_unit_base() {
        let f = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(c(1)));
        let g = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(c(2)));
        assert_eq!(graft(&f, &g, 1), Err(Error::GraftBasis { found: "2".into() }));
    }

    #[test]
    fn ratio_check_rejects_unequal() {
        let f = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(c(2)));
        let g = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(c(1)));
        // H_1 ratio is 2, not 1 mod 3.
        assert!(!graft_ratio_check(&f, &g, Modulus::new(3).unwrap(), 4).unwrap());
        // Identical rows trivially pass.
        assert!(graft_ratio_check(&f, &f, Modulus::new(3).unwrap(), 8).unwrap());
        // 3-adic denominators are flagged, not silently folded.
        let h = JFraction::new(EPSeq::constant(c(0)), EPSeq::constant(cr(1, 3)));
        assert!(graft_ratio_check(&h, &g, Modulus::new(3).unwrap(), 2).is_err());
    }

    #[test]
    fn periodicity_detection() {
        // Alternating tail after a lone head.
        let s: Vec<Coeff> = [1, 1, 2, 1, 2, 1, 2, 1, 2].iter().map(|&n| c(n)).collect();
        let ep = detect_periodicity(&s, 3).unwrap();
        assert_eq!(ep.pre(), &[c(1)]);
        assert_eq!(ep.period(), &[c(1), c(2)]);

        let ones: Vec<Coeff> = vec![c(1); 8];
        let ep = detect_periodicity(&ones, 3).unwrap();
        assert_eq!(ep.pre(), &[] as &[Coeff]);
        assert_eq!(ep.period(), &[c(1)]);

        let s: Vec<Coeff> = [1, 1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 2, 2]
            .iter()
            .map(|&n| c(n))
            .collect();
        let ep = detect_periodicity(&s, 3).unwrap();
        assert_eq!(ep.pre(), &[c(1)]);
        assert_eq!(ep.period(), &[c(1), c(1), c(2), c(2)]);

        let aperiodic: Vec<Coeff> = (0..12).map(c).collect();
        assert!(detect_periodicity(&aperiodic, 3).is_none());
    }

    #[test]
    fn epseq_normal_form() {
        // (1, (2,1)^*) = ((1,2)^*).
        let a = EPSeq::new(vec![c(1)], vec![c(2), c(1)]);
        let b = EPSeq::new(vec![], vec![c(1), c(2)]);
        assert_eq!(a, b);
        // Non-primitive periods collapse.
        let d = EPSeq::new(vec![], vec![c(1), c(2), c(1), c(2)]);
        assert_eq!(d.period(), &[c(1), c(2)]);
        // Skip walks into the period with rotation.
        let s = EPSeq::new(vec![c(9)], vec![c(1), c(2), c(3)]);
        let t = s.skip(3);
        assert_eq!(t.take(4).unwrap(), vec![c(3), c(1), c(2), c(3)]);
    }

    #[test]
    fn star_notation_roundtrip() {
        let cases = [
            EPSeq::new(vec![c(1)], vec![c(3), c(0)]),
            EPSeq::finite(vec![c(1), c(-2)]),
            EPSeq::constant(cr(-1, 3)),
            EPSeq::new(vec![cr(1, 2), c(4)], vec![c(-1)]),
        ];
        for ep in &cases {
            let star = ep.to_star();
            let back = EPSeq::parse_star(&star, Q).unwrap();
            assert_eq!(&back, ep, "star {star}");
        }
        assert_eq!(cases[0].to_star(), "(1, (3,0)^*)");
        assert_eq!(EPSeq::parse_star("(1,(3,0)*)", Q).unwrap(), cases[0]);
        assert_eq!(cases[0].to_pipe(), "pre: 1 | per: 3, 0");
        assert_eq!(cases[1].to_pipe(), "pre: 1, -2");
    }
}
