//! Bivariate algebraic relations P(x, f) = 0 for truncated series.
//!
//! This is the equation half of the chopping workflow: drop leading levels of
//! a J-fraction (see `chop`), guess a polynomial relation for the tail from
//! its coefficients, and solve quadratic relations back into series form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::Series;

pub use crate::jfraction::chop;

/// Polynomial in x and f with exact rational coefficients.
///
/// Stored as a dense grid c[j][i] for the monomial x^i f^j. Always kept
/// normalized: integer coefficients with content 1, and the leading
/// coefficient positive in the canonical term order (f-degree descending,
/// then x-degree ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarPoly {
    c: Vec<Vec<BigRational>>,
}

impl BivarPoly {
    /// Normalizes a coefficient grid c[j][i]; the zero polynomial is refused.
    pub fn new(mut grid: Vec<Vec<BigRational>>) -> Result<Self> {
        while grid.last().is_some_and(|row| row.iter().all(Zero::is_zero)) {
            grid.pop();
        }
        let width = grid
            .iter()
            .map(|row| row.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1))
            .max()
            .unwrap_or(0);
        if grid.is_empty() || width == 0 {
            return Err(Error::ParamOutOfRange {
                name: "P",
                value: "0".into(),
                reason: "polynomial must not be identically zero",
            });
        }
        for row in &mut grid {
            row.truncate(width);
            row.resize(width, BigRational::zero());
        }

        // Clear denominators, divide out the content, fix the leading sign.
        let mut denom_lcm = BigInt::one();
        for c in grid.iter().flatten() {
            if !c.is_zero() {
                denom_lcm = denom_lcm.lcm(c.denom());
            }
        }
        let mut content = BigInt::zero();
        for c in grid.iter().flatten() {
            if !c.is_zero() {
                content = content.gcd(&(c.numer() * &denom_lcm / c.denom()));
            }
        }
        let mut scale = BigRational::new(denom_lcm, content);
        let leading = grid
            .iter()
            .enumerate()
            .rev()
            .find_map(|(_, row)| row.iter().find(|c| !c.is_zero()))
            .expect("nonzero grid");
        if (leading * &scale).is_negative() {
            scale = -scale;
        }
        for c in grid.iter_mut().flatten() {
            *c *= &scale;
        }
        Ok(BivarPoly { c: grid })
    }

    /// Builds from integer monomial terms (coefficient, x-degree, f-degree).
    pub fn from_int_terms(terms: &[(i64, usize, usize)]) -> Result<Self> {
        let df = terms.iter().map(|t| t.2).max().unwrap_or(0);
        let dx = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut grid = vec![vec![BigRational::zero(); dx + 1]; df + 1];
        for &(c, i, j) in terms {
            grid[j][i] += BigRational::from(BigInt::from(c));
        }
        BivarPoly::new(grid)
    }

    /// Degree in x.
    pub fn dx(&self) -> usize {
        self.c[0].len() - 1
    }

    /// Degree in f.
    pub fn df(&self) -> usize {
        self.c.len() - 1
    }

    /// Coefficient of x^i f^j.
    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.c
            .get(j)
            .and_then(|row| row.get(i))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Row j as the polynomial in x multiplying f^j, padded to `order`.
    fn row_series(&self, j: usize, order: usize) -> Series {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        if let Some(row) = self.c.get(j) {
            for (i, c) in row.iter().enumerate() {
                if i <= order {
                    coeffs[i] = c.clone();
                }
            }
        }
        Series::from_rationals(coeffs)
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for j in (0..=self.df()).rev() {
            for i in 0..=self.dx() {
                let c = &self.c[j][i];
                if c.is_zero() {
                    continue;
                }
                let mag = c.abs();
                if first {
                    if c.is_negative() {
                        out.write_str("-")?;
                    }
                    first = false;
                } else if c.is_negative() {
                    out.write_str("-")?;
                } else {
                    out.write_str("+")?;
                }
                let mut wrote = false;
                if !mag.is_one() || (i == 0 && j == 0) {
                    write!(out, "{}", mag)?;
                    wrote = true;
                }
                if i > 0 {
                    if wrote {
                        out.write_str("*")?;
                    }
                    if i == 1 {
                        out.write_str("x")?;
                    } else {
                        write!(out, "x^{}", i)?;
                    }
                    wrote = true;
                }
                if j > 0 {
                    if wrote {
                        out.write_str("*")?;
                    }
                    if j == 1 {
                        out.write_str("f")?;
                    } else {
                        write!(out, "f^{}", j)?;
                    }
                }
            }
        }
        Ok(())
    }
}

// Column order for the linear system: graded lexicographic on x^i f^j,
// so the last nonzero entry of a kernel vector is its leading monomial.
fn graded_key(i: usize, j: usize) -> (usize, usize, usize) {
    (i + j, j, i)
}

/// Searches for the smallest polynomial relation P(x, f) = 0 within the
/// degree bounds, trying candidate bounds in order of system size with lower
/// f-degree first. The last `margin` known coefficients of f are withheld
/// from the solve and used to validate the guess; a guess failing any of
/// them is rejected outright.
pub fn guess_algebraic(
    f: &Series,
    dx: usize,
    df: usize,
    margin: usize,
) -> Result<Option<BivarPoly>> {
    if f.ring() != Ring::Rationals {
        return Err(Error::RingMismatch {
            left: f.ring().to_string(),
            right: Ring::Rationals.to_string(),
        });
    }
    if df < 1 {
        return Err(Error::ParamOutOfRange {
            name: "df",
            value: df.to_string(),
            reason: "f-degree bound must be at least 1",
        });
    }
    let need = (dx + 1) * (df + 1) + margin;
    if f.order() + 1 < need {
        return Err(Error::InsufficientOrder { need: need - 1, have: f.order() });
    }

    let solve_rows = f.order() + 1 - margin;
    let fpow = powers_of(f, df)?;

    let mut bounds: Vec<(usize, usize)> = Vec::new();
    for dxc in 0..=dx {
        for dfc in 1..=df {
            bounds.push((dxc, dfc));
        }
    }
    bounds.sort_by_key(|&(dxc, dfc)| ((dxc + 1) * (dfc + 1), dfc, dxc));

    for (dxc, dfc) in bounds {
        let mut cols: Vec<(usize, usize)> = (0..=dxc)
            .flat_map(|i| (0..=dfc).map(move |j| (i, j)))
            .collect();
        cols.sort_by_key(|&(i, j)| graded_key(i, j));

        // Row r: coefficient of x^r in sum c_{i,j} x^i f^j.
        let mut rows = Vec::with_capacity(solve_rows);
        for r in 0..solve_rows {
            let mut row = Vec::with_capacity(cols.len());
            for &(i, j) in &cols {
                row.push(if i <= r {
                    fpow[j].coeff(r - i)?.as_rational().expect("rational ring").clone()
                } else {
                    BigRational::zero()
                });
            }
            rows.push(row);
        }

        let kernel = nullspace(rows, cols.len());
        let Some(vec) = kernel.into_iter().min_by_key(|v| {
            v.iter().rposition(|c| !c.is_zero()).expect("kernel vectors are nonzero")
        }) else {
            continue;
        };

        let mut grid = vec![vec![BigRational::zero(); dxc + 1]; dfc + 1];
        for (idx, &(i, j)) in cols.iter().enumerate() {
            grid[j][i] = vec[idx].clone();
        }
        let p = BivarPoly::new(grid)?;
        if verify_equation(&p, f, f.order())? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// True iff sum c_{i,j} x^i f^j vanishes through order `upto`.
pub fn verify_equation(p: &BivarPoly, f: &Series, upto: usize) -> Result<bool> {
    if f.order() < upto {
        return Err(Error::InsufficientOrder { need: upto, have: f.order() });
    }
    let f = f.truncated(upto)?;
    let fpow = powers_of(&f, p.df())?;
    let mut acc = Series::zero(f.ring(), upto);
    for j in 0..=p.df() {
        acc = acc.add(&p.row_series(j, upto).mul(&fpow[j])?)?;
    }
    Ok(acc.is_zero())
}

fn powers_of(f: &Series, df: usize) -> Result<Vec<Series>> {
    let mut fpow = vec![Series::one(f.ring(), f.order())];
    for _ in 0..df {
        fpow.push(fpow.last().expect("nonempty").mul(f)?);
    }
    Ok(fpow)
}

// Kernel basis of the homogeneous system via fraction-free-enough RREF over
// the rationals. Returns one basis vector per free column.
fn nullspace(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pick) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pick);
        let inv = rows[rank][col].recip();
        for c in rows[rank].iter_mut() {
            *c *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let t = &rows[rank][c] * &factor;
                    rows[r][c] -= t;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }

    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for col in 0..ncols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = -rows[r][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves P(x, f) = 0 for a series f with the given leading coefficients,
/// to the requested order.
///
/// P must have f-degree at most 2. Quadratic relations go through the
/// series quadratic formula: the discriminant must have even valuation and
/// a rational square leading coefficient, and `init` picks the branch.
pub fn solve_quadratic(p: &BivarPoly, init: &[BigRational], order: usize) -> Result<Series> {
    if p.df() > 2 {
        return Err(Error::ParamOutOfRange {
            name: "P",
            value: p.to_string(),
            reason: "quadratic solver needs f-degree at most 2",
        });
    }
    if init.is_empty() {
        return Err(Error::ParamOutOfRange {
            name: "init",
            value: "()".into(),
            reason: "at least one leading coefficient is required",
        });
    }
    let mut slack = 0usize;
    loop {
        match solve_attempt(p, init, order, order + slack) {
            Ok(f) => {
                // The root must check out against the full relation; a short
                // internal working order can silently truncate, so retry.
                if f.order() >= order && verify_equation(p, &f.truncated(order)?, order)? {
                    return f.truncated(order);
                }
            }
            Err(Error::InsufficientOrder { .. }) => {}
            Err(e) => return Err(e),
        }
        slack = if slack == 0 { 8 } else { slack * 2 };
        if slack > 4096 {
            return Err(Error::InsufficientOrder { need: order, have: 0 });
        }
    }
}

fn solve_attempt(p: &BivarPoly, init: &[BigRational], order: usize, work: usize) -> Result<Series> {
    let work = work.max(p.dx()) .max(init.len());
    let a = p.row_series(2, work);
    let b = p.row_series(1, work);
    let c = p.row_series(0, work);

    let candidates: Vec<Series> = if a.is_zero() {
        if b.is_zero() {
            return Err(Error::ParamOutOfRange {
                name: "P",
                value: p.to_string(),
                reason: "no f terms to solve for",
            });
        }
        vec![c.neg().div(&b)?]
    } else {
        let disc = b.mul(&b)?.sub(&a.mul(&c)?.scale(&crate::ring::Coeff::from_rational(
            BigRational::from(BigInt::from(4)),
        ))?)?;
        let s = series_sqrt_any(&disc)?;
        let two_a = a.scale(&crate::ring::Coeff::from_rational(BigRational::from(BigInt::from(2))))?;
        let mut roots = Vec::new();
        for sign in [1i64, -1] {
            let num = if sign == 1 { b.neg().add(&s)? } else { b.neg().sub(&s)? };
            if let Ok(f) = num.div(&two_a) {
                roots.push(f);
            }
        }
        if roots.is_empty() {
            return Err(Error::BranchMismatch { index: 0 });
        }
        roots
    };

    let mut best_mismatch = 0usize;
    for f in &candidates {
        if f.order() + 1 < init.len() {
            return Err(Error::InsufficientOrder { need: init.len() - 1, have: f.order() });
        }
        match first_init_mismatch(f, init)? {
            None => {
                if f.order() < order {
                    return Err(Error::InsufficientOrder { need: order, have: f.order() });
                }
                return f.truncated(order);
            }
            Some(i) => best_mismatch = best_mismatch.max(i),
        }
    }
    Err(Error::BranchMismatch { index: best_mismatch })
}

fn first_init_mismatch(f: &Series, init: &[BigRational]) -> Result<Option<usize>> {
    for (i, want) in init.iter().enumerate() {
        if f.coeff(i)?.as_rational() != Some(want) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

// Square root of a series of even valuation whose leading coefficient is a
// rational square; general enough for discriminants, which rarely start at 1.
pub(crate) fn series_sqrt_any(f: &Series) -> Result<Series> {
    if f.is_zero() {
        return Ok(f.clone());
    }
    let val = f.valuation().expect("nonzero");
    if val % 2 != 0 {
        return Err(Error::SqrtConstantTerm {
            found: format!("odd valuation {}", val),
        });
    }
    let hat = f.div_x_pow(val)?;
    let lead = hat.coeff(0)?.clone();
    let lead_q = lead.as_rational().expect("rational ring").clone();
    let Some(root) = rational_sqrt(&lead_q) else {
        return Err(Error::SqrtConstantTerm { found: lead_q.to_string() });
    };
    // Normalize to unit constant term, take the structural sqrt, restore.
    let unit = hat.scale(&lead.inverse()?)?;
    let s = unit.sqrt()?.scale(&crate::ring::Coeff::from_rational(root))?;
    Ok(s.shift_up(val / 2))
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let pn = q.numer().sqrt();
    let pd = q.denom().sqrt();
    if &(&pn * &pn) == q.numer() && &(&pd * &pd) == q.denom() {
        Some(BigRational::new(pn, pd))
    } else {
        None
    }
}
