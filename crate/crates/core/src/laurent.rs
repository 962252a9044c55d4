//! Truncated Laurent series in 1/t: elements of F_∞ = F_q((1/t)) known up to
//! an absolute cutoff exponent.
//!
//! A value is `Σ_{e > cutoff} c_e t^e + O(t^cutoff)`. Coefficients are stored
//! densely from the top exponent downwards; known coefficients below the last
//! stored one are zero. Exact values use the sentinel cutoff [`EXACT`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{split_signed_terms, Field, Fq};
use crate::poly::PolyA;
use crate::ratfunc::RationalFunction;

/// Cutoff of exact values. Anything at or below `EXACT / 2` counts as exact.
pub const EXACT: i64 = i64::MIN / 4;

fn clamp(cutoff: i64) -> i64 {
    if cutoff <= EXACT / 2 {
        EXACT
    } else {
        cutoff
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    field: Field,
    /// Exponent of `coeffs[0]`; equals `cutoff` for a zero series.
    top: i64,
    /// `coeffs[i]` multiplies t^(top − i); first and last entries nonzero.
    coeffs: Vec<Fq>,
    cutoff: i64,
}

impl LaurentSeries {
    /// Builds a normalized series from dense coefficients starting at `top`.
    fn from_dense(field: &Field, top: i64, mut coeffs: Vec<Fq>, cutoff: i64) -> Self {
        let cutoff = clamp(cutoff);
        // drop anything at or below the cutoff
        let keep = (top - cutoff).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => LaurentSeries {
                field: field.clone(),
                top: cutoff,
                coeffs: Vec::new(),
                cutoff,
            },
            Some(k) => {
                coeffs.drain(..k);
                LaurentSeries {
                    field: field.clone(),
                    top: top - k as i64,
                    coeffs,
                    cutoff,
                }
            }
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_dense(field, EXACT, Vec::new(), EXACT)
    }

    /// `O(t^cutoff)`.
    pub fn big_o(field: &Field, cutoff: i64) -> Self {
        Self::from_dense(field, cutoff, Vec::new(), cutoff)
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, c: Fq) -> Self {
        Self::monomial(field, c, 0)
    }

    /// The exact monomial c·t^e.
    pub fn monomial(field: &Field, c: Fq, e: i64) -> Self {
        Self::from_dense(field, e, vec![c], EXACT)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::constant(field, field.from_int(n))
    }

    /// Exact image of a polynomial.
    pub fn from_poly(p: &PolyA) -> Self {
        let top = p.deg();
        let coeffs: Vec<Fq> = p.coeffs().iter().rev().copied().collect();
        Self::from_dense(p.field(), top, coeffs, EXACT)
    }

    /// Expansion of a rational function with `rel` digits of relative precision.
    pub fn from_ratfunc(x: &RationalFunction, rel: i64) -> Result<Self> {
        let den = Self::from_poly(x.den()).recip_to(rel)?;
        Ok(&Self::from_poly(x.num()) * &den)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Cutoff exponent; `EXACT` for exact values.
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff == EXACT
    }

    /// No known nonzero coefficient (an exact zero or a pure `O(t^c)`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading nonzero coefficient (the t-adic degree).
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.top)
    }

    /// Leading coefficient, 0 for zero series.
    pub fn leading(&self) -> Fq {
        self.coeffs.first().copied().unwrap_or(0)
    }

    /// Highest exponent that may carry information: the degree, or the
    /// cutoff for a zero series.
    fn eff_top(&self) -> i64 {
        self.top
    }

    fn lowest_stored(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Number of known digits counted from the leading term.
    pub fn relative_precision(&self) -> Option<i64> {
        (!self.is_exact() && !self.is_zero()).then(|| self.top - self.cutoff)
    }

    /// Coefficient of t^e, `None` when e is at or below the cutoff.
    pub fn coeff(&self, e: i64) -> Option<Fq> {
        if e <= self.cutoff {
            return None;
        }
        if self.is_zero() || e > self.top || e < self.lowest_stored() {
            return Some(0);
        }
        Some(self.coeffs[(self.top - e) as usize])
    }

    /// Known (exponent, coefficient) pairs with nonzero coefficient, descending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.top - i as i64, c))
    }

    /// Forgets everything at or below `cutoff`.
    pub fn truncate(&self, cutoff: i64) -> Self {
        let c = self.cutoff.max(cutoff);
        Self::from_dense(&self.field, self.top, self.coeffs.clone(), c)
    }

    /// Keeps at most `rel` digits below the leading term.
    pub fn with_relative_precision(&self, rel: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.truncate(self.top - rel)
    }

    /// Equality on the common window of known coefficients.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let c = self.cutoff.max(other.cutoff);
        self.truncate(c).coeffs_eq(&other.truncate(c))
    }

    fn coeffs_eq(&self, other: &Self) -> bool {
        (self.is_zero() && other.is_zero())
            || (self.top == other.top && self.coeffs == other.coeffs)
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        if c == 0 {
            return Self::from_dense(f, self.cutoff, vec![], self.cutoff);
        }
        Self::from_dense(
            f,
            self.top,
            self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            self.cutoff,
        )
    }

    /// Multiplication by t^n.
    pub fn shift(&self, n: i64) -> Self {
        let cutoff = if self.is_exact() {
            EXACT
        } else {
            self.cutoff + n
        };
        if self.is_zero() {
            return Self::big_o(&self.field, cutoff);
        }
        Self::from_dense(&self.field, self.top + n, self.coeffs.clone(), cutoff)
    }

    /// Reciprocal with the operand's own relative precision.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InversionOfZero);
        }
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                let inv = self.field.inv(self.coeffs[0]).unwrap();
                return Ok(Self::monomial(&self.field, inv, -self.top));
            }
            return Err(Error::PrecisionExhausted(
                "exact reciprocal needs an explicit precision".into(),
            ));
        }
        self.recip_to(self.top - self.cutoff)
    }

    /// Reciprocal with at most `rel` digits of relative precision.
    pub fn recip_to(&self, rel: i64) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InversionOfZero);
        }
        let f = &self.field;
        let own = if self.is_exact() {
            i64::MAX
        } else {
            self.top - self.cutoff
        };
        let r = own.min(rel);
        if r <= 0 {
            return Err(Error::PrecisionExhausted("no digits requested".into()));
        }
        let n = r as usize;
        let s0_inv = f.inv(self.coeffs[0]).unwrap();
        let neg_inv = f.neg(s0_inv);
        let mut y = vec![0; n];
        y[0] = s0_inv;
        for k in 1..n {
            let mut acc = 0;
            let upto = k.min(self.coeffs.len() - 1);
            for i in 1..=upto {
                let s = self.coeffs[i];
                if s != 0 {
                    acc = f.add(acc, f.mul(s, y[k - i]));
                }
            }
            y[k] = f.mul(neg_inv, acc);
        }
        Ok(Self::from_dense(f, -self.top, y, -self.top - r))
    }

    /// Reciprocal known down to the absolute exponent `cutoff` (or the
    /// operand's own precision, whichever is coarser).
    pub fn recip_abs(&self, cutoff: i64) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InversionOfZero);
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            return self.recip();
        }
        let rel = -self.top - cutoff;
        if rel <= 0 {
            return Ok(Self::big_o(&self.field, cutoff));
        }
        self.recip_to(rel)
    }

    /// The exact value 0 (no error term).
    pub fn is_exact_zero(&self) -> bool {
        self.is_zero() && self.is_exact()
    }

    /// x^(p^k) via the Frobenius: coefficients raised to p^k, exponents scaled.
    pub fn frobenius(&self, k: u32) -> Self {
        let f = &self.field;
        let m = (f.characteristic() as i64).pow(k);
        let cutoff = if self.is_exact() {
            EXACT
        } else {
            self.cutoff.saturating_mul(m)
        };
        if self.is_zero() {
            return Self::big_o(f, cutoff);
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * m as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * m as usize] = f.pow(c, m as u64);
        }
        Self::from_dense(f, self.top * m, coeffs, cutoff)
    }

    /// Integer powers; negative exponents go through `recip`.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut m = n.unsigned_abs();
        let p = self.field.characteristic() as u64;
        let mut k = 0;
        while m > 0 && m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        let mut acc = Self::one(&self.field);
        let mut b = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc * &b;
            }
            m >>= 1;
            if m > 0 {
                b = &b * &b;
            }
        }
        Ok(if k > 0 { acc.frobenius(k) } else { acc })
    }

    /// Degree of `self − 1`, i.e. how far a product factor deviates from 1.
    pub fn deviation_from_one(&self) -> Option<i64> {
        (self - &Self::one(&self.field)).degree()
    }

    /// Parses `1 + t^-1 + t^-3 + O(t^-4)`; coefficients as field elements.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let bad = |t: &str| Error::Parse(format!("bad Laurent term '{t}'"));
        let mut acc = Self::zero(field);
        let mut cutoff = EXACT;
        for (sign, term) in split_signed_terms(s.trim())? {
            if let Some(inner) = term.strip_prefix("O(").and_then(|x| x.strip_suffix(')')) {
                let e = inner
                    .trim()
                    .strip_prefix('t')
                    .ok_or_else(|| bad(term))?
                    .trim();
                cutoff = if e.is_empty() {
                    1
                } else {
                    e.strip_prefix('^')
                        .ok_or_else(|| bad(term))?
                        .trim()
                        .parse()
                        .map_err(|_| bad(term))?
                };
                continue;
            }
            let (coef, e) = match term.rfind('t') {
                None => (field.parse(term)?, 0),
                Some(pos) if !term[pos..].contains(')') => {
                    let head = term[..pos].trim().trim_end_matches('*').trim();
                    let tail = term[pos + 1..].trim();
                    let e: i64 = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| bad(term))?
                            .parse()
                            .map_err(|_| bad(term))?
                    };
                    let c = if head.is_empty() {
                        1
                    } else {
                        field.parse(head)?
                    };
                    (c, e)
                }
                Some(_) => return Err(bad(term)),
            };
            let c = if sign < 0 { field.neg(coef) } else { coef };
            acc = &acc + &Self::monomial(field, c, e);
        }
        Ok(acc.truncate(cutoff))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.field;
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let cs = field.format(c);
            let cs = if field.is_compound(c) {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            parts.push(match (e, c) {
                (0, _) => cs,
                (_, 1) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        if !self.is_exact() {
            parts.push(match self.cutoff {
                0 => "O(1)".into(),
                1 => "O(t)".into(),
                c => format!("O(t^{c})"),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let f = &self.field;
        let cutoff = self.cutoff.max(rhs.cutoff);
        if self.is_zero() {
            return rhs.truncate(cutoff);
        }
        if rhs.is_zero() {
            return self.truncate(cutoff);
        }
        let hi = self.top.max(rhs.top);
        let lo = self
            .lowest_stored()
            .min(rhs.lowest_stored())
            .max(cutoff + 1);
        if lo > hi {
            return LaurentSeries::big_o(f, cutoff);
        }
        let mut out = vec![0; (hi - lo + 1) as usize];
        for src in [self, rhs] {
            for (i, &c) in src.coeffs.iter().enumerate() {
                let e = src.top - i as i64;
                if e < lo {
                    break;
                }
                let slot = &mut out[(hi - e) as usize];
                *slot = f.add(*slot, c);
            }
        }
        LaurentSeries::from_dense(f, hi, out, cutoff)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            top: self.top,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            cutoff: self.cutoff,
        }
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        let f = &self.field;
        // x·y error: X·O(t^cy) + Y·O(t^cx); for a zero factor its top is its cutoff
        let cutoff = clamp(
            (self.eff_top().saturating_add(rhs.cutoff))
                .max(rhs.eff_top().saturating_add(self.cutoff)),
        );
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries::big_o(f, cutoff);
        }
        let top = self.top + rhs.top;
        let lo = (self.lowest_stored() + rhs.lowest_stored()).max(cutoff + 1);
        if lo > top {
            return LaurentSeries::big_o(f, cutoff);
        }
        let len = (top - lo + 1) as usize;
        let mut out = vec![0; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a == 0 {
                continue;
            }
            let jmax = (len - i).min(rhs.coeffs.len());
            for (j, &b) in rhs.coeffs[..jmax].iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        LaurentSeries::from_dense(f, top, out, cutoff)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Product of finitely many factors, truncated at `cutoff`. The result does
/// not depend on the order of the factors.
pub fn laurent_from_product<I>(field: &Field, factors: I, cutoff: i64) -> LaurentSeries
where
    I: IntoIterator<Item = LaurentSeries>,
{
    let mut acc = LaurentSeries::one(field);
    for x in factors {
        acc = (&acc * &x).truncate(cutoff);
    }
    acc.truncate(cutoff)
}

/// Product of a possibly infinite sequence of factors `f_j`, each paired with a
/// certified bound `b_j ≥ deg(f_k − 1)` valid for every k ≥ j. The bounds must
/// be nonincreasing; consumption stops once the remaining factors cannot
/// change the product above `cutoff`.
pub fn certified_product<I>(field: &Field, factors: I, cutoff: i64) -> Result<LaurentSeries>
where
    I: IntoIterator<Item = (LaurentSeries, i64)>,
{
    let mut acc = LaurentSeries::one(field);
    let mut last_bound = i64::MAX;
    for (j, (factor, bound)) in factors.into_iter().enumerate() {
        if bound > last_bound {
            return Err(Error::NonConvergentProduct(format!(
                "tail bound increased at factor {j}: {bound} > {last_bound}"
            )));
        }
        last_bound = bound;
        let top = acc.degree().unwrap_or(0);
        if top.saturating_add(bound) <= cutoff {
            return Ok(acc.truncate(cutoff));
        }
        if let Some(dev) = factor.deviation_from_one() {
            if dev > bound {
                return Err(Error::NonConvergentProduct(format!(
                    "factor {j} deviates at degree {dev} beyond its bound {bound}"
                )));
            }
        }
        acc = (&acc * &factor).truncate(cutoff);
    }
    Ok(acc.truncate(cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    fn l(f: &Field, s: &str) -> LaurentSeries {
        LaurentSeries::parse(f, s).unwrap()
    }

    #[test]
    fn geometric_series_inverse() {
        let f = FqContext::prime(3).unwrap();
        let x = l(&f, "1 - t^-1").recip_to(6).unwrap();
        assert_eq!(x, l(&f, "1 + t^-1 + t^-2 + t^-3 + t^-4 + t^-5 + O(t^-6)"));
        assert_eq!(
            x.to_string(),
            "1 + t^-1 + t^-2 + t^-3 + t^-4 + t^-5 + O(t^-6)"
        );
    }

    #[test]
    fn frobenius_square_in_char_two() {
        let f = FqContext::prime(2).unwrap();
        let x = l(&f, "1 + t^-1");
        assert_eq!(&x * &x, l(&f, "1 + t^-2"));
        assert_eq!(x.pow(2).unwrap(), l(&f, "1 + t^-2"));
    }

    #[test]
    fn negative_power_example() {
        let f = FqContext::prime(2).unwrap();
        let lam = l(&f, "1 + t^-1 + O(t^-2)");
        assert_eq!(lam.pow(1 - 2).unwrap(), l(&f, "1 + t^-1 + O(t^-2)"));
    }

    #[test]
    fn precision_propagates_through_products() {
        let f = FqContext::prime(3).unwrap();
        let x = l(&f, "t^2 + 1 + O(t^-3)");
        let y = l(&f, "t^-1 + O(t^-4)");
        let z = &x * &y;
        // errors t^2·O(t^-4) and t^-1·O(t^-3)
        assert_eq!(z.cutoff(), -2);
        assert_eq!(z, l(&f, "t + t^-1 + O(t^-2)"));
        assert!(LaurentSeries::big_o(&f, -3).recip().is_err());
        assert_eq!(LaurentSeries::zero(&f).recip(), Err(Error::InversionOfZero));
    }

    #[test]
    fn products_and_certificates() {
        let f = FqContext::prime(2).unwrap();
        assert!(laurent_from_product(&f, Vec::new(), -10).agrees_with(&LaurentSeries::one(&f)));
        let a = l(&f, "1 - t^-1");
        let b = a.recip_to(20).unwrap();
        let p = laurent_from_product(&f, vec![a.clone(), b.clone()], -10);
        assert!(p.agrees_with(&LaurentSeries::one(&f)));
        // increasing bounds are rejected
        let bad = certified_product(&f, vec![(a.clone(), -5), (a.clone(), -1)], -10);
        assert!(matches!(bad, Err(Error::NonConvergentProduct(_))));
        // a factor exceeding its own bound is rejected
        let bad = certified_product(&f, vec![(a, -3)], -10);
        assert!(matches!(bad, Err(Error::NonConvergentProduct(_))));
    }

    #[test]
    fn parse_round_trip() {
        let f = FqContext::of_order(4).unwrap();
        let x = l(&f, "(g+1)*t^3 + g*t^-2 + O(t^-7)");
        assert_eq!(l(&f, &x.to_string()), x);
    }
}
