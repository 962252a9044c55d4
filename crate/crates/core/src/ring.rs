//! Coefficient rings for polynomials in X, and a generic polynomial type.
//!
//! Values of rings such as F_q(t) or F_q((1/t)) carry their field handle, so
//! constants are produced from an existing value (`zero_like`, `one_like`).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;
use crate::ratfunc::RationalFunction;

pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    /// Image of a field element of F_q.
    fn scalar_like(&self, c: Fq) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn characteristic(&self) -> u32;

    fn pow_u(&self, mut n: u64) -> Self {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.times(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.times(&b);
            }
        }
        acc
    }

    /// Whether the value should be wrapped in parentheses inside a product.
    fn needs_parens(&self) -> bool {
        let s = self.to_string();
        s.contains('+') || s.contains(" - ") || s.contains('/')
    }
}

pub trait FieldLike: Ring {
    fn try_inv(&self) -> Result<Self>;
}

impl Ring for PolyA {
    fn scalar_like(&self, c: Fq) -> Self {
        PolyA::constant(self.field(), c)
    }
    fn zero_like(&self) -> Self {
        PolyA::zero(self.field())
    }
    fn one_like(&self) -> Self {
        PolyA::one(self.field())
    }
    fn from_int_like(&self, n: i64) -> Self {
        PolyA::constant(self.field(), self.field().from_int(n))
    }
    fn is_zero(&self) -> bool {
        PolyA::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn characteristic(&self) -> u32 {
        self.field().characteristic()
    }
    fn pow_u(&self, n: u64) -> Self {
        self.pow(n)
    }
}

impl Ring for RationalFunction {
    fn scalar_like(&self, c: Fq) -> Self {
        RationalFunction::constant(self.field(), c)
    }
    fn zero_like(&self) -> Self {
        RationalFunction::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RationalFunction::one(self.field())
    }
    fn from_int_like(&self, n: i64) -> Self {
        RationalFunction::constant(self.field(), self.field().from_int(n))
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn characteristic(&self) -> u32 {
        self.field().characteristic()
    }
    fn pow_u(&self, n: u64) -> Self {
        self.pow(n as i64).expect("nonnegative power")
    }
}

impl FieldLike for RationalFunction {
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
}

impl Ring for LaurentSeries {
    fn scalar_like(&self, c: Fq) -> Self {
        LaurentSeries::constant(self.field(), c)
    }
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.field())
    }
    fn one_like(&self) -> Self {
        LaurentSeries::one(self.field())
    }
    fn from_int_like(&self, n: i64) -> Self {
        LaurentSeries::from_int(self.field(), n)
    }
    fn is_zero(&self) -> bool {
        LaurentSeries::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn characteristic(&self) -> u32 {
        self.field().characteristic()
    }
    fn pow_u(&self, n: u64) -> Self {
        self.pow(n as i64).expect("nonnegative power")
    }
}

impl FieldLike for LaurentSeries {
    fn try_inv(&self) -> Result<Self> {
        self.recip()
    }
}

/// Polynomials over F_p in the formal symbols α_1, α_2, … .
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymPoly {
    p: u32,
    /// exponent vector (index i ↦ power of α_{i+1}, no trailing zeros) ↦ coefficient
    terms: BTreeMap<Vec<u32>, u32>,
}

impl SymPoly {
    pub fn constant(p: u32, c: i64) -> Self {
        let c = c.rem_euclid(p as i64) as u32;
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Vec::new(), c);
        }
        SymPoly { p, terms }
    }

    /// The symbol α_i (i ≥ 1).
    pub fn alpha(p: u32, i: usize) -> Self {
        assert!(i >= 1);
        let mut e = vec![0; i];
        e[i - 1] = 1;
        SymPoly {
            p,
            terms: BTreeMap::from([(e, 1)]),
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.terms
    }

    fn combine(&self, o: &Self, sign: u32) -> Self {
        let mut terms = self.terms.clone();
        for (e, &c) in &o.terms {
            let add = if sign == 1 { c } else { (self.p - c) % self.p };
            let slot = terms.entry(e.clone()).or_insert(0);
            *slot = (*slot + add) % self.p;
            if *slot == 0 {
                terms.remove(e);
            }
        }
        SymPoly { p: self.p, terms }
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("a{}", i + 1)
                    } else {
                        format!("a{}^{k}", i + 1)
                    }
                })
                .collect();
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono.join("*"),
                _ => format!("{c}*{}", mono.join("*")),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ring for SymPoly {
    fn scalar_like(&self, c: Fq) -> Self {
        SymPoly::constant(self.p, c as i64)
    }
    fn zero_like(&self) -> Self {
        SymPoly::constant(self.p, 0)
    }
    fn one_like(&self) -> Self {
        SymPoly::constant(self.p, 1)
    }
    fn from_int_like(&self, n: i64) -> Self {
        SymPoly::constant(self.p, n)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.combine(o, 1)
    }
    fn minus(&self, o: &Self) -> Self {
        self.combine(o, 0)
    }
    fn negate(&self) -> Self {
        self.zero_like().minus(self)
    }
    fn times(&self, o: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &o.terms {
                let n = ea.len().max(eb.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                let slot = terms.entry(e).or_insert(0);
                *slot = ((*slot as u64 + ca as u64 * cb as u64) % self.p as u64) as u32;
            }
        }
        terms.retain(|_, c| *c != 0);
        SymPoly { p: self.p, terms }
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn needs_parens(&self) -> bool {
        self.terms.len() > 1
    }
}

/// Polynomial in X with coefficients in `C`, dense low-to-high.
#[derive(Clone, PartialEq)]
pub struct XPoly<C: Ring> {
    zero: C,
    coeffs: Vec<C>,
}

impl<C: Ring> XPoly<C> {
    pub fn new(zero: &C, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        XPoly {
            zero: zero.zero_like(),
            coeffs,
        }
    }

    pub fn zero(zero: &C) -> Self {
        Self::new(zero, Vec::new())
    }

    /// c·X^n
    pub fn monomial(c: C, n: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero.clone(); n];
        coeffs.push(c);
        Self::new(&zero, coeffs)
    }

    pub fn x(one: &C) -> Self {
        Self::monomial(one.one_like(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of X^n (zero beyond the degree).
    pub fn coeff(&self, n: usize) -> C {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == c.one_like())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect();
        Self::new(&self.zero, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect();
        Self::new(&self.zero, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::new(&self.zero, out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(&self.zero, self.coeffs.iter().map(|x| x.times(c)).collect())
    }

    /// Multiplication by X^n.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.zero.clone(); n];
        c.extend(self.coeffs.iter().cloned());
        Self::new(&self.zero, c)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let one = Self::monomial(self.zero.one_like(), 0);
        let mut acc = one;
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x.times(&x.from_int_like(i as i64)))
            .collect();
        Self::new(&self.zero, c)
    }

    /// Applies `f` to every coefficient.
    pub fn map<D: Ring>(&self, zero: &D, f: impl Fn(&C) -> D) -> XPoly<D> {
        XPoly::new(zero, self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }
}

impl<C: Ring> fmt::Display for XPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{i}"),
            };
            let is_one = *c == c.one_like();
            let cs = if c.needs_parens() {
                format!("({c})")
            } else {
                c.to_string()
            };
            parts.push(match (i, is_one) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Ring> fmt::Debug for XPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Inverse that reports zero operands as `InversionOfZero`.
pub fn inverse<C: FieldLike>(x: &C) -> Result<C> {
    if x.is_zero() {
        return Err(Error::InversionOfZero);
    }
    x.try_inv()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_arithmetic_mod_p() {
        let a1 = SymPoly::alpha(3, 1);
        let two = SymPoly::constant(3, 2);
        let x = a1.times(&two).plus(&a1);
        assert!(x.is_zero());
        let sq = a1.plus(&two).pow_u(3);
        // Frobenius in characteristic 3
        assert_eq!(sq, a1.pow_u(3).plus(&SymPoly::constant(3, 8)));
        assert_eq!(a1.times(&SymPoly::alpha(3, 2)).to_string(), "a1*a2");
    }

    #[test]
    fn xpoly_derivative_and_eval() {
        let one = SymPoly::constant(2, 1);
        let x = XPoly::x(&one);
        let p = x.pow(3).add(&x.scale(&SymPoly::alpha(2, 1)));
        assert_eq!(p.to_string(), "X^3 + a1*X");
        assert_eq!(p.derivative().to_string(), "X^2 + a1");
        assert_eq!(p.eval(&one), one.plus(&SymPoly::alpha(2, 1)));
    }
}
