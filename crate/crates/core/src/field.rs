//! Finite fields F_q, q = p^e, with table-driven arithmetic.
//!
//! An element is a `u32` in `0..q`. For e > 1 the base-p digits of that
//! integer are the coefficients of the element as a polynomial in the
//! generator `g` (lowest digit = constant term), reduced modulo the chosen
//! monic irreducible modulus.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::PolyA;

/// Largest field size supported by the dense tables.
pub const MAX_Q: u32 = 1024;

/// Shared handle to a finite field.
pub type Field = Arc<FqContext>;

/// An element of F_q encoded as its index.
pub type Fq = u32;

pub struct FqContext {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over F_p, low-to-high, length e + 1. `[0, 1]` when e = 1.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)?;
        if self.e > 1 {
            write!(f, " (modulus {:?})", self.modulus)?;
        }
        Ok(())
    }
}

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FqContext {}

impl std::hash::Hash for FqContext {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.e.hash(state);
        self.modulus.hash(state);
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Default moduli (Conway polynomials) for the small extension fields.
fn default_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    match (p, e) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (3, 2) => Some(vec![2, 2, 1]),
        (5, 2) => Some(vec![2, 4, 1]),
        (7, 2) => Some(vec![3, 6, 1]),
        _ => None,
    }
}

impl FqContext {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1, None)
    }

    /// F_q for q = p^e; `modulus` (monic, low-to-high over F_p) defaults to a
    /// built-in table entry or the lexicographically first irreducible.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{e} exceeds {MAX_Q}")))?;
        if e == 1 {
            return Ok(Arc::new(Self::build(p, 1, q, vec![0, 1])));
        }
        let prime = Self::prime(p)?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || *m.last().unwrap() != 1 || m.iter().any(|&c| c >= p)
                {
                    return Err(Error::InvalidField(format!(
                        "modulus must be monic of degree {e} over F_{p}"
                    )));
                }
                if !PolyA::new(&prime, m.clone()).is_irreducible() {
                    return Err(Error::InvalidField("modulus is not irreducible".into()));
                }
                m
            }
            None => match default_modulus(p, e) {
                Some(m) => m,
                None => first_irreducible(&prime, e as usize),
            },
        };
        Ok(Arc::new(Self::build(p, e, q, modulus)))
    }

    /// F_q by size, using the default modulus when q is not prime.
    pub fn of_order(q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::InvalidField(format!("q = {q}")));
        }
        let mut p = 2;
        while !q.is_multiple_of(p) {
            p += 1;
        }
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Self::new(p, e, None)
    }

    fn build(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let qs = q as usize;
        let digits = |mut x: u32| {
            let mut d = vec![0u32; e as usize];
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let undigits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u16;
                // schoolbook product then reduction modulo the monic modulus
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (e as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(e as usize) {
                            let idx = k - e as usize + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                        prod[k] = 0;
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..e as usize]) as u16;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as u16;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                }
            }
        }
        FqContext {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.e
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add[(a * self.q + b) as usize] as Fq
    }
    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.mul[(a * self.q + b) as usize] as Fq
    }
    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize] as Fq
    }
    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        (a != 0).then(|| self.inv[a as usize] as Fq)
    }

    pub fn pow(&self, a: Fq, mut n: u64) -> Fq {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as Fq
    }

    /// Absolute Frobenius x -> x^p.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as u64)
    }

    /// The nonzero elements.
    pub fn units(&self) -> impl Iterator<Item = Fq> {
        1..self.q
    }

    /// Text form: integers for the prime field, polynomials in `g` otherwise.
    pub fn format(&self, a: Fq) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        let mut x = a;
        let mut terms = Vec::new();
        for i in 0..self.e {
            let c = x % self.p;
            x /= self.p;
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if terms.is_empty() {
            return "0".into();
        }
        terms.reverse();
        terms.join("+")
    }

    /// Whether `format` output needs parentheses when used as a coefficient.
    pub fn is_compound(&self, a: Fq) -> bool {
        self.format(a).contains('+')
    }

    /// Parses an element: an integer, or a polynomial in `g` with integer
    /// coefficients (`g^2+2*g+1`, `(g+1)`).
    pub fn parse(&self, s: &str) -> Result<Fq> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(s);
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut acc: Fq = 0;
        for (sign, term) in split_signed_terms(s)? {
            let (coef, power) = match term.find('g') {
                None => (parse_int(term)?, 0u32),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() { 1 } else { parse_int(head)? };
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| Error::Parse(format!("bad field term '{term}'")))?
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?
                    };
                    (coef, power)
                }
            };
            if power > 0 && self.e == 1 {
                return Err(Error::Parse(format!(
                    "generator g used in prime field F_{}",
                    self.p
                )));
            }
            // g is encoded as the integer p (digit 1 at position 1)
            let g_pow = if power == 0 {
                1
            } else {
                self.pow(self.p, power as u64)
            };
            let term_val = self.mul(self.from_int(coef * sign), g_pow);
            acc = self.add(acc, term_val);
        }
        Ok(acc)
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// Splits `a+b-c` into signed terms, respecting parentheses.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(i64, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = 1i64;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                // a sign directly after '^' belongs to the exponent
                if i > 0 && bytes[i - 1] == b'^' {
                    continue;
                }
                let term = s[start..i].trim();
                if !term.is_empty() {
                    out.push((sign, term));
                } else if i != 0 && !out.is_empty() {
                    return Err(Error::Parse(format!("empty term in '{s}'")));
                }
                sign = if b == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
    }
    let term = s[start..].trim();
    if term.is_empty() {
        return Err(Error::Parse(format!("trailing operator in '{s}'")));
    }
    out.push((sign, term));
    Ok(out)
}

fn first_irreducible(prime: &Field, e: usize) -> Vec<u32> {
    let p = prime.order();
    let count = (p as u64).pow(e as u32);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(e + 1);
        let mut x = idx;
        for _ in 0..e {
            coeffs.push((x % p as u64) as u32);
            x /= p as u64;
        }
        coeffs.push(1);
        if PolyA::new(prime, coeffs.clone()).is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                // Frobenius is additive
                assert_eq!(
                    f.frobenius(f.add(a, b)),
                    f.add(f.frobenius(a), f.frobenius(b))
                );
                for c in (0..q).step_by(3) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            check_axioms(&FqContext::of_order(q).unwrap());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FqContext::of_order(6).is_err());
        assert!(FqContext::prime(4).is_err());
        // g^2 + 1 = (g+1)^2 over F_2
        assert!(FqContext::new(2, 2, Some(vec![1, 0, 1])).is_err());
    }

    #[test]
    fn parse_and_format_extension_elements() {
        let f = FqContext::of_order(9).unwrap();
        for a in 0..9 {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        let f4 = FqContext::of_order(4).unwrap();
        let g = f4.parse("g").unwrap();
        // g^2 = g + 1 for the modulus g^2+g+1
        assert_eq!(f4.mul(g, g), f4.parse("g+1").unwrap());
        assert_eq!(f4.order(), 4);
        assert!(f4.parse("(g+1)").is_ok());
    }
}
