//! Dense polynomials over F_q: the ring A = F_q[t].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{split_signed_terms, Field, Fq};

/// An element of F_q[t], coefficients low-to-high with no trailing zeros.
#[derive(Clone)]
pub struct PolyA {
    field: Field,
    coeffs: Vec<Fq>,
}

/// Outcome of an irreducibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// Nonzero constants: neither irreducible nor reducible.
    Unit,
}

impl PolyA {
    pub fn new(field: &Field, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyA {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        PolyA {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, c: Fq) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial c * t^n.
    pub fn monomial(field: &Field, c: Fq, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Self::new(field, coeffs)
    }

    /// The variable t.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field, 1, 1)
    }

    /// The polynomial whose coefficient vector is the base-q expansion of `index`.
    pub fn from_index(field: &Field, mut index: u64) -> Self {
        let q = field.order() as u64;
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push((index % q) as Fq);
            index /= q;
        }
        Self::new(field, coeffs)
    }

    /// All polynomials of degree < n (q^n of them), in index order.
    pub fn all_below_degree(field: &Field, n: usize) -> impl Iterator<Item = PolyA> + '_ {
        let count = (field.order() as u64).pow(n as u32);
        (0..count).map(move |i| Self::from_index(field, i))
    }

    /// All monic polynomials of exact degree n.
    pub fn monic_of_degree(field: &Field, n: usize) -> impl Iterator<Item = PolyA> + '_ {
        Self::all_below_degree(field, n).map(move |low| &low + &Self::monomial(field, 1, n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with −1 standing in for −∞.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; n];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(&self.field, coeffs)
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder; the remainder has degree < deg b.
    pub fn divmod(&self, b: &PolyA) -> Result<(PolyA, PolyA)> {
        let f = &self.field;
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(b.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[k - db] = factor;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                let idx = k - db + i;
                rem[idx] = f.sub(rem[idx], f.mul(factor, bc));
            }
        }
        rem.truncate(db);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, b: &PolyA) -> Result<PolyA> {
        Ok(self.divmod(b)?.1)
    }

    /// Exact quotient, `None` when b does not divide self.
    pub fn exact_div(&self, b: &PolyA) -> Option<PolyA> {
        let (q, r) = self.divmod(b).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &PolyA) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &PolyA) -> PolyA {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: (g, s, u) with s*self + u*other = g, g monic.
    pub fn xgcd(&self, other: &PolyA) -> (PolyA, PolyA, PolyA) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.leading()) {
            Some(inv) => (r0.scale(inv), s0.scale(inv), t0.scale(inv)),
            None => (r0, s0, t0),
        }
    }

    /// `base^n mod m`.
    pub fn pow_mod(&self, mut n: u128, m: &PolyA) -> Result<PolyA> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(&self.field).rem(m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            n >>= 1;
            if n > 0 {
                base = (&base * &base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Irreducibility over F_q via gcds with iterated q-power Frobenius of t:
    /// f of degree n is irreducible iff t^(q^n) = t mod f and
    /// gcd(t^(q^(n/l)) - t, f) = 1 for every prime l | n.
    pub fn irreducibility(&self) -> Result<Irreducibility> {
        let n = self.degree().ok_or(Error::DivisionByZero)?;
        if n == 0 {
            return Ok(Irreducibility::Unit);
        }
        if n == 1 {
            return Ok(Irreducibility::Irreducible);
        }
        let f = self.monic();
        let q = self.field.order() as u128;
        let t = Self::t(&self.field);
        // frob[i] = t^(q^i) mod f
        let mut frob = vec![t.rem(&f)?];
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, &f)?;
            frob.push(next);
        }
        if frob[n] != t.rem(&f)? {
            return Ok(Irreducibility::Reducible);
        }
        for l in prime_divisors(n) {
            let g = (&frob[n / l] - &t).gcd(&f);
            if !g.is_one() {
                return Ok(Irreducibility::Reducible);
            }
        }
        Ok(Irreducibility::Irreducible)
    }

    /// True iff irreducible; false for zero and units.
    pub fn is_irreducible(&self) -> bool {
        matches!(self.irreducibility(), Ok(Irreducibility::Irreducible))
    }

    /// Factorization into monic irreducibles with multiplicity, plus the unit
    /// leading coefficient. Trial division; intended for small degrees.
    pub fn factor(&self) -> Result<(Fq, Vec<(PolyA, u32)>)> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let unit = self.leading();
        let mut rest = self.monic();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.deg() >= 2 * d as i64 {
            for cand in Self::monic_of_degree(&self.field, d) {
                if !cand.is_irreducible() {
                    continue;
                }
                let mut e = 0;
                while let Some(q) = rest.exact_div(&cand) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((cand, e));
                }
            }
            d += 1;
        }
        if rest.deg() >= 1 {
            match out.iter_mut().find(|(p, _)| *p == rest) {
                Some(entry) => entry.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        Ok((unit, out))
    }

    /// Parses `t^2+t+1`, `2*t+1`, `(g+1)*t^2+g`.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = Self::zero(field);
        for (sign, term) in split_signed_terms(s)? {
            let (coef_str, power) = split_t_term(term)?;
            let coef = match coef_str {
                None => 1,
                Some(c) => field.parse(c)?,
            };
            let coef = if sign < 0 { field.neg(coef) } else { coef };
            acc = &acc + &Self::monomial(field, coef, power);
        }
        Ok(acc)
    }
}

/// Splits a term into (coefficient text, power of t).
fn split_t_term(term: &str) -> Result<(Option<&str>, usize)> {
    let bad = || Error::Parse(format!("bad polynomial term '{term}'"));
    // find a 't' outside parentheses
    let mut depth = 0;
    let mut tpos = None;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            't' if depth == 0 => tpos = Some(i),
            _ => {}
        }
    }
    match tpos {
        None => Ok((Some(term), 0)),
        Some(pos) => {
            let head = term[..pos].trim();
            let head = head.strip_suffix('*').map(str::trim).unwrap_or(head);
            let tail = term[pos + 1..].trim();
            let power = if tail.is_empty() {
                1
            } else {
                tail.strip_prefix('^')
                    .ok_or_else(bad)?
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad())?
            };
            Ok(((!head.is_empty()).then_some(head), power))
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PartialEq for PolyA {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl Eq for PolyA {}

impl Hash for PolyA {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Ord for PolyA {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}
impl PartialOrd for PolyA {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = field.format(c);
            let cs = if field.is_compound(c) {
                format!("({cs})")
            } else {
                cs
            };
            match (i, c) {
                (0, _) => write!(f, "{cs}")?,
                (_, 1) => {}
                _ => write!(f, "{cs}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &PolyA {
    type Output = PolyA;
    fn add(self, rhs: &PolyA) -> PolyA {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyA::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Sub for &PolyA {
    type Output = PolyA;
    fn sub(self, rhs: &PolyA) -> PolyA {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyA::new(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }
}

impl Neg for &PolyA {
    type Output = PolyA;
    fn neg(self) -> PolyA {
        let f = &self.field;
        PolyA::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &PolyA {
    type Output = PolyA;
    fn mul(self, rhs: &PolyA) -> PolyA {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return PolyA::zero(f);
        }
        let mut out = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        PolyA::new(f, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyA {
            type Output = PolyA;
            fn $m(self, rhs: PolyA) -> PolyA {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    fn p(f: &Field, s: &str) -> PolyA {
        PolyA::parse(f, s).unwrap()
    }

    #[test]
    fn gcd_and_division_examples() {
        let f2 = FqContext::prime(2).unwrap();
        assert_eq!(p(&f2, "t^2+t").gcd(&p(&f2, "t")), p(&f2, "t"));
        let (q, r) = p(&f2, "t^2+1").divmod(&p(&f2, "t+1")).unwrap();
        assert_eq!(q, p(&f2, "t+1"));
        assert!(r.is_zero());
        assert_eq!(p(&f2, "t^3").rem(&p(&f2, "t^2+t+1")).unwrap(), p(&f2, "1"));
        assert_eq!(
            p(&f2, "t").divmod(&PolyA::zero(&f2)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = FqContext::prime(2).unwrap();
        assert!(p(&f2, "t").is_irreducible());
        assert!(p(&f2, "t^2+t+1").is_irreducible());
        assert!(!p(&f2, "t^2+1").is_irreducible());
        assert_eq!(p(&f2, "1").irreducibility(), Ok(Irreducibility::Unit));
        assert!(PolyA::zero(&f2).irreducibility().is_err());
    }

    /// Counting monic irreducibles of degree n against the necklace formula.
    #[test]
    fn irreducible_counts_match_necklace_formula() {
        for (q, n, expected) in [(2, 4, 3), (2, 5, 6), (3, 3, 8), (4, 2, 6), (3, 4, 18)] {
            let f = FqContext::of_order(q).unwrap();
            let count = PolyA::monic_of_degree(&f, n)
                .filter(|x| x.is_irreducible())
                .count();
            assert_eq!(count, expected, "q={q} n={n}");
        }
    }

    #[test]
    fn factor_and_parse_round_trip() {
        let f3 = FqContext::prime(3).unwrap();
        let x = p(&f3, "2*t^4+t^3+t+2");
        let (unit, fac) = x.factor().unwrap();
        let mut prod = PolyA::constant(&f3, unit);
        for (q, e) in &fac {
            assert!(q.is_irreducible());
            prod = &prod * &q.pow(*e as u64);
        }
        assert_eq!(prod, x);
        assert_eq!(p(&f3, &x.to_string()), x);
        let f4 = FqContext::of_order(4).unwrap();
        let y = p(&f4, "(g+1)*t^2+g");
        assert_eq!(y.to_string(), "(g+1)*t^2+g");
        assert_eq!(p(&f3, "t^2-1"), p(&f3, "t^2+2"));
    }

    #[test]
    fn xgcd_bezout() {
        let f3 = FqContext::prime(3).unwrap();
        let a = p(&f3, "t^3+2*t+1");
        let b = p(&f3, "t^2+1");
        let (g, s, u) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&u * &b), g);
        assert_eq!(g, a.gcd(&b));
    }
}
