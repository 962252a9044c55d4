//! The rational function field F = F_q(t).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::poly::PolyA;

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: PolyA,
    den: PolyA,
}

impl RationalFunction {
    pub fn new(num: PolyA, den: PolyA) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() || g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        if num.is_zero() {
            den = PolyA::one(den.field());
        }
        let lc = den.leading();
        if lc != 1 {
            let inv = den.field().inv(lc).unwrap();
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: PolyA) -> Self {
        let den = PolyA::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(PolyA::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(PolyA::one(field))
    }

    pub fn constant(field: &Field, c: Fq) -> Self {
        Self::from_poly(PolyA::constant(field, c))
    }

    pub fn num(&self) -> &PolyA {
        &self.num
    }
    pub fn den(&self) -> &PolyA {
        &self.den
    }
    pub fn field(&self) -> &Field {
        self.num.field()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// deg num − deg den; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.deg() - self.den.deg())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InversionOfZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let m = n.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(m),
            den: base.den.pow(m),
        })
    }

    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        match top_level_slash(s) {
            None => Ok(Self::from_poly(PolyA::parse(field, strip_parens(s))?)),
            Some(pos) => Self::new(
                PolyA::parse(field, strip_parens(&s[..pos]))?,
                PolyA::parse(field, strip_parens(&s[pos + 1..]))?,
            ),
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        // only strip when the outer pair encloses everything
        let mut depth = 0;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        return &s[1..s.len() - 1];
    }
    s
}

fn top_level_slash(s: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &PolyA| {
            let s = p.to_string();
            if s.contains('+') || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let div = |a: &PolyA, g: &PolyA| {
            if g.is_zero() || g.is_one() {
                a.clone()
            } else {
                a.exact_div(g).unwrap()
            }
        };
        let num = &div(&self.num, &g1) * &div(&rhs.num, &g2);
        let den = &div(&self.den, &g2) * &div(&rhs.den, &g1);
        RationalFunction::new(num, den).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rf(f: &Field, rng: &mut ChaCha8Rng) -> RationalFunction {
        let q = f.order() as u64;
        let num = PolyA::from_index(f, rng.gen_range(0..q.pow(3)));
        let den = PolyA::from_index(f, rng.gen_range(1..q.pow(3)));
        RationalFunction::new(num, den).unwrap()
    }

    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 5] {
            let f = FqContext::of_order(q).unwrap();
            let p = f.characteristic() as i64;
            for _ in 0..200 {
                let (a, b, c) = (
                    random_rf(&f, &mut rng),
                    random_rf(&f, &mut rng),
                    random_rf(&f, &mut rng),
                );
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                if !a.is_zero() {
                    assert_eq!(&a * &a.inv().unwrap(), RationalFunction::one(&f));
                }
                let lhs = (&a + &b).pow(p).unwrap();
                assert_eq!(lhs, &a.pow(p).unwrap() + &b.pow(p).unwrap());
            }
        }
    }

    #[test]
    fn parse_display() {
        let f = FqContext::prime(2).unwrap();
        let x = RationalFunction::parse(&f, "(t^2+t+1)/(t^2+t)").unwrap();
        assert_eq!(x.to_string(), "(t^2+t+1)/(t^2+t)");
        assert_eq!(
            RationalFunction::parse(&f, "t/t").unwrap(),
            RationalFunction::one(&f)
        );
        assert!(RationalFunction::parse(&f, "1/0").is_err());
    }
}
