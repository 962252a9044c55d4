use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{split_signed_terms, Field};
use crate::lattice::IndexType;

/// A finite Z-linear combination of double cosets T(a_1, …, a_r).
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    r: usize,
    terms: BTreeMap<IndexType, BigInt>,
}

impl HeckeElement {
    pub fn zero(r: usize) -> Self {
        HeckeElement {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_type(t: IndexType) -> Self {
        Self::from_term(t, BigInt::one())
    }

    pub fn from_term(t: IndexType, c: BigInt) -> Self {
        let mut x = Self::zero(t.rank());
        x.add_term(t, c);
        x
    }

    /// The identity T(1, …, 1).
    pub fn one(field: &Field, r: usize) -> Self {
        Self::from_type(IndexType::unit(field, r))
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &IndexType) -> BigInt {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    /// Terms in descending order of index type.
    pub fn terms(&self) -> impl Iterator<Item = (&IndexType, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, t: IndexType, c: BigInt) {
        assert_eq!(t.rank(), self.r, "rank mismatch");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(t.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut x = self.clone();
        for (t, c) in &o.terms {
            x.add_term(t.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut x = Self::zero(self.r);
        for (t, d) in &self.terms {
            x.add_term(t.clone(), d * c);
        }
        x
    }

    /// Coefficients reduced into 0..m, zero terms dropped.
    pub fn reduce_mod(&self, m: u32) -> Self {
        let m = BigInt::from(m);
        let mut x = Self::zero(self.r);
        for (t, c) in &self.terms {
            let mut v = c % &m;
            if v.is_negative() {
                v += &m;
            }
            x.add_term(t.clone(), v);
        }
        x
    }

    /// Parses sums such as "T(t^2,1) + 3*T(t,t) - T(1,1)".
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let mut x: Option<Self> = None;
        for (sign, term) in split_signed_terms(s.trim())? {
            let (coeff, body) = match term.find('*') {
                Some(pos) if !term[..pos].contains('(') => {
                    let c: BigInt = term[..pos]
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient in '{term}'")))?;
                    (c, term[pos + 1..].trim())
                }
                _ => (BigInt::one(), term),
            };
            if !body.starts_with('T') {
                return Err(Error::Parse(format!("expected T(...) in '{term}'")));
            }
            let t = IndexType::parse(field, body)?;
            let acc = x.get_or_insert_with(|| Self::zero(t.rank()));
            if acc.r != t.rank() {
                return Err(Error::RankMismatch(acc.r, t.rank()));
            }
            acc.add_term(t, coeff * sign);
        }
        x.ok_or_else(|| Error::Parse("empty Hecke element".into()))
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms().enumerate() {
            let mag = c.abs();
            let body = if mag.is_one() {
                format!("T{t}")
            } else {
                format!("{mag}*T{t}")
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    #[test]
    fn parse_display_round_trip() {
        let f = FqContext::prime(2).unwrap();
        let x = HeckeElement::parse(&f, "3*T(t,t) + T(t^2,1)").unwrap();
        assert_eq!(x.to_string(), "T(t^2,1) + 3*T(t,t)");
        assert_eq!(HeckeElement::parse(&f, &x.to_string()).unwrap(), x);
        let y = HeckeElement::parse(&f, "T(t,1) - T(t,1)").unwrap();
        assert!(y.is_zero());
        assert_eq!(x.reduce_mod(2).to_string(), "T(t^2,1) + T(t,t)");
    }
}
