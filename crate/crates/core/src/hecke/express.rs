use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::algebra::{psi_map, HeckeAlgebra};
use super::element::HeckeElement;
use crate::error::{Error, Result};
use crate::field::split_signed_terms;
use crate::lattice::IndexType;
use crate::poly::PolyA;

/// An integer polynomial in formal variables T1, …, Tr.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenPoly {
    r: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl GenPoly {
    pub fn zero(r: usize) -> Self {
        GenPoly {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (exponent vector, coefficient) in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        assert_eq!(e.len(), self.r);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// The same polynomial viewed in r variables (r ≥ current rank).
    fn widen(&self, r: usize) -> Self {
        let mut out = GenPoly::zero(r);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.resize(r, 0);
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn parse(r: usize, s: &str) -> Result<Self> {
        let mut out = GenPoly::zero(r);
        if s.trim() == "0" {
            return Ok(out);
        }
        for (sign, term) in split_signed_terms(s.trim())? {
            let mut c = BigInt::from(sign);
            let mut e = vec![0u32; r];
            for factor in term.split('*').map(str::trim) {
                if let Some(v) = factor.strip_prefix('T') {
                    let (i, k) = match v.split_once('^') {
                        Some((i, k)) => (
                            i,
                            k.trim()
                                .parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
                        ),
                        None => (v, 1),
                    };
                    let i: usize = i
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable '{factor}'")))?;
                    if i == 0 || i > r {
                        return Err(Error::Parse(format!("variable {factor} outside T1..T{r}")));
                    }
                    e[i - 1] += k;
                } else {
                    c *= factor
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad factor '{factor}'")))?;
                }
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("T{}", i + 1)
                    } else {
                        format!("T{}^{k}", i + 1)
                    }
                })
                .collect();
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            match (n, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// P(T_1, …, T_r) computed by Hecke multiplication.
pub fn evaluate(alg: &HeckeAlgebra, poly: &GenPoly, p: &PolyA) -> Result<HeckeElement> {
    let r = alg.rank();
    if poly.rank() > r {
        return Err(Error::RankMismatch(r, poly.rank()));
    }
    let gens = (1..=r)
        .map(|i| alg.t_gen(p, i))
        .collect::<Result<Vec<_>>>()?;
    let mut cache: HashMap<Vec<u32>, HeckeElement> = HashMap::new();
    let mut out = HeckeElement::zero(r);
    for (e, c) in poly.widen(r).terms() {
        let mono = monomial(alg, &gens, e, &mut cache)?;
        out = out.add(&mono.scale(c));
    }
    Ok(out)
}

fn monomial(
    alg: &HeckeAlgebra,
    gens: &[HeckeElement],
    e: &[u32],
    cache: &mut HashMap<Vec<u32>, HeckeElement>,
) -> Result<HeckeElement> {
    if let Some(x) = cache.get(e) {
        return Ok(x.clone());
    }
    let x = match e.iter().rposition(|&k| k > 0) {
        None => alg.one(),
        Some(i) => {
            let mut rest = e.to_vec();
            rest[i] -= 1;
            let prev = monomial(alg, gens, &rest, cache)?;
            alg.multiply(&prev, &gens[i])?
        }
    };
    cache.insert(e.to_vec(), x.clone());
    Ok(x)
}

/// Writes a p-primary element as a polynomial in T_1, …, T_r.
pub fn express_in_generators(alg: &HeckeAlgebra, x: &HeckeElement, p: &PolyA) -> Result<GenPoly> {
    if x.rank() != alg.rank() {
        return Err(Error::RankMismatch(alg.rank(), x.rank()));
    }
    if !p.is_monic() || !p.is_irreducible() {
        return Err(Error::Reducible(p.to_string()));
    }
    for (t, _) in x.terms() {
        if t.exponents(p).is_none() {
            return Err(Error::MixedPrimeSupport(format!(
                "T{t} is not a power of {p}"
            )));
        }
    }
    let mut lower: Vec<HeckeAlgebra> = (1..alg.rank())
        .map(|r| HeckeAlgebra::new(alg.field(), r, alg.budget()))
        .collect();
    express_rec(alg, &mut lower, x, p)
}

fn express_rec(
    alg: &HeckeAlgebra,
    lower: &mut [HeckeAlgebra],
    x: &HeckeElement,
    p: &PolyA,
) -> Result<GenPoly> {
    let r = alg.rank();
    let mut out = GenPoly::zero(r);
    if x.is_zero() {
        return Ok(out);
    }
    if r == 1 {
        for (t, c) in x.terms() {
            out.add_term(t.exponents(p).expect("p-primary"), c.clone());
        }
        return Ok(out);
    }
    // lift Ψ(x) through the section T_i ↦ T_i, then peel off a factor of T_r
    let (below, _) = lower.split_at_mut(r - 1);
    let (sub_alg, rest) = below.split_last_mut().expect("r ≥ 2");
    let head = express_rec(sub_alg, rest, &psi_map(x)?, p)?.widen(r);
    let remainder = x.sub(&evaluate(alg, &head, p)?);
    let mut quotient = HeckeElement::zero(r);
    for (t, c) in remainder.terms() {
        let e = t.exponents(p).expect("p-primary");
        if e[r - 1] == 0 {
            return Err(Error::OracleDisagreement(format!(
                "T{t} survived the Ψ lift"
            )));
        }
        let e: Vec<u32> = e.iter().map(|k| k - 1).collect();
        quotient.add_term(IndexType::from_exponents(p, &e)?, c.clone());
    }
    let tail = express_rec(alg, lower, &quotient, p)?;
    for (e, c) in tail.terms() {
        let mut e = e.clone();
        e[r - 1] += 1;
        out.add_term(e, c.clone());
    }
    for (e, c) in head.terms() {
        out.add_term(e.clone(), c.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;
    use crate::lattice::Budget;

    #[test]
    fn examples_and_round_trip() {
        let f = FqContext::prime(2).unwrap();
        let t = PolyA::t(&f);
        let h = HeckeAlgebra::new(&f, 2, Budget::SMALL);
        let x = HeckeElement::parse(&f, "T(t^2,1)").unwrap();
        let poly = express_in_generators(&h, &x, &t).unwrap();
        assert_eq!(poly.to_string(), "T1^2 - 3*T2");
        assert_eq!(GenPoly::parse(2, &poly.to_string()).unwrap(), poly);
        assert_eq!(
            express_in_generators(&h, &h.t_gen(&t, 1).unwrap(), &t)
                .unwrap()
                .to_string(),
            "T1"
        );
        assert_eq!(
            express_in_generators(&h, &h.t_gen(&t, 2).unwrap(), &t)
                .unwrap()
                .to_string(),
            "T2"
        );
        let mixed = HeckeElement::parse(&f, "T(t^2+t,1)").unwrap();
        assert!(matches!(
            express_in_generators(&h, &mixed, &t),
            Err(Error::MixedPrimeSupport(_))
        ));
        for n in 0..=3 {
            for ty in crate::lattice::index_types_with_det(&t.pow(n), 2).unwrap() {
                let x = HeckeElement::from_type(ty);
                let poly = express_in_generators(&h, &x, &t).unwrap();
                assert_eq!(evaluate(&h, &poly, &t).unwrap(), x);
            }
        }
    }
}
