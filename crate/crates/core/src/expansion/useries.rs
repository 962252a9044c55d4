use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::LaurentSeries;
use crate::ring::XPoly;

/// f = Σ_{n ≤ M} f_n u^n + O(u^{M+1}) with coefficients in F_∞, tagged with a weight.
#[derive(Clone, PartialEq, Eq)]
pub struct USeries {
    field: Field,
    weight: i64,
    coeffs: Vec<LaurentSeries>,
}

impl USeries {
    /// Coefficients f_0..f_M; missing entries are exact zeros.
    pub fn new(
        field: &Field,
        weight: i64,
        truncation: usize,
        mut coeffs: Vec<LaurentSeries>,
    ) -> Self {
        coeffs.resize(truncation + 1, LaurentSeries::zero(field));
        USeries {
            field: field.clone(),
            weight,
            coeffs,
        }
    }

    pub fn zero(field: &Field, weight: i64, truncation: usize) -> Self {
        Self::new(field, weight, truncation, Vec::new())
    }

    pub fn constant(c: LaurentSeries, weight: i64, truncation: usize) -> Self {
        let f = c.field().clone();
        Self::new(&f, weight, truncation, vec![c])
    }

    /// c·u^n (zero if n > truncation).
    pub fn monomial(c: LaurentSeries, n: usize, weight: i64, truncation: usize) -> Self {
        let f = c.field().clone();
        let mut x = Self::zero(&f, weight, truncation);
        if n <= truncation {
            x.coeffs[n] = c;
        }
        x
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn with_weight(mut self, weight: i64) -> Self {
        self.weight = weight;
        self
    }

    /// M: coefficients of u^n for n ≤ M are known.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    /// f_n; exact zero beyond the stored range is not implied, so callers
    /// must stay within the truncation.
    pub fn coeff(&self, n: usize) -> &LaurentSeries {
        &self.coeffs[n]
    }

    /// Least n with a known nonzero f_n.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn first_live(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_exact_zero())
            .unwrap_or(self.coeffs.len())
    }

    pub fn truncate(&self, m: usize) -> Self {
        let m = m.min(self.truncation());
        USeries {
            field: self.field.clone(),
            weight: self.weight,
            coeffs: self.coeffs[..=m].to_vec(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.truncation().min(o.truncation());
        let coeffs = (0..=m).map(|n| &self.coeffs[n] + &o.coeffs[n]).collect();
        USeries {
            field: self.field.clone(),
            weight: self.weight,
            coeffs,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.truncation().min(o.truncation());
        let coeffs = (0..=m).map(|n| &self.coeffs[n] - &o.coeffs[n]).collect();
        USeries {
            field: self.field.clone(),
            weight: self.weight,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        USeries {
            field: self.field.clone(),
            weight: self.weight,
            coeffs,
        }
    }

    pub fn scale(&self, c: &LaurentSeries) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| if x.is_exact_zero() { x.clone() } else { x * c })
            .collect();
        USeries {
            field: self.field.clone(),
            weight: self.weight,
            coeffs,
        }
    }

    /// Product; exact-zero coefficients are skipped, weights add.
    pub fn mul(&self, o: &Self) -> Self {
        let m = self.truncation().min(o.truncation());
        let mut coeffs = vec![LaurentSeries::zero(&self.field); m + 1];
        let (a0, b0) = (self.first_live(), o.first_live());
        for i in a0..=m {
            let a = &self.coeffs[i];
            if a.is_exact_zero() {
                continue;
            }
            for j in b0..=m.saturating_sub(i) {
                if i + j > m {
                    break;
                }
                let b = &o.coeffs[j];
                if !b.is_exact_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        USeries {
            field: self.field.clone(),
            weight: self.weight + o.weight,
            coeffs,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(LaurentSeries::one(&self.field), 0, self.truncation());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// f^{p^k}: coefficients raised to p^k and exponents scaled by p^k.
    pub fn frobenius(&self, k: u32) -> Self {
        let m = self.truncation();
        let s = (self.field.characteristic() as usize).pow(k);
        let mut coeffs = vec![LaurentSeries::zero(&self.field); m + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * s > m {
                break;
            }
            coeffs[n * s] = c.frobenius(k);
        }
        // f_n for n ≤ M/s determine everything up to u^M
        USeries {
            field: self.field.clone(),
            weight: self.weight * s as i64,
            coeffs,
        }
    }

    /// f^{q^k} for q = p^e.
    pub fn frobenius_q(&self, k: u32) -> Self {
        self.frobenius(k * self.field.degree())
    }

    /// 1/f for f with an invertible constant term; `cutoff` bounds the
    /// absolute precision of the constant's reciprocal.
    pub fn inverse(&self, cutoff: i64) -> Result<Self> {
        let m = self.truncation();
        if self.coeffs[0].is_zero() {
            return Err(Error::InversionOfZero);
        }
        let c0 = self.coeffs[0].recip_abs(cutoff)?;
        let mut out: Vec<LaurentSeries> = vec![c0.clone()];
        for n in 1..=m {
            let mut acc = LaurentSeries::zero(&self.field);
            for j in 1..=n {
                let a = &self.coeffs[j];
                if !a.is_exact_zero() && !out[n - j].is_exact_zero() {
                    acc = &acc + &(a * &out[n - j]);
                }
            }
            out.push(if acc.is_exact_zero() {
                acc
            } else {
                -&(&acc * &c0)
            });
        }
        Ok(USeries {
            field: self.field.clone(),
            weight: -self.weight,
            coeffs: out,
        })
    }

    /// Multiplication by u^s.
    pub fn shift(&self, s: usize) -> Self {
        let m = self.truncation();
        let mut coeffs = vec![LaurentSeries::zero(&self.field); m + 1];
        for n in 0..=m {
            if n + s > m {
                break;
            }
            coeffs[n + s] = self.coeffs[n].clone();
        }
        USeries {
            field: self.field.clone(),
            weight: self.weight,
            coeffs,
        }
    }

    /// Coefficient-wise agreement on the common window.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let m = self.truncation().min(o.truncation());
        (0..=m).all(|n| self.coeffs[n].agrees_with(&o.coeffs[n]))
    }

    /// First index where the two series provably differ.
    pub fn first_disagreement(&self, o: &Self) -> Option<usize> {
        let m = self.truncation().min(o.truncation());
        (0..=m).find(|&n| !self.coeffs[n].agrees_with(&o.coeffs[n]))
    }

    /// Smallest relative precision among the nonzero coefficients.
    pub fn min_relative_precision(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|c| c.relative_precision())
            .min()
    }
}

/// Σ_j P_j·x^j, reusing a table of powers of x.
pub struct PowerTable {
    powers: Vec<USeries>,
}

impl PowerTable {
    /// x^0, …, x^{n}; stops early once the powers vanish below the truncation.
    pub fn new(x: &USeries, n: usize) -> Self {
        let m = x.truncation();
        let mut powers = vec![USeries::constant(LaurentSeries::one(x.field()), 0, m)];
        let ord = x.first_live();
        for j in 1..=n {
            if ord.saturating_mul(j) > m {
                break;
            }
            let next = powers[j - 1].mul(x);
            powers.push(next);
        }
        PowerTable { powers }
    }

    /// x^n, if it was not dropped for vanishing below the truncation.
    pub fn power(&self, n: usize) -> Option<&USeries> {
        self.powers.get(n)
    }

    /// P(x) for a polynomial with coefficients in F_∞.
    pub fn eval(&self, p: &XPoly<LaurentSeries>, weight: i64) -> USeries {
        let x0 = &self.powers[0];
        let mut out = USeries::zero(x0.field(), weight, x0.truncation());
        for (j, c) in p.coeffs().iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if let Some(pw) = self.powers.get(j) {
                out = out.add(&pw.scale(c));
            }
        }
        out.with_weight(weight)
    }
}

impl fmt::Display for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*u^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{})", self.truncation() + 1)
    }
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    #[test]
    fn arithmetic_and_inverse() {
        let f = FqContext::prime(3).unwrap();
        let one = LaurentSeries::one(&f);
        let t = LaurentSeries::monomial(&f, 1, 1);
        // h = 1 + t·u^2
        let h = USeries::new(
            &f,
            0,
            8,
            vec![one.clone(), LaurentSeries::zero(&f), t.clone()],
        );
        let hi = h.inverse(-50).unwrap();
        let prod = h.mul(&hi);
        assert!(prod.agrees_with(&USeries::constant(one.clone(), 0, 8)));
        assert!(hi.coeff(1).is_exact_zero());
        // (1 + t u^2)^3 = 1 + t^3 u^6 in characteristic 3
        assert!(h.pow(3).agrees_with(&h.frobenius(1)));
        assert_eq!(h.shift(7).order(), Some(7));
        let table = PowerTable::new(&h.shift(1), 3);
        let p = XPoly::new(
            &LaurentSeries::zero(&f),
            vec![LaurentSeries::zero(&f), one.clone(), one.clone()],
        );
        let direct = h.shift(1).add(&h.shift(1).pow(2));
        assert!(table.eval(&p, 0).agrees_with(&direct));
    }
}
