//! Square matrices over A, index types and normal forms.
//!
//! A full-rank lattice M ⊆ A^r is stored through a basis written as the rows
//! of a matrix; its canonical label is the row Hermite normal form.

mod enumerate;
mod normal_form;

use std::fmt;

pub use enumerate::{
    enumerate_hnf, enumerate_sublattices, hnf_count_bound, index_types_with_det, Budget,
};
pub use normal_form::{a_index, contains, elementary_divisors, hermite_normal_form, solve_row};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::PolyA;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeMatrix {
    rows: Vec<Vec<PolyA>>,
}

impl LatticeMatrix {
    /// A square matrix; `rows` must be r×r with r ≥ 1.
    pub fn new(rows: Vec<Vec<PolyA>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::Parse(format!(
                "matrix must be square of rank ≥ 1, got {r} rows"
            )));
        }
        Ok(LatticeMatrix { rows })
    }

    /// Like `new`, additionally rejecting singular matrices.
    pub fn lattice(rows: Vec<Vec<PolyA>>) -> Result<Self> {
        let m = Self::new(rows)?;
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(m)
    }

    pub fn identity(field: &Field, r: usize) -> Self {
        Self::diag(&vec![PolyA::one(field); r])
    }

    pub fn diag(d: &[PolyA]) -> Self {
        let f = d[0].field();
        let rows = (0..d.len())
            .map(|i| {
                (0..d.len())
                    .map(|j| if i == j { d[i].clone() } else { PolyA::zero(f) })
                    .collect()
            })
            .collect();
        LatticeMatrix { rows }
    }

    pub fn parse(field: &Field, rows: &[Vec<&str>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| PolyA::parse(field, s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &Field {
        self.rows[0][0].field()
    }

    pub fn rows(&self) -> &[Vec<PolyA>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyA {
        &self.rows[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<PolyA>> {
        self.rows
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = self.rank();
        let f = self.field();
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (0..r).fold(PolyA::zero(f), |acc, k| {
                            &acc + &(&self.rows[i][k] * &o.rows[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        LatticeMatrix { rows }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> PolyA {
        let r = self.rank();
        let f = self.field().clone();
        let mut m = self.rows.clone();
        let mut sign = false;
        let mut prev = PolyA::one(&f);
        for k in 0..r {
            if m[k][k].is_zero() {
                match (k + 1..r).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = !sign;
                    }
                    None => return PolyA::zero(&f),
                }
            }
            for i in k + 1..r {
                for j in k + 1..r {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[r - 1][r - 1].clone();
        if sign {
            -&d
        } else {
            d
        }
    }

    /// Upper triangular: every entry below the diagonal is zero.
    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rank()).all(|i| (0..i).all(|j| self.rows[i][j].is_zero()))
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                format!(
                    "({})",
                    row.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl fmt::Debug for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An elementary-divisor tuple (a_1, …, a_r) with a_r | … | a_1, all monic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexType {
    divisors: Vec<PolyA>,
}

impl IndexType {
    pub fn new(divisors: Vec<PolyA>) -> Result<Self> {
        if divisors.is_empty() {
            return Err(Error::InvalidIndexType("empty tuple".into()));
        }
        for d in &divisors {
            if d.is_zero() || !d.is_monic() {
                return Err(Error::InvalidIndexType(format!(
                    "{d} is not monic and nonzero"
                )));
            }
        }
        for w in divisors.windows(2) {
            if !w[1].divides(&w[0]) {
                return Err(Error::InvalidIndexType(format!(
                    "{} does not divide {}",
                    w[1], w[0]
                )));
            }
        }
        Ok(IndexType { divisors })
    }

    /// The type (1, …, 1).
    pub fn unit(field: &Field, r: usize) -> Self {
        IndexType {
            divisors: vec![PolyA::one(field); r],
        }
    }

    /// (p^{e_1}, …, p^{e_r}) for a nonincreasing exponent list.
    pub fn from_exponents(p: &PolyA, e: &[u32]) -> Result<Self> {
        Self::new(e.iter().map(|&k| p.pow(k as u64)).collect())
    }

    pub fn divisors(&self) -> &[PolyA] {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn field(&self) -> &Field {
        self.divisors[0].field()
    }

    pub fn det(&self) -> PolyA {
        self.divisors
            .iter()
            .fold(PolyA::one(self.field()), |acc, d| &acc * d)
    }

    pub fn matrix(&self) -> LatticeMatrix {
        LatticeMatrix::diag(&self.divisors)
    }

    /// Exponents of p in each divisor, if every divisor is a power of p.
    pub fn exponents(&self, p: &PolyA) -> Option<Vec<u32>> {
        self.divisors
            .iter()
            .map(|d| {
                let mut e = 0;
                let mut x = d.clone();
                while !x.is_one() {
                    x = x.exact_div(p)?;
                    e += 1;
                }
                Some(e)
            })
            .collect()
    }

    /// Parses "T(t^2,1)", "(t^2,1)" or "t^2,1".
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('T').unwrap_or(s).trim();
        let s = s
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(s);
        let mut parts = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&s[start..]);
        let divs = parts
            .iter()
            .map(|x| PolyA::parse(field, x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(divs)
    }
}

impl fmt::Display for IndexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.divisors.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for IndexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    #[test]
    fn determinant_and_chain_validation() {
        let f = FqContext::prime(3).unwrap();
        let m = LatticeMatrix::parse(
            &f,
            &[
                vec!["t", "1", "0"],
                vec!["2", "t", "1"],
                vec!["0", "1", "t+1"],
            ],
        )
        .unwrap();
        // cofactor expansion by hand
        let expect = PolyA::parse(&f, "t^3+t^2+1").unwrap();
        assert_eq!(m.det(), expect);
        assert!(IndexType::parse(&f, "(t,t^2)").is_err());
        assert!(IndexType::parse(&f, "T(t^2,t)").is_ok());
        assert!(LatticeMatrix::lattice(vec![
            vec![PolyA::t(&f), PolyA::t(&f)],
            vec![PolyA::one(&f), PolyA::one(&f)]
        ])
        .is_err());
    }
}
