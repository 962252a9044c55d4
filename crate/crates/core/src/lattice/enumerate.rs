use std::str::FromStr;

use rayon::prelude::*;

use super::{elementary_divisors, IndexType, LatticeMatrix};
use crate::error::{Error, Result};
use crate::poly::PolyA;

/// Cap on the number of candidate matrices an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Budget {
    pub const SMALL: Budget = Budget(200_000);
    pub const MEDIUM: Budget = Budget(5_000_000);
    pub const LARGE: Budget = Budget(100_000_000);

    pub fn check(&self, attempted: u128) -> Result<()> {
        if attempted > self.0 {
            return Err(Error::BudgetExceeded {
                attempted,
                budget: self.0,
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::MEDIUM
    }
}

impl FromStr for Budget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "small" => Ok(Budget::SMALL),
            "medium" => Ok(Budget::MEDIUM),
            "large" => Ok(Budget::LARGE),
            n => n
                .parse()
                .map(Budget)
                .map_err(|_| Error::Parse(format!("bad budget '{s}'"))),
        }
    }
}

/// Nonincreasing sequences of length r with the given sum.
fn partitions(n: u32, r: usize, max: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n.min(max)).rev() {
        for mut rest in partitions(n - first, r - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Sequences of length r of nonnegative integers with the given sum.
fn compositions(n: u32, r: usize) -> Vec<Vec<u32>> {
    if r == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, r - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn monic_factors(det: &PolyA) -> Result<Vec<(PolyA, u32)>> {
    if det.is_zero() {
        return Err(Error::Singular);
    }
    Ok(det.factor()?.1)
}

/// Every index type of rank r whose determinant is `det` (up to units),
/// sorted ascending.
pub fn index_types_with_det(det: &PolyA, r: usize) -> Result<Vec<IndexType>> {
    let f = det.field().clone();
    let mut acc: Vec<Vec<PolyA>> = vec![vec![PolyA::one(&f); r]];
    for (p, e) in monic_factors(det)? {
        let mut next = Vec::new();
        for parts in partitions(e, r, e) {
            for base in &acc {
                next.push(
                    base.iter()
                        .zip(&parts)
                        .map(|(a, &k)| a * &p.pow(k as u64))
                        .collect(),
                );
            }
        }
        acc = next;
    }
    let mut out = acc
        .into_iter()
        .map(IndexType::new)
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Monic diagonals (h_1, …, h_r) with product `det`.
fn diagonals_with_det(det: &PolyA, r: usize) -> Result<Vec<Vec<PolyA>>> {
    let f = det.field().clone();
    let mut acc: Vec<Vec<PolyA>> = vec![vec![PolyA::one(&f); r]];
    for (p, e) in monic_factors(det)? {
        let mut next = Vec::new();
        for parts in compositions(e, r) {
            for base in &acc {
                next.push(
                    base.iter()
                        .zip(&parts)
                        .map(|(a, &k)| a * &p.pow(k as u64))
                        .collect(),
                );
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn free_count(q: u128, diag: &[PolyA]) -> u128 {
    diag.iter().enumerate().fold(1u128, |acc, (j, h)| {
        acc.saturating_mul(q.saturating_pow((j as u32) * h.deg() as u32))
    })
}

/// Number of Hermite normal forms with determinant `det` whose diagonal passes `keep_diag`.
pub fn hnf_count_bound(
    det: &PolyA,
    r: usize,
    keep_diag: &dyn Fn(&[PolyA]) -> bool,
) -> Result<u128> {
    let q = det.field().order() as u128;
    Ok(diagonals_with_det(det, r)?
        .iter()
        .filter(|d| keep_diag(d))
        .map(|d| free_count(q, d))
        .sum())
}

/// All Hermite normal forms of rank r with determinant `det` whose diagonal
/// passes `keep_diag` and which pass `keep`, sorted lexicographically.
pub fn enumerate_hnf(
    det: &PolyA,
    r: usize,
    keep_diag: &(dyn Fn(&[PolyA]) -> bool + Sync),
    keep: &(dyn Fn(&LatticeMatrix) -> bool + Sync),
    budget: Budget,
) -> Result<Vec<LatticeMatrix>> {
    let f = det.field().clone();
    let q = f.order() as u128;
    let diags: Vec<Vec<PolyA>> = diagonals_with_det(det, r)?
        .into_iter()
        .filter(|d| keep_diag(d))
        .collect();
    budget.check(diags.iter().map(|d| free_count(q, d)).sum())?;
    let mut out: Vec<LatticeMatrix> = Vec::new();
    for diag in &diags {
        // positions above the diagonal, each reduced modulo the pivot of its column
        let slots: Vec<(usize, usize)> = (0..r).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let radix: Vec<u64> = slots
            .iter()
            .map(|&(_, j)| (q as u64).pow(diag[j].deg() as u32))
            .collect();
        let total = free_count(q, diag) as u64;
        let found: Vec<LatticeMatrix> = (0..total)
            .into_par_iter()
            .filter_map(|mut code| {
                let mut rows = LatticeMatrix::diag(diag).into_rows();
                for (s, &(i, j)) in slots.iter().enumerate() {
                    let digit = code % radix[s];
                    code /= radix[s];
                    rows[i][j] = PolyA::from_index(&f, digit);
                }
                let m = LatticeMatrix::new(rows).expect("square");
                keep(&m).then_some(m)
            })
            .collect();
        out.extend(found);
    }
    out.sort();
    Ok(out)
}

/// One Hermite-canonical basis per sublattice M ⊆ A^r with [A^r:M]_A = idx.
pub fn enumerate_sublattices(idx: &IndexType, budget: Budget) -> Result<Vec<LatticeMatrix>> {
    let a1 = idx.divisors()[0].clone();
    let keep_diag = move |d: &[PolyA]| d.iter().all(|h| h.divides(&a1));
    let want = idx.clone();
    let keep = move |m: &LatticeMatrix| elementary_divisors(m).map(|e| e == want).unwrap_or(false);
    enumerate_hnf(&idx.det(), idx.rank(), &keep_diag, &keep, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;
    use crate::lattice::hermite_normal_form;
    use std::collections::HashSet;

    #[test]
    fn spec_examples() {
        let f = FqContext::prime(2).unwrap();
        let ls =
            enumerate_sublattices(&IndexType::parse(&f, "(t,1)").unwrap(), Budget::SMALL).unwrap();
        let expect: Vec<LatticeMatrix> = [
            vec![vec!["1", "0"], vec!["0", "t"]],
            vec![vec!["1", "1"], vec!["0", "t"]],
            vec![vec!["t", "0"], vec!["0", "1"]],
        ]
        .iter()
        .map(|rows| LatticeMatrix::parse(&f, rows).unwrap())
        .collect();
        assert_eq!(ls, expect);
        let tt =
            enumerate_sublattices(&IndexType::parse(&f, "(t,t)").unwrap(), Budget::SMALL).unwrap();
        assert_eq!(tt, vec![IndexType::parse(&f, "(t,t)").unwrap().matrix()]);
        let r3 = enumerate_sublattices(&IndexType::parse(&f, "(t,1,1)").unwrap(), Budget::SMALL)
            .unwrap();
        assert_eq!(r3.len(), 7);
    }

    #[test]
    fn budget_is_enforced() {
        let f = FqContext::prime(3).unwrap();
        let idx = IndexType::parse(&f, "(t^4,1,1)").unwrap();
        assert!(matches!(
            enumerate_sublattices(&idx, Budget(10)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn types_partition_all_hnfs() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            for det in ["t", "t^2", "t^2+t", "t^3", "t^3+1"] {
                let det = PolyA::parse(&f, det).unwrap();
                let all = enumerate_hnf(&det, 2, &|_| true, &|_| true, Budget::MEDIUM).unwrap();
                let set: HashSet<_> = all.iter().cloned().collect();
                assert_eq!(set.len(), all.len());
                for m in &all {
                    assert_eq!(&hermite_normal_form(m).unwrap(), m);
                }
                let mut union = Vec::new();
                for idx in index_types_with_det(&det, 2).unwrap() {
                    union.extend(enumerate_sublattices(&idx, Budget::MEDIUM).unwrap());
                }
                union.sort();
                assert_eq!(union, all);
            }
        }
    }
}
