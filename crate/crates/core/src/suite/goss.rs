use std::collections::BTreeSet;

use super::{check, Check, Scale, SuiteConfig};
use crate::error::Result;
use crate::field::{Field, Fq, FqContext};
use crate::goss::{
    brute_force_power_sum, finite_lattice_exponential, goss_for_finite_lattice, goss_polynomials,
    lattice_log, power_sum_matches_goss, ExpCoeffs, FiniteLattice,
};
use crate::poly::PolyA;
use crate::ratfunc::RationalFunction;
use crate::ring::{Ring, SymPoly, XPoly};

pub fn goss_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for q in [2u32, 3, 4] {
        if !cfg.covers(q) {
            continue;
        }
        let field = match FqContext::of_order(q) {
            Ok(f) => f,
            Err(e) => {
                out.push(check(
                    1,
                    format!("goss field q={q}"),
                    "field construction",
                    || Err(e),
                ));
                continue;
            }
        };
        out.extend(generic_checks(&field, cfg.scale));
        out.extend(oracle_checks(&field, cfg.scale));
    }
    out
}

fn generic_checks(field: &Field, scale: Scale) -> Vec<Check> {
    let q = field.order();
    let p = field.characteristic();
    let k_max = match scale {
        Scale::Full => (q as usize).pow(3),
        Scale::Small => (q as usize).pow(2) + 1,
    };
    let mut levels = 1;
    while (q as usize).pow(levels as u32 + 1) <= k_max {
        levels += 1;
    }
    let coeffs = ExpCoeffs::generic(q, p, levels);
    let table = goss_polynomials(&coeffs, k_max + 1);
    let one = SymPoly::constant(p, 1);
    let g = |k: usize| table.get(k as i64);
    let tag = format!("q={q} K={k_max}");
    let mut out = Vec::new();

    out.push(check(
        1,
        format!("goss monic deg k, G_k(0)=0 [{tag}]"),
        "G_k is monic of degree k and vanishes at 0",
        || {
            let bad: Vec<usize> = (1..=k_max)
                .filter(|&k| {
                    !(g(k).is_monic() && g(k).degree() == Some(k) && g(k).coeff(0).is_zero())
                })
                .collect();
            Ok((bad.is_empty(), format!("bad k: {bad:?}")))
        },
    ));
    out.push(check(
        1,
        format!("goss X^2 | G_k [{tag}]"),
        "X^2 divides G_k for k >= 2",
        || {
            let bad: Vec<usize> = (2..=k_max)
                .filter(|&k| g(k).order().is_none_or(|o| o < 2))
                .collect();
            Ok((bad.is_empty(), format!("bad k: {bad:?}")))
        },
    ));
    out.push(check(
        1,
        format!("goss G_pk = G_k^p [{tag}]"),
        "G_{pk} = (G_k)^p for p the characteristic",
        || {
            let bad: Vec<usize> = (1..=k_max / p as usize)
                .filter(|&k| *g(p as usize * k) != g(k).pow(p as u64))
                .collect();
            Ok((bad.is_empty(), format!("bad k: {bad:?}")))
        },
    ));
    out.push(check(
        1,
        format!("goss X^2 G_k' = k G_k+1 [{tag}]"),
        "X^2 G_k' = k G_{k+1}",
        || {
            let bad: Vec<usize> = (1..=k_max)
                .filter(|&k| {
                    g(k).derivative().shift(2) != g(k + 1).scale(&one.from_int_like(k as i64))
                })
                .collect();
            Ok((bad.is_empty(), format!("bad k: {bad:?}")))
        },
    ));
    out.push(check(
        1,
        format!("goss exponents = k mod q-1 [{tag}]"),
        "every exponent of G_k is congruent to k mod q-1",
        || {
            let m = q as i64 - 1;
            let bad: Vec<usize> = (1..=k_max)
                .filter(|&k| {
                    g(k).coeffs()
                        .iter()
                        .enumerate()
                        .any(|(j, c)| !c.is_zero() && (j as i64 - k as i64).rem_euclid(m) != 0)
                })
                .collect();
            Ok((bad.is_empty(), format!("bad k: {bad:?}")))
        },
    ));
    out.push(check(
        1,
        format!("goss G_(q^m-1) via log [{tag}]"),
        "G_{q^m-1} = sum_{i<m} beta_i X^{q^m-q^i}",
        || {
            let logc = lattice_log(&coeffs, levels);
            let mut bad = Vec::new();
            let mut m = 1;
            while m <= 3 && (q as usize).pow(m as u32) - 1 <= k_max {
                let qm = (q as usize).pow(m as u32);
                let mut expect = XPoly::zero(&one.zero_like());
                for i in 0..m {
                    expect = expect.add(&XPoly::monomial(
                        logc.beta[i].clone(),
                        qm - (q as usize).pow(i as u32),
                    ));
                }
                if *g(qm - 1) != expect {
                    bad.push(m);
                }
                m += 1;
            }
            Ok((bad.is_empty() && m > 1, format!("bad m: {bad:?}")))
        },
    ));
    out
}

/// Every F_q-subspace of dimension 1 or 2 inside the polynomials of degree ≤ 2,
/// given by a basis in reduced row echelon form.
pub(crate) fn small_lattices(field: &Field, max_dim: usize) -> Vec<Vec<PolyA>> {
    let q = field.order();
    let vectors: Vec<Vec<Fq>> = (1..q.pow(3))
        .map(|n| vec![n % q, (n / q) % q, n / (q * q)])
        .collect();
    let mut seen = BTreeSet::new();
    for a in &vectors {
        seen.insert(rref(field, vec![a.clone()]));
        if max_dim >= 2 {
            for b in &vectors {
                let m = rref(field, vec![a.clone(), b.clone()]);
                if m.len() == 2 {
                    seen.insert(m);
                }
            }
        }
    }
    seen.into_iter()
        .map(|rows| rows.into_iter().map(|c| PolyA::new(field, c)).collect())
        .collect()
}

fn rref(field: &Field, mut rows: Vec<Vec<Fq>>) -> Vec<Vec<Fq>> {
    let n = rows[0].len();
    let mut rank = 0;
    for col in (0..n).rev() {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        rows[rank] = rows[rank].iter().map(|&x| field.mul(x, inv)).collect();
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let c = rows[i][col];
                let sub: Vec<Fq> = rows[rank].iter().map(|&x| field.mul(x, c)).collect();
                rows[i] = rows[i]
                    .iter()
                    .zip(&sub)
                    .map(|(&x, &y)| field.sub(x, y))
                    .collect();
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

fn oracle_checks(field: &Field, scale: Scale) -> Vec<Check> {
    let q = field.order();
    let (max_dim, k_max) = match scale {
        Scale::Full => (2, 12u32),
        Scale::Small => (1, 6u32),
    };
    let elems: Vec<Fq> = (0..q).collect();
    let one = RationalFunction::one(field);
    let lattices = small_lattices(field, max_dim);
    let n = lattices.len();
    let run = |floor_only: bool| -> Result<(bool, String)> {
        let mut bad = Vec::new();
        for basis in &lattices {
            let basis: Vec<RationalFunction> = basis
                .iter()
                .map(|p| RationalFunction::from_poly(p.clone()))
                .collect();
            let l = FiniteLattice::new(q, &one, basis.clone())?;
            let table = goss_for_finite_lattice(&l, k_max as usize);
            let size = (q as usize).pow(l.dim() as u32);
            for k in 1..=k_max {
                let g = table.get(k as i64);
                let ok = if floor_only {
                    g.order().is_some_and(|o| o > k as usize / size)
                } else {
                    let sum = brute_force_power_sum(&l, &elems, k, 4096)?;
                    power_sum_matches_goss(&sum, &finite_lattice_exponential(&l), g, k)?
                };
                if !ok {
                    bad.push(format!("L={basis:?} k={k}"));
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{} failures, first: {:?}", bad.len(), bad.first()),
        ))
    };
    vec![
        check(
            1,
            format!("goss power-sum oracle [q={q}, {n} lattices, k<={k_max}]"),
            "sum over L of (z+lambda)^-k = G_k(1/e_L(z))",
            || run(false),
        ),
        check(
            1,
            format!("goss divisibility floor [q={q}, {n} lattices, k<={k_max}]"),
            "X^(floor(k/|L|)+1) divides G_k,L",
            || run(true),
        ),
    ]
}
