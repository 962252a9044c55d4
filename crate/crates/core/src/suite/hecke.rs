use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check, first_prime, Check, Scale, SuiteConfig};
use crate::error::Result;
use crate::field::{Field, FqContext};
use crate::hecke::{
    evaluate, express_in_generators, psi_map, q_binomial, q_binomial_or_zero, HeckeAlgebra,
    HeckeElement,
};
use crate::lattice::{index_types_with_det, IndexType};
use crate::poly::PolyA;

/// A random p-primary element: up to `terms` chains of exponent sum ≤ `max_sum`.
fn random_element(
    rng: &mut ChaCha8Rng,
    r: usize,
    p: &PolyA,
    max_sum: u32,
    terms: usize,
) -> Result<HeckeElement> {
    let mut x = HeckeElement::zero(r);
    while x.is_zero() {
        for _ in 0..rng.gen_range(1..=terms) {
            let n = rng.gen_range(1..=max_sum);
            let types = index_types_with_det(&p.pow(n as u64), r)?;
            let t = types.choose(rng).expect("chains exist").clone();
            let c = [-2i64, -1, 1, 2, 3].choose(rng).copied().unwrap_or(1);
            x.add_term(t, BigInt::from(c));
        }
    }
    Ok(x)
}

fn random_chain(rng: &mut ChaCha8Rng, r: usize, p: &PolyA, max_sum: u32) -> Result<IndexType> {
    let n = rng.gen_range(1..=max_sum);
    let types = index_types_with_det(&p.pow(n as u64), r)?;
    Ok(types.choose(rng).expect("chains exist").clone())
}

fn primes_up_to_degree_2(field: &Field) -> Vec<PolyA> {
    (1..=2)
        .flat_map(|d| {
            PolyA::monic_of_degree(field, d)
                .filter(|p| p.is_irreducible())
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn hecke_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let full = cfg.scale == Scale::Full;
    let qs: Vec<u32> = [2u32, 3].into_iter().filter(|&q| cfg.covers(q)).collect();
    let ds: &[usize] = if full { &[1, 2] } else { &[1] };
    let mut out = Vec::new();

    for &q in &qs {
        for &d in ds {
            let tag = format!("q={q} d={d}");
            out.push(check(
                3,
                format!("hecke T(p,1)^2 [{tag}]"),
                "T(p,1)^2 = T(p^2,1) + (q^d+1) T(p,p)",
                || {
                    let field = FqContext::prime(q)?;
                    let p = first_prime(&field, d);
                    let alg = HeckeAlgebra::new(&field, 2, cfg.budget);
                    let x = alg.t_gen(&p, 1)?;
                    let lhs = alg.multiply(&x, &x)?;
                    let mut rhs = HeckeElement::from_type(IndexType::from_exponents(&p, &[2, 0])?);
                    rhs.add_term(
                        IndexType::from_exponents(&p, &[1, 1])?,
                        BigInt::from((q as u64).pow(d as u32) + 1),
                    );
                    Ok((lhs == rhs, format!("got {lhs}")))
                },
            ));
            out.push(check(
                3,
                format!("hecke degree of T_i [{tag}]"),
                "degree of T_i = qBinom(r,i,q^d)",
                || {
                    let field = FqContext::prime(q)?;
                    let p = first_prime(&field, d);
                    let base = (q as u64).pow(d as u32);
                    let mut bad = Vec::new();
                    for r in 1..=3usize {
                        let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                        for i in 0..=r {
                            let e: Vec<u32> = (0..r).map(|j| u32::from(j < i)).collect();
                            let n = alg.coset_degree(&IndexType::from_exponents(&p, &e)?)?;
                            if BigInt::from(n) != q_binomial(r as u32, i as u32, base)? {
                                bad.push((r, i, n));
                            }
                        }
                    }
                    Ok((bad.is_empty(), format!("bad (r,i,degree): {bad:?}")))
                },
            ));
        }
    }

    out.push(check(
        3,
        "hecke q-binomial alternating sum",
        "sum_i (-1)^i q^(d i(i-1)/2) qBinom(k,i) = 0 for k > 0",
        || {
            let mut bad = Vec::new();
            for base in [2u64, 3, 4, 8, 9] {
                for k in 1..=5u32 {
                    let mut s = BigInt::zero();
                    for i in 0..=k {
                        let term = BigInt::from(base).pow(i * i.saturating_sub(1) / 2)
                            * q_binomial(k, i, base)?;
                        s += if i % 2 == 0 { term } else { -term };
                    }
                    if !s.is_zero() {
                        bad.push((base, k));
                    }
                }
            }
            Ok((bad.is_empty(), format!("bad (base,k): {bad:?}")))
        },
    ));

    let pairs = if full { 50 } else { 10 };
    for &q in &qs {
        for r in [2usize, 3] {
            let tag = format!("q={q} r={r}");
            out.push(check(
                3,
                format!("hecke commutativity [{tag}, {pairs} pairs]"),
                "the Hecke ring is commutative",
                || {
                    let field = FqContext::prime(q)?;
                    let p = PolyA::t(&field);
                    let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (q as u64 * 31 + r as u64));
                    for _ in 0..pairs {
                        let x = random_element(&mut rng, r, &p, 2, 2)?;
                        let y = random_element(&mut rng, r, &p, 2, 2)?;
                        if alg.multiply(&x, &y)? != alg.multiply(&y, &x)? {
                            return Ok((false, format!("x = {x}, y = {y}")));
                        }
                    }
                    Ok((true, String::new()))
                },
            ));
        }
    }

    let coprime = if full { 20 } else { 5 };
    if !qs.is_empty() {
        out.push(check(
            3,
            format!("hecke coprime multiplicativity [{coprime} pairs]"),
            "T(a)T(b) = T(ab) for coprime determinants",
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xC0);
                for n in 0..coprime {
                    let q = qs[n % qs.len()];
                    let field = FqContext::prime(q)?;
                    let r = if n % 2 == 0 { 2 } else { 3 };
                    let primes = primes_up_to_degree_2(&field);
                    let p1 = primes.choose(&mut rng).expect("primes").clone();
                    let p2 = loop {
                        let c = primes.choose(&mut rng).expect("primes");
                        if *c != p1 {
                            break c.clone();
                        }
                    };
                    let cap = |p: &PolyA| if p.deg() == 2 && r == 3 { 1 } else { 2 };
                    let a = random_chain(&mut rng, r, &p1, cap(&p1))?;
                    let b = random_chain(&mut rng, r, &p2, cap(&p2))?;
                    let ab = IndexType::new(
                        a.divisors()
                            .iter()
                            .zip(b.divisors())
                            .map(|(x, y)| x * y)
                            .collect(),
                    )?;
                    let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                    let got = alg.multiply_types(&a, &b)?;
                    if got != HeckeElement::from_type(ab.clone()) {
                        return Ok((false, format!("{a:?} * {b:?} = {got}, expected T{ab:?}")));
                    }
                }
                Ok((true, String::new()))
            },
        ));
    }

    let psi_n = if full { 20 } else { 5 };
    for &q in &qs {
        out.push(check(
            3,
            format!("hecke Psi homomorphism [q={q}, {psi_n} products]"),
            "Psi(xy) = Psi(x)Psi(y)",
            || {
                let field = FqContext::prime(q)?;
                let p = PolyA::t(&field);
                let a3 = HeckeAlgebra::new(&field, 3, cfg.budget);
                let a2 = HeckeAlgebra::new(&field, 2, cfg.budget);
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (0x50 + q as u64));
                for _ in 0..psi_n {
                    let x = random_element(&mut rng, 3, &p, 2, 2)?;
                    let y = random_element(&mut rng, 3, &p, 2, 2)?;
                    let lhs = psi_map(&a3.multiply(&x, &y)?)?;
                    let rhs = a2.multiply(&psi_map(&x)?, &psi_map(&y)?)?;
                    if lhs != rhs {
                        return Ok((false, format!("x = {x}, y = {y}: {lhs} vs {rhs}")));
                    }
                }
                Ok((true, String::new()))
            },
        ));
    }

    let ranks: &[usize] = if full { &[2, 3] } else { &[2] };
    for &q in &qs {
        for &r in ranks {
            let tag = format!("q={q} r={r}");
            out.push(check(
                3,
                format!("hecke T_i * script-T_p^j [{tag}, i+j<=4]"),
                "T_i script-T_{p^j} = sum_k qBinom(k,i) (chains with k nonzero entries)",
                || {
                    let field = FqContext::prime(q)?;
                    let p = PolyA::t(&field);
                    let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                    for i in 1..=r.min(4) {
                        for j in 0..=(4 - i) as u32 {
                            let got = alg.multiply(&alg.t_gen(&p, i)?, &alg.script_t(&p, j)?)?;
                            let mut expect = HeckeElement::zero(r);
                            for t in index_types_with_det(&p.pow(i as u64 + j as u64), r)? {
                                let k = t.divisors().iter().filter(|x| !x.is_one()).count();
                                let c = q_binomial_or_zero(k as u32, i as u32, q as u64);
                                if !c.is_zero() {
                                    expect.add_term(t, c);
                                }
                            }
                            if got != expect {
                                return Ok((false, format!("i={i} j={j}: {got} vs {expect}")));
                            }
                        }
                    }
                    Ok((true, String::new()))
                },
            ));
            out.push(check(
                3,
                format!("hecke script-T recurrence [{tag}, k=r..r+2]"),
                "script-T_{p^k} = sum_i (-1)^(i+1) q^(d i(i-1)/2) T_i script-T_{p^(k-i)}",
                || {
                    let field = FqContext::prime(q)?;
                    let p = PolyA::t(&field);
                    let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                    for k in r as u32..=r as u32 + 2 {
                        let lhs = alg.script_t(&p, k)?;
                        let mut rhs = HeckeElement::zero(r);
                        for i in 1..=r as u32 {
                            let c = BigInt::from(q).pow(i * (i - 1) / 2);
                            let c = if i % 2 == 1 { c } else { -c };
                            let term = alg
                                .multiply(&alg.t_gen(&p, i as usize)?, &alg.script_t(&p, k - i)?)?;
                            rhs = rhs.add(&term.scale(&c));
                        }
                        if lhs != rhs {
                            return Ok((false, format!("k={k}: {rhs}")));
                        }
                    }
                    Ok((true, String::new()))
                },
            ));
            out.push(check(
                3,
                format!("hecke mod-p collapse [{tag}, k<=r+2]"),
                "script-T_{p^k} = (script-T_p)^k modulo the characteristic",
                || {
                    let field = FqContext::prime(q)?;
                    let p = PolyA::t(&field);
                    let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                    let tp = alg.script_t(&p, 1)?;
                    let mut power = tp.clone();
                    for k in 2..=r as u32 + 2 {
                        let step = alg.multiply(&tp, &alg.script_t(&p, k - 1)?)?.reduce_mod(q);
                        power = alg.multiply(&power, &tp)?;
                        let target = alg.script_t(&p, k)?.reduce_mod(q);
                        if step != target || power.reduce_mod(q) != target {
                            return Ok((
                                false,
                                format!("k={k}: {} / {}", step, power.reduce_mod(q)),
                            ));
                        }
                    }
                    Ok((true, String::new()))
                },
            ));
            let max_det = if full { 4 } else { 3 };
            out.push(check(
                3,
                format!("hecke express round-trip [{tag}, det deg<={max_det}]"),
                "every element is a polynomial in T_1..T_r",
                || {
                    let field = FqContext::prime(q)?;
                    let p = PolyA::t(&field);
                    let alg = HeckeAlgebra::new(&field, r, cfg.budget);
                    let mut n = 0;
                    for e in 0..=max_det {
                        for t in index_types_with_det(&p.pow(e), r)? {
                            let x = HeckeElement::from_term(t, BigInt::one());
                            let poly = express_in_generators(&alg, &x, &p)?;
                            if evaluate(&alg, &poly, &p)? != x {
                                return Ok((false, format!("{x} -> {poly}")));
                            }
                            n += 1;
                        }
                    }
                    Ok((true, format!("{n} types")))
                },
            ));
        }
    }
    out
}
