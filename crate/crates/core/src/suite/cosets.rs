use num_bigint::BigInt;

use super::{check, first_prime, Check, Scale, SuiteConfig};
use crate::cosets::{classify, enumerate_reps, verify_partition};
use crate::field::FqContext;
use crate::hecke::q_binomial;

pub fn coset_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let samples = match cfg.scale {
        Scale::Full => 500,
        Scale::Small => 100,
    };
    let mut out = Vec::new();
    for q in [2u32, 3] {
        if !cfg.covers(q) {
            continue;
        }
        for r in [2usize, 3] {
            for d in [1usize, 2] {
                let tag = format!("r={r} d={d} q={q}");
                out.push(check(
                    2,
                    format!("coset count [{tag}]"),
                    "number of representatives = qBinom(r,1,q^d)",
                    || {
                        let field = FqContext::prime(q)?;
                        let p = first_prime(&field, d);
                        let n = enumerate_reps(r, &p)?.len();
                        let sum: u64 = (1..=r as u32)
                            .map(|m| (q as u64).pow(d as u32 * (m - 1)))
                            .sum();
                        let qb = q_binomial(r as u32, 1, (q as u64).pow(d as u32))?;
                        let ok = n as u64 == sum && BigInt::from(n) == qb;
                        Ok((ok, format!("enumerated {n}, sum {sum}, qBinom {qb}")))
                    },
                ));
                out.push(check(2, format!("coset partition [{tag}, {samples} samples]"), "classify covers the double coset, no label collisions", || {
                    let field = FqContext::prime(q)?;
                    let p = first_prime(&field, d);
                    let reps = enumerate_reps(r, &p)?;
                    let fixed = reps.iter().all(|x| classify(&x.matrix, &p).map(|y| y == *x).unwrap_or(false));
                    let report = verify_partition(r, &p, samples, cfg.seed)?;
                    let ok = fixed && report.ok();
                    Ok((
                        ok,
                        format!(
                            "fixed point {fixed}, classified {}/{}, labels distinct {}, failures {:?}",
                            report.classified,
                            report.samples,
                            report.labels_distinct,
                            report.failures.first()
                        ),
                    ))
                }));
            }
        }
    }
    out
}
