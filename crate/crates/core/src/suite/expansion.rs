use super::{check, Check, SuiteConfig};
use crate::error::Result;
use crate::expansion::{
    congruence_violations, eigenvalue_of, hecke_action, nonexample_coefficient, ExpansionContext,
    USeries,
};
use crate::field::FqContext;
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;

/// Input truncation giving an output window of at least 3(q²−1) for deg p = 1.
pub fn acceptance_truncation(q: u32) -> usize {
    3 * (q as usize * q as usize - 1) * q as usize
}

/// With a nonzero constant term, (Tf)_0 = p^-k f_0 would make the eigenvalue
/// of g_1 equal p^-k, while the eigenform check requires c p^k = p^(q-1).
const CONSTANT_TERM_CONFLICT: &str =
    "(Tf)_0 = f_0 is what makes g_1 an eigenform with c p^k = p^(q-1); p^-k f_0 contradicts that when f_0 != 0";

/// p^e as a Laurent series, for any integer e.
fn p_power(ctx: &ExpansionContext, p: &PolyA, e: i64) -> Result<LaurentSeries> {
    let x = LaurentSeries::from_poly(&p.pow(e.unsigned_abs()));
    if e >= 0 {
        Ok(x)
    } else {
        x.recip_to(2 * ctx.rank1().n_abs())
    }
}

pub fn expansion_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        if !cfg.covers(q) {
            continue;
        }
        let ctx = match FqContext::prime(q)
            .and_then(|f| ExpansionContext::new(&f, acceptance_truncation(q), cfg.prec))
        {
            Ok(c) => c,
            Err(e) => {
                out.push(check(
                    4,
                    format!("expansion context [q={q}]"),
                    "context construction",
                    || Err(e),
                ));
                continue;
            }
        };
        out.extend(form_checks(&ctx));
        for p in ["t", "t+1"] {
            out.extend(action_checks(&ctx, p));
        }
    }
    out
}

fn form_checks(ctx: &ExpansionContext) -> Vec<Check> {
    let q = ctx.q();
    let f = ctx.field().clone();
    let tag = format!("q={q} M={} prec={}", ctx.truncation(), ctx.prec());
    let mut out = Vec::new();
    out.push(check(
        4,
        format!("(a) rank-1 alpha_i dual methods [{tag}]"),
        "product and recursive formulas for alpha_i(A) agree",
        || {
            ctx.rank1().check_dual_methods()?;
            let inv = ctx.alphas(2)?;
            for i in 0..=2 {
                if !inv.alpha[i].coeff(0).agrees_with(&ctx.rank1().alpha(i)) {
                    return Ok((
                        false,
                        format!("constant term of rank-2 alpha_{i} differs from rank 1"),
                    ));
                }
            }
            if let Some((n, r)) = inv
                .stray
                .iter()
                .find(|(_, r)| r.coeffs().iter().any(|c| !c.is_zero()))
            {
                return Ok((false, format!("stray R_{n} = {r}")));
            }
            Ok((true, String::new()))
        },
    ));
    out.push(check(
        4,
        format!("(b) phi_t o phi_t = phi_t^2 [{tag}]"),
        "coefficient forms compose like the module",
        || {
            let t = PolyA::t(&f);
            let g = ctx.coefficient_forms(&t)?;
            let g2 = ctx.coefficient_forms(&t.pow(2))?;
            for (i, lhs) in g2.iter().enumerate() {
                let mut rhs = USeries::zero(&f, lhs.weight(), ctx.truncation());
                for j in 0..=i.min(2) {
                    if i - j <= 2 {
                        rhs = rhs.add(&g[j].mul(&g[i - j].frobenius_q(j as u32)));
                    }
                }
                if let Some(n) = lhs.first_disagreement(&rhs) {
                    return Ok((false, format!("g_{i}(t^2) differs at u^{n}")));
                }
            }
            Ok((true, format!("{} coefficients", g2.len())))
        },
    ));
    out.push(check(
        4,
        format!("(c) congruence sieve [{tag}]"),
        "f_m = 0 unless (q-1) | m and m = 0 or -1 mod q",
        || {
            let mut forms: Vec<(String, USeries)> = Vec::new();
            for j in 1..=3u32 {
                let k = q.pow(j) - 1;
                forms.push((format!("E^{k}"), ctx.eisenstein(k)?));
            }
            for a in ["t", "t+1", "t^2"] {
                let a = PolyA::parse(&f, a)?;
                for (i, g) in ctx.coefficient_forms(&a)?.into_iter().enumerate().skip(1) {
                    forms.push((format!("g_{i}({a})"), g));
                }
            }
            for (name, x) in &forms {
                let bad = congruence_violations(x, q);
                if !bad.is_empty() {
                    return Ok((false, format!("{name} nonzero at {bad:?}")));
                }
            }
            Ok((true, format!("{} forms", forms.len())))
        },
    ));
    out.push(check(
        4,
        format!("(d) constant terms of g_1, g_2 [{tag}]"),
        "g_2(t) has constant term 0, g_1(t) the rank-1 value",
        || {
            let t = PolyA::t(&f);
            let g = ctx.coefficient_forms(&t)?;
            let phi = ctx.rank1().module(&t)?;
            let ok1 = g[1].coeff(0).agrees_with(&phi.g[1]);
            let ok2 = g[2].coeff(0).is_zero();
            Ok((
                ok1 && ok2,
                format!(
                    "g_1(0) = {}, rank 1 = {}, g_2(0) = {}",
                    g[1].coeff(0),
                    phi.g[1],
                    g[2].coeff(0)
                ),
            ))
        },
    ));
    out
}

fn action_checks(ctx: &ExpansionContext, p_text: &str) -> Vec<Check> {
    let q = ctx.q();
    let f = ctx.field().clone();
    let tag = format!("q={q} p={p_text}");
    let prepared = (|| -> Result<_> {
        let p = PolyA::parse(&f, p_text)?;
        let g1 = ctx.g1()?;
        let delta = ctx.delta()?;
        let delta2 = delta.mul(&delta);
        let mut rows = Vec::new();
        for (name, x) in [("g_1", g1), ("Delta", delta), ("Delta^2", delta2)] {
            let tx = hecke_action(ctx, &x, &p)?;
            rows.push((name, x, tx));
        }
        Ok((p, rows))
    })();
    let (p, rows) = match prepared {
        Ok(x) => x,
        Err(e) => {
            return vec![check(
                4,
                format!("hecke_action [{tag}]"),
                "Hecke action on g_1, Delta, Delta^2",
                || Err(e),
            )]
        }
    };
    let mut out = Vec::new();
    for (name, x, tx) in &rows {
        let k = x.weight();
        let constant = check(
            4,
            format!("(e) (Tf)_0 = p^-k f_0 [{tag} f={name}]"),
            "constant term of Tf",
            || {
                let want = &p_power(ctx, &p, -k)? * x.coeff(0);
                Ok((
                    tx.coeff(0).agrees_with(&want),
                    format!("(Tf)_0 = {}, p^-k f_0 = {want}", tx.coeff(0)),
                ))
            },
        );
        out.push(if x.coeff(0).is_zero() {
            constant
        } else {
            constant.with_conflict(CONSTANT_TERM_CONFLICT)
        });
        out.push(check(
            4,
            format!("(e) (Tf)_1 = p^(1-k) f_1 [{tag} f={name}]"),
            "linear term of Tf",
            || {
                let want = &p_power(ctx, &p, 1 - k)? * x.coeff(1);
                Ok((
                    tx.coeff(1).agrees_with(&want),
                    format!("(Tf)_1 = {}, p^(1-k) f_1 = {want}", tx.coeff(1)),
                ))
            },
        ));
        out.push(check(
            4,
            format!("(g) cusp order kept [{tag} f={name}]"),
            "T maps cusp forms to cusp forms and double cusp forms to double cusp forms",
            || {
                let need = x.order().unwrap_or(usize::MAX).min(2);
                let got = tx.order().unwrap_or(usize::MAX);
                Ok((
                    got >= need,
                    format!("ord f = {:?}, ord Tf = {:?}", x.order(), tx.order()),
                ))
            },
        ));
    }
    for (name, x, tx) in rows.iter().filter(|(n, _, _)| *n != "Delta^2") {
        out.push(check(
            4,
            format!("(f) eigenform [{tag} f={name}]"),
            "c p^k = p^(q-1) for g_1 and Delta",
            || {
                let target = LaurentSeries::from_poly(&p.pow(q as u64 - 1));
                match eigenvalue_of(x, tx, &p)? {
                    None => Ok((false, "not an eigenform".into())),
                    Some(e) => {
                        let precise = e
                            .c_times_pk
                            .relative_precision()
                            .is_none_or(|r| r >= ctx.prec());
                        Ok((
                            e.c_times_pk.agrees_with(&target) && precise,
                            format!("c p^k = {}, window {}", e.c_times_pk, tx.truncation()),
                        ))
                    }
                }
            },
        ));
    }
    out
}

pub fn nonexample_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    if cfg.covers(3) {
        out.push(check(
            5,
            "nonexample q=3 p=t",
            "u^2 coefficient of T_t(Delta^2) is nonzero and matches the closed form",
            || {
                let f = FqContext::prime(3)?;
                let ctx = ExpansionContext::new(&f, 24, cfg.prec)?;
                let ne = nonexample_coefficient(&ctx)?;
                let eig = eigenvalue_of(&ne.f, &ne.tf, &PolyA::t(&f))?;
                let ok = !ne.coefficient.is_zero()
                    && ne.coefficient.agrees_with(&ne.predicted)
                    && eig.is_none();
                Ok((
                    ok,
                    format!(
                        "coefficient {}, closed form {}, eigen {}",
                        ne.coefficient,
                        ne.predicted,
                        eig.is_some()
                    ),
                ))
            },
        ));
    }
    if cfg.covers(2) {
        out.push(check(
            5,
            "nonexample q=2 p=t",
            "the corresponding coefficient vanishes for q = 2",
            || {
                let f = FqContext::prime(2)?;
                let ctx = ExpansionContext::new(&f, 9, cfg.prec)?;
                let ne = nonexample_coefficient(&ctx)?;
                Ok((
                    ne.coefficient.is_zero() && ne.predicted.is_zero(),
                    format!("coefficient {}", ne.coefficient),
                ))
            },
        ));
    }
    out
}
