use std::fmt::Write as _;

use heckeft::cosets::enumerate_reps;
use heckeft::expansion::{
    eigenvalue_of, hecke_action, nonexample_coefficient, ExpansionContext, USeries,
};
use heckeft::goss::{
    goss_for_finite_lattice, goss_polynomials, ExpCoeffs, FiniteLattice, GossTable,
};
use heckeft::hecke::{express_in_generators, HeckeAlgebra, HeckeElement};
use heckeft::json;
use heckeft::lattice::{
    elementary_divisors, enumerate_sublattices, hermite_normal_form, Budget, IndexType,
    LatticeMatrix,
};
use heckeft::ring::Ring;
use heckeft::suite::{self, Scale, SuiteConfig};
use heckeft::{Field, LaurentSeries, PolyA, RationalFunction};
use serde_json::{json, Value};

use crate::{
    build_field, parse_budget, Cli, Command, Failure, FormName, Format, Global, HeckeCommand,
    LatticeCommand,
};

/// A report in both output modes.
struct Report {
    json: Value,
    text: String,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json.to_string(),
            Format::Text => self.text.trim_end().to_string(),
        }
    }
}

/// Runs the subcommand. On failure the second field holds whatever report was
/// produced before the failure was detected.
pub fn execute(cli: &Cli) -> Result<String, (Failure, String)> {
    let g = &cli.global;
    let res = (|| -> Result<(Report, bool), Failure> {
        let field = build_field(g)?;
        let budget = parse_budget(g)?;
        if g.prec < 1 || g.prec > max_prec(budget) {
            return Err(Failure::flag(
                "--prec",
                format!(
                    "must lie in 1..={} under the current budget",
                    max_prec(budget)
                ),
            ));
        }
        match &cli.command {
            Command::Goss { k_max, lattice, k } => {
                goss(&field, *k_max, lattice.as_deref(), *k, budget).map(|r| (r, true))
            }
            Command::Cosets { r, p } => cosets(&field, *r, p, budget).map(|r| (r, true)),
            Command::Hecke(h) => hecke(&field, h, budget).map(|r| (r, true)),
            Command::Lattice(l) => lattice(&field, l, budget).map(|r| (r, true)),
            Command::Expand { form, k, j, p, m } => {
                expand(&field, g, budget, *form, *k, *j, p.as_deref(), *m).map(|r| (r, true))
            }
            Command::Eigen { form, k, p, m } => {
                eigen(&field, g, budget, *form, *k, p, *m).map(|r| (r, true))
            }
            Command::Nonexample { m } => nonexample(&field, g, budget, *m),
            Command::Verify => verify(g, budget),
        }
    })();
    match res {
        Ok((report, true)) => Ok(report.render(g.format)),
        Ok((report, false)) => Err((Failure::Check, report.render(g.format))),
        Err(f) => Err((f, String::new())),
    }
}

/// Largest u-truncation a budget allows.
fn max_truncation(b: Budget) -> usize {
    (b.0 / 2000).clamp(8, 100_000) as usize
}

fn max_prec(b: Budget) -> i64 {
    (b.0 / 1000).clamp(60, 100_000) as i64
}

fn parse_poly(field: &Field, s: &str, flag: &str) -> Result<PolyA, Failure> {
    PolyA::parse(field, s).map_err(|e| Failure::flag(flag, e))
}

fn parse_prime(field: &Field, s: &str, flag: &str) -> Result<PolyA, Failure> {
    let p = parse_poly(field, s, flag)?;
    if p.deg() < 1 || !p.is_monic() || !p.is_irreducible() {
        return Err(Failure::flag(
            flag,
            format!("{p} is not a monic irreducible"),
        ));
    }
    Ok(p)
}

fn parse_element(field: &Field, s: &str, r: usize, what: &str) -> Result<HeckeElement, Failure> {
    let x = HeckeElement::parse(field, s).map_err(|e| Failure::flag(what, e))?;
    if x.rank() != r {
        return Err(Failure::flag(
            what,
            format!("has rank {}, but --r is {r}", x.rank()),
        ));
    }
    Ok(x)
}

fn goss_report<C: Ring>(table: &GossTable<C>, only: Option<usize>) -> Report {
    let mut rows = Vec::new();
    let mut text = String::new();
    for k in 1..=table.max_index() {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let g = table.get(k as i64);
        rows.push(json!({"k": k, "coeffs": json::xpoly_to_json(g)}));
        let _ = writeln!(text, "G_{k} = {g}");
    }
    Report {
        json: json!({"polys": rows}),
        text,
    }
}

fn goss(
    field: &Field,
    k_max: usize,
    lattice: Option<&str>,
    only: Option<usize>,
    budget: Budget,
) -> Result<Report, Failure> {
    if k_max == 0 || k_max as u128 > budget.0 / 100 {
        return Err(Failure::flag(
            "--K",
            format!(
                "must lie in 1..={} under the current budget",
                budget.0 / 100
            ),
        ));
    }
    if only.is_some_and(|k| k == 0 || k > k_max) {
        return Err(Failure::flag("--k", "must lie in 1..=K"));
    }
    let q = field.order();
    let Some(spec) = lattice else {
        let mut n = 0;
        while (q as usize).pow(n + 1) <= k_max {
            n += 1;
        }
        let coeffs = ExpCoeffs::generic(q, field.characteristic(), n.max(1) as usize);
        let mut r = goss_report(&goss_polynomials(&coeffs, k_max), only);
        r.json["q"] = json!(q);
        r.json["K"] = json!(k_max);
        r.json["lattice"] = json!("generic");
        return Ok(r);
    };
    let basis = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| RationalFunction::parse(field, s))
        .collect::<heckeft::Result<Vec<_>>>()
        .map_err(|e| Failure::flag("--lattice", e))?;
    budget
        .check((q as u128).saturating_pow(basis.len() as u32))
        .map_err(Failure::from)?;
    let l = FiniteLattice::new(q, &RationalFunction::one(field), basis.clone())
        .map_err(|e| Failure::flag("--lattice", e))?;
    let mut r = goss_report(&goss_for_finite_lattice(&l, k_max), only);
    r.json["q"] = json!(q);
    r.json["K"] = json!(k_max);
    r.json["lattice"] = json!(basis.iter().map(|b| b.to_string()).collect::<Vec<_>>());
    Ok(r)
}

fn cosets(field: &Field, r: usize, p: &str, budget: Budget) -> Result<Report, Failure> {
    let p = parse_prime(field, p, "--p")?;
    if r == 0 {
        return Err(Failure::flag("--r", "must be at least 1"));
    }
    let qd = (field.order() as u128).saturating_pow(p.deg() as u32);
    let count = (0..r as u32).fold(0u128, |acc, m| acc.saturating_add(qd.saturating_pow(m)));
    budget.check(count)?;
    let reps = enumerate_reps(r, &p)?;
    let mut text = String::new();
    for x in &reps {
        let b: Vec<String> = x.b.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(text, "m={} b=[{}]", x.m, b.join(", "));
    }
    Ok(Report {
        json: Value::Array(reps.iter().map(json::coset_rep_to_json).collect()),
        text,
    })
}

fn hecke_report(x: &HeckeElement) -> Report {
    Report {
        json: json::hecke_to_json(x),
        text: x.to_string(),
    }
}

fn hecke(field: &Field, cmd: &HeckeCommand, budget: Budget) -> Result<Report, Failure> {
    match cmd {
        HeckeCommand::Mul { r, x, y } => {
            let alg = HeckeAlgebra::new(field, *r, budget);
            let x = parse_element(field, x, *r, "first operand")?;
            let y = parse_element(field, y, *r, "second operand")?;
            Ok(hecke_report(&alg.multiply(&x, &y)?))
        }
        HeckeCommand::Express { r, p, x } => {
            let alg = HeckeAlgebra::new(field, *r, budget);
            let p = parse_prime(field, p, "--p")?;
            let x = parse_element(field, x, *r, "element")?;
            let g = express_in_generators(&alg, &x, &p)?;
            Ok(Report {
                json: json::genpoly_to_json(&g),
                text: g.to_string(),
            })
        }
        HeckeCommand::Tn { r, n } => {
            let alg = HeckeAlgebra::new(field, *r, budget);
            let n = parse_poly(field, n, "N")?;
            if n.deg() < 1 || !n.is_monic() {
                return Err(Failure::flag("N", "must be monic of positive degree"));
            }
            Ok(hecke_report(&alg.script_t_composite(&n)?))
        }
    }
}

fn lattice(field: &Field, cmd: &LatticeCommand, budget: Budget) -> Result<Report, Failure> {
    match cmd {
        LatticeCommand::Snf { rows } => {
            let rows: Vec<Vec<&str>> = rows
                .split(';')
                .map(|r| r.split(',').map(str::trim).collect())
                .collect();
            let m = LatticeMatrix::parse(field, &rows).map_err(|e| Failure::flag("rows", e))?;
            let h = hermite_normal_form(&m)?;
            let d = elementary_divisors(&m)?;
            let divs: Vec<String> = d.divisors().iter().map(|x| x.to_string()).collect();
            Ok(Report {
                json: json!({"hnf": json::matrix_to_json(&h), "divisors": json::index_type_to_json(&d)["divisors"]}),
                text: format!("hnf {h}\ndivisors ({})", divs.join(", ")),
            })
        }
        LatticeCommand::Enum { index_type } => {
            let t = IndexType::parse(field, index_type).map_err(|e| Failure::flag("--type", e))?;
            let ls = enumerate_sublattices(&t, budget)?;
            let mut text = format!("{} sublattices\n", ls.len());
            for l in &ls {
                let _ = writeln!(text, "{l}");
            }
            Ok(Report {
                json: json!({"type": json::index_type_to_json(&t), "count": ls.len(), "lattices": ls.iter().map(json::matrix_to_json).collect::<Vec<_>>()}),
                text,
            })
        }
    }
}

fn context(
    field: &Field,
    g: &Global,
    budget: Budget,
    m: usize,
) -> Result<ExpansionContext, Failure> {
    if m == 0 || m > max_truncation(budget) {
        return Err(Failure::flag(
            "--M",
            format!(
                "must lie in 1..={} under the current budget",
                max_truncation(budget)
            ),
        ));
    }
    Ok(ExpansionContext::new(field, m, g.prec)?)
}

/// `c` cut to `prec` digits below its leading term, or known to t^-prec if zero.
/// Exact values are kept.
fn shown(c: &LaurentSeries, prec: i64) -> LaurentSeries {
    if c.is_exact() {
        c.clone()
    } else if c.is_zero() {
        c.truncate(-prec)
    } else {
        c.with_relative_precision(prec)
    }
}

fn shown_series(f: &USeries, prec: i64) -> USeries {
    let coeffs = f.coeffs().iter().map(|c| shown(c, prec)).collect();
    USeries::new(f.field(), f.weight(), f.truncation(), coeffs)
}

fn useries_text(name: &str, f: &USeries) -> String {
    let mut s = format!(
        "{name}: weight {}, known to u^{}\n",
        f.weight(),
        f.truncation()
    );
    for (n, c) in f.coeffs().iter().enumerate() {
        if !c.is_exact_zero() {
            let _ = writeln!(s, "  u^{n}: {c}");
        }
    }
    s
}

fn named_form(
    ctx: &ExpansionContext,
    form: FormName,
    k: Option<u32>,
) -> Result<(String, USeries), Failure> {
    Ok(match form {
        FormName::G1 => ("g_1".into(), ctx.g1()?),
        FormName::Delta => ("Delta".into(), ctx.delta()?),
        FormName::Delta2 => {
            let d = ctx.delta()?;
            ("Delta^2".into(), d.mul(&d))
        }
        FormName::Eisenstein => {
            let k = k.ok_or_else(|| Failure::flag("--k", "required for the Eisenstein series"))?;
            if k == 0 {
                return Err(Failure::flag("--k", "must be positive"));
            }
            (format!("E^{k}"), ctx.eisenstein(k)?)
        }
        FormName::Alpha => {
            return Err(Failure::flag(
                "--form",
                "alpha has no Hecke action here; use expand",
            ))
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn expand(
    field: &Field,
    g: &Global,
    budget: Budget,
    form: FormName,
    k: Option<u32>,
    j: Option<usize>,
    p: Option<&str>,
    m: usize,
) -> Result<Report, Failure> {
    let ctx = context(field, g, budget, m)?;
    if form == FormName::Alpha {
        if p.is_some() {
            return Err(Failure::flag("--p", "not available for alpha"));
        }
        let q = field.order() as usize;
        let j = j.ok_or_else(|| Failure::flag("--J", "required for alpha"))?;
        let mut imax = 0u32;
        while (q.pow(imax + 2) - 1) / (q - 1) <= j {
            imax += 1;
        }
        if imax == 0 {
            return Err(Failure::flag(
                "--J",
                format!("must be at least q + 1 = {}", q + 1),
            ));
        }
        let weights: Vec<u32> = (1..=j as u32).map(|i| i * (q as u32 - 1)).collect();
        let eis = ctx.eisenstein_family(&weights)?;
        let mut inv = ctx.lattice_series_inversion(&eis, imax)?;
        inv.alpha = inv.alpha.iter().map(|a| shown_series(a, g.prec)).collect();
        let mut text = String::new();
        for (i, a) in inv.alpha.iter().enumerate() {
            text.push_str(&useries_text(&format!("alpha_{i}"), a));
        }
        return Ok(Report {
            json: json!({"form": "alpha", "J": j, "alpha": inv.alpha.iter().map(json::useries_to_json).collect::<Vec<_>>()}),
            text,
        });
    }
    let (name, f) = named_form(&ctx, form, k)?;
    let fs = shown_series(&f, g.prec);
    let mut text = useries_text(&name, &fs);
    let mut out = json!({"form": name, "series": json::useries_to_json(&fs)});
    if let Some(p) = p {
        let p = parse_prime(field, p, "--p")?;
        let tf = shown_series(&hecke_action(&ctx, &f, &p)?, g.prec);
        text.push_str(&useries_text(&format!("T_{p} {name}"), &tf));
        out["hecke"] = json!({"p": p.to_string(), "series": json::useries_to_json(&tf)});
    }
    Ok(Report { json: out, text })
}

fn eigen(
    field: &Field,
    g: &Global,
    budget: Budget,
    form: FormName,
    k: Option<u32>,
    p: &str,
    m: usize,
) -> Result<Report, Failure> {
    let ctx = context(field, g, budget, m)?;
    let p = parse_prime(field, p, "--p")?;
    let (name, f) = named_form(&ctx, form, k)?;
    let tf = hecke_action(&ctx, &f, &p)?;
    let e = eigenvalue_of(&f, &tf, &p)?;
    let window = f.truncation().min(tf.truncation());
    let (json, text) = match &e {
        Some(e) => {
            let (c, cpk) = (shown(&e.c, g.prec), shown(&e.c_times_pk, g.prec));
            (
                json!({"form": name, "p": p.to_string(), "window": window, "eigenform": true, "c": c.to_string(), "c_times_pk": cpk.to_string(), "pivot": e.pivot}),
                format!(
                    "{name} is an eigenform of T_{p} through u^{window}\nc = {c}\nc p^k = {cpk}"
                ),
            )
        }
        None => (
            json!({"form": name, "p": p.to_string(), "window": window, "eigenform": false}),
            format!("{name} is not an eigenform of T_{p} (checked through u^{window})"),
        ),
    };
    Ok(Report { json, text })
}

fn nonexample(
    field: &Field,
    g: &Global,
    budget: Budget,
    m: Option<usize>,
) -> Result<(Report, bool), Failure> {
    let q = field.order() as usize;
    let m = m.unwrap_or(q * (2 * q - 2).max(1) + q);
    let ctx = context(field, g, budget, m)?;
    let ne = nonexample_coefficient(&ctx)?;
    let eig = eigenvalue_of(&ne.f, &ne.tf, &PolyA::t(field))?;
    let agree = ne.coefficient.agrees_with(&ne.predicted);
    let ok = if field.characteristic() == 2 {
        agree && ne.coefficient.is_zero()
    } else {
        agree && !ne.coefficient.is_zero() && eig.is_none()
    };
    let json = json!({
        "q": ne.q,
        "index": q - 1,
        "coefficient": shown(&ne.coefficient, g.prec).to_string(),
        "predicted": shown(&ne.predicted, g.prec).to_string(),
        "lambda": shown(&ne.lambda, g.prec).to_string(),
        "agree": agree,
        "eigenform": eig.is_some(),
        "passed": ok,
    });
    let text = format!(
        "u^{} coefficient of T_t(Delta^2): {}\nclosed form: {}\nagree {agree}, eigenform {}\n{}",
        q - 1,
        shown(&ne.coefficient, g.prec),
        shown(&ne.predicted, g.prec),
        eig.is_some(),
        if ok { "PASS" } else { "FAIL" }
    );
    Ok((Report { json, text }, ok))
}

fn verify(g: &Global, budget: Budget) -> Result<(Report, bool), Failure> {
    let cfg = SuiteConfig {
        qs: vec![g.q],
        scale: if budget.0 <= Budget::SMALL.0 {
            Scale::Small
        } else {
            Scale::Full
        },
        seed: g.seed,
        budget,
        prec: g.prec,
    };
    let checks = suite::run(&cfg);
    if checks.is_empty() {
        return Err(Failure::flag("--q", format!("no checks cover q = {}", g.q)));
    }
    let ok = suite::all_passed(&checks);
    Ok((
        Report {
            json: suite::checks_to_json(&checks),
            text: suite::render_table(&checks),
        },
        ok,
    ))
}
