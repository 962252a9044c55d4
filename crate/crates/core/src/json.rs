//! JSON encodings of the library's values. Every `*_to_json` has a matching
//! parser so payloads round-trip.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::cosets::CosetRep;
use crate::error::{Error, Result};
use crate::expansion::USeries;
use crate::field::Field;
use crate::hecke::{GenPoly, HeckeElement};
use crate::lattice::{IndexType, LatticeMatrix};
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;
use crate::ring::{Ring, XPoly};

fn bad(what: &str) -> Error {
    Error::Parse(format!("malformed JSON: {what}"))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(what))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(what)))
        .collect()
}

fn polys(field: &Field, v: &Value, what: &str) -> Result<Vec<PolyA>> {
    strings(v, what)?
        .iter()
        .map(|s| PolyA::parse(field, s))
        .collect()
}

fn rows_json(m: &LatticeMatrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| json!(x.to_string())).collect()))
            .collect(),
    )
}

fn rows_from(field: &Field, v: &Value) -> Result<LatticeMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("rows"))?
        .iter()
        .map(|row| polys(field, row, "row"))
        .collect::<Result<Vec<_>>>()?;
    LatticeMatrix::new(rows)
}

pub fn matrix_to_json(m: &LatticeMatrix) -> Value {
    json!({"r": m.rank(), "rows": rows_json(m)})
}

pub fn matrix_from_json(field: &Field, v: &Value) -> Result<LatticeMatrix> {
    rows_from(field, &v["rows"])
}

pub fn index_type_to_json(t: &IndexType) -> Value {
    json!({"divisors": t.divisors().iter().map(|d| d.to_string()).collect::<Vec<_>>()})
}

pub fn index_type_from_json(field: &Field, v: &Value) -> Result<IndexType> {
    IndexType::new(polys(field, &v["divisors"], "divisors")?)
}

fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(x) => json!(x),
        None => json!(c.to_string()),
    }
}

fn bigint_from(v: &Value) -> Result<BigInt> {
    if let Some(x) = v.as_i64() {
        return Ok(BigInt::from(x));
    }
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("coeff"))
}

/// Terms in descending order of index type.
pub fn hecke_to_json(x: &HeckeElement) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(t, c)| json!({"coeff": bigint_json(c), "divisors": t.divisors().iter().map(|d| d.to_string()).collect::<Vec<_>>()}))
        .collect();
    json!({"r": x.rank(), "terms": terms})
}

/// `r` may be omitted when there is at least one term.
pub fn hecke_from_json(field: &Field, v: &Value) -> Result<HeckeElement> {
    let terms = v["terms"].as_array().ok_or_else(|| bad("terms"))?;
    let r = match v["r"].as_u64() {
        Some(r) => r as usize,
        None => terms
            .first()
            .and_then(|t| t["divisors"].as_array())
            .map(Vec::len)
            .ok_or_else(|| bad("r"))?,
    };
    let mut x = HeckeElement::zero(r);
    for term in terms {
        let t = IndexType::new(polys(field, &term["divisors"], "divisors")?)?;
        if t.rank() != r {
            return Err(Error::RankMismatch(r, t.rank()));
        }
        x.add_term(t, bigint_from(&term["coeff"])?);
    }
    Ok(x)
}

pub fn genpoly_to_json(p: &GenPoly) -> Value {
    json!({"r": p.rank(), "poly": p.to_string()})
}

pub fn genpoly_from_json(v: &Value) -> Result<GenPoly> {
    let r = v["r"].as_u64().ok_or_else(|| bad("r"))? as usize;
    GenPoly::parse(r, v["poly"].as_str().ok_or_else(|| bad("poly"))?)
}

pub fn coset_rep_to_json(x: &CosetRep) -> Value {
    json!({
        "m": x.m,
        "b": x.b.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "matrix": rows_json(&x.matrix),
    })
}

pub fn coset_rep_from_json(field: &Field, p: &PolyA, v: &Value) -> Result<CosetRep> {
    let m = v["m"].as_u64().ok_or_else(|| bad("m"))? as usize;
    let b = polys(field, &v["b"], "b")?;
    let matrix = rows_from(field, &v["matrix"])?;
    let rep = CosetRep::new(matrix.rank(), p, m, b)?;
    if rep.matrix != matrix {
        return Err(bad("matrix does not match (m, b)"));
    }
    Ok(rep)
}

/// Coefficient strings indexed by exponent.
pub fn xpoly_to_json<C: Ring>(p: &XPoly<C>) -> Value {
    Value::Array(p.coeffs().iter().map(|c| json!(c.to_string())).collect())
}

pub fn xpoly_from_json<C: Ring>(
    zero: &C,
    v: &Value,
    parse: impl Fn(&str) -> Result<C>,
) -> Result<XPoly<C>> {
    let coeffs = strings(v, "coefficients")?
        .iter()
        .map(|s| parse(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(XPoly::new(zero, coeffs))
}

/// Coefficients that are not exact zeros, as Laurent text.
pub fn useries_to_json(f: &USeries) -> Value {
    let coeffs: Vec<Value> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_exact_zero())
        .map(|(n, c)| json!({"n": n, "value": c.to_string()}))
        .collect();
    json!({"weight": f.weight(), "truncation": f.truncation(), "coeffs": coeffs})
}

pub fn useries_from_json(field: &Field, v: &Value) -> Result<USeries> {
    let weight = v["weight"].as_i64().ok_or_else(|| bad("weight"))?;
    let m = v["truncation"].as_u64().ok_or_else(|| bad("truncation"))? as usize;
    let mut coeffs = vec![LaurentSeries::zero(field); m + 1];
    for c in v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))? {
        let n = c["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        if n > m {
            return Err(bad("coefficient index beyond truncation"));
        }
        coeffs[n] = LaurentSeries::parse(field, c["value"].as_str().ok_or_else(|| bad("value"))?)?;
    }
    Ok(USeries::new(field, weight, m, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::enumerate_reps;
    use crate::field::FqContext;
    use crate::ratfunc::RationalFunction;

    #[test]
    fn round_trips() {
        let f = FqContext::prime(2).unwrap();
        let x = HeckeElement::parse(&f, "T(t^2,1) + 3*T(t,t)").unwrap();
        let v = hecke_to_json(&x);
        assert_eq!(
            v.to_string(),
            r#"{"r":2,"terms":[{"coeff":1,"divisors":["t^2","1"]},{"coeff":3,"divisors":["t","t"]}]}"#
        );
        assert_eq!(hecke_from_json(&f, &v).unwrap(), x);
        let bare: Value = serde_json::from_str(
            r#"{"terms":[{"coeff":1,"divisors":["t^2","1"]},{"coeff":3,"divisors":["t","t"]}]}"#,
        )
        .unwrap();
        assert_eq!(hecke_from_json(&f, &bare).unwrap(), x);
        let m = LatticeMatrix::parse(&f, &[vec!["t", "1"], vec!["0", "1"]]).unwrap();
        assert_eq!(
            matrix_to_json(&m).to_string(),
            r#"{"r":2,"rows":[["t","1"],["0","1"]]}"#
        );
        assert_eq!(matrix_from_json(&f, &matrix_to_json(&m)).unwrap(), m);
        let t = PolyA::t(&f);
        for rep in enumerate_reps(3, &t).unwrap() {
            assert_eq!(
                coset_rep_from_json(&f, &t, &coset_rep_to_json(&rep)).unwrap(),
                rep
            );
        }
        let ty = IndexType::parse(&f, "(t^2,1)").unwrap();
        assert_eq!(
            index_type_from_json(&f, &index_type_to_json(&ty)).unwrap(),
            ty
        );
        let g = GenPoly::parse(2, "T1^2 - 3*T2").unwrap();
        assert_eq!(genpoly_from_json(&genpoly_to_json(&g)).unwrap(), g);
        let xp = XPoly::new(
            &RationalFunction::zero(&f),
            vec![
                RationalFunction::zero(&f),
                RationalFunction::parse(&f, "1/t").unwrap(),
                RationalFunction::one(&f),
            ],
        );
        let back = xpoly_from_json(&RationalFunction::zero(&f), &xpoly_to_json(&xp), |s| {
            RationalFunction::parse(&f, s)
        })
        .unwrap();
        assert_eq!(back, xp);
        let u = USeries::new(
            &f,
            3,
            4,
            vec![
                LaurentSeries::parse(&f, "1 + t^-1 + O(t^-5)").unwrap(),
                LaurentSeries::big_o(&f, -3),
            ],
        );
        assert_eq!(useries_from_json(&f, &useries_to_json(&u)).unwrap(), u);
    }
}
