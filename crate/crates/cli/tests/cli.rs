use std::process::{Command, Output};

use heckeft::expansion::USeries;
use heckeft::json;
use heckeft::{FqContext, PolyA};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckeft"))
        .args(args)
        .env_remove("HECKEFT_BUDGET")
        .env_remove("HECKEFT_PREC")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cosets_rank3_over_f2() {
    let v = json_of(&["cosets", "--q", "2", "--r", "3", "--p", "t"]);
    let reps = v.as_array().unwrap();
    assert_eq!(reps.len(), 7);
    let field = FqContext::prime(2).unwrap();
    let p = PolyA::t(&field);
    for r in reps {
        let x = json::coset_rep_from_json(&field, &p, r).unwrap();
        assert_eq!(json::coset_rep_to_json(&x), *r);
    }
}

#[test]
fn hecke_mul_square_of_t1() {
    let out = run(&["hecke", "mul", "--q", "2", "--r", "2", "T(t,1)", "T(t,1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"r":2,"terms":[{"coeff":1,"divisors":["t^2","1"]},{"coeff":3,"divisors":["t","t"]}]}"#
    );
}

#[test]
fn hecke_json_round_trips() {
    let field = FqContext::prime(3).unwrap();
    for args in [
        vec![
            "hecke", "mul", "--q", "3", "--r", "3", "T(t,1,1)", "T(t,t,1)",
        ],
        vec!["hecke", "tn", "--q", "3", "--r", "2", "t^2"],
    ] {
        let v = json_of(&args);
        let x = json::hecke_from_json(&field, &v).unwrap();
        assert_eq!(json::hecke_to_json(&x), v);
    }
    let v = json_of(&[
        "hecke", "express", "--q", "3", "--r", "2", "--p", "t", "T(t^2,1)",
    ]);
    assert_eq!(v["poly"], "T1^2 - 4*T2");
    assert_eq!(
        json::genpoly_to_json(&json::genpoly_from_json(&v).unwrap()),
        v
    );
}

#[test]
fn lattice_snf_and_enum() {
    let v = json_of(&["lattice", "snf", "t,1;0,t"]);
    assert_eq!(v["divisors"], serde_json::json!(["t^2", "1"]));
    let v = json_of(&["lattice", "enum", "--q", "3", "--type", "(t,1)"]);
    assert_eq!(v["count"], 4);
}

#[test]
fn expansion_json_round_trips() {
    let field = FqContext::prime(2).unwrap();
    let v = json_of(&[
        "expand", "--q", "2", "--form", "delta", "--p", "t", "--M", "20", "--prec", "30",
    ]);
    for key in ["series", "hecke"] {
        let s = if key == "series" {
            &v[key]
        } else {
            &v[key]["series"]
        };
        let f: USeries = json::useries_from_json(&field, s).unwrap();
        assert_eq!(json::useries_to_json(&f), *s);
    }
    assert_eq!(v["series"]["truncation"], 20);
    assert_eq!(v["hecke"]["series"]["truncation"], 10);
}

#[test]
fn eigenforms_and_nonexample() {
    let v = json_of(&["eigen", "--q", "3", "--form", "g1", "--p", "t", "--M", "24"]);
    assert_eq!(v["eigenform"], true);
    let v = json_of(&[
        "eigen", "--q", "3", "--form", "delta2", "--p", "t", "--M", "24",
    ]);
    assert_eq!(v["eigenform"], false);
    let v = json_of(&["nonexample", "--q", "3", "--prec", "20"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["agree"], true);
}

#[test]
fn goss_finite_lattice() {
    let v = json_of(&[
        "goss",
        "--q",
        "3",
        "--K",
        "10",
        "--lattice",
        "1",
        "--k",
        "4",
    ]);
    // L = F_3: e_L(X) = X - X^3, so G_4 = X^4 - X^2.
    assert_eq!(
        v["polys"][0]["coeffs"],
        serde_json::json!(["0", "0", "2", "0", "1"])
    );
}

#[test]
fn verify_small_is_green() {
    let out = run(&[
        "verify", "--q", "2", "--budget", "small", "--format", "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains(" 0 failed"), "{text}");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--q", "3", "--budget", "small", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["cosets", "--q", "3", "--r", "3", "--p", "t^2+1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["cosets", "--q", "2", "--p", "t^2+1"],
        vec!["cosets", "--q", "6", "--p", "t"],
        vec!["cosets", "--q", "4", "--field-modulus", "1,0,1", "--p", "t"],
        vec!["cosets", "--q", "2", "--p", "t^"],
        vec!["hecke", "mul", "--r", "2", "T(t,1)", "T(t,1,1)"],
        vec!["lattice", "enum", "--type", "(t^3,1)", "--budget", "5"],
        vec!["expand", "--form", "delta", "--M", "100000"],
        vec!["expand", "--form", "eisenstein", "--M", "4"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_heckeft"))
        .args(["cosets", "--q", "2", "--r", "3", "--p", "t"])
        .env("HECKEFT_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
