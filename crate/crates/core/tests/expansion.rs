use heckeft::expansion::{congruence_violations, hecke_action, ExpansionContext};
use heckeft::{FqContext, LaurentSeries, PolyA};

fn ctx(q: u32, m: usize) -> ExpansionContext {
    ExpansionContext::new(&FqContext::prime(q).unwrap(), m, 40).unwrap()
}

#[test]
fn raising_the_truncation_does_not_change_known_terms() {
    for (q, m) in [(2, 16), (3, 18)] {
        let (small, large) = (ctx(q, m), ctx(q, m + 5));
        let a = small.delta().unwrap();
        let b = large.delta().unwrap();
        assert_eq!(a.truncation(), m);
        assert_eq!(a.first_disagreement(&b.truncate(m)), None, "q={q}");
        let a = small.g1().unwrap();
        let b = large.g1().unwrap();
        assert_eq!(a.first_disagreement(&b.truncate(m)), None, "q={q}");
    }
}

#[test]
fn hecke_action_is_linear() {
    let c = ctx(3, 36);
    let t = PolyA::t(c.field());
    let d = c.delta().unwrap();
    let f = d.mul(&d);
    // g_1^8 has the weight of Delta^2 for q = 3.
    let g = c.g1().unwrap().pow(8);
    assert_eq!(f.weight(), g.weight());
    let lhs = hecke_action(&c, &f.add(&g), &t).unwrap();
    let rhs = hecke_action(&c, &f, &t)
        .unwrap()
        .add(&hecke_action(&c, &g, &t).unwrap());
    assert_eq!(lhs.first_disagreement(&rhs), None);
}

#[test]
fn hecke_operators_at_different_primes_commute() {
    let c = ctx(3, 72);
    let t = PolyA::t(c.field());
    let t1 = PolyA::parse(c.field(), "t+1").unwrap();
    let d = c.delta().unwrap();
    let f = d.mul(&d);
    let a = hecke_action(&c, &hecke_action(&c, &f, &t).unwrap(), &t1).unwrap();
    let b = hecke_action(&c, &hecke_action(&c, &f, &t1).unwrap(), &t).unwrap();
    assert_eq!(a.truncation(), b.truncation());
    assert!(a.truncation() >= 8);
    assert_eq!(a.first_disagreement(&b), None);
}

#[test]
fn hecke_images_respect_the_sieve() {
    let c = ctx(3, 36);
    let t = PolyA::t(c.field());
    for f in [c.g1().unwrap(), c.delta().unwrap()] {
        let tf = hecke_action(&c, &f, &t).unwrap();
        assert!(congruence_violations(&tf, 3).is_empty());
    }
}

#[test]
fn eisenstein_relation_for_n_2() {
    // (a - a^{q^2}) E^{q^2-1} = -g_2(a) + E^{q-1} g_1(a)^q
    for (q, m) in [(2u32, 12), (3, 24)] {
        let c = ctx(q, m);
        for a in ["t", "t+1", "t^2"] {
            let a = PolyA::parse(c.field(), a).unwrap();
            let g = c.coefficient_forms(&a).unwrap();
            let scalar =
                &LaurentSeries::from_poly(&a) - &LaurentSeries::from_poly(&a.pow((q * q) as u64));
            let lhs = c.eisenstein(q * q - 1).unwrap().scale(&scalar);
            let rhs = g[2]
                .neg()
                .add(&c.eisenstein(q - 1).unwrap().mul(&g[1].frobenius_q(1)));
            assert_eq!(lhs.first_disagreement(&rhs), None, "q={q} a={a}");
        }
    }
}
