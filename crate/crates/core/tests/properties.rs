use heckeft::cosets::{classify, enumerate_reps, random_gl};
use heckeft::hecke::{evaluate, express_in_generators, HeckeAlgebra, HeckeElement};
use heckeft::json;
use heckeft::lattice::{
    a_index, contains, elementary_divisors, hermite_normal_form, Budget, IndexType, LatticeMatrix,
};
use heckeft::{Field, FqContext, LaurentSeries, PolyA};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(q: u32) -> Field {
    FqContext::of_order(q).unwrap()
}

fn poly(f: &Field, idx: u64, max_deg: u32) -> PolyA {
    PolyA::from_index(f, idx % (f.order() as u64).pow(max_deg + 1))
}

fn matrix(f: &Field, r: usize, idx: &[u64], max_deg: u32) -> LatticeMatrix {
    let rows = (0..r)
        .map(|i| (0..r).map(|j| poly(f, idx[i * r + j], max_deg)).collect())
        .collect();
    LatticeMatrix::new(rows).unwrap()
}

/// A nonincreasing exponent list of length r and total at most `total`.
fn exponents(raw: &[u32], r: usize, total: u32) -> Vec<u32> {
    let mut e: Vec<u32> = raw.iter().take(r).map(|x| x % (total + 1)).collect();
    e.sort_unstable_by(|a, b| b.cmp(a));
    while e.iter().sum::<u32>() > total {
        let i = e.iter().rposition(|&x| x > 0).unwrap();
        e[i] -= 1;
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_division_and_bezout(q in prop::sample::select(vec![2u32, 3, 4]), a in any::<u64>(), b in any::<u64>()) {
        let f = field(q);
        let (a, b) = (poly(&f, a, 5), poly(&f, b, 3));
        prop_assume!(!b.is_zero());
        let (quo, rem) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a.clone());
        prop_assert!(rem.is_zero() || rem.deg() < b.deg());
        let (g, s, t) = a.xgcd(&b);
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn laurent_reciprocal(q in prop::sample::select(vec![2u32, 3, 5]), a in any::<u64>()) {
        let f = field(q);
        let a = poly(&f, a, 4);
        prop_assume!(!a.is_zero());
        let x = LaurentSeries::from_poly(&a);
        let y = x.recip_to(40).unwrap();
        prop_assert!((&x * &y).agrees_with(&LaurentSeries::one(&f)));
    }

    #[test]
    fn hermite_form_labels_row_span(q in prop::sample::select(vec![2u32, 3]), r in 2usize..=3, idx in prop::collection::vec(any::<u64>(), 9), seed in any::<u64>()) {
        let f = field(q);
        let m = matrix(&f, r, &idx, 2);
        prop_assume!(!m.det().is_zero());
        let h = hermite_normal_form(&m).unwrap();
        prop_assert_eq!(hermite_normal_form(&h).unwrap(), h.clone());
        let g = random_gl(&f, r, &mut ChaCha8Rng::seed_from_u64(seed), 6, 1);
        prop_assert_eq!(hermite_normal_form(&g.mul(&m)).unwrap(), h);
        let d = elementary_divisors(&m).unwrap();
        prop_assert_eq!(d.det(), m.det().monic());
        prop_assert_eq!(elementary_divisors(&g.mul(&m)).unwrap(), d);
    }

    #[test]
    fn a_index_is_multiplicative_in_chains(q in prop::sample::select(vec![2u32, 3]), idx in prop::collection::vec(any::<u64>(), 12)) {
        let f = field(q);
        let l = matrix(&f, 2, &idx[0..4], 1);
        let a = matrix(&f, 2, &idx[4..8], 1);
        let b = matrix(&f, 2, &idx[8..12], 1);
        prop_assume!(!l.det().is_zero() && !a.det().is_zero() && !b.det().is_zero());
        let m = a.mul(&l);
        let n = b.mul(&m);
        prop_assert!(contains(&l, &m).unwrap() && contains(&m, &n).unwrap());
        let lm = a_index(&l, &m).unwrap();
        let mn = a_index(&m, &n).unwrap();
        let ln = a_index(&l, &n).unwrap();
        prop_assert_eq!(ln.det(), &lm.det() * &mn.det());
        prop_assert_eq!(lm, elementary_divisors(&a).unwrap());
    }

    #[test]
    fn classify_is_constant_on_cosets(q in prop::sample::select(vec![2u32, 3]), r in 2usize..=3, which in any::<usize>(), seed in any::<u64>()) {
        let f = field(q);
        let p = PolyA::t(&f);
        let reps = enumerate_reps(r, &p).unwrap();
        let x = &reps[which % reps.len()];
        let g = random_gl(&f, r, &mut ChaCha8Rng::seed_from_u64(seed), 8, 1);
        prop_assert_eq!(&classify(&g.mul(&x.matrix), &p).unwrap(), x);
    }

    #[test]
    fn hecke_products_commute(raw in prop::collection::vec(0u32..4, 6), mixed in any::<bool>()) {
        let f = field(2);
        let alg = HeckeAlgebra::new(&f, 2, Budget::MEDIUM);
        let t = PolyA::t(&f);
        let p2 = if mixed { PolyA::parse(&f, "t+1").unwrap() } else { t.clone() };
        let x = HeckeElement::from_type(IndexType::from_exponents(&t, &exponents(&raw[0..3], 2, 3)).unwrap());
        let y = HeckeElement::from_type(IndexType::from_exponents(&p2, &exponents(&raw[3..6], 2, 3)).unwrap());
        prop_assert_eq!(alg.multiply(&x, &y).unwrap(), alg.multiply(&y, &x).unwrap());
    }

    #[test]
    fn express_round_trips(q in prop::sample::select(vec![2u32, 3]), r in 2usize..=3, raw in prop::collection::vec(0u32..4, 3)) {
        let f = field(q);
        let alg = HeckeAlgebra::new(&f, r, Budget::LARGE);
        let t = PolyA::t(&f);
        let x = HeckeElement::from_type(IndexType::from_exponents(&t, &exponents(&raw, r, 3)).unwrap());
        let g = express_in_generators(&alg, &x, &t).unwrap();
        prop_assert_eq!(evaluate(&alg, &g, &t).unwrap(), x);
    }

    #[test]
    fn lattice_json_round_trips(q in prop::sample::select(vec![2u32, 3, 4]), idx in prop::collection::vec(any::<u64>(), 9)) {
        let f = field(q);
        let m = matrix(&f, 3, &idx, 3);
        let v = json::matrix_to_json(&m);
        prop_assert_eq!(json::matrix_from_json(&f, &v).unwrap(), m.clone());
        prop_assume!(!m.det().is_zero());
        let d = elementary_divisors(&m).unwrap();
        prop_assert_eq!(json::index_type_from_json(&f, &json::index_type_to_json(&d)).unwrap(), d);
    }
}

#[test]
fn hecke_json_round_trips() {
    let f = field(3);
    let alg = HeckeAlgebra::new(&f, 3, Budget::MEDIUM);
    let x = HeckeElement::parse(&f, "T(t,1,1)").unwrap();
    let y = HeckeElement::parse(&f, "T(t^2,t,1)").unwrap();
    let z = alg.multiply(&x, &y).unwrap();
    let v = json::hecke_to_json(&z);
    assert_eq!(json::hecke_from_json(&f, &v).unwrap(), z);
}
