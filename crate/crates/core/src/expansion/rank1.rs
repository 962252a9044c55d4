//! Rank-1 data for the lattice A ⊂ F_∞, built stratum by stratum: A_{<D}
//! is the F_q-space of polynomials of degree < D, so A_{<D+1} = A_{<D} ⊕ F_q·t^D.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::goss::{goss_polynomials, ExpCoeffs};
use crate::laurent::{certified_product, LaurentSeries};
use crate::poly::PolyA;

/// One stratum: λ_D = e_{A<D}(t^D) and the exponential coefficients of A_{<D}.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub d: usize,
    pub lambda: PolyA,
    /// α_0, …, α_D of e_{A<D} (α_D = 0 is not stored).
    pub alpha: Vec<LaurentSeries>,
}

impl Stratum {
    pub fn deg_lambda(&self) -> i64 {
        self.lambda.deg()
    }
}

/// e_{A<D}(t^D) = ∏_{a∈A<D}(t^D − a) / ∏_{0≠a∈A<D}(−a), computed exactly.
pub fn stratum_lambda(field: &Field, d: usize) -> Result<PolyA> {
    let td = PolyA::monomial(field, 1, d);
    let mut num = PolyA::one(field);
    let mut den = PolyA::one(field);
    for a in PolyA::all_below_degree(field, d) {
        num = &num * &(&td - &a);
        if !a.is_zero() {
            den = &den * &(-&a);
        }
    }
    num.exact_div(&den).ok_or_else(|| {
        Error::OracleDisagreement(format!("stratum {d}: quotient is not a polynomial"))
    })
}

/// deg λ_D = D + Σ_{j<D} (q−1)q^j (D−j).
pub fn stratum_lambda_degree(q: u64, d: usize) -> i64 {
    let mut s = d as i64;
    for j in 0..d {
        s += ((q - 1) * q.pow(j as u32)) as i64 * (d - j) as i64;
    }
    s
}

/// Rank-1 ingredients for A known down to the absolute exponent −N.
#[derive(Clone, Debug)]
pub struct Rank1 {
    field: Field,
    q: u32,
    n_abs: i64,
    /// Strata D = 0, 1, … up to the first with deg λ_D ≥ N (included).
    strata: Vec<Stratum>,
    alpha: ExpCoeffs<LaurentSeries>,
}

impl Rank1 {
    /// Builds strata until the tail is below t^{−N}; α_i(A) for i ≤ `imax`.
    pub fn new(field: &Field, n_abs: i64, imax: usize) -> Result<Self> {
        if n_abs <= 0 {
            return Err(Error::PrecisionExhausted(format!(
                "absolute precision must be positive, got {n_abs}"
            )));
        }
        let q = field.order();
        let cutoff = -n_abs;
        let mut alpha = vec![LaurentSeries::one(field)];
        let mut strata = Vec::new();
        for d in 0.. {
            let lambda = stratum_lambda(field, d)?;
            debug_assert_eq!(lambda.deg(), stratum_lambda_degree(q as u64, d));
            let done = lambda.deg() >= n_abs;
            strata.push(Stratum {
                d,
                lambda: lambda.clone(),
                alpha: alpha.clone(),
            });
            if done {
                break;
            }
            // e_{V ⊕ F_q w} = e_V − e_V^q·λ^{1−q}
            let lam = LaurentSeries::from_poly(&lambda);
            let scale = lam.pow(q as i64 - 1)?.recip_abs(cutoff - 2)?;
            let mut next = Vec::with_capacity(alpha.len() + 1);
            next.push(alpha[0].clone());
            for i in 1..=alpha.len() {
                let corr = &alpha[i - 1].pow(q as i64)? * &scale;
                let cur = if i < alpha.len() {
                    &alpha[i] - &corr
                } else {
                    -&corr
                };
                next.push(cur.truncate(cutoff));
            }
            alpha = next;
        }
        let mut coeffs: Vec<LaurentSeries> = (0..=imax)
            .map(|i| {
                alpha
                    .get(i)
                    .map(|a| a.truncate(cutoff))
                    .unwrap_or_else(|| LaurentSeries::big_o(field, cutoff))
            })
            .collect();
        coeffs[0] = LaurentSeries::one(field);
        Ok(Rank1 {
            field: field.clone(),
            q,
            n_abs,
            strata,
            alpha: ExpCoeffs::new(q, coeffs),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n_abs(&self) -> i64 {
        self.n_abs
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    /// α_i(A) from the stratum products.
    pub fn exp_coeffs(&self) -> &ExpCoeffs<LaurentSeries> {
        &self.alpha
    }

    pub fn alpha(&self, i: usize) -> LaurentSeries {
        self.alpha
            .alpha
            .get(i)
            .cloned()
            .unwrap_or_else(|| LaurentSeries::big_o(&self.field, -self.n_abs))
    }

    /// α_i(A) from e_A(tz) = φ_t(e_A(z)): α_i = g_1 α_{i−1}^q / (t^{q^i} − t),
    /// seeded with α_1.
    pub fn exp_coeffs_recursive(&self) -> Result<ExpCoeffs<LaurentSeries>> {
        let q = self.q as i64;
        let f = &self.field;
        let t = PolyA::t(f);
        let g1 = &LaurentSeries::from_poly(&(&t.pow(q as u64) - &t)) * &self.alpha(1);
        let mut out = vec![LaurentSeries::one(f), self.alpha(1)];
        for i in 2..self.alpha.alpha.len() {
            let den = LaurentSeries::from_poly(&(&t.pow((q as u64).pow(i as u32)) - &t));
            let v = &(&g1 * &out[i - 1].pow(q)?) * &den.recip_abs(-self.n_abs - 1)?;
            out.push(v.truncate(-self.n_abs));
        }
        out.truncate(self.alpha.alpha.len());
        Ok(ExpCoeffs::new(self.q, out))
    }

    /// Both methods must agree on their common precision.
    pub fn check_dual_methods(&self) -> Result<()> {
        let b = self.exp_coeffs_recursive()?;
        for (i, (x, y)) in self.alpha.alpha.iter().zip(&b.alpha).enumerate() {
            if !x.agrees_with(y) {
                return Err(Error::OracleDisagreement(format!(
                    "α_{i}: product gives {x}, recursion gives {y}"
                )));
            }
        }
        Ok(())
    }

    /// Σ'_{a∈A} a^{−k}: stratum D contributes (Σ_c c^{−k})·G_{k,A<D}(1/λ_D),
    /// which has degree ≤ −deg λ_D.
    pub fn eisenstein(&self, k: u32) -> Result<LaurentSeries> {
        let f = &self.field;
        let cutoff = -self.n_abs;
        if k == 0 || !k.is_multiple_of(self.q - 1) {
            return Ok(LaurentSeries::zero(f));
        }
        let mut acc = LaurentSeries::zero(f);
        for s in &self.strata {
            if s.deg_lambda() >= self.n_abs {
                break;
            }
            let table = goss_polynomials(&ExpCoeffs::new(self.q, s.alpha.clone()), k as usize);
            let x = LaurentSeries::from_poly(&s.lambda).recip_abs(cutoff - 2)?;
            let g = table.get(k as i64).eval(&x);
            acc = &acc - &g;
        }
        Ok(acc.truncate(cutoff))
    }

    /// e_A(y) for deg y < 0 as y·∏_D (1 − (e_{A<D}(y)/λ_D)^{q−1}), each factor
    /// certified to deviate from 1 only below (q−1)(deg y − deg λ_D).
    pub fn exp_at(&self, y: &LaurentSeries) -> Result<LaurentSeries> {
        let f = &self.field;
        let dy = y.degree().ok_or(Error::InversionOfZero)?;
        if dy >= 0 {
            return Err(Error::OutOfRange(format!(
                "e_A(y) product needs deg y < 0, got {dy}"
            )));
        }
        let qm1 = self.q as i64 - 1;
        let cutoff = -self.n_abs - dy;
        let inner = -self.n_abs + 2 * dy - 2;
        let mut cur = y.clone();
        let mut factors: Vec<(LaurentSeries, i64)> = Vec::new();
        for s in &self.strata {
            let lam_inv = LaurentSeries::from_poly(&s.lambda).recip_abs(inner)?;
            let ratio = (&cur * &lam_inv).pow(qm1)?;
            let factor = &LaurentSeries::one(f) - &ratio;
            cur = (&cur * &factor).truncate(inner);
            factors.push((factor, qm1 * (dy - s.deg_lambda())));
        }
        let prod = certified_product(f, factors, cutoff)?;
        Ok((y * &prod).truncate(-self.n_abs))
    }

    /// Coefficients of φ_a for the rank-1 lattice A.
    pub fn module(&self, a: &PolyA) -> Result<Rank1Module> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.q as u64;
        let d = a.deg() as usize;
        let mut g = vec![LaurentSeries::from_poly(a)];
        // one extra index: g_{d+1} should vanish and serves as a check
        for i in 1..=d + 1 {
            let mut v = &LaurentSeries::from_poly(&a.pow(q.pow(i as u32))) * &self.alpha(i);
            for (j, gj) in g.iter().enumerate() {
                v = &v - &(gj * &self.alpha(i - j).pow(q.pow(j as u32) as i64)?);
            }
            g.push(v);
        }
        let residual = g.pop().expect("nonempty");
        Ok(Rank1Module {
            a: a.clone(),
            g,
            residual,
        })
    }
}

/// φ_a(X) = aX + g_1 X^q + … + g_D X^{q^D} for the lattice A, D = deg a.
#[derive(Clone, Debug)]
pub struct Rank1Module {
    pub a: PolyA,
    /// g_0 = a, g_1, …, g_D.
    pub g: Vec<LaurentSeries>,
    /// The would-be coefficient g_{D+1}, zero within precision.
    pub residual: LaurentSeries,
}

impl Rank1Module {
    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    /// Δ_a = g_D(a).
    pub fn delta(&self) -> &LaurentSeries {
        self.g.last().expect("nonempty")
    }

    /// Coefficients of φ_a ∘ φ_b: Σ_{i+j=k} g_i(a)·g_j(b)^{q^i}.
    pub fn compose(&self, other: &Rank1Module, q: u32) -> Result<Vec<LaurentSeries>> {
        let f = self.g[0].field().clone();
        let n = self.degree() + other.degree();
        let mut out = vec![LaurentSeries::zero(&f); n + 1];
        for (i, gi) in self.g.iter().enumerate() {
            for (j, gj) in other.g.iter().enumerate() {
                let term = gi * &gj.pow((q as i64).pow(i as u32))?;
                out[i + j] = &out[i + j] + &term;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;
    use crate::goss::lattice_log;

    #[test]
    fn strata_lambda_matches_carlitz_brackets() {
        for q in [2u32, 3, 4] {
            let f = FqContext::of_order(q).unwrap();
            let t = PolyA::t(&f);
            for d in 0..4 {
                let lam = stratum_lambda(&f, d).unwrap();
                assert_eq!(lam.deg(), stratum_lambda_degree(q as u64, d));
                // ±∏_{i≤D} (t^{q^i} − t)
                let brackets = (1..=d).fold(PolyA::one(&f), |acc, i| {
                    &acc * &(&t.pow((q as u64).pow(i as u32)) - &t)
                });
                assert_eq!(lam.monic(), brackets.monic());
            }
        }
    }

    #[test]
    fn alpha_examples_and_dual_methods() {
        let f = FqContext::prime(2).unwrap();
        let r = Rank1::new(&f, 40, 4).unwrap();
        assert_eq!(r.alpha(0), LaurentSeries::one(&f));
        assert_eq!(
            r.alpha(1).truncate(-2),
            LaurentSeries::parse(&f, "1 + O(t^-2)").unwrap()
        );
        r.check_dual_methods().unwrap();
        let f3 = FqContext::prime(3).unwrap();
        let r3 = Rank1::new(&f3, 60, 3).unwrap();
        r3.check_dual_methods().unwrap();
        for s in r3.strata() {
            assert!(s.alpha.len() == s.d + 1);
        }
    }

    /// Brute-force Σ' a^{−k} over deg a < D plus a degree bound on the rest.
    fn truncated_sum(f: &Field, k: u32, d: usize, cutoff: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::zero(f);
        for a in PolyA::all_below_degree(f, d) {
            if a.is_zero() {
                continue;
            }
            let x = LaurentSeries::from_poly(&a)
                .recip_abs(cutoff - 1)
                .unwrap()
                .pow(k as i64)
                .unwrap();
            acc = &acc + &x;
        }
        acc.truncate(cutoff)
    }

    #[test]
    fn rank1_eisenstein_against_truncated_sum() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let r = Rank1::new(&f, 30, 2).unwrap();
            for k in 1..=2 * q {
                let e = r.eisenstein(k).unwrap();
                // terms of degree ≥ D contribute below t^{−kD}
                let d = 4;
                let brute = truncated_sum(&f, k, d, -(k as i64) * d as i64);
                assert!(e.agrees_with(&brute), "q={q} k={k}: {e} vs {brute}");
                if k % (q - 1) != 0 {
                    assert!(e.is_exact_zero());
                }
            }
            assert!(r.eisenstein(q - 1).unwrap().agrees_with(&r.alpha(1)));
        }
        let f = FqContext::prime(2).unwrap();
        let e1 = Rank1::new(&f, 30, 1).unwrap().eisenstein(1).unwrap();
        assert_eq!(
            e1.truncate(-2),
            LaurentSeries::parse(&f, "1 + O(t^-2)").unwrap()
        );
    }

    #[test]
    fn eisenstein_matches_log_of_exponential() {
        // log_A(z) = −Σ_i E'^{q^i−1} z^{q^i}, with E'^0 = −1
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let r = Rank1::new(&f, 50, 3).unwrap();
            let log = lattice_log(r.exp_coeffs(), 3);
            for i in 1..=2 {
                let e = r.eisenstein(q.pow(i) - 1).unwrap();
                assert!((-&e).agrees_with(&log.beta[i as usize]), "q={q} i={i}");
            }
        }
    }

    #[test]
    fn module_identities() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let r = Rank1::new(&f, 80, 5).unwrap();
            let t = PolyA::t(&f);
            let one = r.module(&PolyA::one(&f)).unwrap();
            assert_eq!(one.g, vec![LaurentSeries::one(&f)]);
            let phi_t = r.module(&t).unwrap();
            let expect = &LaurentSeries::from_poly(&(&t.pow(q as u64) - &t)) * &r.alpha(1);
            assert!(phi_t.g[1].agrees_with(&expect));
            assert!(phi_t.residual.is_zero());
            let phi_t2 = r.module(&t.pow(2)).unwrap();
            let comp = phi_t.compose(&phi_t, q).unwrap();
            for (x, y) in comp.iter().zip(&phi_t2.g) {
                assert!(x.agrees_with(y));
                assert!(x.relative_precision().is_none_or(|p| p > 20));
            }
        }
    }

    #[test]
    fn exponential_kills_torsion() {
        // φ_t(e_A(1/t)) = e_A(1) = 0
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let r = Rank1::new(&f, 60, 3).unwrap();
            let y = LaurentSeries::monomial(&f, 1, -1);
            let e = r.exp_at(&y).unwrap();
            let phi = r.module(&PolyA::t(&f)).unwrap();
            let val = &(&phi.g[0] * &e) + &(&phi.g[1] * &e.pow(q as i64).unwrap());
            assert!(val.is_zero(), "{val}");
            assert!(val.cutoff() < -30);
        }
    }
}
