use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::rank1::{Rank1, Rank1Module};
use super::useries::{PowerTable, USeries};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::goss::goss_polynomials;
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;

/// u_a = 1/φ_a(1/u) = Δ_a^{−1} u^{q^{deg a}} h_a(u)^{−1}.
#[derive(Clone, Debug)]
pub struct USubst {
    pub a: PolyA,
    pub module: Rank1Module,
    pub delta: LaurentSeries,
    /// h_a(u) = Δ_a^{−1} u^{q^D} φ_a(1/u), constant term 1.
    pub h: USeries,
    pub u_a: USeries,
}

impl USubst {
    /// φ_a(1/u)·u_a, which should be 1 up to u^{M − q^D}.
    pub fn identity_check(&self, q: u32) -> USeries {
        let d = self.module.degree();
        let m = self.u_a.truncation();
        let qd = (q as usize).pow(d as u32);
        let f = self.u_a.field().clone();
        let top = m.saturating_sub(qd);
        let mut out = USeries::zero(&f, 0, top);
        for (i, gi) in self.module.g.iter().enumerate() {
            let s = (q as usize).pow(i as u32);
            // u^{−s}·u_a, dropping the (zero) coefficients below u^s
            let coeffs = (0..=top).map(|n| self.u_a.coeff(n + s).clone()).collect();
            out = out.add(&USeries::new(&f, 0, top, coeffs).scale(gi));
        }
        out
    }
}

/// Shared state for rank-2 expansions at a fixed u-truncation M.
pub struct ExpansionContext {
    rank1: Rank1,
    truncation: usize,
    prec: i64,
    usubst: Mutex<HashMap<PolyA, Arc<USubst>>>,
    eisenstein: Mutex<HashMap<u32, USeries>>,
}

/// The α-index reached by the series inversion: (q^i − 1)/(q − 1).
fn inversion_index(q: u64, i: u32) -> usize {
    ((q.pow(i) - 1) / (q - 1)) as usize
}

impl ExpansionContext {
    /// `prec` is the number of t-adic digits the caller wants; internal
    /// computations run with a margin that absorbs the loss from large
    /// polynomial factors.
    pub fn new(field: &Field, truncation: usize, prec: i64) -> Result<Self> {
        let q = field.order() as u64;
        let mut dmax = 0u32;
        while q.pow(dmax + 1) <= truncation as u64 {
            dmax += 1;
        }
        let dmax = dmax.max(2) as i64;
        let margin = (dmax + 1) * q.pow(dmax as u32 + 1) as i64 + 40;
        Self::with_internal_precision(field, truncation, prec, prec + margin)
    }

    pub fn with_internal_precision(
        field: &Field,
        truncation: usize,
        prec: i64,
        n_abs: i64,
    ) -> Result<Self> {
        let rank1 = Rank1::new(field, n_abs, 8)?;
        Ok(ExpansionContext {
            rank1,
            truncation,
            prec,
            usubst: Mutex::new(HashMap::new()),
            eisenstein: Mutex::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &Field {
        self.rank1.field()
    }

    pub fn q(&self) -> u32 {
        self.rank1.q()
    }

    pub fn rank1(&self) -> &Rank1 {
        &self.rank1
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    fn cutoff(&self) -> i64 {
        -self.rank1.n_abs()
    }

    /// u_a at the context truncation (cached).
    pub fn u_subst(&self, a: &PolyA) -> Result<Arc<USubst>> {
        if let Some(x) = self.usubst.lock().unwrap().get(a) {
            return Ok(x.clone());
        }
        let x = Arc::new(self.compute_u_subst(a)?);
        self.usubst.lock().unwrap().insert(a.clone(), x.clone());
        Ok(x)
    }

    fn compute_u_subst(&self, a: &PolyA) -> Result<USubst> {
        let f = self.field();
        let m = self.truncation;
        let q = self.q() as usize;
        let module = self.rank1.module(a)?;
        let d = module.degree();
        let delta = module.delta().clone();
        let delta_inv = delta.recip_abs(self.cutoff())?;
        let one = LaurentSeries::one(f);
        let qd = q.pow(d as u32);
        let mut h = USeries::constant(one.clone(), 0, m);
        if d > 0 {
            // h_a = 1 + Δ^{−1}(a u^{q^D−1} + Σ_{0<i<D} g_i u^{q^D−q^i})
            let mut inner = USeries::monomial(module.g[0].clone(), qd - 1, 0, m);
            for i in 1..d {
                inner = inner.add(&USeries::monomial(
                    module.g[i].clone(),
                    qd - q.pow(i as u32),
                    0,
                    m,
                ));
            }
            h = h.add(&inner.scale(&delta_inv));
        }
        let u_a = h
            .inverse(self.cutoff())?
            .scale(&delta_inv)
            .shift(qd)
            .with_weight(0);
        Ok(USubst {
            a: a.clone(),
            module,
            delta,
            h,
            u_a,
        })
    }

    /// Monic m with q^{deg m} ≤ M: the only ones whose u_m survives truncation.
    fn contributing_monics(&self) -> Vec<PolyA> {
        let q = self.q() as usize;
        let mut out = Vec::new();
        let mut d = 0;
        while q.pow(d as u32) <= self.truncation {
            out.extend(PolyA::monic_of_degree(self.field(), d));
            d += 1;
        }
        out
    }

    /// E^k for every k in `weights`: E'^k + (Σ_c c^{−k}) Σ_m G_{k,A}(u_m).
    pub fn eisenstein_family(&self, weights: &[u32]) -> Result<Vec<USeries>> {
        let missing: Vec<u32> = {
            let cache = self.eisenstein.lock().unwrap();
            let mut w: Vec<u32> = weights
                .iter()
                .copied()
                .filter(|k| !cache.contains_key(k))
                .collect();
            w.sort_unstable();
            w.dedup();
            w
        };
        if !missing.is_empty() {
            let computed = self.compute_eisenstein(&missing)?;
            let mut cache = self.eisenstein.lock().unwrap();
            for (k, e) in missing.into_iter().zip(computed) {
                cache.insert(k, e);
            }
        }
        let cache = self.eisenstein.lock().unwrap();
        Ok(weights.iter().map(|k| cache[k].clone()).collect())
    }

    pub fn eisenstein(&self, k: u32) -> Result<USeries> {
        Ok(self.eisenstein_family(&[k])?.remove(0))
    }

    fn compute_eisenstein(&self, weights: &[u32]) -> Result<Vec<USeries>> {
        let f = self.field().clone();
        let m = self.truncation;
        let q = self.q();
        let kmax = *weights.iter().max().unwrap_or(&0);
        let table = goss_polynomials(self.rank1.exp_coeffs(), kmax as usize);
        let monics = self.contributing_monics();
        let substs = monics
            .iter()
            .map(|a| self.u_subst(a))
            .collect::<Result<Vec<_>>>()?;
        let per_monic: Vec<Vec<USeries>> = substs
            .par_iter()
            .map(|s| {
                let powers = PowerTable::new(&s.u_a, kmax as usize);
                weights
                    .iter()
                    .map(|&k| powers.eval(table.get(k as i64), k as i64))
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(weights.len());
        for (idx, &k) in weights.iter().enumerate() {
            let e0 = self.rank1.eisenstein(k)?;
            if k == 0 || k % (q - 1) != 0 {
                out.push(USeries::zero(&f, k as i64, m));
                continue;
            }
            // Σ_{c∈F_q^×} c^{−k} = −1 when (q−1) | k
            let mut sum = USeries::zero(&f, k as i64, m);
            for row in &per_monic {
                sum = sum.add(&row[idx]);
            }
            out.push(USeries::constant(e0, k as i64, m).sub(&sum));
        }
        Ok(out)
    }

    /// α_0, α_1, … of the rank-2 lattice from 1/e = 1/z − Σ_j E^{j(q−1)} z^{j(q−1)−1}:
    /// with w = z^{q−1}, Σ_n R_n w^n = 1/(1 − Σ_j S_j w^j), and α_i = R_{(q^i−1)/(q−1)}.
    /// `eis[j−1]` holds S_j = E^{j(q−1)}.
    pub fn lattice_series_inversion(&self, eis: &[USeries], imax: u32) -> Result<Inversion> {
        let q = self.q() as u64;
        let need = inversion_index(q, imax);
        if eis.len() < need {
            return Err(Error::Insufficient(format!(
                "α_{imax} needs {need} Eisenstein series, got {}",
                eis.len()
            )));
        }
        let f = self.field();
        let mut r: Vec<USeries> =
            vec![USeries::constant(LaurentSeries::one(f), 0, self.truncation)];
        for n in 1..=need {
            let mut acc = USeries::zero(f, (n as i64) * (q as i64 - 1), self.truncation);
            for j in 1..=n {
                acc = acc.add(&eis[j - 1].mul(&r[n - j]));
            }
            r.push(acc.with_weight((n as i64) * (q as i64 - 1)));
        }
        let alpha = (0..=imax)
            .map(|i| r[inversion_index(q, i)].clone())
            .collect();
        let targets: Vec<usize> = (0..=imax).map(|i| inversion_index(q, i)).collect();
        let stray = (1..=need)
            .filter(|n| !targets.contains(n))
            .map(|n| (n, r[n].clone()))
            .collect();
        Ok(Inversion { alpha, stray })
    }

    /// α_0..α_imax as u-series.
    pub fn alphas(&self, imax: u32) -> Result<Inversion> {
        let q = self.q();
        let need = inversion_index(q as u64, imax);
        let weights: Vec<u32> = (1..=need as u32).map(|j| j * (q - 1)).collect();
        let eis = self.eisenstein_family(&weights)?;
        self.lattice_series_inversion(&eis, imax)
    }

    /// g_0(a) = a, g_1(a), …, g_{2 deg a}(a) from
    /// g_i = (a^{q^i} − a)α_i − Σ_{0<j<i} g_j α_{i−j}^{q^j}.
    pub fn coefficient_forms(&self, a: &PolyA) -> Result<Vec<USeries>> {
        if a.deg() < 1 {
            return Err(Error::OutOfRange(format!(
                "coefficient forms need a ∉ F_q, got {a}"
            )));
        }
        let q = self.q() as u64;
        let n = 2 * a.deg() as u32;
        let alpha = self.alphas(n)?.alpha;
        let a_ls = LaurentSeries::from_poly(a);
        let mut g = vec![USeries::constant(a_ls.clone(), 0, self.truncation)];
        for i in 1..=n as usize {
            let c = &LaurentSeries::from_poly(&a.pow(q.pow(i as u32))) - &a_ls;
            let mut v = alpha[i].scale(&c);
            for j in 1..i {
                v = v.sub(&g[j].mul(&alpha[i - j].frobenius_q(j as u32)));
            }
            g.push(v.with_weight(q.pow(i as u32) as i64 - 1));
        }
        Ok(g)
    }

    /// g_1(t), weight q − 1.
    pub fn g1(&self) -> Result<USeries> {
        Ok(self
            .coefficient_forms(&PolyA::t(self.field()))?
            .swap_remove(1))
    }

    /// Δ = g_2(t), weight q² − 1.
    pub fn delta(&self) -> Result<USeries> {
        Ok(self
            .coefficient_forms(&PolyA::t(self.field()))?
            .swap_remove(2))
    }
}

/// Result of the series inversion.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub alpha: Vec<USeries>,
    /// R_n for n not of the form (q^i−1)/(q−1); each should vanish.
    pub stray: Vec<(usize, USeries)>,
}

/// Whether the coefficient f_m may be nonzero for a form of any weight:
/// (q−1) | m and m ≡ 0 or −1 (mod q).
pub fn congruence_allows(q: u32, m: usize) -> bool {
    let q = q as usize;
    m.is_multiple_of(q - 1) && (m.is_multiple_of(q) || m % q == q - 1)
}

/// Indices m where f_m is provably nonzero although the congruences forbid it.
pub fn congruence_violations(f: &USeries, q: u32) -> Vec<usize> {
    (0..=f.truncation())
        .filter(|&m| !congruence_allows(q, m) && !f.coeff(m).is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    #[test]
    fn u_subst_examples() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let ctx = ExpansionContext::new(&f, 12, 30).unwrap();
            let u1 = ctx.u_subst(&PolyA::one(&f)).unwrap();
            assert!(u1
                .u_a
                .agrees_with(&USeries::monomial(LaurentSeries::one(&f), 1, 0, 12)));
            if q == 3 {
                let c = PolyA::constant(&f, 2);
                let uc = ctx.u_subst(&c).unwrap();
                // 2^{−1} = 2 in F_3
                assert!(uc.u_a.agrees_with(&USeries::monomial(
                    LaurentSeries::constant(&f, 2),
                    1,
                    0,
                    12
                )));
            }
            for a in ["t", "t+1", "t^2"] {
                let a = PolyA::parse(&f, a).unwrap();
                let s = ctx.u_subst(&a).unwrap();
                let qd = (q as usize).pow(a.deg() as u32);
                assert_eq!(s.u_a.order(), Some(qd));
                assert!(s
                    .u_a
                    .coeff(qd)
                    .agrees_with(&s.delta.recip_abs(-60).unwrap()));
                let id = s.identity_check(q);
                assert!(
                    id.agrees_with(&USeries::constant(
                        LaurentSeries::one(&f),
                        0,
                        id.truncation()
                    )),
                    "a={a}: {id}"
                );
            }
        }
    }

    #[test]
    fn eisenstein_basics() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let ctx = ExpansionContext::new(&f, 3 * (q as usize * q as usize - 1), 30).unwrap();
            let k = q - 1;
            let e = ctx.eisenstein(k).unwrap();
            assert!(e.coeff(0).agrees_with(&ctx.rank1().eisenstein(k).unwrap()));
            assert!(!e.coeff(q as usize - 1).is_zero());
            for w in [q - 1, q * q - 1] {
                assert!(congruence_violations(&ctx.eisenstein(w).unwrap(), q).is_empty());
            }
            if q == 3 {
                assert!(ctx
                    .eisenstein(3)
                    .unwrap()
                    .coeffs()
                    .iter()
                    .all(|c| c.is_exact_zero()));
            }
        }
    }

    #[test]
    fn forms_low_order_facts() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let ctx = ExpansionContext::new(&f, 3 * (q as usize * q as usize - 1), 40).unwrap();
            let inv = ctx.alphas(2).unwrap();
            for (n, r) in &inv.stray {
                assert!(r.coeffs().iter().all(|c| c.is_zero()), "R_{n} = {r}");
            }
            assert!(inv.alpha[1].agrees_with(&ctx.eisenstein(q - 1).unwrap()));
            for i in 0..=2 {
                assert!(inv.alpha[i].coeff(0).agrees_with(&ctx.rank1().alpha(i)));
            }
            let t = PolyA::t(&f);
            let g = ctx.coefficient_forms(&t).unwrap();
            let phi_t = ctx.rank1().module(&t).unwrap();
            assert!(g[1].coeff(0).agrees_with(&phi_t.g[1]));
            assert!(g[2].coeff(0).is_zero());
            assert_eq!(g[2].order(), Some(q as usize - 1));
            for x in &g[1..] {
                assert!(congruence_violations(x, q).is_empty());
            }
        }
    }
}
