use super::forms::ExpansionContext;
use super::useries::{PowerTable, USeries};
use crate::error::{Error, Result};
use crate::goss::{goss_for_finite_lattice, FiniteLattice};
use crate::laurent::LaurentSeries;
use crate::poly::PolyA;

/// L = e_{pA}(A): the F_q-space spanned by λ_i = p·e_A(t^i/p), 0 ≤ i < deg p.
#[derive(Clone, Debug)]
pub struct TorsionLattice {
    pub p: PolyA,
    pub basis: Vec<LaurentSeries>,
    pub lattice: FiniteLattice<LaurentSeries>,
    /// φ_p(λ_i/p), each zero within precision.
    pub residuals: Vec<LaurentSeries>,
}

fn require_prime(p: &PolyA) -> Result<()> {
    if !p.is_monic() || !p.is_irreducible() {
        return Err(Error::Reducible(p.to_string()));
    }
    Ok(())
}

pub fn torsion_lattice(ctx: &ExpansionContext, p: &PolyA) -> Result<TorsionLattice> {
    require_prime(p)?;
    let f = ctx.field();
    let q = ctx.q();
    let d = p.deg() as usize;
    let r1 = ctx.rank1();
    let cutoff = -r1.n_abs();
    let p_ls = LaurentSeries::from_poly(p);
    let p_inv = p_ls.recip_abs(cutoff - 2 * d as i64)?;
    let module = r1.module(p)?;
    let mut basis = Vec::with_capacity(d);
    let mut residuals = Vec::with_capacity(d);
    for i in 0..d {
        let y = &LaurentSeries::monomial(f, 1, i as i64) * &p_inv;
        let e = r1.exp_at(&y)?;
        // φ_p(e_A(t^i/p)) = e_A(t^i) = 0
        let mut val = LaurentSeries::zero(f);
        for (j, g) in module.g.iter().enumerate() {
            val = &val + &(g * &e.pow((q as i64).pow(j as u32))?);
        }
        let scale = module
            .g
            .iter()
            .filter_map(|g| g.degree())
            .max()
            .unwrap_or(0)
            + e.degree().unwrap_or(0);
        if !val.is_zero() || val.cutoff() > scale - ctx.prec().min(20) {
            return Err(Error::TorsionCertificate(format!(
                "φ_{p}(e_A(t^{i}/{p})) = {val}"
            )));
        }
        residuals.push(val);
        basis.push(&p_ls * &e);
    }
    let lattice = FiniteLattice::new(q, &LaurentSeries::one(f), basis.clone())?;
    Ok(TorsionLattice {
        p: p.clone(),
        basis,
        lattice,
        residuals,
    })
}

/// Output truncation for an input known to u^{M_in}: terms with n > M_in only
/// reach u^m for m > (M_in+1)/q^d.
pub fn output_truncation(m_in: usize, q: u32, d: usize) -> usize {
    (m_in + 1) / (q as usize).pow(d as u32)
}

/// T_p f = Σ_n f_n u_p^n + Σ_n p^{n−k} f_n G_{n,L}(u) with L = e_{pA}(A).
pub fn hecke_action(ctx: &ExpansionContext, f: &USeries, p: &PolyA) -> Result<USeries> {
    require_prime(p)?;
    let field = ctx.field();
    let q = ctx.q();
    let d = p.deg() as usize;
    let k = f.weight();
    let m_in = f.truncation();
    if m_in > ctx.truncation() {
        return Err(Error::OutOfRange(format!(
            "input truncation {m_in} exceeds context truncation {}",
            ctx.truncation()
        )));
    }
    let m_out = output_truncation(m_in, q, d);
    let qd = (q as usize).pow(d as u32);

    let up = ctx.u_subst(p)?.u_a.truncate(m_out);
    let powers = PowerTable::new(&up, m_out / qd);
    let mut out = USeries::zero(field, k, m_out);
    for n in 0..=m_out / qd {
        let c = f.coeff(n);
        if c.is_exact_zero() {
            continue;
        }
        let pw = if n == 0 {
            USeries::constant(LaurentSeries::one(field), 0, m_out)
        } else {
            powers_get(&powers, &up, n)
        };
        out = out.add(&pw.scale(c));
    }

    let l = torsion_lattice(ctx, p)?;
    let goss = goss_for_finite_lattice(&l.lattice, m_in);
    let p_ls = LaurentSeries::from_poly(p);
    let rel = 2 * ctx.rank1().n_abs();
    let mut second = vec![LaurentSeries::zero(field); m_out + 1];
    for n in 1..=m_in {
        let c = f.coeff(n);
        if c.is_exact_zero() {
            continue;
        }
        let e = n as i64 - k;
        let pk = if e >= 0 {
            p_ls.pow(e)?
        } else {
            p_ls.pow(-e)?.recip_to(rel)?
        };
        let w = &pk * c;
        let g = goss.get(n as i64);
        for (j, slot) in second.iter_mut().enumerate() {
            let gj = g.coeff(j);
            if !gj.is_exact_zero() {
                *slot = &*slot + &(&w * &gj);
            }
        }
    }
    out = out.add(&USeries::new(field, k, m_out, second));
    Ok(out.with_weight(k))
}

fn powers_get(table: &PowerTable, x: &USeries, n: usize) -> USeries {
    table
        .power(n)
        .cloned()
        .unwrap_or_else(|| USeries::zero(x.field(), 0, x.truncation()))
}

/// An eigenvalue c with T f = c·f, and c·p^k.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen {
    pub c: LaurentSeries,
    pub c_times_pk: LaurentSeries,
    /// Index of the coefficient used to read off c.
    pub pivot: usize,
}

/// c with tf = c·f coefficient-wise on the common window, if one exists.
pub fn eigenvalue_of(f: &USeries, tf: &USeries, p: &PolyA) -> Result<Option<Eigen>> {
    let m = f.truncation().min(tf.truncation());
    let pivot = (0..=m)
        .find(|&n| !f.coeff(n).is_zero())
        .ok_or_else(|| Error::Insufficient("f vanishes within truncation".into()))?;
    let c = tf.coeff(pivot) * &f.coeff(pivot).recip()?;
    for n in 0..=m {
        if !tf.coeff(n).agrees_with(&(&c * f.coeff(n))) {
            return Ok(None);
        }
    }
    let k = f.weight();
    let pk = LaurentSeries::from_poly(&p.pow(k.max(0) as u64));
    let c_times_pk = if k >= 0 { &c * &pk } else { &c * &pk.recip()? };
    Ok(Some(Eigen {
        c,
        c_times_pk,
        pivot,
    }))
}

/// The u^{q−1} coefficient of T_t(Δ²) and the closed form it should equal.
#[derive(Clone, Debug)]
pub struct NonExample {
    pub q: u32,
    /// From the Hecke action.
    pub coefficient: LaurentSeries,
    /// t^{(2q−2)−k}·f_{2q−2}·(−2α), α = −λ^{1−q}.
    pub predicted: LaurentSeries,
    pub lambda: LaurentSeries,
    /// Δ² and its image, for further checks.
    pub f: USeries,
    pub tf: USeries,
}

pub fn nonexample_coefficient(ctx: &ExpansionContext) -> Result<NonExample> {
    let field = ctx.field();
    let q = ctx.q();
    let t = PolyA::t(field);
    let delta = ctx.delta()?;
    let f = delta.mul(&delta);
    let k = f.weight();
    let tf = hecke_action(ctx, &f, &t)?;
    let idx = q as usize - 1;
    if tf.truncation() < idx || f.truncation() < 2 * idx {
        return Err(Error::Insufficient(format!(
            "truncation {} too small",
            ctx.truncation()
        )));
    }
    let l = torsion_lattice(ctx, &t)?;
    let lambda = l.basis[0].clone();
    let alpha = -&lambda.pow(1 - q as i64)?;
    let minus_two = LaurentSeries::from_int(field, -2);
    let shift = LaurentSeries::monomial(field, 1, 2 * idx as i64 - k);
    let predicted = &(&(&shift * f.coeff(2 * idx)) * &minus_two) * &alpha;
    Ok(NonExample {
        q,
        coefficient: tf.coeff(idx).clone(),
        predicted,
        lambda,
        f,
        tf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    #[test]
    fn delta_and_g1_are_eigenforms() {
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            let m_out = 3 * (q as usize * q as usize - 1);
            let ctx = ExpansionContext::new(&f, m_out * q as usize, 60).unwrap();
            for p in ["t", "t+1"] {
                let p = PolyA::parse(&f, p).unwrap();
                let pq1 = LaurentSeries::from_poly(&p.pow(q as u64 - 1));
                for form in [ctx.g1().unwrap(), ctx.delta().unwrap()] {
                    let tf = hecke_action(&ctx, &form, &p).unwrap();
                    assert!(tf.truncation() >= m_out);
                    let e = eigenvalue_of(&form, &tf, &p).unwrap().expect("eigenform");
                    assert!(
                        e.c_times_pk.agrees_with(&pq1),
                        "q={q} p={p}: {}",
                        e.c_times_pk
                    );
                    assert!(
                        e.c_times_pk.relative_precision().is_none_or(|r| r >= 60),
                        "{}",
                        e.c_times_pk
                    );
                }
            }
        }
    }

    #[test]
    fn nonexample() {
        let f3 = FqContext::prime(3).unwrap();
        let ctx = ExpansionContext::new(&f3, 24, 60).unwrap();
        let ne = nonexample_coefficient(&ctx).unwrap();
        assert!(!ne.coefficient.is_zero());
        assert!(ne.coefficient.agrees_with(&ne.predicted));
        assert!(eigenvalue_of(&ne.f, &ne.tf, &PolyA::t(&f3))
            .unwrap()
            .is_none());
        let f2 = FqContext::prime(2).unwrap();
        let ctx2 = ExpansionContext::new(&f2, 9, 60).unwrap();
        let ne2 = nonexample_coefficient(&ctx2).unwrap();
        assert!(ne2.coefficient.is_zero());
        assert!(ne2.predicted.is_zero());
    }
}
