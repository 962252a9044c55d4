//! Goss polynomials of F_q-vector spaces, exponentials and logarithms of
//! finite lattices, and brute-force power sums used as oracles.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::ring::{inverse, FieldLike, Ring, SymPoly, XPoly};

/// Coefficients of an F_q-linear exponential e(X) = Σ α_i X^{q^i} and,
/// optionally, of its logarithm log(X) = Σ β_i X^{q^i}.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpCoeffs<C: Ring> {
    pub q: u32,
    /// α_0 = 1, α_1, …
    pub alpha: Vec<C>,
    /// β_0 = 1, β_1, … (empty until `lattice_log` fills it)
    pub beta: Vec<C>,
}

impl<C: Ring> ExpCoeffs<C> {
    pub fn new(q: u32, alpha: Vec<C>) -> Self {
        ExpCoeffs {
            q,
            alpha,
            beta: Vec::new(),
        }
    }

    /// α_i, zero past the stored range.
    pub fn alpha(&self, i: usize) -> C {
        self.alpha
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.alpha[0].zero_like())
    }

    /// The exponential as a polynomial in X of degree q^(len−1).
    pub fn exponential(&self) -> XPoly<C> {
        let zero = self.alpha[0].zero_like();
        let mut e = XPoly::zero(&zero);
        for (i, a) in self.alpha.iter().enumerate() {
            e = e.add(&XPoly::monomial(a.clone(), (self.q as usize).pow(i as u32)));
        }
        e
    }
}

impl ExpCoeffs<SymPoly> {
    /// Generic coefficients α_1, …, α_n as formal symbols over F_p.
    pub fn generic(q: u32, p: u32, n: usize) -> Self {
        let mut alpha = vec![SymPoly::constant(p, 1)];
        alpha.extend((1..=n).map(|i| SymPoly::alpha(p, i)));
        ExpCoeffs::new(q, alpha)
    }
}

/// G_0 = 0, G_1, …, G_K.
#[derive(Clone, Debug, PartialEq)]
pub struct GossTable<C: Ring> {
    polys: Vec<XPoly<C>>,
}

impl<C: Ring> GossTable<C> {
    pub fn max_index(&self) -> usize {
        self.polys.len() - 1
    }

    /// G_k; G_k = 0 for k ≤ 0.
    pub fn get(&self, k: i64) -> &XPoly<C> {
        &self.polys[k.max(0) as usize]
    }

    pub fn polys(&self) -> &[XPoly<C>] {
        &self.polys[1..]
    }
}

/// The recurrence G_k = X(G_{k−1} + α_1 G_{k−q} + α_2 G_{k−q²} + …) seeded with
/// G_1 = X and G_j = 0 for j ≤ 0.
pub fn goss_polynomials<C: Ring>(coeffs: &ExpCoeffs<C>, k_max: usize) -> GossTable<C> {
    let one = coeffs.alpha[0].one_like();
    let zero = one.zero_like();
    let q = coeffs.q as usize;
    let mut polys = vec![XPoly::zero(&zero)];
    if k_max >= 1 {
        polys.push(XPoly::x(&one));
    }
    for k in 2..=k_max {
        let mut inner = polys[k - 1].clone();
        let mut qi = q;
        let mut i = 1;
        while qi < k {
            let a = coeffs.alpha(i);
            if !a.is_zero() {
                inner = inner.add(&polys[k - qi].scale(&a));
            }
            qi *= q;
            i += 1;
        }
        polys.push(inner.shift(1));
    }
    GossTable { polys }
}

/// Fills β_0..β_n from β_n = −Σ_{i=1}^{n} α_i β_{n−i}^{q^i}, so that e∘log = X
/// modulo X^{q^{n+1}}.
pub fn lattice_log<C: Ring>(coeffs: &ExpCoeffs<C>, n: usize) -> ExpCoeffs<C> {
    let q = coeffs.q as u64;
    let mut beta: Vec<C> = vec![coeffs.alpha[0].one_like()];
    for m in 1..=n {
        let mut acc = beta[0].zero_like();
        for i in 1..=m {
            let a = coeffs.alpha(i);
            if !a.is_zero() {
                acc = acc.plus(&a.times(&beta[m - i].pow_u(q.pow(i as u32))));
            }
        }
        beta.push(acc.negate());
    }
    ExpCoeffs {
        q: coeffs.q,
        alpha: coeffs.alpha.clone(),
        beta,
    }
}

/// A finite F_q-subspace of a coefficient field, given by a basis.
#[derive(Clone, Debug)]
pub struct FiniteLattice<C: FieldLike> {
    q: u32,
    basis: Vec<C>,
    exp: ExpCoeffs<C>,
}

impl<C: FieldLike> FiniteLattice<C> {
    /// Builds e_L from the basis; fails if the basis is dependent.
    ///
    /// `one` fixes the coefficient field when the basis is empty.
    pub fn new(q: u32, one: &C, basis: Vec<C>) -> Result<Self> {
        let exp = finite_lattice_exponential_of(q, one, &basis)?;
        Ok(FiniteLattice { q, basis, exp })
    }

    pub fn basis(&self) -> &[C] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn one(&self) -> C {
        self.exp.alpha[0].clone()
    }

    /// All q^dim elements, in lexicographic order of the coordinates.
    pub fn elements(&self, field_elems: &[Fq]) -> Vec<C> {
        let mut out = vec![self.one().zero_like()];
        for b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * field_elems.len());
            for &c in field_elems {
                let cb = b.times(&b.scalar_like(c));
                next.extend(out.iter().map(|x| x.plus(&cb)));
            }
            out = next;
        }
        out
    }
}

fn finite_lattice_exponential_of<C: FieldLike>(
    q: u32,
    one: &C,
    basis: &[C],
) -> Result<ExpCoeffs<C>> {
    let mut alpha = vec![one.one_like()];
    let mut built = ExpCoeffs::new(q, alpha.clone());
    for w in basis {
        // e_{V + F_q w} = e_V − e_V^q / λ^{q−1}, λ = e_V(w)
        let lambda = built.exponential().eval(w);
        if lambda.is_zero() {
            return Err(Error::DependentBasis);
        }
        let scale = inverse(&lambda)?.pow_u(q as u64 - 1);
        let n = alpha.len();
        let mut next = Vec::with_capacity(n + 1);
        next.push(alpha[0].clone());
        for i in 1..=n {
            let prev = alpha[i - 1].pow_u(q as u64).times(&scale);
            let cur = if i < n {
                alpha[i].minus(&prev)
            } else {
                prev.negate()
            };
            next.push(cur);
        }
        alpha = next;
        built = ExpCoeffs::new(q, alpha.clone());
    }
    Ok(built)
}

/// Coefficients of e_L(X) = X ∏_{0≠λ∈L} (1 − X/λ).
pub fn finite_lattice_exponential<C: FieldLike>(l: &FiniteLattice<C>) -> ExpCoeffs<C> {
    l.exp.clone()
}

pub fn goss_for_finite_lattice<C: FieldLike>(l: &FiniteLattice<C>, k_max: usize) -> GossTable<C> {
    goss_polynomials(&l.exp, k_max)
}

/// Table of G_{k,cL} obtained from the table of L via G_{k,cL}(X) = c^{−k} G_{k,L}(cX).
pub fn rescale_lattice_goss<C: FieldLike>(c: &C, table: &GossTable<C>) -> Result<GossTable<C>> {
    let c_inv = inverse(c)?;
    let zero = c.zero_like();
    let mut polys = vec![XPoly::zero(&zero)];
    for k in 1..=table.max_index() {
        let g = table.get(k as i64);
        let coeffs = g
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if a.is_zero() {
                    a.clone()
                } else {
                    a.times(&c_inv.pow_u((k - j) as u64))
                }
            })
            .collect();
        polys.push(XPoly::new(&zero, coeffs));
    }
    Ok(GossTable { polys })
}

/// Σ_{λ∈L} (z+λ)^{−k} written as `num / den` with den = (∏_{λ∈L}(z+λ))^k.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSum<C: Ring> {
    pub num: XPoly<C>,
    pub den: XPoly<C>,
    /// ∏_{λ∈L}(z+λ), monic of degree |L|.
    pub base: XPoly<C>,
}

/// Direct summation over the elements of L, limited to `budget` elements.
pub fn brute_force_power_sum<C: FieldLike>(
    l: &FiniteLattice<C>,
    field_elems: &[Fq],
    k: u32,
    budget: usize,
) -> Result<PowerSum<C>> {
    let size = (l.q as u128).pow(l.dim() as u32);
    if size > budget as u128 {
        return Err(Error::BudgetExceeded {
            attempted: size,
            budget: budget as u128,
        });
    }
    let one = l.one();
    let zero = one.zero_like();
    let elems = l.elements(field_elems);
    let linear = |lam: &C| XPoly::new(&zero, vec![lam.clone(), one.clone()]);
    let mut base = XPoly::monomial(one.clone(), 0);
    for lam in &elems {
        base = base.mul(&linear(lam));
    }
    let mut num = XPoly::zero(&zero);
    for lam in &elems {
        let cofactor = div_by_linear(&base, lam);
        num = num.add(&cofactor.pow(k as u64));
    }
    Ok(PowerSum {
        num,
        den: base.pow(k as u64),
        base,
    })
}

/// Exact quotient of `p` by the monic linear polynomial X + c.
fn div_by_linear<C: Ring>(p: &XPoly<C>, c: &C) -> XPoly<C> {
    let n = p.degree().expect("nonzero dividend");
    let mut out = vec![c.zero_like(); n];
    let mut carry = c.zero_like();
    for i in (1..=n).rev() {
        let coef = p.coeff(i).minus(&carry);
        out[i - 1] = coef.clone();
        carry = coef.times(c);
    }
    XPoly::new(&c.zero_like(), out)
}

/// Checks Σ_{λ∈L}(z+λ)^{−k} = G_{k,L}(e_L(z)^{−1}) by clearing denominators:
/// e_L = α_top · ∏(z+λ), so both sides share the denominator ∏(z+λ)^k.
pub fn power_sum_matches_goss<C: FieldLike>(
    sum: &PowerSum<C>,
    exp: &ExpCoeffs<C>,
    g: &XPoly<C>,
    k: u32,
) -> Result<bool> {
    let top = exp.alpha.last().expect("α_0 present");
    let top_inv = inverse(top)?;
    let zero = top.zero_like();
    let mut rhs = XPoly::zero(&zero);
    let mut pow_base = XPoly::monomial(top.one_like(), 0);
    // Σ_j g_j α_top^{−j} P^{k−j}, accumulated from j = k downwards
    for j in (0..=k as usize).rev() {
        let gj = g.coeff(j);
        if !gj.is_zero() {
            rhs = rhs.add(&pow_base.scale(&gj.times(&top_inv.pow_u(j as u64))));
        }
        if j > 0 {
            pow_base = pow_base.mul(&sum.base);
        }
    }
    Ok(rhs == sum.num)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;
    use crate::ratfunc::RationalFunction;

    fn rf(f: &crate::field::Field, s: &str) -> RationalFunction {
        RationalFunction::parse(f, s).unwrap()
    }

    #[test]
    fn small_k_are_monomials() {
        for q in [2u32, 3, 4] {
            let f = FqContext::of_order(q).unwrap();
            let table = goss_polynomials(&ExpCoeffs::generic(q, f.characteristic(), 3), q as usize);
            for k in 1..=q as usize {
                assert_eq!(
                    *table.get(k as i64),
                    XPoly::monomial(SymPoly::constant(f.characteristic(), 1), k)
                );
            }
        }
    }

    #[test]
    fn generic_q3_g4() {
        let t = goss_polynomials(&ExpCoeffs::generic(3, 3, 2), 4);
        assert_eq!(t.get(4).to_string(), "X^4 + a1*X^2");
    }

    #[test]
    fn exponential_examples() {
        let f = FqContext::prime(2).unwrap();
        let one = RationalFunction::one(&f);
        let empty = FiniteLattice::new(2, &one, vec![]).unwrap();
        assert_eq!(
            finite_lattice_exponential(&empty).exponential().to_string(),
            "X"
        );
        let l = FiniteLattice::new(2, &one, vec![rf(&f, "1"), rf(&f, "t")]).unwrap();
        let e = finite_lattice_exponential(&l);
        assert_eq!(e.alpha[1], rf(&f, "(t^2+t+1)/(t^2+t)"));
        assert_eq!(e.alpha[2], rf(&f, "1/(t^2+t)"));
        assert!(FiniteLattice::new(2, &one, vec![rf(&f, "t"), rf(&f, "t")]).is_err());
    }

    #[test]
    fn one_dim_g3_and_log() {
        let f = FqContext::prime(2).unwrap();
        let one = RationalFunction::one(&f);
        let lam = rf(&f, "t^2+1");
        let l = FiniteLattice::new(2, &one, vec![lam.clone()]).unwrap();
        let table = goss_for_finite_lattice(&l, 3);
        let inv = lam.inv().unwrap();
        let expect = XPoly::monomial(one.clone(), 3).add(&XPoly::monomial(inv.clone(), 2));
        assert_eq!(*table.get(3), expect);
        let logc = lattice_log(&finite_lattice_exponential(&l), 1);
        assert_eq!(logc.beta[1], inv);
        let sum = brute_force_power_sum(&l, &[0, 1], 3, 256).unwrap();
        assert!(power_sum_matches_goss(&sum, &l.exp, table.get(3), 3).unwrap());
    }

    #[test]
    fn rescaling_matches_recomputation() {
        let f = FqContext::prime(2).unwrap();
        let one = RationalFunction::one(&f);
        let lam = rf(&f, "t");
        let l = FiniteLattice::new(2, &one, vec![lam.clone()]).unwrap();
        let table = goss_for_finite_lattice(&l, 6);
        let scaled = rescale_lattice_goss(&lam.inv().unwrap(), &table).unwrap();
        let direct =
            goss_for_finite_lattice(&FiniteLattice::new(2, &one, vec![one.clone()]).unwrap(), 6);
        assert_eq!(scaled, direct);
        assert_eq!(scaled.get(3).to_string(), "X^3 + X^2");
    }
}
