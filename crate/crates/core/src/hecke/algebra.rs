use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::element::HeckeElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::{
    a_index, contains, enumerate_sublattices, index_types_with_det, Budget, IndexType,
    LatticeMatrix,
};
use crate::poly::PolyA;

/// Multiplication in the Hecke ring of GL_r(A), with cached lattice lists
/// and products of basis elements.
pub struct HeckeAlgebra {
    field: Field,
    r: usize,
    budget: Budget,
    sublattices: Mutex<HashMap<IndexType, Arc<Vec<LatticeMatrix>>>>,
    products: Mutex<HashMap<(IndexType, IndexType), HeckeElement>>,
}

impl HeckeAlgebra {
    pub fn new(field: &Field, r: usize, budget: Budget) -> Self {
        assert!(r >= 1, "rank must be positive");
        HeckeAlgebra {
            field: field.clone(),
            r,
            budget,
            sublattices: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn one(&self) -> HeckeElement {
        HeckeElement::one(&self.field, self.r)
    }

    fn check_rank(&self, r: usize) -> Result<()> {
        if r != self.r {
            return Err(Error::RankMismatch(self.r, r));
        }
        Ok(())
    }

    /// Sublattices of A^r of the given type (cached).
    pub fn sublattices(&self, t: &IndexType) -> Result<Arc<Vec<LatticeMatrix>>> {
        if let Some(v) = self.sublattices.lock().unwrap().get(t) {
            return Ok(v.clone());
        }
        let v = Arc::new(enumerate_sublattices(t, self.budget)?);
        self.sublattices
            .lock()
            .unwrap()
            .insert(t.clone(), v.clone());
        Ok(v)
    }

    /// Number of right cosets in Γ·diag(t)·Γ.
    pub fn coset_degree(&self, t: &IndexType) -> Result<usize> {
        Ok(self.sublattices(t)?.len())
    }

    /// m(α, β, ξ): lattices A^r ⊇ M ⊇ A^r·diag(ξ) with [A^r:M] = β and [M:A^r ξ] = α.
    pub fn multiplicity(&self, alpha: &IndexType, beta: &IndexType, xi: &IndexType) -> Result<u64> {
        for t in [alpha, beta, xi] {
            self.check_rank(t.rank())?;
        }
        if (&alpha.det() * &beta.det()) != xi.det() {
            return Ok(0);
        }
        let xm = xi.matrix();
        let ms = self.sublattices(beta)?;
        let hits = ms
            .par_iter()
            .map(|m| -> Result<u64> {
                if !contains(m, &xm)? {
                    return Ok(0);
                }
                Ok(u64::from(&a_index(m, &xm)? == alpha))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(hits.iter().sum())
    }

    /// (ΓαΓ)(ΓβΓ) as a sum over every ξ with the forced determinant.
    pub fn multiply_types(&self, alpha: &IndexType, beta: &IndexType) -> Result<HeckeElement> {
        self.check_rank(alpha.rank())?;
        self.check_rank(beta.rank())?;
        let key = (alpha.clone(), beta.clone());
        if let Some(x) = self.products.lock().unwrap().get(&key) {
            return Ok(x.clone());
        }
        let unit = IndexType::unit(&self.field, self.r);
        let out = if *alpha == unit {
            HeckeElement::from_type(beta.clone())
        } else if *beta == unit {
            HeckeElement::from_type(alpha.clone())
        } else {
            let det = &alpha.det() * &beta.det();
            let candidates = index_types_with_det(&det, self.r)?;
            let counts = candidates
                .par_iter()
                .map(|xi| self.multiplicity(alpha, beta, xi))
                .collect::<Result<Vec<u64>>>()?;
            let mut x = HeckeElement::zero(self.r);
            for (xi, c) in candidates.into_iter().zip(counts) {
                x.add_term(xi, BigInt::from(c));
            }
            x
        };
        self.products.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    pub fn multiply(&self, x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
        self.check_rank(x.rank())?;
        self.check_rank(y.rank())?;
        let mut out = HeckeElement::zero(self.r);
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out = out.add(&self.multiply_types(a, b)?.scale(&(ca * cb)));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, x: &HeckeElement, n: u32) -> Result<HeckeElement> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// T_i = T(p, …, p, 1, …, 1) with i copies of p.
    pub fn t_gen(&self, p: &PolyA, i: usize) -> Result<HeckeElement> {
        require_prime(p)?;
        if i == 0 || i > self.r {
            return Err(Error::OutOfRange(format!(
                "T_i needs 1 ≤ i ≤ {}, got {i}",
                self.r
            )));
        }
        let e: Vec<u32> = (0..self.r).map(|j| u32::from(j < i)).collect();
        Ok(HeckeElement::from_type(IndexType::from_exponents(p, &e)?))
    }

    /// 𝒯_{p^n}: every divisor chain of p-powers with exponent sum n.
    pub fn script_t(&self, p: &PolyA, n: u32) -> Result<HeckeElement> {
        require_prime(p)?;
        let mut x = HeckeElement::zero(self.r);
        for t in index_types_with_det(&p.pow(n as u64), self.r)? {
            x.add_term(t, BigInt::one());
        }
        Ok(x)
    }

    /// 𝒯_N for monic N, the product of 𝒯_{p^k} over the prime powers of N.
    pub fn script_t_composite(&self, n: &PolyA) -> Result<HeckeElement> {
        if n.is_zero() {
            return Err(Error::Singular);
        }
        let mut acc = self.one();
        for (p, k) in n.factor()?.1 {
            acc = self.multiply(&acc, &self.script_t(&p, k)?)?;
        }
        Ok(acc)
    }
}

fn require_prime(p: &PolyA) -> Result<()> {
    if !p.is_monic() || !p.is_irreducible() {
        return Err(Error::Reducible(p.to_string()));
    }
    Ok(())
}

/// Ψ: drops a trailing unit divisor; terms with a non-unit last divisor vanish.
pub fn psi_map(x: &HeckeElement) -> Result<HeckeElement> {
    let r = x.rank();
    if r < 2 {
        return Err(Error::RankMismatch(2, r));
    }
    let mut out = HeckeElement::zero(r - 1);
    for (t, c) in x.terms() {
        let d = t.divisors();
        if d[r - 1].is_one() {
            out.add_term(IndexType::new(d[..r - 1].to_vec())?, c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    fn idx(f: &Field, s: &str) -> IndexType {
        IndexType::parse(f, s).unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        let f = FqContext::prime(2).unwrap();
        let h = HeckeAlgebra::new(&f, 2, Budget::SMALL);
        let t1 = idx(&f, "(t,1)");
        assert_eq!(h.multiplicity(&t1, &t1, &idx(&f, "(t^2,1)")).unwrap(), 1);
        assert_eq!(h.multiplicity(&t1, &t1, &idx(&f, "(t,t)")).unwrap(), 3);
        assert_eq!(h.multiplicity(&idx(&f, "(1,1)"), &t1, &t1).unwrap(), 1);
        assert_eq!(h.multiplicity(&t1, &t1, &t1).unwrap(), 0);
    }

    #[test]
    fn multiply_examples() {
        let f = FqContext::prime(2).unwrap();
        let h = HeckeAlgebra::new(&f, 2, Budget::SMALL);
        let x = HeckeElement::parse(&f, "T(t,1)").unwrap();
        assert_eq!(
            h.multiply(&x, &x).unwrap().to_string(),
            "T(t^2,1) + 3*T(t,t)"
        );
        assert_eq!(h.multiply(&h.one(), &x).unwrap(), x);
        let y = HeckeElement::parse(&f, "T(t+1,1)").unwrap();
        assert_eq!(h.multiply(&x, &y).unwrap().to_string(), "T(t^2+t,1)");
    }

    #[test]
    fn named_and_psi() {
        let f = FqContext::prime(2).unwrap();
        let t = PolyA::t(&f);
        let h3 = HeckeAlgebra::new(&f, 3, Budget::SMALL);
        let h2 = HeckeAlgebra::new(&f, 2, Budget::SMALL);
        assert_eq!(h3.script_t(&t, 1).unwrap().to_string(), "T(t,1,1)");
        assert_eq!(h2.script_t(&t, 2).unwrap().to_string(), "T(t^2,1) + T(t,t)");
        assert_eq!(h2.t_gen(&t, 2).unwrap().to_string(), "T(t,t)");
        assert!(h2.t_gen(&PolyA::parse(&f, "t^2+1").unwrap(), 1).is_err());
        let x = HeckeElement::parse(&f, "T(t,1,1)").unwrap();
        assert_eq!(psi_map(&x).unwrap().to_string(), "T(t,1)");
        assert!(psi_map(&HeckeElement::parse(&f, "T(t,t,t)").unwrap())
            .unwrap()
            .is_zero());
        let lhs = psi_map(&h3.multiply(&x, &x).unwrap()).unwrap();
        let px = psi_map(&x).unwrap();
        assert_eq!(lhs, h2.multiply(&px, &px).unwrap());
    }
}
