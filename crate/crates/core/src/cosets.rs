//! Right-coset representatives of GL_r(A)·diag(p,1,…,1)·GL_r(A) and
//! classification of matrices of determinant ~p.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::{elementary_divisors, hermite_normal_form, IndexType, LatticeMatrix};
use crate::poly::PolyA;

/// β_{m,b}: the identity with column m replaced by (b_1, …, b_{m−1}, p, 0, …, 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CosetRep {
    /// 1-based pivot column.
    pub m: usize,
    pub b: Vec<PolyA>,
    pub matrix: LatticeMatrix,
}

impl CosetRep {
    pub fn new(r: usize, p: &PolyA, m: usize, b: Vec<PolyA>) -> Result<Self> {
        if m == 0 || m > r || b.len() != m - 1 {
            return Err(Error::OutOfRange(format!(
                "need 1 ≤ m ≤ {r} and {} entries of b",
                m.saturating_sub(1)
            )));
        }
        if b.iter().any(|x| x.deg() >= p.deg()) {
            return Err(Error::OutOfRange(format!(
                "entries of b must have degree < deg {p}"
            )));
        }
        let mut rows = LatticeMatrix::identity(p.field(), r).into_rows();
        for (i, bi) in b.iter().enumerate() {
            rows[i][m - 1] = bi.clone();
        }
        rows[m - 1][m - 1] = p.clone();
        Ok(CosetRep {
            m,
            b,
            matrix: LatticeMatrix::new(rows)?,
        })
    }
}

fn require_prime(p: &PolyA) -> Result<()> {
    if !p.is_monic() || !p.is_irreducible() {
        return Err(Error::Reducible(p.to_string()));
    }
    Ok(())
}

/// All β_{m,b}, ordered by m and then by b.
pub fn enumerate_reps(r: usize, p: &PolyA) -> Result<Vec<CosetRep>> {
    require_prime(p)?;
    let f = p.field();
    let q = f.order() as u64;
    let radix = q.pow(p.deg() as u32);
    let mut out = Vec::new();
    for m in 1..=r {
        let mut all: Vec<Vec<PolyA>> = (0..radix.pow(m as u32 - 1))
            .map(|mut code| {
                (0..m - 1)
                    .map(|_| {
                        let d = code % radix;
                        code /= radix;
                        PolyA::from_index(f, d)
                    })
                    .collect()
            })
            .collect();
        all.sort();
        for b in all {
            out.push(CosetRep::new(r, p, m, b)?);
        }
    }
    Ok(out)
}

/// The representative β with GL_r(A)·β = GL_r(A)·γ.
pub fn classify(gamma: &LatticeMatrix, p: &PolyA) -> Result<CosetRep> {
    require_prime(p)?;
    let det = gamma.det();
    if det.is_zero() || det.monic() != *p {
        return Err(Error::WrongDeterminant);
    }
    // the row Hermite form of such a matrix is already some β_{m,b}
    let h = hermite_normal_form(gamma)?;
    let r = h.rank();
    let m = (0..r)
        .find(|&j| !h.get(j, j).is_one())
        .ok_or(Error::WrongDeterminant)?
        + 1;
    let b = (0..m - 1).map(|i| h.get(i, m - 1).clone()).collect();
    let rep = CosetRep::new(r, p, m, b)?;
    debug_assert_eq!(rep.matrix, h);
    Ok(rep)
}

/// A random element of GL_r(A) as a product of elementary matrices.
pub fn random_gl(
    field: &Field,
    r: usize,
    rng: &mut ChaCha8Rng,
    steps: usize,
    max_deg: u32,
) -> LatticeMatrix {
    let q = field.order() as u64;
    let mut g = LatticeMatrix::identity(field, r);
    for _ in 0..steps {
        let mut e = LatticeMatrix::identity(field, r).into_rows();
        let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
        if i != j {
            e[i][j] = PolyA::from_index(field, rng.gen_range(0..q.pow(max_deg + 1)));
        } else {
            e[i][i] = PolyA::constant(field, rng.gen_range(1..field.order()));
        }
        g = LatticeMatrix::new(e).expect("square").mul(&g);
    }
    g
}

#[derive(Clone, Debug)]
pub struct PartitionReport {
    pub samples: usize,
    pub classified: usize,
    pub failures: Vec<String>,
    /// Hits per representative, in `enumerate_reps` order.
    pub hits: Vec<(CosetRep, usize)>,
    /// HNF labels of the representatives are pairwise distinct.
    pub labels_distinct: bool,
    /// Every representative has elementary divisors (p, 1, …, 1).
    pub in_double_coset: bool,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self.classified == self.samples
            && self.labels_distinct
            && self.in_double_coset
    }

    pub fn labels_seen(&self) -> usize {
        self.hits.iter().filter(|(_, n)| *n > 0).count()
    }
}

/// Classifies `samples` random g₁·δ·g₂ and tallies the representatives hit.
pub fn verify_partition(r: usize, p: &PolyA, samples: usize, seed: u64) -> Result<PartitionReport> {
    let reps = enumerate_reps(r, p)?;
    let f = p.field();
    let labels: BTreeSet<LatticeMatrix> = reps
        .iter()
        .map(|x| hermite_normal_form(&x.matrix))
        .collect::<Result<_>>()?;
    let mut e = vec![0u32; r];
    e[0] = 1;
    let delta_type = IndexType::from_exponents(p, &e)?;
    let in_double_coset = reps.iter().all(|x| {
        elementary_divisors(&x.matrix)
            .map(|d| d == delta_type)
            .unwrap_or(false)
    });
    let delta = delta_type.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = vec![0usize; reps.len()];
    let mut failures = Vec::new();
    let mut classified = 0;
    for _ in 0..samples {
        let g1 = random_gl(f, r, &mut rng, 4 * r, 2);
        let g2 = random_gl(f, r, &mut rng, 4 * r, 2);
        let gamma = g1.mul(&delta).mul(&g2);
        match classify(&gamma, p) {
            Ok(rep) => match reps.iter().position(|x| *x == rep) {
                Some(i) => {
                    hits[i] += 1;
                    classified += 1;
                }
                None => failures.push(format!("{gamma} classified outside the list")),
            },
            Err(err) => failures.push(format!("{gamma}: {err}")),
        }
    }
    Ok(PartitionReport {
        samples,
        classified,
        failures,
        labels_distinct: labels.len() == reps.len(),
        in_double_coset,
        hits: reps.into_iter().zip(hits).collect(),
    })
}
