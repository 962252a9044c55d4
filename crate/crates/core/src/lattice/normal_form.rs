use super::{IndexType, LatticeMatrix};
use crate::error::{Error, Result};
use crate::poly::PolyA;

fn row_axpy(rows: &mut [Vec<PolyA>], dst: usize, src: usize, c: &PolyA) {
    // rows[dst] -= c * rows[src]
    for j in 0..rows[dst].len() {
        if !rows[src][j].is_zero() {
            let delta = c * &rows[src][j];
            rows[dst][j] = &rows[dst][j] - &delta;
        }
    }
}

fn col_axpy(rows: &mut [Vec<PolyA>], dst: usize, src: usize, c: &PolyA) {
    for row in rows.iter_mut() {
        if !row[src].is_zero() {
            let delta = c * &row[src];
            row[dst] = &row[dst] - &delta;
        }
    }
}

/// Row-style Hermite normal form: upper triangular, monic pivots, entries
/// above a pivot reduced modulo it. Invariant under left multiplication by
/// GL_r(A), so it labels the row span.
pub fn hermite_normal_form(m: &LatticeMatrix) -> Result<LatticeMatrix> {
    let r = m.rank();
    let mut a = m.rows().to_vec();
    for col in 0..r {
        loop {
            let pivot = (col..r)
                .filter(|&i| !a[i][col].is_zero())
                .min_by_key(|&i| a[i][col].deg())
                .ok_or(Error::Singular)?;
            a.swap(col, pivot);
            let mut done = true;
            for i in col + 1..r {
                if a[i][col].is_zero() {
                    continue;
                }
                let (quo, rem) = a[i][col].divmod(&a[col][col])?;
                row_axpy(&mut a, i, col, &quo);
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        let lc = a[col][col].leading();
        if lc != 1 {
            let inv = a[col][col].field().inv(lc).unwrap();
            for x in a[col].iter_mut() {
                *x = x.scale(inv);
            }
        }
        for i in 0..col {
            let quo = a[i][col].divmod(&a[col][col])?.0;
            if !quo.is_zero() {
                row_axpy(&mut a, i, col, &quo);
            }
        }
    }
    LatticeMatrix::new(a)
}

/// Smith normal form by elimination; returns the monic divisor chain
/// (a_1, …, a_r) with a_r | … | a_1.
pub fn elementary_divisors(m: &LatticeMatrix) -> Result<IndexType> {
    let r = m.rank();
    let mut a = m.rows().to_vec();
    for k in 0..r {
        loop {
            let (pi, pj) = (k..r)
                .flat_map(|i| (k..r).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].deg())
                .ok_or(Error::Singular)?;
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..r {
                if !a[i][k].is_zero() {
                    let (quo, rem) = a[i][k].divmod(&a[k][k])?;
                    row_axpy(&mut a, i, k, &quo);
                    clean &= rem.is_zero();
                }
            }
            for j in k + 1..r {
                if !a[k][j].is_zero() {
                    let (quo, rem) = a[k][j].divmod(&a[k][k])?;
                    col_axpy(&mut a, j, k, &quo);
                    clean &= rem.is_zero();
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the remaining block
            let bad = (k + 1..r).find(|&i| (k + 1..r).any(|j| !a[k][k].divides(&a[i][j])));
            match bad {
                Some(i) => {
                    let one = PolyA::one(a[k][k].field());
                    let neg_one = -&one;
                    row_axpy(&mut a, k, i, &neg_one);
                }
                None => break,
            }
        }
    }
    let mut d: Vec<PolyA> = (0..r).map(|i| a[i][i].monic()).collect();
    d.reverse();
    IndexType::new(d)
}

/// Coordinates c with c·H = v for an upper triangular H, if they lie in A.
pub fn solve_row(h: &LatticeMatrix, v: &[PolyA]) -> Option<Vec<PolyA>> {
    let r = h.rank();
    let mut c: Vec<PolyA> = Vec::with_capacity(r);
    for j in 0..r {
        let mut rhs = v[j].clone();
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() && !h.get(i, j).is_zero() {
                rhs = &rhs - &(ci * h.get(i, j));
            }
        }
        c.push(rhs.exact_div(h.get(j, j))?);
    }
    Some(c)
}

/// Whether the row span of `m` lies inside the row span of `l`.
pub fn contains(l: &LatticeMatrix, m: &LatticeMatrix) -> Result<bool> {
    let h = hermite_normal_form(l)?;
    Ok(m.rows().iter().all(|row| solve_row(&h, row).is_some()))
}

/// [L:M]_A: elementary divisors of the matrix expressing M's basis in L's.
pub fn a_index(l: &LatticeMatrix, m: &LatticeMatrix) -> Result<IndexType> {
    if l.rank() != m.rank() {
        return Err(Error::RankMismatch(l.rank(), m.rank()));
    }
    let h = hermite_normal_form(l)?;
    let c = m
        .rows()
        .iter()
        .map(|row| solve_row(&h, row).ok_or(Error::NotSublattice))
        .collect::<Result<Vec<_>>>()?;
    elementary_divisors(&LatticeMatrix::new(c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FqContext};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(f: &Field, rows: &[Vec<&str>]) -> LatticeMatrix {
        LatticeMatrix::parse(f, rows).unwrap()
    }

    fn idx(f: &Field, s: &str) -> IndexType {
        IndexType::parse(f, s).unwrap()
    }

    /// gcd of all k×k minors, for k = 1..r (r ≤ 3).
    fn determinantal_divisors(m: &LatticeMatrix) -> Vec<PolyA> {
        let r = m.rank();
        let f = m.field().clone();
        let subsets = |k: usize| -> Vec<Vec<usize>> {
            (0u32..1 << r)
                .filter(|s| s.count_ones() as usize == k)
                .map(|s| (0..r).filter(|i| s >> i & 1 == 1).collect())
                .collect()
        };
        (1..=r)
            .map(|k| {
                let mut g = PolyA::zero(&f);
                for rs in subsets(k) {
                    for cs in subsets(k) {
                        let sub = rs
                            .iter()
                            .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                            .collect();
                        g = g.gcd(&LatticeMatrix::new(sub).unwrap().det());
                    }
                }
                g
            })
            .collect()
    }

    fn random_poly(f: &Field, rng: &mut ChaCha8Rng, deg: usize) -> PolyA {
        let q = f.order() as u64;
        PolyA::from_index(f, rng.gen_range(0..q.pow(deg as u32 + 1)))
    }

    fn random_unimodular(f: &Field, r: usize, rng: &mut ChaCha8Rng) -> LatticeMatrix {
        let mut g = LatticeMatrix::identity(f, r);
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..r));
            let mut e = LatticeMatrix::identity(f, r).into_rows();
            if i != j {
                e[i][j] = random_poly(f, rng, 2);
            } else {
                let c = rng.gen_range(1..f.order());
                e[i][i] = PolyA::constant(f, c);
            }
            g = LatticeMatrix::new(e).unwrap().mul(&g);
        }
        g
    }

    #[test]
    fn hnf_examples() {
        let f = FqContext::prime(2).unwrap();
        let id = LatticeMatrix::identity(&f, 2);
        assert_eq!(hermite_normal_form(&id).unwrap(), id);
        assert_eq!(
            hermite_normal_form(&mat(&f, &[vec!["t", "1"], vec!["0", "1"]])).unwrap(),
            mat(&f, &[vec!["t", "0"], vec!["0", "1"]])
        );
        let m = mat(&f, &[vec!["1", "1"], vec!["0", "t"]]);
        assert_eq!(hermite_normal_form(&m).unwrap(), m);
        assert_eq!(
            hermite_normal_form(&mat(&f, &[vec!["t", "t"], vec!["1", "1"]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn snf_examples() {
        let f = FqContext::prime(2).unwrap();
        let d = LatticeMatrix::diag(&[PolyA::parse(&f, "t^2").unwrap(), PolyA::t(&f)]);
        assert_eq!(elementary_divisors(&d).unwrap(), idx(&f, "(t^2,t)"));
        assert_eq!(
            elementary_divisors(&mat(&f, &[vec!["t", "1"], vec!["0", "t"]])).unwrap(),
            idx(&f, "(t^2,1)")
        );
        assert_eq!(
            elementary_divisors(&LatticeMatrix::identity(&f, 2)).unwrap(),
            idx(&f, "(1,1)")
        );
    }

    #[test]
    fn a_index_examples() {
        let f = FqContext::prime(2).unwrap();
        let a2 = LatticeMatrix::identity(&f, 2);
        let dt1 = idx(&f, "(t,1)").matrix();
        assert_eq!(a_index(&a2, &dt1).unwrap(), idx(&f, "(t,1)"));
        assert_eq!(
            a_index(&dt1, &idx(&f, "(t^2,t)").matrix()).unwrap(),
            idx(&f, "(t,t)")
        );
        assert_eq!(a_index(&a2, &a2).unwrap(), idx(&f, "(1,1)"));
        assert_eq!(a_index(&dt1, &a2), Err(Error::NotSublattice));
    }

    #[test]
    fn normal_forms_are_invariant_and_match_minor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u32, 3] {
            let f = FqContext::prime(q).unwrap();
            for r in [2usize, 3] {
                for _ in 0..8 {
                    let m = loop {
                        let rows = (0..r)
                            .map(|_| (0..r).map(|_| random_poly(&f, &mut rng, 2)).collect())
                            .collect();
                        let m = LatticeMatrix::new(rows).unwrap();
                        if !m.det().is_zero() {
                            break m;
                        }
                    };
                    let h = hermite_normal_form(&m).unwrap();
                    assert!(h.is_upper_triangular());
                    assert_eq!(hermite_normal_form(&h).unwrap(), h);
                    let s = elementary_divisors(&m).unwrap();
                    let dd = determinantal_divisors(&m);
                    let mut prev = PolyA::one(&f);
                    let mut from_minors: Vec<PolyA> = dd
                        .iter()
                        .map(|d| {
                            let x = d.exact_div(&prev).unwrap();
                            prev = d.clone();
                            x
                        })
                        .collect();
                    from_minors.reverse();
                    assert_eq!(s.divisors(), from_minors.as_slice());
                    for _ in 0..100 {
                        let g = random_unimodular(&f, r, &mut rng);
                        assert_eq!(hermite_normal_form(&g.mul(&m)).unwrap(), h);
                    }
                    for _ in 0..10 {
                        let g = random_unimodular(&f, r, &mut rng);
                        let k = random_unimodular(&f, r, &mut rng);
                        assert_eq!(elementary_divisors(&g.mul(&m).mul(&k)).unwrap(), s);
                    }
                }
            }
        }
    }
}
