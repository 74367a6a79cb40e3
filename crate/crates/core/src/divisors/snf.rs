//! Smith normal form over ℤ with unimodular certificates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{PointLabel, SymbolicDivisor};

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | …`, nonnegative, length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

type Mat = Vec<Vec<BigInt>>;

fn identity(k: usize) -> Mat {
    (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn mat_mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

// row_i -= q * row_t
fn row_axpy(m: &mut Mat, i: usize, t: usize, q: &BigInt) {
    let src = m[t].clone();
    for (x, y) in m[i].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut Mat, j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let y = row[t].clone();
        row[j] -= q * y;
    }
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of a `rows × cols` integer matrix.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d: Mat = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| d[i][j].abs().cmp(&d[k][l].abs()));
            let Some((pi, pj)) = pivot else {
                return finish(d, u, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad_row {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    finish(d, u, v)
}

fn finish(d: Mat, u: Mat, v: Mat) -> SmithForm {
    let k = d.len().min(d.first().map_or(0, Vec::len));
    SmithForm { diagonal: (0..k).map(|i| d[i][i].clone()).collect(), left: u, right: v }
}

impl SmithForm {
    /// Nonzero entries of the diagonal.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|x| !x.is_zero()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// Recomputes `U · A · V` and compares it with the diagonal form.
    pub fn verify(&self, a: &[Vec<BigInt>]) -> bool {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if self.left.len() != rows || self.right.len() != cols {
            return false;
        }
        let ua = mat_mul(&self.left, &a.to_vec(), rows, cols);
        let uav = mat_mul(&ua, &self.right, cols, cols);
        let diagonal_ok = (0..rows).all(|i| {
            (0..cols).all(|j| {
                let expect = if i == j { self.diagonal[i].clone() } else { BigInt::zero() };
                uav[i][j] == expect
            })
        });
        let chain_ok =
            self.diagonal.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) });
        diagonal_ok
            && chain_ok
            && self.diagonal.iter().all(|x| !x.is_negative())
            && determinant_is_unit(&self.left)
            && determinant_is_unit(&self.right)
    }
}

/// Bareiss fraction-free determinant, compared against ±1.
fn determinant_is_unit(m: &Mat) -> bool {
    let k = m.len();
    if k == 0 {
        return true;
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for t in 0..k {
        if a[t][t].is_zero() {
            let Some(r) = (t + 1..k).find(|&r| !a[r][t].is_zero()) else { return false };
            a.swap(t, r);
            sign = -sign;
        }
        for i in t + 1..k {
            for j in t + 1..k {
                let x = &a[i][j] * &a[t][t] - &a[i][t] * &a[t][j];
                a[i][j] = x / &prev;
            }
        }
        prev = a[t][t].clone();
    }
    (sign * &a[k - 1][k - 1]).abs().is_one()
}

/// Rank of `A mod ℓ`, read off as the number of elementary divisors prime to `ℓ`.
pub fn rank_mod_ell(a: &[Vec<BigInt>], ell: u64) -> usize {
    let ell = BigInt::from(ell);
    smith_normal_form(a).elementary_divisors().iter().filter(|d| !d.is_multiple_of(&ell)).count()
}

/// The matrix of the inclusion `⟨gens⟩ → Div` on the union of supports:
/// one row per point (sorted), one column per generator.
pub fn inclusion_matrix(gens: &[SymbolicDivisor]) -> (Vec<PointLabel>, Vec<Vec<BigInt>>) {
    let mut index: BTreeMap<PointLabel, usize> = BTreeMap::new();
    for g in gens {
        for p in g.support() {
            index.entry(*p).or_insert(0);
        }
    }
    for (i, slot) in index.values_mut().enumerate() {
        *slot = i;
    }
    let mut m = vec![vec![BigInt::zero(); gens.len()]; index.len()];
    for (j, g) in gens.iter().enumerate() {
        for (p, c) in g.coeffs() {
            m[index[p]][j] = BigInt::from(*c);
        }
    }
    (index.into_keys().collect(), m)
}

/// True iff the generators are independent and span a saturated subgroup,
/// i.e. every elementary divisor of the inclusion equals 1.
pub fn quotient_is_torsion_free(gens: &[SymbolicDivisor]) -> bool {
    let (_, m) = inclusion_matrix(gens);
    let snf = smith_normal_form(&m);
    snf.rank() == gens.len() && snf.elementary_divisors().iter().all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::BasePoint;

    fn mat(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn diag(a: &Mat) -> Vec<i64> {
        let f = smith_normal_form(a);
        assert!(f.verify(a));
        f.diagonal.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(diag(&mat(&[&[1, 0], &[0, 1]])), vec![1, 1]);
        assert_eq!(diag(&mat(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(diag(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])), vec![2, 6, 12]);
        assert_eq!(diag(&mat(&[&[0, 0], &[0, 0], &[0, 0]])), vec![0, 0]);
        assert_eq!(diag(&mat(&[&[6, 4]])), vec![2]);
    }

    #[test]
    fn inclusion_of_disjoint_reduced_divisors() {
        let pt = |k| PointLabel { base: BasePoint::Generic(k), level: 0, fiber: 0 };
        let a_plus_b = SymbolicDivisor::from_terms(0, [(pt(0), 1), (pt(1), 1)]).unwrap();
        let c = SymbolicDivisor::from_terms(0, [(pt(2), 1)]).unwrap();
        let (_, m) = inclusion_matrix(&[a_plus_b.clone(), c.clone()]);
        assert_eq!(diag(&m), vec![1, 1]);
        assert!(quotient_is_torsion_free(&[a_plus_b.clone(), c]));
        assert!(!quotient_is_torsion_free(&[a_plus_b.scale(2)]));
    }

    #[test]
    fn rank_mod_examples() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        assert_eq!(rank_mod_ell(&m, 2), 1);
        assert_eq!(rank_mod_ell(&m, 5), 2);
    }

    #[test]
    fn unimodular_detection() {
        assert!(determinant_is_unit(&mat(&[&[2, 1], &[1, 1]])));
        assert!(!determinant_is_unit(&mat(&[&[2, 0], &[0, 1]])));
    }
}
