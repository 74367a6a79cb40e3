//! Independent oracles and seeded instance generators for tests.
//!
//! Nothing here is used by the library proper; every oracle is written
//! against a different formula or algorithm than the code it checks.

use std::collections::BTreeMap;

use num_traits::{One, Pow, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divisors::{BasePoint, PointLabel, SymbolicDivisor};
use crate::exactalg::{certify_irreducible, int, rat, val_ell, IrreducibilityVerdict, Poly, Rat};
use crate::model::{CurveModel, MobiusRecord, Pivot, Place};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Determinant of the Sylvester matrix by rational Gaussian elimination.
pub fn sylvester_resultant(p: &Poly, q: &Poly) -> Rat {
    let (m, n) = (p.deg(), q.deg());
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut a = vec![vec![Rat::zero(); size]; size];
    let pc: Vec<Rat> = p.coeffs().iter().rev().cloned().collect();
    let qc: Vec<Rat> = q.coeffs().iter().rev().cloned().collect();
    for i in 0..n {
        for (k, c) in pc.iter().enumerate() {
            a[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().enumerate() {
            a[n + i][i + k] = c.clone();
        }
    }
    determinant(a)
}

pub fn determinant(mut a: Vec<Vec<Rat>>) -> Rat {
    let k = a.len();
    let mut det = Rat::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            let f = row[c].clone() / pivot[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= f.clone() * y.clone();
            }
        }
    }
    det
}

/// Rank over `𝔽_ℓ` by column-wise elimination with extended-Euclid inverses.
pub fn fl_rank(rows: &[Vec<i128>], ell: u64) -> usize {
    let p = ell as i128;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut used = vec![false; a.len()];
    let mut rank = 0;
    for c in 0..ncols {
        let Some(r) = (0..a.len()).find(|&r| !used[r] && a[r][c] != 0) else { continue };
        used[r] = true;
        rank += 1;
        let inv = inverse_mod(a[r][c], p);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c] * inv % p;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
    }
    rank
}

fn inverse_mod(a: i128, p: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a, p, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

/// Genus of `C_s` from the degree of the ramification divisor: each branch
/// point with fiber size `k` contributes `ℓ^s - k`.
pub fn genus_by_ramification_divisor(ell: u64, s: u32, fibers: &[(u32, u64)]) -> i128 {
    let big = (ell as i128).pow(s);
    let ram: i128 = fibers.iter().map(|&(j, degree)| degree as i128 * (big - (ell as i128).pow(j.min(s)))).sum();
    (ram - 2 * big + 2) / 2
}

/// Pairs `(i, j)` of degree-1 branch places whose roots differ by a non-unit
/// in the `v_ℓ = 0` sense, computed from the explicit roots.
pub fn brute_force_offending_pairs(model: &CurveModel) -> Vec<(usize, usize)> {
    let big_n = model.cover_degree();
    let roots: Vec<(usize, Rat)> = model
        .places()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.exponent().rem_euclid(big_n) != 0)
        .map(|(i, p)| {
            assert_eq!(p.degree(), 1, "brute force needs linear places");
            (i, -p.poly().coeff(0))
        })
        .collect();
    let mut out = Vec::new();
    for (a, (i, x)) in roots.iter().enumerate() {
        for (j, y) in &roots[a + 1..] {
            if !val_ell(&(x - y), model.ell()).unwrap().is_zero() {
                out.push((*i, *j));
            }
        }
    }
    out
}

/// `p(ξ₀ + 1/X) · X^d` expanded directly as `Σ c_k (ξ₀X + 1)^k X^(d-k)`.
fn moved_numerator(p: &Poly, pivot: &Pivot) -> Poly {
    match pivot {
        Pivot::Infinity => p.clone(),
        Pivot::Finite(a) => {
            let d = p.deg();
            let lin = Poly::new(vec![int(1), a.clone()]);
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                let term = lin.pow(k as u32) * Poly::monomial(c.clone(), d - k);
                acc = acc + term;
            }
            acc
        }
    }
}

/// A nonzero rational function `c · ∏ q^e` with monic `q`, kept factored.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Factored {
    constant: Rat,
    factors: BTreeMap<Poly, i64>,
}

impl Factored {
    fn new(c: Rat) -> Self {
        Factored { constant: c, factors: BTreeMap::new() }
    }

    fn mul_poly(&mut self, p: &Poly, e: i64) {
        if e == 0 {
            return;
        }
        self.constant *= rat_pow(&p.lc(), e);
        if p.deg() > 0 {
            let slot = self.factors.entry(p.monic()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                let key = p.monic();
                self.factors.remove(&key);
            }
        }
    }

    fn expand(&self) -> (Poly, Poly) {
        let mut num = Poly::constant(self.constant.clone());
        let mut den = Poly::one();
        for (p, &e) in &self.factors {
            if e > 0 {
                num = num * p.pow(e as u32);
            } else {
                den = den * p.pow((-e) as u32);
            }
        }
        (num, den)
    }

    fn total_degree(&self) -> u64 {
        self.factors.iter().map(|(p, e)| p.deg() as u64 * e.unsigned_abs()).sum()
    }
}

fn rat_pow(x: &Rat, e: i64) -> Rat {
    if e >= 0 {
        Pow::pow(x, e as u64)
    } else {
        Pow::pow(&x.recip(), e.unsigned_abs())
    }
}

/// Checks `λ f(ξ₀ + 1/X) = λ̂ f̂(X) · ∏ g(X)^(c ℓ^n)` as an identity of
/// rational functions, in factored form always and fully expanded when the
/// degrees are small.
pub fn substitution_identity_holds(input: &CurveModel, output: &CurveModel, record: &MobiusRecord) -> bool {
    let big_n = input.cover_degree();
    let mut lhs = Factored::new(input.lambda().clone());
    for p in input.places() {
        lhs.mul_poly(&moved_numerator(p.poly(), &record.pivot), p.exponent());
        if matches!(record.pivot, Pivot::Finite(_)) {
            lhs.mul_poly(&Poly::x(), -(p.degree() as i64) * p.exponent());
        }
    }
    let mut rhs = Factored::new(output.lambda().clone());
    for p in output.places() {
        rhs.mul_poly(p.poly(), p.exponent());
    }
    for (g, c) in &record.y_rescale {
        rhs.mul_poly(g, c * big_n);
    }
    if lhs != rhs {
        return false;
    }
    if lhs.total_degree() <= 48 {
        let (ln, ld) = lhs.expand();
        let (rn, rd) = rhs.expand();
        return ln * rd == rn * ld;
    }
    true
}

/// A random monic polynomial of degree `d` (1 to 3) that is certified
/// irreducible.
pub fn random_irreducible<R: Rng>(rng: &mut R, d: usize, allow_fractions: bool) -> Poly {
    loop {
        let p = if d == 1 {
            let num = rng.gen_range(-12i64..=12);
            let den = if allow_fractions { *[1, 1, 1, 2, 3, 5].choose(rng).unwrap() } else { 1 };
            Poly::linear(rat(num, den))
        } else {
            let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-6i64..=6)).collect();
            c.push(1);
            Poly::from_ints(&c)
        };
        if certify_irreducible(&p) == Ok(IrreducibilityVerdict::Irreducible) {
            return p;
        }
    }
}

fn random_degree<R: Rng>(rng: &mut R) -> usize {
    *[1, 1, 1, 2, 2, 3].choose(rng).unwrap()
}

fn fresh_place<R: Rng>(rng: &mut R, taken: &[Poly], d: usize, allow_fractions: bool) -> Poly {
    loop {
        let p = random_irreducible(rng, d, allow_fractions);
        if !taken.contains(&p) {
            return p;
        }
    }
}

/// Parameters of the random corpus.
#[derive(Debug, Clone, Copy)]
pub struct CorpusParams {
    pub ells: &'static [u64],
    pub max_n: u32,
    pub max_places: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { ells: &[2, 3, 5], max_n: 3, max_places: 8 }
    }
}

/// A geometrically irreducible normalized model: the first place has
/// multiplicity prime to `ℓ`, and a final linear place (if needed) makes
/// `Σ e·deg ≡ 0 (mod ℓ^n)`.
pub fn random_normalized_model<R: Rng>(rng: &mut R, params: CorpusParams) -> CurveModel {
    loop {
        let ell = *params.ells.choose(rng).unwrap();
        let n = rng.gen_range(1..=params.max_n);
        let big_n = (ell as i64).pow(n);
        let k = rng.gen_range(1..params.max_places);
        let mut polys: Vec<Poly> = Vec::new();
        let mut exps = Vec::new();
        for i in 0..k {
            let d = random_degree(rng);
            let p = fresh_place(rng, &polys, d, true);
            let e = loop {
                let e = rng.gen_range(1..big_n);
                if i > 0 || e % ell as i64 != 0 {
                    break e;
                }
            };
            polys.push(p);
            exps.push(e);
        }
        let total: i64 = polys.iter().zip(&exps).map(|(p, e)| p.deg() as i64 * e).sum();
        let rest = (-total).rem_euclid(big_n);
        if rest != 0 {
            polys.push(fresh_place(rng, &polys, 1, true));
            exps.push(rest);
        }
        let places: Option<Vec<Place>> = polys.into_iter().zip(exps).map(|(p, e)| Place::new(p, e).ok()).collect();
        let lambda = random_lambda(rng);
        if let Some(places) = places {
            if let Ok(m) = CurveModel::new_normalized(ell, n, lambda, places) {
                return m;
            }
        }
    }
}

fn random_lambda<R: Rng>(rng: &mut R) -> Rat {
    loop {
        let num = rng.gen_range(-20i64..=20);
        if num != 0 {
            return rat(num, rng.gen_range(1i64..=6));
        }
    }
}

/// An arbitrary model: exponents anywhere in `[-2ℓ^n, 2ℓ^n] - {0}`, so `∞`
/// is often branched and exponents often exceed `ℓ^n`.
pub fn random_pre_model<R: Rng>(rng: &mut R, params: CorpusParams) -> CurveModel {
    let ell = *params.ells.choose(rng).unwrap();
    let n = rng.gen_range(1..=params.max_n);
    let big_n = (ell as i64).pow(n);
    let k = rng.gen_range(1..=params.max_places.min(5));
    let mut polys: Vec<Poly> = Vec::new();
    let mut factors = Vec::new();
    for i in 0..k {
        let d = random_degree(rng);
        let p = fresh_place(rng, &polys, d, true);
        // the first place stays branched so the model is never degenerate
        let e = loop {
            let e = rng.gen_range(-2 * big_n..=2 * big_n);
            if e != 0 && (i > 0 || e % big_n != 0) {
                break e;
            }
        };
        polys.push(p.clone());
        // scale some factors so they are not monic
        let c = *[1i64, 1, 2, -3].choose(rng).unwrap();
        factors.push((p.scale(&int(c)), e));
    }
    CurveModel::from_factors(ell, n, random_lambda(rng), &factors).expect("generated factors are valid")
}

/// A polynomial model whose places are all linear with small rational roots.
pub fn random_linear_model<R: Rng>(rng: &mut R, ell: u64, n: u32, max_places: usize) -> CurveModel {
    let big_n = (ell as i64).pow(n);
    let k = rng.gen_range(2..=max_places);
    let mut polys: Vec<Poly> = Vec::new();
    let mut factors = Vec::new();
    for _ in 0..k {
        let p = fresh_place(rng, &polys, 1, true);
        polys.push(p.clone());
        factors.push((p, rng.gen_range(1..big_n)));
    }
    CurveModel::from_factors(ell, n, int(1), &factors).expect("generated factors are valid")
}

/// Pairwise-disjoint reduced divisors on one curve.
pub fn random_disjoint_family<R: Rng>(rng: &mut R) -> Vec<SymbolicDivisor> {
    let level = rng.gen_range(0..4);
    let total = rng.gen_range(2..40usize);
    let mut points: Vec<PointLabel> = (0..total)
        .map(|i| PointLabel {
            base: if i % 7 == 0 { BasePoint::Infinity } else { BasePoint::Generic(i as u32 / 3) },
            level,
            fiber: i as u64,
        })
        .collect();
    points.shuffle(rng);
    let used = rng.gen_range(1..=total);
    let groups = rng.gen_range(1..=used.min(8));
    let mut cuts: Vec<usize> = (1..used).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(groups - 1).collect();
    cuts.push(0);
    cuts.push(used);
    cuts.sort_unstable();
    cuts.windows(2)
        .map(|w| SymbolicDivisor::from_terms(level, points[w[0]..w[1]].iter().map(|p| (*p, 1))).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_agree_on_small_cases() {
        let p = Poly::from_ints(&[-1, 1]);
        let q = Poly::from_ints(&[-3, 1]);
        assert_eq!(sylvester_resultant(&p, &q), int(-2));
        assert_eq!(fl_rank(&[vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(fl_rank(&[vec![1, 2], vec![2, 4]], 2), 1);
        assert_eq!(fl_rank(&[vec![2, 0], vec![0, 2]], 2), 0);
        assert_eq!(genus_by_ramification_divisor(3, 1, &[(0, 5)]), 3);
        assert_eq!(genus_by_ramification_divisor(2, 2, &[(0, 2), (1, 1)]), 1);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_normalized_model(&mut rng(7), CorpusParams::default());
        let b = random_normalized_model(&mut rng(7), CorpusParams::default());
        assert_eq!(a, b);
        for f in random_disjoint_family(&mut rng(3)).windows(2) {
            assert!(f[0].disjoint_from(&f[1]));
        }
    }
}
