//! Irreducibility certification for monic square-free polynomials over ℚ.
//!
//! No factorization is attempted. Reducibility is witnessed by a rational
//! root; irreducibility is proven either by the rational-root test in degree
//! ≤ 3 or by distinct-degree factorization modulo small primes of good
//! reduction: a factor over ℚ of degree `k` forces `k` to be a sum of factor
//! degrees modulo every such prime, so an empty intersection of those
//! subset-sum sets (away from 0 and `deg p`) rules out all proper factors.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rat::Rat;
use super::resultant::discriminant;
use crate::error::{bail, Result};

/// Primes tried for the mod-p degree patterns (those dividing the
/// discriminant are skipped).
pub const CERTIFICATION_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

const TRIAL_DIVISION_LIMIT: u128 = 1_000_000;
const MAX_DIVISORS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducibilityWitness {
    RationalRoot(Rat),
}

impl std::fmt::Display for ReducibilityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReducibilityWitness::RationalRoot(r) => write!(f, "rational root {}", super::rat::format_rat(r)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible,
    Reducible(ReducibilityWitness),
    Unknown,
}

pub fn certify_irreducible(p: &Poly) -> Result<IrreducibilityVerdict> {
    if !p.is_monic() {
        bail!(Argument, "irreducibility certification needs a monic polynomial, got {p}");
    }
    let d = p.deg();
    if d == 0 {
        bail!(Argument, "constant polynomial has no irreducibility status");
    }
    if d == 1 {
        return Ok(IrreducibilityVerdict::Irreducible);
    }

    // q(x) = D^d p(x / D) is monic with integer coefficients and has roots D·α.
    let den = p.denominator_lcm();
    let q: Vec<BigInt> = (0..=d)
        .map(|i| {
            let scaled = p.coeff(i) * Rat::from_integer(num_traits::pow(den.clone(), d - i));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();

    match integer_root(&q) {
        RootSearch::Found(r) => {
            return Ok(IrreducibilityVerdict::Reducible(ReducibilityWitness::RationalRoot(Rat::new(r, den))));
        }
        RootSearch::NoneExist if d <= 3 => return Ok(IrreducibilityVerdict::Irreducible),
        _ => {}
    }

    let disc = discriminant(&Poly::from_bigints(&q))?;
    if disc.is_zero() {
        bail!(Argument, "{p} is not square-free");
    }
    let disc = disc.to_integer();

    // possible[k] stays true while a factor of degree k is still conceivable
    let mut possible = vec![true; d + 1];
    for &prime in &CERTIFICATION_PRIMES {
        if (&disc % prime).is_zero() {
            continue;
        }
        let f = ModPoly::from_ints(&q, prime);
        let pattern = distinct_degree_pattern(f);
        if pattern.len() == 1 {
            return Ok(IrreducibilityVerdict::Irreducible);
        }
        let sums = subset_sums(&pattern, d);
        for k in 0..=d {
            possible[k] &= sums[k];
        }
        if (1..d).all(|k| !possible[k]) {
            return Ok(IrreducibilityVerdict::Irreducible);
        }
    }
    Ok(IrreducibilityVerdict::Unknown)
}

enum RootSearch {
    Found(BigInt),
    NoneExist,
    Inconclusive,
}

/// Integer roots of a monic integer polynomial divide its constant term.
fn integer_root(q: &[BigInt]) -> RootSearch {
    let c0 = &q[0];
    if c0.is_zero() {
        return RootSearch::Found(BigInt::zero());
    }
    let Some(divisors) = positive_divisors(&c0.abs()) else {
        return RootSearch::Inconclusive;
    };
    for dv in divisors {
        for cand in [dv.clone(), -dv] {
            let val = q.iter().rev().fold(BigInt::zero(), |acc, c| acc * &cand + c);
            if val.is_zero() {
                return RootSearch::Found(cand);
            }
        }
    }
    RootSearch::NoneExist
}

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut rest = n.to_u128()?;
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut p = 2u128;
    while p * p <= rest {
        if p > TRIAL_DIVISION_LIMIT {
            return None;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut divs: Vec<u128> = vec![1];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        if next.len() > MAX_DIVISORS {
            return None;
        }
        divs = next;
    }
    divs.sort_unstable();
    Some(divs.into_iter().map(BigInt::from).collect())
}

fn subset_sums(parts: &[usize], total: usize) -> Vec<bool> {
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &k in parts {
        for s in (k..=total).rev() {
            if reach[s - k] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Polynomial over 𝔽_p, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ModPoly {
    pub(crate) c: Vec<u64>,
    pub(crate) p: u64,
}

impl ModPoly {
    pub(crate) fn from_ints(q: &[BigInt], p: u64) -> ModPoly {
        let m = BigInt::from(p);
        let c = q
            .iter()
            .map(|a| {
                let r = a.mod_floor(&m);
                match r.to_u64_digits() {
                    (Sign::NoSign, _) => 0,
                    (_, digits) => digits[0],
                }
            })
            .collect();
        ModPoly::new(c, p)
    }

    pub(crate) fn new(mut c: Vec<u64>, p: u64) -> ModPoly {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { c, p }
    }

    fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn x(p: u64) -> ModPoly {
        ModPoly::new(vec![0, 1], p)
    }

    fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        ModPoly::new(c, p)
    }

    fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(Vec::new(), self.p);
        }
        let p = self.p as u128;
        let mut c = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u128 * b as u128) % p;
            }
        }
        ModPoly::new(c.into_iter().map(|v| v as u64).collect(), self.p)
    }

    fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let inv = inv_mod(*d.c.last().expect("nonzero divisor"), p);
        let mut r = self.c.clone();
        let dd = d.deg();
        if r.len() <= dd {
            return (ModPoly::new(Vec::new(), p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = (r[i + dd] as u128 * inv as u128 % p as u128) as u64;
            if coef == 0 {
                continue;
            }
            q[i] = coef;
            for (k, &dk) in d.c.iter().enumerate() {
                let t = (coef as u128 * dk as u128 % p as u128) as u64;
                r[i + k] = (r[i + k] + p - t) % p;
            }
        }
        r.truncate(dd);
        (ModPoly::new(q, p), ModPoly::new(r, p))
    }

    fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    fn monic(&self) -> ModPoly {
        let inv = inv_mod(*self.c.last().expect("nonzero"), self.p);
        let c = self.c.iter().map(|&a| (a as u128 * inv as u128 % self.p as u128) as u64).collect();
        ModPoly::new(c, self.p)
    }

    fn gcd(&self, o: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::new(vec![1], self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Degrees of the irreducible factors of a monic square-free polynomial over 𝔽_p.
pub(crate) fn distinct_degree_pattern(f: ModPoly) -> Vec<usize> {
    let p = f.p;
    let mut f = f.monic();
    let mut out = Vec::new();
    let mut h = ModPoly::x(p).rem(&f);
    let mut i = 1;
    while f.deg() >= 2 * i {
        h = h.pow_mod(p, &f);
        let g = f.gcd(&h.sub(&ModPoly::x(p)));
        if g.deg() > 0 {
            out.extend(std::iter::repeat_n(i, g.deg() / i));
            f = f.div_rem(&g).0;
            h = h.rem(&f);
        }
        i += 1;
    }
    if f.deg() > 0 {
        out.push(f.deg());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn verdict(c: &[i64]) -> IrreducibilityVerdict {
        certify_irreducible(&Poly::from_ints(c)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(verdict(&[-2, 1]), IrreducibilityVerdict::Irreducible);
        assert_eq!(verdict(&[-1, 0, 1]), IrreducibilityVerdict::Reducible(ReducibilityWitness::RationalRoot(int(1))));
        assert_eq!(verdict(&[1, 1, 1]), IrreducibilityVerdict::Irreducible);
    }

    #[test]
    fn x2_plus_x_plus_1_has_no_factor_pair_over_f2() {
        // brute force: the only monic linear polys over F_2 are x and x+1
        for a in 0..2u64 {
            // (x + a) divides x^2 + x + 1 iff -a is a root
            let root = (2 - a) % 2;
            assert_ne!((root * root + root + 1) % 2, 0);
        }
        let f = ModPoly::new(vec![1, 1, 1], 2);
        assert_eq!(distinct_degree_pattern(f), vec![2]);
    }

    #[test]
    fn rejects_non_monic_and_constants() {
        assert!(certify_irreducible(&Poly::from_ints(&[1, 2])).is_err());
        assert!(certify_irreducible(&Poly::one()).is_err());
    }

    #[test]
    fn rational_coefficients_are_scaled() {
        // x^2 - 1/4 = (x - 1/2)(x + 1/2)
        let p = Poly::new(vec![rat(-1, 4), int(0), int(1)]);
        match certify_irreducible(&p).unwrap() {
            IrreducibilityVerdict::Reducible(ReducibilityWitness::RationalRoot(r)) => {
                assert!(p.eval(&r).is_zero())
            }
            other => panic!("unexpected {other:?}"),
        }
        let p = Poly::new(vec![rat(1, 2), int(0), int(1)]);
        assert_eq!(certify_irreducible(&p).unwrap(), IrreducibilityVerdict::Irreducible);
    }

    #[test]
    fn quartic_patterns() {
        // x^4 + 1 is irreducible over Q but splits into quadratics mod every prime,
        // so the degree patterns can never decide it.
        assert_eq!(verdict(&[1, 0, 0, 0, 1]), IrreducibilityVerdict::Unknown);
        // x^4 - 2 stays irreducible mod 5
        assert_eq!(verdict(&[-2, 0, 0, 0, 1]), IrreducibilityVerdict::Irreducible);
        // (x^2+1)(x^2+2): no rational root, degree pattern cannot exclude 2
        assert_eq!(verdict(&[2, 0, 3, 0, 1]), IrreducibilityVerdict::Unknown);
        // x^5 - x - 1 is irreducible mod 5
        assert_eq!(verdict(&[-1, -1, 0, 0, 0, 1]), IrreducibilityVerdict::Irreducible);
    }

    #[test]
    fn ddf_pattern() {
        // (x)(x+1)(x^2+x+1) over F_2
        let f = ModPoly::new(vec![0, 1], 2).mul(&ModPoly::new(vec![1, 1], 2)).mul(&ModPoly::new(vec![1, 1, 1], 2));
        let mut pat = distinct_degree_pattern(f);
        pat.sort();
        assert_eq!(pat, vec![1, 1, 2]);
    }

    proptest::proptest! {
        #[test]
        fn never_irreducible_with_rational_root(
            r in -30i64..30, s in 1i64..6,
            rest in proptest::collection::vec(-9i64..9, 1..4),
        ) {
            // (x - r/s) · (monic integer cofactor)
            let mut cof: Vec<i64> = rest.clone();
            cof.push(1);
            let p = &Poly::linear(rat(r, s)) * &Poly::from_ints(&cof);
            if crate::exactalg::squarefree_decompose(&p).unwrap().is_squarefree() {
                let v = certify_irreducible(&p).unwrap();
                proptest::prop_assert_ne!(v, IrreducibilityVerdict::Irreducible);
            }
        }
    }
}
