//! Rationals and ℓ-adic valuations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"` (decimal integers, optional sign on `p`).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = match num.parse() {
        Ok(v) => v,
        Err(_) => bail!(Argument, "malformed rational numerator {num:?}"),
    };
    let den: BigInt = match den.parse() {
        Ok(v) => v,
        Err(_) => bail!(Argument, "malformed rational denominator {den:?}"),
    };
    if den.is_zero() {
        bail!(Argument, "zero denominator in {s:?}");
    }
    Ok(Rat::new(num, den))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Deterministic primality test by trial division; `ell` is always small here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An ℓ-adic valuation: an integer, or +∞ for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Valuation::Finite(0)
    }

    /// `v ≥ 0` (ℓ-integral).
    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinite => true,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_val(x: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!x.is_zero());
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// The ℓ-adic valuation of a rational; `ell` must be prime.
pub fn val_ell(x: &Rat, ell: u64) -> Result<Valuation> {
    if !is_prime(ell) {
        bail!(Argument, "{ell} is not prime");
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let p = BigInt::from(ell);
    Ok(Valuation::Finite(int_val(x.numer(), &p) - int_val(x.denom(), &p)))
}

/// True iff `x ≠ 0` and every prime other than `ell` is absent from `x`,
/// i.e. `x ∈ ℤ[1/ℓ]^×`.
pub fn is_unit_away_from(x: &Rat, ell: u64) -> bool {
    if x.is_zero() {
        return false;
    }
    strip_prime(x.numer(), ell).is_one() && strip_prime(x.denom(), ell).is_one()
}

/// True iff the denominator of `x` is a power of `ell`, i.e. `x ∈ ℤ[1/ℓ]`.
pub fn is_integral_away_from(x: &Rat, ell: u64) -> bool {
    strip_prime(x.denom(), ell).is_one()
}

fn strip_prime(x: &BigInt, ell: u64) -> BigInt {
    let p = BigInt::from(ell);
    let mut x = x.abs();
    if x.is_zero() {
        return x;
    }
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return x;
        }
        x = q;
    }
}
