//! Resultants and discriminants.
//!
//! Sign convention (used everywhere in the crate): `Res(p, q)` is the
//! determinant of the Sylvester matrix whose first `deg q` rows carry the
//! coefficients of `p`. Equivalently
//!
//! ```text
//! Res(p, q) = lc(p)^deg(q) · ∏_{p(α)=0} q(α)
//!           = (-1)^(deg p · deg q) · lc(q)^deg(p) · ∏_{q(β)=0} p(β)
//! ```
//!
//! and `disc(p) = (-1)^(d(d-1)/2) · Res(p, p') / lc(p)` for `d = deg p`.
//! Downstream code only looks at ℓ-adic valuations, which ignore the sign.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::poly::Poly;
use super::rat::Rat;
use crate::error::{bail, Result};

/// Resultant of two nonzero polynomials, via the subresultant PRS on their
/// primitive integer parts.
pub fn resultant(p: &Poly, q: &Poly) -> Result<Rat> {
    if p.is_zero() || q.is_zero() {
        bail!(Argument, "resultant of the zero polynomial");
    }
    let (dp, dq) = (p.deg(), q.deg());
    let (cp, pp) = p.primitive_part();
    let (cq, pq) = q.primitive_part();
    let scale = Pow::pow(&cp, dq as u32) * Pow::pow(&cq, dp as u32);
    Ok(scale * Rat::from_integer(int_resultant(pp, pq)))
}

/// Collins/Brown subresultant algorithm over ℤ (Cohen, Alg. 3.3.7).
/// Inputs are primitive and nonzero.
fn int_resultant(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> BigInt {
    let deg = |v: &Vec<BigInt>| v.len() - 1;
    let mut sign = BigInt::one();
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    // Constant cases: Res(a, c) = c^deg a.
    if deg(&b) == 0 {
        return sign * Pow::pow(&b[0], deg(&a) as u32);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (deg(&a) - deg(&b)) as u32;
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let divisor = &g * Pow::pow(&h, delta);
        a = b;
        b = r.into_iter().map(|c| exact(&c, &divisor)).collect();
        g = a.last().expect("nonzero").clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 { h } else { exact(&Pow::pow(&g, delta), &Pow::pow(&h, delta - 1)) };
        if deg(&b) == 0 {
            let da = deg(&a) as u32;
            let lb = &b[0];
            // h <- lb^da / h^(da - 1)
            let res = exact(&Pow::pow(lb, da), &Pow::pow(&h, da - 1));
            return sign * res;
        }
    }
}

fn exact(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "inexact subresultant division");
    q
}

/// `lc(b)^(deg a - deg b + 1) · a mod b` over ℤ, trimmed (empty = zero).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = a.len() - db;
    while r.len() > db {
        let top = r.pop().expect("nonempty");
        let shift = r.len() - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (k, bk) in b[..db].iter().enumerate() {
            r[shift + k] -= &top * bk;
        }
        steps -= 1;
        while r.last().is_some_and(Zero::is_zero) && r.len() > db {
            r.pop();
            for c in r.iter_mut() {
                *c *= lb;
            }
            steps -= 1;
        }
    }
    for _ in 0..steps {
        for c in r.iter_mut() {
            *c *= lb;
        }
    }
    while r.last().is_some_and(Zero::is_zero) {
        r.pop();
    }
    r
}

/// Discriminant of a nonconstant polynomial.
pub fn discriminant(p: &Poly) -> Result<Rat> {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => bail!(Argument, "discriminant of a constant polynomial"),
    };
    let res = resultant(p, &p.derivative())?;
    let signed = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    Ok(signed / p.lc())
}
