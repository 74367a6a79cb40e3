//! Affine models `y^(ℓ^n) = λ · ∏ p_i(x)^(e_i)` and their normalization.
//!
//! A model is *normalized* when `f` is a polynomial whose roots are exactly
//! the branch points, `∞` is unbranched, and every multiplicity lies in
//! `(0, ℓ^n)`. [`CurveModel::normalize`] reaches that form with a Möbius
//! change of the `x`-coordinate followed by a monomial change of `y`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::{bail, Result};
use crate::exactalg::{
    certify_irreducible, format_rat, int, is_prime, squarefree_decompose, IrreducibilityVerdict, Poly, Rat,
};

/// Largest cover degree `ℓ^n` accepted; keeps multiplicities and genus
/// arithmetic comfortably inside machine integers.
pub const MAX_COVER_DEGREE: i64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrreducibilityStatus {
    /// Proven irreducible over ℚ.
    Certified,
    /// Neither proven nor refuted; the orbit structure is taken on trust.
    Assumed,
}

/// One Galois orbit of roots: a monic irreducible polynomial and the shared
/// multiplicity of its roots in `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Place {
    poly: Poly,
    exponent: i64,
    status: IrreducibilityStatus,
}

impl Place {
    /// Validates `poly` (monic, nonconstant, square-free, not provably
    /// reducible) and certifies its irreducibility where possible.
    pub fn new(poly: Poly, exponent: i64) -> Result<Place> {
        if exponent == 0 {
            bail!(Validation, "place {poly} has exponent 0");
        }
        let status = validated_status(&poly)?;
        Ok(Place { poly, exponent, status })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn status(&self) -> IrreducibilityStatus {
        self.status
    }

    fn with_exponent(&self, exponent: i64) -> Place {
        Place { exponent, ..self.clone() }
    }
}

fn validated_status(poly: &Poly) -> Result<IrreducibilityStatus> {
    if poly.deg() == 0 {
        bail!(Validation, "place polynomial {poly} is constant");
    }
    if !poly.is_monic() {
        bail!(Validation, "place polynomial {poly} is not monic");
    }
    if !squarefree_decompose(poly)?.is_squarefree() {
        bail!(Validation, "place polynomial {poly} is not square-free");
    }
    match certify_irreducible(poly)? {
        IrreducibilityVerdict::Irreducible => Ok(IrreducibilityStatus::Certified),
        IrreducibilityVerdict::Unknown => Ok(IrreducibilityStatus::Assumed),
        IrreducibilityVerdict::Reducible(w) => {
            bail!(Validation, "factor {poly} is reducible over Q ({w})")
        }
    }
}

/// A branch point of the `x`-coordinate map, with its multiplicity `e_ξ(f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchPoint {
    /// Every root of `places[index]`.
    Place { index: usize, n_value: i64 },
    /// The point at infinity; `n_value = deg f₁ - deg f₂`.
    Infinity { n_value: i64 },
}

/// The point `ξ₀` used for the coordinate change `x ↦ 1/(x - ξ₀)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pivot {
    Infinity,
    Finite(Rat),
}

impl fmt::Display for Pivot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pivot::Infinity => f.write_str("infinity"),
            Pivot::Finite(r) => f.write_str(&format_rat(r)),
        }
    }
}

/// How a normalized model was obtained from its input.
///
/// With `X` the new coordinate (`X = x` for an infinite pivot, otherwise
/// `X = 1/(x - ξ₀)`) and `ŷ` the new `y`, the input equation is recovered by
///
/// ```text
/// y = ŷ · ∏ g(X)^c      for (g, c) in y_rescale.
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusRecord {
    pub pivot: Pivot,
    pub y_rescale: Vec<(Poly, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    ell: u64,
    n: u32,
    lambda: Rat,
    places: Vec<Place>,
    normalized: bool,
}

impl CurveModel {
    /// Builds an unnormalized model from validated places.
    pub fn new(ell: u64, n: u32, lambda: Rat, places: Vec<Place>) -> Result<CurveModel> {
        check_header(ell, n, &lambda)?;
        for (i, a) in places.iter().enumerate() {
            for b in &places[i + 1..] {
                if a.poly.gcd(&b.poly).deg() > 0 {
                    bail!(Validation, "places {} and {} share a root", a.poly, b.poly);
                }
            }
        }
        Ok(CurveModel { ell, n, lambda, places, normalized: false })
    }

    /// Builds a model from arbitrary factors `(poly, exponent)`.
    ///
    /// Factors need not be monic: leading coefficients are folded into `λ`,
    /// constant factors are absorbed entirely, and repeated factors have
    /// their exponents added.
    pub fn from_factors(ell: u64, n: u32, lambda: Rat, factors: &[(Poly, i64)]) -> Result<CurveModel> {
        check_header(ell, n, &lambda)?;
        let mut lambda = lambda;
        let mut merged: Vec<(Poly, i64)> = Vec::new();
        for (poly, e) in factors {
            if poly.is_zero() {
                bail!(Validation, "zero factor");
            }
            if *e == 0 {
                continue;
            }
            lambda *= rat_pow(&poly.lc(), *e);
            if poly.deg() == 0 {
                continue;
            }
            let m = poly.monic();
            match merged.iter_mut().find(|(q, _)| *q == m) {
                Some(slot) => slot.1 += e,
                None => merged.push((m, *e)),
            }
        }
        let places =
            merged.into_iter().filter(|(_, e)| *e != 0).map(|(p, e)| Place::new(p, e)).collect::<Result<Vec<_>>>()?;
        CurveModel::new(ell, n, lambda, places)
    }

    /// Builds a model and re-checks every normalization invariant.
    pub fn new_normalized(ell: u64, n: u32, lambda: Rat, places: Vec<Place>) -> Result<CurveModel> {
        let mut m = CurveModel::new(ell, n, lambda, places)?;
        let big_n = m.cover_degree();
        for p in &m.places {
            if p.exponent <= 0 || p.exponent >= big_n {
                bail!(Validation, "exponent {} of {} outside (0, {big_n})", p.exponent, p.poly);
            }
        }
        if m.infinity_exponent().rem_euclid(big_n) != 0 {
            bail!(Validation, "infinity is a branch point of a normalized model");
        }
        m.normalized = true;
        Ok(m)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `ℓ^n`, the degree of the cover.
    pub fn cover_degree(&self) -> i64 {
        (self.ell as i64).pow(self.n)
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `e_∞(f) = deg f₁ - deg f₂`.
    pub fn infinity_exponent(&self) -> i64 {
        self.places.iter().map(|p| p.exponent * p.degree() as i64).sum()
    }

    /// True iff every exponent is positive, i.e. `f` is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.places.iter().all(|p| p.exponent > 0)
    }

    /// Places with `e ≢ 0 (mod ℓ^n)`, then `∞` if it is branched.
    pub fn branch_set(&self) -> Vec<BranchPoint> {
        let big_n = self.cover_degree();
        let mut out: Vec<BranchPoint> = self
            .places
            .iter()
            .enumerate()
            .filter(|(_, p)| p.exponent.rem_euclid(big_n) != 0)
            .map(|(index, p)| BranchPoint::Place { index, n_value: p.exponent })
            .collect();
        let e_inf = self.infinity_exponent();
        if e_inf.rem_euclid(big_n) != 0 {
            out.push(BranchPoint::Infinity { n_value: e_inf });
        }
        out
    }

    pub fn infinity_is_branched(&self) -> bool {
        self.infinity_exponent().rem_euclid(self.cover_degree()) != 0
    }

    /// `∞` when it is unbranched, otherwise the least nonnegative integer
    /// that is not a root of any place polynomial.
    pub fn pivot_select(&self) -> Pivot {
        if !self.infinity_is_branched() {
            return Pivot::Infinity;
        }
        (0i64..)
            .map(int)
            .find(|x| self.places.iter().all(|p| !p.poly.eval(x).is_zero()))
            .map(Pivot::Finite)
            .expect("a polynomial has finitely many roots")
    }

    /// Normal form: polynomial `f`, `∞` unbranched, all multiplicities in `(0, ℓ^n)`.
    ///
    /// For a finite pivot `ξ₀` each factor `p` of degree `d` becomes
    /// `X^d · p(ξ₀ + 1/X) = p(ξ₀) · p̂(X)` with `p̂` monic, and the pole or
    /// zero of `f` at `∞` reappears as the place `X` with exponent
    /// `-e_∞(f)`. Hence
    ///
    /// ```text
    /// λ̂ = λ · ∏ p(ξ₀)^e .
    /// ```
    ///
    /// Exponent reduction then multiplies `f` by `g^(ê·ℓ^n)` with
    /// `ê = ⌈-e/ℓ^n⌉` for each place, leaving `λ̂` untouched; places whose
    /// exponent becomes 0 leave the model.
    pub fn normalize(&self) -> Result<(CurveModel, MobiusRecord)> {
        if self.places.is_empty() {
            bail!(Degenerate, "f is constant");
        }
        let big_n = self.cover_degree();
        let pivot = self.pivot_select();
        let (lambda, moved) = match &pivot {
            Pivot::Infinity => (self.lambda.clone(), self.places.clone()),
            Pivot::Finite(xi0) => {
                let mut lambda = self.lambda.clone();
                let mut moved = Vec::with_capacity(self.places.len() + 1);
                let e_inf = self.infinity_exponent();
                if e_inf != 0 {
                    moved.push(Place { poly: Poly::x(), exponent: -e_inf, status: IrreducibilityStatus::Certified });
                }
                for p in &self.places {
                    let turned = p.poly.shift(xi0).reversal();
                    let head = turned.lc();
                    debug_assert_eq!(head, p.poly.eval(xi0));
                    lambda *= rat_pow(&head, p.exponent);
                    moved.push(Place { poly: turned.monic(), ..p.clone() });
                }
                (lambda, moved)
            }
        };

        let mut places = Vec::with_capacity(moved.len());
        let mut y_rescale = Vec::new();
        for p in moved {
            let e_hat = Integer::div_ceil(&-p.exponent, &big_n);
            let reduced = p.exponent + e_hat * big_n;
            if e_hat != 0 {
                y_rescale.push((p.poly.clone(), -e_hat));
            }
            if reduced != 0 {
                places.push(p.with_exponent(reduced));
            }
        }
        let model = CurveModel::new_normalized(self.ell, self.n, lambda, places)?;
        Ok((model, MobiusRecord { pivot, y_rescale }))
    }
}

fn check_header(ell: u64, n: u32, lambda: &Rat) -> Result<()> {
    if !is_prime(ell) {
        bail!(Validation, "ell = {ell} is not prime");
    }
    if n == 0 {
        bail!(Validation, "n must be at least 1");
    }
    let fits = (ell as i64).checked_pow(n).is_some_and(|big_n| big_n <= MAX_COVER_DEGREE);
    if !fits {
        bail!(Validation, "cover degree {ell}^{n} exceeds {MAX_COVER_DEGREE}");
    }
    if lambda.is_zero() {
        bail!(Validation, "lambda must be nonzero");
    }
    Ok(())
}

pub(crate) fn rat_pow(x: &Rat, e: i64) -> Rat {
    if e >= 0 {
        Pow::pow(x, e as u64)
    } else {
        Pow::pow(&x.recip(), e.unsigned_abs())
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^{} = {}", self.cover_degree(), format_rat(&self.lambda))?;
        for p in &self.places {
            if p.exponent.is_one() {
                write!(f, " * ({})", p.poly)?;
            } else {
                write!(f, " * ({})^{}", p.poly, p.exponent)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn model(ell: u64, n: u32, lambda: Rat, f: &[(&[i64], i64)]) -> CurveModel {
        let factors: Vec<_> = f.iter().map(|(c, e)| (Poly::from_ints(c), *e)).collect();
        CurveModel::from_factors(ell, n, lambda, &factors).unwrap()
    }

    #[test]
    fn branch_set_examples() {
        let m = model(2, 1, int(1), &[(&[-2, 1], 3)]);
        assert_eq!(
            m.branch_set(),
            vec![BranchPoint::Place { index: 0, n_value: 3 }, BranchPoint::Infinity { n_value: 3 }]
        );
        let m = model(3, 1, int(1), &[(&[0, 1], 1), (&[-1, 1], 1), (&[-2, 1], 1)]);
        assert_eq!(m.branch_set().len(), 3);
        assert!(!m.infinity_is_branched());
        let m = model(2, 1, int(1), &[(&[-1, 1], 2)]);
        assert!(m.branch_set().is_empty());
    }

    #[test]
    fn normalize_cusp() {
        let m = model(2, 1, int(1), &[(&[-2, 1], 3)]);
        let (out, rec) = m.normalize().unwrap();
        assert_eq!(rec.pivot, Pivot::Finite(int(0)));
        assert_eq!(*out.lambda(), int(-8));
        let polys: Vec<_> = out.places().iter().map(|p| (p.poly().clone(), p.exponent())).collect();
        assert_eq!(polys, vec![(Poly::x(), 1), (Poly::linear(rat(1, 2)), 1)]);
        assert!(out.is_normalized());
    }

    #[test]
    fn normalize_keeps_normal_models() {
        let m = model(2, 1, int(1), &[(&[0, 1], 1), (&[-1, 1], 1)]);
        let (out, rec) = m.normalize().unwrap();
        assert_eq!(rec.pivot, Pivot::Infinity);
        assert!(rec.y_rescale.is_empty());
        assert_eq!(out.places(), m.places());
        assert_eq!(out.normalize().unwrap().0, out);
    }

    #[test]
    fn normalize_reduces_exponents() {
        let m = model(3, 1, int(1), &[(&[-1, 1], 4), (&[1, 1], 2)]);
        let (out, rec) = m.normalize().unwrap();
        assert_eq!(rec.pivot, Pivot::Infinity);
        let exps: Vec<_> = out.places().iter().map(|p| p.exponent()).collect();
        assert_eq!(exps, vec![1, 2]);
        assert_eq!(rec.y_rescale, vec![(Poly::from_ints(&[-1, 1]), 1)]);
    }

    #[test]
    fn pivot_examples() {
        assert_eq!(model(2, 1, int(1), &[(&[0, 1], 1), (&[-1, 1], 1)]).pivot_select(), Pivot::Infinity);
        assert_eq!(model(2, 1, int(1), &[(&[-2, 1], 3)]).pivot_select(), Pivot::Finite(int(0)));
        assert_eq!(model(2, 1, int(1), &[(&[0, 1], 3), (&[-1, 1], 1)]).pivot_select(), Pivot::Infinity);
        // 0 and 1 are roots, so the pivot moves on to 2
        assert_eq!(model(2, 1, int(1), &[(&[0, 1], 1), (&[-1, 1], 2)]).pivot_select(), Pivot::Finite(int(2)));
    }

    #[test]
    fn all_places_vanish() {
        let m = model(2, 1, int(1), &[(&[-1, 1], 2), (&[-2, 1], 2)]);
        let (out, _) = m.normalize().unwrap();
        assert!(out.places().is_empty());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(CurveModel::from_factors(4, 1, int(1), &[(Poly::x(), 1)]), Err(crate::Error::Validation(_))));
        assert!(CurveModel::from_factors(3, 0, int(1), &[(Poly::x(), 1)]).is_err());
        assert!(CurveModel::from_factors(3, 1, int(0), &[(Poly::x(), 1)]).is_err());
        // reducible factor
        assert!(CurveModel::from_factors(3, 1, int(1), &[(Poly::from_ints(&[-1, 0, 1]), 1)]).is_err());
        // non-square-free factor
        assert!(CurveModel::from_factors(3, 1, int(1), &[(Poly::from_ints(&[0, 0, 1]), 1)]).is_err());
        assert!(matches!(CurveModel::new(3, 1, int(1), vec![]).unwrap().normalize(), Err(crate::Error::Degenerate(_))));
        assert!(CurveModel::from_factors(2, 64, int(1), &[(Poly::x(), 1)]).is_err());
    }

    #[test]
    fn factors_are_made_monic_and_merged() {
        let m = CurveModel::from_factors(
            3,
            1,
            int(1),
            &[(Poly::from_ints(&[-6, 3]), 1), (Poly::from_ints(&[-2, 1]), 1), (Poly::from_ints(&[5]), 2)],
        )
        .unwrap();
        assert_eq!(*m.lambda(), int(75));
        assert_eq!(m.places().len(), 1);
        assert_eq!(m.places()[0].exponent(), 2);
    }

    #[test]
    fn new_normalized_rechecks() {
        let p = Place::new(Poly::x(), 3).unwrap();
        assert!(CurveModel::new_normalized(3, 1, int(1), vec![p]).is_err());
        let a = Place::new(Poly::x(), 1).unwrap();
        assert!(CurveModel::new_normalized(3, 1, int(1), vec![a]).is_err());
    }
}
