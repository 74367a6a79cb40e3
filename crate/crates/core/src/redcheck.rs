//! Arithmetic conditions on a polynomial model `y^(ℓ^n) = λ f(x)` that
//! guarantee good reduction away from `ℓ` and put the branch locus over the
//! maximal pro-`ℓ` extension of `ℚ(μ_{ℓ^∞})` unramified away from `ℓ`:
//!
//! 1. some point of the curve is totally ramified;
//! 2. `λ` is an `ℓ`-unit and every branch point is an `ℓ`-integer;
//! 3. every difference of two distinct branch points is an `ℓ`-unit;
//! 4. `f` splits over that extension.
//!
//! The conditions are sufficient only. A failed check never claims bad
//! reduction.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{bail, Result};
use crate::exactalg::{
    discriminant, format_rat, is_integral_away_from, is_unit_away_from, resultant, val_ell, Poly, Rat, Valuation,
};
use crate::model::{CurveModel, Place};
use crate::strata::Stratification;

/// What "`ℓ`-unit" and "`ℓ`-integer" mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnitConvention {
    /// `v_ℓ(x) = 0` / `v_ℓ(x) ≥ 0`.
    #[default]
    EllAdic,
    /// `x ∈ ℤ[1/ℓ]^×` / `x ∈ ℤ[1/ℓ]`.
    AwayFromEll,
}

impl UnitConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitConvention::EllAdic => "ell-adic",
            UnitConvention::AwayFromEll => "away-from-ell",
        }
    }

    fn is_unit(self, x: &Rat, ell: u64) -> bool {
        match self {
            UnitConvention::EllAdic => valuation(x, ell).is_zero(),
            UnitConvention::AwayFromEll => is_unit_away_from(x, ell),
        }
    }

    fn is_integral(self, x: &Rat, ell: u64) -> bool {
        match self {
            UnitConvention::EllAdic => valuation(x, ell).is_nonnegative(),
            UnitConvention::AwayFromEll => is_integral_away_from(x, ell),
        }
    }

    fn unit_name(self, ell: u64) -> String {
        match self {
            UnitConvention::EllAdic => format!("{ell}-unit"),
            UnitConvention::AwayFromEll => format!("unit away from {ell}"),
        }
    }

    fn integer_name(self, ell: u64) -> String {
        match self {
            UnitConvention::EllAdic => format!("{ell}-integer"),
            UnitConvention::AwayFromEll => format!("integer away from {ell}"),
        }
    }
}

fn valuation(x: &Rat, ell: u64) -> Valuation {
    val_ell(x, ell).expect("ell was validated as prime by the model")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitStatus {
    /// Every root is rational or an `ℓ`-power root of unity.
    Proven,
    /// Taken on the user's word.
    Assumed,
    /// No sufficient rule applied; this is not a proof that `f` fails to split.
    FailedUnknown,
}

impl SplitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitStatus::Proven => "proven",
            SplitStatus::Assumed => "assumed",
            SplitStatus::FailedUnknown => "failed-unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Overall {
    Certified,
    NotCertified(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Accept "f splits over the target field" without proof.
    pub assert_splits_over_ten: bool,
    /// Largest `k` tried when testing whether a place divides `x^(ℓ^k) - 1`.
    pub cyclotomic_bound: u32,
    pub convention: UnitConvention,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { assert_splits_over_ten: false, cyclotomic_bound: 8, convention: UnitConvention::EllAdic }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityCheck {
    pub lambda_valuation: Valuation,
    pub lambda_unit: bool,
    pub roots_integral: bool,
    /// Branch places whose roots are not integral.
    pub non_integral: Vec<usize>,
}

impl IntegralityCheck {
    pub fn passed(&self) -> bool {
        self.lambda_unit && self.roots_integral
    }
}

/// A resultant (two places) or discriminant (one place) that is not a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offense {
    pub first: usize,
    /// `None` for a discriminant.
    pub second: Option<usize>,
    pub value: Rat,
    pub valuation: Valuation,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub convention: UnitConvention,
    pub total_ramification: bool,
    pub lambda_valuation: Valuation,
    pub lambda_unit: bool,
    pub roots_integral: bool,
    pub non_integral: Vec<usize>,
    pub differences_units: bool,
    pub offending: Vec<Offense>,
    pub splits_over_ten: SplitStatus,
    pub overall: Overall,
}

impl ConditionReport {
    pub fn is_certified(&self) -> bool {
        self.overall == Overall::Certified
    }
}

fn branch_places(model: &CurveModel) -> Vec<(usize, &Place)> {
    let big_n = model.cover_degree();
    model.places().iter().enumerate().filter(|(_, p)| p.exponent().rem_euclid(big_n) != 0).collect()
}

/// Some branch point has multiplicity prime to `ℓ`, so the point above it
/// is totally ramified.
pub fn check_total_ramification(strat: &Stratification) -> bool {
    strat.count(0) > 0
}

/// `λ` is a unit and every branch place has integral coefficients (for a
/// monic polynomial, equivalent to all of its roots being integral).
pub fn check_integrality(model: &CurveModel, convention: UnitConvention) -> IntegralityCheck {
    let ell = model.ell();
    let non_integral: Vec<usize> = branch_places(model)
        .into_iter()
        .filter(|(_, p)| !p.poly().coeffs().iter().all(|c| convention.is_integral(c, ell)))
        .map(|(i, _)| i)
        .collect();
    IntegralityCheck {
        lambda_valuation: valuation(model.lambda(), ell),
        lambda_unit: convention.is_unit(model.lambda(), ell),
        roots_integral: non_integral.is_empty(),
        non_integral,
    }
}

fn linear_root(p: &Poly) -> Option<Rat> {
    (p.deg() == 1).then(|| -p.coeff(0))
}

fn signed(x: &Rat) -> String {
    if x.is_negative() {
        format!("({})", format_rat(x))
    } else {
        format_rat(x)
    }
}

/// Pairwise resultants and per-place discriminants of the branch places
/// must all be units; up to sign they are the products of root differences.
pub fn check_differences(model: &CurveModel, convention: UnitConvention) -> Result<(bool, Vec<Offense>)> {
    let ell = model.ell();
    let unit = convention.unit_name(ell);
    let places = branch_places(model);
    let mut offending = Vec::new();
    for (a, &(i, p)) in places.iter().enumerate() {
        if p.degree() >= 2 {
            let d = discriminant(p.poly())?;
            if !convention.is_unit(&d, ell) {
                let v = valuation(&d, ell);
                offending.push(Offense {
                    first: i,
                    second: None,
                    message: format!("discriminant {} of {} is not a {unit} (v_{ell} = {v})", format_rat(&d), p.poly()),
                    value: d,
                    valuation: v,
                });
            }
        }
        for &(j, q) in &places[a + 1..] {
            let r = resultant(p.poly(), q.poly())?;
            if r.is_zero() {
                bail!(Validation, "places {} and {} share a root", p.poly(), q.poly());
            }
            if convention.is_unit(&r, ell) {
                continue;
            }
            let v = valuation(&r, ell);
            let message = match (linear_root(p.poly()), linear_root(q.poly())) {
                (Some(x), Some(y)) => format!("difference {}-{} is not a {unit}", format_rat(&y), signed(&x)),
                _ => format!(
                    "resultant {} of {} and {} is not a {unit} (v_{ell} = {v})",
                    format_rat(&r),
                    p.poly(),
                    q.poly()
                ),
            };
            offending.push(Offense { first: i, second: Some(j), value: r, valuation: v, message });
        }
    }
    Ok((offending.is_empty(), offending))
}

/// `Φ_{ℓ^i}(x) = Σ_{t<ℓ} x^(t ℓ^(i-1))` for `i ≥ 1`, and `x - 1` for `i = 0`.
fn cyclotomic_prime_power(ell: u64, i: u32) -> Poly {
    if i == 0 {
        return Poly::from_ints(&[-1, 1]);
    }
    let step = (ell as usize).pow(i - 1);
    let mut c = vec![0i64; step * (ell as usize - 1) + 1];
    for t in 0..ell as usize {
        c[t * step] = 1;
    }
    Poly::from_ints(&c)
}

/// `p | x^(ℓ^k) - 1` for some `k ≤ bound`. Since `x^(ℓ^k) - 1 = ∏_{i ≤ k} Φ_{ℓ^i}`
/// and `p` is square-free, this holds iff `p` is a product of distinct `Φ_{ℓ^i}`.
fn divides_cyclotomic_power(p: &Poly, ell: u64, bound: u32) -> bool {
    let mut rest = p.clone();
    for i in 0..=bound {
        let phi_degree = match i {
            0 => Some(1),
            _ => (ell as u128).checked_pow(i - 1).map(|q| q * (ell as u128 - 1)),
        };
        if phi_degree.is_none_or(|d| d > rest.deg() as u128) {
            break;
        }
        let phi = cyclotomic_prime_power(ell, i);
        if rest.rem(&phi).expect("nonzero modulus").is_zero() {
            rest = rest.exact_div(&phi).expect("exact division");
        }
    }
    rest.deg() == 0
}

/// Proven when every place is linear or divides some `x^(ℓ^k) - 1`.
pub fn check_splits_over_ten(model: &CurveModel, asserted: bool, cyclotomic_bound: u32) -> SplitStatus {
    let ell = model.ell();
    let proven =
        model.places().iter().all(|p| p.degree() == 1 || divides_cyclotomic_power(p.poly(), ell, cyclotomic_bound));
    if proven {
        SplitStatus::Proven
    } else if asserted {
        SplitStatus::Assumed
    } else {
        SplitStatus::FailedUnknown
    }
}

/// Runs every check on a polynomial model. `strat` is the stratification
/// of the normalized form of the same curve.
pub fn certify(model: &CurveModel, strat: &Stratification, options: &CertifyOptions) -> Result<ConditionReport> {
    if !model.is_polynomial() {
        bail!(Argument, "certification needs a polynomial model");
    }
    let ell = model.ell();
    let conv = options.convention;
    let total_ramification = check_total_ramification(strat);
    let integrality = check_integrality(model, conv);
    let (differences_units, offending) = check_differences(model, conv)?;
    let splits = check_splits_over_ten(model, options.assert_splits_over_ten, options.cyclotomic_bound);

    let mut reasons = Vec::new();
    if !total_ramification {
        reasons.push("no point is totally ramified".to_string());
    }
    if !integrality.lambda_unit {
        reasons.push(format!(
            "lambda = {} is not a {} (v_{ell} = {})",
            format_rat(model.lambda()),
            conv.unit_name(ell),
            integrality.lambda_valuation
        ));
    }
    for &i in &integrality.non_integral {
        reasons.push(format!("roots of {} are not {}s", model.places()[i].poly(), conv.integer_name(ell)));
    }
    reasons.extend(offending.iter().map(|o| o.message.clone()));
    if splits == SplitStatus::FailedUnknown {
        reasons.push("splitting of f over the target field is unverified".to_string());
    }
    let overall = if reasons.is_empty() { Overall::Certified } else { Overall::NotCertified(reasons) };
    Ok(ConditionReport {
        convention: conv,
        total_ramification,
        lambda_valuation: integrality.lambda_valuation,
        lambda_unit: integrality.lambda_unit,
        roots_integral: integrality.roots_integral,
        non_integral: integrality.non_integral,
        differences_units,
        offending,
        splits_over_ten: splits,
        overall,
    })
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.overall {
            Overall::Certified => f.write_str("certified"),
            Overall::NotCertified(r) => write!(f, "not certified: {}", r.join("; ")),
        }
    }
}
