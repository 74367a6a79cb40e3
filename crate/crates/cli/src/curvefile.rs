//! The on-disk curve description.
//!
//! Integers may be written either as JSON numbers or as decimal strings, so
//! the model echoed inside a report (where every number is a string) parses
//! back as a curve file.

use num_like::IntField;
use serde::Deserialize;
use supertower_core::{parse_rat, CurveModel, Poly, Rat};

use crate::CliError;

mod num_like {
    use serde::Deserialize;

    #[derive(Debug, Clone, Deserialize)]
    #[serde(untagged)]
    pub enum IntField {
        Num(i64),
        Text(String),
    }

    impl IntField {
        pub fn text(&self) -> String {
            match self {
                IntField::Num(v) => v.to_string(),
                IntField::Text(s) => s.trim().to_string(),
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub ell: IntField,
    pub n: IntField,
    pub lambda: LambdaField,
    pub factors: Vec<FactorField>,
    #[serde(default)]
    pub assertions: Option<Assertions>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaField {
    pub num: IntField,
    pub den: IntField,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorField {
    pub coeffs: Vec<String>,
    pub mult: IntField,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertions {
    #[serde(default)]
    pub splits_over_ten: bool,
}

/// A parsed and validated curve file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub model: CurveModel,
    pub splits_over_ten: bool,
}

fn parse_int(field: &IntField, what: &str) -> Result<i64, CliError> {
    field.text().parse().map_err(|_| CliError::Parse(format!("{what} is not an integer: {:?}", field.text())))
}

impl CurveFile {
    pub fn from_json(text: &str) -> Result<CurveFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Converts to a model. Malformed numbers are parse errors; anything the
    /// model constructors reject is a validation error.
    pub fn into_curve(self) -> Result<Curve, CliError> {
        let ell = parse_int(&self.ell, "ell")?;
        let n = parse_int(&self.n, "n")?;
        let (num, den) = (self.lambda.num.text(), self.lambda.den.text());
        if num.contains('/') || den.contains('/') {
            return Err(CliError::Parse(format!("lambda parts must be integers: {num:?}, {den:?}")));
        }
        let lambda = parse_rat(&format!("{num}/{den}")).map_err(|e| CliError::Parse(format!("lambda: {e}")))?;
        let mut factors = Vec::with_capacity(self.factors.len());
        for (i, f) in self.factors.iter().enumerate() {
            let coeffs = f
                .coeffs
                .iter()
                .map(|c| parse_rat(c).map_err(|e| CliError::Parse(format!("factors[{i}]: {e}"))))
                .collect::<Result<Vec<Rat>, _>>()?;
            factors.push((Poly::new(coeffs), parse_int(&f.mult, "mult")?));
        }

        if ell < 2 {
            return Err(CliError::Validation(format!("ell = {ell} is not a prime")));
        }
        if n < 1 || n > u32::MAX as i64 {
            return Err(CliError::Validation(format!("n = {n} is out of range")));
        }
        if factors.is_empty() {
            return Err(CliError::Validation("factors is empty".into()));
        }
        let model = CurveModel::from_factors(ell as u64, n as u32, lambda, &factors)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        if model.places().is_empty() {
            return Err(CliError::Validation("f is constant".into()));
        }
        let splits_over_ten = self.assertions.is_some_and(|a| a.splits_over_ten);
        Ok(Curve { model, splits_over_ten })
    }
}

pub fn parse_curve(text: &str) -> Result<Curve, CliError> {
    CurveFile::from_json(text)?.into_curve()
}
