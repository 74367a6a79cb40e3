//! normalize → stratify → tower → shape → classify → certify.

use crate::divisors::{DivisorTower, WsPresentation};
use crate::error::{Error, Result};
use crate::model::{CurveModel, MobiusRecord};
use crate::redcheck::{certify, CertifyOptions, ConditionReport, Overall};
use crate::repshape::{assemble, classify_exceptional, BlockShape, ExceptionalCase, RepShapeReport, ShapeVerdict};
use crate::strata::{stratify, tower_table, GeometricIrreducibility, Stratification, TowerTable};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub certify: CertifyOptions,
}

/// Which model the arithmetic conditions were verified on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedModel {
    Normalized,
    Input,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The torsion field containment holds: either the conditions were
    /// certified, or the Jacobian is trivial.
    Certified,
    NotCertified(Vec<String>),
    /// The curve is not geometrically irreducible.
    Reducible,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Certified => "Certified",
            Verdict::NotCertified(_) => "NotCertified",
            Verdict::Reducible => "Reducible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAnalysis {
    pub s: u32,
    pub shape: BlockShape,
    pub exceptional: Vec<ExceptionalCase>,
    /// `None` when the fibers are too large to materialize.
    pub ws: Option<WsPresentation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub input: CurveModel,
    pub normalized: CurveModel,
    pub mobius: MobiusRecord,
    pub stratification: Stratification,
    pub irreducibility: GeometricIrreducibility,
    pub table: Option<TowerTable>,
    pub levels: Vec<LevelAnalysis>,
    pub shape: Option<RepShapeReport>,
    /// Conditions checked on the normalized model.
    pub conditions: Option<ConditionReport>,
    /// Conditions checked on the input model, when the normalized model
    /// failed and the input is a different polynomial model.
    pub input_conditions: Option<ConditionReport>,
    pub certified_model: Option<CertifiedModel>,
    pub verdict: Verdict,
}

pub fn analyze(model: &CurveModel, options: &AnalysisOptions) -> Result<Analysis> {
    let (normalized, mobius) = model.normalize()?;
    let stratification = stratify(&normalized)?;
    let mut out = Analysis {
        input: model.clone(),
        normalized,
        mobius,
        irreducibility: GeometricIrreducibility::Reducible,
        stratification,
        table: None,
        levels: Vec::new(),
        shape: None,
        conditions: None,
        input_conditions: None,
        certified_model: None,
        verdict: Verdict::Reducible,
    };
    if out.stratification.count(0) == 0 {
        return Ok(out);
    }
    out.irreducibility = GeometricIrreducibility::Irreducible;
    let strat = &out.stratification;
    let table = tower_table(strat)?;
    let tower = DivisorTower::new(strat)?;
    let rational = strat.has_rational_point_in_s0();
    for s in 1..=strat.n() {
        let ws = match tower.ws_presentation(s) {
            Ok(w) => Some(w),
            Err(Error::Argument(_)) => None,
            Err(e) => return Err(e),
        };
        out.levels.push(LevelAnalysis {
            s,
            shape: crate::repshape::block_shape(&table, s)?,
            exceptional: classify_exceptional(strat, s, rational)?,
            ws,
        });
    }

    let conditions = certify(&out.normalized, strat, &options.certify)?;
    let mut chosen = conditions.clone();
    if conditions.is_certified() {
        out.certified_model = Some(CertifiedModel::Normalized);
    } else if model.is_polynomial()
        && (model.places() != out.normalized.places() || model.lambda() != out.normalized.lambda())
    {
        let alt = certify(model, strat, &options.certify)?;
        if alt.is_certified() {
            out.certified_model = Some(CertifiedModel::Input);
            chosen = alt.clone();
        }
        out.input_conditions = Some(alt);
    }
    let shape = assemble(&table, &chosen);
    out.verdict = match (&shape.verdict, &conditions.overall) {
        (ShapeVerdict::ContainedInTen, _) => Verdict::Certified,
        (ShapeVerdict::NotCertified(_), Overall::NotCertified(r)) => Verdict::NotCertified(r.clone()),
        (ShapeVerdict::NotCertified(r), Overall::Certified) => Verdict::NotCertified(r.clone()),
    };
    out.conditions = Some(conditions);
    out.shape = Some(shape);
    out.table = Some(table);
    Ok(out)
}
