//! Exact symbolic analysis of superelliptic curves `y^(ℓ^n) = λ f(x)` over ℚ.
//!
//! The pipeline normalizes an affine model, stratifies its branch locus by
//! the `ℓ`-adic valuation of the multiplicities, computes the genus table of
//! the tower `C_n → … → C_0 = ℙ¹`, describes the block shape of the mod-`ℓ`
//! representation on the Jacobian, and checks a set of arithmetic conditions
//! on the model that force `ℚ(J[ℓ^∞])` into the maximal pro-`ℓ` extension of
//! `ℚ(μ_{ℓ^∞})` unramified away from `ℓ`.
//!
//! ```
//! use supertower_core::{analyze, AnalysisOptions, CurveModel, Poly, Verdict, int};
//!
//! let f = [(Poly::x(), 1), (Poly::from_ints(&[-1, 1]), 1), (Poly::from_ints(&[-2, 1]), 1)];
//! let model = CurveModel::from_factors(3, 1, int(1), &f).unwrap();
//! let analysis = analyze(&model, &AnalysisOptions::default()).unwrap();
//! assert_eq!(analysis.table.as_ref().unwrap().genus(), 1);
//! assert_eq!(analysis.verdict, Verdict::Certified);
//! ```

pub mod divisors;
pub mod error;
pub mod exactalg;
pub mod model;
pub mod pipeline;
pub mod redcheck;
pub mod repshape;
pub mod strata;

#[cfg(feature = "oracles")]
#[doc(hidden)]
pub mod testing;

pub use error::{Error, Result};
pub use exactalg::{
    certify_irreducible, discriminant, format_rat, int, parse_rat, rat, resultant, squarefree_decompose, val_ell,
    IrreducibilityVerdict, Poly, Rat, Valuation,
};
pub use model::{BranchPoint, CurveModel, IrreducibilityStatus, MobiusRecord, Pivot, Place};
pub use pipeline::{analyze, Analysis, AnalysisOptions, CertifiedModel, Verdict};
pub use redcheck::{certify, CertifyOptions, ConditionReport, Overall, SplitStatus, UnitConvention};
pub use repshape::{
    assemble, block_shape, classify_exceptional, BlockShape, CaseLabel, ExceptionalCase, RepShapeReport, ShapeVerdict,
};
pub use strata::{
    check_irreducible, stratify, tower_table, GeometricIrreducibility, Stratification, TowerRow, TowerTable,
};
