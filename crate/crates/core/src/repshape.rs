//! Block shape of the mod-`ℓ` representation on `J = Jac(C_n)`.
//!
//! `J[ℓ]` is filtered by the quotients `A_s = J_s / J_{s-1}`. On `A_s[ℓ]` the
//! representation is block upper triangular with `φ(ℓ^s)` diagonal blocks
//! `ψ_s, ψ_s(-1), …, ψ_s(1-φ(ℓ^s))`, each of dimension `m_s = dim W_s`.

use std::fmt;

use crate::error::{bail, Result};
use crate::redcheck::{ConditionReport, Overall};
use crate::strata::{Stratification, TowerTable};

/// Blocks of `ρ_{A_s,ℓ}`. Empty when `m_s = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockShape {
    pub s: u32,
    /// `m_s`, the size of each diagonal block.
    pub psi_dim: i128,
    /// `φ(ℓ^s)`, or 0 when `m_s = 0`.
    pub block_count: i128,
}

impl BlockShape {
    /// Twist of block `i` is `-i`.
    pub fn twist(&self, i: i128) -> i128 {
        -i
    }

    /// `0, -1, …, 1 - block_count`.
    pub fn twist_exponents(&self) -> impl Iterator<Item = i128> {
        (0..self.block_count).map(|i| -i)
    }

    pub fn total_dim(&self) -> i128 {
        self.block_count * self.psi_dim
    }

    pub fn is_empty(&self) -> bool {
        self.block_count == 0
    }

    /// `psi_s(-i)`, the label of block `i`.
    pub fn block_label(&self, i: i128) -> String {
        if i == 0 {
            format!("psi_{}", self.s)
        } else {
            format!("psi_{}({})", self.s, self.twist(i))
        }
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("[]");
        }
        if self.block_count > 8 {
            return write!(
                f,
                "[{}, …, {}] ({} blocks of size {})",
                self.block_label(0),
                self.block_label(self.block_count - 1),
                self.block_count,
                self.psi_dim
            );
        }
        let labels: Vec<String> = (0..self.block_count).map(|i| self.block_label(i)).collect();
        write!(f, "[{}]", labels.join(", "))
    }
}

pub fn block_shape(table: &TowerTable, s: u32) -> Result<BlockShape> {
    if s == 0 || s > table.n() {
        bail!(Argument, "level {s} outside 1..={}", table.n());
    }
    let row = table.row(s);
    let block_count = if row.m == 0 { 0 } else { row.phi };
    Ok(BlockShape { s, psi_dim: row.m, block_count })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeVerdict {
    /// `ℚ(J[ℓ^∞])` lies in the maximal pro-`ℓ` extension of `ℚ(μ_{ℓ^∞})` unramified away from `ℓ`.
    ContainedInTen,
    NotCertified(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepShapeReport {
    /// `A_1, …, A_n`.
    pub levels: Vec<BlockShape>,
    /// `2 g_n`.
    pub total_dim: i128,
    pub verdict: ShapeVerdict,
}

/// Stacks the per-level shapes; the containment verdict follows the
/// certification report, and holds vacuously when `J = 0`.
pub fn assemble(table: &TowerTable, conditions: &ConditionReport) -> RepShapeReport {
    let levels: Vec<BlockShape> = (1..=table.n()).map(|s| block_shape(table, s).expect("level in range")).collect();
    let total_dim: i128 = levels.iter().map(BlockShape::total_dim).sum();
    assert_eq!(total_dim, 2 * table.genus(), "block total disagrees with 2g");
    let verdict = if total_dim == 0 {
        ShapeVerdict::ContainedInTen
    } else {
        match &conditions.overall {
            Overall::Certified => ShapeVerdict::ContainedInTen,
            Overall::NotCertified(reasons) => ShapeVerdict::NotCertified(reasons.clone()),
        }
    };
    RepShapeReport { levels, total_dim, verdict }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 6] =
        [CaseLabel::A, CaseLabel::B, CaseLabel::C, CaseLabel::D, CaseLabel::E, CaseLabel::F];

    /// The value of `d_s` in this case.
    pub fn d_s(self) -> u32 {
        match self {
            CaseLabel::A => 1,
            CaseLabel::B => 3,
            CaseLabel::C => 4,
            CaseLabel::D | CaseLabel::E | CaseLabel::F => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::A => "a",
            CaseLabel::B => "b",
            CaseLabel::C => "c",
            CaseLabel::D => "d",
            CaseLabel::E => "e",
            CaseLabel::F => "f",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The decidable data a case was checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseConstraints {
    pub ell: u64,
    pub s: u32,
    pub r0: u64,
    /// `S[<s] = S[0]`.
    pub below_is_s0: bool,
}

/// A possible value of `d_s = [ℚ(S[<s]) : ℚ(W_s)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExceptionalCase {
    pub label: CaseLabel,
    pub d_s: u32,
    pub constraints: CaseConstraints,
}

fn consistent(label: CaseLabel, c: &CaseConstraints) -> bool {
    let CaseConstraints { ell, s, r0, below_is_s0 } = *c;
    match label {
        CaseLabel::A => true,
        CaseLabel::B => ell == 3 && below_is_s0 && r0 == 3 && s == 1,
        CaseLabel::C => ell == 2 && below_is_s0 && r0 == 4 && s <= 2,
        CaseLabel::D => ell == 2 && below_is_s0 && r0 == 4,
        CaseLabel::E => ell == 2 && below_is_s0 && r0 == 2 && s == 1,
        CaseLabel::F => ell == 2 && !below_is_s0 && r0 == 2,
    }
}

/// Every case whose side conditions fit the instance. A rational point in
/// `S[0]` is fixed by the whole Galois group, which leaves only `d_s = 1`.
/// The list never says which case actually occurs.
pub fn classify_exceptional(
    strat: &Stratification,
    s: u32,
    has_rational_point_in_s0: bool,
) -> Result<Vec<ExceptionalCase>> {
    if s == 0 || s > strat.n() {
        bail!(Argument, "level {s} outside 1..={}", strat.n());
    }
    let constraints = CaseConstraints { ell: strat.ell(), s, r0: strat.count(0), below_is_s0: strat.below_is_s0(s) };
    Ok(CaseLabel::ALL
        .into_iter()
        .filter(|&l| l == CaseLabel::A || (!has_rational_point_in_s0 && consistent(l, &constraints)))
        .map(|label| ExceptionalCase { label, d_s: label.d_s(), constraints })
        .collect())
}
