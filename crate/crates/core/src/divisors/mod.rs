//! Formal divisors on the intermediate curves `C_s : y^(ℓ^s) = f(x)`.
//!
//! Geometric points of `C_s` are named by [`PointLabel`]s: a base point of
//! `ℙ¹`, the level `s`, and an index into the fiber `Π_s^{-1}(ξ)`. Fiber
//! `i` at level `s-1` lies under fiber `i` at level `s` when `π_s` ramifies
//! there, and under fibers `iℓ, …, iℓ+ℓ-1` otherwise, so pulling back is
//! pure index arithmetic. The Galois action on labels is not modelled; every
//! quantity computed here is a sum over whole orbits.

mod flmatrix;
mod snf;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

pub use flmatrix::FlMatrix;
pub use snf::{inclusion_matrix, quotient_is_torsion_free, rank_mod_ell, smith_normal_form, SmithForm};

use crate::error::{bail, Result};
use crate::strata::Stratification;

/// Largest fiber [`DivisorTower`] will materialize point by point.
pub const MAX_FIBER_POINTS: u64 = 1 << 16;

/// A point of `ℙ¹(Q̄)` known to the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasePoint {
    /// Root number `root` (a formal label) of the place `places[place]`.
    Root {
        place: usize,
        root: u32,
    },
    Infinity,
    /// An arbitrary point outside the branch locus.
    Generic(u32),
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Root { place, root } => write!(f, "P{place}.{root}"),
            BasePoint::Infinity => f.write_str("inf"),
            BasePoint::Generic(k) => write!(f, "Q{k}"),
        }
    }
}

/// A Galois orbit of base points, for the orbit-compressed view of a divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orbit {
    Place(usize),
    Point(BasePoint),
}

/// One geometric point of `C_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointLabel {
    pub base: BasePoint,
    pub level: u32,
    pub fiber: u64,
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]@{}", self.base, self.fiber, self.level)
    }
}

/// A finitely supported integer combination of points of one curve `C_level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicDivisor {
    level: u32,
    coeffs: BTreeMap<PointLabel, i128>,
}

impl SymbolicDivisor {
    pub fn zero(level: u32) -> Self {
        SymbolicDivisor { level, coeffs: BTreeMap::new() }
    }

    /// Builds a divisor from terms; labels must all sit on `level`.
    pub fn from_terms(level: u32, terms: impl IntoIterator<Item = (PointLabel, i128)>) -> Result<Self> {
        let mut d = SymbolicDivisor::zero(level);
        for (p, c) in terms {
            if p.level != level {
                bail!(Argument, "point {p} is not on level {level}");
            }
            d.add_term(p, c);
        }
        Ok(d)
    }

    fn add_term(&mut self, p: PointLabel, c: i128) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(p).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&p);
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &BTreeMap<PointLabel, i128> {
        &self.coeffs
    }

    pub fn coeff(&self, p: &PointLabel) -> i128 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i128 {
        self.coeffs.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonempty with every coefficient 1.
    pub fn is_reduced(&self) -> bool {
        !self.coeffs.is_empty() && self.coeffs.values().all(|&c| c == 1)
    }

    pub fn support(&self) -> impl Iterator<Item = &PointLabel> {
        self.coeffs.keys()
    }

    pub fn disjoint_from(&self, other: &SymbolicDivisor) -> bool {
        self.coeffs.keys().all(|p| !other.coeffs.contains_key(p))
    }

    pub fn scale(&self, k: i128) -> SymbolicDivisor {
        if k == 0 {
            return SymbolicDivisor::zero(self.level);
        }
        SymbolicDivisor { level: self.level, coeffs: self.coeffs.iter().map(|(p, c)| (*p, c * k)).collect() }
    }

    /// Every coefficient reduced into `[0, ell)`; zero entries dropped.
    pub fn reduce_mod(&self, ell: u64) -> SymbolicDivisor {
        let m = ell as i128;
        let mut out = SymbolicDivisor::zero(self.level);
        for (p, c) in &self.coeffs {
            out.add_term(*p, c.rem_euclid(m));
        }
        out
    }
}

impl fmt::Display for SymbolicDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{p}")?;
        }
        Ok(())
    }
}

/// # Panics
/// If the two divisors live on different levels.
impl Add for &SymbolicDivisor {
    type Output = SymbolicDivisor;
    fn add(self, rhs: &SymbolicDivisor) -> SymbolicDivisor {
        assert_eq!(self.level, rhs.level, "adding divisors on different curves");
        let mut out = self.clone();
        for (p, c) in &rhs.coeffs {
            out.add_term(*p, *c);
        }
        out
    }
}

impl Neg for &SymbolicDivisor {
    type Output = SymbolicDivisor;
    fn neg(self) -> SymbolicDivisor {
        self.scale(-1)
    }
}

/// # Panics
/// If the two divisors live on different levels.
impl Sub for &SymbolicDivisor {
    type Output = SymbolicDivisor;
    fn sub(self, rhs: &SymbolicDivisor) -> SymbolicDivisor {
        self + &(-rhs)
    }
}

/// The canonical `ξ₀`: a place of `S[0]` of least degree, ties broken by
/// comparing coefficient sequences; the pivot is its root labelled 0.
pub fn canonical_pivot(strat: &Stratification) -> Option<usize> {
    strat.stratum(0).iter().copied().min_by(|&a, &b| {
        let (pa, pb) = (&strat.places()[a], &strat.places()[b]);
        (pa.degree(), pa.poly()).cmp(&(pb.degree(), pb.poly()))
    })
}

/// Divisor bookkeeping for the tower of one irreducible normalized model.
#[derive(Debug, Clone)]
pub struct DivisorTower {
    ell: u64,
    n: u32,
    degrees: Vec<u32>,
    strata: Vec<u32>,
    units: Vec<i64>,
    pivot: usize,
}

/// `W_s ≅ (𝒲_s⁰ ⊗ 𝔽_ℓ)/⟨ℜ̄_s⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsPresentation {
    pub s: u32,
    /// Points `ξ ∈ S[<s] - {ξ₀}` indexing the basis `D̄_{s,ξ}`.
    pub basis_points: Vec<BasePoint>,
    /// Rows `D̄_{s,ξ}` in coordinates `[η]_s`, `η ∈ S[<s]`.
    pub basis: FlMatrix,
    /// The coordinates of `ℜ̄_s` in the basis (one row).
    pub relation: FlMatrix,
    pub dim: usize,
}

impl DivisorTower {
    /// Fails with a domain error when `S[0]` is empty.
    pub fn new(strat: &Stratification) -> Result<DivisorTower> {
        let Some(pivot) = canonical_pivot(strat) else {
            bail!(Domain, "S[0] is empty: the curve is geometrically reducible");
        };
        let k = strat.places().len();
        Ok(DivisorTower {
            ell: strat.ell(),
            n: strat.n(),
            degrees: strat.places().iter().map(|p| p.degree() as u32).collect(),
            strata: (0..k).map(|i| strat.stratum_of(i)).collect(),
            units: (0..k).map(|i| strat.unit_part(i)).collect(),
            pivot,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Index of the place containing `ξ₀`.
    pub fn pivot_place(&self) -> usize {
        self.pivot
    }

    pub fn pivot(&self) -> BasePoint {
        BasePoint::Root { place: self.pivot, root: 0 }
    }

    /// `u_ξ` for a root of the given place.
    pub fn unit_part(&self, place: usize) -> i64 {
        self.units[place]
    }

    /// Stratum of a branch point, `None` for points outside `S`.
    pub fn stratum(&self, base: BasePoint) -> Result<Option<u32>> {
        match base {
            BasePoint::Root { place, root } => {
                if place >= self.degrees.len() || root >= self.degrees[place] {
                    bail!(Argument, "unknown point {base}");
                }
                Ok(Some(self.strata[place]))
            }
            BasePoint::Infinity | BasePoint::Generic(_) => Ok(None),
        }
    }

    fn check_level(&self, s: u32) -> Result<()> {
        if s > self.n {
            bail!(Argument, "level {s} exceeds n = {}", self.n);
        }
        Ok(())
    }

    /// `#Π_s^{-1}(ξ)`: `ℓ^j` for `ξ ∈ S[j]` with `j < s`, else `ℓ^s`.
    pub fn fiber_size(&self, base: BasePoint, s: u32) -> Result<u64> {
        self.check_level(s)?;
        let e = match self.stratum(base)? {
            Some(j) if j < s => j,
            _ => s,
        };
        Ok(self.ell.pow(e))
    }

    /// True iff `π_s` is totally ramified above the fiber of `base`.
    fn ramified_at(&self, base: BasePoint, s: u32) -> Result<bool> {
        Ok(matches!(self.stratum(base)?, Some(j) if j < s))
    }

    /// `[ξ]_s`, the reduced divisor supported on the whole fiber over `ξ`.
    pub fn fiber_divisor(&self, base: BasePoint, s: u32) -> Result<SymbolicDivisor> {
        let size = self.fiber_size(base, s)?;
        if size > MAX_FIBER_POINTS {
            bail!(Argument, "fiber over {base} at level {s} has {size} points");
        }
        SymbolicDivisor::from_terms(s, (0..size).map(|fiber| (PointLabel { base, level: s, fiber }, 1)))
    }

    /// `Σ_{roots ξ of places[place]} [ξ]_s`.
    pub fn orbit_fiber_divisor(&self, place: usize, s: u32) -> Result<SymbolicDivisor> {
        if place >= self.degrees.len() {
            bail!(Argument, "unknown place {place}");
        }
        let mut out = SymbolicDivisor::zero(s);
        for root in 0..self.degrees[place] {
            out = &out + &self.fiber_divisor(BasePoint::Root { place, root }, s)?;
        }
        Ok(out)
    }

    /// `π_s^*` from level `s-1 = div.level()` to level `s`.
    pub fn pullback(&self, div: &SymbolicDivisor) -> Result<SymbolicDivisor> {
        let s = div.level + 1;
        if s > self.n {
            bail!(Argument, "no curve above level {}", div.level);
        }
        let ell = self.ell;
        let mut out = SymbolicDivisor::zero(s);
        for (p, &c) in &div.coeffs {
            if p.level != div.level || p.fiber >= self.fiber_size(p.base, div.level)? {
                bail!(Argument, "point {p} does not lie on level {}", div.level);
            }
            if self.ramified_at(p.base, s)? {
                out.add_term(PointLabel { level: s, ..*p }, c * ell as i128);
            } else {
                for k in 0..ell {
                    out.add_term(PointLabel { base: p.base, level: s, fiber: p.fiber * ell + k }, c);
                }
            }
        }
        Ok(out)
    }

    /// `(π_s ∘ … ∘ π_{t+1})^*` for a divisor on level `t ≤ s`.
    pub fn pullback_to(&self, div: &SymbolicDivisor, s: u32) -> Result<SymbolicDivisor> {
        self.check_level(s)?;
        if div.level > s {
            bail!(Argument, "cannot pull back from level {} down to {s}", div.level);
        }
        let mut d = div.clone();
        while d.level < s {
            d = self.pullback(&d)?;
        }
        Ok(d)
    }

    /// `Π_s^*(ξ)`.
    pub fn point_pullback(&self, base: BasePoint, s: u32) -> Result<SymbolicDivisor> {
        self.pullback_to(&self.fiber_divisor(base, 0)?, s)
    }

    /// `D_{s,ξ} = [ξ]_s - ℓ^j [ξ₀]_s` for `ξ ∈ S[j]`, `j ≤ s`.
    pub fn d_divisor(&self, base: BasePoint, s: u32) -> Result<SymbolicDivisor> {
        let Some(j) = self.stratum(base)? else {
            bail!(Argument, "{base} is not a branch point");
        };
        if j > s {
            bail!(Argument, "{base} lies in stratum {j} > {s}");
        }
        let xi = self.fiber_divisor(base, s)?;
        let xi0 = self.fiber_divisor(self.pivot(), s)?;
        Ok(&xi - &xi0.scale((self.ell as i128).pow(j)))
    }

    /// Roots in `S[<s]`, or `S[≤s]` when `include_s`, ordered by place then root.
    pub fn roots_below(&self, s: u32, include_s: bool) -> Vec<BasePoint> {
        let bound = if include_s { s + 1 } else { s };
        (0..self.degrees.len())
            .filter(|&i| self.strata[i] < bound)
            .flat_map(|place| (0..self.degrees[place]).map(move |root| BasePoint::Root { place, root }))
            .collect()
    }

    /// `ℜ_s = Σ_{ξ ∈ S[<s]} u_ξ D_{s,ξ}`.
    pub fn r_divisor(&self, s: u32) -> Result<SymbolicDivisor> {
        if s == 0 {
            bail!(Argument, "the divisor R_s needs s >= 1");
        }
        self.check_level(s)?;
        let mut out = SymbolicDivisor::zero(s);
        for xi in self.roots_below(s, false) {
            let BasePoint::Root { place, .. } = xi else { unreachable!() };
            out = &out + &self.d_divisor(xi, s)?.scale(self.units[place] as i128);
        }
        Ok(out)
    }

    /// Generators `[ξ]_s` of `𝒲_s` (or of `𝒱_s` when `include_s`).
    pub fn lattice_generators(&self, s: u32, include_s: bool) -> Result<Vec<SymbolicDivisor>> {
        self.roots_below(s, include_s).into_iter().map(|xi| self.fiber_divisor(xi, s)).collect()
    }

    /// The basis `{D_{s,ξ} : ξ ≠ ξ₀}` of `𝒲_s⁰` (or `𝒱_s⁰` when `include_s`).
    pub fn degree_zero_basis(&self, s: u32, include_s: bool) -> Result<Vec<(BasePoint, SymbolicDivisor)>> {
        if s == 0 {
            bail!(Argument, "degree-zero lattices are defined for s >= 1");
        }
        self.roots_below(s, include_s)
            .into_iter()
            .filter(|&xi| xi != self.pivot())
            .map(|xi| Ok((xi, self.d_divisor(xi, s)?)))
            .collect()
    }

    /// Coordinates of `div` in [`degree_zero_basis`](Self::degree_zero_basis);
    /// fails if `div` is not in that lattice.
    pub fn coordinates(&self, div: &SymbolicDivisor, include_s: bool) -> Result<Vec<i128>> {
        let s = div.level;
        let basis = self.degree_zero_basis(s, include_s)?;
        let coords: Vec<i128> =
            basis.iter().map(|(xi, _)| div.coeff(&PointLabel { base: *xi, level: s, fiber: 0 })).collect();
        let mut rebuilt = SymbolicDivisor::zero(s);
        for ((_, d), a) in basis.iter().zip(&coords) {
            rebuilt = &rebuilt + &d.scale(*a);
        }
        if rebuilt != *div {
            bail!(Argument, "divisor is not in the degree-zero lattice at level {s}");
        }
        Ok(coords)
    }

    /// `div` as `Σ c_ξ [ξ]_s`, if it has that form.
    pub fn fiber_form(&self, div: &SymbolicDivisor) -> Option<BTreeMap<BasePoint, i128>> {
        let mut seen: BTreeMap<BasePoint, (i128, u64)> = BTreeMap::new();
        for (p, &c) in &div.coeffs {
            let slot = seen.entry(p.base).or_insert((c, 0));
            if slot.0 != c {
                return None;
            }
            slot.1 += 1;
        }
        let mut out = BTreeMap::new();
        for (base, (c, count)) in seen {
            if self.fiber_size(base, div.level).ok()? != count {
                return None;
            }
            out.insert(base, c);
        }
        Some(out)
    }

    /// `div` as a combination of whole Galois orbits of fibers, if possible.
    pub fn orbit_form(&self, div: &SymbolicDivisor) -> Option<BTreeMap<Orbit, i128>> {
        let fibers = self.fiber_form(div)?;
        let mut out = BTreeMap::new();
        for (base, c) in &fibers {
            match *base {
                BasePoint::Root { place, .. } => {
                    let uniform =
                        (0..self.degrees[place]).all(|root| fibers.get(&BasePoint::Root { place, root }) == Some(c));
                    if !uniform {
                        return None;
                    }
                    out.insert(Orbit::Place(place), *c);
                }
                other => {
                    out.insert(Orbit::Point(other), *c);
                }
            }
        }
        Some(out)
    }

    /// The presentation of `W_s`; its dimension is always `#S[<s] - 2`.
    pub fn ws_presentation(&self, s: u32) -> Result<WsPresentation> {
        if s == 0 {
            bail!(Argument, "W_s is defined for s >= 1");
        }
        self.check_level(s)?;
        let ell = self.ell;
        let columns = self.roots_below(s, false);
        let basis = self.degree_zero_basis(s, false)?;
        let mut rows = Vec::with_capacity(basis.len());
        for (_, d) in &basis {
            let form = self.fiber_form(d).expect("D_{s,xi} is a sum of fibers");
            rows.push(columns.iter().map(|c| form.get(c).copied().unwrap_or(0)).collect::<Vec<_>>());
        }
        let basis_points: Vec<BasePoint> = basis.iter().map(|(xi, _)| *xi).collect();
        let row_labels: Vec<String> = basis_points.iter().map(|xi| format!("D[{xi}]")).collect();
        let col_labels: Vec<String> = columns.iter().map(|xi| format!("[{xi}]")).collect();
        let basis_matrix = FlMatrix::from_ints(ell, &rows, row_labels.clone(), col_labels);

        let coords = self.coordinates(&self.r_divisor(s)?, false)?;
        let relation = FlMatrix::from_ints(ell, &[coords], vec!["R".to_string()], row_labels);
        let dim = basis_points.len() - relation.rank();
        assert_eq!(dim as i128, columns.len() as i128 - 2, "dim W_{s} disagrees with #S[<s] - 2");
        Ok(WsPresentation { s, basis_points, basis: basis_matrix, relation, dim })
    }
}
