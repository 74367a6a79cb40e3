//! Stratification of the branch locus and the genus table of the tower
//! `C_n → C_{n-1} → … → C_0 = ℙ¹`, where `C_s` is `y^(ℓ^s) = f(x)`.

use crate::error::{bail, Result};
use crate::model::{CurveModel, Place};

/// The partition `S = ⊔ S[j]` by `j = ord_ℓ(n_ξ)`, kept at the level of places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    ell: u64,
    n: u32,
    places: Vec<Place>,
    stratum_of: Vec<u32>,
    strata: Vec<Vec<usize>>,
    counts: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometricIrreducibility {
    Irreducible,
    Reducible,
}

fn ord_ell(mut e: i64, ell: i64) -> u32 {
    let mut j = 0;
    while e % ell == 0 {
        e /= ell;
        j += 1;
    }
    j
}

/// Assigns every place of a normalized model to its stratum.
pub fn stratify(model: &CurveModel) -> Result<Stratification> {
    if !model.is_normalized() {
        bail!(Argument, "stratify expects a normalized model");
    }
    let ell = model.ell();
    let n = model.n();
    let mut strata = vec![Vec::new(); n as usize];
    let mut counts = vec![0u64; n as usize];
    let mut stratum_of = Vec::with_capacity(model.places().len());
    for (i, p) in model.places().iter().enumerate() {
        let j = ord_ell(p.exponent(), ell as i64);
        debug_assert!(j < n);
        strata[j as usize].push(i);
        counts[j as usize] += p.degree() as u64;
        stratum_of.push(j);
    }
    Ok(Stratification { ell, n, places: model.places().to_vec(), stratum_of, strata, counts })
}

impl Stratification {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    /// Place indices in `S[j]`.
    pub fn stratum(&self, j: u32) -> &[usize] {
        self.strata.get(j as usize).map_or(&[], |v| v.as_slice())
    }

    /// `j` with `places[index] ⊆ S[j]`.
    pub fn stratum_of(&self, index: usize) -> u32 {
        self.stratum_of[index]
    }

    /// `r_j`.
    pub fn count(&self, j: u32) -> u64 {
        self.counts.get(j as usize).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `#S[<s]`.
    pub fn count_below(&self, s: u32) -> u64 {
        self.counts.iter().take(s as usize).sum()
    }

    /// `#S`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Place indices in `S[<s]`, in model order.
    pub fn places_below(&self, s: u32) -> Vec<usize> {
        (0..self.places.len()).filter(|&i| self.stratum_of[i] < s).collect()
    }

    /// `S[<s] = S[0]`, i.e. `r_1 = … = r_{s-1} = 0`.
    pub fn below_is_s0(&self, s: u32) -> bool {
        (1..s).all(|j| self.count(j) == 0)
    }

    /// True if some place of `S[0]` has degree 1.
    pub fn has_rational_point_in_s0(&self) -> bool {
        self.stratum(0).iter().any(|&i| self.places[i].degree() == 1)
    }

    /// `u_ξ = n_ξ / ℓ^j` for the place at `index`.
    pub fn unit_part(&self, index: usize) -> i64 {
        self.places[index].exponent() / (self.ell as i64).pow(self.stratum_of[index])
    }
}

/// A normalized model is geometrically irreducible iff `S[0]` is nonempty.
pub fn check_irreducible(model: &CurveModel) -> Result<GeometricIrreducibility> {
    let strat = stratify(model)?;
    Ok(if strat.count(0) > 0 { GeometricIrreducibility::Irreducible } else { GeometricIrreducibility::Reducible })
}

/// One level of the tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerRow {
    pub s: u32,
    /// `g_s`, genus of `C_s`.
    pub genus: i128,
    /// `h_s = g_s - g_{s-1}`, the dimension of `A_s`.
    pub h: i128,
    /// `m_s = #S[<s] - 2`, the dimension of `W_s`; 0 on the base row.
    pub m: i128,
    /// `φ(ℓ^s)`.
    pub phi: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerTable {
    ell: u64,
    n: u32,
    rows: Vec<TowerRow>,
}

impl TowerTable {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Rows `s = 0..=n`.
    pub fn rows(&self) -> &[TowerRow] {
        &self.rows
    }

    pub fn row(&self, s: u32) -> &TowerRow {
        &self.rows[s as usize]
    }

    /// `g_n`.
    pub fn genus(&self) -> i128 {
        self.rows[self.n as usize].genus
    }
}

pub fn euler_phi_prime_power(ell: u64, s: u32) -> i128 {
    let ell = ell as i128;
    if s == 0 {
        1
    } else {
        ell.pow(s - 1) * (ell - 1)
    }
}

/// Genus of `C_s` straight from Riemann–Hurwitz:
/// `2g_s - 2 = -2ℓ^s + Σ_{j<s} r_j ℓ^j (ℓ^{s-j} - 1)`.
pub fn riemann_hurwitz_genus(strat: &Stratification, s: u32) -> i128 {
    let ell = strat.ell as i128;
    let mut two_g = 2 - 2 * ell.pow(s);
    for j in 0..s {
        two_g += strat.count(j) as i128 * ell.pow(j) * (ell.pow(s - j) - 1);
    }
    debug_assert_eq!(two_g % 2, 0);
    two_g / 2
}

/// Fills the genus table, computing each `g_s` both as `Σ h_t` and directly.
pub fn tower_table(strat: &Stratification) -> Result<TowerTable> {
    if strat.count(0) == 0 {
        bail!(Domain, "S[0] is empty: the curve is geometrically reducible");
    }
    let mut rows = vec![TowerRow { s: 0, genus: 0, h: 0, m: 0, phi: 1 }];
    let mut genus = 0i128;
    for s in 1..=strat.n {
        let m = strat.count_below(s) as i128 - 2;
        let phi = euler_phi_prime_power(strat.ell, s);
        let two_h = phi * m;
        assert!(two_h % 2 == 0, "odd block total at level {s}");
        let h = two_h / 2;
        genus += h;
        let direct = riemann_hurwitz_genus(strat, s);
        assert_eq!(genus, direct, "genus mismatch at level {s}");
        rows.push(TowerRow { s, genus, h, m, phi });
    }
    Ok(TowerTable { ell: strat.ell, n: strat.n, rows })
}
