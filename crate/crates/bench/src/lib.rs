//! Deterministic inputs shared by the benchmarks.

use supertower_core::testing::{random_disjoint_family, random_normalized_model, random_pre_model, rng, CorpusParams};
use supertower_core::{CurveModel, Poly};

/// The product of the places of a seeded model, as one dense polynomial.
pub fn dense_poly(seed: u64) -> Poly {
    let m = random_pre_model(&mut rng(seed), CorpusParams::default());
    m.places().iter().fold(Poly::one(), |acc, p| &acc * p.poly())
}

/// Two coprime dense polynomials of moderate degree.
pub fn resultant_pair() -> (Poly, Poly) {
    let mut seed = 1;
    loop {
        let (p, q) = (dense_poly(seed), dense_poly(seed + 1000));
        if p.deg() >= 6 && q.deg() >= 6 && p.gcd(&q).deg() == 0 {
            return (p, q);
        }
        seed += 1;
    }
}

pub fn normalized_corpus(size: u64) -> Vec<CurveModel> {
    (0..size).map(|i| random_normalized_model(&mut rng(i), CorpusParams::default())).collect()
}

pub fn pre_model_corpus(size: u64) -> Vec<CurveModel> {
    (0..size).map(|i| random_pre_model(&mut rng(i), CorpusParams::default())).collect()
}

/// The largest seeded disjoint family among the first `tries` seeds.
pub fn large_family(tries: u64) -> Vec<supertower_core::divisors::SymbolicDivisor> {
    (0..tries).map(|i| random_disjoint_family(&mut rng(i))).max_by_key(Vec::len).unwrap_or_default()
}

/// A model with a tall tower: `ℓ = 5`, `n = 3`.
pub fn tall_model() -> CurveModel {
    let params = CorpusParams { ells: &[5], max_n: 3, max_places: 8 };
    (0..)
        .map(|i| random_normalized_model(&mut rng(i), params))
        .find(|m| m.n() == 3 && m.places().len() >= 4)
        .expect("the generator eventually produces n = 3")
}
