use super::poly::Poly;
use super::rat::Rat;
use crate::error::{bail, Result};

/// `p = content · ∏ factor^multiplicity` with monic, square-free,
/// pairwise coprime factors listed by increasing multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub content: Rat,
    pub factors: Vec<(Poly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> Poly {
        self.factors.iter().fold(Poly::constant(self.content.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

/// Yun's square-free decomposition over ℚ.
pub fn squarefree_decompose(p: &Poly) -> Result<SquarefreeDecomposition> {
    if p.is_zero() {
        bail!(Argument, "square-free decomposition of the zero polynomial");
    }
    let content = p.lc();
    let f = p.monic();
    let mut factors = Vec::new();
    if f.deg() == 0 {
        return Ok(SquarefreeDecomposition { content, factors });
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.exact_div(&a)?;
    let mut c = df.exact_div(&a)?;
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    loop {
        let g = b.gcd(&d);
        if g.deg() > 0 {
            factors.push((g.clone(), i));
        }
        b = b.exact_div(&g)?;
        if b.deg() == 0 {
            break;
        }
        c = d.exact_div(&g)?;
        d = &c - &b.derivative();
        i += 1;
    }
    Ok(SquarefreeDecomposition { content, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::int;

    #[test]
    fn examples() {
        let d = squarefree_decompose(&Poly::from_ints(&[0, 0, -1, 1])).unwrap();
        assert_eq!(d.content, int(1));
        assert_eq!(d.factors, vec![(Poly::from_ints(&[-1, 1]), 1), (Poly::from_ints(&[0, 1]), 2)]);

        let d = squarefree_decompose(&Poly::from_ints(&[1, 2, 1])).unwrap();
        assert_eq!(d.factors, vec![(Poly::from_ints(&[1, 1]), 2)]);

        let d = squarefree_decompose(&Poly::from_ints(&[-6, 6])).unwrap();
        assert_eq!(d.content, int(6));
        assert_eq!(d.factors, vec![(Poly::from_ints(&[-1, 1]), 1)]);
        assert!(d.is_squarefree());
    }

    #[test]
    fn constants_and_zero() {
        let d = squarefree_decompose(&Poly::from_ints(&[-4])).unwrap();
        assert_eq!(d.content, int(-4));
        assert!(d.factors.is_empty());
        assert!(squarefree_decompose(&Poly::zero()).is_err());
    }

    proptest::proptest! {
        #[test]
        fn expansion_recovers_input(
            roots in proptest::collection::vec((-4i64..4, 1u32..4), 1..4),
            lead in proptest::sample::select(vec![-3i64, -1, 1, 2, 5]),
        ) {
            let p = roots.iter().fold(Poly::from_ints(&[lead]), |acc, &(r, m)| {
                &acc * &Poly::from_ints(&[-r, 1]).pow(m)
            });
            let d = squarefree_decompose(&p).unwrap();
            proptest::prop_assert_eq!(d.expand(), p);
            for (i, (f, _)) in d.factors.iter().enumerate() {
                proptest::prop_assert!(f.is_monic());
                for (g, _) in &d.factors[i + 1..] {
                    proptest::prop_assert_eq!(f.gcd(g), Poly::one());
                }
            }
        }
    }
}
