use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::WitnessMonomial;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Var};

/// A monomial of full degree with every exponent within `caps` (missing
/// caps mean 0) and nonzero coefficient in the product of `factors`.
///
/// The top-degree parts of the factors are multiplied in order, discarding
/// terms that exceed a cap. Among the survivors the exponent vector that is
/// lexicographically greatest in variable-id order is returned. More than
/// `max_terms` live terms is a size error.
pub fn search_witness(
    factors: &[Poly<BigInt>],
    caps: &HashMap<Var, u32>,
    max_terms: usize,
) -> Result<Option<WitnessMonomial>> {
    let mut acc: HashMap<Monomial, BigInt> = HashMap::from([(Monomial::one(), BigInt::from(1))]);
    for f in factors {
        let top = f.top_homogeneous();
        let mut next: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in &acc {
            for (fm, fc) in top.terms() {
                let m2 = m.mul(fm);
                if m2
                    .iter()
                    .any(|(x, e)| e > caps.get(&x).copied().unwrap_or(0))
                {
                    continue;
                }
                *next.entry(m2).or_insert_with(BigInt::zero) += c * fc;
            }
        }
        next.retain(|_, c| !c.is_zero());
        if next.len() > max_terms {
            return Err(Error::Size(format!(
                "witness search exceeded {max_terms} terms"
            )));
        }
        acc = next;
    }
    let nvars = acc
        .keys()
        .flat_map(|m| m.vars())
        .map(|x| x.0 as usize + 1)
        .max()
        .unwrap_or(0);
    let dense = |m: &Monomial| {
        let mut v = vec![0u32; nvars];
        for (x, e) in m.iter() {
            v[x.0 as usize] = e;
        }
        v
    };
    Ok(acc
        .into_iter()
        .max_by(|a, b| dense(&a.0).cmp(&dense(&b.0)))
        .map(|(monomial, c)| WitnessMonomial {
            monomial,
            expected: Some(c),
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;

    #[test]
    fn cube_exceeds_cap() {
        let mut vars = Vars::new();
        let x = vars.intern("x");
        let fs = vec![
            Poly::term(Monomial::pow(x, 2), BigInt::from(1)),
            Poly::var(x),
        ];
        assert_eq!(
            search_witness(&fs, &HashMap::from([(x, 2)]), 1000).unwrap(),
            None
        );
        let w = search_witness(&fs, &HashMap::from([(x, 3)]), 1000)
            .unwrap()
            .unwrap();
        assert_eq!(w.monomial, Monomial::pow(x, 3));
    }

    #[test]
    fn term_cap_is_enforced() {
        let mut vars = Vars::new();
        let xs: Vec<Var> = (0..6).map(|i| vars.intern(&format!("x{i}"))).collect();
        let f = Poly::linear(xs.iter().map(|&x| (x, BigInt::from(1))), BigInt::from(0));
        let fs = vec![f.clone(), f.clone(), f];
        let caps = xs.iter().map(|&x| (x, 2)).collect();
        assert!(matches!(
            search_witness(&fs, &caps, 10),
            Err(Error::Size(_))
        ));
    }
}
