use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::Zero;

use super::{factor_vars, total_degree};
use crate::error::{Error, Result};
use crate::poly::{grid_functional, Coeff, Fp, Monomial, Poly, Var};
use crate::rational::Rational;

/// One committed variable.
#[derive(Clone, Debug, PartialEq)]
pub struct CnStep {
    pub var: Var,
    pub value: Rational,
    /// Candidates examined, including the committed one.
    pub tried: usize,
    /// Whether the held-variable functional was nonzero at `value`.
    pub residual_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CnOutcome {
    pub values: BTreeMap<Var, Rational>,
    pub steps: Vec<CnStep>,
    /// Product of all factors at `values`; never zero.
    pub product: Rational,
    /// Whether the search ran modulo `2^61 - 1` (exact check still applied).
    pub modular: bool,
}

/// Picks a value for every variable from its list so that the product of
/// `factors` does not vanish.
///
/// `j` must have degree equal to the total degree of `factors` and a nonzero
/// coefficient; `lists[x]` needs at least `j`-exponent `+ 1` values, of which
/// only that many leading values are used.
///
/// Variables are fixed in reverse elimination order. For the current
/// variable `x`, `c(x)` is the grid functional of the remaining product with
/// `x` held symbolic; the first list value with `c(s) != 0` is committed.
/// Because the functional of the whole product is a combination of the
/// `c(s)`, a nonzero start guarantees a candidate at every step.
pub fn constructive_cn(
    factors: &[Poly<Rational>],
    j: &Monomial,
    lists: &HashMap<Var, Vec<Rational>>,
) -> Result<CnOutcome> {
    let vars = factor_vars(factors);
    if let Some((x, _)) = j.iter().find(|(x, _)| !vars.contains(x)) {
        return Err(Error::Input(format!(
            "witness variable {x:?} occurs in no factor"
        )));
    }
    let deg = total_degree(factors);
    if deg != j.degree() {
        return Err(Error::Witness(format!(
            "witness degree {} differs from factor degree {deg}",
            j.degree()
        )));
    }
    let mut grid: HashMap<Var, Vec<Rational>> = HashMap::new();
    for &x in &vars {
        let k = j.exponent(x) as usize;
        let list = lists.get(&x).filter(|l| l.len() > k).ok_or_else(|| {
            Error::Input(format!("list for {x:?} needs at least {} values", k + 1))
        })?;
        if list[..=k].iter().collect::<BTreeSet<_>>().len() != k + 1 {
            return Err(Error::Input(format!("list for {x:?} repeats a value")));
        }
        grid.insert(x, list[..=k].to_vec());
    }
    let order = fixing_order(factors);

    let modular = to_fp(factors, &grid);
    let choices = match &modular {
        Some((fs, g)) => search(fs.clone(), j, g, &order)?,
        None => search(factors.to_vec(), j, &grid, &order)?,
    };

    let mut values = BTreeMap::new();
    let mut steps = Vec::with_capacity(order.len());
    for (&x, &(idx, tried, residual_nonzero)) in order.iter().zip(&choices) {
        let value = grid[&x][idx].clone();
        values.insert(x, value.clone());
        steps.push(CnStep {
            var: x,
            value,
            tried,
            residual_nonzero,
        });
    }
    let assignment: HashMap<Var, Rational> = values.iter().map(|(x, v)| (*x, v.clone())).collect();
    let mut product = Rational::from_integer(1.into());
    for f in factors {
        let v = f
            .evaluate(&assignment)
            .ok_or_else(|| Error::Internal("factor left with an unassigned variable".into()))?;
        product *= v;
    }
    if product.is_zero() {
        return Err(Error::Internal(
            "committed values annihilate the product".into(),
        ));
    }
    Ok(CnOutcome {
        values,
        steps,
        product,
        modular: modular.is_some(),
    })
}

/// Variables by last occurrence, latest first; ties by id.
fn fixing_order(factors: &[Poly<Rational>]) -> Vec<Var> {
    let mut death: BTreeMap<Var, usize> = BTreeMap::new();
    for (p, f) in factors.iter().enumerate() {
        for x in f.vars() {
            death.insert(x, p);
        }
    }
    let mut order: Vec<Var> = death.keys().copied().collect();
    order.sort_by_key(|x| (std::cmp::Reverse(death[x]), *x));
    order
}

type FpInstance = (Vec<Poly<Fp>>, HashMap<Var, Vec<Fp>>);

/// Image modulo the prime, or `None` if a denominator vanishes or two grid
/// values of one variable collide.
fn to_fp(factors: &[Poly<Rational>], grid: &HashMap<Var, Vec<Rational>>) -> Option<FpInstance> {
    let fs = factors
        .iter()
        .map(|f| f.try_map_coeffs(Fp::from_rational))
        .collect::<Option<Vec<_>>>()?;
    let mut g = HashMap::new();
    for (x, vals) in grid {
        let img = vals
            .iter()
            .map(Fp::from_rational)
            .collect::<Option<Vec<_>>>()?;
        if img.iter().collect::<std::collections::HashSet<_>>().len() != img.len() {
            return None;
        }
        g.insert(*x, img);
    }
    Some((fs, g))
}

/// `∏ L_y` over the unfixed variables. A target variable that no longer
/// occurs makes the functional vanish (`L_y(1) = 0` when `k_y > 0`).
fn functional<C: Coeff>(
    fs: &[Poly<C>],
    j: &Monomial,
    grid: &HashMap<Var, Vec<C>>,
    fixed: &HashSet<Var>,
) -> Result<C> {
    if fs.iter().any(|f| f.is_zero()) {
        return Ok(C::zero());
    }
    let present = factor_vars(fs);
    if j.iter()
        .any(|(y, k)| k > 0 && !fixed.contains(&y) && !present.contains(&y))
    {
        return Ok(C::zero());
    }
    let live: Vec<Poly<C>> = fs.iter().filter(|f| !f.is_constant()).cloned().collect();
    let target = Monomial::from_pairs(j.iter().filter(|(y, _)| present.contains(y)));
    let (v, _) = grid_functional(&live, &target, grid, None, None)?;
    Ok(v.constant_term())
}

/// `(index, tried, residual nonzero)` per variable of `order`.
///
/// The residual of `x = s` is the functional of the product with `x`
/// substituted, which is `c(s)` for `c(x) = ∏_{y ≠ x} L_y`. Constant factors
/// are dropped once nonzero, as they do not affect vanishing.
fn search<C: Coeff>(
    mut fs: Vec<Poly<C>>,
    j: &Monomial,
    grid: &HashMap<Var, Vec<C>>,
    order: &[Var],
) -> Result<Vec<(usize, usize, bool)>> {
    let mut fixed = HashSet::new();
    if functional(&fs, j, grid, &fixed)?.is_zero() {
        return Err(Error::Witness(
            "witness monomial has zero coefficient".into(),
        ));
    }
    let mut out = Vec::with_capacity(order.len());
    for &x in order {
        fixed.insert(x);
        let mut pick = None;
        for (i, s) in grid[&x].iter().enumerate() {
            let assign = HashMap::from([(x, s.clone())]);
            let sub: Vec<Poly<C>> = fs.iter().map(|f| f.substitute(&assign)).collect();
            let v = functional(&sub, j, grid, &fixed)?;
            if !v.is_zero() {
                pick = Some((i, sub, v));
                break;
            }
        }
        let Some((idx, sub, v)) = pick else {
            return Err(Error::Internal(format!(
                "no candidate for {x:?} keeps the functional nonzero"
            )));
        };
        out.push((idx, idx + 1, !v.is_zero()));
        fs = sub.into_iter().filter(|f| !f.is_constant()).collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{product, Vars};
    use crate::rational::{int, ratio};

    fn lin(terms: &[(Var, i64)], c: i64) -> Poly<Rational> {
        Poly::linear(terms.iter().map(|&(x, a)| (x, int(a))), int(c))
    }

    #[test]
    fn single_difference_picks_the_nonzero_value() {
        // x - y with y fixed to 0: x = 0 annihilates, x = 1 does not.
        let mut vars = Vars::new();
        let x = vars.intern("x");
        let fs = vec![lin(&[(x, 1)], 0)];
        let lists = HashMap::from([(x, vec![int(0), int(1)])]);
        let out = constructive_cn(&fs, &Monomial::var(x), &lists).unwrap();
        assert_eq!(out.values[&x], int(1));
        assert_eq!(out.steps[0].tried, 2);
    }

    #[test]
    fn root_of_a_linear_factor_is_skipped() {
        let mut vars = Vars::new();
        let y = vars.intern("y");
        let fs = vec![lin(&[(y, 1)], 1)];
        let lists = HashMap::from([(y, vec![int(-1), int(0)])]);
        let out = constructive_cn(&fs, &Monomial::var(y), &lists).unwrap();
        assert_eq!(out.values[&y], int(0));
        assert_eq!(out.product, int(1));
    }

    #[test]
    fn plain_greedy_dead_end_is_avoided() {
        // (x1 - x2) with J = x1 and S(x2) = {1}: fixing x1 = 1 first would
        // leave the zero polynomial.
        let mut vars = Vars::new();
        let (x1, x2) = (vars.intern("x1"), vars.intern("x2"));
        let fs = vec![lin(&[(x1, 1), (x2, -1)], 0)];
        let lists = HashMap::from([(x1, vec![int(1), int(2)]), (x2, vec![int(1)])]);
        let out = constructive_cn(&fs, &Monomial::var(x1), &lists).unwrap();
        assert_eq!(out.values[&x1], int(2));
    }

    #[test]
    fn zero_coefficient_is_a_witness_error() {
        let mut vars = Vars::new();
        let (x, y) = (vars.intern("x"), vars.intern("y"));
        // (x + y)(x - y) = x^2 - y^2 has no x*y term.
        let fs = vec![lin(&[(x, 1), (y, 1)], 0), lin(&[(x, 1), (y, -1)], 0)];
        let lists = HashMap::from([(x, vec![int(0), int(1)]), (y, vec![int(0), int(1)])]);
        let j = Monomial::from_pairs([(x, 1), (y, 1)]);
        assert!(matches!(
            constructive_cn(&fs, &j, &lists),
            Err(Error::Witness(_))
        ));
        let short = HashMap::from([(x, vec![int(0)]), (y, vec![int(0), int(1)])]);
        let jx = Monomial::pow(x, 2);
        assert!(matches!(
            constructive_cn(&fs, &jx, &short),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn exact_fallback_when_denominator_vanishes_mod_p() {
        let mut vars = Vars::new();
        let (x, y) = (vars.intern("x"), vars.intern("y"));
        let p = num_bigint::BigInt::from(Fp::MODULUS);
        let awkward = Rational::new(1.into(), p);
        let fs = vec![
            Poly::linear([(x, int(1)), (y, int(1))], awkward.clone()),
            lin(&[(x, 1), (y, -1)], 3),
        ];
        let lists = HashMap::from([(x, vec![int(0), int(1)]), (y, vec![int(0), ratio(1, 2)])]);
        let j = Monomial::from_pairs([(x, 1), (y, 1)]);
        let out = constructive_cn(&fs, &j, &lists);
        // x*y has coefficient 0 in (x+y+a)(x-y+3); x^2 has 1.
        assert!(matches!(out, Err(Error::Witness(_))));
        let j = Monomial::pow(x, 2);
        let lists = HashMap::from([(x, vec![int(0), int(-3), int(5)]), (y, vec![int(0)])]);
        let out = constructive_cn(&fs, &j, &lists).unwrap();
        assert!(!out.modular);
        let at: HashMap<Var, Rational> = out.values.iter().map(|(a, b)| (*a, b.clone())).collect();
        assert_eq!(product(&fs).evaluate(&at).unwrap(), out.product);
    }
}
