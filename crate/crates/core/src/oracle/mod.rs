//! Brute-force ground truth: exhaustive weighting search and full polynomial
//! expansion. Both refuse to start when the predicted cost exceeds the budget.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Element, Graph, ListAssignment, TotalWeighting};
use crate::poly::{Coeff, Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    pub max_combinations: u64,
    pub max_terms: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_combinations: 20_000_000,
            max_terms: 1_000_000,
        }
    }
}

impl OracleBudget {
    pub fn new(max_combinations: u64, max_terms: u64) -> Result<Self> {
        if max_combinations == 0 || max_terms == 0 {
            return Err(Error::Param("oracle budgets must be positive".into()));
        }
        Ok(OracleBudget {
            max_combinations,
            max_terms,
        })
    }
}

/// Every element of `g` (vertices then edges, in graph order) with its
/// values scaled to integers by a common denominator.
struct Scaled {
    elements: Vec<Element>,
    values: Vec<Vec<i64>>,
}

fn scale(g: &Graph, lists: &ListAssignment) -> Result<Scaled> {
    let elements: Vec<Element> = g.elements().collect();
    let mut raw = Vec::with_capacity(elements.len());
    for z in &elements {
        let list = lists
            .get(z)
            .filter(|l| !l.is_empty())
            .ok_or_else(|| Error::Input(format!("no list for {z}")))?;
        raw.push(list);
    }
    let den = raw
        .iter()
        .flat_map(|l| l.iter())
        .fold(BigInt::one(), |d, q| d.lcm(q.denom()));
    // Each sum has at most 1 + max degree terms; keep a wide margin below i64.
    let limit = i64::MAX / (4 * (g.edge_count() as i64 + 1));
    let values = raw
        .iter()
        .map(|l| {
            l.iter()
                .map(|q| {
                    (q.numer() * (&den / q.denom()))
                        .to_i64()
                        .filter(|v| v.abs() < limit)
                        .ok_or_else(|| Error::Size("list values too large for the oracle".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(Scaled { elements, values })
}

/// Tries every combination whose first element takes value index `head`,
/// lexicographically (later elements vary fastest).
fn first_with_head(g: &Graph, s: &Scaled, head: usize) -> Option<Vec<usize>> {
    let nz = s.elements.len();
    let index: HashMap<Element, usize> = s
        .elements
        .iter()
        .enumerate()
        .map(|(i, z)| (*z, i))
        .collect();
    let incident: Vec<Vec<usize>> = g
        .vertices()
        .iter()
        .map(|&v| {
            std::iter::once(index[&Element::Vertex(v)])
                .chain(g.incident_edges(v).map(|e| index[&Element::Edge(*e)]))
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            (g.vertex_index(a).unwrap(), g.vertex_index(b).unwrap())
        })
        .collect();
    let mut pick = vec![0; nz];
    pick[0] = head;
    let mut sums = vec![0i64; incident.len()];
    loop {
        for (v, inc) in incident.iter().enumerate() {
            sums[v] = inc.iter().map(|&i| s.values[i][pick[i]]).sum();
        }
        if pairs.iter().all(|&(a, b)| sums[a] != sums[b]) {
            return Some(pick);
        }
        // Odometer over elements 1..; element 0 is fixed.
        let mut i = nz - 1;
        loop {
            if i == 0 {
                return None;
            }
            pick[i] += 1;
            if pick[i] < s.values[i].len() {
                break;
            }
            pick[i] = 0;
            i -= 1;
        }
    }
}

/// The first proper weighting in lexicographic list order (vertices, then
/// edges, each in graph order; earlier elements vary slowest), or `None`.
/// Workers split on the first element's value; the lowest index wins.
pub fn brute_force_weighting(
    g: &Graph,
    lists: &ListAssignment,
    budget: OracleBudget,
) -> Result<Option<TotalWeighting>> {
    let s = scale(g, lists)?;
    let predicted = s
        .values
        .iter()
        .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
        .unwrap_or(u64::MAX);
    if predicted > budget.max_combinations {
        return Err(Error::Size(format!(
            "{predicted} combinations exceed the oracle budget of {}",
            budget.max_combinations
        )));
    }
    if s.elements.is_empty() {
        return Ok(Some(TotalWeighting::new()));
    }
    let found = (0..s.values[0].len())
        .into_par_iter()
        .find_map_first(|head| first_with_head(g, &s, head));
    Ok(found.map(|pick| {
        let mut w = TotalWeighting::new();
        for (i, z) in s.elements.iter().enumerate() {
            w.set(*z, lists.get(z).unwrap()[pick[i]].clone());
        }
        w
    }))
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The fully expanded product. The predicted size is the smaller of the
/// product of term counts and the number of monomials of bounded degree.
pub fn naive_expand<C: Coeff>(factors: &[Poly<C>], budget: OracleBudget) -> Result<Poly<C>> {
    let by_terms = factors
        .iter()
        .try_fold(1u64, |acc, f| acc.checked_mul(f.len().max(1) as u64))
        .unwrap_or(u64::MAX);
    let nvars = factors
        .iter()
        .flat_map(|f| f.vars())
        .collect::<std::collections::BTreeSet<_>>()
        .len() as u64;
    let degree: u64 = factors.iter().map(|f| f.degree().unwrap_or(0) as u64).sum();
    let predicted = by_terms.min(binomial(nvars + degree, degree));
    if predicted > budget.max_terms {
        return Err(Error::Size(format!(
            "expansion may reach {predicted} terms, over the budget of {}",
            budget.max_terms
        )));
    }
    let mut acc: HashMap<Monomial, C> = HashMap::from([(Monomial::one(), C::one())]);
    for f in factors {
        let mut next: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in &acc {
            for (fm, fc) in f.terms() {
                *next.entry(m.mul(fm)).or_insert_with(C::zero) += &(c.clone() * fc);
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    Ok(Poly::from_terms(acc))
}
