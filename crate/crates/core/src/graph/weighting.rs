use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{EdgeKey, Element, Graph, VertexId};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// One exact value per element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TotalWeighting {
    values: BTreeMap<Element, Rational>,
}

impl TotalWeighting {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, z: &Element) -> Option<&Rational> {
        self.values.get(z)
    }

    pub fn set(&mut self, z: impl Into<Element>, value: Rational) {
        self.values.insert(z.into(), value);
    }

    pub fn remove(&mut self, z: &Element) -> Option<Rational> {
        self.values.remove(z)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &Rational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copies every entry of `other` over `self`.
    pub fn merge(&mut self, other: &TotalWeighting) {
        for (z, q) in &other.values {
            self.values.insert(*z, q.clone());
        }
    }

    /// Restriction to the elements accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Element) -> bool) -> TotalWeighting {
        let values = self
            .values
            .iter()
            .filter(|(z, _)| keep(z))
            .map(|(z, q)| (*z, q.clone()))
            .collect();
        TotalWeighting { values }
    }

    pub fn check_total(&self, g: &Graph) -> Result<()> {
        match g.elements().find(|z| !self.values.contains_key(z)) {
            Some(z) => Err(Error::Input(format!("weighting has no value for {z}"))),
            None => Ok(()),
        }
    }

    /// `S(v)`: the weight of `v` plus the weights of its incident edges in `g`.
    pub fn vertex_sum(&self, g: &Graph, v: VertexId) -> Result<Rational> {
        let missing = |z: Element| Error::Input(format!("weighting has no value for {z}"));
        let mut s = self
            .values
            .get(&Element::Vertex(v))
            .cloned()
            .ok_or_else(|| missing(v.into()))?;
        for e in g.incident_edges(v) {
            s += self
                .values
                .get(&Element::Edge(*e))
                .ok_or_else(|| missing((*e).into()))?;
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperReport {
    pub proper: bool,
    pub violations: Vec<EdgeKey>,
}

/// Checks `S(u) != S(v)` on every edge of `g`.
pub fn verify_proper(g: &Graph, w: &TotalWeighting) -> Result<ProperReport> {
    w.check_total(g)?;
    let sums: BTreeMap<VertexId, Rational> = g
        .vertices()
        .iter()
        .map(|&v| Ok((v, w.vertex_sum(g, v)?)))
        .collect::<Result<_>>()?;
    let violations: Vec<EdgeKey> = g
        .edges()
        .iter()
        .filter(|e| {
            let (a, b) = e.endpoints();
            sums[&a] == sums[&b]
        })
        .copied()
        .collect();
    Ok(ProperReport {
        proper: violations.is_empty(),
        violations,
    })
}

/// Candidate values per element, in preference order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ListAssignment {
    lists: BTreeMap<Element, Vec<Rational>>,
}

impl ListAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Same list for every vertex and every edge of `g`.
    pub fn uniform(g: &Graph, vertex_list: &[Rational], edge_list: &[Rational]) -> Self {
        let mut l = ListAssignment::new();
        for z in g.elements() {
            let list = match z {
                Element::Vertex(_) => vertex_list,
                Element::Edge(_) => edge_list,
            };
            l.lists.insert(z, list.to_vec());
        }
        l
    }

    pub fn set(&mut self, z: impl Into<Element>, values: Vec<Rational>) -> Result<()> {
        let z = z.into();
        let distinct: BTreeSet<&Rational> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(Error::Input(format!("list for {z} repeats a value")));
        }
        self.lists.insert(z, values);
        Ok(())
    }

    pub fn get(&self, z: &Element) -> Option<&[Rational]> {
        self.lists.get(z).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &Vec<Rational>)> {
        self.lists.iter()
    }

    /// Fails unless every element of `g` has exactly `k` (vertices) or
    /// `k_edge` (edges) distinct values.
    pub fn check_sizes(&self, g: &Graph, k: usize, k_edge: usize) -> Result<()> {
        for z in g.elements() {
            let want = if matches!(z, Element::Vertex(_)) {
                k
            } else {
                k_edge
            };
            let list = self
                .lists
                .get(&z)
                .ok_or_else(|| Error::Input(format!("no list for {z}")))?;
            if list.len() != want {
                return Err(Error::Input(format!(
                    "list for {z} has {} values, expected {want}",
                    list.len()
                )));
            }
            let distinct: BTreeSet<&Rational> = list.iter().collect();
            if distinct.len() != list.len() {
                return Err(Error::Input(format!("list for {z} repeats a value")));
            }
        }
        Ok(())
    }

    /// Whether `w(z)` lies in `L(z)` for every element of `g`.
    pub fn admits(&self, g: &Graph, w: &TotalWeighting) -> bool {
        g.elements().all(|z| match (self.get(&z), w.get(&z)) {
            (Some(list), Some(q)) => list.contains(q),
            _ => false,
        })
    }
}

impl TotalWeighting {
    /// Adds `c` to every vertex weight.
    pub fn shift_vertices(&self, c: &Rational) -> TotalWeighting {
        if c.is_zero() {
            return self.clone();
        }
        let values = self
            .values
            .iter()
            .map(|(z, q)| match z {
                Element::Vertex(_) => (*z, q + c),
                Element::Edge(_) => (*z, q.clone()),
            })
            .collect();
        TotalWeighting { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn k2() -> (Graph, EdgeKey) {
        let (a, b) = (VertexId::outer(1), VertexId::outer(2));
        let e = EdgeKey::new(a, b).unwrap();
        (Graph::new(vec![a, b], vec![e]).unwrap(), e)
    }

    #[test]
    fn single_edge_with_equal_weights_is_improper() {
        let (g, e) = k2();
        let mut w = TotalWeighting::new();
        for z in g.elements() {
            w.set(z, int(1));
        }
        let r = verify_proper(&g, &w).unwrap();
        assert!(!r.proper);
        assert_eq!(r.violations, vec![e]);
    }

    #[test]
    fn path_with_edge_weights_one_and_two_is_proper() {
        let (a, b, c) = (VertexId::outer(1), VertexId::outer(2), VertexId::outer(3));
        let ab = EdgeKey::new(a, b).unwrap();
        let bc = EdgeKey::new(b, c).unwrap();
        let g = Graph::new(vec![a, b, c], vec![ab, bc]).unwrap();
        let mut w = TotalWeighting::new();
        for v in [a, b, c] {
            w.set(v, int(0));
        }
        w.set(ab, int(1));
        w.set(bc, int(2));
        assert_eq!(w.vertex_sum(&g, a).unwrap(), int(1));
        assert_eq!(w.vertex_sum(&g, b).unwrap(), int(3));
        assert_eq!(w.vertex_sum(&g, c).unwrap(), int(2));
        assert!(verify_proper(&g, &w).unwrap().proper);
    }

    #[test]
    fn partial_weighting_is_an_input_error() {
        let (g, _) = k2();
        let mut w = TotalWeighting::new();
        w.set(VertexId::outer(1), int(0));
        assert!(matches!(verify_proper(&g, &w), Err(Error::Input(_))));
    }

    #[test]
    fn list_sizes_are_checked() {
        let (g, e) = k2();
        let mut l = ListAssignment::uniform(&g, &[int(0)], &[int(1), int(2), int(3)]);
        assert!(l.check_sizes(&g, 1, 3).is_ok());
        assert!(l.check_sizes(&g, 1, 2).is_err());
        assert!(l.set(e, vec![int(1), int(1), int(2)]).is_err());
        l.set(e, vec![int(1), int(2)]).unwrap();
        assert!(l.check_sizes(&g, 1, 3).is_err());
    }
}
