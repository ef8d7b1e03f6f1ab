//! Graph polynomials and the constructive Combinatorial Nullstellensatz.

mod constructive;
mod search;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Element, Graph, Orientation, TotalWeighting, VertexId};
use crate::poly::{Coeff, FactorList, Monomial, Poly, Var, Vars};
use crate::rational::Rational;

pub use constructive::{constructive_cn, CnOutcome, CnStep};
pub use search::search_witness;

/// Variable bindings for the elements of a graph.
#[derive(Clone, Debug, Default)]
pub struct PolyContext {
    pub vars: Vars,
    vars_of: BTreeMap<Element, Var>,
    element_of: BTreeMap<Var, Element>,
}

impl PolyContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `z` to a variable named `label`. Rebinding is an error.
    pub fn bind(&mut self, z: impl Into<Element>, label: &str) -> Result<Var> {
        let z = z.into();
        if self.vars_of.contains_key(&z) {
            return Err(Error::Input(format!("{z} already has a variable")));
        }
        if self.vars.get(label).is_some() {
            return Err(Error::Input(format!(
                "variable name {label} already in use"
            )));
        }
        let x = self.vars.intern(label);
        self.vars_of.insert(z, x);
        self.element_of.insert(x, z);
        Ok(x)
    }

    /// Variable of `z`, created with its display name if unbound.
    pub fn var(&mut self, z: impl Into<Element>) -> Var {
        let z = z.into();
        if let Some(&x) = self.vars_of.get(&z) {
            return x;
        }
        let x = self.vars.intern(&z.to_string());
        self.vars_of.insert(z, x);
        self.element_of.insert(x, z);
        x
    }

    pub fn get(&self, z: &Element) -> Option<Var> {
        self.vars_of.get(z).copied()
    }

    pub fn element(&self, x: Var) -> Option<Element> {
        self.element_of.get(&x).copied()
    }

    pub fn label(&self, x: Var) -> &str {
        self.vars.label(x)
    }
}

/// A monomial with (optionally) its known coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessMonomial {
    pub monomial: Monomial,
    pub expected: Option<BigInt>,
}

impl WitnessMonomial {
    pub fn new(monomial: Monomial) -> Self {
        WitnessMonomial {
            monomial,
            expected: None,
        }
    }

    pub fn max_exponent(&self) -> u32 {
        self.monomial.iter().map(|(_, e)| e).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, vars: &'a Vars) -> impl fmt::Display + 'a {
        self.monomial.display(vars)
    }
}

/// Witness as written in reports: the monomial text and its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub monomial: String,
    pub coefficient: Option<String>,
}

impl WitnessReport {
    pub fn new(w: &WitnessMonomial, vars: &Vars) -> Self {
        WitnessReport {
            monomial: w.display(vars).to_string(),
            coefficient: w.expected.as_ref().map(ToString::to_string),
        }
    }
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `S_u` as a linear form over the variables of `E(u) ∪ {u}`.
fn vertex_sum(ctx: &mut PolyContext, g: &Graph, u: VertexId) -> Poly<BigInt> {
    let mut terms = vec![(ctx.var(u), int(1))];
    for e in g.incident_edges(u) {
        terms.push((ctx.var(*e), int(1)));
    }
    Poly::linear(terms, int(0))
}

/// `P(G)`: one factor `S_u - S_v` per arc `u -> v`, in edge order.
pub fn build_pg(ctx: &mut PolyContext, g: &Graph, d: &Orientation) -> Result<FactorList<BigInt>> {
    d.check_covers(g)?;
    let mut out = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let (u, v) = d.arc(e).unwrap();
        let f = &vertex_sum(ctx, g, u) - &vertex_sum(ctx, g, v);
        out.push(f);
    }
    Ok(out)
}

/// `Q_G(H)`: for each `u` in `V(H)` (in `h` order) and each out-neighbour `v`,
/// the factor `S_u - S_v` with every element outside `T(H)` replaced by its
/// `psi` value. Boundary edges must be oriented away from `H`.
pub fn build_qgh(
    ctx: &mut PolyContext,
    g: &Graph,
    h: &Graph,
    d: &Orientation,
    psi: &TotalWeighting,
) -> Result<FactorList<Rational>> {
    let in_h = |z: &Element| match z {
        Element::Vertex(v) => h.contains_vertex(*v),
        Element::Edge(e) => h.contains_edge(e),
    };
    let sum = |ctx: &mut PolyContext, v: VertexId| -> Result<Poly<Rational>> {
        let mut p = Poly::zero();
        let elems = std::iter::once(Element::Vertex(v))
            .chain(g.incident_edges(v).map(|e| Element::Edge(*e)));
        for z in elems {
            if in_h(&z) {
                p.add_term(Monomial::var(ctx.var(z)), Rational::one());
            } else {
                let c = psi
                    .get(&z)
                    .ok_or_else(|| Error::Input(format!("psi has no value for {z}")))?;
                p.add_term(Monomial::one(), c.clone());
            }
        }
        Ok(p)
    };
    let mut out = Vec::new();
    for &u in h.vertices() {
        if !g.contains_vertex(u) {
            return Err(Error::Input(format!(
                "{u} is not a vertex of the host graph"
            )));
        }
        for e in g.incident_edges(u) {
            let (tail, head) = d
                .arc(e)
                .ok_or_else(|| Error::Input(format!("edge {e} incident to H is not oriented")))?;
            if !h.contains_edge(e) && tail != u {
                return Err(Error::Input(format!(
                    "boundary edge {e} must be oriented away from H"
                )));
            }
            if tail == u {
                let f = &sum(ctx, u)? - &sum(ctx, head)?;
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// `P_G(H)` over the edge variables of `h`: for each `u` (in `h` order), the
/// boundary factor `Σ_{E_H(u)} x_e` repeated `deg_G(u) - deg_H(u)` times,
/// then `Σ_{E_H(u)} x_e - Σ_{E_H(v)} x_e` for each out-neighbour `v` in `d_h`.
pub fn build_pgh(
    ctx: &mut PolyContext,
    g_degree: impl Fn(VertexId) -> usize,
    h: &Graph,
    d_h: &Orientation,
) -> Result<FactorList<BigInt>> {
    d_h.check_covers(h)?;
    let sum = |ctx: &mut PolyContext, v: VertexId| {
        Poly::linear(
            h.incident_edges(v)
                .map(|e| (ctx.var(*e), int(1)))
                .collect::<Vec<_>>(),
            int(0),
        )
    };
    let mut out = Vec::new();
    for &u in h.vertices() {
        let (dg, dh) = (g_degree(u), h.degree(u));
        if dg < dh {
            return Err(Error::Input(format!(
                "{u}: host degree {dg} below subgraph degree {dh}"
            )));
        }
        let s = sum(ctx, u);
        for _ in dh..dg {
            out.push(s.clone());
        }
        for v in d_h.out_neighbors(h, u) {
            let f = &s - &sum(ctx, v);
            out.push(f);
        }
    }
    Ok(out)
}

/// Total degree of a factor list.
pub fn total_degree<C: Coeff>(factors: &[Poly<C>]) -> u32 {
    factors.iter().map(|f| f.degree().unwrap_or(0)).sum()
}

/// Variables occurring in any factor.
pub fn factor_vars<C: Coeff>(factors: &[Poly<C>]) -> HashSet<Var> {
    factors.iter().flat_map(|f| f.vars()).collect()
}
