//! Exact sparse multivariate polynomials and ordered coefficient extraction.

mod coeff;
mod extract;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use coeff::{Coeff, Fp};
pub use extract::{
    extract_ordered, extract_ordered_stats, extract_trace, grid_functional, ExtractStats, Trace,
};

/// Opaque variable handle; labels live in a [`Vars`] table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

/// Label interner. Ids are dense and follow creation order.
#[derive(Clone, Debug, Default)]
pub struct Vars {
    labels: Vec<String>,
    index: HashMap<String, Var>,
}

impl Vars {
    pub fn new() -> Self {
        Self::default()
    }

    /// Id for `label`, creating it on first use.
    pub fn intern(&mut self, label: &str) -> Var {
        if let Some(&v) = self.index.get(label) {
            return v;
        }
        let v = Var(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), v);
        v
    }

    pub fn get(&self, label: &str) -> Option<Var> {
        self.index.get(label).copied()
    }

    pub fn label(&self, v: Var) -> &str {
        &self.labels[v.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &str)> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, s)| (Var(i as u32), s.as_str()))
    }

    /// Parses `"z1^2*w*y3"` (or `"1"` for the empty monomial).
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        for part in text.split('*') {
            let (name, exp) = match part.split_once('^') {
                Some((name, e)) => {
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::Input(format!("bad exponent in {part:?}")))?;
                    (name, e)
                }
                None => (part, 1),
            };
            let v = self
                .get(name.trim())
                .ok_or_else(|| Error::Input(format!("unknown variable {name:?}")))?;
            pairs.push((v, exp));
        }
        Ok(Monomial::from_pairs(pairs))
    }
}

/// Exponent vector: `(var, exp)` pairs sorted by var, every exp positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(x: Var) -> Self {
        Monomial(vec![(x, 1)])
    }

    pub fn pow(x: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(x, e)])
        }
    }

    /// Repeated variables are merged; zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut v: Vec<(Var, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 += e,
                _ => out.push((x, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, x: Var) -> u32 {
        match self.0.binary_search_by_key(&x, |p| p.0) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self` with `x` removed entirely.
    pub fn without(&self, x: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| p.0 != x).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for &(x, e) in &self.0 {
            let d = other.exponent(x);
            if d > e {
                return None;
            }
            if e > d {
                out.push((x, e - d));
            }
        }
        (other.vars().all(|x| self.exponent(x) > 0)).then_some(Monomial(out))
    }

    /// `"z1^2*w*y3"`, factors in variable-id order; `"1"` when empty.
    pub fn display<'a>(&'a self, vars: &'a Vars) -> impl fmt::Display + 'a {
        MonomialDisplay { m: self, vars }
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    vars: &'a Vars,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return f.write_str("1");
        }
        for (k, (x, e)) in self.m.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.vars.label(x))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial; no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    terms: HashMap<Monomial, C>,
}

/// Ordered factors whose product is the polynomial of interest.
pub type FactorList<C> = Vec<Poly<C>>;

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: HashMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn var(x: Var) -> Self {
        Poly::term(Monomial::var(x), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// Sum of `coeff * x` over `(x, coeff)` plus `constant`.
    pub fn linear(coeffs: impl IntoIterator<Item = (Var, C)>, constant: C) -> Self {
        let mut p = Poly::constant(constant);
        for (x, c) in coeffs {
            p.add_term(Monomial::var(x), c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Terms sorted by monomial, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, x: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(x)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Homogeneous part of maximal degree.
    pub fn top_homogeneous(&self) -> Poly<C> {
        let Some(d) = self.degree() else {
            return Poly::zero();
        };
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Poly<C> {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    /// `η_j[self]`: terms whose exponents on `supp(j)` equal those of `j`,
    /// with `j` divided out.
    pub fn coefficient_of(&self, j: &Monomial) -> Poly<C> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if j.iter().all(|(x, e)| m.exponent(x) == e) {
                let rest = Monomial(m.iter().filter(|&(x, _)| j.exponent(x) == 0).collect());
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Replaces each assigned variable by its value.
    pub fn substitute(&self, values: &HashMap<Var, C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut rest = Vec::with_capacity(m.0.len());
            for &(x, e) in &m.0 {
                match values.get(&x) {
                    Some(v) => {
                        for _ in 0..e {
                            c = c * v;
                        }
                    }
                    None => rest.push((x, e)),
                }
            }
            out.add_term(Monomial(rest), c);
        }
        out
    }

    /// Value at a full assignment; `None` if some variable is unassigned.
    pub fn evaluate(&self, values: &HashMap<Var, C>) -> Option<C> {
        let p = self.substitute(values);
        p.is_constant().then(|| p.constant_term())
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> Option<D>) -> Option<Poly<D>> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Some(out)
    }

    /// One `"coeff * monomial"` line per term, sorted by the monomial text.
    pub fn dump(&self, vars: &Vars) -> String {
        let mut lines: Vec<(String, String)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.display(vars).to_string(), c.to_string()))
            .collect();
        lines.sort();
        lines
            .into_iter()
            .map(|(m, c)| format!("{c} * {m}\n"))
            .collect()
    }

    /// Human-readable sum, terms in monomial order.
    pub fn display<'a>(&'a self, vars: &'a Vars) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, vars }
    }
}

struct PolyDisplay<'a, C> {
    p: &'a Poly<C>,
    vars: &'a Vars,
}

impl<C: Coeff> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.p.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", m.display(self.vars))?;
            } else {
                write!(f, "({c})*{}", m.display(self.vars))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Poly<C>) -> Poly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb);
            }
        }
        out
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

/// Product of all factors, expanded.
pub fn product<C: Coeff>(factors: &[Poly<C>]) -> Poly<C> {
    factors.iter().fold(Poly::one(), |acc, f| &acc * f)
}

/// Substitutes into every factor.
pub fn substitute_all<C: Coeff>(factors: &[Poly<C>], values: &HashMap<Var, C>) -> FactorList<C> {
    factors.iter().map(|f| f.substitute(values)).collect()
}
