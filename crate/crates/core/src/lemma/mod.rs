//! The three reducible configurations, their witnesses, and independent
//! recomputation of every coefficient attached to them.

mod recursion;
mod table;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cn::{build_pgh, search_witness, PolyContext, WitnessMonomial};
use crate::error::{Error, Result};
use crate::graph::{gen_petersen, EdgeKey, GpParams, Graph, Orientation, VertexId};
use crate::poly::{extract_ordered, extract_ordered_stats, FactorList, Monomial, Poly, Var};

pub use recursion::{
    recursion_checks, recursion_trace, tail_range, verify_recursion, verify_tail, RecursionCheck,
    TailRange, TailStep,
};
pub use table::CoeffClass;

/// Term cap used when a witness has to be searched for.
pub const SEARCH_TERM_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    I,
    II,
    III,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::I => "I",
            Kind::II => "II",
            Kind::III => "III",
        })
    }
}

/// Kind I: `n`-cycle sharing `u1u2` with the 4-cycle `u1u2v2v1`, `n >= 4`.
/// Kind II: the diamond (`n`, `t` unused). Kind III: `n`-cycle sharing
/// two edges with an 8-cycle, `t >= 3`, `n >= 2t + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConfigSpec {
    pub kind: Kind,
    pub n: u32,
    pub t: u32,
}

impl ConfigSpec {
    pub fn kind_i(n: u32) -> Self {
        ConfigSpec {
            kind: Kind::I,
            n,
            t: 1,
        }
    }

    pub fn kind_ii() -> Self {
        ConfigSpec {
            kind: Kind::II,
            n: 8,
            t: 0,
        }
    }

    pub fn kind_iii(n: u32, t: u32) -> Self {
        ConfigSpec {
            kind: Kind::III,
            n,
            t,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            Kind::I => self.n >= 4,
            Kind::II => true,
            Kind::III => self.t >= 3 && self.n >= 2 * self.t + 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Param(format!("configuration out of range: {self}")))
        }
    }
}

impl fmt::Display for ConfigSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::I => write!(f, "kind=I n={}", self.n),
            Kind::II => write!(f, "kind=II"),
            Kind::III => write!(f, "kind=III n={} t={}", self.n, self.t),
        }
    }
}

/// A configuration with its polynomial data.
#[derive(Clone, Debug)]
pub struct Config {
    pub spec: ConfigSpec,
    pub ctx: PolyContext,
    pub h: Graph,
    /// Orientation of `E(H)`.
    pub orientation: Orientation,
    pub factors: FactorList<BigInt>,
    /// `expected` holds the closed-form value, or the searched coefficient
    /// when no closed form applies.
    pub witness: WitnessMonomial,
    /// Exclusive ends of the extraction blocks (`P_1`, `P_2`, ...).
    pub block_ends: Vec<usize>,
}

impl Config {
    pub fn var(&self, label: &str) -> Var {
        self.ctx
            .vars
            .get(label)
            .unwrap_or_else(|| panic!("no variable {label}"))
    }

    /// `y_i` with the index reduced into `[1, n]`.
    pub fn y(&self, i: i64) -> Var {
        let n = self.spec.n as i64;
        self.var(&format!("y{}", (i - 1).rem_euclid(n) + 1))
    }

    pub fn y_poly(&self, i: i64) -> Poly<BigInt> {
        Poly::var(self.y(i))
    }
}

fn edge(a: VertexId, b: VertexId) -> Result<EdgeKey> {
    EdgeKey::new(a, b)
}

/// Factors in `h` vertex order with blocks given as vertex counts.
fn assemble(
    spec: ConfigSpec,
    mut ctx: PolyContext,
    h: Graph,
    orientation: Orientation,
    host_degree: impl Fn(VertexId) -> usize,
    block_sizes: &[usize],
    witness: WitnessMonomial,
) -> Result<Config> {
    let factors = build_pgh(&mut ctx, &host_degree, &h, &orientation)?;
    let per_vertex: Vec<usize> = h
        .vertices()
        .iter()
        .map(|&u| host_degree(u) - h.degree(u) + orientation.out_neighbors(&h, u).len())
        .collect();
    let mut block_ends = Vec::with_capacity(block_sizes.len());
    let (mut at, mut end) = (0, 0);
    for &size in block_sizes {
        end += per_vertex[at..at + size].iter().sum::<usize>();
        at += size;
        block_ends.push(end);
    }
    debug_assert_eq!(end, factors.len());
    Ok(Config {
        spec,
        ctx,
        h,
        orientation,
        factors,
        witness,
        block_ends,
    })
}

fn searched_witness(factors: &[Poly<BigInt>], ctx: &PolyContext) -> Result<WitnessMonomial> {
    let caps: HashMap<Var, u32> = ctx.vars.iter().map(|(x, _)| (x, 2)).collect();
    search_witness(factors, &caps, SEARCH_TERM_CAP)?
        .ok_or_else(|| Error::Witness("no witness monomial with exponents at most 2".into()))
}

/// Kind I inside `P(n, 1)`; `n = 3` is accepted for the solver's small cases.
fn kind_i(spec: ConfigSpec) -> Result<Config> {
    let n = spec.n;
    let p = GpParams::new(n, 1)?;
    let g = gen_petersen(p)?;
    let mut order = vec![p.u(1), p.u(2), p.v(1), p.v(2)];
    order.extend((3..=n as i64).map(|i| p.u(i)));
    let h = g.induced_subgraph(&order)?;

    let mut ctx = PolyContext::new();
    let z1 = ctx.bind(edge(p.u(1), p.v(1))?, "z1")?;
    let z2 = ctx.bind(edge(p.u(2), p.v(2))?, "z2")?;
    let w = ctx.bind(edge(p.v(1), p.v(2))?, "w")?;
    let ys: Vec<Var> = (1..=n as i64)
        .map(|i| ctx.bind(edge(p.u(i), p.u(i + 1))?, &format!("y{i}")))
        .collect::<Result<_>>()?;

    let mut arcs: Vec<(VertexId, VertexId)> = (1..n as i64).map(|i| (p.u(i), p.u(i + 1))).collect();
    arcs.extend([
        (p.u(1), p.u(n as i64)),
        (p.u(1), p.v(1)),
        (p.u(2), p.v(2)),
        (p.v(1), p.v(2)),
    ]);
    let orientation = Orientation::from_arcs(arcs)?;

    let mut blocks = vec![4];
    blocks.extend(std::iter::repeat_n(1, n as usize - 2));
    let j = Monomial::from_pairs(
        [(z1, 2), (z2, 1), (w, 2)]
            .into_iter()
            .chain(ys[..n as usize - 1].iter().map(|&y| (y, 2))),
    );
    let degree = |v: VertexId| g.degree(v);
    let mut cfg = assemble(
        spec,
        ctx,
        h,
        orientation,
        degree,
        &blocks,
        WitnessMonomial::new(j),
    )?;
    if n >= 5 {
        cfg.witness.expected = Some(BigInt::from(-3));
    } else {
        cfg.witness = searched_witness(&cfg.factors, &cfg.ctx)?;
    }
    Ok(cfg)
}

/// The diamond: 8-cycle `a1..a8` plus the chord `a1a5`, arcs `a_i -> a_{i+1}`
/// and `a1 -> a5`. With a host graph the vertices must induce exactly that.
pub fn diamond(a: [VertexId; 8], host: Option<&Graph>) -> Result<Config> {
    let mut edges: Vec<EdgeKey> = (0..8)
        .map(|i| edge(a[i], a[(i + 1) % 8]))
        .collect::<Result<_>>()?;
    edges.push(edge(a[0], a[4])?);
    let h = match host {
        Some(g) => {
            let h = g.induced_subgraph(&a)?;
            if h.edge_count() != 9 || edges.iter().any(|e| !h.contains_edge(e)) {
                return Err(Error::Param("the vertices do not induce a diamond".into()));
            }
            h
        }
        None => Graph::new(a.to_vec(), edges.clone())?,
    };
    let mut ctx = PolyContext::new();
    let z1 = ctx.bind(edges[8], "z1")?;
    let ys: Vec<Var> = (0..8)
        .map(|i| ctx.bind(edges[i], &format!("y{}", i + 1)))
        .collect::<Result<_>>()?;
    let mut arcs: Vec<(VertexId, VertexId)> = (0..8).map(|i| (a[i], a[(i + 1) % 8])).collect();
    arcs.push((a[0], a[4]));
    let orientation = Orientation::from_arcs(arcs)?;
    let j = Monomial::from_pairs(
        std::iter::once((z1, 2)).chain((0..7).map(|i| (ys[i], if i == 3 { 1 } else { 2 }))),
    );
    let witness = WitnessMonomial {
        monomial: j,
        expected: Some(BigInt::from(-8)),
    };
    let degree = |v: VertexId| host.map_or(3, |g| g.degree(v));
    assemble(
        ConfigSpec::kind_ii(),
        ctx,
        h,
        orientation,
        degree,
        &[8],
        witness,
    )
}

fn kind_iii(spec: ConfigSpec) -> Result<Config> {
    let (n, t) = (spec.n, spec.t);
    let p = GpParams::new(n, t)?;
    let (ni, ti) = (n as i64, t as i64);
    let g = gen_petersen(p)?;
    let mut order = vec![
        p.u(1),
        p.u(2),
        p.u(ti + 1),
        p.u(ti + 2),
        p.v(1),
        p.v(2),
        p.v(ti + 1),
        p.v(ti + 2),
    ];
    order.extend((3..=ti).map(|i| p.u(i)));
    order.extend((ti + 3..=ni).map(|i| p.u(i)));
    let h = g.induced_subgraph(&order)?;

    let mut ctx = PolyContext::new();
    let mut j: Vec<(Var, u32)> = Vec::new();
    for k in [1, 2, ti + 1, ti + 2] {
        j.push((ctx.bind(edge(p.u(k), p.v(k))?, &format!("z{k}"))?, 2));
    }
    for k in [1, 2] {
        j.push((ctx.bind(edge(p.v(k), p.v(k + ti))?, &format!("w{k}"))?, 2));
    }
    let ys: Vec<Var> = (1..=ni)
        .map(|i| ctx.bind(edge(p.u(i), p.u(i + 1))?, &format!("y{i}")))
        .collect::<Result<_>>()?;
    let y = |i: i64| ys[(i - 1) as usize];

    let mut arcs: Vec<(VertexId, VertexId)> = (1..ti)
        .chain(ti + 1..ni)
        .map(|i| (p.u(i), p.u(i + 1)))
        .collect();
    arcs.push((p.u(1), p.u(ni)));
    arcs.push((p.u(ti + 1), p.u(ti)));
    for k in [1, 2, ti + 1, ti + 2] {
        arcs.push((p.u(k), p.v(k)));
    }
    for k in [1, 2] {
        arcs.push((p.v(k), p.v(k + ti)));
    }
    let orientation = Orientation::from_arcs(arcs)?;

    j.push((y(1), 2));
    for i in (2..=ti - 2).chain(ti + 2..=ni - 2) {
        j.push((y(i), 2));
    }
    if t % 3 != 2 {
        j.extend([(y(ti - 1), 2), (y(ti), 1), (y(ni - 1), 1)]);
    } else if t % 6 == 2 {
        j.extend([(y(ti - 1), 1), (y(ti), 2), (y(ni - 1), 1)]);
    } else {
        j.extend([(y(ti - 1), 1), (y(ti), 1), (y(ni - 1), 1), (y(ni), 1)]);
    }
    let witness = WitnessMonomial {
        monomial: Monomial::from_pairs(j),
        expected: Some(CoeffClass::of(n, t).evaluate()),
    };
    let mut blocks = vec![8];
    blocks.extend(std::iter::repeat_n(1, order.len() - 8));
    let degree = |v: VertexId| g.degree(v);
    assemble(spec, ctx, h, orientation, degree, &blocks, witness)
}

/// `H = G[vertices]` under the canonical orientation, with a searched witness.
/// A single extraction block.
pub fn induced_config(spec: ConfigSpec, g: &Graph, vertices: &[VertexId]) -> Result<Config> {
    let h = g.induced_subgraph(vertices)?;
    let mut ctx = PolyContext::new();
    for (i, e) in h.edges().iter().enumerate() {
        ctx.bind(*e, &format!("x{}", i + 1))?;
    }
    let orientation = Orientation::canonical(&h);
    let degree = |v: VertexId| g.degree(v);
    let placeholder = WitnessMonomial::new(Monomial::one());
    let mut cfg = assemble(
        spec,
        ctx,
        h,
        orientation,
        degree,
        &[vertices.len()],
        placeholder,
    )?;
    cfg.witness = searched_witness(&cfg.factors, &cfg.ctx)?;
    Ok(cfg)
}

/// Factor list of `P_G(H)` under the fixed orientation, with its witness.
pub fn build_config(spec: ConfigSpec) -> Result<Config> {
    spec.validate()?;
    build_config_unchecked(spec)
}

/// As [`build_config`] but also accepts kind I with `n = 3`.
pub(crate) fn build_config_unchecked(spec: ConfigSpec) -> Result<Config> {
    match spec.kind {
        Kind::I => kind_i(spec),
        Kind::II => diamond(std::array::from_fn(|i| VertexId::outer(i as u32 + 1)), None),
        Kind::III => kind_iii(spec),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigReport {
    pub spec: ConfigSpec,
    pub witness: String,
    pub computed: String,
    pub expected: String,
    /// `"closed-form"` or `"search"`.
    pub expected_source: &'static str,
    pub matched: bool,
    pub max_terms: usize,
}

impl fmt::Display for ConfigReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} computed={} expected={} {}",
            self.spec,
            self.computed,
            self.expected,
            if self.matched { "OK" } else { "MISMATCH" }
        )
    }
}

/// Extracts the witness coefficient and compares it with the expected value.
pub fn verify_config(spec: ConfigSpec) -> Result<ConfigReport> {
    let cfg = build_config(spec)?;
    let (computed, stats) = extract_ordered_stats(&cfg.factors, &cfg.witness.monomial, None)?;
    let searched = spec.kind == Kind::I && spec.n < 5;
    let expected = cfg
        .witness
        .expected
        .clone()
        .ok_or_else(|| Error::Internal("configuration without an expected value".into()))?;
    let witness = cfg.witness.display(&cfg.ctx.vars).to_string();
    Ok(ConfigReport {
        spec,
        witness,
        matched: computed == expected,
        computed: computed.to_string(),
        expected: expected.to_string(),
        expected_source: if searched { "search" } else { "closed-form" },
        max_terms: stats.max_terms,
    })
}

/// `F*_{s,t} = ∏_{i=s}^{t} (y_i + y_{i+1})(y_i - y_{i+2})` in path order and
/// `J*_{s,t} = ∏_{i=s}^{t} y_i^2`, over variables `y_s..y_{t+2}`.
pub fn observation_factors(
    s: u32,
    t: u32,
) -> Result<(crate::poly::Vars, FactorList<BigInt>, Monomial)> {
    if s == 0 || s >= t {
        return Err(Error::Param(format!(
            "observation needs 1 <= s < t, got s={s} t={t}"
        )));
    }
    let mut vars = crate::poly::Vars::new();
    let ys: Vec<Var> = (s..=t + 2).map(|i| vars.intern(&format!("y{i}"))).collect();
    let one = || BigInt::from(1);
    let mut factors = Vec::new();
    for k in 0..=(t - s) as usize {
        factors.push(Poly::linear(
            [(ys[k], one()), (ys[k + 1], one())],
            BigInt::from(0),
        ));
        factors.push(Poly::linear(
            [(ys[k], one()), (ys[k + 2], -one())],
            BigInt::from(0),
        ));
    }
    let j = Monomial::from_pairs(ys[..=(t - s) as usize].iter().map(|&y| (y, 2)));
    Ok((vars, factors, j))
}

/// Whether `η_{J*_{s,t}}[F*_{s,t}] = 1`.
pub fn verify_observation(s: u32, t: u32) -> Result<bool> {
    let (_, factors, j) = observation_factors(s, t)?;
    Ok(extract_ordered(&factors, &j)? == BigInt::from(1))
}
