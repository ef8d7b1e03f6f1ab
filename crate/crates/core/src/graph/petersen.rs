use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{EdgeKey, Graph, VertexId};
use crate::error::{Error, Result};

/// Parameters of `P(n, t)`: `n >= 3`, `1 <= t <= n/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GpParams {
    pub n: u32,
    pub t: u32,
}

impl GpParams {
    pub fn new(n: u32, t: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::Param(format!("P({n},{t}): n must be at least 3")));
        }
        if t == 0 || 2 * t > n {
            return Err(Error::Param(format!(
                "P({n},{t}): t must satisfy 1 <= t <= n/2"
            )));
        }
        Ok(GpParams { n, t })
    }

    /// Every valid `(n, t)` with `n <= max_n`, ordered by `n` then `t`.
    pub fn all_up_to(max_n: u32) -> Vec<GpParams> {
        (3..=max_n)
            .flat_map(|n| (1..=n / 2).map(move |t| GpParams { n, t }))
            .collect()
    }

    pub fn u(&self, i: i64) -> VertexId {
        VertexId::outer_mod(i, self.n)
    }

    pub fn v(&self, i: i64) -> VertexId {
        VertexId::inner_mod(i, self.n)
    }
}

/// Edges of the generalized Petersen graph with inner step `step`
/// (`1 <= step < n`): outer cycle, then legs, then inner edges, each by index.
/// Coinciding inner pairs are emitted once.
pub fn petersen_edges(n: u32, step: u32) -> Result<Vec<EdgeKey>> {
    if n < 3 || step == 0 || step >= n {
        return Err(Error::Param(format!("invalid step {step} for n = {n}")));
    }
    let mut edges = Vec::with_capacity(3 * n as usize);
    for i in 1..=n as i64 {
        edges.push(EdgeKey::new(
            VertexId::outer_mod(i, n),
            VertexId::outer_mod(i + 1, n),
        )?);
    }
    for i in 1..=n {
        edges.push(EdgeKey::new(VertexId::outer(i), VertexId::inner(i))?);
    }
    let mut seen = std::collections::HashSet::new();
    for i in 1..=n as i64 {
        let e = EdgeKey::new(
            VertexId::inner_mod(i, n),
            VertexId::inner_mod(i + step as i64, n),
        )?;
        if seen.insert(e) {
            edges.push(e);
        }
    }
    Ok(edges)
}

pub fn gen_petersen(params: GpParams) -> Result<Graph> {
    let GpParams { n, t } = GpParams::new(params.n, params.t)?;
    let vertices = (1..=n)
        .map(VertexId::outer)
        .chain((1..=n).map(VertexId::inner))
        .collect();
    Graph::new(vertices, petersen_edges(n, t)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerPart {
    /// `gcd(n, t)` cycles, each starting at its smallest index and stepping
    /// first to the smaller of that vertex's two neighbours.
    Cycles(Vec<Vec<VertexId>>),
    /// `n = 2t`: the inner edges form a perfect matching.
    Matching(Vec<EdgeKey>),
}

/// `P(n,t)` split into the outer cycle, the legs and the inner part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub outer: Vec<EdgeKey>,
    pub matching: Vec<EdgeKey>,
    pub inner: InnerPart,
}

impl Decomposition {
    pub fn inner_edges(&self) -> Vec<EdgeKey> {
        match &self.inner {
            InnerPart::Matching(m) => m.clone(),
            InnerPart::Cycles(cycles) => cycles
                .iter()
                .flat_map(|c| {
                    (0..c.len()).map(move |i| EdgeKey::new(c[i], c[(i + 1) % c.len()]).unwrap())
                })
                .collect(),
        }
    }
}

pub fn decompose(params: GpParams) -> Result<Decomposition> {
    let GpParams { n, t } = GpParams::new(params.n, params.t)?;
    let p = GpParams { n, t };
    let outer = (1..=n as i64)
        .map(|i| EdgeKey::new(p.u(i), p.u(i + 1)))
        .collect::<Result<_>>()?;
    let matching = (1..=n as i64)
        .map(|i| EdgeKey::new(p.u(i), p.v(i)))
        .collect::<Result<_>>()?;
    let inner = if 2 * t == n {
        InnerPart::Matching(
            (1..=t as i64)
                .map(|i| EdgeKey::new(p.v(i), p.v(i + t as i64)))
                .collect::<Result<_>>()?,
        )
    } else {
        let g = n.gcd(&t);
        let len = n / g;
        let cycles = (1..=g as i64)
            .map(|start| {
                let forward = p.v(start + t as i64);
                let backward = p.v(start - t as i64);
                let step = if forward.index < backward.index {
                    t as i64
                } else {
                    -(t as i64)
                };
                (0..len as i64).map(|k| p.v(start + k * step)).collect()
            })
            .collect();
        InnerPart::Cycles(cycles)
    };
    Ok(Decomposition {
        outer,
        matching,
        inner,
    })
}
