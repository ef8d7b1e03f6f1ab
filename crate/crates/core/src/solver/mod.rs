//! The constructive pipeline for `P(n,t)`: pick a reducible configuration
//! `H`, weight `G' = G - E(H)` by backtracking, extend over `H` with the
//! constructive Nullstellensatz, and verify.

mod gprime;
mod lists;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::cn::{build_qgh, constructive_cn, CnOutcome, WitnessReport};
use crate::error::{Error, Result};
use crate::graph::{
    components, gen_petersen, structural_predicates, verify_proper, EdgeKey, Element, GpParams,
    Graph, ListAssignment, TotalWeighting, VertexId, WeightingFile,
};
use crate::lemma::{build_config_unchecked, diamond, induced_config, Config, ConfigSpec, Kind};
use crate::poly::{substitute_all, Var};
use crate::rational::{format_rational, Rational};

pub use gprime::solve_gprime;
pub use lists::{gen_lists, ListStyle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    #[serde(rename = "N_EQ_2T")]
    NEq2T,
    #[serde(rename = "T1")]
    T1,
    #[serde(rename = "T2")]
    T2,
    #[serde(rename = "T3_N_EQ_2T1")]
    T3NEq2T1,
    #[serde(rename = "T3_N_GE_2T2")]
    T3NGe2T2,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::NEq2T => "N_EQ_2T",
            CaseTag::T1 => "T1",
            CaseTag::T2 => "T2",
            CaseTag::T3NEq2T1 => "T3_N_EQ_2T1",
            CaseTag::T3NGe2T2 => "T3_N_GE_2T2",
        })
    }
}

impl CaseTag {
    /// Every tag whose condition holds; exactly one for valid parameters.
    pub fn matching(p: GpParams) -> Vec<CaseTag> {
        let (n, t) = (p.n, p.t);
        [
            (CaseTag::NEq2T, n == 2 * t && t >= 2),
            (CaseTag::T1, t == 1),
            (CaseTag::T2, t == 2 && n >= 5),
            (CaseTag::T3NEq2T1, t >= 3 && n == 2 * t + 1),
            (CaseTag::T3NGe2T2, t >= 3 && n >= 2 * t + 2),
        ]
        .into_iter()
        .filter_map(|(tag, ok)| ok.then_some(tag))
        .collect()
    }
}

/// A tag with its split of `E(G)` into `E(H)` and `E(G')`.
#[derive(Clone, Debug)]
pub struct CasePlan {
    pub params: GpParams,
    pub tag: CaseTag,
    pub g: Graph,
    /// `H = G[X]`, vertices in configuration order; empty for `N_EQ_2T`.
    pub h: Graph,
    pub gprime: Graph,
}

impl CasePlan {
    /// The property of `G'` that makes it (1,3)-choosable for this tag.
    pub fn gprime_claim_holds(&self) -> bool {
        let sp = structural_predicates(&self.gprime);
        let connected = components(&self.gprime).len() == 1;
        match self.tag {
            CaseTag::T1 => sp.is_forest,
            CaseTag::T2 if self.params.n <= 6 => sp.is_forest,
            CaseTag::T2 | CaseTag::T3NEq2T1 => connected && !sp.is_bipartite && sp.degeneracy <= 2,
            CaseTag::T3NGe2T2 => sp.components_at_most_unicyclic,
            // Whole graph; the claim there is about mad(G).
            CaseTag::NEq2T => sp.degeneracy <= 3,
        }
    }

    /// `E(H)` and `E(G')` partition `E(G)`.
    pub fn partitions_edges(&self) -> bool {
        let eh: HashSet<&EdgeKey> = self.h.edges().iter().collect();
        let eg: HashSet<&EdgeKey> = self.gprime.edges().iter().collect();
        eh.is_disjoint(&eg)
            && eh.len() + eg.len() == self.g.edge_count()
            && self
                .g
                .edges()
                .iter()
                .all(|e| eh.contains(e) || eg.contains(e))
    }
}

fn h_vertices(tag: CaseTag, p: GpParams) -> Vec<VertexId> {
    let (n, t) = (p.n as i64, p.t as i64);
    match tag {
        CaseTag::NEq2T => Vec::new(),
        CaseTag::T1 => {
            let mut x: Vec<VertexId> = (1..=n).map(|i| p.u(i)).collect();
            x.extend([p.v(1), p.v(2)]);
            x
        }
        CaseTag::T2 => diamond_t2(p).to_vec(),
        CaseTag::T3NEq2T1 => diamond_t3(p).to_vec(),
        CaseTag::T3NGe2T2 => {
            let mut x: Vec<VertexId> = (1..=n).map(|i| p.u(i)).collect();
            x.extend([p.v(1), p.v(2), p.v(t + 1), p.v(t + 2)]);
            x
        }
    }
}

/// Two 5-cycles sharing `u2u3`.
fn diamond_t2(p: GpParams) -> [VertexId; 8] {
    [
        p.u(2),
        p.u(1),
        p.v(1),
        p.v(3),
        p.u(3),
        p.u(4),
        p.v(4),
        p.v(2),
    ]
}

/// Two 5-cycles sharing `v1v_{t+2}`.
fn diamond_t3(p: GpParams) -> [VertexId; 8] {
    let t = p.t as i64;
    [
        p.v(1),
        p.u(1),
        p.u(2),
        p.v(2),
        p.v(t + 2),
        p.u(t + 2),
        p.u(t + 1),
        p.v(t + 1),
    ]
}

pub fn choose_case(params: GpParams) -> Result<CasePlan> {
    let p = GpParams::new(params.n, params.t)?;
    let tags = CaseTag::matching(p);
    let [tag] = tags[..] else {
        return Err(Error::Internal(format!(
            "P({},{}) matches cases {tags:?}",
            p.n, p.t
        )));
    };
    let g = gen_petersen(p)?;
    let h = g.induced_subgraph(&h_vertices(tag, p))?;
    let rest: Vec<EdgeKey> = g
        .edges()
        .iter()
        .filter(|e| !h.contains_edge(e))
        .copied()
        .collect();
    let gprime = g.edge_subgraph(&rest)?;
    Ok(CasePlan {
        params: p,
        tag,
        g,
        h,
        gprime,
    })
}

/// The configuration carrying the polynomial data for `plan.h`.
pub fn case_config(plan: &CasePlan) -> Result<Option<Config>> {
    let p = plan.params;
    let cfg = match plan.tag {
        CaseTag::NEq2T => return Ok(None),
        CaseTag::T1 => build_config_unchecked(ConfigSpec::kind_i(p.n))?,
        CaseTag::T3NGe2T2 => build_config_unchecked(ConfigSpec::kind_iii(p.n, p.t))?,
        CaseTag::T2 | CaseTag::T3NEq2T1 => {
            let a = if plan.tag == CaseTag::T2 {
                diamond_t2(p)
            } else {
                diamond_t3(p)
            };
            match diamond(a, Some(&plan.g)) {
                Ok(cfg) => cfg,
                // P(5,2): the eight vertices induce a tenth edge.
                Err(Error::Param(_)) => induced_config(
                    ConfigSpec {
                        kind: Kind::II,
                        n: p.n,
                        t: p.t,
                    },
                    &plan.g,
                    &a,
                )?,
                Err(e) => return Err(e),
            }
        }
    };
    if cfg.h.edges().iter().collect::<HashSet<_>>() != plan.h.edges().iter().collect::<HashSet<_>>()
    {
        return Err(Error::Internal(format!(
            "configuration for {} does not match H",
            plan.tag
        )));
    }
    Ok(Some(cfg))
}

/// Statistics of one constructive Nullstellensatz run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnSummary {
    pub steps: usize,
    /// Candidates examined over all steps.
    pub tried: usize,
    pub all_residuals_nonzero: bool,
    /// Product of the substituted factors, `"p/q"`.
    pub product: String,
    pub product_nonzero: bool,
    pub modular: bool,
}

impl CnSummary {
    fn new(out: &CnOutcome) -> Self {
        CnSummary {
            steps: out.steps.len(),
            tried: out.steps.iter().map(|s| s.tried).sum(),
            all_residuals_nonzero: out.steps.iter().all(|s| s.residual_nonzero),
            product: format_rational(&out.product),
            product_nonzero: !out.product.is_zero(),
            modular: out.modular,
        }
    }
}

/// `psi` extended over `T(cfg.h)`: vertex weights of `H` from their singleton
/// lists, edge weights of `H` by the constructive Nullstellensatz on `Q_G(H)`.
/// Boundary edges are oriented away from `H`.
pub fn extend_over_h(
    g: &Graph,
    cfg: &Config,
    psi: &TotalWeighting,
    lists: &ListAssignment,
) -> Result<(TotalWeighting, CnOutcome)> {
    let h = &cfg.h;
    let mut ctx = cfg.ctx.clone();
    let mut orient = cfg.orientation.clone();
    for &u in h.vertices() {
        for e in g.incident_edges(u) {
            if !h.contains_edge(e) {
                orient.insert(u, e.other(u))?;
            }
        }
    }
    let factors = build_qgh(&mut ctx, g, h, &orient, psi)?;

    let mut phi = psi.restrict(|z| match z {
        Element::Vertex(v) => !h.contains_vertex(*v),
        Element::Edge(e) => !h.contains_edge(e),
    });
    let mut fixed: HashMap<Var, Rational> = HashMap::new();
    for &v in h.vertices() {
        let value = match lists.get(&Element::Vertex(v)) {
            Some([q]) => q.clone(),
            _ => {
                return Err(Error::Input(format!(
                    "list for {v} must hold exactly one value"
                )))
            }
        };
        if let Some(x) = ctx.get(&Element::Vertex(v)) {
            fixed.insert(x, value.clone());
        }
        phi.set(v, value);
    }
    let factors = substitute_all(&factors, &fixed);

    let mut edge_lists: HashMap<Var, Vec<Rational>> = HashMap::new();
    for e in h.edges() {
        let x = ctx
            .get(&Element::Edge(*e))
            .ok_or_else(|| Error::Internal(format!("no variable for {e}")))?;
        let list = lists
            .get(&Element::Edge(*e))
            .ok_or_else(|| Error::Input(format!("no list for {e}")))?;
        edge_lists.insert(x, list.to_vec());
    }
    let out =
        constructive_cn(&factors, &cfg.witness.monomial, &edge_lists).map_err(|e| match e {
            Error::Witness(m) => Error::Internal(format!("configuration witness failed: {m}")),
            other => other,
        })?;
    for (x, q) in &out.values {
        match ctx.element(*x) {
            Some(z @ Element::Edge(_)) => phi.set(z, q.clone()),
            _ => {
                return Err(Error::Internal(format!(
                    "CN fixed a non-edge variable {}",
                    ctx.label(*x)
                )))
            }
        }
    }
    Ok((phi, out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub n: u32,
    pub t: u32,
    pub case: CaseTag,
    pub witness: Option<WitnessReport>,
    /// The weighting of `G'` before extension.
    pub psi: WeightingFile,
    pub weighting: WeightingFile,
    pub verified: bool,
    pub cn: Option<CnSummary>,
    pub millis: u64,
}

/// The full pipeline. Any failure after case selection on valid lists is an
/// internal error.
pub fn solve(params: GpParams, lists: &ListAssignment) -> Result<SolveReport> {
    let start = Instant::now();
    let plan = choose_case(params)?;
    lists.check_sizes(&plan.g, 1, 3)?;
    let cfg = case_config(&plan)?;
    let defect = |e: Error| match e {
        Error::Unsatisfiable(m) => {
            Error::Internal(format!("{}: G' has no weighting: {m}", plan.tag))
        }
        other => other,
    };
    let psi = solve_gprime(&plan.gprime, lists).map_err(defect)?;
    let (phi, cn, witness) = match &cfg {
        None => (psi.clone(), None, None),
        Some(cfg) => {
            let (phi, out) = extend_over_h(&plan.g, cfg, &psi, lists)?;
            let summary = CnSummary::new(&out);
            if !summary.all_residuals_nonzero {
                return Err(Error::Internal(
                    "a committed value had a zero residual".into(),
                ));
            }
            if !summary.product_nonzero {
                return Err(Error::Internal(
                    "the substituted factor product vanished".into(),
                ));
            }
            (
                phi,
                Some(summary),
                Some(WitnessReport::new(&cfg.witness, &cfg.ctx.vars)),
            )
        }
    };
    let proper = verify_proper(&plan.g, &phi)?;
    if !proper.proper || !lists.admits(&plan.g, &phi) {
        return Err(Error::Internal(format!(
            "{} produced an invalid weighting (conflicts on {:?})",
            plan.tag,
            proper
                .violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        )));
    }
    Ok(SolveReport {
        n: plan.params.n,
        t: plan.params.t,
        case: plan.tag,
        witness,
        psi: WeightingFile::from(&psi),
        weighting: WeightingFile::from(&phi),
        verified: true,
        cn,
        millis: start.elapsed().as_millis() as u64,
    })
}
