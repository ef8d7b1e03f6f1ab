//! JSON file formats for graphs, weightings and list assignments.
//!
//! Vertices are written `"u3"` / `"v7"`, edges `"u1-u2"`, and every value is
//! an exact `"p/q"` string.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    gen_petersen, EdgeKey, Element, GpParams, Graph, ListAssignment, TotalWeighting, VertexId,
};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

/// Either `{"n":..,"t":..}` or `{"vertices":[..],"edges":[[a,b],..]}`.
/// Explicit vertex/edge lists win when both are present.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[String; 2]>>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph, params: Option<GpParams>) -> Self {
        GraphFile {
            n: params.map(|p| p.n),
            t: params.map(|p| p.t),
            vertices: Some(g.vertices().iter().map(ToString::to_string).collect()),
            edges: Some(
                g.edges()
                    .iter()
                    .map(|e| {
                        let (a, b) = e.endpoints();
                        [a.to_string(), b.to_string()]
                    })
                    .collect(),
            ),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        match (&self.vertices, &self.edges, self.n, self.t) {
            (Some(vs), Some(es), _, _) => {
                let vertices = vs
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<VertexId>>>()?;
                let edges = es
                    .iter()
                    .map(|[a, b]| EdgeKey::new(a.parse()?, b.parse()?))
                    .collect::<Result<Vec<_>>>()?;
                Graph::new(vertices, edges).map_err(|e| Error::Input(e.to_string()))
            }
            (None, None, Some(n), Some(t)) => gen_petersen(GpParams::new(n, t)?),
            _ => Err(Error::Input(
                "graph file needs either \"n\" and \"t\" or \"vertices\" and \"edges\"".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightingFile {
    pub vertices: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
}

impl From<&TotalWeighting> for WeightingFile {
    fn from(w: &TotalWeighting) -> Self {
        let mut f = WeightingFile::default();
        for (z, q) in w.iter() {
            let slot = match z {
                Element::Vertex(_) => &mut f.vertices,
                Element::Edge(_) => &mut f.edges,
            };
            slot.insert(z.to_string(), format_rational(q));
        }
        f
    }
}

impl TryFrom<&WeightingFile> for TotalWeighting {
    type Error = Error;

    fn try_from(f: &WeightingFile) -> Result<Self> {
        let mut w = TotalWeighting::new();
        for (k, q) in &f.vertices {
            w.set(k.parse::<VertexId>()?, parse_rational(q)?);
        }
        for (k, q) in &f.edges {
            w.set(k.parse::<EdgeKey>()?, parse_rational(q)?);
        }
        Ok(w)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListsFile {
    pub vertices: BTreeMap<String, Vec<String>>,
    pub edges: BTreeMap<String, Vec<String>>,
}

impl From<&ListAssignment> for ListsFile {
    fn from(l: &ListAssignment) -> Self {
        let mut f = ListsFile::default();
        for (z, list) in l.iter() {
            let slot = match z {
                Element::Vertex(_) => &mut f.vertices,
                Element::Edge(_) => &mut f.edges,
            };
            slot.insert(z.to_string(), list.iter().map(format_rational).collect());
        }
        f
    }
}

impl TryFrom<&ListsFile> for ListAssignment {
    type Error = Error;

    fn try_from(f: &ListsFile) -> Result<Self> {
        let parse = |vals: &Vec<String>| {
            vals.iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()
        };
        let mut l = ListAssignment::new();
        for (k, vals) in &f.vertices {
            l.set(k.parse::<VertexId>()?, parse(vals)?)?;
        }
        for (k, vals) in &f.edges {
            l.set(k.parse::<EdgeKey>()?, parse(vals)?)?;
        }
        Ok(l)
    }
}
