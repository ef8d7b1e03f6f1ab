//! Simple undirected graphs over outer (`u_i`) and inner (`v_i`) vertices.
//!
//! Every graph in this crate, generated or read from a file, uses the same
//! vertex naming as the generalized Petersen family so that weightings and
//! list assignments can be exchanged between the generic pieces and the
//! solver pipeline without translation.

mod io;
mod petersen;
mod props;
mod weighting;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use io::{GraphFile, ListsFile, WeightingFile};
pub use petersen::{decompose, gen_petersen, petersen_edges, Decomposition, GpParams, InnerPart};
pub use props::{components, max_density_small, structural_predicates, StructuralPredicates};
pub use weighting::{verify_proper, ListAssignment, ProperReport, TotalWeighting};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Outer,
    Inner,
}

/// `u_i` (outer) or `v_i` (inner); indices start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub kind: VertexKind,
    pub index: u32,
}

impl VertexId {
    pub const fn outer(index: u32) -> Self {
        VertexId {
            kind: VertexKind::Outer,
            index,
        }
    }

    pub const fn inner(index: u32) -> Self {
        VertexId {
            kind: VertexKind::Inner,
            index,
        }
    }

    /// Reduces an arbitrary signed index modulo `n` into `[1, n]`.
    pub fn outer_mod(index: i64, n: u32) -> Self {
        Self::outer(wrap(index, n))
    }

    pub fn inner_mod(index: i64, n: u32) -> Self {
        Self::inner(wrap(index, n))
    }
}

pub(crate) fn wrap(index: i64, n: u32) -> u32 {
    let n = n as i64;
    ((index - 1).rem_euclid(n) + 1) as u32
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            VertexKind::Outer => 'u',
            VertexKind::Inner => 'v',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("malformed vertex id {s:?}"));
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('u') => VertexKind::Outer,
            Some('v') => VertexKind::Inner,
            _ => return Err(bad()),
        };
        let index: u32 = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(VertexId { kind, index })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    Outer,
    Leg,
    Inner,
}

/// Unordered vertex pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    a: VertexId,
    b: VertexId,
}

impl EdgeKey {
    pub fn new(x: VertexId, y: VertexId) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(EdgeKey { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(EdgeKey { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::Param(format!("loop at {x}"))),
        }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(&self, v: VertexId) -> VertexId {
        debug_assert!(self.contains(v));
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn role(&self) -> EdgeRole {
        match (self.a.kind, self.b.kind) {
            (VertexKind::Outer, VertexKind::Outer) => EdgeRole::Outer,
            (VertexKind::Inner, VertexKind::Inner) => EdgeRole::Inner,
            _ => EdgeRole::Leg,
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl FromStr for EdgeKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .split_once('-')
            .ok_or_else(|| Error::Input(format!("malformed edge id {s:?}")))?;
        EdgeKey::new(x.parse()?, y.parse()?)
    }
}

/// Serialized as the display string.
macro_rules! serialize_as_string {
    ($($t:ty),*) => {$(
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}

serialize_as_string!(VertexId, EdgeKey, Element);

/// A vertex or an edge: the domain of a total weighting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vertex(VertexId),
    Edge(EdgeKey),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(v) => v.fmt(f),
            Element::Edge(e) => e.fmt(f),
        }
    }
}

impl From<VertexId> for Element {
    fn from(v: VertexId) -> Self {
        Element::Vertex(v)
    }
}

impl From<EdgeKey> for Element {
    fn from(e: EdgeKey) -> Self {
        Element::Edge(e)
    }
}

/// Immutable simple graph. Vertex and edge order is insertion order and is
/// part of the value: it drives every deterministic enumeration downstream.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    vertices: Vec<VertexId>,
    vertex_pos: HashMap<VertexId, usize>,
    edges: Vec<EdgeKey>,
    edge_pos: HashMap<EdgeKey, usize>,
    incident: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<EdgeKey>) -> Result<Self> {
        let mut vertex_pos = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_pos.insert(*v, i).is_some() {
                return Err(Error::Param(format!("duplicate vertex {v}")));
            }
        }
        let mut edge_pos = HashMap::with_capacity(edges.len());
        let mut incident = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            let (a, b) = e.endpoints();
            let (Some(&pa), Some(&pb)) = (vertex_pos.get(&a), vertex_pos.get(&b)) else {
                return Err(Error::Param(format!(
                    "edge {e} has an endpoint outside the vertex set"
                )));
            };
            if edge_pos.insert(*e, i).is_some() {
                return Err(Error::Param(format!("parallel edge {e}")));
            }
            incident[pa].push(i);
            incident[pb].push(i);
        }
        Ok(Graph {
            vertices,
            vertex_pos,
            edges,
            edge_pos,
            incident,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertex_pos.contains_key(&v)
    }

    pub fn contains_edge(&self, e: &EdgeKey) -> bool {
        self.edge_pos.contains_key(e)
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertex_pos.get(&v).copied()
    }

    pub fn edge_index(&self, e: &EdgeKey) -> Option<usize> {
        self.edge_pos.get(e).copied()
    }

    /// Edges incident to `v`, in edge order. Empty for unknown vertices.
    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = &EdgeKey> + '_ {
        let ids: &[usize] = match self.vertex_pos.get(&v) {
            Some(&p) => &self.incident[p],
            None => &[],
        };
        ids.iter().map(move |&i| &self.edges[i])
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident_edges(v).map(move |e| e.other(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertex_pos
            .get(&v)
            .map_or(0, |&p| self.incident[p].len())
    }

    /// All elements of `T(G) = V(G) ∪ E(G)`, vertices first.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.vertices
            .iter()
            .map(|&v| Element::Vertex(v))
            .chain(self.edges.iter().map(|&e| Element::Edge(e)))
    }

    /// `G[X]`: the vertices of `x` (in `x` order) and every edge of `self`
    /// with both endpoints in `x`.
    pub fn induced_subgraph(&self, x: &[VertexId]) -> Result<Graph> {
        for v in x {
            if !self.contains_vertex(*v) {
                return Err(Error::Param(format!("unknown vertex {v}")));
            }
        }
        let keep: std::collections::HashSet<_> = x.iter().copied().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| {
                let (a, b) = e.endpoints();
                keep.contains(&a) && keep.contains(&b)
            })
            .copied()
            .collect();
        Graph::new(x.to_vec(), edges)
    }

    /// The subgraph formed by `edges` and their endpoints (vertices in the
    /// order of `self`).
    pub fn edge_subgraph(&self, edges: &[EdgeKey]) -> Result<Graph> {
        let mut used = vec![false; self.vertices.len()];
        for e in edges {
            if !self.contains_edge(e) {
                return Err(Error::Param(format!("unknown edge {e}")));
            }
            let (a, b) = e.endpoints();
            used[self.vertex_pos[&a]] = true;
            used[self.vertex_pos[&b]] = true;
        }
        let vertices = self
            .vertices
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(&v, _)| v)
            .collect();
        let mut sorted = edges.to_vec();
        sorted.sort_by_key(|e| self.edge_pos[e]);
        Graph::new(vertices, sorted)
    }
}

/// A direction for every edge of some edge set; arcs are `(tail, head)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    arcs: BTreeMap<EdgeKey, (VertexId, VertexId)>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_arcs<I: IntoIterator<Item = (VertexId, VertexId)>>(arcs: I) -> Result<Self> {
        let mut o = Orientation::new();
        for (tail, head) in arcs {
            o.insert(tail, head)?;
        }
        Ok(o)
    }

    /// Orients `tail -> head`. Re-orienting an edge is an error.
    pub fn insert(&mut self, tail: VertexId, head: VertexId) -> Result<()> {
        let key = EdgeKey::new(tail, head)?;
        if self.arcs.insert(key, (tail, head)).is_some() {
            return Err(Error::Param(format!("edge {key} oriented twice")));
        }
        Ok(())
    }

    pub fn arc(&self, e: &EdgeKey) -> Option<(VertexId, VertexId)> {
        self.arcs.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.arcs.values().copied()
    }

    /// Orients each edge of `g` from its smaller to its larger endpoint.
    pub fn canonical(g: &Graph) -> Self {
        let arcs = g.edges().iter().map(|e| (*e, e.endpoints())).collect();
        Orientation { arcs }
    }

    /// Fails unless every edge of `g` has a direction (extra arcs are fine).
    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        match g.edges().iter().find(|e| !self.arcs.contains_key(e)) {
            Some(e) => Err(Error::Input(format!("edge {e} has no orientation"))),
            None => Ok(()),
        }
    }

    /// `N⁺(u)` restricted to edges of `g`, in `g`'s incidence order.
    pub fn out_neighbors(&self, g: &Graph, u: VertexId) -> Vec<VertexId> {
        g.incident_edges(u)
            .filter_map(|e| match self.arcs.get(e) {
                Some(&(tail, head)) if tail == u => Some(head),
                _ => None,
            })
            .collect()
    }

    /// Image under a vertex relabeling.
    pub fn relabel(&self, map: impl Fn(VertexId) -> VertexId) -> Result<Self> {
        Orientation::from_arcs(self.arcs().map(|(a, b)| (map(a), map(b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        let (a, b, c) = (VertexId::outer(1), VertexId::outer(2), VertexId::outer(3));
        Graph::new(
            vec![a, b, c],
            vec![EdgeKey::new(a, b).unwrap(), EdgeKey::new(b, c).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn ids_round_trip_through_text() {
        let v: VertexId = "v17".parse().unwrap();
        assert_eq!(v, VertexId::inner(17));
        let e: EdgeKey = "v2-u1".parse().unwrap();
        assert_eq!(e.to_string(), "u1-v2");
        assert_eq!(e.role(), EdgeRole::Leg);
        assert!("w3".parse::<VertexId>().is_err());
        assert!("u0".parse::<VertexId>().is_err());
        assert!("u1-u1".parse::<EdgeKey>().is_err());
    }

    #[test]
    fn index_wraps_modulo_n() {
        assert_eq!(VertexId::outer_mod(0, 5), VertexId::outer(5));
        assert_eq!(VertexId::outer_mod(6, 5), VertexId::outer(1));
        assert_eq!(VertexId::inner_mod(-3, 5), VertexId::inner(2));
    }

    #[test]
    fn rejects_parallel_edges_and_dangling_endpoints() {
        let (a, b) = (VertexId::outer(1), VertexId::outer(2));
        let e = EdgeKey::new(a, b).unwrap();
        assert!(Graph::new(vec![a, b], vec![e, EdgeKey::new(b, a).unwrap()]).is_err());
        assert!(Graph::new(vec![a], vec![e]).is_err());
        assert!(Graph::new(vec![a, a], vec![]).is_err());
    }

    #[test]
    fn induced_subgraph_keeps_identities() {
        let g = path3();
        let h = g
            .induced_subgraph(&[VertexId::outer(3), VertexId::outer(2)])
            .unwrap();
        assert_eq!(h.vertices(), &[VertexId::outer(3), VertexId::outer(2)]);
        assert_eq!(h.edge_count(), 1);
        assert!(g.induced_subgraph(&[]).unwrap().vertices().is_empty());
        assert!(g.induced_subgraph(&[VertexId::inner(1)]).is_err());
    }

    #[test]
    fn out_neighbors_follow_orientation() {
        let g = path3();
        let o = Orientation::from_arcs([
            (VertexId::outer(2), VertexId::outer(1)),
            (VertexId::outer(2), VertexId::outer(3)),
        ])
        .unwrap();
        assert_eq!(
            o.out_neighbors(&g, VertexId::outer(2)),
            vec![VertexId::outer(1), VertexId::outer(3)]
        );
        assert!(o.out_neighbors(&g, VertexId::outer(1)).is_empty());
        assert!(Orientation::new().check_covers(&g).is_err());
        assert!(o.check_covers(&g).is_ok());
    }
}
