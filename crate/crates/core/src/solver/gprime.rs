use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Element, Graph, ListAssignment, TotalWeighting, VertexId};
use crate::rational::Rational;

/// Edges in depth-first discovery order, component by component.
fn dfs_edge_order(g: &Graph) -> Vec<EdgeKey> {
    let mut seen_v: HashSet<VertexId> = HashSet::new();
    let mut seen_e: HashSet<EdgeKey> = HashSet::new();
    let mut out = Vec::with_capacity(g.edge_count());
    for &root in g.vertices() {
        if !seen_v.insert(root) {
            continue;
        }
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for e in g.incident_edges(v) {
                if seen_e.insert(*e) {
                    out.push(*e);
                }
            }
            // Reverse so the first neighbour is explored first.
            let next: Vec<VertexId> = g.neighbors(v).filter(|w| !seen_v.contains(w)).collect();
            for w in next.into_iter().rev() {
                if seen_v.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    out
}

struct Search<'a> {
    ends: Vec<(usize, usize)>,
    lists: Vec<&'a [Rational]>,
    adj: Vec<Vec<usize>>,
    /// Edge positions incident to each vertex.
    inc: Vec<Vec<usize>>,
    sums: Vec<Rational>,
    /// Unassigned incident edges per vertex; a vertex is complete at zero.
    open: Vec<usize>,
    assigned: Vec<bool>,
    pick: Vec<usize>,
}

impl<'a> Search<'a> {
    fn clashes(&self, x: usize) -> bool {
        self.open[x] == 0
            && self.adj[x]
                .iter()
                .any(|&y| self.open[y] == 0 && self.sums[y] == self.sums[x])
    }

    /// `x` has one open edge and every value on it collides with a complete
    /// neighbour of `x`.
    fn doomed(&self, x: usize) -> bool {
        if self.open[x] != 1 {
            return false;
        }
        let e = *self.inc[x].iter().find(|&&e| !self.assigned[e]).unwrap();
        self.lists[e].iter().all(|c| {
            let s = &self.sums[x] + c;
            self.adj[x]
                .iter()
                .any(|&y| self.open[y] == 0 && self.sums[y] == s)
        })
    }

    fn consistent(&self, a: usize, b: usize) -> bool {
        if self.clashes(a) || self.clashes(b) || self.doomed(a) || self.doomed(b) {
            return false;
        }
        [a, b]
            .iter()
            .filter(|&&x| self.open[x] == 0)
            .all(|&x| self.adj[x].iter().all(|&y| !self.doomed(y)))
    }

    /// Values of edge `k` consistent with the current partial weighting.
    fn options(&mut self, k: usize) -> Vec<usize> {
        let (a, b) = self.ends[k];
        let list = self.lists[k];
        self.assigned[k] = true;
        self.open[a] -= 1;
        self.open[b] -= 1;
        let mut ok = Vec::with_capacity(list.len());
        for (i, val) in list.iter().enumerate() {
            self.sums[a] += val;
            self.sums[b] += val;
            if self.consistent(a, b) {
                ok.push(i);
            }
            self.sums[a] -= val;
            self.sums[b] -= val;
        }
        self.assigned[k] = false;
        self.open[a] += 1;
        self.open[b] += 1;
        ok
    }

    /// Fail-first: the open edge with the fewest consistent values, then the
    /// one closest to completing an endpoint, then the earliest.
    fn run(&mut self, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        let mut best: Option<(usize, usize, usize, Vec<usize>)> = None;
        for k in 0..self.ends.len() {
            if self.assigned[k] {
                continue;
            }
            let (a, b) = self.ends[k];
            let opts = self.options(k);
            let rank = (opts.len(), self.open[a].min(self.open[b]));
            if best.as_ref().is_none_or(|(n, o, _, _)| rank < (*n, *o)) {
                let done = opts.is_empty();
                best = Some((rank.0, rank.1, k, opts));
                if done {
                    return false;
                }
            }
        }
        let (_, _, k, opts) = best.unwrap();
        let (a, b) = self.ends[k];
        self.assigned[k] = true;
        self.open[a] -= 1;
        self.open[b] -= 1;
        for i in opts {
            let val = &self.lists[k][i];
            self.sums[a] += val;
            self.sums[b] += val;
            self.pick[k] = i;
            if self.run(left - 1) {
                return true;
            }
            let val = &self.lists[k][i];
            self.sums[a] -= val;
            self.sums[b] -= val;
        }
        self.assigned[k] = false;
        self.open[a] += 1;
        self.open[b] += 1;
        false
    }
}

/// A weighting of `gp` from `lists` with `S(a) != S(b)` on every edge of
/// `gp` (sums taken in `gp`). Vertex lists must be singletons.
///
/// Backtracking over edge values in list order. The next edge is the one
/// with the fewest values that neither complete a vertex whose sum equals a
/// complete neighbour's, nor leave a vertex whose last open edge has no such
/// value; ties go to depth-first order.
pub fn solve_gprime(gp: &Graph, lists: &ListAssignment) -> Result<TotalWeighting> {
    let mut w = TotalWeighting::new();
    let mut sums = Vec::with_capacity(gp.vertex_count());
    for &v in gp.vertices() {
        let list = lists
            .get(&Element::Vertex(v))
            .ok_or_else(|| Error::Input(format!("no list for {v}")))?;
        let [value] = list else {
            return Err(Error::Input(format!(
                "list for {v} must hold exactly one value"
            )));
        };
        w.set(v, value.clone());
        sums.push(value.clone());
    }
    let order = dfs_edge_order(gp);
    let mut ends = Vec::with_capacity(order.len());
    let mut edge_lists = Vec::with_capacity(order.len());
    for e in &order {
        let list = lists
            .get(&Element::Edge(*e))
            .filter(|l| !l.is_empty())
            .ok_or_else(|| Error::Input(format!("no list for {e}")))?;
        let (a, b) = e.endpoints();
        ends.push((gp.vertex_index(a).unwrap(), gp.vertex_index(b).unwrap()));
        edge_lists.push(list);
    }
    let adj = gp
        .vertices()
        .iter()
        .map(|&v| {
            gp.neighbors(v)
                .map(|u| gp.vertex_index(u).unwrap())
                .collect()
        })
        .collect();
    let open = gp.vertices().iter().map(|&v| gp.degree(v)).collect();
    let mut inc = vec![Vec::new(); gp.vertex_count()];
    for (k, &(a, b)) in ends.iter().enumerate() {
        inc[a].push(k);
        inc[b].push(k);
    }
    let mut search = Search {
        ends,
        lists: edge_lists,
        adj,
        inc,
        sums,
        open,
        assigned: vec![false; order.len()],
        pick: vec![0; order.len()],
    };
    // Isolated vertices are complete from the start and constrain nothing.
    if !search.run(order.len()) {
        return Err(Error::Unsatisfiable(format!(
            "no proper weighting of the {}-edge subgraph",
            gp.edge_count()
        )));
    }
    for (k, e) in order.iter().enumerate() {
        w.set(*e, search.lists[k][search.pick[k]].clone());
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{verify_proper, GpParams};
    use crate::rational::int;

    #[test]
    fn isolated_edge_with_equal_vertices_is_unsatisfiable() {
        let (a, b) = (VertexId::outer(1), VertexId::outer(2));
        let g = Graph::new(vec![a, b], vec![EdgeKey::new(a, b).unwrap()]).unwrap();
        let lists = ListAssignment::uniform(&g, &[int(0)], &[int(1), int(2), int(3)]);
        assert!(matches!(
            solve_gprime(&g, &lists),
            Err(Error::Unsatisfiable(_))
        ));
    }

    #[test]
    fn path_gets_a_proper_weighting() {
        let p = GpParams::new(5, 1).unwrap();
        let (a, b, c) = (p.u(1), p.u(2), p.u(3));
        let g = Graph::new(
            vec![a, b, c],
            vec![EdgeKey::new(a, b).unwrap(), EdgeKey::new(b, c).unwrap()],
        )
        .unwrap();
        let lists = ListAssignment::uniform(&g, &[int(0)], &[int(1), int(2), int(3)]);
        let w = solve_gprime(&g, &lists).unwrap();
        assert!(verify_proper(&g, &w).unwrap().proper);
        assert!(lists.admits(&g, &w));
    }

    #[test]
    fn non_singleton_vertex_list_is_rejected() {
        let (a, b) = (VertexId::outer(1), VertexId::outer(2));
        let g = Graph::new(vec![a, b], vec![EdgeKey::new(a, b).unwrap()]).unwrap();
        let lists = ListAssignment::uniform(&g, &[int(0), int(1)], &[int(1)]);
        assert!(matches!(solve_gprime(&g, &lists), Err(Error::Input(_))));
    }
}
