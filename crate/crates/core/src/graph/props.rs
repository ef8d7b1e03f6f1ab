use std::collections::VecDeque;

use num_bigint::BigInt;

use super::{Graph, VertexId};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralPredicates {
    pub is_forest: bool,
    pub is_bipartite: bool,
    /// Every connected component has at most as many edges as vertices.
    pub components_at_most_unicyclic: bool,
    pub degeneracy: usize,
}

/// Connected components as vertex lists, in first-vertex order.
pub fn components(g: &Graph) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for (i, &start) in g.vertices().iter().enumerate() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                let j = g.vertex_index(w).unwrap();
                if !seen[j] {
                    seen[j] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

fn is_bipartite(g: &Graph) -> bool {
    let mut side: Vec<Option<bool>> = vec![None; g.vertex_count()];
    for (i, &start) in g.vertices().iter().enumerate() {
        if side[i].is_some() {
            continue;
        }
        side[i] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let sv = side[g.vertex_index(v).unwrap()].unwrap();
            for w in g.neighbors(v) {
                let j = g.vertex_index(w).unwrap();
                match side[j] {
                    None => {
                        side[j] = Some(!sv);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == sv => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Largest minimum degree seen while repeatedly deleting a minimum-degree vertex.
fn degeneracy(g: &Graph) -> usize {
    let mut deg: Vec<usize> = g.vertices().iter().map(|&v| g.degree(v)).collect();
    let mut removed = vec![false; deg.len()];
    let mut best = 0;
    for _ in 0..deg.len() {
        let (i, d) = deg
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed[*i])
            .min_by_key(|(_, d)| **d)
            .map(|(i, d)| (i, *d))
            .unwrap();
        best = best.max(d);
        removed[i] = true;
        for w in g.neighbors(g.vertices()[i]) {
            let j = g.vertex_index(w).unwrap();
            if !removed[j] {
                deg[j] -= 1;
            }
        }
    }
    best
}

pub fn structural_predicates(g: &Graph) -> StructuralPredicates {
    let comps = components(g);
    let mut unicyclic = true;
    let mut forest = true;
    for comp in &comps {
        // Each edge is counted from both endpoints.
        let edges: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
        forest &= edges + 1 == comp.len();
        unicyclic &= edges <= comp.len();
    }
    StructuralPredicates {
        is_forest: forest,
        is_bipartite: is_bipartite(g),
        components_at_most_unicyclic: unicyclic,
        degeneracy: degeneracy(g),
    }
}

/// Largest vertex count accepted by [`max_density_small`].
pub const MAX_DENSITY_VERTICES: usize = 16;

/// `mad(g)`: the maximum of `2|E(H)|/|V(H)|` over subgraphs, by enumerating
/// every vertex subset (induced subgraphs maximise edges for a fixed vertex
/// set). Zero for the empty graph.
pub fn max_density_small(g: &Graph) -> Result<Rational> {
    let nv = g.vertex_count();
    if nv > MAX_DENSITY_VERTICES {
        return Err(Error::Size(format!(
            "max_density_small handles at most {MAX_DENSITY_VERTICES} vertices, got {nv}"
        )));
    }
    let masks: Vec<u32> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            (1 << g.vertex_index(a).unwrap()) | (1 << g.vertex_index(b).unwrap())
        })
        .collect();
    // Best (edges, vertices) pair, compared by cross-multiplication.
    let mut best = (0usize, 1usize);
    for subset in 1u32..(1u32 << nv) {
        let e = masks.iter().filter(|&&m| m & subset == m).count();
        let v = subset.count_ones() as usize;
        if e * best.1 > best.0 * v {
            best = (e, v);
        }
    }
    Ok(Rational::new(
        BigInt::from(2 * best.0),
        BigInt::from(best.1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_petersen, EdgeKey, GpParams};
    use crate::rational::{int, ratio};

    fn graph(edges: &[(u32, u32)]) -> Graph {
        let mut vs: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort();
        vs.dedup();
        Graph::new(
            vs.iter().map(|&i| VertexId::outer(i)).collect(),
            edges
                .iter()
                .map(|&(a, b)| EdgeKey::new(VertexId::outer(a), VertexId::outer(b)).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn mad_of_small_graphs() {
        assert_eq!(max_density_small(&graph(&[(1, 2)])).unwrap(), int(1));
        assert_eq!(
            max_density_small(&graph(&[(1, 2), (2, 3), (3, 1)])).unwrap(),
            int(2)
        );
        // Triangle with a pendant path: the triangle is the densest part.
        assert_eq!(
            max_density_small(&graph(&[(1, 2), (2, 3), (3, 1), (3, 4), (4, 5)])).unwrap(),
            int(2)
        );
        let p42 = gen_petersen(GpParams::new(4, 2).unwrap()).unwrap();
        assert_eq!(max_density_small(&p42).unwrap(), ratio(5, 2));
        let petersen = gen_petersen(GpParams::new(5, 2).unwrap()).unwrap();
        assert_eq!(max_density_small(&petersen).unwrap(), int(3));
        let big = gen_petersen(GpParams::new(9, 2).unwrap()).unwrap();
        assert!(matches!(max_density_small(&big), Err(Error::Size(_))));
    }

    #[test]
    fn predicates_on_basic_shapes() {
        let tree = structural_predicates(&graph(&[(1, 2), (2, 3), (2, 4)]));
        assert!(tree.is_forest && tree.is_bipartite && tree.components_at_most_unicyclic);
        assert_eq!(tree.degeneracy, 1);

        let c5 = structural_predicates(&graph(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]));
        assert!(!c5.is_forest && !c5.is_bipartite && c5.components_at_most_unicyclic);
        assert_eq!(c5.degeneracy, 2);

        let k4 = structural_predicates(&graph(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]));
        assert!(!k4.components_at_most_unicyclic);
        assert_eq!(k4.degeneracy, 3);

        let prism = structural_predicates(&gen_petersen(GpParams::new(6, 1).unwrap()).unwrap());
        assert!(prism.is_bipartite);
        assert_eq!(prism.degeneracy, 3);
    }

    #[test]
    fn components_split_disjoint_pieces() {
        let g = graph(&[(1, 2), (3, 4), (4, 5)]);
        let c = components(&g);
        assert_eq!(c.len(), 2);
        assert_eq!(c[1].len(), 3);
    }
}
