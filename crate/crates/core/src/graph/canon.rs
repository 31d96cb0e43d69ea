use std::collections::BTreeSet;

use serde::Serialize;

use super::sets::{EdgeSet, VertexSet};
use super::{Graph, GraphError};

/// Default vertex cap for canonical labelling by exhaustive relabelling.
pub const DEFAULT_CANON_CAP: usize = 8;

/// Largest vertex count for listing all classes of graphs on `K_n`.
pub const CLASS_LIST_CAP: usize = 6;

/// Isomorphism-invariant encoding of a graph.
///
/// `code` is the least edge mask over all relabellings; for bipartite graphs
/// the relabellings keep `X` on `0..|X|` and `Y` on the following slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub classes: Option<(usize, usize)>,
    pub code: u64,
}

impl CanonicalForm {
    /// The representative graph whose edge mask is `code`.
    pub fn graph(&self) -> Graph {
        let edges = EdgeSet(self.code);
        match self.classes {
            Some((a, b)) => Graph::bipartite(VertexSet::range(a), VertexSet::from_range(a, a + b), edges.iter()),
            None => Graph::from_edge_set(self.vertex_count, edges),
        }
        .expect("canonical code encodes a valid graph")
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All relabellings `perm[old] = new` sending `x` onto `0..|x|` and `y` onto
/// the next `|y|` slots; a plain graph is the case `x = V`, `y = ∅`.
fn class_permutations(x: &[usize], y: &[usize]) -> Vec<Vec<usize>> {
    let n = x.len() + y.len();
    let mut out = Vec::new();
    let mut px: Vec<usize> = (0..x.len()).collect();
    loop {
        let mut py: Vec<usize> = (x.len()..n).collect();
        loop {
            let mut perm = vec![0; n];
            for (i, &v) in x.iter().enumerate() {
                perm[v] = px[i];
            }
            for (i, &v) in y.iter().enumerate() {
                perm[v] = py[i];
            }
            out.push(perm);
            if !next_permutation(&mut py) {
                break;
            }
        }
        if !next_permutation(&mut px) {
            break;
        }
    }
    out
}

fn min_code(edges: EdgeSet, perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| edges.relabel(p).0).min().unwrap_or(edges.0)
}

fn class_lists(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    match g.bipartition() {
        Some((x, y)) => (x.iter().collect(), y.iter().collect()),
        None => ((0..g.vertex_count()).collect(), Vec::new()),
    }
}

/// Canonical encoding of `g`, refusing graphs with more than `cap` vertices.
pub fn canonical_form(g: &Graph, cap: usize) -> Result<CanonicalForm, GraphError> {
    if g.vertex_count() > cap {
        return Err(GraphError::CapExceeded { what: "vertex count", actual: g.vertex_count(), cap });
    }
    let (x, y) = class_lists(g);
    let perms = class_permutations(&x, &y);
    Ok(CanonicalForm {
        vertex_count: g.vertex_count(),
        classes: g.bipartition().map(|(x, y)| (x.len(), y.len())),
        code: min_code(g.edges(), &perms),
    })
}

fn classes_of(host: EdgeSet, perms: &[Vec<usize>]) -> Vec<u64> {
    let mut seen = BTreeSet::new();
    for sub in super::submasks(host.0) {
        seen.insert(min_code(EdgeSet(sub), perms));
    }
    seen.into_iter().collect()
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// ordered by canonical code.
pub fn graphs_up_to_isomorphism(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > CLASS_LIST_CAP {
        return Err(GraphError::CapExceeded { what: "vertex count", actual: n, cap: CLASS_LIST_CAP });
    }
    let perms = class_permutations(&(0..n).collect::<Vec<_>>(), &[]);
    classes_of(EdgeSet::complete(VertexSet::range(n)), &perms)
        .into_iter()
        .map(|c| Graph::from_edge_set(n, EdgeSet(c)))
        .collect()
}

/// One representative per class of subgraphs of `K_{a,b}` under relabellings
/// within each side.
pub fn bipartite_graphs_up_to_isomorphism(a: usize, b: usize) -> Result<Vec<Graph>, GraphError> {
    if a + b > DEFAULT_CANON_CAP {
        return Err(GraphError::CapExceeded { what: "vertex count", actual: a + b, cap: DEFAULT_CANON_CAP });
    }
    let (x, y) = (VertexSet::range(a), VertexSet::from_range(a, a + b));
    let perms = class_permutations(&x.iter().collect::<Vec<_>>(), &y.iter().collect::<Vec<_>>());
    classes_of(EdgeSet::complete_bipartite(x, y), &perms)
        .into_iter()
        .map(|c| Graph::bipartite(x, y, EdgeSet(c).iter()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_paths_agree() {
        let a = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let b = Graph::new(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(canonical_form(&a, 8).unwrap(), canonical_form(&b, 8).unwrap());
    }

    #[test]
    fn complete_graph_is_fixed() {
        let k4 = Graph::complete(4).unwrap();
        let c = canonical_form(&k4, 8).unwrap();
        assert_eq!(c.code, k4.edges().0);
        assert_eq!(c.graph(), k4);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::empty(9).unwrap();
        assert!(matches!(canonical_form(&g, 8), Err(GraphError::CapExceeded { .. })));
    }

    fn isomorphic_by_search(a: EdgeSet, b: EdgeSet, n: usize) -> bool {
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            if a.relabel(&p) == b {
                return true;
            }
            if !next_permutation(&mut p) {
                return false;
            }
        }
    }

    #[test]
    fn four_vertex_classes() {
        let reps = graphs_up_to_isomorphism(4).unwrap();
        assert_eq!(reps.len(), 11);
        // Independent partition of all 64 labelled graphs by explicit isomorphism search.
        let mut classes: Vec<EdgeSet> = Vec::new();
        for g in 0u64..64 {
            let e = EdgeSet(g);
            if !classes.iter().any(|&c| isomorphic_by_search(c, e, 4)) {
                classes.push(e);
            }
        }
        assert_eq!(classes.len(), 11);
        for g in 0u64..64 {
            let c = canonical_form(&Graph::from_edge_set(4, EdgeSet(g)).unwrap(), 8).unwrap();
            assert!(isomorphic_by_search(EdgeSet(c.code), EdgeSet(g), 4));
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(graphs_up_to_isomorphism(5).unwrap().len(), 34);
        assert_eq!(bipartite_graphs_up_to_isomorphism(2, 2).unwrap().len(), 7);
    }
}
