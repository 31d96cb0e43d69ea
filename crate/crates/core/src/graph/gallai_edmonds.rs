use serde::Serialize;

use super::matching::{has_perfect_matching_on, is_factor_critical_on, matching_number_on};
use super::sets::{EdgeSet, VertexSet};

/// The decomposition `(D_1, .., D_r; A; C)` of a graph on a vertex support.
///
/// `D` holds the vertices missed by some maximum matching, `A = N(D)` and `C`
/// is the rest. Components of `G[D]` are ordered by their least vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GallaiEdmonds {
    pub components: Vec<VertexSet>,
    pub a_set: VertexSet,
    pub c_set: VertexSet,
}

impl GallaiEdmonds {
    pub fn d_set(&self) -> VertexSet {
        self.components
            .iter()
            .fold(VertexSet::EMPTY, |s, &c| s.union(c))
    }

    /// Number of components of `G[D]`.
    pub fn r(&self) -> usize {
        self.components.len()
    }

    /// Index of the component containing `v`.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.components.iter().position(|c| c.contains(v))
    }
}

/// Connected components of `G[vs]`, ordered by least vertex.
pub fn connected_components(edges: EdgeSet, vs: VertexSet) -> Vec<VertexSet> {
    let adj = edges.induced(vs).adjacency();
    let mut left = vs;
    let mut out = Vec::new();
    while let Some(start) = left.min() {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = 0u32;
            for v in frontier.iter() {
                next |= adj[v];
            }
            let next = VertexSet(next).intersection(vs).difference(comp);
            comp = comp.union(next);
            frontier = next;
        }
        left = left.difference(comp);
        out.push(comp);
    }
    out
}

/// Computes the decomposition of `G[support]` from the definition of `D`.
pub fn gallai_edmonds_on(edges: EdgeSet, support: VertexSet) -> GallaiEdmonds {
    let edges = edges.induced(support);
    let nu = matching_number_on(edges, support);
    let d: VertexSet = support
        .iter()
        .filter(|&v| matching_number_on(edges, support.without(v)) == nu)
        .collect();
    let a = edges.neighborhood(d).intersection(support);
    let c = support.difference(d).difference(a);
    GallaiEdmonds {
        components: connected_components(edges, d),
        a_set: a,
        c_set: c,
    }
}

/// Whether every vertex of `a` can be matched into a distinct component
/// among `comps` other than `skip`.
pub fn a_matches_into_distinct_components(
    edges: EdgeSet,
    a: VertexSet,
    comps: &[VertexSet],
    skip: Option<usize>,
) -> bool {
    fn rec(rows: &[u32], i: usize, used: u32) -> bool {
        if i == rows.len() {
            return true;
        }
        let mut opts = rows[i] & !used;
        while opts != 0 {
            let j = opts.trailing_zeros();
            if rec(rows, i + 1, used | 1 << j) {
                return true;
            }
            opts &= opts - 1;
        }
        false
    }
    let rows: Vec<u32> = a
        .iter()
        .map(|x| {
            let nb = edges.neighbors(x);
            comps
                .iter()
                .enumerate()
                .filter(|&(j, c)| Some(j) != skip && !nb.is_disjoint(*c))
                .fold(0u32, |m, (j, _)| m | 1 << j)
        })
        .collect();
    rec(&rows, 0, 0)
}

/// Checks the structural properties of a decomposition: the partition,
/// `A = N(D)`, factor-critical components, a perfect matching on `C`, the
/// distinct-component matchings of `A`, and `r = |A| + |V| - 2ν`.
pub fn check_structure(edges: EdgeSet, support: VertexSet, ge: &GallaiEdmonds) -> Result<(), String> {
    let edges = edges.induced(support);
    let d = ge.d_set();
    let mut seen = VertexSet::EMPTY;
    for &c in ge.components.iter().chain([ge.a_set, ge.c_set].iter()) {
        if !c.is_disjoint(seen) {
            return Err(format!("parts overlap at {:?}", c.intersection(seen)));
        }
        seen = seen.union(c);
    }
    if seen != support {
        return Err("parts do not cover the vertex set".into());
    }
    if edges.neighborhood(d) != ge.a_set {
        return Err("A differs from N(D)".into());
    }
    let comps = connected_components(edges, d);
    if comps != ge.components {
        return Err("components of G[D] differ".into());
    }
    for (i, &c) in ge.components.iter().enumerate() {
        if !is_factor_critical_on(edges, c) {
            return Err(format!("G[D_{}] is not factor critical", i + 1));
        }
    }
    if !has_perfect_matching_on(edges, ge.c_set) {
        return Err("G[C] has no perfect matching".into());
    }
    for i in 0..ge.r() {
        if !a_matches_into_distinct_components(edges, ge.a_set, &ge.components, Some(i)) {
            return Err(format!("no matching of A into components avoiding D_{}", i + 1));
        }
    }
    let nu = matching_number_on(edges, support);
    if ge.r() + 2 * nu != ge.a_set.len() + support.len() {
        return Err(format!(
            "r = {} but |A| + |V| - 2nu = {}",
            ge.r(),
            ge.a_set.len() + support.len() - 2 * nu
        ));
    }
    Ok(())
}

/// Checks that a maximum matching splits as a perfect matching on `C`, one
/// edge from each vertex of `A` into distinct components, and a
/// near-perfect matching inside each component.
pub fn check_matching_split(ge: &GallaiEdmonds, m: EdgeSet) -> Result<(), String> {
    let c = ge.c_set;
    let mc = m.induced(c);
    if mc.support() != c || mc.len() * 2 != c.len() {
        return Err("matching is not perfect on C".into());
    }
    let d = ge.d_set();
    let mut hit = 0u32;
    for a in ge.a_set.iter() {
        let partners = m.neighbors(a);
        if partners.len() != 1 || !partners.is_subset(d) {
            return Err(format!("vertex {a} of A is not matched into D"));
        }
        let j = ge.component_of(partners.min().unwrap()).unwrap();
        if hit >> j & 1 == 1 {
            return Err(format!("two vertices of A matched into D_{}", j + 1));
        }
        hit |= 1 << j;
    }
    for (i, &comp) in ge.components.iter().enumerate() {
        if m.induced(comp).len() * 2 + 1 != comp.len() {
            return Err(format!("matching is not near-perfect on D_{}", i + 1));
        }
    }
    let accounted = mc.len() + ge.a_set.len() + ge.components.iter().map(|&c| m.induced(c).len()).sum::<usize>();
    if accounted != m.len() {
        return Err("matching has edges outside the described pattern".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let ge = gallai_edmonds_on(EdgeSet::single(0, 1), VertexSet::range(2));
        assert!(ge.components.is_empty());
        assert!(ge.a_set.is_empty());
        assert_eq!(ge.c_set, VertexSet::range(2));
    }

    #[test]
    fn path_on_three_vertices() {
        let e = EdgeSet::from_pairs([(0, 1), (1, 2)]);
        let ge = gallai_edmonds_on(e, VertexSet::range(3));
        assert_eq!(ge.components, vec![VertexSet::singleton(0), VertexSet::singleton(2)]);
        assert_eq!(ge.a_set, VertexSet::singleton(1));
        assert!(ge.c_set.is_empty());
        check_structure(e, VertexSet::range(3), &ge).unwrap();
    }

    #[test]
    fn five_cycle_is_one_component() {
        let e = EdgeSet::from_pairs((0..5).map(|i| (i, (i + 1) % 5)));
        let ge = gallai_edmonds_on(e, VertexSet::range(5));
        assert_eq!(ge.components, vec![VertexSet::range(5)]);
        assert!(ge.a_set.is_empty() && ge.c_set.is_empty());
    }

    #[test]
    fn empty_vertex_set() {
        let ge = gallai_edmonds_on(EdgeSet::EMPTY, VertexSet::EMPTY);
        assert_eq!(ge.r(), 0);
        check_structure(EdgeSet::EMPTY, VertexSet::EMPTY, &ge).unwrap();
    }
}
