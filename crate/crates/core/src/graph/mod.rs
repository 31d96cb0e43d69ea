//! Graphs on at most [`MAX_VERTICES`] labelled vertices, matchings and the
//! Gallai–Edmonds decomposition.
//!
//! A graph is identified with its edge set. Edge sets are 64-bit masks over
//! the edges of the complete graph on `0..MAX_VERTICES`, so edge toggles,
//! unions and induced subgraphs are single word operations.

mod canon;
mod gallai_edmonds;
mod matching;
mod sets;

use std::fmt::Write as _;

use thiserror::Error;

pub use canon::{
    bipartite_graphs_up_to_isomorphism, canonical_form, CLASS_LIST_CAP, graphs_up_to_isomorphism, CanonicalForm,
    DEFAULT_CANON_CAP,
};
pub use gallai_edmonds::{
    a_matches_into_distinct_components, check_matching_split, check_structure, connected_components,
    gallai_edmonds_on, GallaiEdmonds,
};
pub use matching::{
    covers_side, has_perfect_matching_on, is_factor_critical_on, matching_number_on, matchings_of_size,
    maximum_matching_on, y_factor_critical_by_deletion, y_factor_critical_by_hall, yz_sizes_admissible,
};
pub use sets::{edge_endpoints, edge_index, submasks, Bits, EdgeSet, VertexSet, MAX_EDGES, MAX_VERTICES};

/// Default cap on the edge count for listing all maximum matchings.
pub const DEFAULT_MATCHING_LIST_CAP: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("edge {u}-{v} is out of range for {n} vertices")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} does not cross the bipartition")]
    NotCrossing(usize, usize),
    #[error("bipartition classes must be disjoint and cover all vertices")]
    BadBipartition,
    #[error("{what} limit exceeded: {actual} > {cap}")]
    CapExceeded { what: &'static str, actual: usize, cap: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("deletion and Hall criteria for Y-factor-criticality disagree")]
    CriteriaDisagree,
}

/// A simple graph on the vertices `0..vertex_count`, optionally bipartitioned.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: EdgeSet,
    bipartition: Option<(VertexSet, VertexSet)>,
}

impl Graph {
    /// Builds a graph from an explicit edge list.
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut edges = EdgeSet::EMPTY;
        for (u, v) in pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            edges = edges.with(u, v);
        }
        Ok(Graph { n, edges, bipartition: None })
    }

    /// Wraps an edge set, checking that all endpoints are below `n`.
    pub fn from_edge_set(n: usize, edges: EdgeSet) -> Result<Self, GraphError> {
        Graph::new(n, edges.iter())
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Graph::new(n, [])
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Graph::empty(n)?.with_edges(EdgeSet::complete(VertexSet::range(n)))
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// `K_6` with the edge `4-5` subdivided by the new vertex `6`.
    pub fn subdivided_k6() -> Self {
        let k6 = EdgeSet::complete(VertexSet::range(6)).without(4, 5);
        Graph { n: 7, edges: k6.with(4, 6).with(5, 6), bipartition: None }
    }

    /// A bipartite graph with classes `x` and `y`.
    pub fn bipartite<I: IntoIterator<Item = (usize, usize)>>(
        x: VertexSet,
        y: VertexSet,
        pairs: I,
    ) -> Result<Self, GraphError> {
        let n = x.union(y).len();
        if !x.is_disjoint(y) || x.union(y) != VertexSet::range(n) {
            return Err(GraphError::BadBipartition);
        }
        let mut g = Graph::new(n, pairs)?;
        for (u, v) in g.edges.iter() {
            if x.contains(u) == x.contains(v) {
                return Err(GraphError::NotCrossing(u, v));
            }
        }
        g.bipartition = Some((x, y));
        Ok(g)
    }

    /// `K_{a,b}` with `X = {0..a}` and `Y = {a..a+b}`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        let (x, y) = (VertexSet::range(a), VertexSet::from_range(a, a + b));
        Graph::bipartite(x, y, EdgeSet::complete_bipartite(x, y).iter())
    }

    /// The same vertex data with a different edge set.
    pub fn with_edges(&self, edges: EdgeSet) -> Result<Self, GraphError> {
        match self.bipartition {
            Some((x, y)) => Graph::bipartite(x, y, edges.iter()),
            None => Graph::from_edge_set(self.n, edges),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(self.n)
    }

    pub fn edges(&self) -> EdgeSet {
        self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        self.bipartition
    }

    /// The host complete graph: `K_V`, or `K_{X,Y}` when bipartitioned.
    pub fn host_edges(&self) -> EdgeSet {
        match self.bipartition {
            Some((x, y)) => EdgeSet::complete_bipartite(x, y),
            None => EdgeSet::complete(self.vertices()),
        }
    }

    /// Edges in lexicographic order.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.lex_edges()
    }

    pub fn matching_number(&self) -> usize {
        matching_number_on(self.edges, self.vertices())
    }

    /// A maximum matching, certifying [`Graph::matching_number`].
    pub fn maximum_matching(&self) -> Matching {
        Matching(maximum_matching_on(self.edges, self.vertices()))
    }

    /// All maximum matchings, refusing graphs with more than `cap` edges.
    pub fn maximum_matchings(&self, cap: usize) -> Result<Vec<Matching>, GraphError> {
        if self.edge_count() > cap {
            return Err(GraphError::CapExceeded { what: "edge count", actual: self.edge_count(), cap });
        }
        let nu = self.matching_number();
        Ok(matchings_of_size(self.edges, self.vertices(), nu).into_iter().map(Matching).collect())
    }

    /// Whether `G[support]` has a matching covering `support`. Vertices of
    /// `support` outside the graph are ignored.
    pub fn has_perfect_matching(&self, support: VertexSet) -> bool {
        has_perfect_matching_on(self.edges, support.intersection(self.vertices()))
    }

    pub fn is_factor_critical(&self, support: VertexSet) -> bool {
        is_factor_critical_on(self.edges, support.intersection(self.vertices()))
    }

    pub fn gallai_edmonds(&self) -> GallaiEdmonds {
        gallai_edmonds_on(self.edges, self.vertices())
    }

    /// Parses the edge-list text format.
    ///
    /// The first non-comment line is `n` or `n = a b` (a bipartite graph with
    /// `X = 0..a`, `Y = a..a+b`); each following line is `u v`. Blank lines
    /// and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(GraphError::Parse { line: 0, msg: "missing header".into() })?;
        let (n, classes) = parse_header(hline, header)?;
        let mut pairs = Vec::new();
        for (line, body) in lines {
            pairs.push(parse_pair(line, body)?);
        }
        match classes {
            Some((a, b)) => Graph::bipartite(VertexSet::range(a), VertexSet::from_range(a, a + b), pairs),
            None => Graph::new(n, pairs),
        }
        .map_err(|e| match e {
            GraphError::Parse { .. } => e,
            other => GraphError::Parse { line: 0, msg: other.to_string() },
        })
    }

    /// Renders the edge-list text format. Bipartite graphs whose classes are
    /// not a prefix split are written without the class header.
    pub fn to_edge_list(&self) -> String {
        let mut s = match self.bipartition {
            Some((x, y)) if x == VertexSet::range(x.len()) => format!("{} = {} {}\n", self.n, x.len(), y.len()),
            _ => format!("{}\n", self.n),
        };
        for (u, v) in self.edge_list() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

pub(crate) fn parse_header(line: usize, body: &str) -> Result<(usize, Option<(usize, usize)>), GraphError> {
    let err = |msg: &str| GraphError::Parse { line, msg: msg.to_string() };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| err(&format!("expected a vertex count, found {t:?}")));
    match body.split_once('=') {
        None => Ok((num(body)?, None)),
        Some((n, rest)) => {
            let n = num(n)?;
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err("expected `n = |X| |Y|`"));
            }
            let (a, b) = (num(parts[0])?, num(parts[1])?);
            if a + b != n {
                return Err(err("class sizes do not add up to n"));
            }
            Ok((n, Some((a, b))))
        }
    }
}

pub(crate) fn parse_pair(line: usize, body: &str) -> Result<(usize, usize), GraphError> {
    let toks: Vec<&str> = body.split_whitespace().collect();
    let err = || GraphError::Parse { line, msg: format!("expected `u v`, found {body:?}") };
    if toks.len() != 2 {
        return Err(err());
    }
    let u = toks[0].parse().map_err(|_| err())?;
    let v = toks[1].parse().map_err(|_| err())?;
    Ok((u, v))
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching(pub EdgeSet);

impl Matching {
    pub fn edges(&self) -> EdgeSet {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether no two edges share a vertex.
    pub fn is_valid(&self) -> bool {
        self.0.support().len() == 2 * self.0.len()
    }
}

/// Y-factor-criticality of the bipartite graph `G[x_side, y_side]`,
/// evaluated by both the deletion and the Hall-surplus criterion.
pub fn is_y_factor_critical(g: &Graph, x_side: VertexSet, y_side: VertexSet) -> Result<bool, GraphError> {
    let by_deletion = y_factor_critical_by_deletion(g.edges(), x_side, y_side);
    let by_hall = y_factor_critical_by_hall(g.edges(), x_side, y_side);
    if by_deletion != by_hall {
        return Err(GraphError::CriteriaDisagree);
    }
    Ok(by_deletion)
}

/// `(Y,Z)`-factor-criticality: Y-factor critical, and `G[Z, Y]` Z-factor critical.
pub fn is_yz_factor_critical(
    g: &Graph,
    x_side: VertexSet,
    y_side: VertexSet,
    z_subset: VertexSet,
) -> Result<bool, GraphError> {
    Ok(is_y_factor_critical(g, x_side, y_side)? && is_y_factor_critical(g, y_side, z_subset)?)
}

/// `(Y,Z)`-factor-criticality on raw edge sets, by the deletion criterion.
pub fn yz_factor_critical_on(edges: EdgeSet, x: VertexSet, y: VertexSet, z: VertexSet) -> bool {
    y_factor_critical_by_deletion(edges, x, y) && y_factor_critical_by_deletion(edges, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_one_graph() {
        let g = Graph::subdivided_k6();
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.matching_number(), 3);
    }

    #[test]
    fn parse_roundtrip() {
        let g = Graph::parse_edge_list("# a path\n3\n0 1\n\n1 2 # tail\n").unwrap();
        assert_eq!(g, Graph::path(3).unwrap());
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        let b = Graph::parse_edge_list("5 = 2 3\n0 2\n1 4\n").unwrap();
        assert_eq!(b.bipartition(), Some((VertexSet::range(2), VertexSet::from_range(2, 5))));
        assert_eq!(Graph::parse_edge_list(&b.to_edge_list()).unwrap(), b);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Graph::parse_edge_list(""), Err(GraphError::Parse { .. })));
        assert!(matches!(Graph::parse_edge_list("3\n0 x\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse_edge_list("3\n0 3\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(Graph::parse_edge_list("4 = 2 2\n0 1\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(Graph::parse_edge_list("4 = 2 3\n"), Err(GraphError::Parse { .. })));
    }

    #[test]
    fn maximum_matchings_examples() {
        let e = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(e.maximum_matchings(DEFAULT_MATCHING_LIST_CAP).unwrap().len(), 1);
        let p = Graph::path(3).unwrap();
        let ms = p.maximum_matchings(DEFAULT_MATCHING_LIST_CAP).unwrap();
        assert_eq!(ms, vec![Matching(EdgeSet::single(0, 1)), Matching(EdgeSet::single(1, 2))]);
        assert!(matches!(
            Graph::complete(10).unwrap().maximum_matchings(DEFAULT_MATCHING_LIST_CAP),
            Err(GraphError::CapExceeded { .. })
        ));
    }

    #[test]
    fn yz_factor_critical_examples() {
        let g = Graph::empty(0).unwrap();
        let e = VertexSet::EMPTY;
        assert!(is_yz_factor_critical(&g, e, e, e).unwrap());
        let k = Graph::complete_bipartite(3, 2).unwrap();
        let (x, y) = k.bipartition().unwrap();
        assert!(is_yz_factor_critical(&k, x, y, e).unwrap());
        // |Z| = |Y| = 1 can never be Z-factor critical.
        let k = Graph::complete_bipartite(2, 1).unwrap();
        let (x, y) = k.bipartition().unwrap();
        assert!(!is_yz_factor_critical(&k, x, y, VertexSet::singleton(0)).unwrap());
    }

    #[test]
    fn bipartite_validation() {
        let x = VertexSet::range(2);
        let y = VertexSet::from_range(2, 4);
        assert_eq!(Graph::bipartite(x, y, [(0, 1)]), Err(GraphError::NotCrossing(0, 1)));
        assert_eq!(Graph::bipartite(x, x, []), Err(GraphError::BadBipartition));
    }
}
