use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest vertex count whose complete graph fits a 64-bit edge mask.
pub const MAX_VERTICES: usize = 11;

/// Number of edge slots in `K_{MAX_VERTICES}`.
pub const MAX_EDGES: usize = MAX_VERTICES * (MAX_VERTICES - 1) / 2;

/// Iterates the set bit positions of a mask in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct Bits(u64);

impl Bits {
    pub fn new(mask: u64) -> Self {
        Bits(mask)
    }
}

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Bits {}

/// All submasks of `mask`, starting from the empty one.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut cur = 0u64;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur;
        if cur == mask {
            done = true;
        } else {
            cur = (cur.wrapping_sub(mask)) & mask;
        }
        Some(out)
    })
}

/// A set of vertices in `0..MAX_VERTICES`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// `{0, .., n-1}`.
    pub fn range(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn from_range(lo: usize, hi: usize) -> Self {
        VertexSet(Self::range(hi).0 & !Self::range(lo).0)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < 32 && self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Bits {
        Bits(self.0 as u64)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VertexSet::EMPTY, |s, v| s.with(v))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

const fn build_endpoints() -> [(u8, u8); MAX_EDGES] {
    let mut out = [(0u8, 0u8); MAX_EDGES];
    let mut v = 1;
    let mut i = 0;
    while v < MAX_VERTICES {
        let mut u = 0;
        while u < v {
            out[i] = (u as u8, v as u8);
            i += 1;
            u += 1;
        }
        v += 1;
    }
    out
}

static ENDPOINTS: [(u8, u8); MAX_EDGES] = build_endpoints();

const fn build_stars() -> [u64; MAX_VERTICES] {
    let mut out = [0u64; MAX_VERTICES];
    let mut i = 0;
    while i < MAX_EDGES {
        let (a, b) = ENDPOINTS_CONST[i];
        out[a as usize] |= 1 << i;
        out[b as usize] |= 1 << i;
        i += 1;
    }
    out
}

const ENDPOINTS_CONST: [(u8, u8); MAX_EDGES] = build_endpoints();

/// Edges incident to each vertex.
static STARS: [u64; MAX_VERTICES] = build_stars();

const ALL_EDGES: u64 = (1u64 << MAX_EDGES) - 1;

/// Bit position of the edge `uv`.
///
/// Positions are assigned in colex order, `(0,1), (0,2), (1,2), (0,3), ..`,
/// so the slots of `K_m` are a prefix of the slots of `K_n` for `m <= n`.
pub fn edge_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(a != b && b < MAX_VERTICES);
    b * (b - 1) / 2 + a
}

/// Endpoints `(u, v)` with `u < v` of the edge at bit position `i`.
pub fn edge_endpoints(i: usize) -> (usize, usize) {
    let (a, b) = ENDPOINTS[i];
    (a as usize, b as usize)
}

/// A set of edges of `K_{MAX_VERTICES}` stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    /// All edges with both endpoints in `vs`.
    pub fn complete(vs: VertexSet) -> Self {
        let mut m = ALL_EDGES;
        for v in 0..MAX_VERTICES {
            if !vs.contains(v) {
                m &= !STARS[v];
            }
        }
        EdgeSet(m)
    }

    /// Edges incident to `v`.
    pub fn star(v: usize) -> Self {
        EdgeSet(STARS[v])
    }

    /// All edges with one endpoint in `x` and the other in `y`.
    pub fn complete_bipartite(x: VertexSet, y: VertexSet) -> Self {
        let x = x.difference(y);
        let all = Self::complete(x.union(y)).0;
        EdgeSet(all & !Self::complete(x).0 & !Self::complete(y).0)
    }

    pub fn single(u: usize, v: usize) -> Self {
        EdgeSet(1 << edge_index(u, v))
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        pairs
            .into_iter()
            .fold(EdgeSet::EMPTY, |s, (u, v)| s.with(u, v))
    }

    pub fn contains(self, u: usize, v: usize) -> bool {
        self.0 >> edge_index(u, v) & 1 == 1
    }

    pub fn with(self, u: usize, v: usize) -> Self {
        EdgeSet(self.0 | 1 << edge_index(u, v))
    }

    pub fn without(self, u: usize, v: usize) -> Self {
        EdgeSet(self.0 & !(1 << edge_index(u, v)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        EdgeSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        EdgeSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        EdgeSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    /// Edges `(u, v)` with `u < v`, in colex order.
    pub fn iter(self) -> impl Iterator<Item = (usize, usize)> {
        Bits(self.0).map(edge_endpoints)
    }

    /// Edges in lexicographic order of `(u, v)`.
    pub fn lex_edges(self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable();
        v
    }

    /// The induced subgraph `G[vs]`.
    pub fn induced(self, vs: VertexSet) -> Self {
        self.intersection(EdgeSet::complete(vs))
    }

    /// The bipartite subgraph `G[x, y]` for disjoint `x`, `y`.
    pub fn between(self, x: VertexSet, y: VertexSet) -> Self {
        self.intersection(EdgeSet::complete_bipartite(x, y))
    }

    pub fn neighbors(self, v: usize) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for (a, b) in Bits(self.0 & STARS[v]).map(edge_endpoints) {
            out = out.with(if a == v { b } else { a });
        }
        out
    }

    /// `N(S)`: vertices outside `s` adjacent to some vertex of `s`.
    pub fn neighborhood(self, s: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for (a, b) in self.iter() {
            if s.contains(a) && !s.contains(b) {
                out = out.with(b);
            } else if s.contains(b) && !s.contains(a) {
                out = out.with(a);
            }
        }
        out
    }

    pub fn degree(self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// Vertices incident to at least one edge.
    pub fn support(self) -> VertexSet {
        self.iter()
            .fold(VertexSet::EMPTY, |s, (a, b)| s.with(a).with(b))
    }

    /// Neighbour masks for every vertex slot.
    pub fn adjacency(self) -> [u32; MAX_VERTICES] {
        let mut adj = [0u32; MAX_VERTICES];
        for (a, b) in self.iter() {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Apply a vertex relabelling `perm[old] = new`.
    pub fn relabel(self, perm: &[usize]) -> Self {
        self.iter()
            .fold(EdgeSet::EMPTY, |s, (a, b)| s.with(perm[a], perm[b]))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.lex_edges().into_iter().map(|(a, b)| format!("{a}-{b}")))
            .finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let vs = Vec::<usize>::deserialize(d)?;
        if let Some(&v) = vs.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(vs.into_iter().collect())
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.lex_edges().into_iter().map(|(a, b)| [a, b]))
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[usize; 2]>::deserialize(d)?;
        for &[a, b] in &pairs {
            if a == b || a >= MAX_VERTICES || b >= MAX_VERTICES {
                return Err(serde::de::Error::custom(format!("invalid edge {a}-{b}")));
            }
        }
        Ok(EdgeSet::from_pairs(pairs.into_iter().map(|[a, b]| (a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_roundtrip() {
        for i in 0..MAX_EDGES {
            let (u, v) = edge_endpoints(i);
            assert!(u < v);
            assert_eq!(edge_index(u, v), i);
            assert_eq!(edge_index(v, u), i);
        }
    }

    #[test]
    fn complete_graph_sizes() {
        for n in 0..=MAX_VERTICES {
            assert_eq!(EdgeSet::complete(VertexSet::range(n)).len(), n * n.saturating_sub(1) / 2);
        }
        let x = VertexSet::range(3);
        let y = VertexSet::from_range(3, 5);
        assert_eq!(EdgeSet::complete_bipartite(x, y).len(), 6);
    }

    #[test]
    fn submask_enumeration() {
        let all: Vec<u64> = submasks(0b1011).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], 0);
        assert_eq!(*all.last().unwrap(), 0b1011);
        assert_eq!(submasks(0).count(), 1);
    }

    #[test]
    fn neighborhood_excludes_the_set() {
        let path = EdgeSet::from_pairs([(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path.neighborhood(VertexSet::from_iter([1, 2])), VertexSet::from_iter([0, 3]));
        assert_eq!(path.neighbors(1), VertexSet::from_iter([0, 2]));
    }
}
