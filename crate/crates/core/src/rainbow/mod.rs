//! Rainbow matchings: instances, exact search, the theorem checks, tightness
//! witnesses, the labelled complex and matroid variants.

mod labelled;
mod matroid;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ComplexError;
use crate::graph::{
    content_lines, matching_number_on, matchings_of_size, parse_pair, EdgeSet, Graph, GraphError, VertexSet,
};

pub use labelled::{labelled_nm_complex, partition_rank, verify_topological_helly_conclusion, HellyReport};
pub use matroid::{matroid_rainbow_check, MatroidVerdict, RankOracle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RainbowError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("set {set} has edge {u}-{v} outside the host")]
    EdgeOutsideHost { set: usize, u: usize, v: usize },
    #[error("hypotheses not met: {0}")]
    Hypothesis(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("rank oracle is not a matroid rank function: {0}")]
    InvalidOracle(String),
    #[error("{what} limit exceeded: {actual} > {cap}")]
    CapExceeded { what: &'static str, actual: u64, cap: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Whether the edges admit a proper 2-colouring of their endpoints.
pub fn is_bipartite_edges(edges: EdgeSet) -> bool {
    let mut side = [None::<bool>; crate::graph::MAX_VERTICES];
    for start in edges.support().iter() {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let su = side[u].unwrap();
            for w in edges.neighbors(u).iter() {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        stack.push(w);
                    }
                    Some(sw) if sw == su => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Edge sets `E_1..E_m` over a host graph, and a target size `k`.
///
/// Empty sets are representable so that the hypothesis check can reject them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RainbowInstance {
    host: Graph,
    sets: Vec<EdgeSet>,
    k: usize,
}

impl RainbowInstance {
    pub fn new(host: Graph, sets: Vec<EdgeSet>, k: usize) -> Result<Self, RainbowError> {
        for (i, s) in sets.iter().enumerate() {
            if let Some((u, v)) = s.difference(host.edges()).iter().next() {
                return Err(RainbowError::EdgeOutsideHost { set: i + 1, u, v });
            }
        }
        Ok(RainbowInstance { host, sets, k })
    }

    /// Instance on the union of the sets as host.
    pub fn on_union(n: usize, sets: Vec<EdgeSet>, k: usize) -> Result<Self, RainbowError> {
        let union = sets.iter().fold(EdgeSet::EMPTY, |a, &s| a.union(s));
        Self::new(Graph::from_edge_set(n, union)?, sets, k)
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn sets(&self) -> &[EdgeSet] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn union(&self) -> EdgeSet {
        self.sets.iter().fold(EdgeSet::EMPTY, |a, &s| a.union(s))
    }

    pub fn is_bipartite(&self) -> bool {
        self.host.bipartition().is_some() || is_bipartite_edges(self.host.edges())
    }

    /// Sets needed by the theorem for this host class.
    pub fn threshold(&self) -> usize {
        if self.is_bipartite() {
            (2 * self.k).saturating_sub(1)
        } else {
            (3 * self.k).saturating_sub(2)
        }
    }

    /// Parses the host edge list followed by lines `SET i: u v, u v, ...`.
    pub fn parse(text: &str, k: usize) -> Result<Self, RainbowError> {
        let mut host_text = String::new();
        let mut sets: Vec<(usize, EdgeSet)> = Vec::new();
        let mut in_sets = false;
        for (line, body) in content_lines(text) {
            if let Some(rest) = body.strip_prefix("SET") {
                in_sets = true;
                let (idx, edges) = rest
                    .split_once(':')
                    .ok_or_else(|| RainbowError::Parse { line, msg: "expected `SET i: ...`".into() })?;
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| RainbowError::Parse { line, msg: format!("bad set index {:?}", idx.trim()) })?;
                if idx != sets.len() + 1 {
                    return Err(RainbowError::Parse { line, msg: format!("expected set {}, found {idx}", sets.len() + 1) });
                }
                let mut s = EdgeSet::EMPTY;
                for pair in edges.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    let (u, v) = parse_pair(line, pair).map_err(|e| RainbowError::Parse { line, msg: e.to_string() })?;
                    if u == v || u.max(v) >= crate::graph::MAX_VERTICES {
                        return Err(RainbowError::Parse { line, msg: format!("bad edge {u}-{v}") });
                    }
                    s = s.with(u, v);
                }
                sets.push((line, s));
            } else if in_sets {
                return Err(RainbowError::Parse { line, msg: "host lines must precede the sets".into() });
            } else {
                let _ = writeln!(host_text, "{body}");
            }
        }
        let host = Graph::parse_edge_list(&host_text).map_err(|e| match e {
            GraphError::Parse { line, msg } => RainbowError::Parse { line, msg },
            other => RainbowError::Graph(other),
        })?;
        Self::new(host, sets.into_iter().map(|(_, s)| s).collect(), k)
    }

    pub fn to_text(&self) -> String {
        let mut s = self.host.to_edge_list();
        for (i, e) in self.sets.iter().enumerate() {
            let edges: Vec<String> = e.lex_edges().iter().map(|(u, v)| format!("{u} {v}")).collect();
            let _ = writeln!(s, "SET {}: {}", i + 1, edges.join(", "));
        }
        s
    }
}

/// One chosen edge and the (1-based) index of the set it comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub edge: (usize, usize),
    pub source: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowCertificate {
    pub assignment: Vec<Assignment>,
}

impl RainbowCertificate {
    /// Checks disjointness, membership, distinct sources and the size.
    pub fn validate(&self, inst: &RainbowInstance) -> Result<(), String> {
        if self.assignment.len() != inst.k {
            return Err(format!("size {} instead of {}", self.assignment.len(), inst.k));
        }
        let mut used = VertexSet::EMPTY;
        let mut sources = Vec::new();
        for a in &self.assignment {
            let (u, v) = a.edge;
            if a.source == 0 || a.source > inst.m() || !inst.sets[a.source - 1].contains(u, v) {
                return Err(format!("edge {u}-{v} is not in set {}", a.source));
            }
            if used.contains(u) || used.contains(v) {
                return Err(format!("edge {u}-{v} meets an earlier edge"));
            }
            used = used.with(u).with(v);
            if sources.contains(&a.source) {
                return Err(format!("set {} used twice", a.source));
            }
            sources.push(a.source);
        }
        Ok(())
    }
}

/// Exact backtracking search for a rainbow matching of size `k`.
///
/// Sets are tried smallest first, edges in lexicographic order.
pub fn find_rainbow_matching(inst: &RainbowInstance) -> Option<RainbowCertificate> {
    let mut order: Vec<usize> = (0..inst.m()).collect();
    order.sort_by_key(|&i| (inst.sets[i].len(), i));
    let lists: Vec<Vec<(usize, usize)>> = order.iter().map(|&i| inst.sets[i].lex_edges()).collect();
    let mut chosen = Vec::with_capacity(inst.k);
    if extend(&lists, &order, 0, inst.k, VertexSet::EMPTY, &mut chosen) {
        Some(RainbowCertificate { assignment: chosen })
    } else {
        None
    }
}

fn extend(
    lists: &[Vec<(usize, usize)>],
    order: &[usize],
    at: usize,
    need: usize,
    used: VertexSet,
    chosen: &mut Vec<Assignment>,
) -> bool {
    if need == 0 {
        return true;
    }
    if lists.len() - at < need {
        return false;
    }
    for &(u, v) in &lists[at] {
        if used.contains(u) || used.contains(v) {
            continue;
        }
        chosen.push(Assignment { edge: (u, v), source: order[at] + 1 });
        if extend(lists, order, at + 1, need - 1, used.with(u).with(v), chosen) {
            return true;
        }
        chosen.pop();
    }
    extend(lists, order, at + 1, need, used, chosen)
}

/// Reference search: every `k`-subset of sets, every choice of edges.
pub fn rainbow_exists_brute_force(inst: &RainbowInstance) -> bool {
    let m = inst.m();
    if inst.k == 0 {
        return true;
    }
    if inst.k > m {
        return false;
    }
    (0u32..1 << m).filter(|s| s.count_ones() as usize == inst.k).any(|s| {
        let picked: Vec<Vec<(usize, usize)>> =
            (0..m).filter(|i| s >> i & 1 == 1).map(|i| inst.sets[i].lex_edges()).collect();
        product_has_matching(&picked, 0, EdgeSet::EMPTY)
    })
}

fn product_has_matching(lists: &[Vec<(usize, usize)>], at: usize, acc: EdgeSet) -> bool {
    if at == lists.len() {
        return matching_number_on(acc, acc.support()) == lists.len();
    }
    lists[at].iter().any(|&(u, v)| product_has_matching(lists, at + 1, acc.with(u, v)))
}

/// All sets non-empty and `ν(E_i ∪ E_j) >= k` for every pair `i != j`.
pub fn verify_hypotheses(inst: &RainbowInstance) -> bool {
    hypothesis_failure(inst).is_none()
}

fn hypothesis_failure(inst: &RainbowInstance) -> Option<String> {
    if let Some(i) = inst.sets.iter().position(|s| s.is_empty()) {
        return Some(format!("set {} is empty", i + 1));
    }
    for i in 0..inst.m() {
        for j in i + 1..inst.m() {
            let u = inst.sets[i].union(inst.sets[j]);
            let nu = matching_number_on(u, u.support());
            if nu < inst.k {
                return Some(format!("sets {} and {} have matching number {nu} < {}", i + 1, j + 1, inst.k));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremVerdict {
    Satisfied { certificate: RainbowCertificate },
    /// Hypotheses hold and no rainbow matching exists.
    Violation { instance: String, pairwise_matching_numbers: Vec<(usize, usize, usize)> },
}

impl TheoremVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, TheoremVerdict::Satisfied { .. })
    }
}

/// Checks the rainbow theorem on one instance: with enough sets meeting the
/// pairwise hypothesis, a rainbow `k`-matching must exist.
pub fn verify_theorem(inst: &RainbowInstance) -> Result<TheoremVerdict, RainbowError> {
    if inst.m() < inst.threshold() {
        return Err(RainbowError::Hypothesis(format!(
            "{} sets, the {} host needs {}",
            inst.m(),
            if inst.is_bipartite() { "bipartite" } else { "general" },
            inst.threshold()
        )));
    }
    if let Some(why) = hypothesis_failure(inst) {
        return Err(RainbowError::Hypothesis(why));
    }
    match find_rainbow_matching(inst) {
        Some(certificate) => Ok(TheoremVerdict::Satisfied { certificate }),
        None => {
            let mut nus = Vec::new();
            for i in 0..inst.m() {
                for j in i + 1..inst.m() {
                    let u = inst.sets[i].union(inst.sets[j]);
                    nus.push((i + 1, j + 1, matching_number_on(u, u.support())));
                }
            }
            Ok(TheoremVerdict::Violation { instance: inst.to_text(), pairwise_matching_numbers: nus })
        }
    }
}

/// Host graphs for the tightness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HostClass {
    CompleteBipartite(usize, usize),
    Complete(usize),
    Given(Graph),
}

impl HostClass {
    pub fn graph(&self) -> Result<Graph, RainbowError> {
        Ok(match self {
            HostClass::CompleteBipartite(a, b) => Graph::complete_bipartite(*a, *b)?,
            HostClass::Complete(n) => Graph::complete(*n)?,
            HostClass::Given(g) => g.clone(),
        })
    }
}

/// Largest number of multisets scanned before switching to random sampling.
pub const TIGHTNESS_EXHAUSTIVE_CAP: u64 = 2_000_000;

/// Looks for `m` sets on the host meeting the hypotheses with no rainbow
/// `k`-matching. Candidate sets are the `k`-matchings of the host; multisets
/// are scanned in order when few enough, otherwise sampled from `seed`.
///
/// With `m < k` the question is vacuous and the answer is `None`.
pub fn search_tightness(k: usize, class: &HostClass, m: usize, seed: u64) -> Result<Option<RainbowInstance>, RainbowError> {
    if m < k || k == 0 {
        return Ok(None);
    }
    let host = class.graph()?;
    let pool = matchings_of_size(host.edges(), host.vertices(), k);
    if pool.is_empty() {
        return Ok(None);
    }
    let count = multiset_count(pool.len() as u64, m as u64);
    let test = |picks: &[usize]| -> Result<Option<RainbowInstance>, RainbowError> {
        let inst = RainbowInstance::new(host.clone(), picks.iter().map(|&i| pool[i]).collect(), k)?;
        Ok((verify_hypotheses(&inst) && find_rainbow_matching(&inst).is_none()).then_some(inst))
    };
    if count.is_some_and(|c| c <= TIGHTNESS_EXHAUSTIVE_CAP) {
        let mut picks = vec![0usize; m];
        loop {
            if let Some(w) = test(&picks)? {
                return Ok(Some(w));
            }
            // Next non-decreasing tuple.
            let Some(i) = (0..m).rev().find(|&i| picks[i] + 1 < pool.len()) else { return Ok(None) };
            let next = picks[i] + 1;
            picks[i..].iter_mut().for_each(|p| *p = next);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..TIGHTNESS_EXHAUSTIVE_CAP {
        let mut picks: Vec<usize> = (0..m).map(|_| rng.gen_range(0..pool.len())).collect();
        picks.sort_unstable();
        if let Some(w) = test(&picks)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn multiset_count(n: u64, m: u64) -> Option<u64> {
    // C(n + m - 1, m)
    let mut c: u64 = 1;
    for i in 0..m {
        c = c.checked_mul(n + i)? / (i + 1);
    }
    Some(c)
}

/// Outcome of a sweep over many instances.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTally {
    pub checked: u64,
    pub skipped: u64,
    pub violations: Vec<String>,
}

/// All triples of non-empty edge sets in `K_{3,3}` meeting the hypotheses
/// for `k = 2`. The first set runs over one representative per orbit under
/// the host's automorphisms, which covers every triple up to isomorphism
/// (and hence every bipartite host inside `K_{3,3}`).
pub fn bipartite_k2_triples() -> Result<SweepTally, RainbowError> {
    let host = Graph::complete_bipartite(3, 3)?;
    let edges = host.edges();
    let subsets: Vec<EdgeSet> = crate::graph::submasks(edges.0).filter(|&m| m != 0).map(EdgeSet).collect();
    let autos = bipartite_automorphisms(3);
    let reps: Vec<EdgeSet> = subsets
        .iter()
        .copied()
        .filter(|s| autos.iter().all(|p| s.relabel(p).0 >= s.0))
        .collect();
    let mut tally = SweepTally::default();
    let mut union_ok = std::collections::HashMap::new();
    let mut pair_ok = |a: EdgeSet, b: EdgeSet| -> bool {
        let u = a.union(b);
        *union_ok.entry(u.0).or_insert_with(|| matching_number_on(u, u.support()) >= 2)
    };
    for &e1 in &reps {
        for (j, &e2) in subsets.iter().enumerate() {
            if !pair_ok(e1, e2) {
                tally.skipped += (subsets.len() - j) as u64;
                continue;
            }
            for &e3 in &subsets[j..] {
                if !pair_ok(e1, e3) || !pair_ok(e2, e3) {
                    tally.skipped += 1;
                    continue;
                }
                tally.checked += 1;
                let inst = RainbowInstance { host: host.clone(), sets: vec![e1, e2, e3], k: 2 };
                if find_rainbow_matching(&inst).is_none() {
                    tally.violations.push(inst.to_text());
                }
            }
        }
    }
    Ok(tally)
}

fn bipartite_automorphisms(a: usize) -> Vec<Vec<usize>> {
    let side: Vec<Vec<usize>> = permutations(a);
    let mut out = Vec::new();
    for p in &side {
        for q in &side {
            let mut perm: Vec<usize> = p.clone();
            perm.extend(q.iter().map(|&j| a + j));
            out.push(perm.clone());
            // Swap the sides.
            let swapped: Vec<usize> = (0..2 * a).map(|i| if i < a { a + q[i] } else { p[i - a] }).collect();
            out.push(swapped);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Seeded random quadruples on hosts with at most `max_vertices` vertices
/// meeting the `k = 2` hypotheses, until `count` instances have been checked.
pub fn general_k2_quadruples(count: u64, max_vertices: usize, seed: u64) -> Result<SweepTally, RainbowError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = SweepTally::default();
    while tally.checked < count {
        let n = rng.gen_range(4..=max_vertices);
        let host = Graph::complete(n)?;
        let all = host.edges().lex_edges();
        let density = rng.gen_range(0.1..0.6);
        let sets: Vec<EdgeSet> = (0..4)
            .map(|_| {
                let s = all.iter().filter(|_| rng.gen_bool(density)).fold(EdgeSet::EMPTY, |s, &(u, v)| s.with(u, v));
                if s.is_empty() {
                    let (u, v) = all[rng.gen_range(0..all.len())];
                    EdgeSet::single(u, v)
                } else {
                    s
                }
            })
            .collect();
        let inst = RainbowInstance::new(host, sets, 2)?;
        if !verify_hypotheses(&inst) {
            tally.skipped += 1;
            continue;
        }
        tally.checked += 1;
        if !verify_theorem(&inst)?.is_satisfied() {
            tally.violations.push(inst.to_text());
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_pair() -> RainbowInstance {
        let e1 = EdgeSet::from_pairs([(0, 1), (2, 3)]);
        let e2 = EdgeSet::from_pairs([(1, 2), (0, 3)]);
        RainbowInstance::on_union(4, vec![e1, e2], 2).unwrap()
    }

    #[test]
    fn search_examples() {
        let inst = c4_pair();
        assert!(find_rainbow_matching(&inst).is_none());
        assert!(verify_hypotheses(&inst));
        let mut sets = inst.sets().to_vec();
        sets.push(EdgeSet::from_pairs([(0, 1), (2, 3)]));
        let three = RainbowInstance::on_union(4, sets, 2).unwrap();
        let cert = find_rainbow_matching(&three).unwrap();
        cert.validate(&three).unwrap();
        let one = RainbowInstance { k: 1, ..c4_pair() };
        assert_eq!(find_rainbow_matching(&one).unwrap().assignment.len(), 1);
    }

    #[test]
    fn hypotheses() {
        let e = EdgeSet::single(0, 1);
        let inst = RainbowInstance::on_union(2, vec![e, e], 2).unwrap();
        assert!(!verify_hypotheses(&inst));
        let inst = RainbowInstance::on_union(4, vec![e, EdgeSet::EMPTY, e], 1).unwrap();
        assert!(!verify_hypotheses(&inst));
        assert!(matches!(verify_theorem(&c4_pair()), Err(RainbowError::Hypothesis(_))));
    }

    #[test]
    fn c4_triple_is_satisfied() {
        let mut sets = c4_pair().sets().to_vec();
        sets.push(EdgeSet::from_pairs([(0, 1), (2, 3)]));
        let inst = RainbowInstance::on_union(4, sets, 2).unwrap();
        assert!(inst.is_bipartite());
        assert!(verify_theorem(&inst).unwrap().is_satisfied());
    }

    #[test]
    fn tightness_witnesses() {
        let w = search_tightness(2, &HostClass::CompleteBipartite(2, 2), 2, 0).unwrap().unwrap();
        assert!(find_rainbow_matching(&w).is_none() && verify_hypotheses(&w));
        let mut sets = w.sets().to_vec();
        sets.sort();
        let mut expect = vec![EdgeSet::from_pairs([(0, 2), (1, 3)]), EdgeSet::from_pairs([(0, 3), (1, 2)])];
        expect.sort();
        assert_eq!(sets, expect);
        let w = search_tightness(3, &HostClass::CompleteBipartite(3, 3), 4, 0).unwrap().unwrap();
        assert!(find_rainbow_matching(&w).is_none() && verify_hypotheses(&w));
        assert!(search_tightness(1, &HostClass::Complete(3), 0, 0).unwrap().is_none());
    }

    #[test]
    fn parse_roundtrip() {
        let text = "4\n0 1\n1 2\n2 3\n0 3\nSET 1: 0 1, 2 3\nSET 2: 1 2, 0 3\n";
        let inst = RainbowInstance::parse(text, 2).unwrap();
        assert_eq!(inst, c4_pair());
        assert_eq!(RainbowInstance::parse(&inst.to_text(), 2).unwrap(), inst);
        assert!(RainbowInstance::parse("4\n0 1\nSET 1: 0 1, 2\n", 2).is_err());
        assert!(matches!(
            RainbowInstance::parse("4\n0 1\nSET 1: 2 3\n", 2),
            Err(RainbowError::EdgeOutsideHost { .. })
        ));
    }
}
