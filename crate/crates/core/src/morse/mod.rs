//! Element matchings on set families, acyclicity, and the recursive
//! constructions for the special graph families.
//!
//! Sets are `u64` masks over a bit ground. Graph families use the edge-index
//! ground of [`EdgeSet`](crate::graph::EdgeSet).

mod bounds;
mod combinators;
mod constructions;
mod link;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex};
use crate::graph::{Bits, GraphError};
use crate::homology::{reduced_betti, BettiTable, FieldSpec, HomologyError};

pub use bounds::{build_matching, family_bound, verify_family, BoundCheck, FamilyBound, FamilyVerdict};
pub use combinators::{
    boolean_matching, cluster_union, join_matching, partition_by, projection_matching, BooleanSplit,
    ProjectionPart,
};
pub use constructions::{build_bfc_matching, build_fc_matching, build_pm_matching};
pub use link::{build_link_matching_bipartite, build_link_matching_complete};

/// A member of a set family, as a bit mask.
pub type SetMask = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("the family is empty")]
    EmptyFamily,
    #[error("join part {0} has an empty family")]
    EmptyJoinPart(usize),
    #[error("pair member {0:#x} is not in the family")]
    ForeignFace(u64),
    #[error("invalid element matching: {0}")]
    InvalidMatching(String),
    #[error("matching has a directed cycle of length {0}")]
    Cyclic(usize),
    #[error("cluster map is not monotone between {lower:#x} and {upper:#x}")]
    NotMonotone { lower: u64, upper: u64 },
    #[error("parts overlap: {0}")]
    OverlappingParts(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Serializes a mask as a `0x`-prefixed hex string.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HexMask(pub u64);

impl fmt::Debug for HexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl Serialize for HexMask {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{:#x}", self.0))
    }
}

impl<'de> Deserialize<'de> for HexMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let t = s.strip_prefix("0x").unwrap_or(&s);
        u64::from_str_radix(t, 16).map(HexMask).map_err(serde::de::Error::custom)
    }
}

/// Ordered pairs `(σ, τ)` with `σ ⊊ τ`, `|τ \ σ| = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElementMatching {
    pairs: Vec<(SetMask, SetMask)>,
}

impl ElementMatching {
    pub fn new(mut pairs: Vec<(SetMask, SetMask)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        ElementMatching { pairs }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(SetMask, SetMask)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Union with another matching on a disjoint family.
    pub fn union(&self, other: &ElementMatching) -> ElementMatching {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        ElementMatching::new(pairs)
    }

    /// Applies `f` to both members of every pair.
    pub fn map(&self, f: impl Fn(SetMask) -> SetMask) -> ElementMatching {
        ElementMatching::new(self.pairs.iter().map(|&(s, t)| (f(s), f(t))).collect())
    }

    /// Members of `family` not covered by any pair.
    pub fn critical(&self, family: &[SetMask]) -> Vec<SetMask> {
        let mut matched: Vec<SetMask> = self.pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        matched.sort_unstable();
        family.iter().copied().filter(|f| matched.binary_search(f).is_err()).collect()
    }
}

impl Serialize for ElementMatching {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<[HexMask; 2]> = self.pairs.iter().map(|&(a, b)| [HexMask(a), HexMask(b)]).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ElementMatching {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<[HexMask; 2]> = Vec::deserialize(d)?;
        Ok(ElementMatching::new(v.into_iter().map(|[a, b]| (a.0, b.0)).collect()))
    }
}

/// A family together with an element matching on it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Construction {
    /// Bits the members may use.
    pub ground: SetMask,
    /// Sorted, distinct members.
    pub family: Vec<SetMask>,
    pub matching: ElementMatching,
}

impl Construction {
    pub fn new(ground: SetMask, mut family: Vec<SetMask>, matching: ElementMatching) -> Self {
        family.sort_unstable();
        family.dedup();
        Construction { ground, family, matching }
    }

    /// The family `{σ}` with the empty matching.
    pub fn singleton(ground: SetMask, sigma: SetMask) -> Self {
        Construction::new(ground, vec![sigma], ElementMatching::empty())
    }

    pub fn critical(&self) -> Vec<SetMask> {
        self.matching.critical(&self.family)
    }

    pub fn max_critical_size(&self) -> Option<usize> {
        self.critical().iter().map(|c| c.count_ones() as usize).max()
    }

    /// Runs validation and cycle detection.
    pub fn report(&self) -> Result<MatchingReport, MorseError> {
        let mut r = validate_matching(&self.family, &self.matching)?;
        if r.valid {
            let (acyclic, witness) = is_acyclic(&self.family, &self.matching);
            r.acyclic = Some(acyclic);
            r.witness_cycle = witness.map(|w| w.into_iter().map(HexMask).collect());
        }
        Ok(r)
    }

    /// Errors unless the matching is valid and acyclic.
    pub fn check(&self) -> Result<(), MorseError> {
        let r = self.report()?;
        if !r.valid {
            return Err(MorseError::InvalidMatching(r.problems.join("; ")));
        }
        match r.witness_cycle {
            Some(w) => Err(MorseError::Cyclic(w.len())),
            None => Ok(()),
        }
    }
}

/// Outcome of validating (and optionally cycle-checking) a matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub valid: bool,
    /// `None` until cycle detection has run.
    pub acyclic: Option<bool>,
    pub family_size: usize,
    pub pair_count: usize,
    pub critical: Vec<HexMask>,
    pub max_critical_size: Option<usize>,
    pub witness_cycle: Option<Vec<HexMask>>,
    pub problems: Vec<String>,
}

fn lookup(family: &[SetMask], s: SetMask) -> Option<usize> {
    family.binary_search(&s).ok()
}

fn sorted_family(family: &[SetMask]) -> Vec<SetMask> {
    let mut f = family.to_vec();
    f.sort_unstable();
    f.dedup();
    f
}

/// Checks the pair shape and that no member lies in two pairs.
///
/// Errors if a pair member is not in the family.
pub fn validate_matching(family: &[SetMask], m: &ElementMatching) -> Result<MatchingReport, MorseError> {
    let family = sorted_family(family);
    let mut problems = Vec::new();
    let mut used = vec![false; family.len()];
    for &(s, t) in m.pairs() {
        let (Some(i), Some(j)) = (lookup(&family, s), lookup(&family, t)) else {
            let foreign = if lookup(&family, s).is_none() { s } else { t };
            return Err(MorseError::ForeignFace(foreign));
        };
        if s & !t != 0 || (t & !s).count_ones() != 1 {
            problems.push(format!("({s:#x}, {t:#x}) does not differ by one added element"));
        }
        for k in [i, j] {
            if used[k] {
                problems.push(format!("{:#x} lies in more than one pair", family[k]));
            }
            used[k] = true;
        }
    }
    let critical: Vec<SetMask> = family.iter().zip(&used).filter(|(_, &u)| !u).map(|(&f, _)| f).collect();
    Ok(MatchingReport {
        valid: problems.is_empty(),
        acyclic: None,
        family_size: family.len(),
        pair_count: m.len(),
        max_critical_size: critical.iter().map(|c| c.count_ones() as usize).max(),
        critical: critical.into_iter().map(HexMask).collect(),
        witness_cycle: None,
        problems,
    })
}

/// Cycle detection on the digraph with matched pairs pointing up and all
/// other covering relations pointing down.
///
/// The matching must be valid. A witness cycle starts with a matched step
/// `σ_0 → τ_0` and alternates thereafter.
pub fn is_acyclic(family: &[SetMask], m: &ElementMatching) -> (bool, Option<Vec<SetMask>>) {
    let family = sorted_family(family);
    let n = family.len();
    // partner[i]: the other member of i's pair; up[i]: i is the lower member.
    let mut partner = vec![u32::MAX; n];
    let mut up = vec![false; n];
    for &(s, t) in m.pairs() {
        if let (Some(i), Some(j)) = (lookup(&family, s), lookup(&family, t)) {
            partner[i] = j as u32;
            partner[j] = i as u32;
            up[i] = true;
        }
    }
    let index: HashMap<SetMask, u32> = family.iter().enumerate().map(|(i, &f)| (f, i as u32)).collect();
    let successors = |i: usize| -> Vec<u32> {
        if up[i] {
            return vec![partner[i]];
        }
        let f = family[i];
        Bits::new(f)
            .filter_map(|b| index.get(&(f & !(1 << b))).copied())
            .filter(|&j| partner[i] != j)
            .collect()
    };
    // 0 = unseen, 1 = on stack, 2 = done.
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(u32, Vec<u32>, usize)> = vec![(root as u32, successors(root), 0)];
        state[root] = 1;
        while let Some((node, succ, pos)) = stack.last_mut() {
            if *pos == succ.len() {
                state[*node as usize] = 2;
                stack.pop();
                continue;
            }
            let next = succ[*pos] as usize;
            *pos += 1;
            match state[next] {
                0 => {
                    state[next] = 1;
                    let s = successors(next);
                    stack.push((next as u32, s, 0));
                }
                1 => {
                    let start = stack.iter().position(|(v, _, _)| *v as usize == next).unwrap();
                    let mut cycle: Vec<SetMask> = stack[start..].iter().map(|(v, _, _)| family[*v as usize]).collect();
                    // Rotate so the cycle opens with a matched (upward) step.
                    if let Some(k) = (0..cycle.len()).find(|&k| cycle[k].count_ones() < cycle[(k + 1) % cycle.len()].count_ones()) {
                        cycle.rotate_left(k);
                    }
                    return (false, Some(cycle));
                }
                _ => {}
            }
        }
    }
    (true, None)
}

/// Whether a face sequence has the alternating shape
/// `(σ_0, τ_0, .., σ_{t-1}, τ_{t-1})` with `t ≥ 3`, `(σ_i, τ_i)` matched and
/// `σ_{i+1} ⊊ τ_i` a facet.
pub fn has_alternating_shape(cycle: &[SetMask], m: &ElementMatching) -> bool {
    let n = cycle.len();
    if n < 6 || !n.is_multiple_of(2) {
        return false;
    }
    let matched = |s: SetMask, t: SetMask| m.pairs().binary_search(&(s, t)).is_ok();
    let size = cycle[0].count_ones();
    (0..n / 2).all(|i| {
        let (s, t, next) = (cycle[2 * i], cycle[2 * i + 1], cycle[(2 * i + 2) % n]);
        s.count_ones() == size
            && t.count_ones() == size + 1
            && matched(s, t)
            && next & !t == 0
            && next != s
            && !matched(next, t)
    })
}

/// Per-dimension Morse inequality comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseInequalityReport {
    pub field: FieldSpec,
    pub betti: BettiTable,
    /// Critical counts indexed by dimension, from dimension 0.
    pub critical_by_dim: Vec<usize>,
    /// `β̃_i ≤ c_i` for `i ≥ 1` and `β̃_0 + 1 ≤ c_0` (unreduced) when the complex has a vertex.
    pub holds: bool,
    /// The reduced comparison at dimension 0, reported only.
    pub reduced_dim0_holds: bool,
}

/// Compares Betti numbers of `k` with critical counts of an acyclic
/// matching on its non-empty faces.
///
/// Faces are masks over the ground positions of `k`.
pub fn verify_morse_inequality(
    k: &SimplicialComplex,
    m: &ElementMatching,
    field: FieldSpec,
) -> Result<MorseInequalityReport, MorseError> {
    let nonempty: Vec<SetMask> = k.faces().iter().copied().filter(|&f| f != 0).collect();
    let c = Construction::new(k.ground().full(), nonempty, m.clone());
    c.check()?;
    let betti = reduced_betti(k, field)?;
    let top = k.dimension().unwrap_or(-1).max(0) as usize;
    let mut critical_by_dim = vec![0usize; top + 1];
    for s in c.critical() {
        critical_by_dim[s.count_ones() as usize - 1] += 1;
    }
    let count = |i: usize| critical_by_dim.get(i).copied().unwrap_or(0);
    let higher = (1..=top).all(|i| betti.get(i as isize) <= count(i));
    let has_vertex = k.faces().iter().any(|&f| f != 0);
    let dim0 = !has_vertex || betti.get(0) < count(0);
    Ok(MorseInequalityReport {
        field,
        holds: higher && dim0,
        reduced_dim0_holds: betti.get(0) <= count(0),
        betti,
        critical_by_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Element, GroundSet};

    const E: u64 = 1;
    const F: u64 = 2;

    fn power_set() -> Vec<u64> {
        vec![0, E, F, E | F]
    }

    #[test]
    fn validation_examples() {
        let r = validate_matching(&power_set(), &ElementMatching::empty()).unwrap();
        assert!(r.valid);
        assert_eq!(r.critical.len(), 4);
        assert_eq!(r.acyclic, None);

        let m = ElementMatching::new(vec![(0, E), (F, E | F)]);
        let r = validate_matching(&power_set(), &m).unwrap();
        assert!(r.valid);
        assert!(r.critical.is_empty());

        let bad = ElementMatching::new(vec![(0, E | F)]);
        assert!(!validate_matching(&power_set(), &bad).unwrap().valid);

        let twice = ElementMatching::new(vec![(0, E), (0, F)]);
        assert!(!validate_matching(&power_set(), &twice).unwrap().valid);

        let foreign = ElementMatching::new(vec![(0, 4)]);
        assert_eq!(validate_matching(&power_set(), &foreign), Err(MorseError::ForeignFace(4)));
    }

    #[test]
    fn acyclicity_examples() {
        assert_eq!(is_acyclic(&power_set(), &ElementMatching::empty()), (true, None));
        let m = ElementMatching::new(vec![(0, E), (F, E | F)]);
        assert!(is_acyclic(&power_set(), &m).0);
    }

    #[test]
    fn triangle_boundary_cycle_is_found() {
        // Vertices a,b,c as bits 0..2; matching a->ab, b->bc, c->ca closes a loop.
        let family = vec![1, 2, 4, 3, 6, 5];
        let m = ElementMatching::new(vec![(1, 3), (2, 6), (4, 5)]);
        let (ok, w) = is_acyclic(&family, &m);
        assert!(!ok);
        let w = w.unwrap();
        assert!(has_alternating_shape(&w, &m), "{w:?}");
    }

    #[test]
    fn morse_inequality_on_small_complexes() {
        let ground = GroundSet::new(vec![Element::edge(0, 1), Element::edge(0, 2), Element::edge(1, 2)]).unwrap();
        let circle = SimplicialComplex::from_faces(ground.clone(), vec![0, 1, 2, 4, 3, 5, 6]).unwrap();
        let r = verify_morse_inequality(&circle, &ElementMatching::empty(), FieldSpec::Gf2).unwrap();
        assert!(r.holds);
        assert_eq!(r.critical_by_dim, vec![3, 3]);
        // Collapse the circle to one vertex and one edge.
        let m = ElementMatching::new(vec![(2, 3), (4, 6)]);
        let r = verify_morse_inequality(&circle, &m, FieldSpec::Gf2).unwrap();
        assert!(r.holds);
        assert_eq!(r.critical_by_dim, vec![1, 1]);
        // A full simplex collapses down to a single vertex.
        let simplex = SimplicialComplex::simplex(ground);
        let m = ElementMatching::new(vec![(2, 3), (4, 5), (6, 7)]);
        let r = verify_morse_inequality(&simplex, &m, FieldSpec::Gf2).unwrap();
        assert!(r.holds);
        assert_eq!(r.critical_by_dim, vec![1, 0, 0]);
    }

    #[test]
    fn hex_serialization() {
        let m = ElementMatching::new(vec![(0, 0x10)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["0x0","0x10"]]"#);
        assert_eq!(serde_json::from_str::<ElementMatching>(&s).unwrap(), m);
    }
}
