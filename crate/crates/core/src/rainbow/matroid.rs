//! Matroids given by rank oracles over (labelled) edges, and the search for
//! an independent matching.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Element, Face};
use crate::graph::{matching_number_on, submasks, Bits, EdgeSet, VertexSet};

use super::{is_bipartite_edges, RainbowError};

/// Largest ground validated by scanning every subset.
pub const EXHAUSTIVE_ORACLE_GROUND: usize = 12;

/// Random local checks on larger grounds.
const SAMPLED_ORACLE_CHECKS: usize = 4096;

type RankFn = dyn Fn(Face) -> usize + Send + Sync;

/// A rank function on subsets of `ground`, given as bit masks.
#[derive(Clone)]
pub struct RankOracle {
    ground: Vec<Element>,
    rank: Arc<RankFn>,
}

impl std::fmt::Debug for RankOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RankOracle").field("ground", &self.ground).finish_non_exhaustive()
    }
}

impl RankOracle {
    pub fn from_fn(ground: Vec<Element>, rank: impl Fn(Face) -> usize + Send + Sync + 'static) -> Result<Self, RainbowError> {
        if ground.len() > 64 {
            return Err(RainbowError::CapExceeded { what: "oracle ground", actual: ground.len() as u64, cap: 64 });
        }
        Ok(RankOracle { ground, rank: Arc::new(rank) })
    }

    /// Every subset independent.
    pub fn free(ground: Vec<Element>) -> Result<Self, RainbowError> {
        Self::from_fn(ground, |s| s.count_ones() as usize)
    }

    /// Classes are the labels; unlabelled elements form singleton classes.
    pub fn partition(ground: Vec<Element>) -> Result<Self, RainbowError> {
        let classes: Vec<Option<u16>> = ground.iter().map(|e| e.label).collect();
        Self::from_fn(ground, move |s| {
            let mut seen: Vec<u16> = Vec::new();
            let mut singles = 0;
            for i in Bits::new(s) {
                match classes[i] {
                    Some(l) if !seen.contains(&l) => seen.push(l),
                    Some(_) => {}
                    None => singles += 1,
                }
            }
            seen.len() + singles
        })
    }

    /// Cycle matroid of the underlying edges.
    pub fn graphic(ground: Vec<Element>) -> Result<Self, RainbowError> {
        let ends: Vec<(usize, usize)> = ground.iter().map(Element::endpoints).collect();
        Self::from_fn(ground, move |s| {
            let mut parent: Vec<usize> = (0..crate::graph::MAX_VERTICES).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            let mut rank = 0;
            for i in Bits::new(s) {
                let (a, b) = (find(&mut parent, ends[i].0), find(&mut parent, ends[i].1));
                if a != b {
                    parent[a] = b;
                    rank += 1;
                }
            }
            rank
        })
    }

    pub fn ground(&self) -> &[Element] {
        &self.ground
    }

    pub fn full(&self) -> Face {
        crate::complex::low_mask(self.ground.len())
    }

    pub fn rank(&self, s: Face) -> usize {
        (self.rank)(s)
    }

    /// Elements whose addition keeps the rank.
    pub fn closure(&self, s: Face) -> Face {
        let r = self.rank(s);
        Bits::new(self.full() & !s).filter(|&i| self.rank(s | 1 << i) == r).fold(s, |m, i| m | 1 << i)
    }

    /// Checks normalisation, unit increments and local submodularity: on
    /// every subset for small grounds, on seeded random samples otherwise.
    pub fn validate(&self, seed: u64) -> Result<(), RainbowError> {
        if self.rank(0) != 0 {
            return Err(RainbowError::InvalidOracle("rank of the empty set is not 0".into()));
        }
        let n = self.ground.len();
        let full = self.full();
        let check = |s: Face| -> Result<(), RainbowError> {
            let r = self.rank(s);
            let free: Vec<usize> = Bits::new(full & !s).collect();
            let up: Vec<usize> = free.iter().map(|&a| self.rank(s | 1 << a)).collect();
            for (ia, &ra) in up.iter().enumerate() {
                if ra != r && ra != r + 1 {
                    return Err(RainbowError::InvalidOracle(format!("adding one element to {s:#x} changes rank by more than one")));
                }
                for (ib, &rb) in up.iter().enumerate().skip(ia + 1) {
                    if ra + rb < self.rank(s | 1 << free[ia] | 1 << free[ib]) + r {
                        return Err(RainbowError::InvalidOracle(format!("submodularity fails above {s:#x}")));
                    }
                }
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ORACLE_GROUND {
            for s in submasks(full) {
                check(s)?;
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_ORACLE_CHECKS {
                check(rng.gen::<u64>() & full)?;
            }
        }
        Ok(())
    }

    fn edges_of(&self, s: Face) -> EdgeSet {
        Bits::new(s).fold(EdgeSet::EMPTY, |e, i| {
            let (u, v) = self.ground[i].endpoints();
            e.with(u, v)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MatroidVerdict {
    Satisfied { matching: Vec<String> },
    Violation { rank: usize, flats_checked: usize },
}

impl MatroidVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, MatroidVerdict::Satisfied { .. })
    }
}

/// With `ρ(E)` large enough and every rank-2 flat carrying a `k`-matching,
/// looks for a `k`-matching independent in the matroid.
pub fn matroid_rainbow_check(oracle: &RankOracle, k: usize) -> Result<MatroidVerdict, RainbowError> {
    oracle.validate(0)?;
    let full = oracle.full();
    let all_edges = oracle.edges_of(full);
    let need = if is_bipartite_edges(all_edges) { (2 * k).saturating_sub(1) } else { (3 * k).saturating_sub(2) };
    let rank = oracle.rank(full);
    if rank < need {
        return Err(RainbowError::Hypothesis(format!("rank {rank} is below {need}")));
    }
    let n = oracle.ground().len();
    let mut flats: Vec<Face> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let pair = 1 << a | 1 << b;
            if oracle.rank(pair) == 2 {
                flats.push(oracle.closure(pair));
            }
        }
    }
    flats.sort_unstable();
    flats.dedup();
    for &f in &flats {
        let e = oracle.edges_of(f);
        if matching_number_on(e, e.support()) < k {
            return Err(RainbowError::Hypothesis(format!("a rank-2 flat has matching number below {k}")));
        }
    }
    let mut chosen = Vec::new();
    if independent_matching(oracle, 0, k, VertexSet::EMPTY, 0, &mut chosen) {
        Ok(MatroidVerdict::Satisfied { matching: chosen.iter().map(|&i| oracle.ground()[i].to_string()).collect() })
    } else {
        Ok(MatroidVerdict::Violation { rank, flats_checked: flats.len() })
    }
}

fn independent_matching(
    oracle: &RankOracle,
    from: usize,
    need: usize,
    used: VertexSet,
    set: Face,
    chosen: &mut Vec<usize>,
) -> bool {
    if need == 0 {
        return true;
    }
    for i in from..oracle.ground().len() {
        let (u, v) = oracle.ground()[i].endpoints();
        if used.contains(u) || used.contains(v) {
            continue;
        }
        let next = set | 1 << i;
        if oracle.rank(next) != next.count_ones() as usize {
            continue;
        }
        chosen.push(i);
        if independent_matching(oracle, i + 1, need - 1, used.with(u).with(v), next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rainbow::{verify_theorem, RainbowInstance};

    fn labelled(inst: &RainbowInstance) -> Vec<Element> {
        inst.sets()
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.lex_edges().into_iter().map(move |(u, v)| Element::labelled(u, v, i + 1)))
            .collect()
    }

    #[test]
    fn oracles_validate() {
        let ground: Vec<Element> = [(0, 1), (1, 2), (0, 2), (2, 3)].iter().map(|&(u, v)| Element::edge(u, v)).collect();
        RankOracle::free(ground.clone()).unwrap().validate(0).unwrap();
        let g = RankOracle::graphic(ground.clone()).unwrap();
        g.validate(0).unwrap();
        assert_eq!(g.rank(0b111), 2);
        let bad = RankOracle::from_fn(ground, |s| 2 * s.count_ones() as usize).unwrap();
        assert!(bad.validate(0).is_err());
    }

    #[test]
    fn partition_oracle_agrees_with_set_search() {
        let e1 = EdgeSet::from_pairs([(0, 1), (2, 3)]);
        let e2 = EdgeSet::from_pairs([(1, 2), (0, 3)]);
        let inst = RainbowInstance::on_union(4, vec![e1, e2, e1], 2).unwrap();
        let oracle = RankOracle::partition(labelled(&inst)).unwrap();
        let v = matroid_rainbow_check(&oracle, 2).unwrap();
        assert_eq!(v.is_satisfied(), verify_theorem(&inst).unwrap().is_satisfied());
    }

    #[test]
    fn free_matroid_takes_any_matching() {
        // Rank-2 flats are pairs, so the ground must be a matching itself.
        let ground: Vec<Element> = [(0, 1), (2, 3), (4, 5)].iter().map(|&(u, v)| Element::edge(u, v)).collect();
        let v = matroid_rainbow_check(&RankOracle::free(ground).unwrap(), 2).unwrap();
        assert!(v.is_satisfied());
    }

    #[test]
    fn graphic_oracle_search() {
        // K_4: the graphic matroid has rank 3, rank-2 flats are triangles
        // (matching number 1) or pairs of disjoint edges.
        let ground: Vec<Element> = EdgeSet::complete(VertexSet::range(4)).lex_edges().iter().map(|&(u, v)| Element::edge(u, v)).collect();
        let oracle = RankOracle::graphic(ground).unwrap();
        assert!(matches!(matroid_rainbow_check(&oracle, 2), Err(RainbowError::Hypothesis(_))));
        let k1 = matroid_rainbow_check(&oracle, 1).unwrap();
        assert!(k1.is_satisfied());
    }
}
