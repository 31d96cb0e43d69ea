use std::collections::{BTreeMap, HashMap};

use crate::graph::{submasks, Bits};

use super::{validate_matching, Construction, ElementMatching, MorseError, SetMask};

/// Split of a family by toggling one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanSplit {
    pub element: u32,
    /// Complete matching on `f0`: pairs `(σ - e, σ + e)`.
    pub matching: ElementMatching,
    /// Members `σ` with both `σ - e` and `σ + e` in the family.
    pub f0: Vec<SetMask>,
    pub f1: Vec<SetMask>,
}

impl BooleanSplit {
    /// Combines with a matching on `f1`.
    pub fn combine(&self, ground: SetMask, rest: &Construction) -> Result<Construction, MorseError> {
        if rest.family != self.f1 {
            return Err(MorseError::Invariant("matching on the remainder covers a different family".into()));
        }
        let mut family = self.f0.clone();
        family.extend_from_slice(&rest.family);
        Ok(Construction::new(ground | rest.ground, family, self.matching.union(&rest.matching)))
    }
}

/// Pairs every member with its toggle by `element` when both lie in the family.
pub fn boolean_matching(family: &[SetMask], element: u32) -> BooleanSplit {
    let bit = 1u64 << element;
    let mut sorted = family.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let has = |s: SetMask| sorted.binary_search(&s).is_ok();
    let mut pairs = Vec::new();
    let (mut f0, mut f1) = (Vec::new(), Vec::new());
    for &s in &sorted {
        if has(s & !bit) && has(s | bit) {
            f0.push(s);
            if s & bit == 0 {
                pairs.push((s, s | bit));
            }
        } else {
            f1.push(s);
        }
    }
    BooleanSplit { element, matching: ElementMatching::new(pairs), f0, f1 }
}

/// Groups a family by key, preserving sorted order inside each group.
pub fn partition_by<K: Ord>(family: &[SetMask], key: impl Fn(SetMask) -> K) -> BTreeMap<K, Vec<SetMask>> {
    let mut out: BTreeMap<K, Vec<SetMask>> = BTreeMap::new();
    for &s in family {
        out.entry(key(s)).or_default().push(s);
    }
    out
}

/// Union of matchings on the fibres of a monotone map.
///
/// `leq` is the order on keys. Monotonicity is checked on every covering pair
/// `σ ⊂ σ + e` inside the union, and the result is checked for cycles.
pub fn cluster_union<K>(cells: Vec<(K, Construction)>, leq: impl Fn(&K, &K) -> bool) -> Result<Construction, MorseError> {
    let mut owner: HashMap<SetMask, usize> = HashMap::new();
    let mut ground = 0;
    for (i, (_, c)) in cells.iter().enumerate() {
        let r = validate_matching(&c.family, &c.matching)?;
        if !r.valid {
            return Err(MorseError::InvalidMatching(r.problems.join("; ")));
        }
        ground |= c.ground;
        for &s in &c.family {
            if owner.insert(s, i).is_some() {
                return Err(MorseError::OverlappingParts(format!("{s:#x} lies in two cells")));
            }
        }
    }
    for (&s, &i) in &owner {
        for b in Bits::new(ground & !s) {
            if let Some(&j) = owner.get(&(s | 1 << b)) {
                if i != j && !leq(&cells[i].0, &cells[j].0) {
                    return Err(MorseError::NotMonotone { lower: s, upper: s | 1 << b });
                }
            }
        }
    }
    let mut family = Vec::with_capacity(owner.len());
    let mut matching = ElementMatching::empty();
    for (_, c) in &cells {
        family.extend_from_slice(&c.family);
        matching = matching.union(&c.matching);
    }
    let out = Construction::new(ground, family, matching);
    out.check()?;
    Ok(out)
}

/// All unions `a_1 ∪ .. ∪ a_m` with `a_i` from the `i`-th list.
fn join_sets<'a>(lists: impl IntoIterator<Item = &'a [SetMask]>) -> Vec<SetMask> {
    let mut acc = vec![0u64];
    for l in lists {
        acc = acc.iter().flat_map(|&a| l.iter().map(move |&b| a | b)).collect();
    }
    acc
}

/// Matching on the join of families over disjoint grounds.
///
/// Parts are processed in increasing order of their number of critical sets;
/// part `i` contributes its pairs joined with critical sets of the earlier
/// parts and arbitrary members of the later ones. The critical sets of the
/// result are exactly the joins of the parts' critical sets.
pub fn join_matching(parts: &[Construction]) -> Result<Construction, MorseError> {
    let mut seen = 0u64;
    for (i, p) in parts.iter().enumerate() {
        if p.ground & seen != 0 {
            return Err(MorseError::OverlappingParts(format!("ground of part {i} meets an earlier part")));
        }
        seen |= p.ground;
        if p.family.is_empty() {
            return Err(MorseError::EmptyJoinPart(i));
        }
        if p.family.iter().any(|&s| s & !p.ground != 0) {
            return Err(MorseError::Precondition(format!("part {i} has a member outside its ground")));
        }
        let r = validate_matching(&p.family, &p.matching)?;
        if !r.valid {
            return Err(MorseError::InvalidMatching(r.problems.join("; ")));
        }
    }
    let crit: Vec<Vec<SetMask>> = parts.iter().map(Construction::critical).collect();
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by_key(|&i| crit[i].len());
    let mut pairs = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if parts[i].matching.is_empty() {
            continue;
        }
        let before = join_sets(order[..pos].iter().map(|&j| crit[j].as_slice()));
        if before.is_empty() {
            break;
        }
        let after = join_sets(order[pos + 1..].iter().map(|&j| parts[j].family.as_slice()));
        for &a in &before {
            for &(s, t) in parts[i].matching.pairs() {
                for &b in &after {
                    pairs.push((a | s | b, a | t | b));
                }
            }
        }
    }
    let family = join_sets(parts.iter().map(|p| p.family.as_slice()));
    let out = Construction::new(seen, family, ElementMatching::new(pairs));
    let mut expected = join_sets(crit.iter().map(|c| c.as_slice()));
    expected.sort_unstable();
    if out.critical() != expected {
        return Err(MorseError::Invariant("join critical sets differ from the join of critical sets".into()));
    }
    Ok(out)
}

/// One block `E_i` of a ground partition, indexed by bit `index` of the
/// projected ground.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProjectionPart {
    pub index: u32,
    pub mask: SetMask,
}

/// Largest ground on which the lifted family is re-derived by brute force.
const PROJECTION_RECHECK_BITS: u32 = 22;

/// Lifts a matching on a projected family `Q` to
/// `F = {σ : π(σ) ∈ Q, τ ⊆ σ}`, where `π(σ)` is the set of blocks `σ` meets.
///
/// Every member of `Q` must contain `π(τ)`. Critical sets of the result map
/// injectively into those of `q`, with `|σ| = |π(σ)| - |π(τ)| + |τ|`.
pub fn projection_matching(parts: &[ProjectionPart], tau: SetMask, q: &Construction) -> Result<Construction, MorseError> {
    let mut block: HashMap<u32, SetMask> = HashMap::new();
    let mut ground = 0u64;
    for p in parts {
        if p.mask == 0 {
            return Err(MorseError::Precondition(format!("block {} is empty", p.index)));
        }
        if p.mask & ground != 0 || block.insert(p.index, p.mask).is_some() {
            return Err(MorseError::OverlappingParts(format!("block {} overlaps another", p.index)));
        }
        ground |= p.mask;
    }
    for i in Bits::new(q.ground) {
        if !block.contains_key(&(i as u32)) {
            return Err(MorseError::Precondition(format!("projected element {i} has no block")));
        }
    }
    if tau & !ground != 0 {
        return Err(MorseError::Precondition("τ is not inside the partitioned ground".into()));
    }
    let project = |s: SetMask| -> SetMask {
        block.iter().filter(|(_, &m)| m & s != 0).fold(0, |acc, (&i, _)| acc | 1 << i)
    };
    let tau_proj = project(tau);
    if let Some(&g) = q.family.iter().find(|&&g| g & tau_proj != tau_proj) {
        return Err(MorseError::Precondition(format!("projected member {g:#x} misses π(τ)")));
    }
    let r = validate_matching(&q.family, &q.matching)?;
    if !r.valid {
        return Err(MorseError::InvalidMatching(r.problems.join("; ")));
    }

    // P(E_i, τ) with its matching, on ground E_i \ τ (or E_i when disjoint from τ).
    let local = |i: u32| -> Construction {
        let e = block[&i];
        let free = e & !tau;
        let least = 1u64.checked_shl(free.trailing_zeros()).unwrap_or(0);
        if e & tau == 0 {
            let family: Vec<SetMask> = submasks(e).filter(|&s| s != 0).collect();
            let pairs = family.iter().filter(|&&s| s & least == 0).map(|&s| (s, s | least)).collect();
            Construction::new(e, family, ElementMatching::new(pairs))
        } else if free != 0 {
            let family: Vec<SetMask> = submasks(free).collect();
            let pairs = family.iter().filter(|&&s| s & least == 0).map(|&s| (s, s | least)).collect();
            Construction::new(free, family, ElementMatching::new(pairs))
        } else {
            Construction::singleton(0, 0)
        }
    };
    let fibre = |gamma: SetMask| -> Vec<Construction> {
        let mut v: Vec<Construction> = Bits::new(gamma).map(|i| local(i as u32)).collect();
        v.push(Construction::singleton(tau, tau));
        v
    };

    let mut family = Vec::new();
    let mut matching = ElementMatching::empty();
    let mut total = 0usize;
    for &(g1, g2) in q.matching.pairs() {
        let i = (g2 & !g1).trailing_zeros();
        let e = block[&i];
        let base = join_matching(&fibre(g1))?;
        let base = Construction::new(base.ground, base.family, ElementMatching::empty());
        let least = 1u64 << e.trailing_zeros();
        let cube: Vec<SetMask> = submasks(e).collect();
        let pairs = cube.iter().filter(|&&s| s & least == 0).map(|&s| (s, s | least)).collect();
        let cube = Construction::new(e, cube, ElementMatching::new(pairs));
        let x = join_matching(&[cube, base])?;
        total += x.family.len();
        family.extend_from_slice(&x.family);
        matching = matching.union(&x.matching);
    }
    for gamma in q.critical() {
        let x = join_matching(&fibre(gamma))?;
        total += x.family.len();
        family.extend_from_slice(&x.family);
        matching = matching.union(&x.matching);
    }
    let out = Construction::new(ground, family, matching);
    if out.family.len() != total {
        return Err(MorseError::Invariant("projection fibres overlap".into()));
    }
    if ground.count_ones() <= PROJECTION_RECHECK_BITS {
        let direct: Vec<SetMask> = submasks(ground)
            .filter(|&s| s & tau == tau && q.family.binary_search(&project(s)).is_ok())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if direct != out.family {
            return Err(MorseError::Invariant("lifted family differs from {σ : π(σ) ∈ Q, τ ⊆ σ}".into()));
        }
    }
    let q_crit = q.critical();
    let mut images = Vec::new();
    for s in out.critical() {
        let p = project(s);
        if q_crit.binary_search(&p).is_err() {
            return Err(MorseError::Invariant(format!("critical {s:#x} projects to a matched set")));
        }
        let expect = p.count_ones() as i64 - tau_proj.count_ones() as i64 + tau.count_ones() as i64;
        if s.count_ones() as i64 != expect {
            return Err(MorseError::Invariant(format!("critical {s:#x} has the wrong size")));
        }
        images.push(p);
    }
    let n = images.len();
    images.sort_unstable();
    images.dedup();
    if images.len() != n {
        return Err(MorseError::Invariant("projection is not injective on critical sets".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::is_acyclic;

    #[test]
    fn boolean_examples() {
        let s = boolean_matching(&[0, 1], 0);
        assert_eq!(s.f0, vec![0, 1]);
        assert_eq!(s.matching.pairs(), &[(0, 1)]);
        // {∅, {e}, {f}} with e = bit 0, f = bit 1.
        let s = boolean_matching(&[0, 1, 2], 0);
        assert_eq!(s.f0, vec![0, 1]);
        assert_eq!(s.f1, vec![2]);
    }

    #[test]
    fn join_of_empty_matchings_keeps_everything() {
        let a = Construction::new(0b011, vec![0, 1, 2], ElementMatching::empty());
        let b = Construction::new(0b100, vec![0, 4], ElementMatching::empty());
        let j = join_matching(&[a, b]).unwrap();
        assert_eq!(j.family.len(), 6);
        assert_eq!(j.critical().len(), 6);
    }

    #[test]
    fn join_with_complete_part_is_complete() {
        let cube = Construction::new(0b1, vec![0, 1], ElementMatching::new(vec![(0, 1)]));
        let b = Construction::new(0b110, vec![0, 2, 6], ElementMatching::empty());
        let j = join_matching(&[b, cube]).unwrap();
        assert!(j.critical().is_empty());
        assert!(is_acyclic(&j.family, &j.matching).0);
        let empty = Construction::new(0b1000, vec![], ElementMatching::empty());
        assert_eq!(join_matching(&[empty]), Err(MorseError::EmptyJoinPart(0)));
    }

    #[test]
    fn cluster_rejects_non_monotone_keys() {
        let a = Construction::new(1, vec![0], ElementMatching::empty());
        let b = Construction::new(1, vec![1], ElementMatching::empty());
        // Key 1 below key 0 while ∅ ⊂ {e}.
        let r = cluster_union(vec![(1u8, a.clone()), (0u8, b.clone())], |x, y| x <= y);
        assert!(matches!(r, Err(MorseError::NotMonotone { .. })));
        let ok = cluster_union(vec![(0u8, a), (1u8, b)], |x, y| x <= y).unwrap();
        assert_eq!(ok.family, vec![0, 1]);
    }

    #[test]
    fn projection_examples() {
        // Bijective blocks lift the matching unchanged.
        let q = Construction::new(0b11, vec![0, 1, 2, 3], ElementMatching::new(vec![(0, 1), (2, 3)]));
        let parts = [ProjectionPart { index: 0, mask: 0b01 }, ProjectionPart { index: 1, mask: 0b10 }];
        let lifted = projection_matching(&parts, 0, &q).unwrap();
        assert_eq!(lifted.family, q.family);
        assert_eq!(lifted.matching, q.matching);

        // Q = {{i}}, |E_i| = 2, τ = ∅: one critical of size one.
        let q = Construction::singleton(0b1, 0b1);
        let parts = [ProjectionPart { index: 0, mask: 0b110 }];
        let lifted = projection_matching(&parts, 0, &q).unwrap();
        assert_eq!(lifted.family, vec![0b010, 0b100, 0b110]);
        assert_eq!(lifted.critical(), vec![0b010]);

        // Members of Q must contain π(τ).
        let q = Construction::new(0b1, vec![0, 1], ElementMatching::empty());
        assert!(matches!(projection_matching(&parts, 0b010, &q), Err(MorseError::Precondition(_))));
    }
}
