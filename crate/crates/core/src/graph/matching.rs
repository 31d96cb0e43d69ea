//! Matching number, perfect matchings and the factor-criticality predicates.
//!
//! Everything here works on an [`EdgeSet`] restricted to a vertex support,
//! which is how the Morse constructions see their graphs.

use super::sets::{Bits, EdgeSet, VertexSet, MAX_VERTICES};

type Adj = [u32; MAX_VERTICES];

fn restricted_adjacency(edges: EdgeSet, support: VertexSet) -> Adj {
    let mut adj = edges.adjacency();
    for (v, a) in adj.iter_mut().enumerate() {
        *a = if support.contains(v) { *a & support.0 } else { 0 };
    }
    adj
}

fn active_vertices(adj: &Adj, mask: u32) -> u32 {
    let mut active = 0u32;
    for v in Bits::new(mask as u64) {
        if adj[v] & mask != 0 {
            active |= 1 << v;
        }
    }
    active
}

fn greedy(adj: &Adj, mut mask: u32) -> usize {
    let mut size = 0;
    loop {
        let active = active_vertices(adj, mask);
        if active == 0 {
            return size;
        }
        // Match a vertex of least remaining degree first.
        let u = Bits::new(active as u64)
            .min_by_key(|&v| (adj[v] & mask).count_ones())
            .unwrap();
        let w = (adj[u] & mask).trailing_zeros() as usize;
        mask &= !(1 << u) & !(1 << w);
        size += 1;
    }
}

fn branch(adj: &Adj, mask: u32, cur: usize, best: &mut usize, path: &mut Vec<(usize, usize)>, best_path: &mut Option<Vec<(usize, usize)>>) {
    let active = active_vertices(adj, mask);
    if cur + active.count_ones() as usize / 2 <= *best {
        return;
    }
    if active == 0 {
        *best = cur;
        if best_path.is_some() {
            *best_path = Some(path.clone());
        }
        return;
    }
    let u = active.trailing_zeros() as usize;
    let rest = active & !(1 << u);
    for w in Bits::new((adj[u] & rest) as u64) {
        path.push((u, w));
        branch(adj, rest & !(1 << w), cur + 1, best, path, best_path);
        path.pop();
    }
    branch(adj, rest, cur, best, path, best_path);
}

/// `ν(G[support])`.
pub fn matching_number_on(edges: EdgeSet, support: VertexSet) -> usize {
    let adj = restricted_adjacency(edges, support);
    let mut best = greedy(&adj, support.0);
    branch(&adj, support.0, 0, &mut best, &mut Vec::new(), &mut None);
    best
}

/// A maximum matching of `G[support]`.
pub fn maximum_matching_on(edges: EdgeSet, support: VertexSet) -> EdgeSet {
    let adj = restricted_adjacency(edges, support);
    let mut best = 0;
    let mut best_path = Some(Vec::new());
    branch(&adj, support.0, 0, &mut best, &mut Vec::new(), &mut best_path);
    EdgeSet::from_pairs(best_path.unwrap())
}

/// Every matching of `G[support]` with exactly `size` edges.
pub fn matchings_of_size(edges: EdgeSet, support: VertexSet, size: usize) -> Vec<EdgeSet> {
    fn rec(adj: &Adj, mask: u32, need: usize, cur: EdgeSet, out: &mut Vec<EdgeSet>) {
        if need == 0 {
            out.push(cur);
            return;
        }
        let active = active_vertices(adj, mask);
        if (active.count_ones() as usize) < 2 * need {
            return;
        }
        let u = active.trailing_zeros() as usize;
        let rest = active & !(1 << u);
        for w in Bits::new((adj[u] & rest) as u64) {
            rec(adj, rest & !(1 << w), need - 1, cur.with(u, w), out);
        }
        rec(adj, rest, need, cur, out);
    }
    let adj = restricted_adjacency(edges, support);
    let mut out = Vec::new();
    rec(&adj, support.0, size, EdgeSet::EMPTY, &mut out);
    out.sort_unstable();
    out
}

fn perfect(adj: &Adj, mask: u32) -> bool {
    if mask == 0 {
        return true;
    }
    if mask.count_ones() % 2 == 1 {
        return false;
    }
    let u = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << u);
    Bits::new((adj[u] & rest) as u64).any(|w| perfect(adj, rest & !(1 << w)))
}

/// Whether `G[support]` has a matching covering all of `support`.
pub fn has_perfect_matching_on(edges: EdgeSet, support: VertexSet) -> bool {
    let adj = restricted_adjacency(edges, support);
    perfect(&adj, support.0)
}

/// Whether `G[support] - v` has a perfect matching for every `v` in `support`.
pub fn is_factor_critical_on(edges: EdgeSet, support: VertexSet) -> bool {
    if support.len().is_multiple_of(2) {
        return false;
    }
    let adj = restricted_adjacency(edges, support);
    support.iter().all(|v| perfect(&adj, support.0 & !(1 << v)))
}

fn covers(adj: &Adj, need: u32, avail: u32) -> bool {
    if need == 0 {
        return true;
    }
    let y = need.trailing_zeros() as usize;
    let rest = need & !(1 << y);
    Bits::new((adj[y] & avail) as u64).any(|x| covers(adj, rest, avail & !(1 << x)))
}

/// Whether the bipartite graph `G[x, y]` has a matching covering `y`.
pub fn covers_side(edges: EdgeSet, x: VertexSet, y: VertexSet) -> bool {
    let adj = edges.between(x, y).adjacency();
    covers(&adj, y.0, x.0)
}

/// Deletion form: for every `x` in `x_side`, `G - x` has a matching covering `y_side`.
///
/// With `x_side` empty and `y_side` non-empty this follows the Hall form and
/// answers `false`; `|X| > |Y|` is necessary whenever `Y` is non-empty.
pub fn y_factor_critical_by_deletion(edges: EdgeSet, x_side: VertexSet, y_side: VertexSet) -> bool {
    if y_side.is_empty() {
        return true;
    }
    if x_side.is_empty() {
        return false;
    }
    let adj = edges.between(x_side, y_side).adjacency();
    x_side.iter().all(|x| covers(&adj, y_side.0, x_side.0 & !(1 << x)))
}

/// Hall-surplus form: `|N(Y')| > |Y'|` for every non-empty `Y' ⊆ y_side`.
pub fn y_factor_critical_by_hall(edges: EdgeSet, x_side: VertexSet, y_side: VertexSet) -> bool {
    let adj = edges.between(x_side, y_side).adjacency();
    let ys: Vec<usize> = y_side.iter().collect();
    (1u32..1 << ys.len()).all(|sub| {
        let mut nbrs = 0u32;
        for (i, &y) in ys.iter().enumerate() {
            if sub >> i & 1 == 1 {
                nbrs |= adj[y];
            }
        }
        (nbrs & x_side.0).count_ones() > sub.count_ones()
    })
}

/// Size condition met by every `(Y,Z)`-factor-critical graph.
pub fn yz_sizes_admissible(x: usize, y: usize, z: usize) -> bool {
    (y == 0 || x > y) && (z == 0 || y > z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(n: usize) -> VertexSet {
        VertexSet::range(n)
    }

    fn cycle(n: usize) -> EdgeSet {
        EdgeSet::from_pairs((0..n).map(|i| (i, (i + 1) % n)))
    }

    fn brute_nu(edges: EdgeSet) -> usize {
        let list: Vec<_> = edges.iter().collect();
        let mut best = 0;
        for mask in 0u32..1 << list.len() {
            let mut used = 0u32;
            let mut ok = true;
            for (i, &(a, b)) in list.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if used >> a & 1 == 1 || used >> b & 1 == 1 {
                        ok = false;
                        break;
                    }
                    used |= 1 << a | 1 << b;
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn matching_numbers_of_small_graphs() {
        assert_eq!(matching_number_on(EdgeSet::EMPTY, all(5)), 0);
        assert_eq!(matching_number_on(EdgeSet::complete(all(4)), all(4)), 2);
        assert_eq!(matching_number_on(cycle(5), all(5)), 2);
    }

    #[test]
    fn matching_number_agrees_with_subset_enumeration() {
        for g in 0u64..1 << 10 {
            let e = EdgeSet(g);
            assert_eq!(matching_number_on(e, all(5)), brute_nu(e), "{e:?}");
        }
    }

    #[test]
    fn certificate_is_a_maximum_matching() {
        for g in (0u64..1 << 15).step_by(7) {
            let e = EdgeSet(g);
            let m = maximum_matching_on(e, all(6));
            assert!(m.is_subset(e));
            assert_eq!(m.len(), m.support().len() / 2);
            assert_eq!(m.len(), matching_number_on(e, all(6)));
        }
    }

    #[test]
    fn c5_has_five_maximum_matchings() {
        let ms = matchings_of_size(cycle(5), all(5), 2);
        assert_eq!(ms.len(), 5);
    }

    #[test]
    fn perfect_matching_and_factor_criticality() {
        assert!(has_perfect_matching_on(EdgeSet::EMPTY, VertexSet::EMPTY));
        assert!(has_perfect_matching_on(cycle(4), all(4)));
        let p3 = EdgeSet::from_pairs([(0, 1), (1, 2)]);
        assert!(!has_perfect_matching_on(p3, all(3)));
        assert!(is_factor_critical_on(EdgeSet::EMPTY, VertexSet::singleton(3)));
        assert!(is_factor_critical_on(cycle(5), all(5)));
        assert!(!is_factor_critical_on(cycle(4), all(4)));
    }

    #[test]
    fn y_factor_critical_examples() {
        let x = VertexSet::from_iter([0, 1]);
        let y = VertexSet::singleton(2);
        assert!(y_factor_critical_by_deletion(EdgeSet::EMPTY, x, VertexSet::EMPTY));
        let k21 = EdgeSet::complete_bipartite(x, y);
        assert!(y_factor_critical_by_deletion(k21, x, y));
        assert!(y_factor_critical_by_hall(k21, x, y));
        let y2 = VertexSet::from_iter([2, 3]);
        let pm = EdgeSet::from_pairs([(0, 2), (1, 3)]);
        assert!(!y_factor_critical_by_deletion(pm, x, y2));
        assert!(!y_factor_critical_by_hall(pm, x, y2));
    }
}
