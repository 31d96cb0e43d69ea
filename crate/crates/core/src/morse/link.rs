//! Acyclic matchings on links of faces in matching complexes: graphs
//! containing a fixed `H` whose matching number stays below `k`.

use crate::complex::FamilySpec;
use crate::graph::{matching_number_on, EdgeSet, GallaiEdmonds, VertexSet};

use super::combinators::{boolean_matching, cluster_union, join_matching, partition_by, projection_matching, ProjectionPart};
use super::constructions::{
    bfc_part, bit, expect_family, fc_part, ge_union, least_edge, members, pm_part, singleton, toggle_cell,
};
use super::{Construction, MorseError, SetMask};

/// Least-labelled vertex of minimum `H`-degree.
fn min_degree_vertex(vs: VertexSet, h: EdgeSet) -> usize {
    vs.iter().min_by_key(|&u| (h.degree(u), u)).expect("non-empty vertex set")
}

/// The interval `[H, host]` matched on its least free edge.
fn interval(host: EdgeSet, h: EdgeSet, family: &[SetMask]) -> Result<Construction, MorseError> {
    match least_edge(host.difference(h)) {
        Some(e) => toggle_cell(host, family, e, 0),
        None => Ok(singleton(h)),
    }
}

fn check_link_h(h: EdgeSet, support: VertexSet, k: usize) -> Result<(), MorseError> {
    let nu = matching_number_on(h, support);
    if nu == 0 || nu >= k {
        return Err(MorseError::Precondition(format!("need 1 <= matching number of H < k, got {nu} and k = {k}")));
    }
    Ok(())
}

/// Splits the family at vertex `v` with candidate star `s`. Members whose
/// base `G \ S` admits an edge of `S` are matched fibrewise; the rest lose
/// their star at `v` and are handed to `rest`.
fn split_at_vertex(
    family: &[SetMask],
    s: EdgeSet,
    star: EdgeSet,
    rest: impl FnOnce(&[SetMask]) -> Result<Construction, MorseError>,
) -> Result<Construction, MorseError> {
    let fibres = partition_by(family, |g| g & !s.0);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (base, fibre) in fibres {
        let touched = fibre.iter().fold(0, |m, &g| m | g) & s.0;
        if touched == 0 {
            lower.extend(fibre);
            continue;
        }
        let e = least_edge(EdgeSet(touched)).expect("non-empty");
        let c = toggle_cell(EdgeSet(s.0 | base), &fibre, e, 0)?;
        upper.push((base, c));
    }
    let upper = cluster_union(upper, |a: &SetMask, b: &SetMask| a & !b == 0)?;
    lower.sort_unstable();
    let mut cells = Vec::new();
    if !upper.family.is_empty() {
        cells.push((0u8, upper));
    }
    if !lower.is_empty() {
        if lower.iter().any(|&g| g & star.0 != star.0) {
            return Err(MorseError::Invariant("a member lost its star".into()));
        }
        let stripped: Vec<SetMask> = lower.iter().map(|&g| g & !star.0).collect();
        let inner = rest(&stripped)?;
        expect_family(&inner, &stripped, "star-free part")?;
        cells.push((1u8, join_matching(&[inner, singleton(star)])?));
    }
    cluster_union(cells, |a, b| a <= b)
}

/// Blocks `K_{D_t, {a}}` for the `t`-th component and `j`-th vertex of `A`,
/// together with the projected `H`.
fn blocks_over(comps: &[VertexSet], a: VertexSet, h: EdgeSet) -> (Vec<ProjectionPart>, EdgeSet) {
    let r = comps.len();
    let mut parts = Vec::new();
    let mut local = EdgeSet::EMPTY;
    for (t, &d) in comps.iter().enumerate() {
        for (j, x) in a.iter().enumerate() {
            let mask = EdgeSet::complete_bipartite(d, VertexSet::singleton(x));
            parts.push(ProjectionPart { index: bit(t, r + j), mask: mask.0 });
            if !mask.intersection(h).is_empty() {
                local = local.with(t, r + j);
            }
        }
    }
    (parts, local)
}

/// Acyclic matching on graphs on `vertices` containing `h` with matching
/// number below `k`.
pub fn build_link_matching_complete(vertices: VertexSet, h: EdgeSet, k: usize) -> Result<Construction, MorseError> {
    let spec = FamilySpec::NmlinkComplete { vertices, h, k };
    spec.validate()?;
    check_link_h(h, vertices, k)?;
    let host = EdgeSet::complete(vertices);
    let family = members(&spec)?;
    if vertices.len() < 2 * k {
        return interval(host, h, &family);
    }
    let v = min_degree_vertex(vertices, h);
    let rest_v = vertices.without(v);
    let nv = h.neighbors(v);
    let s = EdgeSet::complete_bipartite(rest_v.difference(nv), VertexSet::singleton(v));
    let star = EdgeSet::complete_bipartite(nv, VertexSet::singleton(v));
    let hr = h.induced(rest_v);
    split_at_vertex(&family, s, star, |stripped| {
        ge_union(stripped, rest_v, |ge, cell| complete_cell(hr, ge, cell))
    })
}

fn complete_cell(h: EdgeSet, ge: &GallaiEdmonds, cell: &[SetMask]) -> Result<Construction, MorseError> {
    let (a, c) = (ge.a_set, ge.c_set);
    let d = ge.d_set();
    let ground = EdgeSet::complete(d.union(a).union(c));
    let toggles = EdgeSet::complete(a).union(EdgeSet::complete_bipartite(a, c)).difference(h);
    if let Some(e) = least_edge(toggles) {
        return toggle_cell(ground, cell, e, 0);
    }
    let mut parts = Vec::new();
    for &di in &ge.components {
        parts.push(fc_part(di, h.induced(di))?);
    }
    let r = ge.components.len();
    let tau = h.between(d, a);
    let (blocks, local) = blocks_over(&ge.components, a, tau);
    let q = bfc_part(VertexSet::range(r), VertexSet::from_range(r, r + a.len()), VertexSet::EMPTY, local)?;
    parts.push(projection_matching(&blocks, tau.0, &q)?);
    parts.push(pm_part(c, h.induced(c))?);
    parts.push(singleton(EdgeSet::complete(a)));
    parts.push(singleton(EdgeSet::complete_bipartite(a, c)));
    let joined = join_matching(&parts)?;
    expect_family(&joined, cell, "link cell join")?;
    Ok(joined)
}

/// Acyclic matching on subgraphs of `K_{x,y}` containing `h` with matching
/// number below `k`.
pub fn build_link_matching_bipartite(x: VertexSet, y: VertexSet, h: EdgeSet, k: usize) -> Result<Construction, MorseError> {
    let spec = FamilySpec::NmlinkBipartite { x, y, h, k };
    spec.validate()?;
    check_link_h(h, x.union(y), k)?;
    let host = EdgeSet::complete_bipartite(x, y);
    let family = members(&spec)?;
    if x.len().min(y.len()) < k || h == host {
        return interval(host, h, &family);
    }
    let v = min_degree_vertex(x.union(y), h);
    let (x, y) = if x.contains(v) { (y, x) } else { (x, y) };
    let y_rest = y.without(v);
    let nv = h.neighbors(v);
    let s = EdgeSet::complete_bipartite(x.difference(nv), VertexSet::singleton(v));
    let star = EdgeSet::complete_bipartite(nv, VertexSet::singleton(v));
    let hr = h.between(x, y_rest);
    split_at_vertex(&family, s, star, |stripped| {
        ge_union(stripped, x.union(y_rest), |ge, cell| {
            if nv.is_empty() {
                let a = ge.a_set;
                let c = bfc_part(x, a, VertexSet::EMPTY, hr.between(x, a))?;
                expect_family(&c, cell, "bipartite link cell")?;
                Ok(c)
            } else {
                bipartite_cell(x, hr, ge, cell)
            }
        })
    })
}

fn bipartite_cell(x: VertexSet, h: EdgeSet, ge: &GallaiEdmonds, cell: &[SetMask]) -> Result<Construction, MorseError> {
    let d = ge.d_set();
    let (dx, ax, cx) = (d.intersection(x), ge.a_set.intersection(x), ge.c_set.intersection(x));
    let (dy, ay, cy) = (d.difference(x), ge.a_set.difference(x), ge.c_set.difference(x));
    let ground = EdgeSet::complete_bipartite(x, d.union(ge.a_set).union(ge.c_set).difference(x));
    let forced = EdgeSet::complete_bipartite(ax.union(cx), ay).union(EdgeSet::complete_bipartite(ax, cy));
    if let Some(e) = least_edge(forced.difference(h)) {
        return toggle_cell(ground, cell, e, 0);
    }
    let inner = EdgeSet::complete_bipartite(cx, cy);
    let c_family: Vec<SetMask> = {
        let mut f: Vec<SetMask> = cell.iter().map(|&g| g & inner.0).collect();
        f.sort_unstable();
        f.dedup();
        f
    };
    let c_part = match c_family.as_slice() {
        [only] => Construction::singleton(inner.0, *only),
        _ => {
            let e = least_edge(inner.difference(h))
                .ok_or_else(|| MorseError::Invariant("no free edge inside C".into()))?;
            let split = boolean_matching(&c_family, bit(e.0, e.1));
            if !split.f1.is_empty() {
                return Err(MorseError::Invariant("edges inside C are not free".into()));
            }
            Construction::new(inner.0, c_family, split.matching)
        }
    };
    let parts = [
        bfc_part(dx, ay, VertexSet::EMPTY, h.between(dx, ay))?,
        bfc_part(dy, ax, VertexSet::EMPTY, h.between(dy, ax))?,
        singleton(forced),
        c_part,
    ];
    let joined = join_matching(&parts)?;
    expect_family(&joined, cell, "bipartite link cell join")?;
    Ok(joined)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn complete_k4() {
        let c = build_link_matching_complete(VertexSet::range(4), EdgeSet::single(0, 1), 2).unwrap();
        c.check().unwrap();
        assert!(c.max_critical_size().unwrap() <= 3);
    }

    #[test]
    fn bipartite_small() {
        let c = build_link_matching_bipartite(vs(&[0, 1]), vs(&[2, 3]), EdgeSet::single(0, 2), 2).unwrap();
        c.check().unwrap();
        assert!(c.max_critical_size().unwrap() <= 2);
        let c = build_link_matching_bipartite(vs(&[0, 1, 2]), vs(&[3, 4, 5]), EdgeSet::single(0, 3), 2).unwrap();
        c.check().unwrap();
        assert!(c.max_critical_size().unwrap() <= 2);
    }

    #[test]
    fn rejects_bad_h() {
        assert!(build_link_matching_complete(VertexSet::range(4), EdgeSet::EMPTY, 2).is_err());
        let m = EdgeSet::from_pairs([(0, 1), (2, 3)]);
        assert!(build_link_matching_complete(VertexSet::range(4), m, 2).is_err());
    }
}
