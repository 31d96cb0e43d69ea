//! Acyclic matchings on the perfect-matching, factor-critical and bipartite
//! factor-critical families.

use crate::complex::{enumerate_family, FamilySpec, DEFAULT_ENUMERATION_CAP};
use crate::graph::{
    edge_index, gallai_edmonds_on, has_perfect_matching_on, submasks, y_factor_critical_by_deletion, EdgeSet,
    GallaiEdmonds, VertexSet,
};

use super::combinators::{boolean_matching, cluster_union, join_matching, partition_by, projection_matching, ProjectionPart};
use super::{Construction, ElementMatching, MorseError, SetMask};

pub(super) fn members(spec: &FamilySpec) -> Result<Vec<SetMask>, MorseError> {
    Ok(enumerate_family(spec, DEFAULT_ENUMERATION_CAP)?.into_iter().map(|g| g.0).collect())
}

pub(super) fn bit(u: usize, v: usize) -> u32 {
    edge_index(u, v) as u32
}

pub(super) fn singleton(g: EdgeSet) -> Construction {
    Construction::singleton(g.0, g.0)
}

pub(super) fn least_edge(e: EdgeSet) -> Option<(usize, usize)> {
    e.lex_edges().first().copied()
}

/// The cell must be closed under toggling `e`; returns its complete matching
/// (or the matching leaving at most `spare` critical sets).
pub(super) fn toggle_cell(ground: EdgeSet, cell: &[SetMask], e: (usize, usize), spare: usize) -> Result<Construction, MorseError> {
    let split = boolean_matching(cell, bit(e.0, e.1));
    if split.f1.len() > spare {
        return Err(MorseError::Invariant(format!("cell is not closed under toggling {}-{}", e.0, e.1)));
    }
    Ok(Construction::new(ground.0, cell.to_vec(), split.matching))
}

pub(super) fn expect_family(c: &Construction, family: &[SetMask], what: &str) -> Result<(), MorseError> {
    if c.family != family {
        return Err(MorseError::Invariant(format!(
            "{what}: join has {} members, family has {}",
            c.family.len(),
            family.len()
        )));
    }
    Ok(())
}

/// Order on decompositions under which the decomposition map is monotone on
/// a family of graphs with a common matching number.
pub(super) fn ge_leq(a: &GallaiEdmonds, b: &GallaiEdmonds) -> bool {
    a.d_set().is_subset(b.d_set())
        && a.d_set().union(a.a_set).is_subset(b.d_set().union(b.a_set))
        && a.components.iter().all(|c| b.components.iter().any(|d| c.is_subset(*d)))
}

/// Matches each decomposition cell of `family` by `cell` and takes the union.
pub(super) fn ge_union(
    family: &[SetMask],
    support: VertexSet,
    mut cell: impl FnMut(&GallaiEdmonds, &[SetMask]) -> Result<Construction, MorseError>,
) -> Result<Construction, MorseError> {
    let cells = partition_by(family, |g| gallai_edmonds_on(EdgeSet(g), support));
    let mut built = Vec::with_capacity(cells.len());
    for (ge, members) in cells {
        let c = cell(&ge, &members)?;
        expect_family(&c, &members, "decomposition cell")?;
        built.push((ge, c));
    }
    cluster_union(built, ge_leq)
}

/// Splits off the complete matching for `e0`, runs `rest` on
/// `{G - e0 : G ∈ F_1}`, and adds `e0` back.
pub(super) fn reduce_on_edge(
    host: EdgeSet,
    family: &[SetMask],
    e0: (usize, usize),
    rest: impl FnOnce(&[SetMask]) -> Result<Construction, MorseError>,
) -> Result<Construction, MorseError> {
    let e = EdgeSet::single(e0.0, e0.1);
    let split = boolean_matching(family, bit(e0.0, e0.1));
    if split.f1.iter().any(|&g| g & e.0 == 0) {
        return Err(MorseError::Invariant("a remaining member misses the toggled edge".into()));
    }
    let reduced: Vec<SetMask> = split.f1.iter().map(|&g| g & !e.0).collect();
    let lifted = if reduced.is_empty() {
        Construction::default()
    } else {
        let mut inner = rest(&reduced)?;
        inner.ground &= !e.0;
        expect_family(&inner, &reduced, "reduced family")?;
        join_matching(&[inner, singleton(e)])?
    };
    split.combine(host.0, &lifted)
}

/// `e0 = vw ∉ H`, the lexicographically least edge with `deg_H(w) > 0`
/// when `H` has edges. Returns `(v, w)`.
fn choose_e0(vs: VertexSet, h: EdgeSet) -> Option<(usize, usize)> {
    for (a, b) in EdgeSet::complete(vs).difference(h).lex_edges() {
        if h.is_empty() || h.degree(b) > 0 {
            return Some((a, b));
        }
        if h.degree(a) > 0 {
            return Some((b, a));
        }
    }
    None
}

/// Components of `D` with those of `v` and `w` moved to the end.
fn order_components(ge: &GallaiEdmonds, v: usize, w: usize) -> Result<Vec<VertexSet>, MorseError> {
    let (cv, cw) = match (ge.component_of(v), ge.component_of(w)) {
        (Some(cv), Some(cw)) if cv != cw => (cv, cw),
        _ => return Err(MorseError::Invariant("endpoints of e0 are not in distinct components of D".into())),
    };
    let mut out: Vec<VertexSet> =
        ge.components.iter().enumerate().filter(|&(i, _)| i != cv && i != cw).map(|(_, &c)| c).collect();
    out.push(ge.components[cv]);
    out.push(ge.components[cw]);
    Ok(out)
}

/// Blocks `K_{D_t, {a}}` indexed by local edges `(t, offset + j)` for the
/// `j`-th vertex of `A`.
fn component_blocks(groups: &[VertexSet], a: VertexSet) -> Vec<ProjectionPart> {
    let offset = groups.len();
    let mut parts = Vec::new();
    for (t, &g) in groups.iter().enumerate() {
        for (j, x) in a.iter().enumerate() {
            parts.push(ProjectionPart {
                index: bit(t, offset + j),
                mask: EdgeSet::complete_bipartite(g, VertexSet::singleton(x)).0,
            });
        }
    }
    parts
}

/// `π(τ)` as a local edge set.
fn project_edges(parts: &[ProjectionPart], tau: EdgeSet) -> EdgeSet {
    EdgeSet(parts.iter().filter(|p| p.mask & tau.0 != 0).fold(0, |m, p| m | 1 << p.index))
}

/// Acyclic matching on `PM_H`: graphs on `vertices` containing `h` with a
/// perfect matching.
pub fn build_pm_matching(vertices: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    FamilySpec::Pm { vertices, h }.validate()?;
    if vertices.len() % 2 == 1 {
        return Err(MorseError::EmptyFamily);
    }
    pm(vertices, h)
}

fn pm(vs: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    let host = EdgeSet::complete(vs);
    if vs.is_empty() {
        return Ok(Construction::singleton(0, 0));
    }
    if h == host {
        return Ok(singleton(host));
    }
    let family = members(&FamilySpec::Pm { vertices: vs, h })?;
    let (v, w) = choose_e0(vs, h).expect("H is not complete");
    reduce_on_edge(host, &family, (v, w), |reduced| {
        ge_union(reduced, vs, |ge, cell| pm_cell(h, v, w, ge, cell))
    })
}

fn pm_cell(h: EdgeSet, v: usize, w: usize, ge: &GallaiEdmonds, cell: &[SetMask]) -> Result<Construction, MorseError> {
    let (a, c) = (ge.a_set, ge.c_set);
    let d = ge.d_set();
    let comps = order_components(ge, v, w)?;
    let toggles = EdgeSet::complete(a).union(EdgeSet::complete_bipartite(a, c)).difference(h);
    let ground = EdgeSet::complete(d.union(a).union(c));
    if let Some(e) = least_edge(toggles) {
        return toggle_cell(ground, cell, e, 0);
    }
    let mut parts = Vec::new();
    for &di in &comps {
        parts.push(fc(di, h.induced(di))?);
    }
    // The last two components share one index.
    let r = comps.len();
    let mut groups: Vec<VertexSet> = comps[..r - 2].to_vec();
    groups.push(comps[r - 2].union(comps[r - 1]));
    let blocks = component_blocks(&groups, a);
    let tau = h.between(d, a);
    let local_x = VertexSet::range(groups.len());
    let local_y = VertexSet::from_range(groups.len(), groups.len() + a.len());
    let q = bfc(local_x, local_y, VertexSet::EMPTY, project_edges(&blocks, tau))?;
    parts.push(projection_matching(&blocks, tau.0, &q)?);
    parts.push(pm(c, h.induced(c))?);
    parts.push(singleton(EdgeSet::complete(a)));
    parts.push(singleton(EdgeSet::complete_bipartite(a, c)));
    let joined = join_matching(&parts)?;
    expect_family(&joined, cell, "perfect-matching join")?;
    Ok(joined)
}

/// Acyclic matching on `FC_H`: factor-critical graphs on `vertices`
/// containing `h`. `|vertices|` must be odd.
pub fn build_fc_matching(vertices: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    FamilySpec::Fc { vertices, h }.validate()?;
    if vertices.len().is_multiple_of(2) {
        return Err(MorseError::Precondition("factor-critical families need an odd vertex count".into()));
    }
    fc(vertices, h)
}

fn fc(vs: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    let host = EdgeSet::complete(vs);
    if vs.len() == 1 {
        return Ok(Construction::singleton(0, 0));
    }
    if h == host {
        return Ok(singleton(host));
    }
    let family = members(&FamilySpec::Fc { vertices: vs, h })?;
    let (v, w) = choose_e0(vs, h).expect("H is not complete");
    reduce_on_edge(host, &family, (v, w), |reduced| {
        ge_union(reduced, vs, |ge, cell| fc_cell(h, v, w, ge, cell))
    })
}

fn fc_cell(h: EdgeSet, v: usize, w: usize, ge: &GallaiEdmonds, cell: &[SetMask]) -> Result<Construction, MorseError> {
    let (a, c) = (ge.a_set, ge.c_set);
    let d = ge.d_set();
    let comps = order_components(ge, v, w)?;
    let r = comps.len();
    if a.len() + 1 != r {
        return Err(MorseError::Invariant("expected |A| = r - 1".into()));
    }
    let ground = EdgeSet::complete(d.union(a).union(c));
    if let Some(e) = least_edge(EdgeSet::complete(a).difference(h)) {
        return toggle_cell(ground, cell, e, 0);
    }
    let mut parts = Vec::new();
    for &di in &comps {
        parts.push(fc(di, h.induced(di))?);
    }
    let blocks = component_blocks(&comps, a);
    let tau = h.between(d, a);
    let q = bfc(
        VertexSet::range(r),
        VertexSet::from_range(r, r + a.len()),
        VertexSet::range(r - 2),
        project_edges(&blocks, tau),
    )?;
    parts.push(projection_matching(&blocks, tau.0, &q)?);

    // A collapses to a single local vertex 0; C becomes 1..=|C|.
    let cs: Vec<usize> = c.iter().collect();
    let mut blocks2 = Vec::new();
    for (j, &cj) in cs.iter().enumerate() {
        blocks2.push(ProjectionPart {
            index: bit(0, j + 1),
            mask: EdgeSet::complete_bipartite(a, VertexSet::singleton(cj)).0,
        });
        for (i, &ci) in cs[..j].iter().enumerate() {
            blocks2.push(ProjectionPart { index: bit(i + 1, j + 1), mask: EdgeSet::single(ci, cj).0 });
        }
    }
    let tau2 = h.between(a, c).union(h.induced(c));
    let q2 = fc(VertexSet::range(cs.len() + 1), project_edges(&blocks2, tau2))?;
    parts.push(projection_matching(&blocks2, tau2.0, &q2)?);
    parts.push(singleton(EdgeSet::complete(a)));
    let joined = join_matching(&parts)?;
    expect_family(&joined, cell, "factor-critical join")?;
    Ok(joined)
}

/// Acyclic matching on `BFC_(X,Y,Z;H)`: `(Y,Z)`-factor-critical subgraphs of
/// `K_{X,Y}` containing `h`.
pub fn build_bfc_matching(x: VertexSet, y: VertexSet, z: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    FamilySpec::Bfc { x, y, z, h }.validate()?;
    bfc(x, y, z, h)
}

fn bfc(x: VertexSet, y: VertexSet, z: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    if x.is_empty() || y.is_empty() {
        return Ok(Construction::singleton(0, 0));
    }
    let host = EdgeSet::complete_bipartite(x, y);
    let family = members(&FamilySpec::Bfc { x, y, z, h })?;
    if family.is_empty() {
        return Err(MorseError::EmptyFamily);
    }
    let free = x.difference(z);
    let full = EdgeSet::complete_bipartite(free, y);
    if full.is_subset(h) {
        let inner = bfc(y, z, VertexSet::EMPTY, h.between(z, y))?;
        let joined = join_matching(&[inner, singleton(full)])?;
        expect_family(&joined, &family, "bipartite special case")?;
        return Ok(joined);
    }
    // e0 = vw with v ∈ Y, w ∈ X \ Z, preferring N_H(v) ≠ ∅.
    let candidates = full.difference(h).lex_edges();
    let orient = |(p, q): (usize, usize)| if y.contains(p) { (p, q) } else { (q, p) };
    let (v, w) = candidates
        .iter()
        .map(|&e| orient(e))
        .find(|&(v, _)| !h.neighbors(v).is_empty())
        .unwrap_or_else(|| orient(candidates[0]));
    reduce_on_edge(host, &family, (v.min(w), v.max(w)), |reduced| {
        ge_union(reduced, x.union(y), |ge, cell| bfc_cell(x, y, z, h, v, w, ge, cell))
    })
}

#[allow(clippy::too_many_arguments)]
fn bfc_cell(
    x: VertexSet,
    y: VertexSet,
    z: VertexSet,
    h: EdgeSet,
    v: usize,
    w: usize,
    ge: &GallaiEdmonds,
    cell: &[SetMask],
) -> Result<Construction, MorseError> {
    let (a, c) = (ge.a_set, ge.c_set);
    let d = ge.d_set();
    if !d.contains(w) || !d.is_subset(x) || !a.is_subset(y) || !c.contains(v) {
        return Err(MorseError::Invariant("unexpected decomposition in the bipartite reduction".into()));
    }
    let (cx, cy) = (c.intersection(x), c.intersection(y));
    let (zc, zd) = (z.intersection(c), z.intersection(d));
    let first = bfc(d, a, zd, h.between(d, a))?;

    let yc_host = EdgeSet::complete_bipartite(cx, y);
    let yc_h = h.between(cx, y);
    let cy_rest = cy.without(v);
    let yc_family: Vec<SetMask> = submasks(yc_host.difference(yc_h).0)
        .map(|m| EdgeSet(m).union(yc_h))
        .filter(|&g| {
            has_perfect_matching_on(g, c)
                && y_factor_critical_by_deletion(g.between(zc, y), y, zc)
                && (cy_rest.is_empty() || y_factor_critical_by_deletion(g.between(cx, cy_rest), cx, cy_rest))
        })
        .map(|g| g.0)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if yc_family.is_empty() {
        return Err(MorseError::Invariant("empty residual family in a non-empty cell".into()));
    }
    let av = a.with(v);
    let types = partition_by(&yc_family, |g| {
        let g = EdgeSet(g);
        (g.neighbors(v).intersection(zc), g.neighborhood(av).intersection(zc))
    });
    let mut built = Vec::new();
    for ((s, st), fam) in types {
        let c_type = type_cell(h, v, a, cx, cy_rest, zc, s, st, &fam)?;
        expect_family(&c_type, &fam, "type cell")?;
        built.push(((s, st), c_type));
    }
    let second = cluster_union(built, |p: &(VertexSet, VertexSet), q: &(VertexSet, VertexSet)| {
        p.0.is_subset(q.0) && p.1.is_subset(q.1)
    })?;
    let joined = join_matching(&[first, second])?;
    expect_family(&joined, cell, "bipartite cell join")?;
    Ok(joined)
}

#[allow(clippy::too_many_arguments)]
fn type_cell(
    h: EdgeSet,
    v: usize,
    a: VertexSet,
    cx: VertexSet,
    cy_rest: VertexSet,
    zc: VertexSet,
    s: VertexSet,
    st: VertexSet,
    fam: &[SetMask],
) -> Result<Construction, MorseError> {
    let t = st.difference(s);
    let r = zc.difference(st);
    let q = cx.difference(zc);
    let vs = VertexSet::singleton(v);

    // Edges at v.
    let hv = h.between(cx, vs);
    let nv = hv.neighbors(v);
    let base = EdgeSet::complete_bipartite(nv.union(s), vs);
    let free = EdgeSet::complete_bipartite(q.difference(nv), vs);
    let p_free: Vec<SetMask> = submasks(free.0).filter(|&m| m != 0 || !nv.union(s).is_empty()).collect();
    let p_free = match least_edge(free) {
        Some(e) => {
            let split = boolean_matching(&p_free, bit(e.0, e.1));
            Construction::new(free.0, p_free, split.matching)
        }
        None => Construction::new(0, p_free, ElementMatching::empty()),
    };
    let pv = join_matching(&[singleton(base), p_free])?;
    let pv_family: Vec<SetMask> = submasks(EdgeSet::complete_bipartite(cx, vs).0)
        .map(EdgeSet)
        .filter(|g| hv.is_subset(*g) && g.neighbors(v).intersection(zc) == s && !g.neighbors(v).is_empty())
        .map(|g| g.0)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    expect_family(&pv, &pv_family, "edges at v")?;

    // Edges between Z_C and A.
    let pa_host = EdgeSet::complete_bipartite(zc, a);
    let ha = h.between(zc, a);
    let pa_family: Vec<SetMask> = submasks(pa_host.difference(ha).0)
        .map(|m| EdgeSet(m).union(ha))
        .filter(|g| {
            let n = g.neighborhood(a).intersection(zc);
            t.is_subset(n) && n.is_subset(st) && (!q.is_empty() || !n.is_empty())
        })
        .map(|g| g.0)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let pa = if a.is_empty() {
        Construction::singleton(0, 0)
    } else {
        let na = ha.neighborhood(a).intersection(zc);
        match least_edge(EdgeSet::complete_bipartite(na.union(s), a).difference(ha)) {
            Some(e) => toggle_cell(pa_host, &pa_family, e, 1)?,
            None => {
                let rest = t.difference(na);
                let blocks: Vec<ProjectionPart> = rest
                    .iter()
                    .enumerate()
                    .map(|(i, u)| ProjectionPart {
                        index: i as u32,
                        mask: EdgeSet::complete_bipartite(VertexSet::singleton(u), a).0,
                    })
                    .collect();
                let all = (1u64 << blocks.len()) - 1;
                let lifted = projection_matching(&blocks, 0, &Construction::singleton(all, all))?;
                join_matching(&[singleton(EdgeSet::complete_bipartite(na, a)), lifted])?
            }
        }
    };
    expect_family(&pa, &pa_family, "edges between Z_C and A")?;

    // Edges between Q and A.
    let pq_host = EdgeSet::complete_bipartite(q, a);
    let hq = h.between(q, a);
    let pq = match least_edge(pq_host.difference(hq)) {
        Some(e) => {
            let fam: Vec<SetMask> = submasks(pq_host.difference(hq).0).map(|m| m | hq.0).collect();
            let mut fam = fam;
            fam.sort_unstable();
            toggle_cell(pq_host, &fam, e, 0)?
        }
        None => singleton(hq),
    };

    let rest = bfc(cx, cy_rest, r, h.between(cx, cy_rest))?;
    let joined = join_matching(&[pv, pa, pq, rest])?;
    expect_family(&joined, fam, "type join")?;
    Ok(joined)
}

pub(super) fn pm_part(vs: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    pm(vs, h)
}

pub(super) fn fc_part(vs: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    fc(vs, h)
}

pub(super) fn bfc_part(x: VertexSet, y: VertexSet, z: VertexSet, h: EdgeSet) -> Result<Construction, MorseError> {
    bfc(x, y, z, h)
}
