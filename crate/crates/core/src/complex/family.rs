use serde::{Deserialize, Serialize};

use crate::graph::{
    has_perfect_matching_on, is_factor_critical_on, matching_number_on, submasks, yz_factor_critical_on,
    EdgeSet, VertexSet,
};

use super::ComplexError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyKind {
    Pm,
    Fc,
    Bfc,
    NmlinkComplete,
    NmlinkBipartite,
}

/// Parameters of one of the special families of subgraphs.
///
/// * `Pm`: graphs on `vertices` with a perfect matching, containing `h`.
/// * `Fc`: factor-critical graphs on `vertices` containing `h`.
/// * `Bfc`: `(Y,Z)`-factor-critical subgraphs of `K_{X,Y}` containing `h`.
/// * `NmlinkComplete`: subgraphs of `K_V` with `ν < k` containing `h`.
/// * `NmlinkBipartite`: subgraphs of `K_{X,Y}` with `ν < k` containing `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilySpec {
    Pm { vertices: VertexSet, h: EdgeSet },
    Fc { vertices: VertexSet, h: EdgeSet },
    Bfc { x: VertexSet, y: VertexSet, z: VertexSet, h: EdgeSet },
    NmlinkComplete { vertices: VertexSet, h: EdgeSet, k: usize },
    NmlinkBipartite { x: VertexSet, y: VertexSet, h: EdgeSet, k: usize },
}

impl FamilySpec {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::Pm { .. } => FamilyKind::Pm,
            FamilySpec::Fc { .. } => FamilyKind::Fc,
            FamilySpec::Bfc { .. } => FamilyKind::Bfc,
            FamilySpec::NmlinkComplete { .. } => FamilyKind::NmlinkComplete,
            FamilySpec::NmlinkBipartite { .. } => FamilyKind::NmlinkBipartite,
        }
    }

    /// The complete (bipartite) host graph.
    pub fn host(&self) -> EdgeSet {
        match *self {
            FamilySpec::Pm { vertices, .. } | FamilySpec::Fc { vertices, .. } | FamilySpec::NmlinkComplete { vertices, .. } => {
                EdgeSet::complete(vertices)
            }
            FamilySpec::Bfc { x, y, .. } | FamilySpec::NmlinkBipartite { x, y, .. } => EdgeSet::complete_bipartite(x, y),
        }
    }

    /// The forced subgraph `H`.
    pub fn h(&self) -> EdgeSet {
        match *self {
            FamilySpec::Pm { h, .. }
            | FamilySpec::Fc { h, .. }
            | FamilySpec::Bfc { h, .. }
            | FamilySpec::NmlinkComplete { h, .. }
            | FamilySpec::NmlinkBipartite { h, .. } => h,
        }
    }

    /// Checks the shape of the parameters.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let bad = |m: &str| Err(ComplexError::InvalidFamily(m.to_string()));
        match *self {
            FamilySpec::Bfc { x, y, z, .. } => {
                if !x.is_disjoint(y) {
                    return bad("X and Y overlap");
                }
                if !z.is_subset(x) {
                    return bad("Z is not a subset of X");
                }
            }
            FamilySpec::NmlinkBipartite { x, y, k, .. } => {
                if !x.is_disjoint(y) {
                    return bad("X and Y overlap");
                }
                if k == 0 {
                    return bad("k must be positive");
                }
            }
            FamilySpec::NmlinkComplete { k: 0, .. } => return bad("k must be positive"),
            _ => {}
        }
        if !self.h().is_subset(self.host()) {
            return bad("H is not a subgraph of the host");
        }
        Ok(())
    }

    /// Membership test by the defining predicate (the deletion criterion for
    /// `Bfc`). `g` must lie between `H` and the host.
    pub fn contains(&self, g: EdgeSet) -> bool {
        if !self.h().is_subset(g) || !g.is_subset(self.host()) {
            return false;
        }
        match *self {
            FamilySpec::Pm { vertices, .. } => has_perfect_matching_on(g, vertices),
            FamilySpec::Fc { vertices, .. } => is_factor_critical_on(g, vertices),
            FamilySpec::Bfc { x, y, z, .. } => x.is_empty() || y.is_empty() || yz_factor_critical_on(g, x, y, z),
            FamilySpec::NmlinkComplete { vertices, k, .. } => matching_number_on(g, vertices) < k,
            FamilySpec::NmlinkBipartite { x, y, k, .. } => matching_number_on(g, x.union(y)) < k,
        }
    }
}

/// Members of a family, by filtering all graphs between `H` and the host.
///
/// Conventions: `Pm` on no vertices and `Fc` on one vertex give `{∅}`; `Bfc`
/// with `X` or `Y` empty gives `{∅}`; families may be empty. Members are
/// returned in increasing mask order.
pub fn enumerate_family(spec: &FamilySpec, cap: u64) -> Result<Vec<EdgeSet>, ComplexError> {
    spec.validate()?;
    let free = spec.host().difference(spec.h());
    let scan = 1u64.checked_shl(free.len() as u32).unwrap_or(u64::MAX);
    if scan > cap {
        return Err(ComplexError::CapExceeded { what: "subset enumeration", actual: scan, cap });
    }
    let h = spec.h();
    let mut out: Vec<EdgeSet> = submasks(free.0).map(|m| EdgeSet(m).union(h)).filter(|&g| spec.contains(g)).collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::y_factor_critical_by_hall;

    const CAP: u64 = super::super::DEFAULT_ENUMERATION_CAP;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn conventions() {
        let pm0 = FamilySpec::Pm { vertices: VertexSet::EMPTY, h: EdgeSet::EMPTY };
        assert_eq!(enumerate_family(&pm0, CAP).unwrap(), vec![EdgeSet::EMPTY]);
        let pm2 = FamilySpec::Pm { vertices: vs(&[0, 1]), h: EdgeSet::EMPTY };
        assert_eq!(enumerate_family(&pm2, CAP).unwrap(), vec![EdgeSet::single(0, 1)]);
        let pm3 = FamilySpec::Pm { vertices: vs(&[0, 1, 2]), h: EdgeSet::EMPTY };
        assert!(enumerate_family(&pm3, CAP).unwrap().is_empty());
        let fc1 = FamilySpec::Fc { vertices: vs(&[4]), h: EdgeSet::EMPTY };
        assert_eq!(enumerate_family(&fc1, CAP).unwrap(), vec![EdgeSet::EMPTY]);
        let bfc = FamilySpec::Bfc { x: vs(&[0, 1]), y: VertexSet::EMPTY, z: VertexSet::EMPTY, h: EdgeSet::EMPTY };
        assert_eq!(enumerate_family(&bfc, CAP).unwrap(), vec![EdgeSet::EMPTY]);
    }

    #[test]
    fn bfc_k21() {
        let spec = FamilySpec::Bfc { x: vs(&[0, 1]), y: vs(&[2]), z: VertexSet::EMPTY, h: EdgeSet::EMPTY };
        assert_eq!(enumerate_family(&spec, CAP).unwrap(), vec![EdgeSet::from_pairs([(0, 2), (1, 2)])]);
    }

    #[test]
    fn fc_on_three_vertices() {
        // Deleting the middle vertex of a path leaves no perfect matching.
        let spec = FamilySpec::Fc { vertices: vs(&[0, 1, 2]), h: EdgeSet::EMPTY };
        assert_eq!(enumerate_family(&spec, CAP).unwrap(), vec![EdgeSet::complete(vs(&[0, 1, 2]))]);
    }

    #[test]
    fn bfc_deletion_matches_hall() {
        for nx in 0..=3 {
            for ny in 0..=2 {
                let x = VertexSet::range(nx);
                let y = VertexSet::from_range(nx, nx + ny);
                for z in submasks(x.0 as u64) {
                    let z = VertexSet(z as u32);
                    let spec = FamilySpec::Bfc { x, y, z, h: EdgeSet::EMPTY };
                    let fam = enumerate_family(&spec, CAP).unwrap();
                    let by_hall: Vec<EdgeSet> = submasks(spec.host().0)
                        .map(EdgeSet)
                        .filter(|&g| {
                            nx == 0
                                || ny == 0
                                || (y_factor_critical_by_hall(g, x, y) && y_factor_critical_by_hall(g, y, z))
                        })
                        .collect();
                    let mut by_hall = by_hall;
                    by_hall.sort_unstable();
                    assert_eq!(fam, by_hall, "x={x:?} y={y:?} z={z:?}");
                }
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        let spec = FamilySpec::Bfc { x: vs(&[0]), y: vs(&[1]), z: vs(&[1]), h: EdgeSet::EMPTY };
        assert!(enumerate_family(&spec, CAP).is_err());
        let spec = FamilySpec::Pm { vertices: vs(&[0, 1]), h: EdgeSet::single(0, 2) };
        assert!(enumerate_family(&spec, CAP).is_err());
    }

    #[test]
    fn json_shape() {
        let spec = FamilySpec::NmlinkComplete { vertices: vs(&[0, 1, 2, 3]), h: EdgeSet::single(0, 1), k: 2 };
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"kind":"NMLINK_COMPLETE","vertices":[0,1,2,3],"h":[[0,1]],"k":2}"#);
        assert_eq!(serde_json::from_str::<FamilySpec>(&s).unwrap(), spec);
    }
}
