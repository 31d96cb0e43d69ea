//! Size bounds on critical sets, and end-to-end verification of a family.

use serde::{Deserialize, Serialize};

use crate::complex::{FamilySpec, GroundSet, SimplicialComplex};
use crate::graph::EdgeSet;
use crate::homology::FieldSpec;

use super::{
    build_bfc_matching, build_fc_matching, build_link_matching_bipartite, build_link_matching_complete,
    build_pm_matching, verify_morse_inequality, Construction, ElementMatching, MatchingReport, MorseError,
    MorseInequalityReport, SetMask,
};

/// Upper bound on the size of a critical set, stored doubled so that
/// half-integers stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyBound {
    pub twice_limit: usize,
    pub strict: bool,
}

impl FamilyBound {
    pub fn admits(&self, size: usize) -> bool {
        if self.strict {
            2 * size < self.twice_limit
        } else {
            2 * size <= self.twice_limit
        }
    }

    pub fn describe(&self) -> String {
        let op = if self.strict { "<" } else { "<=" };
        if self.twice_limit.is_multiple_of(2) {
            format!("{op} {}", self.twice_limit / 2)
        } else {
            format!("{op} {}.5", self.twice_limit / 2)
        }
    }
}

/// The bound on critical set sizes for the family.
pub fn family_bound(spec: &FamilySpec) -> FamilyBound {
    let h = spec.h().len();
    match *spec {
        FamilySpec::Pm { vertices, .. } => {
            FamilyBound { twice_limit: 3 * vertices.len() + 2 * h, strict: !vertices.is_empty() }
        }
        FamilySpec::Fc { vertices, .. } => {
            FamilyBound { twice_limit: 3 * vertices.len().saturating_sub(1) + 2 * h, strict: h > 0 }
        }
        FamilySpec::Bfc { y, z, .. } => FamilyBound { twice_limit: 2 * (2 * y.len() + z.len() + h), strict: h > 0 },
        FamilySpec::NmlinkComplete { k, .. } => {
            FamilyBound { twice_limit: 2 * (3 * k + h).saturating_sub(4), strict: false }
        }
        FamilySpec::NmlinkBipartite { k, .. } => {
            FamilyBound { twice_limit: 2 * (2 * k + h).saturating_sub(3), strict: false }
        }
    }
}

/// Builds the matching for any of the special families.
pub fn build_matching(spec: &FamilySpec) -> Result<Construction, MorseError> {
    match *spec {
        FamilySpec::Pm { vertices, h } => build_pm_matching(vertices, h),
        FamilySpec::Fc { vertices, h } => build_fc_matching(vertices, h),
        FamilySpec::Bfc { x, y, z, h } => build_bfc_matching(x, y, z, h),
        FamilySpec::NmlinkComplete { vertices, h, k } => build_link_matching_complete(vertices, h, k),
        FamilySpec::NmlinkBipartite { x, y, h, k } => build_link_matching_bipartite(x, y, h, k),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: String,
    pub max_critical_size: Option<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub spec: FamilySpec,
    pub matching: MatchingReport,
    pub bound: BoundCheck,
    /// Critical graphs as edge sets.
    pub critical_graphs: Vec<EdgeSet>,
    pub morse: MorseInequalityReport,
}

impl FamilyVerdict {
    pub fn passed(&self) -> bool {
        self.matching.valid && self.matching.acyclic == Some(true) && self.bound.holds && self.morse.holds
    }
}

/// The complex the family induces, with the matching carried along: links
/// shift by `H`, the other (up-closed) families are complemented in the host.
fn induced_complex(spec: &FamilySpec, c: &Construction) -> Result<(SimplicialComplex, ElementMatching), MorseError> {
    let host = spec.host();
    let h = spec.h();
    let link = matches!(spec, FamilySpec::NmlinkComplete { .. } | FamilySpec::NmlinkBipartite { .. });
    let ground = GroundSet::of_edges(if link { host.difference(h) } else { host });
    let to_face = |g: SetMask| -> SetMask {
        let e = EdgeSet(g);
        ground.face_of_edges(if link { e.difference(h) } else { host.difference(e) })
    };
    let faces: Vec<SetMask> = c.family.iter().map(|&g| to_face(g)).collect();
    let pairs = c
        .matching
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let (fa, fb) = (to_face(a), to_face(b));
            if fa.count_ones() < fb.count_ones() {
                (fa, fb)
            } else {
                (fb, fa)
            }
        })
        .filter(|&(lo, _)| lo != 0)
        .collect();
    let k = SimplicialComplex::from_faces(ground, faces)?;
    Ok((k, ElementMatching::new(pairs)))
}

/// Builds the matching, checks it, compares critical sizes with the bound and
/// cross-checks the Morse inequalities on the induced complex.
pub fn verify_family(spec: &FamilySpec, field: FieldSpec) -> Result<FamilyVerdict, MorseError> {
    let c = build_matching(spec)?;
    let report = c.report()?;
    let bound = family_bound(spec);
    let max = c.max_critical_size();
    let holds = max.is_none_or(|m| bound.admits(m));
    let (k, m) = induced_complex(spec, &c)?;
    let morse = verify_morse_inequality(&k, &m, field)?;
    Ok(FamilyVerdict {
        spec: spec.clone(),
        matching: report,
        bound: BoundCheck { bound: bound.describe(), max_critical_size: max, holds },
        critical_graphs: c.critical().into_iter().map(EdgeSet).collect(),
        morse,
    })
}
