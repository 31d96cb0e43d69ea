use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{ComplexError, Face, SimplicialComplex};
use crate::graph::submasks;

use super::{reduced_betti_from, BettiTable, FieldSpec, HomologyError};

/// Largest ground on which INDUCED mode scans every subset.
pub const INDUCED_GROUND_CAP: usize = 16;

/// Which faces to inspect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplePolicy {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LerayMode {
    /// Links of all faces, including the empty face.
    Links,
    /// All induced subcomplexes.
    Induced,
}

/// A face (or induced subset) whose homology fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Face mask, or the subset mask in INDUCED mode.
    pub face: Face,
    pub elements: Vec<String>,
    pub betti: BettiTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LerayReport {
    pub d0: isize,
    pub field: FieldSpec,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl LerayReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn describe(k: &SimplicialComplex, f: Face) -> Vec<String> {
    crate::graph::Bits::new(f).map(|i| k.ground().elements()[i].to_string()).collect()
}

fn scan<G>(k: &SimplicialComplex, targets: &[Face], d0: isize, field: FieldSpec, sub: G) -> Result<LerayReport, HomologyError>
where
    G: Fn(Face) -> Result<SimplicialComplex, ComplexError> + Sync,
{
    let results: Vec<Result<Option<Violation>, HomologyError>> = targets
        .par_iter()
        .map(|&f| {
            let piece = sub(f)?;
            let t = reduced_betti_from(&piece, field, d0)?;
            Ok((!t.vanishes_from(d0)).then(|| Violation { face: f, elements: describe(k, f), betti: t }))
        })
        .collect();
    let mut violations = Vec::new();
    for r in results {
        if let Some(v) = r? {
            violations.push(v);
        }
    }
    Ok(LerayReport { d0, field, checked: targets.len(), violations })
}

/// Checks that the link of every selected non-empty face has vanishing
/// homology from dimension `d0` on.
pub fn check_near_leray(
    k: &SimplicialComplex,
    d0: isize,
    field: FieldSpec,
    policy: SamplePolicy,
) -> Result<LerayReport, HomologyError> {
    let mut faces: Vec<Face> = k.faces().iter().copied().filter(|&f| f != 0).collect();
    if let SamplePolicy::Sampled { count, seed } = policy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        faces.shuffle(&mut rng);
        faces.truncate(count);
        faces.sort_unstable();
    }
    scan(k, &faces, d0, field, |f| k.link(f))
}

/// Decides `d0`-Lerayness by links of all faces or by all induced subcomplexes.
pub fn check_leray(k: &SimplicialComplex, d0: isize, field: FieldSpec, mode: LerayMode) -> Result<LerayReport, HomologyError> {
    match mode {
        LerayMode::Links => scan(k, k.faces(), d0, field, |f| k.link(f)),
        LerayMode::Induced => {
            let m = k.ground().len();
            if m > INDUCED_GROUND_CAP {
                return Err(HomologyError::CapExceeded {
                    what: "ground size for induced scan",
                    actual: m as u64,
                    cap: INDUCED_GROUND_CAP as u64,
                });
            }
            let subsets: Vec<Face> = submasks(k.ground().full()).collect();
            scan(k, &subsets, d0, field, |s| k.induced(s))
        }
    }
}

/// Runs both modes and fails if they disagree.
pub fn check_leray_both(k: &SimplicialComplex, d0: isize, field: FieldSpec) -> Result<bool, HomologyError> {
    let links = check_leray(k, d0, field, LerayMode::Links)?.passed();
    let induced = check_leray(k, d0, field, LerayMode::Induced)?.passed();
    if links != induced {
        return Err(HomologyError::ModeDisagreement(d0));
    }
    Ok(links)
}
