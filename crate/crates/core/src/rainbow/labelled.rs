//! The complex of labelled edge sets whose underlying graph has matching
//! number below `k`, and the partition-matroid face search on it.

use serde::{Deserialize, Serialize};

use crate::complex::{Element, Face, GroundSet, SimplicialComplex, DEFAULT_ENUMERATION_CAP};
use crate::graph::{matching_number_on, Bits};

use super::{find_rainbow_matching, RainbowError, RainbowInstance};

/// Ground of `(e, i)` pairs, one per edge `e` of the `i`-th set (1-based).
fn labelled_ground(inst: &RainbowInstance) -> Result<GroundSet, RainbowError> {
    let elements = inst
        .sets()
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.lex_edges().into_iter().map(move |(u, v)| Element::labelled(u, v, i + 1)))
        .collect();
    Ok(GroundSet::new(elements)?)
}

/// Labelled subsets whose edges, labels erased, have matching number below `k`.
pub fn labelled_nm_complex(inst: &RainbowInstance) -> Result<SimplicialComplex, RainbowError> {
    let ground = labelled_ground(inst)?;
    let n = ground.len();
    let k = inst.k();
    let mut faces = vec![0u64];
    let mut stack: Vec<(Face, usize)> = vec![(0, 0)];
    while let Some((f, from)) = stack.pop() {
        for i in from..n {
            let g = f | 1 << i;
            let edges = ground.edges_of(g);
            if matching_number_on(edges, edges.support()) < k {
                faces.push(g);
                if faces.len() as u64 > DEFAULT_ENUMERATION_CAP {
                    return Err(RainbowError::CapExceeded {
                        what: "labelled faces",
                        actual: faces.len() as u64,
                        cap: DEFAULT_ENUMERATION_CAP,
                    });
                }
                stack.push((g, i + 1));
            }
        }
    }
    Ok(SimplicialComplex::from_faces(ground, faces)?)
}

/// Rank in the partition matroid: the number of labels `face` touches.
pub fn partition_rank(ground: &GroundSet, face: Face) -> usize {
    let mut labels: Vec<u16> = Bits::new(face).filter_map(|i| ground.elements()[i].label).collect();
    labels.sort_unstable();
    labels.dedup();
    labels.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HellyReport {
    pub d: usize,
    pub total_rank: usize,
    pub faces_scanned: usize,
    /// A face whose complement has rank at most `d`, as labelled edges.
    pub witness: Option<Vec<String>>,
}

impl HellyReport {
    pub fn holds(&self) -> bool {
        self.witness.is_some()
    }
}

/// With every partition-independent set a face (no rainbow `k`-matching) and
/// total rank at least `d + 2`, looks for a face `σ` with `ρ(Ẽ \ σ) <= d`.
pub fn verify_topological_helly_conclusion(inst: &RainbowInstance, d: usize) -> Result<HellyReport, RainbowError> {
    if find_rainbow_matching(inst).is_some() {
        return Err(RainbowError::Precondition(
            "a rainbow matching exists, so the partition matroid is not a subcomplex".into(),
        ));
    }
    let k = labelled_nm_complex(inst)?;
    let ground = k.ground();
    let full = ground.full();
    let total_rank = partition_rank(ground, full);
    if total_rank < d + 2 {
        return Err(RainbowError::Precondition(format!("total rank {total_rank} is below d + 2 = {}", d + 2)));
    }
    let mut scanned = 0;
    let mut witness = None;
    for &f in k.faces() {
        scanned += 1;
        if partition_rank(ground, full & !f) <= d {
            witness = Some(Bits::new(f).map(|i| ground.elements()[i].to_string()).collect());
            break;
        }
    }
    Ok(HellyReport { d, total_rank, faces_scanned: scanned, witness })
}
