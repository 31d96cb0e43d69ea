//! Reduced simplicial homology over GF(2), GF(p) and the rationals.
//!
//! Chain groups run from dimension `-1` (spanned by the empty face) up to the
//! dimension of the complex. Orientation follows the ground-set order: the
//! boundary of a face drops its `j`-th element with sign `(-1)^j`.

mod field;
mod leray;
mod rank;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Face, SimplicialComplex};
use crate::graph::Bits;

pub use field::{Field, FieldSpec, Gf2, Gfp, Rationals, PROXY_PRIME};
pub use leray::{check_leray, check_leray_both, check_near_leray, LerayMode, LerayReport, SamplePolicy, Violation};
pub use rank::{dense_rank, sparse_reduce, SignedColumns, DENSE_COLUMN_LIMIT};

/// Default cap on the number of faces handed to the linear algebra.
pub const DEFAULT_LINALG_CAP: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("{what} limit exceeded: {actual} > {cap}")]
    CapExceeded { what: &'static str, actual: u64, cap: u64 },
    #[error("dimension {0} is out of range for this complex")]
    DimensionOutOfRange(isize),
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("unknown field {0:?}; expected gf2, gfP or rational")]
    UnknownField(String),
    #[error("LINKS and INDUCED modes disagree at d0 = {0}")]
    ModeDisagreement(isize),
    #[error("reduced Euler characteristic mismatch: faces give {faces}, Betti numbers give {betti}")]
    EulerMismatch { faces: i64, betti: i64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub dim: isize,
    pub betti: usize,
}

/// Reduced Betti numbers over a field, for dimensions `-1..=dim(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub field: FieldSpec,
    pub entries: Vec<BettiEntry>,
}

impl BettiTable {
    /// `β̃_d`, zero outside the stored range.
    pub fn get(&self, d: isize) -> usize {
        self.entries.iter().find(|e| e.dim == d).map_or(0, |e| e.betti)
    }

    pub fn top_dim(&self) -> Option<isize> {
        self.entries.last().map(|e| e.dim)
    }

    /// Dimensions with non-zero Betti number.
    pub fn support(&self) -> Vec<isize> {
        self.entries.iter().filter(|e| e.betti > 0).map(|e| e.dim).collect()
    }

    /// Whether `β̃_d = 0` for every `d >= d0`.
    pub fn vanishes_from(&self, d0: isize) -> bool {
        self.entries.iter().all(|e| e.dim < d0 || e.betti == 0)
    }

    /// Whether all non-zero Betti numbers sit in dimension `d`.
    pub fn concentrated_in(&self, d: isize) -> bool {
        self.entries.iter().all(|e| e.dim == d || e.betti == 0)
    }

    /// `Σ (-1)^d β̃_d`.
    pub fn euler_characteristic(&self) -> i64 {
        self.entries.iter().map(|e| if e.dim.rem_euclid(2) == 0 { e.betti as i64 } else { -(e.betti as i64) }).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("dim,betti\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{}", e.dim, e.betti);
        }
        s
    }

    /// Whether two tables agree entry by entry, ignoring the field.
    pub fn same_numbers(&self, other: &BettiTable) -> bool {
        self.entries == other.entries
    }
}

/// A boundary map `C_d → C_{d-1}` with its row and column faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub dim: isize,
    pub row_faces: Vec<Face>,
    pub col_faces: Vec<Face>,
    pub matrix: SignedColumns,
}

impl BoundaryMatrix {
    /// Dense signed entries, row-major.
    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        let mut out = vec![vec![0i8; self.col_faces.len()]; self.row_faces.len()];
        for (j, col) in self.matrix.cols.iter().enumerate() {
            for &(r, s) in col {
                out[r as usize][j] = s;
            }
        }
        out
    }
}

fn faces_by_dim(k: &SimplicialComplex) -> Vec<Vec<Face>> {
    let mut out: Vec<Vec<Face>> = Vec::new();
    for &f in k.faces() {
        let i = f.count_ones() as usize;
        if out.len() <= i {
            out.resize_with(i + 1, Vec::new);
        }
        out[i].push(f);
    }
    out
}

fn signed_columns(rows: &[Face], cols: &[Face]) -> SignedColumns {
    let cols = cols
        .iter()
        .map(|&f| {
            let mut col: Vec<(u32, i8)> = Bits::new(f)
                .enumerate()
                .map(|(j, i)| {
                    let r = rows.binary_search(&(f & !(1 << i))).expect("complex is hereditary");
                    (r as u32, if j % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            col
        })
        .collect();
    SignedColumns { rows: rows.len(), cols }
}

/// The boundary map out of dimension `d`, for `-1 <= d <= dim(K) + 1`.
pub fn boundary_matrix(k: &SimplicialComplex, d: isize) -> Result<BoundaryMatrix, HomologyError> {
    let top = k.dimension().ok_or(HomologyError::DimensionOutOfRange(d))?;
    if d < -1 || d > top + 1 {
        return Err(HomologyError::DimensionOutOfRange(d));
    }
    let cols = k.faces_of_dim(d);
    let rows = if d >= 0 { k.faces_of_dim(d - 1) } else { Vec::new() };
    let matrix = signed_columns(&rows, &cols);
    Ok(BoundaryMatrix { dim: d, row_faces: rows, col_faces: cols, matrix })
}

/// Ranks of `∂_d` for `d` from the top down to `from` (clamped at 0);
/// `ranks[d + 1]` holds rank `∂_d`.
fn boundary_ranks<F: Field>(f: &F, by_dim: &[Vec<Face>], from: isize) -> Vec<usize> {
    let mut ranks = vec![0usize; by_dim.len() + 1];
    let mut skip: Vec<bool> = Vec::new();
    let lowest = from.max(0) as usize;
    for i in (lowest + 1..by_dim.len()).rev() {
        // Columns: faces of size i (dimension i-1); rows: faces of size i-1.
        let m = signed_columns(&by_dim[i - 1], &by_dim[i]);
        if rank::prefers_dense(&m) {
            let kept = SignedColumns {
                rows: m.rows,
                cols: m.cols.iter().enumerate().filter(|(j, _)| !skip.get(*j).copied().unwrap_or(false)).map(|(_, c)| c.clone()).collect(),
            };
            ranks[i] = dense_rank(f, &kept);
            skip = Vec::new();
        } else {
            let (r, pivots) = sparse_reduce(f, &m, &skip);
            ranks[i] = r;
            skip = vec![false; by_dim[i - 1].len()];
            for p in pivots {
                skip[p as usize] = true;
            }
        }
    }
    ranks
}

fn betti_with<F: Field>(f: &F, spec: FieldSpec, k: &SimplicialComplex, from: isize) -> BettiTable {
    let by_dim = faces_by_dim(k);
    let ranks = boundary_ranks(f, &by_dim, from);
    let entries = (0..by_dim.len())
        .map(|i| {
            let next = ranks.get(i + 1).copied().unwrap_or(0);
            BettiEntry { dim: i as isize - 1, betti: by_dim[i].len() - ranks[i] - next }
        })
        .filter(|e| e.dim >= from)
        .collect();
    BettiTable { field: spec, entries }
}

fn check_cap(k: &SimplicialComplex, cap: usize) -> Result<(), HomologyError> {
    if k.face_count() > cap {
        return Err(HomologyError::CapExceeded { what: "face count", actual: k.face_count() as u64, cap: cap as u64 });
    }
    Ok(())
}

fn dispatch(k: &SimplicialComplex, field: FieldSpec, from: isize) -> BettiTable {
    match field {
        FieldSpec::Gf2 => betti_with(&Gf2, field, k, from),
        FieldSpec::Gfp(p) => betti_with(&Gfp(p), field, k, from),
        FieldSpec::Rational => betti_with(&Rationals, field, k, from),
    }
}

/// Reduced Betti numbers in every dimension `-1..=dim(K)`, with the reduced
/// Euler characteristic checked against the face counts.
pub fn reduced_betti_capped(k: &SimplicialComplex, field: FieldSpec, cap: usize) -> Result<BettiTable, HomologyError> {
    check_cap(k, cap)?;
    let t = dispatch(k, field, -1);
    let faces: i64 = k.f_vector().iter().enumerate().map(|(i, &c)| if i % 2 == 1 { c as i64 } else { -(c as i64) }).sum();
    // f_vector index i is dimension i-1, so odd i is even dimension.
    if faces != t.euler_characteristic() {
        return Err(HomologyError::EulerMismatch { faces, betti: t.euler_characteristic() });
    }
    Ok(t)
}

pub fn reduced_betti(k: &SimplicialComplex, field: FieldSpec) -> Result<BettiTable, HomologyError> {
    reduced_betti_capped(k, field, DEFAULT_LINALG_CAP)
}

/// Betti numbers in dimensions `>= d0` only; cheaper when `d0` is high.
pub fn reduced_betti_from(k: &SimplicialComplex, field: FieldSpec, d0: isize) -> Result<BettiTable, HomologyError> {
    check_cap(k, DEFAULT_LINALG_CAP)?;
    Ok(dispatch(k, field, d0.max(-1)))
}

/// Whether `β̃_d(K) = 0` for all `d >= d0`.
pub fn vanishing_from(k: &SimplicialComplex, d0: isize, field: FieldSpec) -> Result<bool, HomologyError> {
    Ok(reduced_betti_from(k, field, d0)?.vanishes_from(d0))
}
