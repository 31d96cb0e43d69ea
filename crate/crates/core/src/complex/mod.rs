//! Simplicial complexes over ground sets of (optionally labelled) edges.
//!
//! Faces are 64-bit masks over the positions of the ground set, and a complex
//! stores its faces explicitly in increasing mask order.

mod family;

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{matching_number_on, Bits, EdgeSet, Graph, GraphError, VertexSet};

pub use family::{enumerate_family, FamilyKind, FamilySpec};

/// A face, as a mask over ground positions.
pub type Face = u64;

/// Default cap on the number of subsets scanned by enumerations.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 22;

/// Largest ground set a complex can carry.
pub const MAX_GROUND: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("{what} limit exceeded: {actual} > {cap}")]
    CapExceeded { what: &'static str, actual: u64, cap: u64 },
    #[error("{0:#x} is not a face of the complex")]
    NotAFace(Face),
    #[error("ground sets overlap")]
    OverlappingGrounds,
    #[error("subset is not contained in the ground set")]
    NotInGround,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A ground-set element: an edge `u < v`, with an optional source label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub u: u8,
    pub v: u8,
    pub label: Option<u16>,
}

impl Element {
    pub fn edge(u: usize, v: usize) -> Self {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        Element { u: u as u8, v: v as u8, label: None }
    }

    pub fn labelled(u: usize, v: usize, label: usize) -> Self {
        Element { label: Some(label as u16), ..Element::edge(u, v) }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u as usize, self.v as usize)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(l) => write!(f, "{}-{}@{}", self.u, self.v, l),
            None => write!(f, "{}-{}", self.u, self.v),
        }
    }
}

/// An ordered list of distinct elements; the order fixes orientations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    elements: Vec<Element>,
}

impl GroundSet {
    /// Sorts the elements and rejects duplicates or oversize grounds.
    pub fn new(mut elements: Vec<Element>) -> Result<Self, ComplexError> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::InvalidFamily("duplicate ground element".into()));
        }
        if elements.len() > MAX_GROUND {
            return Err(ComplexError::CapExceeded {
                what: "ground size",
                actual: elements.len() as u64,
                cap: MAX_GROUND as u64,
            });
        }
        Ok(GroundSet { elements })
    }

    /// The edges of a graph in lexicographic order.
    pub fn of_edges(edges: EdgeSet) -> Self {
        GroundSet { elements: edges.lex_edges().into_iter().map(|(u, v)| Element::edge(u, v)).collect() }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, e: &Element) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }

    /// Mask of all positions.
    pub fn full(&self) -> Face {
        low_mask(self.len())
    }

    /// The edge set underlying a face, with labels erased.
    pub fn edges_of(&self, face: Face) -> EdgeSet {
        Bits::new(face).fold(EdgeSet::EMPTY, |s, i| {
            let (u, v) = self.elements[i].endpoints();
            s.with(u, v)
        })
    }

    /// The face of all unlabelled elements lying in `edges`.
    pub fn face_of_edges(&self, edges: EdgeSet) -> Face {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label.is_none() && edges.contains(e.u as usize, e.v as usize))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn restrict(&self, keep: Face) -> GroundSet {
        GroundSet { elements: Bits::new(keep).map(|i| self.elements[i]).collect() }
    }
}

pub(crate) fn low_mask(n: usize) -> Face {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Packs the bits of `face` selected by `keep` into consecutive low bits.
pub(crate) fn compress(face: Face, keep: Face) -> Face {
    let mut out = 0;
    for (j, i) in Bits::new(keep).enumerate() {
        if face >> i & 1 == 1 {
            out |= 1 << j;
        }
    }
    out
}

/// Orders faces by size, then by mask.
pub fn graded_order(faces: &mut [Face]) {
    faces.sort_unstable_by_key(|&f| (f.count_ones(), f));
}

/// A finite simplicial complex with explicitly stored faces.
///
/// The void complex (no faces at all) is representable so that joins with an
/// empty family stay closed; every other complex contains the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    ground: GroundSet,
    faces: Vec<Face>,
}

impl SimplicialComplex {
    /// Builds a complex from faces, checking that they are hereditary.
    pub fn from_faces(ground: GroundSet, mut faces: Vec<Face>) -> Result<Self, ComplexError> {
        let full = ground.full();
        if faces.iter().any(|&f| f & !full != 0) {
            return Err(ComplexError::NotInGround);
        }
        faces.sort_unstable();
        faces.dedup();
        let k = SimplicialComplex { ground, faces };
        if let Some(f) = k.first_non_hereditary() {
            return Err(ComplexError::InvalidFamily(format!("face {f:#x} has a missing facet")));
        }
        Ok(k)
    }

    pub(crate) fn from_sorted_unchecked(ground: GroundSet, faces: Vec<Face>) -> Self {
        debug_assert!(faces.windows(2).all(|w| w[0] < w[1]));
        SimplicialComplex { ground, faces }
    }

    /// The full simplex on a ground set.
    pub fn simplex(ground: GroundSet) -> Self {
        let faces = (0..=ground.full()).collect();
        SimplicialComplex { ground, faces }
    }

    /// The complex with no faces.
    pub fn void(ground: GroundSet) -> Self {
        SimplicialComplex { ground, faces: Vec::new() }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Faces in increasing mask order.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, f: Face) -> bool {
        self.faces.binary_search(&f).is_ok()
    }

    /// Largest face dimension; `None` for the void complex.
    pub fn dimension(&self) -> Option<isize> {
        self.faces.iter().map(|f| f.count_ones() as isize - 1).max()
    }

    /// Faces of dimension `d`, in increasing mask order.
    pub fn faces_of_dim(&self, d: isize) -> Vec<Face> {
        self.faces.iter().copied().filter(|f| f.count_ones() as isize - 1 == d).collect()
    }

    /// Counts of faces per dimension, starting at dimension `-1`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in &self.faces {
            let i = f.count_ones() as usize;
            if out.len() <= i {
                out.resize(i + 1, 0);
            }
            out[i] += 1;
        }
        out
    }

    /// Maximal faces.
    pub fn facets(&self) -> Vec<Face> {
        let full = self.ground.full();
        self.faces
            .iter()
            .copied()
            .filter(|&f| Bits::new(full & !f).all(|i| !self.contains(f | 1 << i)))
            .collect()
    }

    fn first_non_hereditary(&self) -> Option<Face> {
        self.faces
            .iter()
            .copied()
            .find(|&f| Bits::new(f).any(|i| !self.contains(f & !(1 << i))))
    }

    /// Whether every facet of every face is a face.
    pub fn is_hereditary(&self) -> bool {
        self.first_non_hereditary().is_none() && (self.faces.is_empty() || self.faces[0] == 0)
    }

    /// `lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}` on the ground `E ∖ σ`.
    pub fn link(&self, sigma: Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(sigma));
        }
        let keep = self.ground.full() & !sigma;
        let mut faces: Vec<Face> = self
            .faces
            .iter()
            .filter(|&&f| f & sigma == sigma)
            .map(|&f| compress(f & !sigma, keep))
            .collect();
        faces.sort_unstable();
        Ok(SimplicialComplex { ground: self.ground.restrict(keep), faces })
    }

    /// Faces contained in `s`, on the ground `s`.
    pub fn induced(&self, s: Face) -> Result<SimplicialComplex, ComplexError> {
        if s & !self.ground.full() != 0 {
            return Err(ComplexError::NotInGround);
        }
        let faces = self.faces.iter().filter(|&&f| f & !s == 0).map(|&f| compress(f, s)).collect();
        Ok(SimplicialComplex { ground: self.ground.restrict(s), faces })
    }

    /// `K - v`: the induced subcomplex on all elements but position `i`.
    pub fn delete_element(&self, i: usize) -> Result<SimplicialComplex, ComplexError> {
        self.induced(self.ground.full() & !(1 << i))
    }

    /// Writes one hexadecimal face mask per line, preceded by a ground header.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# ground:");
        for e in self.ground.elements() {
            let _ = write!(s, " {e}");
        }
        s.push('\n');
        for f in &self.faces {
            let _ = writeln!(s, "{f:x}");
        }
        s
    }

    /// Parses the output of [`SimplicialComplex::to_text`].
    pub fn from_text(text: &str) -> Result<SimplicialComplex, ComplexError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(ComplexError::Parse { line: 1, msg: "missing ground header".into() })?;
        let body = header
            .strip_prefix("# ground:")
            .ok_or(ComplexError::Parse { line: 1, msg: "missing ground header".into() })?;
        let mut elements = Vec::new();
        for tok in body.split_whitespace() {
            elements.push(parse_element(tok).ok_or(ComplexError::Parse { line: 1, msg: format!("bad element {tok:?}") })?);
        }
        let ground = GroundSet::new(elements)?;
        let mut faces = Vec::new();
        for (i, l) in lines {
            let l = l.trim();
            if l.is_empty() {
                continue;
            }
            let f = u64::from_str_radix(l, 16).map_err(|_| ComplexError::Parse { line: i + 1, msg: format!("bad face {l:?}") })?;
            faces.push(f);
        }
        SimplicialComplex::from_faces(ground, faces)
    }
}

fn parse_element(tok: &str) -> Option<Element> {
    let (edge, label) = match tok.split_once('@') {
        Some((e, l)) => (e, Some(l.parse::<usize>().ok()?)),
        None => (tok, None),
    };
    let (u, v) = edge.split_once('-')?;
    let (u, v) = (u.parse::<usize>().ok()?, v.parse::<usize>().ok()?);
    if u == v || u.max(v) >= crate::graph::MAX_VERTICES {
        return None;
    }
    Some(match label {
        Some(l) => Element::labelled(u, v, l),
        None => Element::edge(u, v),
    })
}

/// Collects every face of the hereditary family `{σ : accept(σ)}` by
/// depth-first extension, split across threads by the least element.
pub(crate) fn enumerate_hereditary<F>(m: usize, accept: F) -> Vec<Face>
where
    F: Fn(Face) -> bool + Sync,
{
    fn extend<F: Fn(Face) -> bool>(m: usize, face: Face, from: usize, accept: &F, out: &mut Vec<Face>) {
        out.push(face);
        for j in from..m {
            let g = face | 1 << j;
            if accept(g) {
                extend(m, g, j + 1, accept, out);
            }
        }
    }
    let mut faces: Vec<Face> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            if accept(1 << i) {
                extend(m, 1 << i, i + 1, &accept, &mut out);
            }
            out
        })
        .collect();
    if accept(0) {
        faces.push(0);
    }
    faces.sort_unstable();
    faces
}

/// `NM_k(G) = {G' ⊆ G : ν(G') < k}` on the edges of `g` in lexicographic order.
pub fn build_nm_complex(g: &Graph, k: usize, cap: u64) -> Result<SimplicialComplex, ComplexError> {
    let m = g.edge_count();
    let scan = 1u64.checked_shl(m as u32).unwrap_or(u64::MAX);
    if scan > cap {
        return Err(ComplexError::CapExceeded { what: "subset enumeration", actual: scan, cap });
    }
    let ground = GroundSet::of_edges(g.edges());
    let all = g.vertices();
    let faces = enumerate_hereditary(m, |f| k > 0 && matching_number_on(ground.edges_of(f), all) < k);
    Ok(SimplicialComplex::from_sorted_unchecked(ground, faces))
}

/// `{σ1 ∪ σ2 : σ1 ∈ a, σ2 ∈ b}` on the union of two disjoint grounds.
pub fn join(a: &SimplicialComplex, b: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
    let mut elements: Vec<Element> = a.ground.elements().to_vec();
    elements.extend_from_slice(b.ground.elements());
    let ground = GroundSet::new(elements).map_err(|e| match e {
        ComplexError::InvalidFamily(_) => ComplexError::OverlappingGrounds,
        other => other,
    })?;
    let pos: HashMap<Element, usize> = ground.elements().iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let remap = |k: &SimplicialComplex| -> Vec<u64> {
        k.ground.elements().iter().map(|e| 1u64 << pos[e]).collect()
    };
    let (ma, mb) = (remap(a), remap(b));
    let lift = |f: Face, m: &[u64]| Bits::new(f).fold(0u64, |acc, i| acc | m[i]);
    let mut faces = Vec::with_capacity(a.face_count() * b.face_count());
    for &fa in &a.faces {
        let la = lift(fa, &ma);
        for &fb in &b.faces {
            faces.push(la | lift(fb, &mb));
        }
    }
    faces.sort_unstable();
    Ok(SimplicialComplex { ground, faces })
}

/// Vertex set spanned by the ground edges of a complex.
pub fn ground_vertices(ground: &GroundSet) -> VertexSet {
    ground.elements().iter().fold(VertexSet::EMPTY, |s, e| s.with(e.u as usize).with(e.v as usize))
}
