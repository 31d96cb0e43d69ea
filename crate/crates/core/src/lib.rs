pub mod cli;
pub mod complex;
pub mod graph;
pub mod homology;
pub mod morse;
pub mod rainbow;
