//! Toroidal grid diagrams, generators, positive domains and rectangles.

mod diagram;
mod domain;
mod generator;
mod key;
mod shapes;

pub use diagram::{AnnulusKind, AnnulusLabel, GridDiagram};
pub use domain::{
    column_squares, horizontal_annulus, is_domain, rectangle_at, rectangles_from, rectangles_to, row_squares,
    vertical_annulus, Domain,
};
pub use generator::{all_generators, Generator, MAX_N};
pub use key::CanonicalKey;
pub use shapes::{classify_index2, decompositions, Index2Shape};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("degenerate grid: n = {0} (need n >= 2)")]
    Degenerate(usize),
    #[error("grid size {0} exceeds supported maximum {MAX_N}")]
    TooLarge(usize),
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("O and X share a square in column {column}")]
    MarkingCollision { column: usize },
    #[error("composition endpoint mismatch: left ends at {left_to}, right starts at {right_from}")]
    Composition { left_to: Generator, right_from: Generator },
    #[error("corner-defect condition fails for {0}")]
    InvalidDomain(String),
    #[error("multiplicity overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}
