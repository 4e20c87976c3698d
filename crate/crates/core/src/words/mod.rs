//! Words over named matrix generators: free-product and Britton reduction,
//! length-lex enumeration, and fingerprinted word balls.

pub mod ball;
pub mod enumerate;
pub mod free;
pub mod hnn;
pub mod table;

pub use ball::{Ball, BallGen, Metric};
pub use enumerate::{enumerate_reduced, Alphabet, CodeSpace, Letter, LetterKind, Scan};
pub use free::{reduce_free, FactorLetter, FreeWord, Side};
pub use hnn::{britton_reduce, HnnRelation, HnnToken, HnnWord};
pub use table::{Factor, Generator, GeneratorTable, Syllable, Word};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("no matrix assigned to generator {0:?}")]
    MissingAssignment(String),
    #[error("generator {0:?} does not have determinant 1")]
    NotUnimodular(String),
    #[error("generator name {0:?} is already taken")]
    DuplicateName(String),
    #[error("generator name {0:?} is not allowed")]
    BadName(String),
    #[error("generator {0:?} has the wrong dimension")]
    DimensionMismatch(String),
    #[error("generator table is empty")]
    EmptyTable,
    #[error("cannot parse word token {0:?}")]
    Parse(String),
}
