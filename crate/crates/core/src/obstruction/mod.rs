//! The band-sum obstruction: the equation system, its rational solution
//! families, and a bounded integer search.

pub mod family;
pub mod quad;
pub mod search;
pub mod system;

pub use family::{family, square_grid, verify_family, FamilyDefinition, FamilyExpr, FamilyReport};
pub use quad::QuadExt;
pub use search::{integer_search, integer_search_with, SearchOptions, SearchResult};
pub use system::{
    evaluate, paper_system, parse_assignment, transcription_check, PolySystem, Row, SysPolynomial,
    SysVariable, TranscriptionReport,
};
