//! Association schemes on the flags of finite generalized quadrangles.
//!
//! The flag scheme of a quadrangle of order `(s, t)` has seven classes whose
//! intersection numbers are polynomials in `s` and `t`. This crate builds the
//! scheme from a concrete quadrangle, checks it against the closed-form
//! tables, enumerates fusions, and rebuilds the quadrangle from scheme data
//! alone.

pub mod cli;
pub mod error;
pub mod flags;
pub mod format;
pub mod fusion;
pub mod gq;
pub mod graph;
pub mod poly;
pub mod reconstruct;
pub mod report;
pub mod scheme;
pub mod scramble;
pub mod tables;

pub use error::{
    FormatError, FusionError, GqError, GqWitness, GraphError, PolyParseError, QmError, ReconstructError, SchemeError,
    TableError,
};
pub use flags::{Flag, FlagSchemeData};
pub use gq::{GqOrder, IncidenceStructure};
pub use graph::{Graph, SrgParameters};
pub use poly::BivariatePoly;
pub use scheme::{IntersectionTensor, SchemeMatrix};
