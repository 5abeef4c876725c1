//! Maximal determinants of binary circulant matrices.
//!
//! Necklaces of length `n` are enumerated in lexicographic order while the
//! circulant eigenvalues are maintained incrementally over a prime field, so
//! every candidate determinant is exact. See the crate README for the CLI.

pub mod bounds;
#[cfg(feature = "cli")]
pub mod cli;
pub mod conjectures;
pub mod engine;
pub mod error;
pub mod modfield;
pub mod oracle;
pub mod reference;
pub mod spectral;
pub mod words;

pub use engine::{search, SearchConfig, SearchResult, Segment};
pub use error::{Error, Result};
pub use spectral::{Alphabet, CirculantSpec};
pub use words::Word;
