//! Circuit codes in the hypercube: spread-`k` snakes and coils, their
//! canonical forms, and constructive and exhaustive searches for them.

pub mod canon;
pub mod corpus;
pub mod direct;
pub mod error;
pub mod extended;
pub mod joiner;
pub mod perm;
pub mod permuted;
pub mod record;
pub mod sequence;
pub mod spread;
pub mod structure;
pub mod vertex;

pub use canon::{canonical_circuit, canonical_code, canonical_path, CanonicalKey, InversionClass, KeyKind};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use sequence::{format_sequence, parse_sequence, walk, TransitionSequence};
pub use spread::{verify_spread, Code, CodeKind, SpreadCheck, SpreadChecker};
pub use vertex::{hamming, Vertex, MAX_DIM};
