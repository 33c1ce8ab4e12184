//! Transition sequences and their text notation.
//!
//! Coordinates are written one character each: `0`-`9` for 0 to 9, then
//! `A`-`Z` for 10 to 35. Whitespace (including line breaks) is ignored when
//! parsing, and formatting emits no separators.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::vertex::{check_dim, Vertex};

/// Ordered list of changed coordinates `c_0, c_1, ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TransitionSequence {
    dim: usize,
    changes: Vec<u8>,
}

pub fn coord_char(c: u8) -> char {
    match c {
        0..=9 => (b'0' + c) as char,
        10..=35 => (b'A' + c - 10) as char,
        _ => '?',
    }
}

pub fn char_coord(ch: char) -> Option<u8> {
    match ch {
        '0'..='9' => Some(ch as u8 - b'0'),
        'A'..='Z' => Some(ch as u8 - b'A' + 10),
        _ => None,
    }
}

impl TransitionSequence {
    pub fn new(dim: usize, changes: Vec<u8>) -> Result<Self> {
        check_dim(dim)?;
        if let Some(&c) = changes.iter().find(|&&c| c as usize >= dim) {
            return Err(Error::CoordinateOutOfRange {
                coord: c as usize,
                dim,
            });
        }
        Ok(TransitionSequence { dim, changes })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// Parses the compact text notation. Errors carry 1-based line/column.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut changes = Vec::with_capacity(text.len());
        for (line_idx, line) in text.lines().enumerate() {
            for (col_idx, ch) in line.chars().enumerate() {
                if ch.is_whitespace() {
                    continue;
                }
                let (line, column) = (line_idx + 1, col_idx + 1);
                match char_coord(ch) {
                    Some(c) if (c as usize) < dim => changes.push(c),
                    Some(c) => {
                        return Err(Error::CharacterOutOfRange {
                            ch,
                            coord: c as usize,
                            dim,
                            line,
                            column,
                        })
                    }
                    None => return Err(Error::UnknownCharacter { ch, line, column }),
                }
            }
        }
        Ok(TransitionSequence { dim, changes })
    }

    /// Smallest dimension that accommodates every change (at least 1).
    pub fn min_dim(&self) -> usize {
        self.changes.iter().map(|&c| c as usize + 1).max().unwrap_or(1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn changes(&self) -> &[u8] {
        &self.changes
    }

    pub fn into_changes(self) -> Vec<u8> {
        self.changes
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    /// Same changes viewed in a larger (or equal) dimension.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(dim, self.changes.clone())
    }

    pub fn reversed(&self) -> Self {
        let mut changes = self.changes.clone();
        changes.reverse();
        TransitionSequence {
            dim: self.dim,
            changes,
        }
    }

    /// Cyclic rotation starting at change `r`.
    pub fn rotated(&self, r: usize) -> Self {
        let mut changes = self.changes.clone();
        if !changes.is_empty() {
            let len = changes.len();
            changes.rotate_left(r % len);
        }
        TransitionSequence {
            dim: self.dim,
            changes,
        }
    }

    /// Applies a coordinate permutation to every change.
    pub fn permuted(&self, perm: &Permutation) -> Result<Self> {
        if perm.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: perm.dim(),
            });
        }
        Ok(TransitionSequence {
            dim: self.dim,
            changes: self.changes.iter().map(|&c| perm.apply(c)).collect(),
        })
    }

    pub fn concat(&self, other: &TransitionSequence) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut changes = self.changes.clone();
        changes.extend_from_slice(&other.changes);
        Ok(TransitionSequence {
            dim: self.dim,
            changes,
        })
    }

    /// XOR of all unit vectors `e_{c_i}`: the displacement of the whole walk.
    pub fn displacement(&self) -> u64 {
        self.changes.iter().fold(0, |acc, &c| acc ^ (1 << c))
    }

    /// True if every coordinate changes an even number of times.
    pub fn is_closed(&self) -> bool {
        self.displacement() == 0
    }

    /// Number of times each coordinate changes.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim];
        for &c in &self.changes {
            counts[c as usize] += 1;
        }
        counts
    }
}

impl fmt::Display for TransitionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.changes.iter().map(|&c| coord_char(c)).collect();
        f.write_str(&s)
    }
}

/// Formats a sequence in the compact text notation.
pub fn format_sequence(seq: &TransitionSequence) -> String {
    seq.to_string()
}

/// Parses the compact text notation for dimension `dim`.
pub fn parse_sequence(text: &str, dim: usize) -> Result<TransitionSequence> {
    TransitionSequence::parse(text, dim)
}

/// The vertices `x_0 = start, x_1, ..., x_N` visited by `seq`.
pub fn walk(start: Vertex, seq: &TransitionSequence) -> Result<Vec<Vertex>> {
    if start.dim() != seq.dim() {
        return Err(Error::DimensionMismatch {
            left: start.dim(),
            right: seq.dim(),
        });
    }
    let mut out = Vec::with_capacity(seq.len() + 1);
    let mut x = start;
    out.push(x);
    for &c in seq.changes() {
        x = x.flip(c as usize)?;
        out.push(x);
    }
    Ok(out)
}

/// Bit-level walk used by the search inner loops.
pub(crate) fn walk_bits(start: u64, changes: &[u8]) -> Vec<u64> {
    let mut out = Vec::with_capacity(changes.len() + 1);
    let mut x = start;
    out.push(x);
    for &c in changes {
        x ^= 1 << c;
        out.push(x);
    }
    out
}
