//! Canonical forms of paths and circuits by coordinate renumbering, and
//! classification of invertible coils.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::sequence::TransitionSequence;
use crate::spread::{Code, CodeKind};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeyKind {
    Path,
    Circuit,
    Chain,
}

impl KeyKind {
    fn tag(self) -> u8 {
        match self {
            KeyKind::Path => b'p',
            KeyKind::Circuit => b'c',
            KeyKind::Chain => b'g',
        }
    }
}

/// The canonical representative of an equivalence class.
///
/// For paths and circuits `key` holds one byte per coordinate index; for
/// chains (extended-graph forms) it holds big-endian `u16` vertex labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey {
    pub kind: KeyKind,
    pub dim: usize,
    pub key: Vec<u8>,
}

impl CanonicalKey {
    /// `tag, dim, u32 big-endian length, key bytes`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(6 + self.key.len());
        out.push(self.kind.tag());
        out.push(self.dim as u8);
        out.extend_from_slice(&(self.key.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.key);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |why: &str| Error::MalformedRecord(format!("canonical key: {why}"));
        if bytes.len() < 6 {
            return Err(bad("too short"));
        }
        let kind = match bytes[0] {
            b'p' => KeyKind::Path,
            b'c' => KeyKind::Circuit,
            b'g' => KeyKind::Chain,
            _ => return Err(bad("unknown kind tag")),
        };
        let dim = bytes[1] as usize;
        let len = u32::from_be_bytes([bytes[2], bytes[3], bytes[4], bytes[5]]) as usize;
        if bytes.len() - 6 != len {
            return Err(bad("length prefix does not match"));
        }
        Ok(CanonicalKey {
            kind,
            dim,
            key: bytes[6..].to_vec(),
        })
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let bytes = hex::decode(text.trim()).map_err(|e| Error::MalformedRecord(format!("canonical key: {e}")))?;
        Self::from_bytes(&bytes)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Renames coordinates in order of first appearance. This is the
/// lexicographically least relabeling of the sequence.
pub fn relabel_first_occurrence(seq: &TransitionSequence) -> TransitionSequence {
    let changes = relabel_slice(seq.changes(), seq.dim());
    TransitionSequence::new(seq.dim(), changes).expect("labels stay below dim")
}

/// The renaming used by [`relabel_first_occurrence`], as a full permutation
/// (unused coordinates take the remaining labels in increasing order).
pub fn first_occurrence_permutation(seq: &TransitionSequence) -> Permutation {
    let dim = seq.dim();
    let mut map = vec![u8::MAX; dim];
    let mut next = 0u8;
    for &c in seq.changes() {
        if map[c as usize] == u8::MAX {
            map[c as usize] = next;
            next += 1;
        }
    }
    for m in map.iter_mut() {
        if *m == u8::MAX {
            *m = next;
            next += 1;
        }
    }
    Permutation::from_one_line(map).expect("bijection by construction")
}

pub(crate) fn relabel_slice(changes: &[u8], dim: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(changes.len());
    relabel_into(changes.iter().copied(), dim, &mut out);
    out
}

fn relabel_into(changes: impl Iterator<Item = u8>, dim: usize, out: &mut Vec<u8>) {
    let mut map = [u8::MAX; 64];
    let mut next = 0u8;
    debug_assert!(dim <= 64);
    out.clear();
    for c in changes {
        let slot = &mut map[c as usize];
        if *slot == u8::MAX {
            *slot = next;
            next += 1;
        }
        out.push(*slot);
    }
}

/// Canonical form of a circuit: the least first-occurrence relabeling over
/// all `N` starting points in both directions.
pub fn canonical_circuit(seq: &TransitionSequence) -> Result<CanonicalKey> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if !seq.is_closed() {
        let odd = seq.displacement().trailing_zeros() as usize;
        return Err(Error::NotClosed(odd));
    }
    Ok(CanonicalKey {
        kind: KeyKind::Circuit,
        dim: seq.dim(),
        key: min_circuit_relabeling(seq.changes(), seq.dim()),
    })
}

pub(crate) fn min_circuit_relabeling(changes: &[u8], dim: usize) -> Vec<u8> {
    let n = changes.len();
    let mut best: Vec<u8> = Vec::new();
    let mut cand = Vec::with_capacity(n);
    for r in 0..n {
        relabel_into((0..n).map(|i| changes[(r + i) % n]), dim, &mut cand);
        if best.is_empty() || cand < best {
            std::mem::swap(&mut best, &mut cand);
        }
        relabel_into((0..n).map(|i| changes[(r + n - i) % n]), dim, &mut cand);
        if cand < best {
            std::mem::swap(&mut best, &mut cand);
        }
    }
    best
}

/// Canonical form of a path: the lesser relabeling of the two directions.
pub fn canonical_path(seq: &TransitionSequence) -> CanonicalKey {
    let fwd = relabel_slice(seq.changes(), seq.dim());
    let rev: Vec<u8> = seq.changes().iter().rev().copied().collect();
    let rev = relabel_slice(&rev, seq.dim());
    CanonicalKey {
        kind: KeyKind::Path,
        dim: seq.dim(),
        key: fwd.min(rev),
    }
}

/// Canonical key of a code according to its kind.
pub fn canonical_code(code: &Code) -> CanonicalKey {
    match code.kind() {
        CodeKind::Coil => canonical_circuit(code.seq()).expect("coils close"),
        CodeKind::Snake => canonical_path(code.seq()),
    }
}

/// Invertibility of a coil and the kinds of inversion it admits.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct InversionClass {
    pub invertible: bool,
    pub vertex_fixed: bool,
    pub change_fixed: bool,
}

impl fmt::Display for InversionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.vertex_fixed, self.change_fixed) {
            (false, false) => f.write_str("not invertible"),
            (true, false) => f.write_str("invertible, vertex-fixed"),
            (false, true) => f.write_str("invertible, change-fixed"),
            (true, true) => f.write_str("invertible, vertex-fixed and change-fixed"),
        }
    }
}

/// One orientation-reversing self-isomorphism of a coil: the circuit vertex
/// `x_i` maps to `x_{(offset - i) mod N}`, and change `c_i` to `τ(c_i) = c_{(offset - 1 - i) mod N}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionAlignment {
    pub offset: usize,
    pub tau: Permutation,
}

/// Every offset at which the reversed circuit matches the forward one under
/// a coordinate permutation.
pub fn inversion_alignments(seq: &TransitionSequence) -> Vec<InversionAlignment> {
    let n = seq.len();
    let c = seq.changes();
    let dim = seq.dim();
    let mut out = Vec::new();
    'offsets: for a in 0..n {
        let mut fwd = [u8::MAX; 64];
        let mut back = [u8::MAX; 64];
        for i in 0..n {
            let from = c[i] as usize;
            let to = c[(a + 2 * n - 1 - i) % n];
            if fwd[from] == u8::MAX && back[to as usize] == u8::MAX {
                fwd[from] = to;
                back[to as usize] = from as u8;
            } else if fwd[from] != to {
                continue 'offsets;
            }
        }
        // Complete the partial bijection on unused coordinates.
        let mut free_targets = (0..dim as u8).filter(|&t| back[t as usize] == u8::MAX);
        let map: Vec<u8> = (0..dim)
            .map(|i| {
                if fwd[i] == u8::MAX {
                    free_targets.next().expect("counts match")
                } else {
                    fwd[i]
                }
            })
            .collect();
        out.push(InversionAlignment {
            offset: a,
            tau: Permutation::from_one_line(map).expect("bijection"),
        });
    }
    out
}

/// Classifies a coil by its orientation-reversing self-isomorphisms.
///
/// An alignment at even offset fixes two antipodal circuit vertices; an odd
/// offset fixes two changes instead.
pub fn classify_inversion(coil: &Code) -> Result<InversionClass> {
    if coil.kind() != CodeKind::Coil {
        return Err(Error::NotACoil);
    }
    let mut class = InversionClass::default();
    for al in inversion_alignments(coil.seq()) {
        class.invertible = true;
        if al.offset % 2 == 0 {
            class.vertex_fixed = true;
        } else {
            class.change_fixed = true;
        }
    }
    Ok(class)
}
