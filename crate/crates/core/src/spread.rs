//! The spread-k predicate, as a pairwise reference check and as an
//! incremental checker for backtracking searches.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{walk_bits, TransitionSequence};

/// Open path (snake) or closed circuit (coil).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Snake,
    Coil,
}

impl std::str::FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snake" => Ok(CodeKind::Snake),
            "coil" => Ok(CodeKind::Coil),
            _ => Err(Error::InvalidArgument(format!("unknown kind {s:?}"))),
        }
    }
}

impl std::fmt::Display for CodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CodeKind::Snake => "snake",
            CodeKind::Coil => "coil",
        })
    }
}

/// First offending vertex pair: positions `i < j` at Hamming distance `distance`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub distance: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpreadCheck {
    Valid,
    Violated(Violation),
    /// A coil whose changes do not return to the start vertex.
    NotClosed,
    /// A coil with fewer than four changes.
    TooShort,
}

impl SpreadCheck {
    pub fn is_valid(self) -> bool {
        self == SpreadCheck::Valid
    }

    pub fn into_result(self, seq: &TransitionSequence) -> Result<()> {
        match self {
            SpreadCheck::Valid => Ok(()),
            SpreadCheck::Violated(v) => Err(Error::SpreadViolation {
                i: v.i,
                j: v.j,
                distance: v.distance,
            }),
            SpreadCheck::NotClosed => {
                let odd = seq.displacement().trailing_zeros() as usize;
                Err(Error::NotClosed(odd))
            }
            SpreadCheck::TooShort => Err(Error::CoilTooShort(seq.len())),
        }
    }
}

/// Pairwise O(N²) check of the spread-`k` condition.
///
/// Coil: the vertices `x_0..x_{N-1}` must satisfy
/// `D(x_i, x_j) >= min(k, j - i, N + i - j)` and the walk must close.
/// Snake: `x_0..x_N` must satisfy `D(x_i, x_j) >= min(k, j - i)`.
pub fn verify_spread(kind: CodeKind, k: usize, seq: &TransitionSequence) -> Result<SpreadCheck> {
    if k < 1 {
        return Err(Error::InvalidSpread(k));
    }
    let n = seq.len();
    let xs = walk_bits(0, seq.changes());
    let (count, wrap) = match kind {
        CodeKind::Snake => (n + 1, false),
        CodeKind::Coil => {
            if n < 4 {
                return Ok(SpreadCheck::TooShort);
            }
            if xs[n] != 0 {
                return Ok(SpreadCheck::NotClosed);
            }
            (n, true)
        }
    };
    for j in 1..count {
        for i in 0..j {
            let mut need = k.min(j - i);
            if wrap {
                need = need.min(n + i - j);
            }
            let distance = (xs[i] ^ xs[j]).count_ones();
            if (distance as usize) < need {
                return Ok(SpreadCheck::Violated(Violation { i, j, distance }));
            }
        }
    }
    Ok(SpreadCheck::Valid)
}

/// A verified snake or coil.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Code {
    kind: CodeKind,
    spread: usize,
    seq: TransitionSequence,
}

impl Code {
    pub fn new(kind: CodeKind, spread: usize, seq: TransitionSequence) -> Result<Self> {
        verify_spread(kind, spread, &seq)?.into_result(&seq)?;
        Ok(Code { kind, spread, seq })
    }

    /// Skips verification; for search output that has already been checked.
    pub(crate) fn new_unchecked(kind: CodeKind, spread: usize, seq: TransitionSequence) -> Self {
        debug_assert!(
            verify_spread(kind, spread, &seq).map(SpreadCheck::is_valid).unwrap_or(false),
            "unverified {kind} {seq}"
        );
        Code { kind, spread, seq }
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.seq.dim()
    }

    pub fn spread(&self) -> usize {
        self.spread
    }

    pub fn seq(&self) -> &TransitionSequence {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    snake_ok: bool,
    /// Largest circuit length the prefix can still close into.
    coil_bound: usize,
}

/// Stateful spread checker with `push`/`pop`.
///
/// `snake_valid` always tracks the snake predicate of the current prefix.
/// For a coil checker, `push` instead reports whether the prefix can still be
/// completed into a coil (or has just closed into one); `close` tells whether
/// the prefix is itself a valid coil.
///
/// A pair `(i, j)` that breaks the snake bound `min(k, j - i)` is tolerated in
/// coil mode only while the eventual length `N` satisfies `N + i - j <= D`, so
/// each such pair caps `N` at `j - i + D`.
#[derive(Clone, Debug)]
pub struct SpreadChecker {
    kind: CodeKind,
    dim: usize,
    k: usize,
    vertices: Vec<u64>,
    changes: Vec<u8>,
    frames: Vec<Frame>,
}

impl SpreadChecker {
    pub fn new(kind: CodeKind, dim: usize, k: usize) -> Result<Self> {
        crate::vertex::check_dim(dim)?;
        if k < 1 {
            return Err(Error::InvalidSpread(k));
        }
        Ok(SpreadChecker {
            kind,
            dim,
            k,
            vertices: vec![0],
            changes: Vec::new(),
            frames: vec![Frame {
                snake_ok: true,
                coil_bound: usize::MAX,
            }],
        })
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    pub fn changes(&self) -> &[u8] {
        &self.changes
    }

    pub fn current(&self) -> u64 {
        *self.vertices.last().unwrap()
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    /// Appends a change and reports validity for this checker's kind.
    pub fn push(&mut self, c: u8) -> Result<bool> {
        if c as usize >= self.dim {
            return Err(Error::CoordinateOutOfRange {
                coord: c as usize,
                dim: self.dim,
            });
        }
        Ok(self.push_unchecked(c))
    }

    #[inline]
    pub(crate) fn push_unchecked(&mut self, c: u8) -> bool {
        let prev = *self.frames.last().unwrap();
        let j = self.vertices.len();
        let v = self.current() ^ (1 << c);
        let mut snake_ok = prev.snake_ok;
        let mut bound = prev.coil_bound;
        for (i, &x) in self.vertices.iter().enumerate() {
            let d = (x ^ v).count_ones() as usize;
            if d < self.k.min(j - i) {
                snake_ok = false;
                // x_j = x_0 (i = 0, d = 0) gives the bound j: close now or never.
                bound = bound.min(j - i + d);
            }
        }
        self.vertices.push(v);
        self.changes.push(c);
        self.frames.push(Frame {
            snake_ok,
            coil_bound: bound,
        });
        self.is_valid()
    }

    pub fn pop(&mut self) -> Result<u8> {
        let c = self.changes.pop().ok_or(Error::EmptyHistory)?;
        self.vertices.pop();
        self.frames.pop();
        Ok(c)
    }

    /// The snake predicate on the current prefix.
    pub fn snake_valid(&self) -> bool {
        self.frames.last().unwrap().snake_ok
    }

    /// True if the prefix is a valid coil on its own.
    pub fn close(&self) -> bool {
        let n = self.changes.len();
        if n < 4 || self.current() != 0 {
            return false;
        }
        // Constraints come from x_1..x_{n-1}; x_n is x_0 again.
        self.frames[n - 1].coil_bound >= n
    }

    /// True if some continuation (possibly empty) can still form a coil.
    pub fn coil_viable(&self) -> bool {
        let n = self.changes.len();
        if self.current() == 0 && n > 0 {
            return self.close();
        }
        self.frames.last().unwrap().coil_bound > n
    }

    /// Validity according to the checker's kind.
    pub fn is_valid(&self) -> bool {
        match self.kind {
            CodeKind::Snake => self.snake_valid(),
            CodeKind::Coil => self.coil_viable(),
        }
    }

    pub fn sequence(&self) -> TransitionSequence {
        TransitionSequence::new(self.dim, self.changes.clone()).expect("checked on push")
    }
}
