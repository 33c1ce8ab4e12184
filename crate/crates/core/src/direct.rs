//! Direct backtracking search for snakes and coils, with pruning of prefixes
//! that some renumbered subsequence would undercut.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::{canonical_code, relabel_slice, CanonicalKey};
use crate::error::{Error, Result};
use crate::spread::{Code, CodeKind, SpreadChecker};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PruneLevel {
    None,
    #[default]
    Subsequence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChildOrder {
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub dim: usize,
    pub spread: usize,
    pub kind: CodeKind,
    pub max_nodes: Option<u64>,
    /// Stream every code at least this long; `None` streams nothing.
    pub min_report_length: Option<usize>,
    pub prune: PruneLevel,
    pub order: ChildOrder,
}

impl SearchConfig {
    pub fn new(dim: usize, spread: usize, kind: CodeKind) -> Self {
        SearchConfig {
            dim,
            spread,
            kind,
            max_nodes: None,
            min_report_length: None,
            prune: PruneLevel::Subsequence,
            order: ChildOrder::Ascending,
        }
    }

    fn validate(&self) -> Result<()> {
        crate::vertex::check_dim(self.dim)?;
        if self.dim < 2 {
            return Err(Error::InvalidArgument(format!("dimension {} is below 2", self.dim)));
        }
        if self.spread < 1 {
            return Err(Error::InvalidSpread(self.spread));
        }
        Ok(())
    }
}

/// Longest length found and one representative per canonical class at
/// that length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DirectSummary {
    pub max_length: usize,
    pub maximal: BTreeMap<CanonicalKey, Code>,
    pub nodes: u64,
    pub complete: bool,
}

impl DirectSummary {
    pub fn class_count(&self) -> usize {
        self.maximal.len()
    }

    fn record(&mut self, code: &Code) {
        let n = code.len();
        if n < self.max_length {
            return;
        }
        if n > self.max_length {
            self.max_length = n;
            self.maximal.clear();
        }
        self.maximal.entry(canonical_code(code)).or_insert_with(|| code.clone());
    }

    pub fn merge(mut self, other: DirectSummary) -> DirectSummary {
        self.nodes += other.nodes;
        self.complete &= other.complete;
        if other.max_length > self.max_length {
            self.max_length = other.max_length;
            self.maximal = other.maximal;
        } else if other.max_length == self.max_length {
            for (k, v) in other.maximal {
                self.maximal.entry(k).or_insert(v);
            }
        }
        self
    }
}

/// True iff no contiguous subsequence of `prefix`, read forwards or
/// backwards and renumbered by first occurrence, is lexicographically lower
/// than the prefix itself truncated to the same length.
///
/// Tests every subsequence from scratch; the search uses an incremental
/// equivalent.
pub fn prune_check(prefix: &[u8]) -> bool {
    let n = prefix.len();
    for a in 0..n {
        for b in a + 1..=n {
            let fwd = relabel_slice(&prefix[a..b], 64);
            if fwd.as_slice() < &prefix[..b - a] {
                return false;
            }
            let rev: Vec<u8> = prefix[a..b].iter().rev().copied().collect();
            if relabel_slice(&rev, 64).as_slice() < &prefix[..b - a] {
                return false;
            }
        }
    }
    true
}

/// Incremental form of [`prune_check`] for sequences grown one change at a
/// time. Only subsequences ending at the new change are new; forward ones
/// matter only if their shorter version tied with the prefix.
#[derive(Clone, Debug)]
struct Pruner {
    seq: Vec<u8>,
    /// `prefix_max[len]` = one more than the largest label in `seq[..len]`.
    prefix_max: Vec<u8>,
    /// Last position of each coordinate, per depth.
    last_pos: Vec<Vec<usize>>,
    /// Window starts whose renumbered window equals the prefix, per depth.
    tied: Vec<Vec<usize>>,
    dim: usize,
}

const NONE: usize = usize::MAX;

impl Pruner {
    fn new(dim: usize) -> Self {
        Pruner {
            seq: Vec::new(),
            prefix_max: vec![0],
            last_pos: vec![vec![NONE; dim]],
            tied: vec![Vec::new()],
            dim,
        }
    }

    /// Appends `c`; returns false (leaving state unchanged) if the new
    /// prefix is rejected.
    fn push(&mut self, c: u8) -> bool {
        let n = self.seq.len();
        let last = &self.last_pos[n];
        let mut tied = Vec::with_capacity(self.tied[n].len() + 1);
        for &a in self.tied[n].iter().chain(std::iter::once(&n)) {
            let target = if a == 0 { c } else { self.seq[n - a] };
            let label = match last[c as usize] {
                p if p != NONE && p >= a => self.seq[p - a],
                _ => self.prefix_max[n - a],
            };
            if label < target {
                return false;
            }
            if label == target {
                tied.push(a);
            }
        }
        // Backward windows ending at the new change.
        let mut labels = [u8::MAX; 64];
        let mut next = 0u8;
        for m in 0..=n {
            let y = if m == 0 { c } else { self.seq[n - m] } as usize;
            if labels[y] == u8::MAX {
                labels[y] = next;
                next += 1;
            }
            let target = if m == n { c } else { self.seq[m] };
            if labels[y] < target {
                return false;
            }
            if labels[y] > target {
                break;
            }
        }
        let mut pos = last.clone();
        pos[c as usize] = n;
        let new_max = self.prefix_max[n].max(c + 1);
        self.seq.push(c);
        self.prefix_max.push(new_max);
        self.last_pos.push(pos);
        self.tied.push(tied);
        debug_assert!(self.dim <= 64);
        true
    }

    fn pop(&mut self) {
        self.seq.pop();
        self.prefix_max.pop();
        self.last_pos.pop();
        self.tied.pop();
    }
}

struct Dfs<'a, F: FnMut(Code)> {
    cfg: &'a SearchConfig,
    checker: SpreadChecker,
    pruner: Option<Pruner>,
    max_coord: Vec<u8>,
    summary: DirectSummary,
    node_limit: u64,
    aborted: bool,
    sink: &'a mut F,
}

impl<F: FnMut(Code)> Dfs<'_, F> {
    fn new<'a>(cfg: &'a SearchConfig, sink: &'a mut F) -> Dfs<'a, F> {
        Dfs {
            cfg,
            checker: SpreadChecker::new(cfg.kind, cfg.dim, cfg.spread).expect("validated"),
            pruner: (cfg.prune == PruneLevel::Subsequence).then(|| Pruner::new(cfg.dim)),
            max_coord: vec![0],
            summary: DirectSummary {
                complete: true,
                ..Default::default()
            },
            node_limit: cfg.max_nodes.unwrap_or(u64::MAX),
            aborted: false,
            sink,
        }
    }

    fn found(&mut self) {
        let n = self.checker.len();
        if n < self.summary.max_length && self.cfg.min_report_length.is_none_or(|m| n < m) {
            return;
        }
        let code = Code::new_unchecked(self.cfg.kind, self.cfg.spread, self.checker.sequence());
        self.summary.record(&code);
        if self.cfg.min_report_length.is_some_and(|m| n >= m) {
            (self.sink)(code);
        }
    }

    fn candidates(&self) -> Vec<u8> {
        let bound = (*self.max_coord.last().unwrap() as usize).min(self.cfg.dim - 1);
        let last = self.checker.changes().last().copied();
        let mut out: Vec<u8> = (0..=bound as u8).filter(|&c| Some(c) != last).collect();
        if self.cfg.order == ChildOrder::Descending {
            out.reverse();
        }
        out
    }

    /// Pushes `c` if it passes the spread and prune tests. Returns whether
    /// the search should descend.
    fn try_push(&mut self, c: u8) -> Option<bool> {
        if let Some(p) = self.pruner.as_mut() {
            if !p.push(c) {
                return None;
            }
        }
        let ok = self.checker.push_unchecked(c);
        if !ok {
            self.checker.pop().expect("pushed");
            if let Some(p) = self.pruner.as_mut() {
                p.pop();
            }
            return None;
        }
        let top = *self.max_coord.last().unwrap();
        self.max_coord.push(top.max(c + 1));
        let descend = match self.cfg.kind {
            CodeKind::Snake => {
                self.found();
                true
            }
            CodeKind::Coil => {
                if self.checker.current() == 0 {
                    if self.checker.close() {
                        self.found();
                    }
                    false
                } else {
                    true
                }
            }
        };
        Some(descend)
    }

    fn undo(&mut self) {
        self.checker.pop().expect("pushed");
        self.max_coord.pop();
        if let Some(p) = self.pruner.as_mut() {
            p.pop();
        }
    }

    fn run(&mut self) {
        if self.aborted {
            return;
        }
        for c in self.candidates() {
            self.summary.nodes += 1;
            if self.summary.nodes > self.node_limit {
                self.aborted = true;
                self.summary.complete = false;
                return;
            }
            if let Some(descend) = self.try_push(c) {
                if descend {
                    self.run();
                }
                self.undo();
            }
            if self.aborted {
                return;
            }
        }
    }

    /// Collects viable prefixes of exactly `depth` changes.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<u8>>) {
        if self.checker.len() == depth {
            out.push(self.checker.changes().to_vec());
            return;
        }
        for c in self.candidates() {
            self.summary.nodes += 1;
            if let Some(descend) = self.try_push(c) {
                if descend {
                    self.prefixes(depth, out);
                }
                self.undo();
            }
        }
    }
}

/// Runs the search on the current thread. Codes of at least
/// `min_report_length` are streamed to `sink` as they are found.
pub fn direct_search(cfg: &SearchConfig, sink: &mut impl FnMut(Code)) -> Result<DirectSummary> {
    cfg.validate()?;
    let mut dfs = Dfs::new(cfg, sink);
    dfs.run();
    Ok(dfs.summary)
}

/// Splits the tree at `split_depth` and searches the subtrees on the rayon
/// pool. Streamed codes are returned in subtree order. The node budget
/// applies per subtree.
pub fn direct_search_parallel(cfg: &SearchConfig, split_depth: usize) -> Result<(Vec<Code>, DirectSummary)> {
    cfg.validate()?;
    let mut sink = |_: Code| {};
    let mut top = Dfs::new(cfg, &mut sink);
    let mut roots = Vec::new();
    top.prefixes(split_depth, &mut roots);
    // Codes shorter than the split depth were recorded while splitting.
    let mut head = top.summary;
    let head_codes: Vec<Code> = match cfg.min_report_length {
        Some(m) => head.maximal.values().filter(|c| c.len() >= m).cloned().collect(),
        None => Vec::new(),
    };
    let parts: Vec<(Vec<Code>, DirectSummary)> = roots
        .par_iter()
        .map(|prefix| {
            let mut codes = Vec::new();
            let mut sink = |c: Code| codes.push(c);
            let mut dfs = Dfs::new(cfg, &mut sink);
            for &c in prefix {
                let pushed = dfs.try_push(c);
                debug_assert_eq!(pushed, Some(true));
            }
            dfs.run();
            let summary = dfs.summary;
            (codes, summary)
        })
        .collect();
    let mut codes = head_codes;
    for (c, s) in parts {
        codes.extend(c);
        head = head.merge(s);
    }
    Ok((codes, head))
}
