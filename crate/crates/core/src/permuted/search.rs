//! Backtracking search for initial sequences of permuted codes.
//!
//! Every change `c` proposed for the initial segment is applied as `π^p(c)`
//! in all `P` segments at once. The segment length `L` is unknown while the
//! search runs: a pair of vertices in different segments sits at circuit
//! distance `αL + β` for known `α, β`, so a pair that would break the spread
//! for large `L` instead caps `L`. The cap only tightens as the search deepens.
//!
//! The map `x -> x_0^(1) ⊕ π(x)` carries segment `q` onto segment `q + 1`
//! isometrically (but `π^P` need not be the identity, so it does not wrap).
//! A pair made of a new vertex and an older one can therefore be shifted so
//! that one of them lies in segment 0: either the new vertex of segment 0
//! against every older vertex, or the new vertex of segment `q` against the
//! older vertices of segment 0.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::sequence::TransitionSequence;
use crate::spread::{Code, CodeKind, SpreadChecker};
use crate::vertex::Vertex;

use super::skeleton::Skeleton;

#[derive(Clone, Debug, Default)]
pub struct SearchLimits {
    /// Longest initial sequence to consider.
    pub max_initial_len: Option<usize>,
    /// Node budget per search call.
    pub max_nodes: Option<u64>,
    /// Emit every result instead of the first-found longest one.
    pub exhaustive: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// False if the node budget stopped the search early.
    pub complete: bool,
}

impl SearchStats {
    pub fn merge(self, other: SearchStats) -> SearchStats {
        SearchStats {
            nodes: self.nodes + other.nodes,
            complete: self.complete && other.complete,
        }
    }
}

/// A coil built from an initial sequence and its permuted copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutedCode {
    pub code: Code,
    pub perm: Permutation,
    pub leap0: Vertex,
    pub initial: TransitionSequence,
    /// Number of segments (the last one possibly truncated).
    pub period: usize,
    /// Index `i` of the last change kept in the final segment.
    pub truncation: Option<usize>,
}

impl PermutedCode {
    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    /// Segment `p` of the code: `π^p` applied to the initial sequence.
    pub fn segment(&self, p: usize) -> &[u8] {
        let l = self.initial.len();
        let all = self.code.seq().changes();
        &all[(p * l).min(all.len())..((p + 1) * l).min(all.len())]
    }
}

/// Concatenates `π^p(initial)` for `p` in `0..period`; with a truncation
/// index `i`, the final segment keeps only its first `i + 1` changes.
pub fn expand(
    initial: &TransitionSequence,
    perm: &Permutation,
    period: usize,
    truncation: Option<usize>,
) -> Result<TransitionSequence> {
    if perm.dim() != initial.dim() {
        return Err(Error::DimensionMismatch {
            left: initial.dim(),
            right: perm.dim(),
        });
    }
    if let Some(i) = truncation {
        if i + 1 >= initial.len() {
            return Err(Error::InvalidArgument(format!(
                "truncation index {i} must be below L - 1 = {}",
                initial.len().saturating_sub(1)
            )));
        }
        if period < 2 {
            return Err(Error::InvalidArgument("truncation needs at least two segments".into()));
        }
    }
    let mut changes = Vec::with_capacity(initial.len() * period);
    let mut seg = initial.changes().to_vec();
    for p in 0..period {
        let keep = match truncation {
            Some(i) if p + 1 == period => i + 1,
            _ => seg.len(),
        };
        changes.extend_from_slice(&seg[..keep]);
        for c in seg.iter_mut() {
            *c = perm.apply(*c);
        }
    }
    TransitionSequence::new(initial.dim(), changes)
}

/// Fixed points of `π` that agree on the leap can be swapped without
/// changing the skeleton, so they are introduced in increasing order.
/// Returns, per coordinate, the mask of smaller block members.
fn interchangeable_prefix_masks(perm: &Permutation, leap0: u64) -> Vec<u64> {
    let d = perm.dim();
    let mut masks = vec![0u64; d];
    for c in 0..d {
        if perm.apply(c as u8) as usize != c {
            continue;
        }
        for b in 0..c {
            if perm.apply(b as u8) as usize == b && (leap0 >> b & 1) == (leap0 >> c & 1) {
                masks[c] |= 1 << b;
            }
        }
    }
    masks
}

/// Floor of `(num) / den` for the cap `L <= (D - β) / α`, or `None` if negative.
#[inline]
fn cap(num: i64, den: i64) -> i64 {
    if num < 0 {
        -1
    } else {
        num / den
    }
}

struct InitialSearch<'a, F: FnMut(PermutedCode)> {
    skeleton: &'a Skeleton,
    d: usize,
    k: usize,
    period: usize,
    leap0: u64,
    /// `images[p * d + c] = π^p(c)`.
    images: Vec<u8>,
    /// `verts[t * P + p] = x_t^(p)`.
    verts: Vec<u64>,
    changes: Vec<u8>,
    used: Vec<u64>,
    prefix_masks: Vec<u64>,
    max_len: usize,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
    exhaustive: bool,
    best: Option<PermutedCode>,
    sink: &'a mut F,
}

impl<F: FnMut(PermutedCode)> InitialSearch<'_, F> {
    /// Cap on `L` from the newest segment-0 vertex at index `t`, or `None`
    /// if the vertex is invalid for every `L > t`.
    #[inline]
    fn cap_for_new(&self, t: usize, v: u64, bound: i64) -> Option<i64> {
        let p = self.period;
        let k = self.k;
        let mut bound = bound;
        let ti = t as i64;
        for j in 0..=t {
            let row = &self.verts[j * p..(j + 1) * p];
            for (q, &x) in row.iter().enumerate() {
                if q == 0 && j == t {
                    continue;
                }
                let dist = (x ^ v).count_ones() as usize;
                if dist >= k {
                    continue;
                }
                if q == 0 {
                    if dist < k.min(t - j) {
                        return None;
                    }
                    continue;
                }
                let (dist, j) = (dist as i64, j as i64);
                let (qi, pi) = (q as i64, p as i64);
                // Forward distance q*L + (j - t), backward (P - q)*L + (t - j).
                let fwd = cap(dist - (j - ti), qi);
                let bwd = cap(dist - (ti - j), pi - qi);
                bound = bound.min(fwd.max(bwd));
                if bound <= ti {
                    return None;
                }
            }
        }
        let new_row = &self.verts[t * p..(t + 1) * p];
        for (q, &w) in new_row.iter().enumerate().skip(1) {
            for j in 0..t {
                let dist = (self.verts[j * p] ^ w).count_ones() as usize;
                if dist >= k {
                    continue;
                }
                let (dist, j) = (dist as i64, j as i64);
                let (qi, pi) = (q as i64, p as i64);
                // Forward distance q*L + (t - j), backward (P - q)*L + (j - t).
                let fwd = cap(dist - (ti - j), qi);
                let bwd = cap(dist - (j - ti), pi - qi);
                bound = bound.min(fwd.max(bwd));
                if bound <= ti {
                    return None;
                }
            }
        }
        Some(bound)
    }

    fn emit(&mut self, len: usize) {
        let d = self.d;
        let initial = TransitionSequence::new(d, self.changes.clone()).expect("coordinates < d");
        let perm = self.skeleton.perm().clone();
        let seq = expand(&initial, &perm, self.period, None).expect("dimensions agree");
        debug_assert_eq!(seq.len(), len * self.period);
        let found = PermutedCode {
            code: Code::new_unchecked(CodeKind::Coil, self.k, seq),
            perm,
            leap0: self.skeleton.leap0(),
            initial,
            period: self.period,
            truncation: None,
        };
        if self.exhaustive {
            (self.sink)(found);
        } else if self.best.as_ref().is_none_or(|b| b.initial.len() < len) {
            self.best = Some(found);
        }
    }

    fn dfs(&mut self, t: usize, bound: i64) {
        if self.aborted {
            return;
        }
        let p = self.period;
        let d = self.d;
        let last = self.changes.last().copied();
        let used = *self.used.last().unwrap();
        let x0 = self.verts[t * p];
        for c in 0..d as u8 {
            if Some(c) == last {
                continue;
            }
            let bit = 1u64 << c;
            if used & bit == 0 && used & self.prefix_masks[c as usize] != self.prefix_masks[c as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.aborted = true;
                return;
            }
            let v = x0 ^ bit;
            let len = t + 1;
            if v == self.leap0 {
                if (len as i64) <= bound && len * p >= 4 && len <= self.max_len {
                    self.changes.push(c);
                    self.emit(len);
                    self.changes.pop();
                }
                continue;
            }
            if len >= self.max_len {
                continue;
            }
            // New vertices of all segments at index t + 1.
            for q in 0..p {
                let img = self.images[q * d + c as usize];
                let x = self.verts[t * p + q] ^ (1u64 << img);
                self.verts.push(x);
            }
            let ok = self.cap_for_new(len, v, bound);
            match ok {
                Some(new_bound) if new_bound > len as i64 => {
                    self.changes.push(c);
                    self.used.push(used | bit);
                    self.dfs(len, new_bound);
                    self.used.pop();
                    self.changes.pop();
                }
                _ => {}
            }
            self.verts.truncate((t + 1) * p);
            if self.aborted {
                return;
            }
        }
    }
}

/// Searches for initial sequences that lead from `x_0^(0)` to `x_0^(1)` and
/// make the whole permuted sequence a spread-`k` coil.
///
/// By default only the first-found longest result is emitted; with
/// `limits.exhaustive` every result is.
pub fn search_initial(
    skeleton: &Skeleton,
    k: usize,
    limits: &SearchLimits,
    sink: &mut impl FnMut(PermutedCode),
) -> SearchStats {
    let d = skeleton.dim();
    let period = skeleton.period();
    let mut images = vec![0u8; period * d];
    let mut power = Permutation::identity(d);
    for q in 0..period {
        for c in 0..d {
            images[q * d + c] = power.apply(c as u8);
        }
        power = skeleton.perm().compose(&power);
    }
    // Caps from the skeleton itself: starts 0 and q sit q*L apart.
    let starts = skeleton.starts();
    let mut bound = i64::MAX;
    for (q, &s) in starts.iter().enumerate().skip(1) {
        let dist = s.count_ones() as i64;
        if (dist as usize) < k {
            let (qi, pi) = (q as i64, period as i64);
            bound = bound.min(cap(dist, qi).max(cap(dist, pi - qi)));
        }
    }
    let vertex_cap = (1usize << d.min(40)) / period;
    let max_len = limits.max_initial_len.unwrap_or(usize::MAX).min(vertex_cap);
    let mut search = InitialSearch {
        skeleton,
        d,
        k,
        period,
        leap0: skeleton.leap0_bits(),
        images,
        verts: starts.to_vec(),
        changes: Vec::new(),
        used: vec![0],
        prefix_masks: interchangeable_prefix_masks(skeleton.perm(), skeleton.leap0_bits()),
        max_len,
        nodes: 0,
        node_limit: limits.max_nodes.unwrap_or(u64::MAX),
        aborted: false,
        exhaustive: limits.exhaustive,
        best: None,
        sink,
    };
    if bound >= 1 {
        search.dfs(0, bound);
    }
    let stats = SearchStats {
        nodes: search.nodes,
        complete: !search.aborted,
    };
    if let Some(best) = search.best.take() {
        (search.sink)(best);
    }
    stats
}

/// Collecting wrapper around [`search_initial`].
pub fn search_initial_vec(skeleton: &Skeleton, k: usize, limits: &SearchLimits) -> (Vec<PermutedCode>, SearchStats) {
    let mut out = Vec::new();
    let stats = search_initial(skeleton, k, limits, &mut |c| out.push(c));
    (out, stats)
}

/// Untruncated results of [`search_initial`] (exhaustively), followed by
/// codes whose final segment is cut short at `c_i^(P-1)` with `i < L - 1`.
///
/// Truncated codes do not need the skeleton to close, so they are found by
/// fixing `L`, searching the initial segment directly, and then extending
/// with forced permuted changes until the walk either closes or fails.
pub fn search_truncated(
    skeleton: &Skeleton,
    k: usize,
    limits: &SearchLimits,
    sink: &mut impl FnMut(PermutedCode),
) -> SearchStats {
    let all = SearchLimits {
        exhaustive: true,
        ..limits.clone()
    };
    let mut stats = search_initial(skeleton, k, &all, sink);
    let d = skeleton.dim();
    let leap0 = skeleton.leap0_bits();
    let max_len = limits
        .max_initial_len
        .unwrap_or(usize::MAX)
        .min((1usize << d.min(40)) / 2);
    let mut state = TruncatedSearch {
        perm: skeleton.perm(),
        leap0,
        k,
        d,
        prefix_masks: interchangeable_prefix_masks(skeleton.perm(), leap0),
        nodes: 0,
        node_limit: limits.max_nodes.unwrap_or(u64::MAX),
        aborted: false,
        checker: SpreadChecker::new(CodeKind::Coil, d, k).expect("valid parameters"),
    };
    for len in 2..=max_len {
        state.fill(len, 0, sink);
        if state.aborted {
            break;
        }
    }
    stats = stats.merge(SearchStats {
        nodes: state.nodes,
        complete: !state.aborted,
    });
    stats
}

struct TruncatedSearch<'a> {
    perm: &'a Permutation,
    leap0: u64,
    k: usize,
    d: usize,
    prefix_masks: Vec<u64>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
    checker: SpreadChecker,
}

impl TruncatedSearch<'_> {
    fn fill(&mut self, len: usize, used: u64, sink: &mut impl FnMut(PermutedCode)) {
        let t = self.checker.len();
        if t == len {
            if self.checker.current() == self.leap0 {
                self.extend(len, sink);
            }
            return;
        }
        let x = self.checker.current();
        for c in 0..self.d as u8 {
            let bit = 1u64 << c;
            if used & bit == 0 && used & self.prefix_masks[c as usize] != self.prefix_masks[c as usize] {
                continue;
            }
            let v = x ^ bit;
            let remaining = len - t - 1;
            let gap = (v ^ self.leap0).count_ones() as usize;
            if gap > remaining || (remaining - gap) % 2 == 1 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.aborted = true;
                return;
            }
            if self.checker.push_unchecked(c) && self.checker.current() != 0 {
                self.fill(len, used | bit, sink);
            }
            self.checker.pop().expect("pushed");
            if self.aborted {
                return;
            }
        }
    }

    /// Applies the forced permuted changes after a complete initial segment.
    fn extend(&mut self, len: usize, sink: &mut impl FnMut(PermutedCode)) {
        let initial: Vec<u8> = self.checker.changes().to_vec();
        let mut seg = initial.clone();
        let mut pushed = 0;
        'segments: for p in 1.. {
            for c in seg.iter_mut() {
                *c = self.perm.apply(*c);
            }
            for (i, &c) in seg.iter().enumerate() {
                let ok = self.checker.push_unchecked(c);
                pushed += 1;
                if !ok {
                    break 'segments;
                }
                if self.checker.current() == 0 {
                    if self.checker.close() && i + 1 < len {
                        let initial = TransitionSequence::new(self.d, initial.clone()).expect("in range");
                        let code = Code::new_unchecked(CodeKind::Coil, self.k, self.checker.sequence());
                        sink(PermutedCode {
                            code,
                            perm: self.perm.clone(),
                            leap0: Vertex::new(self.leap0, self.d).expect("in range"),
                            initial,
                            period: p + 1,
                            truncation: Some(i),
                        });
                    }
                    break 'segments;
                }
            }
        }
        for _ in 0..pushed {
            self.checker.pop().expect("pushed");
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    /// `(0, 1, ..., d-1, 0, 1, ..., d-1)`, spread `d`.
    SpreadD,
    /// Initial sequence `(1, 0)` under `i -> i + 1 mod d`: a coil through all
    /// `d` neighbours of one vertex.
    NeighborsCoil,
}

pub fn construct_special(kind: SpecialKind, d: usize) -> Result<PermutedCode> {
    let perm = Permutation::rotation(d);
    let (initial, k, min) = match kind {
        SpecialKind::SpreadD => (vec![0], d, 2),
        SpecialKind::NeighborsCoil => (vec![1, 0], 2, 3),
    };
    if d < min {
        return Err(Error::InvalidArgument(format!("dimension {d} is below the minimum {min}")));
    }
    let initial = TransitionSequence::new(d, initial)?;
    let leap0 = Vertex::new(initial.displacement(), d)?;
    let period = match kind {
        SpecialKind::SpreadD => 2 * d,
        SpecialKind::NeighborsCoil => d,
    };
    let seq = expand(&initial, &perm, period, None)?;
    Ok(PermutedCode {
        code: Code::new(CodeKind::Coil, k, seq)?,
        perm,
        leap0,
        initial,
        period,
        truncation: None,
    })
}
