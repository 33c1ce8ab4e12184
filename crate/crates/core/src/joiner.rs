//! Joining two `d`-snakes into a `(d+1)`-snake `(b, d, σ(c))` or a
//! `(d+1)`-coil `(b, d, σ(c), d)`, choosing the coordinate permutation `σ`
//! lazily while walking through `c`.

use rayon::prelude::*;

use crate::canon::{canonical_path, CanonicalKey};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::sequence::TransitionSequence;
use crate::spread::{verify_spread, Code, CodeKind, SpreadChecker};

/// Partial injective map on `[0, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPermutation {
    images: Vec<Option<u8>>,
    used: u64,
}

impl PartialPermutation {
    pub fn new(dim: usize) -> Self {
        PartialPermutation {
            images: vec![None; dim],
            used: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn get(&self, coord: u8) -> Option<u8> {
        self.images[coord as usize]
    }

    pub fn is_full(&self) -> bool {
        self.used.count_ones() as usize == self.dim()
    }

    pub fn assign(&mut self, coord: u8, image: u8) -> Result<()> {
        if self.images[coord as usize].is_some() {
            return Err(Error::AlreadyAssigned(coord as usize));
        }
        if self.used >> image & 1 == 1 {
            return Err(Error::InvalidPermutation(format!("image {image} is already used")));
        }
        self.images[coord as usize] = Some(image);
        self.used |= 1 << image;
        Ok(())
    }

    pub fn unassign(&mut self, coord: u8) {
        if let Some(img) = self.images[coord as usize].take() {
            self.used &= !(1 << img);
        }
    }

    /// Unused images for `coord`, in increasing order. A full map yields
    /// nothing, signalling exhaustion.
    pub fn next_assignment(&self, coord: u8) -> Result<impl Iterator<Item = u8> + '_> {
        if !self.is_full() && self.images[coord as usize].is_some() {
            return Err(Error::AlreadyAssigned(coord as usize));
        }
        Ok((0..self.dim() as u8).filter(move |&i| self.used >> i & 1 == 0))
    }

    /// Fills unassigned coordinates with the remaining images in order.
    pub fn complete(&self) -> Permutation {
        let mut free = (0..self.dim() as u8).filter(|&i| self.used >> i & 1 == 0);
        let map: Vec<u8> = self
            .images
            .iter()
            .map(|img| img.unwrap_or_else(|| free.next().expect("counts agree")))
            .collect();
        Permutation::from_one_line(map).expect("bijection")
    }
}

#[derive(Clone, Debug)]
pub struct JoinTask {
    pub first: Code,
    pub second: Code,
    pub target: CodeKind,
    pub spread: usize,
}

impl JoinTask {
    pub fn new(first: Code, second: Code, target: CodeKind) -> Result<Self> {
        for code in [&first, &second] {
            if code.kind() != CodeKind::Snake {
                return Err(Error::InvalidArgument("join inputs must be snakes".into()));
            }
        }
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: second.dim(),
            });
        }
        if first.spread() != second.spread() {
            return Err(Error::InvalidArgument(format!(
                "spread mismatch: {} vs {}",
                first.spread(),
                second.spread()
            )));
        }
        crate::vertex::check_dim(first.dim() + 1)?;
        let spread = first.spread();
        Ok(JoinTask {
            first,
            second,
            target,
            spread,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct JoinLimits {
    pub max_nodes: Option<u64>,
    pub max_results: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinResult {
    pub code: Code,
    /// `σ`, with coordinates absent from the second snake completed in order.
    pub sigma: Permutation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JoinStats {
    pub nodes: u64,
    pub results: usize,
    pub complete: bool,
}

struct Joiner<'a, F: FnMut(JoinResult)> {
    task: &'a JoinTask,
    checker: SpreadChecker,
    sigma: PartialPermutation,
    stats: JoinStats,
    limits: &'a JoinLimits,
    stop: bool,
    sink: &'a mut F,
}

impl<F: FnMut(JoinResult)> Joiner<'_, F> {
    fn push(&mut self, c: u8) -> bool {
        self.stats.nodes += 1;
        if self.limits.max_nodes.is_some_and(|m| self.stats.nodes > m) {
            self.stop = true;
            self.stats.complete = false;
            return false;
        }
        if self.checker.push_unchecked(c) {
            true
        } else {
            self.checker.pop().expect("pushed");
            false
        }
    }

    fn finish(&mut self) {
        let d = self.task.first.dim() as u8;
        let ok = match self.task.target {
            CodeKind::Snake => true,
            CodeKind::Coil => {
                let ok = self.push(d);
                let closed = ok && self.checker.close();
                if ok {
                    self.checker.pop().expect("pushed");
                }
                if !closed {
                    return;
                }
                true
            }
        };
        if !ok {
            return;
        }
        let mut seq = self.checker.sequence();
        if self.task.target == CodeKind::Coil {
            let mut changes = seq.into_changes();
            changes.push(d);
            seq = TransitionSequence::new(d as usize + 1, changes).expect("in range");
        }
        let code = Code::new_unchecked(self.task.target, self.task.spread, seq);
        (self.sink)(JoinResult {
            code,
            sigma: self.sigma.complete(),
        });
        self.stats.results += 1;
        if self.limits.max_results.is_some_and(|m| self.stats.results >= m) {
            self.stop = true;
        }
    }

    fn run(&mut self, i: usize) {
        let changes = self.task.second.seq().changes();
        if i == changes.len() {
            self.finish();
            return;
        }
        let y = changes[i];
        if let Some(img) = self.sigma.get(y) {
            if self.push(img) {
                self.run(i + 1);
                self.checker.pop().expect("pushed");
            }
            return;
        }
        let images: Vec<u8> = self.sigma.next_assignment(y).expect("unassigned").collect();
        for img in images {
            if self.stop {
                return;
            }
            self.sigma.assign(y, img).expect("free image");
            if self.push(img) {
                self.run(i + 1);
                self.checker.pop().expect("pushed");
            }
            self.sigma.unassign(y);
        }
    }
}

/// Streams every join of the task's snakes, one per distinct restriction
/// of `σ` to the coordinates used by the second snake.
pub fn join(task: &JoinTask, limits: &JoinLimits, sink: &mut impl FnMut(JoinResult)) -> JoinStats {
    let d = task.first.dim();
    let mut joiner = Joiner {
        task,
        checker: SpreadChecker::new(task.target, d + 1, task.spread).expect("checked dims"),
        sigma: PartialPermutation::new(d),
        stats: JoinStats {
            complete: true,
            ..Default::default()
        },
        limits,
        stop: false,
        sink,
    };
    let head: Vec<u8> = task.first.seq().changes().iter().copied().chain([d as u8]).collect();
    let mut pushed = 0;
    for c in head {
        if !joiner.push(c) {
            break;
        }
        pushed += 1;
    }
    if pushed == task.first.len() + 1 {
        joiner.run(0);
    }
    joiner.stats
}

pub fn join_vec(task: &JoinTask, limits: &JoinLimits) -> (Vec<JoinResult>, JoinStats) {
    let mut out = Vec::new();
    let stats = join(task, limits, &mut |r| out.push(r));
    (out, stats)
}

/// Parses a pool of snakes, one transition sequence per line; blank lines
/// and lines starting with `#` are skipped. Every entry must be a snake of
/// the given spread.
pub fn parse_pool(text: &str, dim: usize, spread: usize) -> Result<Vec<Code>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let seq = TransitionSequence::parse(line, dim).map_err(|e| relocate(e, no + 1))?;
        verify_spread(CodeKind::Snake, spread, &seq)?.into_result(&seq)?;
        out.push(Code::new_unchecked(CodeKind::Snake, spread, seq));
    }
    Ok(out)
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::UnknownCharacter { ch, column, .. } => Error::UnknownCharacter { ch, line, column },
        Error::CharacterOutOfRange {
            ch, coord, dim, column, ..
        } => Error::CharacterOutOfRange {
            ch,
            coord,
            dim,
            line,
            column,
        },
        other => other,
    }
}

/// Keeps the first snake of each `canonical_path` class.
pub fn dedup_pool(pool: Vec<Code>) -> Vec<Code> {
    let mut seen = std::collections::HashSet::<CanonicalKey>::new();
    pool.into_iter().filter(|c| seen.insert(canonical_path(c.seq()))).collect()
}

/// Ordered pairs `(i, j)` of pool indices, longest combined length first.
pub fn pair_order(pool: &[Code]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..pool.len())
        .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
        .collect();
    pairs.sort_by_key(|&(i, j)| std::cmp::Reverse(pool[i].len() + pool[j].len()));
    pairs
}

/// Deduplicates the pool and joins every ordered pair on the rayon pool.
/// Results come back in pair order. Limits apply per pair.
pub fn join_pool(pool: Vec<Code>, target: CodeKind, limits: &JoinLimits) -> Result<(Vec<JoinResult>, JoinStats)> {
    let pool = dedup_pool(pool);
    let mut tasks = Vec::new();
    for (i, j) in pair_order(&pool) {
        tasks.push(JoinTask::new(pool[i].clone(), pool[j].clone(), target)?);
    }
    let parts: Vec<_> = tasks.par_iter().map(|t| join_vec(t, limits)).collect();
    let mut out = Vec::new();
    let mut stats = JoinStats {
        complete: true,
        ..Default::default()
    };
    for (r, s) in parts {
        out.extend(r);
        stats.nodes += s.nodes;
        stats.results += s.results;
        stats.complete &= s.complete;
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::for_each_permutation;
    use crate::sequence::parse_sequence;
    use std::collections::BTreeSet;

    fn snake(text: &str, d: usize) -> Code {
        Code::new(CodeKind::Snake, 2, parse_sequence(text, d).unwrap()).unwrap()
    }

    #[test]
    fn next_assignment_examples() {
        let p = PartialPermutation::new(3);
        assert_eq!(p.next_assignment(0).unwrap().collect::<Vec<_>>(), [0, 1, 2]);
        let mut p = PartialPermutation::new(3);
        p.assign(0, 1).unwrap();
        assert_eq!(p.next_assignment(2).unwrap().collect::<Vec<_>>(), [0, 2]);
        assert!(matches!(p.next_assignment(0), Err(Error::AlreadyAssigned(0))));
        assert!(p.assign(0, 2).is_err());
        p.assign(1, 0).unwrap();
        p.assign(2, 2).unwrap();
        assert_eq!(p.next_assignment(1).unwrap().count(), 0);
        assert_eq!(p.complete().one_line(), &[1, 0, 2]);
    }

    #[test]
    fn smallest_joins() {
        let task = JoinTask::new(snake("01", 2), snake("01", 2), CodeKind::Coil).unwrap();
        let (found, stats) = join_vec(&task, &JoinLimits::default());
        assert!(stats.complete);
        let id = found.iter().find(|r| r.sigma.is_identity()).expect("identity joins");
        assert_eq!(id.code.seq().to_string(), "012012");
        let task = JoinTask::new(snake("0", 1), snake("0", 1), CodeKind::Coil).unwrap();
        let (found, _) = join_vec(&task, &JoinLimits::default());
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].code.seq().to_string(), "0101");
    }

    #[test]
    fn lengths_and_validity() {
        let b = snake("0120", 3);
        let c = snake("0210", 3);
        for target in [CodeKind::Snake, CodeKind::Coil] {
            let (found, _) = join_vec(&JoinTask::new(b.clone(), c.clone(), target).unwrap(), &JoinLimits::default());
            for r in found {
                let extra = if target == CodeKind::Coil { 2 } else { 1 };
                assert_eq!(r.code.len(), b.len() + c.len() + extra);
                assert!(verify_spread(target, 2, r.code.seq()).unwrap().is_valid());
                let top = r.code.seq().changes().iter().filter(|&&x| x == 3).count();
                assert_eq!(top, extra);
            }
        }
    }

    /// All `d!` permutations tried blindly.
    fn brute_force(b: &Code, c: &Code, target: CodeKind) -> BTreeSet<String> {
        let d = b.dim();
        let mut out = BTreeSet::new();
        for_each_permutation(d, |map| {
            let sigma = Permutation::from_one_line(map.to_vec()).unwrap();
            let mut changes: Vec<u8> = b.seq().changes().to_vec();
            changes.push(d as u8);
            changes.extend(c.seq().changes().iter().map(|&x| sigma.apply(x)));
            if target == CodeKind::Coil {
                changes.push(d as u8);
            }
            let seq = TransitionSequence::new(d + 1, changes).unwrap();
            if verify_spread(target, 2, &seq).unwrap().is_valid() {
                out.insert(seq.to_string());
            }
        });
        out
    }

    #[test]
    fn exhaustive_against_brute_force() {
        for d in [2usize, 3] {
            let pool: Vec<Code> = all_snakes(d);
            for b in &pool {
                for c in &pool {
                    for target in [CodeKind::Snake, CodeKind::Coil] {
                        let task = JoinTask::new(b.clone(), c.clone(), target).unwrap();
                        let (found, _) = join_vec(&task, &JoinLimits::default());
                        let got: BTreeSet<String> = found.iter().map(|r| r.code.seq().to_string()).collect();
                        assert_eq!(got.len(), found.len());
                        assert_eq!(got, brute_force(b, c, target), "b={} c={}", b.seq(), c.seq());
                    }
                }
            }
        }
    }

    fn all_snakes(d: usize) -> Vec<Code> {
        fn go(ch: &mut SpreadChecker, out: &mut Vec<Code>) {
            if !ch.is_empty() {
                out.push(Code::new(CodeKind::Snake, 2, ch.sequence()).unwrap());
            }
            for c in 0..ch.dim() as u8 {
                if ch.push(c).unwrap() {
                    go(ch, out);
                }
                ch.pop().unwrap();
            }
        }
        let mut ch = SpreadChecker::new(CodeKind::Snake, d, 2).unwrap();
        let mut out = Vec::new();
        go(&mut ch, &mut out);
        out
    }

    #[test]
    fn identity_only_is_subset() {
        let b = snake("0120", 3);
        let c = snake("0120", 3);
        let (found, _) = join_vec(&JoinTask::new(b.clone(), c.clone(), CodeKind::Snake).unwrap(), &JoinLimits::default());
        let mut changes = b.seq().changes().to_vec();
        changes.push(3);
        changes.extend_from_slice(c.seq().changes());
        let id = TransitionSequence::new(4, changes).unwrap();
        if verify_spread(CodeKind::Snake, 2, &id).unwrap().is_valid() {
            assert!(found.iter().any(|r| r.code.seq() == &id));
        }
    }

    #[test]
    fn task_validation() {
        let coil = Code::new(CodeKind::Coil, 2, parse_sequence("012012", 3).unwrap()).unwrap();
        assert!(JoinTask::new(coil, snake("01", 3), CodeKind::Coil).is_err());
        assert!(JoinTask::new(snake("01", 3), snake("01", 2), CodeKind::Coil).is_err());
        let s3 = Code::new(CodeKind::Snake, 3, parse_sequence("01", 3).unwrap()).unwrap();
        assert!(JoinTask::new(s3, snake("01", 3), CodeKind::Coil).is_err());
    }

    #[test]
    fn pool_parsing_and_dedup() {
        let text = "# snakes\n0120\n\n2102\n012\n";
        let pool = parse_pool(text, 3, 2).unwrap();
        assert_eq!(pool.len(), 3);
        // 2102 relabels to 0120.
        assert_eq!(dedup_pool(pool.clone()).len(), 2);
        assert!(matches!(
            parse_pool("01\n0x\n", 3, 2),
            Err(Error::UnknownCharacter { line: 2, column: 2, .. })
        ));
        assert!(parse_pool("0101\n", 3, 2).is_err());
        let order = pair_order(&[snake("0", 2), snake("01", 2)]);
        assert_eq!(order[0], (1, 1));
        assert_eq!(order[3], (0, 0));
    }

    #[test]
    fn node_limit() {
        let b = snake("0120", 3);
        let limits = JoinLimits {
            max_nodes: Some(3),
            ..Default::default()
        };
        let (_, stats) = join_vec(&JoinTask::new(b.clone(), b, CodeKind::Snake).unwrap(), &limits);
        assert!(!stats.complete);
    }
}
