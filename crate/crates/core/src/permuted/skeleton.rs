//! Skeletons of permuted codes: the chain of segment start vertices implied
//! by a permutation and an initial leap, and their deduplication under the
//! centralizer of the permutation.

use std::collections::HashMap;

use crate::extended::for_each_permutation;
use crate::perm::Permutation;
use crate::vertex::Vertex;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SkeletonPolicy {
    /// Reject only start vertices that repeat before the chain closes.
    #[default]
    Default,
    /// Also require distance at least `k` between all starts (assumes `L >= k`).
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    perm: Permutation,
    leaps: Vec<u64>,
    starts: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonRejection {
    ZeroLeap,
    /// Start `q` equals the earlier start `p` without closing at the origin.
    RevisitedStart { p: usize, q: usize },
    /// Strict policy: starts `p` and `q` are closer than the spread.
    TooClose { p: usize, q: usize, distance: u32 },
}

impl Skeleton {
    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn dim(&self) -> usize {
        self.perm.dim()
    }

    pub fn leap0(&self) -> Vertex {
        Vertex::new(self.leaps[0], self.dim()).expect("in range")
    }

    pub(crate) fn leap0_bits(&self) -> u64 {
        self.leaps[0]
    }

    /// Leap vectors, one per segment.
    pub fn leaps(&self) -> &[u64] {
        &self.leaps
    }

    /// Segment start vertices; `starts()[0]` is the origin.
    pub fn starts(&self) -> &[u64] {
        &self.starts
    }

    pub fn period(&self) -> usize {
        self.leaps.len()
    }

    /// The chain `x_0^(0), ..., x_0^(P-1), x_0^(0)` for extended-graph use.
    pub fn chain(&self) -> Vec<Vertex> {
        self.starts
            .iter()
            .chain(std::iter::once(&0))
            .map(|&s| Vertex::new(s, self.dim()).expect("in range"))
            .collect()
    }
}

/// Iterates the permuted-leap rule from `leap0` until the start vertices
/// return to the origin, which fixes the period.
pub fn derive_skeleton(
    perm: &Permutation,
    leap0: Vertex,
    k: usize,
    policy: SkeletonPolicy,
) -> Result<Skeleton, SkeletonRejection> {
    debug_assert_eq!(perm.dim(), leap0.dim());
    if leap0.is_zero() {
        return Err(SkeletonRejection::ZeroLeap);
    }
    let mut leaps = vec![leap0.bits()];
    let mut starts = vec![0u64];
    let mut x = leap0.bits();
    let mut leap = leap0.bits();
    while x != 0 {
        if let Some(p) = starts.iter().position(|&s| s == x) {
            return Err(SkeletonRejection::RevisitedStart { p, q: starts.len() });
        }
        if policy == SkeletonPolicy::Strict {
            for (p, &s) in starts.iter().enumerate() {
                let distance = (s ^ x).count_ones();
                if (distance as usize) < k {
                    return Err(SkeletonRejection::TooClose {
                        p,
                        q: starts.len(),
                        distance,
                    });
                }
            }
        }
        starts.push(x);
        leap = perm.apply_bits(leap);
        leaps.push(leap);
        x ^= leap;
    }
    Ok(Skeleton {
        perm: perm.clone(),
        leaps,
        starts,
    })
}

/// Centralizer of a permutation: every `σ` with `σπ = πσ`.
#[derive(Clone, Debug)]
pub struct Centralizer {
    perm: Permutation,
}

/// Dimension from which the centralizer is built from the cycle structure
/// instead of filtering all `d!` permutations.
pub const STRUCTURAL_CENTRALIZER_DIM: usize = 10;

impl Centralizer {
    pub fn new(perm: &Permutation) -> Self {
        Centralizer { perm: perm.clone() }
    }

    /// All elements. Brute force below [`STRUCTURAL_CENTRALIZER_DIM`],
    /// structural above.
    pub fn elements(&self) -> Vec<Permutation> {
        if self.perm.dim() < STRUCTURAL_CENTRALIZER_DIM {
            self.brute_force()
        } else {
            self.structural()
        }
    }

    pub fn brute_force(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        for_each_permutation(self.perm.dim(), |s| {
            let sigma = Permutation::from_one_line(s.to_vec()).expect("bijection");
            if sigma.commutes_with(&self.perm) {
                out.push(sigma);
            }
        });
        out.sort();
        out
    }

    /// Each element maps cycle `j` onto an equal-length cycle `β(j)` with a
    /// rotation `r_j`: `σ(π^t(a_j)) = π^(t + r_j)(a_β(j))`.
    pub fn structural(&self) -> Vec<Permutation> {
        let cycles = self.perm.cycles();
        let d = self.perm.dim();
        let mut out = Vec::new();
        let mut map = vec![0u8; d];
        let mut used = vec![false; cycles.len()];
        fn rec(
            j: usize,
            cycles: &[Vec<u8>],
            used: &mut [bool],
            map: &mut [u8],
            out: &mut Vec<Permutation>,
        ) {
            if j == cycles.len() {
                out.push(Permutation::from_one_line(map.to_vec()).expect("bijection"));
                return;
            }
            let len = cycles[j].len();
            for b in 0..cycles.len() {
                if used[b] || cycles[b].len() != len {
                    continue;
                }
                used[b] = true;
                for r in 0..len {
                    for t in 0..len {
                        map[cycles[j][t] as usize] = cycles[b][(t + r) % len];
                    }
                    rec(j + 1, cycles, used, map, out);
                }
                used[b] = false;
            }
        }
        rec(0, &cycles, &mut used, &mut map, &mut out);
        out.sort();
        out
    }

    /// A generating set: one rotation per cycle, and the aligned swap of each
    /// pair of consecutive equal-length cycles.
    pub fn generators(&self) -> Vec<Permutation> {
        let cycles = self.perm.cycles();
        let d = self.perm.dim();
        let mut gens = Vec::new();
        for cycle in &cycles {
            if cycle.len() > 1 {
                let mut map: Vec<u8> = (0..d as u8).collect();
                for (t, &a) in cycle.iter().enumerate() {
                    map[a as usize] = cycle[(t + 1) % cycle.len()];
                }
                gens.push(Permutation::from_one_line(map).expect("bijection"));
            }
        }
        let mut by_len: HashMap<usize, Vec<&Vec<u8>>> = HashMap::new();
        for cycle in &cycles {
            by_len.entry(cycle.len()).or_default().push(cycle);
        }
        let mut lens: Vec<_> = by_len.keys().copied().collect();
        lens.sort_unstable();
        for len in lens {
            for pair in by_len[&len].windows(2) {
                let mut map: Vec<u8> = (0..d as u8).collect();
                for t in 0..len {
                    map[pair[0][t] as usize] = pair[1][t];
                    map[pair[1][t] as usize] = pair[0][t];
                }
                gens.push(Permutation::from_one_line(map).expect("bijection"));
            }
        }
        gens
    }

    /// The orbit of a vertex (as bits) under the centralizer, by closure
    /// over the generators.
    pub fn orbit(&self, v: u64) -> Vec<u64> {
        let gens = self.generators();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = g.apply_bits(x);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut out: Vec<u64> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freshness {
    Fresh,
    Duplicate,
}

/// Remembers accepted initial leaps per permutation. A leap is a duplicate
/// when it is the image of an accepted leap under the centralizer.
#[derive(Debug, Default)]
pub struct SkeletonDedup {
    per_perm: HashMap<Permutation, PermEntry>,
}

#[derive(Debug)]
struct PermEntry {
    centralizer: Centralizer,
    covered: Vec<u64>,
}

impl SkeletonDedup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, skeleton: &Skeleton) -> Freshness {
        let perm = skeleton.perm();
        let entry = self.per_perm.entry(perm.clone()).or_insert_with(|| PermEntry {
            centralizer: Centralizer::new(perm),
            covered: vec![0; (1usize << perm.dim()).div_ceil(64)],
        });
        let v = skeleton.leap0_bits();
        if entry.covered[(v / 64) as usize] >> (v % 64) & 1 == 1 {
            return Freshness::Duplicate;
        }
        for w in entry.centralizer.orbit(v) {
            entry.covered[(w / 64) as usize] |= 1 << (w % 64);
        }
        Freshness::Fresh
    }
}

/// Records the skeleton's leap if it is new, reporting whether it was.
pub fn dedup_skeleton(s: &Skeleton, seen: &mut SkeletonDedup) -> Freshness {
    seen.check(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap()
    }

    #[test]
    fn six_leap_chain() {
        let perm = Permutation::parse_one_line("345201").unwrap();
        let s = derive_skeleton(&perm, v("011000"), 2, SkeletonPolicy::Default).unwrap();
        assert_eq!(s.period(), 6);
        let leaps: Vec<String> = s
            .leaps()
            .iter()
            .map(|&l| Vertex::new(l, 6).unwrap().to_string())
            .collect();
        assert_eq!(leaps, ["011000", "000011", "110000", "000110", "101000", "000101"]);
    }

    #[test]
    fn transposition_period_two() {
        let perm = Permutation::parse_cycles("(24)", 6).unwrap();
        let s = derive_skeleton(&perm, v("111011"), 2, SkeletonPolicy::Default).unwrap();
        assert_eq!(s.period(), 2);
        assert_eq!(s.starts(), &[0, 0b110111]);
    }

    #[test]
    fn rotation_unit_leap_has_period_2d() {
        for d in 2..=12 {
            let s = derive_skeleton(&Permutation::rotation(d), Vertex::unit(0, d).unwrap(), d, SkeletonPolicy::Default)
                .unwrap();
            assert_eq!(s.period(), 2 * d);
        }
    }

    #[test]
    fn zero_leap_rejected() {
        let r = derive_skeleton(&Permutation::identity(3), v("000"), 2, SkeletonPolicy::Default);
        assert_eq!(r, Err(SkeletonRejection::ZeroLeap));
    }

    #[test]
    fn strict_policy_checks_start_distances() {
        // Unit leaps under a rotation give adjacent consecutive starts.
        let perm = Permutation::rotation(4);
        let e0 = Vertex::unit(0, 4).unwrap();
        assert!(derive_skeleton(&perm, e0, 2, SkeletonPolicy::Default).is_ok());
        assert!(matches!(
            derive_skeleton(&perm, e0, 2, SkeletonPolicy::Strict),
            Err(SkeletonRejection::TooClose { distance: 1, .. })
        ));
    }

    #[test]
    fn closure_invariants() {
        for d in 1..=6 {
            for part in super::super::partitions(d, super::super::PartitionOrder::ReverseLex) {
                let perm = super::super::representative(&part);
                for leap in 1..1u64 << d {
                    let s = derive_skeleton(&perm, Vertex::new(leap, d).unwrap(), 2, SkeletonPolicy::Default).unwrap();
                    assert_eq!(s.leaps().iter().fold(0, |a, &l| a ^ l), 0);
                    assert_eq!(s.starts().len(), s.period());
                    let mut sorted = s.starts().to_vec();
                    sorted.sort_unstable();
                    sorted.dedup();
                    assert_eq!(sorted.len(), s.period());
                    for p in 1..s.period() {
                        assert_eq!(s.leaps()[p], perm.apply_bits(s.leaps()[p - 1]));
                        assert_eq!(s.starts()[p], s.starts()[p - 1] ^ s.leaps()[p - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn structural_centralizer_matches_brute_force() {
        for d in 1..=8 {
            for part in super::super::partitions(d, super::super::PartitionOrder::ReverseLex) {
                let c = Centralizer::new(&super::super::representative(&part));
                let bf = c.brute_force();
                assert_eq!(c.structural(), bf, "{part:?}");
                // The orbit closure over generators reaches every centralizer image.
                for v in [1u64, (1 << d) - 1, 0b101 & ((1 << d) - 1)] {
                    let mut images: Vec<u64> = bf.iter().map(|s| s.apply_bits(v)).collect();
                    images.sort_unstable();
                    images.dedup();
                    assert_eq!(c.orbit(v), images, "{part:?} {v:b}");
                }
            }
        }
    }

    #[test]
    fn dedup_examples() {
        let mut seen = SkeletonDedup::new();
        let id = Permutation::identity(4);
        let a = derive_skeleton(&id, v("1100"), 2, SkeletonPolicy::Default).unwrap();
        let b = derive_skeleton(&id, v("0011"), 2, SkeletonPolicy::Default).unwrap();
        assert_eq!(dedup_skeleton(&a, &mut seen), Freshness::Fresh);
        assert_eq!(dedup_skeleton(&b, &mut seen), Freshness::Duplicate);

        let rot = Permutation::rotation(5);
        let a = derive_skeleton(&rot, Vertex::unit(0, 5).unwrap(), 2, SkeletonPolicy::Default).unwrap();
        let b = derive_skeleton(&rot, Vertex::unit(1, 5).unwrap(), 2, SkeletonPolicy::Default).unwrap();
        assert_eq!(dedup_skeleton(&a, &mut seen), Freshness::Fresh);
        assert_eq!(dedup_skeleton(&b, &mut seen), Freshness::Duplicate);
    }

    #[test]
    fn transposition_dedup_by_brute_force() {
        let perm = Permutation::parse_cycles("(24)", 6).unwrap();
        let (x, y) = (v("111011"), v("110111"));
        let related = Centralizer::new(&perm)
            .brute_force()
            .iter()
            .any(|s| s.apply_bits(x.bits()) == y.bits());
        let mut seen = SkeletonDedup::new();
        let a = derive_skeleton(&perm, x, 2, SkeletonPolicy::Default).unwrap();
        let b = derive_skeleton(&perm, y, 2, SkeletonPolicy::Default).unwrap();
        assert_eq!(dedup_skeleton(&a, &mut seen), Freshness::Fresh);
        let expected = if related { Freshness::Duplicate } else { Freshness::Fresh };
        assert_eq!(dedup_skeleton(&b, &mut seen), expected);
        assert!(!related);
    }

    #[test]
    fn dedup_is_symmetric() {
        for part in super::super::partitions(5, super::super::PartitionOrder::ReverseLex) {
            let perm = super::super::representative(&part);
            for a in 1..32u64 {
                for b in 1..32u64 {
                    let sa = derive_skeleton(&perm, Vertex::new(a, 5).unwrap(), 2, SkeletonPolicy::Default).unwrap();
                    let sb = derive_skeleton(&perm, Vertex::new(b, 5).unwrap(), 2, SkeletonPolicy::Default).unwrap();
                    let mut s1 = SkeletonDedup::new();
                    s1.check(&sa);
                    let mut s2 = SkeletonDedup::new();
                    s2.check(&sb);
                    assert_eq!(s1.check(&sb), s2.check(&sa));
                }
            }
        }
    }
}
