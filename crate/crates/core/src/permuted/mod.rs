//! Permuted circuit codes: a coil whose transition sequence is an initial
//! sequence followed by copies permuted by successive powers of `π`.

mod partitions;
mod search;
mod skeleton;

use rayon::prelude::*;

use crate::perm::Permutation;
use crate::vertex::Vertex;

pub use partitions::{partitions, representative, PartitionOrder, Partitions};
pub use search::{
    construct_special, expand, search_initial, search_initial_vec, search_truncated, PermutedCode, SearchLimits,
    SearchStats, SpecialKind,
};
pub use skeleton::{
    dedup_skeleton, derive_skeleton, Centralizer, Freshness, Skeleton, SkeletonDedup, SkeletonPolicy,
    SkeletonRejection,
};

/// Parameters for a sweep over permutations and initial leaps.
#[derive(Clone, Debug)]
pub struct PermutedSearch {
    pub dim: usize,
    pub spread: usize,
    pub min_period: usize,
    pub max_period: Option<usize>,
    pub order: PartitionOrder,
    pub policy: SkeletonPolicy,
    /// Restrict to these cycle types; all partitions of `dim` when empty.
    pub cycle_types: Vec<Vec<usize>>,
    pub truncated: bool,
    pub limits: SearchLimits,
}

impl PermutedSearch {
    pub fn new(dim: usize, spread: usize) -> Self {
        PermutedSearch {
            dim,
            spread,
            min_period: 2,
            max_period: None,
            order: PartitionOrder::ReverseLex,
            policy: SkeletonPolicy::Default,
            cycle_types: Vec::new(),
            truncated: false,
            limits: SearchLimits::default(),
        }
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        if self.cycle_types.is_empty() {
            partitions(self.dim, self.order).map(|p| representative(&p)).collect()
        } else {
            self.cycle_types.iter().map(|p| representative(p)).collect()
        }
    }

    /// Fresh skeletons for `perm` within the period window, in increasing
    /// leap order.
    pub fn skeletons(&self, perm: &Permutation) -> Vec<Skeleton> {
        let mut seen = SkeletonDedup::new();
        let mut out = Vec::new();
        let max = self.max_period.unwrap_or(usize::MAX);
        for bits in 1..1u64 << self.dim {
            let leap = Vertex::new(bits, self.dim).expect("in range");
            let Ok(s) = derive_skeleton(perm, leap, self.spread, self.policy) else {
                continue;
            };
            if s.period() < self.min_period || s.period() > max {
                continue;
            }
            if dedup_skeleton(&s, &mut seen) == Freshness::Fresh {
                out.push(s);
            }
        }
        out
    }

    /// All (permutation, skeleton) tasks in deterministic order.
    pub fn tasks(&self) -> Vec<Skeleton> {
        self.permutations().iter().flat_map(|p| self.skeletons(p)).collect()
    }

    fn run_one(&self, s: &Skeleton, sink: &mut impl FnMut(PermutedCode)) -> SearchStats {
        if self.truncated {
            search_truncated(s, self.spread, &self.limits, sink)
        } else {
            search_initial(s, self.spread, &self.limits, sink)
        }
    }

    /// Runs every task on the current thread, streaming results.
    pub fn run(&self, sink: &mut impl FnMut(PermutedCode)) -> SearchStats {
        let mut stats = SearchStats {
            nodes: 0,
            complete: true,
        };
        for s in self.tasks() {
            stats = stats.merge(self.run_one(&s, sink));
        }
        stats
    }

    /// Runs tasks on the rayon pool; results come back in task order.
    pub fn run_parallel(&self) -> (Vec<PermutedCode>, SearchStats) {
        let per_task: Vec<(Vec<PermutedCode>, SearchStats)> = self
            .tasks()
            .par_iter()
            .map(|s| {
                let mut out = Vec::new();
                let stats = self.run_one(s, &mut |c| out.push(c));
                (out, stats)
            })
            .collect();
        let mut codes = Vec::new();
        let mut stats = SearchStats {
            nodes: 0,
            complete: true,
        };
        for (c, s) in per_task {
            codes.extend(c);
            stats = stats.merge(s);
        }
        (codes, stats)
    }
}

/// Natural coils: identity permutation, period 2.
pub fn search_natural(d: usize, k: usize, limits: &SearchLimits, sink: &mut impl FnMut(PermutedCode)) -> SearchStats {
    let cfg = PermutedSearch {
        min_period: 2,
        max_period: Some(2),
        cycle_types: vec![vec![1; d]],
        limits: limits.clone(),
        ..PermutedSearch::new(d, k)
    };
    cfg.run(sink)
}

pub fn search_natural_vec(d: usize, k: usize, limits: &SearchLimits) -> (Vec<PermutedCode>, SearchStats) {
    let mut out = Vec::new();
    let stats = search_natural(d, k, limits, &mut |c| out.push(c));
    (out, stats)
}
