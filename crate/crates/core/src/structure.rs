//! Detection of permuted structure in a given coil.

use crate::perm::Permutation;
use crate::sequence::TransitionSequence;

/// A presentation of a coil as `P` segments of length `L`, each the image
/// of the previous one under `perm`, after rotating by `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutedStructure {
    pub offset: usize,
    pub segment_len: usize,
    pub period: usize,
    pub perm: Permutation,
}

/// For every divisor `L` of `N` with `N / L >= 2`, the first rotation (if
/// any) under which the sequence is `π`-periodic with segment length `L`.
/// Coordinates that never occur are completed to fixed points where free.
pub fn detect_permuted(seq: &TransitionSequence) -> Vec<PermutedStructure> {
    let n = seq.len();
    let c = seq.changes();
    let mut out = Vec::new();
    for l in 1..=n / 2 {
        if !n.is_multiple_of(l) {
            continue;
        }
        'rot: for r in 0..l {
            let mut fwd = [u8::MAX; 64];
            let mut back = [u8::MAX; 64];
            for i in 0..n - l {
                let a = c[(r + i) % n] as usize;
                let b = c[(r + i + l) % n] as usize;
                if fwd[a] == u8::MAX && back[b] == u8::MAX {
                    fwd[a] = b as u8;
                    back[b] = a as u8;
                } else if fwd[a] as usize != b {
                    continue 'rot;
                }
            }
            out.push(PermutedStructure {
                offset: r,
                segment_len: l,
                period: n / l,
                perm: complete(&fwd[..seq.dim()], &back[..seq.dim()]),
            });
            break;
        }
    }
    out
}

fn complete(fwd: &[u8], back: &[u8]) -> Permutation {
    let d = fwd.len();
    let mut map = fwd.to_vec();
    for i in 0..d {
        if map[i] == u8::MAX && back[i] == u8::MAX {
            map[i] = i as u8;
        }
    }
    let mut taken = vec![false; d];
    for &m in map.iter().filter(|&&m| m != u8::MAX) {
        taken[m as usize] = true;
    }
    let mut free = (0..d as u8).filter(|&t| !taken[t as usize]);
    for m in map.iter_mut().filter(|m| **m == u8::MAX) {
        *m = free.next().expect("counts agree");
    }
    Permutation::from_one_line(map).expect("bijection")
}

/// Natural: period 2 with the identity permutation, `c_{i + N/2} = c_i`.
pub fn is_natural(seq: &TransitionSequence) -> bool {
    let n = seq.len();
    n.is_multiple_of(2) && n > 0 && {
        let (a, b) = seq.changes().split_at(n / 2);
        a == b
    }
}
