//! Integer partitions, one per conjugacy class of permutations.

use crate::perm::Permutation;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PartitionOrder {
    /// From `d` down to `1 + 1 + ... + 1`.
    ReverseLex,
    /// From `1 + 1 + ... + 1` up to `d`; reaches long cycles last.
    Lex,
}

/// Iterator over the partitions of `n`, parts in non-increasing order.
#[derive(Clone, Debug)]
pub struct Partitions {
    current: Option<Vec<usize>>,
    order: PartitionOrder,
}

pub fn partitions(n: usize, order: PartitionOrder) -> Partitions {
    assert!(n >= 1, "partitions of zero are not generated");
    let first = match order {
        PartitionOrder::ReverseLex => vec![n],
        PartitionOrder::Lex => vec![1; n],
    };
    Partitions {
        current: Some(first),
        order,
    }
}

impl Iterator for Partitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        self.current = match self.order {
            PartitionOrder::ReverseLex => prev_lex(&out),
            PartitionOrder::Lex => next_lex(&out),
        };
        Some(out)
    }
}

/// Lexicographic predecessor: split the rightmost part larger than one.
fn prev_lex(a: &[usize]) -> Option<Vec<usize>> {
    let i = a.iter().rposition(|&x| x > 1)?;
    let m = a[i] - 1;
    let mut rest = a.len() - i; // the ones after i, plus the unit taken from a[i]
    let mut out = a[..i].to_vec();
    out.push(m);
    while rest > 0 {
        let part = rest.min(m);
        out.push(part);
        rest -= part;
    }
    Some(out)
}

/// Lexicographic successor: grow the rightmost part that can grow, and
/// refill the tail with ones.
fn next_lex(a: &[usize]) -> Option<Vec<usize>> {
    let mut tail = 0;
    for i in (0..a.len()).rev() {
        let fits = i == 0 || a[i] < a[i - 1];
        if fits && tail >= 1 {
            let mut out = a[..i].to_vec();
            out.push(a[i] + 1);
            out.extend(std::iter::repeat_n(1, tail - 1));
            return Some(out);
        }
        tail += a[i];
    }
    None
}

/// The representative permutation of a cycle type: cycles on consecutive
/// blocks of `0..d`, in the order given (longest first for our partitions).
pub fn representative(partition: &[usize]) -> Permutation {
    let d: usize = partition.iter().sum();
    let mut map = vec![0u8; d];
    let mut start = 0;
    for &len in partition {
        for j in 0..len {
            map[start + j] = (start + (j + 1) % len) as u8;
        }
        start += len;
    }
    Permutation::from_one_line(map).expect("block cycles form a bijection")
}
