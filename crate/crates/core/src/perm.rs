//! Coordinate permutations, in one-line (`mapping[i] = π(i)`) and cycle notation.

use std::fmt;

use crate::error::{Error, Result};
use crate::sequence::{char_coord, coord_char};
use crate::vertex::check_dim;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    map: Vec<u8>,
}

impl Permutation {
    pub fn identity(dim: usize) -> Self {
        Permutation {
            map: (0..dim as u8).collect(),
        }
    }

    /// `i -> (i + 1) mod dim`.
    pub fn rotation(dim: usize) -> Self {
        Permutation {
            map: (0..dim).map(|i| ((i + 1) % dim) as u8).collect(),
        }
    }

    pub fn from_one_line(map: Vec<u8>) -> Result<Self> {
        check_dim(map.len())?;
        let mut seen = vec![false; map.len()];
        for &m in &map {
            let m = m as usize;
            if m >= map.len() || seen[m] {
                return Err(Error::InvalidPermutation(format!(
                    "{map:?} is not a bijection on 0..{}",
                    map.len()
                )));
            }
            seen[m] = true;
        }
        Ok(Permutation { map })
    }

    /// Parses one-line notation such as `"345201"` (the image of 0, 1, 2, ...).
    pub fn parse_one_line(text: &str) -> Result<Self> {
        let map = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .map(|ch| {
                char_coord(ch).ok_or_else(|| Error::InvalidPermutation(format!("bad character {ch:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_one_line(map)
    }

    /// Parses cycle notation such as `"(123450)(786)9"` for dimension `dim`.
    ///
    /// `(a b c)` maps a to b, b to c and c to a. Characters outside parentheses
    /// are fixed points; coordinates that are not mentioned are fixed as well.
    pub fn parse_cycles(text: &str, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut map: Vec<u8> = (0..dim as u8).collect();
        let mut mentioned = vec![false; dim];
        let mut current: Option<Vec<u8>> = None;
        let mention = |c: u8, mentioned: &mut Vec<bool>| -> Result<()> {
            if c as usize >= dim {
                return Err(Error::InvalidPermutation(format!(
                    "coordinate {} out of range for dimension {dim}",
                    c
                )));
            }
            if mentioned[c as usize] {
                return Err(Error::InvalidPermutation(format!(
                    "coordinate {} appears more than once",
                    coord_char(c)
                )));
            }
            mentioned[c as usize] = true;
            Ok(())
        };
        for ch in text.chars() {
            match ch {
                c if c.is_whitespace() || c == ',' => {}
                '(' => {
                    if current.is_some() {
                        return Err(Error::InvalidPermutation("nested '('".into()));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    let cycle = current
                        .take()
                        .ok_or_else(|| Error::InvalidPermutation("unbalanced ')'".into()))?;
                    for (i, &a) in cycle.iter().enumerate() {
                        map[a as usize] = cycle[(i + 1) % cycle.len()];
                    }
                }
                _ => {
                    let c = char_coord(ch)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad character {ch:?}")))?;
                    mention(c, &mut mentioned)?;
                    if let Some(cycle) = current.as_mut() {
                        cycle.push(c);
                    }
                }
            }
        }
        if current.is_some() {
            return Err(Error::InvalidPermutation("unbalanced '('".into()));
        }
        Ok(Permutation { map })
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    pub fn one_line(&self) -> &[u8] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, c: u8) -> u8 {
        self.map[c as usize]
    }

    /// Moves bit `i` of `v` to position `π(i)`.
    #[inline]
    pub fn apply_bits(&self, v: u64) -> u64 {
        let mut out = 0;
        let mut rest = v;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.map[i];
        }
        out
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.dim(), other.dim());
        Permutation {
            map: other.map.iter().map(|&i| self.map[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = vec![0u8; self.dim()];
        for (i, &m) in self.map.iter().enumerate() {
            map[m as usize] = i as u8;
        }
        Permutation { map }
    }

    pub fn pow(&self, p: usize) -> Permutation {
        let mut out = Permutation::identity(self.dim());
        for _ in 0..p % self.order().max(1) {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m as usize)
    }

    /// Cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.dim()];
        let mut out = Vec::new();
        for start in 0..self.dim() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i as u8);
                i = self.map[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in non-increasing order (a partition of `dim`).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, lcm)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Cycle notation: non-trivial cycles in parentheses, fixed points bare.
    pub fn cycle_notation(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles() {
            if cycle.len() == 1 {
                s.push(coord_char(cycle[0]));
            } else {
                s.push('(');
                s.extend(cycle.iter().map(|&c| coord_char(c)));
                s.push(')');
            }
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
