//! The extended graph: `2^d` original vertices plus `2d` coordinate vertices,
//! with sequence edges marking chains of hypercube vertices.
//!
//! Canonical forms and orbits are computed by brute force over the hypercube
//! automorphism group (coordinate permutations combined with translations),
//! each of which corresponds to an automorphism of the extended graph that
//! keeps original and coordinate vertices apart.

use std::collections::BTreeSet;

use crate::canon::{CanonicalKey, KeyKind};
use crate::error::{Error, Result};
use crate::sequence::{walk_bits, TransitionSequence};
use crate::vertex::{check_dim, Vertex};

/// Largest dimension handled by the exhaustive automorphism strategy
/// (`2^7 * 7! = 645120` automorphisms).
pub const EXTENDED_MAX_DIM: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedGraph {
    dim: usize,
    /// Undirected sequence edges between original vertices, stored `(min, max)`.
    seq_edges: BTreeSet<(u64, u64)>,
    /// Chain vertices that carry no sequence edge.
    marked: BTreeSet<u64>,
}

/// Vertex numbering: originals are `0..2^d`, coordinate vertex `(i, b)` is `2^d + 2i + b`.
pub fn coordinate_vertex(dim: usize, coord: usize, bit: usize) -> usize {
    (1 << dim) + 2 * coord + bit
}

/// Builds the extended graph of dimension `d` with one sequence edge per
/// consecutive pair of every chain. Chain vertices need not be adjacent.
pub fn build_extended_graph(dim: usize, chains: &[Vec<Vertex>]) -> Result<ExtendedGraph> {
    check_dim(dim)?;
    if dim > 16 {
        return Err(Error::UnsupportedDimension { dim, max: 16 });
    }
    let mut g = ExtendedGraph {
        dim,
        seq_edges: BTreeSet::new(),
        marked: BTreeSet::new(),
    };
    for chain in chains {
        for v in chain {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
        }
        for pair in chain.windows(2) {
            let (a, b) = (pair[0].bits(), pair[1].bits());
            g.seq_edges.insert((a.min(b), a.max(b)));
        }
        if chain.len() == 1 {
            g.marked.insert(chain[0].bits());
        }
    }
    let endpoints = g.endpoints();
    g.marked.retain(|v| !endpoints.contains(v));
    Ok(g)
}

/// Vertices `x_0, ..., x_{N-1}, x_0` of a circuit, starting at the origin.
pub fn circuit_chain(seq: &TransitionSequence) -> Vec<Vertex> {
    let mut xs = walk_bits(0, seq.changes());
    if let Some(last) = xs.last_mut() {
        *last = 0;
    }
    xs.into_iter().map(|x| Vertex::new(x, seq.dim()).expect("in range")).collect()
}

/// Vertices `x_0, ..., x_N` of a path starting at the origin.
pub fn path_chain(seq: &TransitionSequence) -> Vec<Vertex> {
    walk_bits(0, seq.changes())
        .into_iter()
        .map(|x| Vertex::new(x, seq.dim()).expect("in range"))
        .collect()
}

impl ExtendedGraph {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        (1 << self.dim) + 2 * self.dim
    }

    /// Fixed edges: every original vertex to `(i, bit_i(v))`, plus each coordinate pair.
    pub fn fixed_edges(&self) -> Vec<(usize, usize)> {
        let d = self.dim;
        let mut out = Vec::with_capacity((1 << d) * d + d);
        for v in 0..1usize << d {
            for i in 0..d {
                out.push((v, coordinate_vertex(d, i, v >> i & 1)));
            }
        }
        for i in 0..d {
            out.push((coordinate_vertex(d, i, 0), coordinate_vertex(d, i, 1)));
        }
        out
    }

    pub fn sequence_edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.seq_edges.iter().copied()
    }

    fn endpoints(&self) -> BTreeSet<u64> {
        self.seq_edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    fn check_capability(&self) -> Result<()> {
        if self.dim > EXTENDED_MAX_DIM {
            return Err(Error::CapabilityExceeded {
                dim: self.dim,
                max: EXTENDED_MAX_DIM,
            });
        }
        Ok(())
    }

    fn image_key(&self, perm: &[u8], t: u64, edges: &mut Vec<(u16, u16)>, marks: &mut Vec<u16>) {
        let map = |v: u64| -> u16 { (apply(perm, v) ^ t) as u16 };
        edges.clear();
        edges.extend(self.seq_edges.iter().map(|&(a, b)| {
            let (x, y) = (map(a), map(b));
            (x.min(y), x.max(y))
        }));
        edges.sort_unstable();
        marks.clear();
        marks.extend(self.marked.iter().map(|&v| map(v)));
        marks.sort_unstable();
    }
}

#[inline]
fn apply(perm: &[u8], v: u64) -> u64 {
    let mut out = 0;
    let mut rest = v;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << perm[i];
    }
    out
}

/// Visits every permutation of `0..n` (Heap's algorithm).
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    let mut a: Vec<u8> = (0..n as u8).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Canonical form of an extended graph: the least sorted edge list over all
/// hypercube automorphisms applied to the sequence edges.
pub fn canonical_extended(g: &ExtendedGraph) -> Result<CanonicalKey> {
    g.check_capability()?;
    let d = g.dim;
    // The least image always puts some chain vertex at the origin, so only
    // translations that achieve this need to be tried.
    let anchors: Vec<u64> = if g.seq_edges.is_empty() {
        g.marked.iter().copied().collect()
    } else {
        g.endpoints().into_iter().collect()
    };
    let mut best: Option<(Vec<(u16, u16)>, Vec<u16>)> = None;
    let mut edges = Vec::new();
    let mut marks = Vec::new();
    if anchors.is_empty() {
        best = Some((Vec::new(), Vec::new()));
    } else {
        for_each_permutation(d, |perm| {
            for &a in &anchors {
                let t = apply(perm, a);
                g.image_key(perm, t, &mut edges, &mut marks);
                let better = match &best {
                    None => true,
                    Some((be, bm)) => (&edges, &marks) < (be, bm),
                };
                if better {
                    best = Some((edges.clone(), marks.clone()));
                }
            }
        });
    }
    let (edges, marks) = best.expect("set above");
    let mut key = Vec::with_capacity(4 + 4 * edges.len() + 2 * marks.len());
    key.extend_from_slice(&(edges.len() as u16).to_be_bytes());
    for (a, b) in edges {
        key.extend_from_slice(&a.to_be_bytes());
        key.extend_from_slice(&b.to_be_bytes());
    }
    for m in marks {
        key.extend_from_slice(&m.to_be_bytes());
    }
    Ok(CanonicalKey {
        kind: KeyKind::Chain,
        dim: d,
        key,
    })
}

/// Orbits of the original vertices under the automorphisms of the graph with
/// its sequence edges. Each orbit is sorted; orbits are ordered by least member.
pub fn symmetry_orbits(g: &ExtendedGraph) -> Result<Vec<Vec<Vertex>>> {
    g.check_capability()?;
    let d = g.dim;
    let n = 1usize << d;
    let mut adj = vec![0u128; n];
    for &(a, b) in &g.seq_edges {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    let marked: u128 = g.marked.iter().fold(0, |acc, &v| acc | 1 << v);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let endpoints: Vec<u64> = g.endpoints().into_iter().collect();
    let anchor = endpoints.first().copied().or_else(|| g.marked.iter().next().copied());
    let anchor_pool: Vec<u64> = if endpoints.is_empty() {
        g.marked.iter().copied().collect()
    } else {
        endpoints.clone()
    };
    let mut image = vec![0usize; n];
    for_each_permutation(d, |perm| {
        let translations: Vec<u64> = match anchor {
            // An automorphism must carry the anchor onto another chain vertex.
            Some(a) => anchor_pool.iter().map(|&w| apply(perm, a) ^ w).collect(),
            None => (0..n as u64).collect(),
        };
        for t in translations {
            for v in 0..n {
                image[v] = (apply(perm, v as u64) ^ t) as usize;
            }
            let preserves = g.seq_edges.iter().all(|&(a, b)| adj[image[a as usize]] >> image[b as usize] & 1 == 1)
                && g.marked.iter().all(|&v| marked >> image[v as usize] & 1 == 1);
            if !preserves {
                continue;
            }
            for v in 0..n {
                let (ra, rb) = (find(&mut parent, v), find(&mut parent, image[v]));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    });
    let mut orbits: Vec<Vec<Vertex>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[index[r]].push(Vertex::new(v as u64, d)?);
    }
    Ok(orbits)
}
