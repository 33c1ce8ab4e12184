//! Hypercube vertices as fixed-width bit vectors.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported dimension. Matches the size of the coordinate alphabet
/// used by the sequence text format.
pub const MAX_DIM: usize = 36;

/// A point of the `dim`-dimensional hypercube. Bit `i` of `bits` is coordinate `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Vertex {
    bits: u64,
    dim: u8,
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension { dim, max: MAX_DIM });
    }
    Ok(())
}

#[inline]
pub(crate) fn mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

impl Vertex {
    pub fn new(bits: u64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if bits & !mask(dim) != 0 {
            let coord = 63 - (bits & !mask(dim)).leading_zeros() as usize;
            return Err(Error::CoordinateOutOfRange { coord, dim });
        }
        Ok(Vertex {
            bits,
            dim: dim as u8,
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(0, dim)
    }

    /// The unit vector `e_coord`.
    pub fn unit(coord: usize, dim: usize) -> Result<Self> {
        if coord >= dim {
            return Err(Error::CoordinateOutOfRange { coord, dim });
        }
        Self::new(1 << coord, dim)
    }

    /// Builds a vertex from a coordinate list, coordinate 0 first.
    pub fn from_coords(coords: &[u8]) -> Result<Self> {
        let mut bits = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                0 => {}
                1 => bits |= 1 << i,
                _ => return Err(Error::InvalidArgument(format!("coordinate value {c} is not 0 or 1"))),
            }
        }
        Self::new(bits, coords.len())
    }

    /// Parses a bit string such as `"011000"`, coordinate 0 first.
    pub fn parse_bits(text: &str) -> Result<Self> {
        let coords = text
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidArgument(format!("bad bit character {ch:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_coords(&coords)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coord(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Toggles coordinate `i`.
    pub fn flip(self, i: usize) -> Result<Self> {
        if i >= self.dim() {
            return Err(Error::CoordinateOutOfRange {
                coord: i,
                dim: self.dim(),
            });
        }
        Ok(Vertex {
            bits: self.bits ^ (1 << i),
            dim: self.dim,
        })
    }

    pub fn xor(self, other: Vertex) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Vertex {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.coord(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn same_dim(a: Vertex, b: Vertex) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Number of coordinates in which `a` and `b` differ.
pub fn hamming(a: Vertex, b: Vertex) -> Result<u32> {
    same_dim(a, b)?;
    Ok((a.bits ^ b.bits).count_ones())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(v("00000"), v("00000")).unwrap(), 0);
        assert_eq!(hamming(v("00000"), v("11111")).unwrap(), 5);
        assert_eq!(hamming(v("110000"), v("011000")).unwrap(), 2);
    }

    #[test]
    fn hamming_dimension_mismatch() {
        assert_eq!(
            hamming(v("000"), v("0000")),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn bits_above_dim_rejected() {
        assert!(Vertex::new(0b1000, 3).is_err());
        assert!(Vertex::new(0b111, 3).is_ok());
        assert!(Vertex::new(0, 0).is_err());
        assert!(Vertex::new(0, MAX_DIM + 1).is_err());
    }

    #[test]
    fn display_is_coordinate_zero_first() {
        let x = Vertex::from_coords(&[1, 1, 1, 0, 1, 1]).unwrap();
        assert_eq!(x.to_string(), "111011");
        assert_eq!(x.bits(), 0b110111);
        assert_eq!(v("111011"), x);
    }
}
