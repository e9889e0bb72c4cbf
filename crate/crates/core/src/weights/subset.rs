use std::fmt;

use crate::error::{Error, Result};

/// Largest dimension a [`CoordSubset`] can address.
pub const MAX_DIM: usize = 64;

/// A subset `u ⊆ {0, .., dim-1}` of coordinates, stored as a bitmask.
///
/// Indices are 0-based internally; [`fmt::Display`] and the file formats use
/// 1-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CoordSubset {
    bits: u64,
    dim: usize,
}

fn full_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

impl CoordSubset {
    pub fn new(bits: u64, dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        if bits & !full_mask(dim) != 0 {
            let index = 63 - (bits & !full_mask(dim)).leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Ok(Self { bits, dim })
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Self { bits: 0, dim }
    }

    pub fn full(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Self {
            bits: full_mask(dim),
            dim,
        }
    }

    pub fn singleton(index: usize, dim: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Self::new(1u64 << index, dim)
    }

    /// Builds a subset from 0-based indices.
    pub fn from_indices(indices: &[usize], dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        let mut bits = 0u64;
        for &i in indices {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            bits |= 1u64 << i;
        }
        Ok(Self { bits, dim })
    }

    /// Builds a subset from 1-based indices, as used in files and on the
    /// command line.
    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self> {
        let zero_based = indices
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or(Error::Parse("coordinate indices are 1-based".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(&zero_based, dim)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.dim
    }

    /// Cardinality `|u|`.
    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, index: usize) -> bool {
        index < self.dim && self.bits >> index & 1 == 1
    }

    pub fn complement(self) -> Self {
        Self {
            bits: !self.bits & full_mask(self.dim),
            dim: self.dim,
        }
    }

    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            bits: self.bits | other.bits,
            dim: self.dim,
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            bits: self.bits & other.bits,
            dim: self.dim,
        }
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Member indices in ascending order (0-based).
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn one_based(self) -> Vec<usize> {
        self.indices().map(|i| i + 1).collect()
    }

    /// All `2^dim` subsets of `{0, .., dim-1}` in ascending bitmask order.
    pub fn all(dim: usize) -> impl Iterator<Item = Self> {
        assert!(dim < 64, "cannot enumerate the power set of {dim} coordinates");
        (0..1u64 << dim).map(move |bits| Self { bits, dim })
    }

    /// All subsets `v ⊆ self`, in ascending bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = Self> {
        let full = self.bits;
        let dim = self.dim;
        // Walk submasks downward, then reverse so the order is ascending.
        let mut out = Vec::with_capacity(1usize << self.len().min(30));
        let mut sub = full;
        loop {
            out.push(Self { bits: sub, dim });
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & full;
        }
        out.into_iter().rev()
    }
}

impl fmt::Display for CoordSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}
