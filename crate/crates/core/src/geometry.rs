//! Coordinates, diagonals and the checkerboard shading of the Aztec diamond.
//!
//! Faces are the unit squares of the plane with half-integer centers (i, j).
//! Internally a face is stored by its integer lower-left corner (u, v) =
//! (i - 1/2, j - 1/2), which keeps all arithmetic exact. A face belongs to the
//! rank-N diamond iff |i| + |j| <= N, and sits on diagonal d = j - i + N,
//! an integer in [0, 2N].

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A lattice face, stored by its integer lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Face {
    pub u: i32,
    pub v: i32,
}

impl Face {
    pub fn new(u: i32, v: i32) -> Self {
        Face { u, v }
    }

    /// Twice the center coordinates (2i, 2j); both components are odd.
    pub fn center_doubled(self) -> (i64, i64) {
        (2 * self.u as i64 + 1, 2 * self.v as i64 + 1)
    }

    /// The face one step in the +x direction.
    pub fn east(self) -> Face {
        Face::new(self.u + 1, self.v)
    }

    /// The face one step in the +y direction.
    pub fn north(self) -> Face {
        Face::new(self.u, self.v + 1)
    }

    pub fn west(self) -> Face {
        Face::new(self.u - 1, self.v)
    }

    pub fn south(self) -> Face {
        Face::new(self.u, self.v - 1)
    }

    /// True iff the face lies inside the rank-`n` diamond (|i| + |j| <= n).
    pub fn in_diamond(self, n: u32) -> bool {
        let (ci, cj) = self.center_doubled();
        ci.abs() + cj.abs() <= 2 * n as i64
    }
}

/// Index of a SW-NE diagonal of faces, in [0, 2N].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagonalIndex(pub u32);

/// Checkerboard shade of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shade {
    White,
    Gray,
}

/// The global checkerboard convention: a face is white iff (u + v + offset)
/// is even. The offset that makes the slide/destroy step of the shuffle and
/// the tiling<->partition bijection consistent alternates with the rank,
/// offset = (N + 1) mod 2; `for_rank` returns that convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityConvention {
    pub offset: u8,
}

impl ParityConvention {
    pub fn new(offset: u8) -> Self {
        debug_assert!(offset < 2);
        ParityConvention { offset }
    }

    /// The convention under which the rank-`n` diamond's bijection and
    /// shuffle are valid.
    pub fn for_rank(n: u32) -> Self {
        ParityConvention { offset: ((n + 1) % 2) as u8 }
    }

    pub fn shade(self, f: Face) -> Shade {
        if (f.u + f.v + self.offset as i32).rem_euclid(2) == 0 {
            Shade::White
        } else {
            Shade::Gray
        }
    }

    pub fn is_white(self, f: Face) -> bool {
        self.shade(f) == Shade::White
    }
}

/// All faces of the rank-`n` diamond, in raster order (by v, then u).
pub fn faces_of_rank(n: u32) -> Vec<Face> {
    let n_i = n as i32;
    let mut out = Vec::with_capacity((2 * n * (n + 1)) as usize);
    for v in -n_i..n_i {
        for u in -n_i..n_i {
            let f = Face::new(u, v);
            if f.in_diamond(n) {
                out.push(f);
            }
        }
    }
    out
}

/// Diagonal index d = j - i + N of a face of the rank-`n` diamond.
pub fn diagonal(f: Face, n: u32) -> Result<DiagonalIndex> {
    if !f.in_diamond(n) {
        return Err(Error::invariant(format!(
            "face ({},{}) lies outside the rank-{} diamond",
            f.u, f.v, n
        )));
    }
    Ok(DiagonalIndex((f.v - f.u + n as i32) as u32))
}

/// Diagonal index without the membership check, for hot paths.
#[inline]
pub fn diagonal_unchecked(f: Face, n: u32) -> i32 {
    f.v - f.u + n as i32
}
