// SPDX-License-Identifier: Apache-2.0

//! Ringed-tree geometry: addressing, ring and LCA metrics, canonical
//! geodesics, the Poincaré-disk embedding and the lemma verifiers.
//!
//! Vertices of `RT(k)` are numbered level by level in heap order, so the
//! vertex at `(level, pos)` has id `2^level - 1 + pos`; the children of
//! `(l, p)` are `(l + 1, 2p)` and `(l + 1, 2p + 1)`.

mod canonical;
mod poincare;
mod verify;

pub use canonical::{canonical_geodesic, canonical_path};
pub use poincare::{
    poincare_distance, poincare_embed, quasi_isometry_bounds, verify_quasi_isometry, DiskPoint, QuasiIsometryReport,
    QI_TOLERANCE,
};
pub use verify::{
    verify_structural_lemmas, verify_structural_lemmas_on, LemmaCheck, LemmaConfig, LemmaReport, CANONICAL_IS_GEODESIC,
    CANONICAL_SLIM, DISTANCE_LOWER, DISTANCE_UPPER, HALVING, RECTIFICATION,
};

use crate::error::{input, Result};
use crate::graph::VertexId;

/// Deepest supported level; keeps vertex ids within `u32`.
pub const MAX_LEVEL: u32 = 30;

/// Position of a ringed-tree vertex: `level` 0 is the root, `pos` indexes the
/// `2^level` vertices of that level's ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeAddress {
    pub level: u32,
    pub pos: u64,
}

impl TreeAddress {
    pub fn new(level: u32, pos: u64) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(input(format!("level {level} exceeds {MAX_LEVEL}")));
        }
        if pos >= 1u64 << level {
            return Err(input(format!("position {pos} out of range for level {level}")));
        }
        Ok(TreeAddress { level, pos })
    }

    pub fn root() -> Self {
        TreeAddress { level: 0, pos: 0 }
    }

    pub fn ring_size(self) -> u64 {
        1u64 << self.level
    }

    pub fn parent(self) -> Option<Self> {
        (self.level > 0).then(|| TreeAddress { level: self.level - 1, pos: self.pos / 2 })
    }

    pub fn id(self) -> VertexId {
        ((1u64 << self.level) - 1 + self.pos) as VertexId
    }

    pub fn from_id(id: VertexId) -> Self {
        let level = (id as u64 + 1).ilog2();
        TreeAddress { level, pos: id as u64 + 1 - (1u64 << level) }
    }

    /// Ring neighbour `steps` positions clockwise (negative: counter-clockwise).
    pub fn shifted(self, steps: i64) -> Self {
        let size = self.ring_size() as i64;
        TreeAddress { level: self.level, pos: (self.pos as i64 + steps).rem_euclid(size) as u64 }
    }

    /// Whether this address is a valid vertex of `RT(k)`.
    pub fn in_tree(self, k: u32) -> bool {
        self.level < k && self.pos < self.ring_size()
    }
}

/// Ring distance between positions `p` and `q` on the ring of `level`.
pub fn ring_distance(level: u32, p: u64, q: u64) -> Result<u64> {
    if level > MAX_LEVEL {
        return Err(input(format!("level {level} exceeds {MAX_LEVEL}")));
    }
    let size = 1u64 << level;
    if p >= size || q >= size {
        return Err(input(format!("positions ({p}, {q}) out of range for level {level}")));
    }
    Ok(ring_distance_unchecked(size, p, q))
}

#[inline]
pub(crate) fn ring_distance_unchecked(size: u64, p: u64, q: u64) -> u64 {
    let diff = p.abs_diff(q);
    diff.min(size - diff)
}

/// Ring distance between two same-level addresses.
pub fn address_ring_distance(u: TreeAddress, v: TreeAddress) -> Result<u64> {
    if u.level != v.level {
        return Err(input(format!("levels differ: {} vs {}", u.level, v.level)));
    }
    ring_distance(u.level, u.pos, v.pos)
}

/// Height of the lowest common ancestor of two same-level vertices: the
/// smallest `t` with `p >> t == q >> t`.
pub fn lca_height(u: TreeAddress, v: TreeAddress) -> Result<u32> {
    if u.level != v.level {
        return Err(input(format!("levels differ: {} vs {}", u.level, v.level)));
    }
    Ok(lca_height_unchecked(u.pos, v.pos))
}

#[inline]
pub(crate) fn lca_height_unchecked(p: u64, q: u64) -> u32 {
    64 - (p ^ q).leading_zeros()
}

/// Address table of `RT(k)`: entry `i` is the address of vertex id `i`.
pub fn address_table(k: u32) -> Vec<TreeAddress> {
    (0..k)
        .flat_map(|level| (0..1u64 << level).map(move |pos| TreeAddress { level, pos }))
        .collect()
}
