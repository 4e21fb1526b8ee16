// SPDX-License-Identifier: Apache-2.0

use super::{ring_distance_unchecked, TreeAddress};
use crate::error::{input, Result};
use crate::graph::Geodesic;

/// Canonical path between two ringed-tree vertices, as addresses.
///
/// * same level, ring distance at most 3: walk the ring along the shorter
///   arc (on a tie, the arc rising from the lower position);
/// * same level, farther apart: step both endpoints to their parents and
///   recurse;
/// * different levels: step the deeper endpoint to its parent and recurse.
pub fn canonical_path(u: TreeAddress, v: TreeAddress) -> Vec<TreeAddress> {
    let mut front = vec![u];
    let mut back = vec![v];
    let (mut a, mut b) = (u, v);
    loop {
        if a.level > b.level {
            a = a.parent().expect("deeper vertex has a parent");
            front.push(a);
        } else if b.level > a.level {
            b = b.parent().expect("deeper vertex has a parent");
            back.push(b);
        } else {
            let size = a.ring_size();
            let dr = ring_distance_unchecked(size, a.pos, b.pos);
            if dr <= 3 {
                let forward = (b.pos + size - a.pos) % size;
                let step = match forward.cmp(&(size - forward)) {
                    std::cmp::Ordering::Less => 1,
                    std::cmp::Ordering::Greater => -1,
                    // both arcs tie: take the one rising from the lower position,
                    // so u->v and v->u cover the same vertices
                    std::cmp::Ordering::Equal if a.pos < b.pos => 1,
                    std::cmp::Ordering::Equal => -1,
                };
                for i in 1..dr as i64 {
                    front.push(a.shifted(step * i));
                }
                break;
            }
            a = a.parent().expect("ring distance > 3 implies level >= 3");
            b = b.parent().expect("ring distance > 3 implies level >= 3");
            front.push(a);
            back.push(b);
        }
    }
    // a == b means the walks met at a common vertex, counted once
    if front.last() == back.last() {
        back.pop();
    }
    front.extend(back.into_iter().rev());
    front
}

/// Canonical geodesic between two vertices of `RT(k)`, as vertex ids.
pub fn canonical_geodesic(k: u32, u: TreeAddress, v: TreeAddress) -> Result<Geodesic> {
    for a in [u, v] {
        if !a.in_tree(k) {
            return Err(input(format!("address {a:?} not in RT({k})")));
        }
    }
    Ok(Geodesic { vertices: canonical_path(u, v).into_iter().map(TreeAddress::id).collect() })
}
