// SPDX-License-Identifier: Apache-2.0

//! Ringed trees, span-bounded ringed trees and random ringed/binary trees.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use super::spec::{GKind, SpanBound};
use crate::error::{input, Result};
use crate::graph::{Graph, VertexId};
use crate::ringed::{address_table, lca_height_unchecked, ring_distance_unchecked, TreeAddress, MAX_LEVEL};
use crate::seed::{self, domain, StreamRng};

fn check_levels(k: u32, min: u32) -> Result<()> {
    if k < min || k > MAX_LEVEL {
        Err(input(format!("k={k} outside [{min}, {MAX_LEVEL}]")))
    } else {
        Ok(())
    }
}

/// Parent/child edges of the complete binary tree with `k` levels.
pub(crate) fn tree_edges(k: u32) -> Vec<(VertexId, VertexId)> {
    (1..k)
        .flat_map(|level| {
            (0..1u64 << level).map(move |pos| {
                let a = TreeAddress { level, pos };
                (a.parent().expect("level >= 1").id(), a.id())
            })
        })
        .collect()
}

/// Ring edges `p -- p+1 mod 2^level` for every level `1..k`. Level 1 yields
/// its single edge twice; graph construction collapses it.
pub(crate) fn ring_edges(k: u32) -> Vec<(VertexId, VertexId)> {
    (1..k)
        .flat_map(|level| {
            (0..1u64 << level).map(move |pos| {
                let a = TreeAddress { level, pos };
                (a.id(), a.shifted(1).id())
            })
        })
        .collect()
}

/// `RT(k)` and its address table (entry `i` is the address of vertex `i`).
pub fn gen_ringed_tree(k: u32) -> Result<(Graph, Vec<TreeAddress>)> {
    check_levels(k, 1)?;
    let mut edges = tree_edges(k);
    edges.extend(ring_edges(k));
    let graph = Graph::from_edges((1usize << k) - 1, edges)?;
    Ok((graph, address_table(k)))
}

/// Output of a span-bounded ringed tree draw.
#[derive(Clone, Debug)]
pub struct SpanBounded {
    pub graph: Graph,
    /// Set when `f(n) < 1`, in which case no edges were added.
    pub empty_span: bool,
}

/// `RT(k)` plus, for each vertex at levels `1..k`, one edge to a uniformly
/// random same-level vertex at ring distance in `1..=f(n)`.
pub fn gen_rt_f(k: u32, span: SpanBound, seed: u64) -> Result<SpanBounded> {
    check_levels(k, 2)?;
    let n = (1u64 << k) - 1;
    let f = span.eval(n);
    let mut edges = tree_edges(k);
    edges.extend(ring_edges(k));
    if f >= 1 {
        let extra: Vec<_> = (1..n as VertexId)
            .into_par_iter()
            .map(|id| {
                let a = TreeAddress::from_id(id);
                let size = a.ring_size();
                let reach = f.min(size / 2);
                // Distinct same-level vertices within `reach`: +1..+reach, then
                // -1..-reach skipping the antipode when it was already counted.
                let backward = if 2 * reach == size { reach - 1 } else { reach };
                let mut rng = seed::stream(seed, domain::RT_SPAN, id as u64);
                let pick = rng.random_range(0..reach + backward);
                let target = if pick < reach {
                    a.shifted(pick as i64 + 1)
                } else {
                    a.shifted(-((pick - reach) as i64 + 1))
                };
                (id, target.id())
            })
            .collect();
        edges.extend(extra);
    }
    Ok(SpanBounded { graph: Graph::from_edges(n as usize, edges)?, empty_span: f < 1 })
}

/// Leaf-to-leaf closeness weight `g(u, v)` for leaves at positions `p != q`
/// on a ring of `size` vertices.
pub fn leaf_weight(g_kind: GKind, alpha: f64, size: u64, p: u64, q: u64) -> f64 {
    match g_kind {
        GKind::ExpRing => (-alpha * ring_distance_unchecked(size, p, q) as f64).exp(),
        GKind::PowRing => (ring_distance_unchecked(size, p, q) as f64).powf(-alpha),
        GKind::LcaHeight => (-alpha * lca_height_unchecked(p, q) as f64).exp2(),
    }
}

/// Class decomposition of the leaf law: classes are ring distances (ring
/// laws) or LCA heights, each holding a known number of equally weighted
/// leaves.
pub(crate) struct LeafLaw {
    g_kind: GKind,
    size: u64,
    /// `(class value, member count, per-member weight)`
    classes: Vec<(u64, u64, f64)>,
    index: WeightedIndex<f64>,
}

impl LeafLaw {
    pub(crate) fn new(g_kind: GKind, alpha: f64, leaf_level: u32) -> Self {
        let size = 1u64 << leaf_level;
        let classes: Vec<(u64, u64, f64)> = match g_kind {
            GKind::ExpRing | GKind::PowRing => (1..=size / 2)
                .map(|r| {
                    let count = if 2 * r == size { 1 } else { 2 };
                    (r, count, leaf_weight(g_kind, alpha, size, 0, r))
                })
                .collect(),
            GKind::LcaHeight => (1..=leaf_level as u64)
                .map(|h| (h, 1u64 << (h - 1), (-alpha * h as f64).exp2()))
                .collect(),
        };
        let index = WeightedIndex::new(classes.iter().map(|&(_, c, w)| c as f64 * w))
            .expect("at least two leaves");
        LeafLaw { g_kind, size, classes, index }
    }

    /// `(class value, total class weight)` pairs; the normalizer is their sum.
    pub(crate) fn class_weights(&self) -> Vec<(u64, f64)> {
        self.classes.iter().map(|&(v, c, w)| (v, c as f64 * w)).collect()
    }

    pub(crate) fn normalizer(&self) -> f64 {
        self.classes.iter().map(|&(_, c, w)| c as f64 * w).sum()
    }

    pub(crate) fn sample(&self, p: u64, rng: &mut StreamRng) -> u64 {
        let (value, count, _) = self.classes[self.index.sample(rng)];
        match self.g_kind {
            GKind::ExpRing | GKind::PowRing => {
                let forward = (p + value) % self.size;
                if count == 2 && rng.random::<bool>() {
                    (p + self.size - value) % self.size
                } else {
                    forward
                }
            }
            GKind::LcaHeight => {
                let low = value - 1;
                let flipped = p ^ (1u64 << low);
                let mask = (1u64 << low) - 1;
                (flipped & !mask) | (rng.random::<u64>() & mask)
            }
        }
    }
}

/// Long-range edges among the leaves of a `k`-level tree.
pub(crate) fn leaf_edges(
    k: u32,
    g_kind: GKind,
    alpha: f64,
    edges_per_node: u32,
    independent: bool,
    seed: u64,
) -> Vec<(VertexId, VertexId)> {
    let level = k - 1;
    let size = 1u64 << level;
    let law = LeafLaw::new(g_kind, alpha, level);
    let norm = law.normalizer();
    let leaf = |pos: u64| TreeAddress { level, pos }.id();
    (0..size)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut rng = seed::stream(seed, domain::TREE_LONG, p);
            let out: Vec<_> = if independent {
                (0..size)
                    .filter(|&q| q != p)
                    .filter(|&q| {
                        let prob = (edges_per_node as f64 * leaf_weight(g_kind, alpha, size, p, q) / norm).min(1.0);
                        rng.random::<f64>() < prob
                    })
                    .map(|q| (leaf(p), leaf(q)))
                    .collect()
            } else {
                (0..edges_per_node).map(|_| (leaf(p), leaf(law.sample(p, &mut rng)))).collect()
            };
            out
        })
        .collect()
}
