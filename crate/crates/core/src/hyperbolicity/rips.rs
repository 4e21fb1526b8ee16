// SPDX-License-Identifier: Apache-2.0

//! Rips slimness of geodesic triangles, measured on vertices only.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{domain, input, Result};
use crate::graph::{extract_geodesic, DistanceMatrix, Geodesic, Graph, VertexId, UNREACHABLE};
use crate::seed::{self, domain as streams};

/// Largest graph accepted by [`rips_exhaustive`] by default.
pub const DEFAULT_RIPS_EXHAUSTIVE_MAX_N: usize = 40;

const TRIPLE_CHUNK: u64 = 1024;

/// Slimness of one geodesic triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlimnessReport {
    pub triangle: [VertexId; 3],
    /// Sides `a→b`, `b→c`, `c→a`.
    pub sides: [Geodesic; 3],
    /// Max over side vertices of the distance to the union of the other two sides.
    pub slimness: u32,
    /// `(side index, vertex)` attaining the slimness.
    pub witness: (usize, VertexId),
}

/// Slimness of the triangle with sides `a→b`, `b→c`, `c→a`.
pub fn triangle_slimness(g: &Graph, m: &DistanceMatrix, sides: [Geodesic; 3]) -> Result<SlimnessReport> {
    if sides.iter().any(|s| s.vertices.is_empty()) {
        return Err(input("empty side"));
    }
    let [a, b, c] = [sides[0].first(), sides[1].first(), sides[2].first()];
    if sides[0].last() != b || sides[1].last() != c || sides[2].last() != a {
        return Err(input("sides do not close into a triangle a→b, b→c, c→a"));
    }
    for s in &sides {
        if s.vertices.iter().any(|&v| v as usize >= g.n()) {
            return Err(input("side vertex out of range"));
        }
        if m.get(s.first(), s.last()) == UNREACHABLE {
            return Err(domain("triangle spans disconnected vertices"));
        }
        if !s.is_geodesic_in(g, m) {
            return Err(input(format!("side {:?} is not a geodesic", s.vertices)));
        }
    }
    let mut slimness = 0;
    let mut witness = (0, a);
    for i in 0..3 {
        let others = [&sides[(i + 1) % 3], &sides[(i + 2) % 3]];
        for &p in &sides[i].vertices {
            let gap = others
                .iter()
                .flat_map(|s| s.vertices.iter())
                .map(|&q| m.get(p, q))
                .min()
                .expect("sides are non-empty");
            if gap > slimness {
                slimness = gap;
                witness = (i, p);
            }
        }
    }
    Ok(SlimnessReport { triangle: [a, b, c], sides, slimness, witness })
}

/// Maximum slimness over `triples` random vertex triples whose sides are the
/// deterministic geodesics of [`extract_geodesic`]. A lower bound on the
/// Rips constant of the graph.
pub fn rips_lower_bound(g: &Graph, m: &DistanceMatrix, triples: u64, seed: u64) -> Result<SlimnessReport> {
    if triples == 0 {
        return Err(input("triples must be at least 1"));
    }
    if !m.connected() {
        return Err(domain("graph is disconnected"));
    }
    let n = g.n() as u32;
    let chunks = triples.div_ceil(TRIPLE_CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<SlimnessReport> {
            let len = TRIPLE_CHUNK.min(triples - c * TRIPLE_CHUNK);
            let mut rng = seed::stream(seed, streams::TRIPLE_SAMPLE, c);
            let mut best: Option<SlimnessReport> = None;
            for _ in 0..len {
                let [a, b, c] = std::array::from_fn(|_| rng.random_range(0..n));
                let report = geodesic_triangle(g, m, [a, b, c])?;
                if best.as_ref().is_none_or(|r| report.slimness > r.slimness) {
                    best = Some(report);
                }
            }
            Ok(best.expect("chunk is non-empty"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(best
        .into_iter()
        .reduce(|a, b| if b.slimness > a.slimness { b } else { a })
        .expect("at least one chunk"))
}

/// Triangle on `[a, b, c]` with [`extract_geodesic`] sides.
pub fn geodesic_triangle(g: &Graph, m: &DistanceMatrix, [a, b, c]: [VertexId; 3]) -> Result<SlimnessReport> {
    let sides = [extract_geodesic(g, m, a, b)?, extract_geodesic(g, m, b, c)?, extract_geodesic(g, m, c, a)?];
    triangle_slimness(g, m, sides)
}

/// Exact Rips constant over all geodesic triangles (vertices only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RipsExhaustive {
    pub slimness: u32,
    /// Triangle attaining the maximum, and the side vertex that does.
    pub triangle: [VertexId; 3],
    pub vertex: VertexId,
}

/// Exact Rips constant: the supremum over every choice of geodesic sides.
///
/// For a side vertex `p` and an opposite pair `(a, b)`, the largest distance
/// from `p` to any single `a`–`b` geodesic is a bottleneck path value on the
/// shortest-path DAG, computed by dynamic programming. Because the three
/// sides are chosen independently, a triangle's worst case is
/// `max_p min(far(p, b, c), far(p, c, a))` over `p` on any `a`–`b` geodesic.
pub fn rips_exhaustive(g: &Graph, m: &DistanceMatrix, max_n: usize) -> Result<RipsExhaustive> {
    let n = g.n();
    if n > max_n {
        return Err(input(format!("exhaustive Rips refused for n={n} > {max_n}")));
    }
    if !m.connected() {
        return Err(domain("graph is disconnected"));
    }
    // far[p][a * n + b]
    let far: Vec<Vec<u32>> = (0..n as VertexId)
        .into_par_iter()
        .map(|p| {
            let mut table = vec![0u32; n * n];
            for a in 0..n as VertexId {
                for b in a..n as VertexId {
                    let v = farthest_geodesic(g, m, p, a, b);
                    table[a as usize * n + b as usize] = v;
                    table[b as usize * n + a as usize] = v;
                }
            }
            table
        })
        .collect();
    let on_geodesic = |p: VertexId, a: VertexId, b: VertexId| m.get(a, p) + m.get(p, b) == m.get(a, b);
    let idx = |a: VertexId, b: VertexId| a as usize * n + b as usize;
    let mut best = RipsExhaustive { slimness: 0, triangle: [0, 0, 0], vertex: 0 };
    for a in 0..n as VertexId {
        for b in a..n as VertexId {
            for c in b..n as VertexId {
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    for p in 0..n as VertexId {
                        if !on_geodesic(p, x, y) {
                            continue;
                        }
                        let gap = far[p as usize][idx(y, z)].min(far[p as usize][idx(z, x)]);
                        if gap > best.slimness {
                            best = RipsExhaustive { slimness: gap, triangle: [a, b, c], vertex: p };
                        }
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Max over `a`–`b` geodesics of the minimum distance from `p` to the path.
fn farthest_geodesic(g: &Graph, m: &DistanceMatrix, p: VertexId, a: VertexId, b: VertexId) -> u32 {
    let total = m.get(a, b);
    // Vertices on some a–b geodesic, grouped by distance from b.
    let mut layers: Vec<Vec<VertexId>> = vec![Vec::new(); total as usize + 1];
    for x in 0..g.n() as VertexId {
        if m.get(a, x) + m.get(x, b) == total {
            layers[m.get(x, b) as usize].push(x);
        }
    }
    let mut best = vec![0u32; g.n()];
    for layer in &layers {
        for &x in layer {
            let here = m.get(p, x);
            let onward = if x == b {
                u32::MAX
            } else {
                g.neighbors(x)
                    .iter()
                    .filter(|&&y| m.get(y, b) + 1 == m.get(x, b) && m.get(a, y) + m.get(y, b) == total)
                    .map(|&y| best[y as usize])
                    .max()
                    .expect("a geodesic continues toward b")
            };
            best[x as usize] = here.min(onward);
        }
    }
    best[a as usize]
}
