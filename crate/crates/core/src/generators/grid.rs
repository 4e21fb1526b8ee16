// SPDX-License-Identifier: Apache-2.0

//! `d`-dimensional grids and the grid small-world generator.
//!
//! Long-range targets are drawn by distance class: first a grid distance `r`
//! with weight `count(r) * r^-gamma`, then a uniform vertex among the
//! `count(r)` vertices at that distance. This is the same law as weighting
//! every vertex by `r^-gamma` but needs only `O(d * side)` weights per table.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use super::spec::exact_root;
use crate::error::{input, Result};
use crate::graph::VertexId;
use crate::seed::{self, domain, StreamRng};

/// Coordinates of a grid vertex, each in `[0, side)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridCoord {
    pub coords: Vec<u32>,
}

/// L1 grid distance; per axis `min(|dx|, side - |dx|)` when wrapping.
pub fn grid_distance(a: &GridCoord, b: &GridCoord, side: u32, wrap: bool) -> u64 {
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(&x, &y)| axis_distance(x, y, side, wrap) as u64)
        .sum()
}

#[inline]
fn axis_distance(x: u32, y: u32, side: u32, wrap: bool) -> u32 {
    let diff = x.abs_diff(y);
    if wrap {
        diff.min(side - diff)
    } else {
        diff
    }
}

/// Shape of a `d`-dimensional grid with `side^d` vertices. Vertex ids are
/// mixed-radix with the first axis least significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub side: u32,
    pub d: u32,
    pub wrap: bool,
}

impl Grid {
    pub fn new(n: usize, d: u32, wrap: bool) -> Result<Self> {
        match exact_root(n, d) {
            Some(side) if side >= 2 => Ok(Grid { side: side as u32, d, wrap }),
            _ => Err(input(format!("n={n} is not a perfect {d}-th power of an integer >= 2"))),
        }
    }

    pub fn n(&self) -> usize {
        (self.side as usize).pow(self.d)
    }

    pub fn coord(&self, id: VertexId) -> GridCoord {
        let mut rest = id;
        let coords = (0..self.d)
            .map(|_| {
                let c = rest % self.side;
                rest /= self.side;
                c
            })
            .collect();
        GridCoord { coords }
    }

    pub fn id(&self, c: &GridCoord) -> VertexId {
        c.coords.iter().rev().fold(0, |acc, &x| acc * self.side + x)
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> u64 {
        let (mut a, mut b) = (u, v);
        let mut total = 0u64;
        for _ in 0..self.d {
            total += axis_distance(a % self.side, b % self.side, self.side, self.wrap) as u64;
            a /= self.side;
            b /= self.side;
        }
        total
    }

    /// Base grid edges (duplicates possible when `side == 2` with wrap).
    pub fn base_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges = Vec::with_capacity(self.n() * self.d as usize);
        let mut stride = 1u32;
        for _ in 0..self.d {
            for u in 0..self.n() as VertexId {
                let x = (u / stride) % self.side;
                if x + 1 < self.side {
                    edges.push((u, u + stride));
                } else if self.wrap {
                    edges.push((u, u - x * stride));
                }
            }
            stride *= self.side;
        }
        edges
    }

    /// Largest per-axis distance.
    fn axis_max(&self) -> u32 {
        if self.wrap {
            self.side / 2
        } else {
            self.side - 1
        }
    }

    /// Number of axis offsets at each per-axis distance `t`, seen from
    /// coordinate `x`.
    fn axis_counts(&self, x: u32) -> Vec<f64> {
        let max = self.axis_max();
        (0..=max)
            .map(|t| {
                if t == 0 {
                    1.0
                } else if self.wrap {
                    if 2 * t == self.side {
                        1.0
                    } else {
                        2.0
                    }
                } else {
                    (t <= x) as u32 as f64 + (x + t < self.side) as u32 as f64
                }
            })
            .collect()
    }

    /// Offsets from `x` realizing per-axis distance `t`, in increasing order.
    fn axis_targets(&self, x: u32, t: u32) -> ([u32; 2], usize) {
        if t == 0 {
            return ([x, x], 1);
        }
        let s = self.side;
        if self.wrap {
            let fwd = (x + t) % s;
            let back = (x + s - t) % s;
            if fwd == back {
                ([fwd, fwd], 1)
            } else {
                ([fwd.min(back), fwd.max(back)], 2)
            }
        } else {
            match (t <= x, x + t < s) {
                (true, true) => ([x - t, x + t], 2),
                (true, false) => ([x - t, x - t], 1),
                (false, true) => ([x + t, x + t], 1),
                (false, false) => unreachable!("no vertex at axis distance {t} from {x}"),
            }
        }
    }
}

/// Exact law of the grid distance to a uniformly drawn target under weight
/// `r^-gamma`, for one source vertex. For wrapped grids every source shares
/// one table.
pub(crate) struct ClassSampler {
    axis: Vec<Vec<f64>>,
    /// `ways[i][t]`: number of offset vectors over axes `i..d` with L1 length `t`.
    ways: Vec<Vec<f64>>,
    classes: Option<WeightedIndex<f64>>,
}

impl ClassSampler {
    pub(crate) fn new(grid: &Grid, source: &GridCoord, gamma: f64) -> Self {
        let axis: Vec<Vec<f64>> = source.coords.iter().map(|&x| grid.axis_counts(x)).collect();
        let d = axis.len();
        let max_total = grid.axis_max() as usize * d;
        let mut ways = vec![vec![0.0; max_total + 1]; d + 1];
        ways[d][0] = 1.0;
        for i in (0..d).rev() {
            let (head, tail) = ways.split_at_mut(i + 1);
            let (cur, next) = (&mut head[i], &tail[0]);
            for (t, &c) in axis[i].iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                for (s, &w) in next.iter().enumerate() {
                    if w != 0.0 && t + s <= max_total {
                        cur[t + s] += c * w;
                    }
                }
            }
        }
        let weights: Vec<f64> = ways[0]
            .iter()
            .enumerate()
            .map(|(r, &count)| if r == 0 { 0.0 } else { count * (r as f64).powf(-gamma) })
            .collect();
        let classes = WeightedIndex::new(&weights).ok();
        ClassSampler { axis, ways, classes }
    }

    /// `(r, count(r) * r^-gamma)` for every reachable distance `r >= 1`.
    pub(crate) fn class_weights(&self, gamma: f64) -> Vec<(u64, f64)> {
        self.ways[0]
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c > 0.0)
            .map(|(r, &c)| (r as u64, c * (r as f64).powf(-gamma)))
            .collect()
    }

    fn sample_distance(&self, rng: &mut StreamRng) -> usize {
        self.classes.as_ref().expect("grid has at least two vertices").sample(rng)
    }

    /// Draws a target vertex: a distance class, then a uniform vertex in it.
    pub(crate) fn sample(&self, grid: &Grid, source: &GridCoord, rng: &mut StreamRng) -> VertexId {
        let mut left = self.sample_distance(rng);
        let mut coords = Vec::with_capacity(source.coords.len());
        let last = source.coords.len() - 1;
        for (i, &x) in source.coords.iter().enumerate() {
            if i == last {
                // the remaining offset is forced
                let (targets, count) = grid.axis_targets(x, left as u32);
                let j = if count == 2 { rng.random_range(0..2) } else { 0 };
                coords.push(targets[j]);
                break;
            }
            let next = &self.ways[i + 1];
            let weight = |t: usize| if t <= left { self.axis[i][t] * next[left - t] } else { 0.0 };
            let total: f64 = (0..self.axis[i].len()).map(weight).sum();
            let mut pick = rng.random::<f64>() * total;
            let mut chosen = None;
            for t in 0..self.axis[i].len() {
                let w = weight(t);
                if w > 0.0 {
                    chosen = Some(t);
                    if pick < w {
                        break;
                    }
                    pick -= w;
                }
            }
            let t = chosen.expect("class has at least one vertex");
            let (targets, count) = grid.axis_targets(x, t as u32);
            let j = if count == 2 { rng.random_range(0..2) } else { 0 };
            coords.push(targets[j]);
            left -= t;
        }
        grid.id(&GridCoord { coords })
    }
}

/// Long-range edges of the default linking mode: each vertex draws
/// `edges_per_node` targets.
pub(crate) fn drawn_edges(grid: &Grid, gamma: f64, edges_per_node: u32, seed: u64) -> Vec<(VertexId, VertexId)> {
    let shared = grid.wrap.then(|| ClassSampler::new(grid, &grid.coord(0), gamma));
    (0..grid.n() as VertexId)
        .into_par_iter()
        .flat_map_iter(|u| {
            let source = grid.coord(u);
            let local;
            let sampler = match &shared {
                Some(s) => s,
                None => {
                    local = ClassSampler::new(grid, &source, gamma);
                    &local
                }
            };
            let mut rng = seed::stream(seed, domain::KSW_DRAW, u as u64);
            (0..edges_per_node)
                .map(|_| (u, sampler.sample(grid, &source, &mut rng)))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Long-range edges of the independent linking mode: each unordered pair is
/// linked with probability `min(1, d0 * r^-gamma / sum_{i=1}^{side} i^(d-1-gamma))`.
pub(crate) fn independent_edges(grid: &Grid, gamma: f64, d0: u32, seed: u64) -> Vec<(VertexId, VertexId)> {
    let norm: f64 = (1..=grid.side).map(|i| (i as f64).powf(grid.d as f64 - 1.0 - gamma)).sum();
    let max_r = grid.axis_max() as usize * grid.d as usize;
    let prob: Vec<f64> = (0..=max_r)
        .map(|r| if r == 0 { 0.0 } else { (d0 as f64 * (r as f64).powf(-gamma) / norm).min(1.0) })
        .collect();
    let n = grid.n() as VertexId;
    (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut rng = seed::stream(seed, domain::KSW_PAIR, u as u64);
            let prob = &prob;
            (u + 1..n)
                .filter(move |&v| rng.random::<f64>() < prob[grid.distance(u, v) as usize])
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        })
        .collect()
}
