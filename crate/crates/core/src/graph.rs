// SPDX-License-Identifier: Apache-2.0

//! Immutable simple graphs, BFS distances and geodesic extraction.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{domain, input, Error, Result};

pub type VertexId = u32;

/// Hop count returned by [`bfs_distances`] for vertices not reachable from
/// the source.
pub const UNREACHABLE: u32 = u32::MAX;

/// Default memory budget for a dense [`DistanceMatrix`] (2 GiB).
pub const DEFAULT_MATRIX_CAP: u64 = 2 << 30;

/// Undirected, unweighted simple graph stored as sorted adjacency (CSR).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph on `n` vertices from undirected edges. Duplicate edges
    /// (in either orientation) are collapsed; self-loops are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if n > VertexId::MAX as usize {
            return Err(input(format!("vertex count {n} exceeds u32 ids")));
        }
        let mut arcs = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(input(format!("edge ({u}, {v}) out of range for n={n}")));
            }
            if u == v {
                return Err(input(format!("self-loop at vertex {u}")));
            }
            arcs.push((u, v));
            arcs.push((v, u));
        }
        arcs.par_sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.into_iter().map(|(_, v)| v).collect();
        Ok(Graph { offsets, targets })
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        let u = u as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.neighbors(u).len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Full invariant audit: sorted duplicate-free adjacency, no self-loops,
    /// symmetric arcs. Returns a description of the first violation.
    pub fn audit(&self) -> Result<(), String> {
        for u in 0..self.n() as VertexId {
            let adj = self.neighbors(u);
            for w in adj.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("adjacency of {u} not strictly sorted"));
                }
            }
            for &v in adj {
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !self.has_edge(v, u) {
                    return Err(format!("arc {u}->{v} has no reverse"));
                }
            }
        }
        if self.targets.len() % 2 != 0 {
            return Err("odd arc count".into());
        }
        Ok(())
    }

    /// Graph with the given undirected edge removed (used for negative controls).
    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Result<Self> {
        if !self.has_edge(u, v) {
            return Err(input(format!("edge ({u}, {v}) not present")));
        }
        let edges = self.edges().filter(|&e| e != (u.min(v), u.max(v)));
        Graph::from_edges(self.n(), edges.collect::<Vec<_>>())
    }
}

fn check_vertex(g: &Graph, v: VertexId) -> Result<()> {
    if (v as usize) < g.n() {
        Ok(())
    } else {
        Err(input(format!("vertex {v} out of range for n={}", g.n())))
    }
}

/// Single-source hop distances; unreachable vertices get [`UNREACHABLE`].
pub fn bfs_distances(g: &Graph, source: VertexId) -> Result<Vec<u32>> {
    check_vertex(g, source)?;
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in g.neighbors(u) {
            if dist[v as usize] == UNREACHABLE {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

/// Storage cell of a [`DistanceMatrix`]. The maximum value is the sentinel
/// for unreachable pairs.
pub trait DistCell: Copy + Send + Sync + Ord + 'static {
    const SENTINEL: Self;
    const BYTES: u64;
    fn from_u32(v: u32) -> Self;
    fn to_u32(self) -> u32;
}

macro_rules! dist_cell {
    ($t:ty) => {
        impl DistCell for $t {
            const SENTINEL: Self = <$t>::MAX;
            const BYTES: u64 = std::mem::size_of::<$t>() as u64;
            #[inline(always)]
            fn from_u32(v: u32) -> Self {
                v as $t
            }
            #[inline(always)]
            fn to_u32(self) -> u32 {
                self as u32
            }
        }
    };
}

dist_cell!(u8);
dist_cell!(u16);
dist_cell!(u32);

#[derive(Clone, Debug, PartialEq, Eq)]
enum Store {
    U8(Vec<u8>),
    U16(Vec<u16>),
    U32(Vec<u32>),
}

/// Callback over the typed storage of a [`DistanceMatrix`]; lets hot loops be
/// monomorphized per cell width.
pub trait MatrixVisitor {
    type Output;
    fn visit<T: DistCell>(self, data: &[T], n: usize) -> Self::Output;
}

/// Dense all-pairs hop distances, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    store: Store,
    diameter: u32,
    connected: bool,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest finite distance (the diameter when connected).
    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn connected(&self) -> bool {
        self.connected
    }

    /// Bytes per stored cell (1, 2 or 4).
    pub fn cell_bytes(&self) -> usize {
        match self.store {
            Store::U8(_) => 1,
            Store::U16(_) => 2,
            Store::U32(_) => 4,
        }
    }

    /// Distance between `u` and `v`, [`UNREACHABLE`] if disconnected.
    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        let i = u as usize * self.n + v as usize;
        match &self.store {
            Store::U8(d) => widen(d[i]),
            Store::U16(d) => widen(d[i]),
            Store::U32(d) => d[i],
        }
    }

    /// Row `u` widened to `u32`.
    pub fn row(&self, u: VertexId) -> Vec<u32> {
        (0..self.n as VertexId).map(|v| self.get(u, v)).collect()
    }

    pub fn visit<V: MatrixVisitor>(&self, visitor: V) -> V::Output {
        match &self.store {
            Store::U8(d) => visitor.visit(d, self.n),
            Store::U16(d) => visitor.visit(d, self.n),
            Store::U32(d) => visitor.visit(d, self.n),
        }
    }

    /// Builds a matrix directly from `u32` rows (test fixtures, analytic metrics).
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(input(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            data.extend_from_slice(row);
        }
        let connected = data.iter().all(|&d| d != UNREACHABLE);
        let diameter = data.iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0);
        Ok(DistanceMatrix { n, store: Store::U32(data), diameter, connected })
    }
}

#[inline(always)]
fn widen<T: DistCell>(d: T) -> u32 {
    if d == T::SENTINEL {
        UNREACHABLE
    } else {
        d.to_u32()
    }
}

/// Bytes a dense matrix for `g` would occupy, using the narrowest cell width
/// that fits a cheap diameter bound (twice the eccentricity of vertex 0 when
/// connected, `n - 1` otherwise).
pub fn matrix_bytes(g: &Graph) -> u64 {
    let n = g.n() as u64;
    n * n * width_for(distance_bound(g)) as u64
}

fn distance_bound(g: &Graph) -> u64 {
    if g.n() == 0 {
        return 0;
    }
    let d0 = bfs_distances(g, 0).expect("vertex 0 exists");
    match d0.iter().copied().max() {
        Some(UNREACHABLE) | None => g.n().saturating_sub(1) as u64,
        Some(ecc) => 2 * ecc as u64,
    }
}

fn width_for(bound: u64) -> usize {
    if bound < u8::MAX as u64 {
        1
    } else if bound < u16::MAX as u64 {
        2
    } else {
        4
    }
}

/// All-pairs BFS under the default memory cap.
pub fn all_pairs(g: &Graph) -> Result<DistanceMatrix> {
    all_pairs_capped(g, DEFAULT_MATRIX_CAP)
}

/// All-pairs BFS, refusing matrices larger than `cap_bytes`. Rows are filled
/// in parallel; each row is an independent BFS so the result does not depend
/// on the thread count.
pub fn all_pairs_capped(g: &Graph, cap_bytes: u64) -> Result<DistanceMatrix> {
    let n = g.n();
    if n == 0 {
        return Err(input("all_pairs needs at least one vertex"));
    }
    let width = width_for(distance_bound(g));
    let required = (n as u64) * (n as u64) * width as u64;
    if required > cap_bytes {
        return Err(Error::Capacity { what: "distance matrix", required, cap: cap_bytes });
    }
    let (store, stats) = match width {
        1 => fill::<u8>(g).map_store(Store::U8),
        2 => fill::<u16>(g).map_store(Store::U16),
        _ => fill::<u32>(g).map_store(Store::U32),
    };
    Ok(DistanceMatrix { n, store, diameter: stats.0, connected: stats.1 })
}

struct Filled<T>(Vec<T>, (u32, bool));

impl<T> Filled<T> {
    fn map_store(self, f: impl FnOnce(Vec<T>) -> Store) -> (Store, (u32, bool)) {
        (f(self.0), self.1)
    }
}

fn fill<T: DistCell>(g: &Graph) -> Filled<T> {
    let n = g.n();
    let mut data = vec![T::SENTINEL; n * n];
    let stats = data
        .par_chunks_mut(n)
        .enumerate()
        .map_init(
            || Vec::with_capacity(n),
            |queue, (s, row)| bfs_row(g, s as VertexId, row, queue),
        )
        .reduce(|| (0, true), |a, b| (a.0.max(b.0), a.1 && b.1));
    Filled(data, stats)
}

/// BFS into a pre-filled sentinel row. Returns (eccentricity over reached
/// vertices, whether every vertex was reached).
fn bfs_row<T: DistCell>(g: &Graph, s: VertexId, row: &mut [T], queue: &mut Vec<VertexId>) -> (u32, bool) {
    queue.clear();
    row[s as usize] = T::from_u32(0);
    queue.push(s);
    let mut head = 0;
    let mut ecc = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let du = row[u as usize].to_u32();
        ecc = du;
        let next = T::from_u32(du + 1);
        for &v in g.neighbors(u) {
            let cell = &mut row[v as usize];
            if *cell == T::SENTINEL {
                *cell = next;
                queue.push(v);
            }
        }
    }
    (ecc, queue.len() == g.n())
}

/// A shortest path as a vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geodesic {
    pub vertices: Vec<VertexId>,
}

impl Geodesic {
    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().expect("geodesic is non-empty")
    }

    pub fn reversed(&self) -> Geodesic {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Geodesic { vertices }
    }

    /// Checks adjacency of consecutive vertices, absence of repeats and
    /// minimality against `m`.
    pub fn is_geodesic_in(&self, g: &Graph, m: &DistanceMatrix) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        self.vertices.iter().all(|v| seen.insert(*v))
            && self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
            && m.get(self.first(), self.last()) as usize == self.length()
    }
}

/// Deterministic shortest `u`–`v` path: from each vertex step to the
/// smallest-id neighbour one hop closer to `v`.
pub fn extract_geodesic(g: &Graph, m: &DistanceMatrix, u: VertexId, v: VertexId) -> Result<Geodesic> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if m.n() != g.n() {
        return Err(input("distance matrix does not match graph"));
    }
    let total = m.get(u, v);
    if total == UNREACHABLE {
        return Err(domain(format!("vertices {u} and {v} are disconnected")));
    }
    let mut vertices = Vec::with_capacity(total as usize + 1);
    vertices.push(u);
    let mut w = u;
    let mut left = total;
    while w != v {
        let next = g
            .neighbors(w)
            .iter()
            .copied()
            .find(|&x| m.get(x, v) == left - 1)
            .ok_or_else(|| domain("distance matrix inconsistent with graph"))?;
        vertices.push(next);
        w = next;
        left -= 1;
    }
    Ok(Geodesic { vertices })
}
