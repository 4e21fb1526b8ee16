// SPDX-License-Identifier: Apache-2.0

//! Gromov four-point hyperbolicity, exact and sampled, plus Rips slimness.
//!
//! All δ values are carried doubled (`two_delta`) as integers: on unweighted
//! graphs δ is an integer or half-integer, so no float enters a comparison.

mod rips;

pub use rips::{
    rips_exhaustive, rips_lower_bound, triangle_slimness, RipsExhaustive, SlimnessReport,
    DEFAULT_RIPS_EXHAUSTIVE_MAX_N,
};

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, input, Result};
use crate::graph::{bfs_distances, DistCell, DistanceMatrix, Graph, MatrixVisitor, VertexId, UNREACHABLE};
use crate::seed::{self, domain as streams};

/// Default refusal threshold for the O(n⁴) exact scan.
pub const DEFAULT_EXACT_MAX_N: usize = 1200;

/// Quadruples drawn per RNG stream in sampled estimators.
const SAMPLE_CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Sampled,
}

/// δ of a graph (exact) or a lower bound on it (sampled), with the
/// quadruple that attains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub two_delta: u32,
    pub method: Method,
    pub witness: [VertexId; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Graph diameter; for BFS-backed sampling, the largest eccentricity
    /// among the sampled sources.
    pub diameter: u32,
}

impl DeltaReport {
    pub fn delta(&self) -> f64 {
        self.two_delta as f64 / 2.0
    }
}

/// Doubled four-point δ of a quadruple `(u, v, w, x)` from its six
/// distances: the gap between the largest and the median of the pair sums
/// `duv + dwx`, `dux + dvw`, `duw + dvx`.
#[inline(always)]
pub fn four_point_delta(duv: u32, dwx: u32, duw: u32, dvx: u32, dux: u32, dvw: u32) -> u32 {
    pair_sum_gap(duv + dwx, dux + dvw, duw + dvx)
}

#[inline(always)]
fn pair_sum_gap(a: u32, b: u32, c: u32) -> u32 {
    let hi = a.max(b).max(c);
    let lo = a.min(b).min(c);
    // hi - median, with median = a + b + c - hi - lo
    2 * hi + lo - a - b - c
}

/// Doubled δ of a vertex quadruple under `m`.
pub fn quadruple_delta(m: &DistanceMatrix, q: [VertexId; 4]) -> u32 {
    let [u, v, w, x] = q;
    four_point_delta(m.get(u, v), m.get(w, x), m.get(u, w), m.get(v, x), m.get(u, x), m.get(v, w))
}

fn require_connected(m: &DistanceMatrix) -> Result<()> {
    if m.connected() {
        Ok(())
    } else {
        Err(domain("graph is disconnected; δ is defined on connected graphs"))
    }
}

/// Exact δ under the default size guard.
pub fn exact_delta(m: &DistanceMatrix) -> Result<DeltaReport> {
    exact_delta_with(m, DEFAULT_EXACT_MAX_N)
}

/// Exact δ: maximum over all quadruples `u < v < w < x`. The witness is the
/// lexicographically smallest quadruple attaining the maximum, independent
/// of thread count.
pub fn exact_delta_with(m: &DistanceMatrix, max_n: usize) -> Result<DeltaReport> {
    require_connected(m)?;
    let n = m.n();
    if n > max_n {
        return Err(input(format!("exact δ refused for n={n} > {max_n}; raise the limit or sample")));
    }
    let (two_delta, witness) = if n < 4 {
        (0, [0, 1.min(n as u32 - 1), 2.min(n as u32 - 1), 3.min(n as u32 - 1)])
    } else {
        m.visit(ExactScan { ceiling: m.diameter() })
    };
    Ok(DeltaReport { two_delta, method: Method::Exact, witness, samples: None, seed: None, diameter: m.diameter() })
}

struct ExactScan {
    /// No quadruple exceeds the diameter; a branch reaching it can stop.
    ceiling: u32,
}

impl MatrixVisitor for ExactScan {
    type Output = (u32, [VertexId; 4]);

    fn visit<T: DistCell>(self, data: &[T], n: usize) -> Self::Output {
        let first_at_ceiling = AtomicUsize::new(usize::MAX);
        let best = (0..n - 3)
            .into_par_iter()
            .map(|u| {
                if u > first_at_ceiling.load(Ordering::Relaxed) {
                    return None;
                }
                let found = scan_branch(data, n, u, self.ceiling);
                if let Some((val, _)) = found {
                    if val == self.ceiling {
                        first_at_ceiling.fetch_min(u, Ordering::Relaxed);
                    }
                }
                found
            })
            .reduce(
                || None,
                |a, b| match (a, b) {
                    (None, x) | (x, None) => x,
                    (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
                },
            );
        best.unwrap_or((0, [0, 1, 2, 3]))
    }
}

/// Best quadruple with smallest vertex `u`; `None` if every such quadruple
/// has δ = 0 (in which case the global witness defaults to `(0, 1, 2, 3)`).
fn scan_branch<T: DistCell>(data: &[T], n: usize, u: usize, ceiling: u32) -> Option<(u32, [VertexId; 4])> {
    let row = |i: usize| &data[i * n..(i + 1) * n];
    let ru = row(u);
    let mut best = 0u32;
    let mut witness = None;
    for v in u + 1..n - 2 {
        let duv = ru[v].to_u32();
        // 2δ of any quadruple is at most twice its smallest pairwise distance
        if 2 * duv <= best {
            continue;
        }
        let rv = row(v);
        for w in v + 1..n - 1 {
            let (duw, dvw) = (ru[w].to_u32(), rv[w].to_u32());
            if 2 * duw.min(dvw) <= best {
                continue;
            }
            let rw = row(w);
            let tail = w + 1;
            let local = (tail..n)
                .map(|x| pair_sum_gap(duv + rw[x].to_u32(), ru[x].to_u32() + dvw, duw + rv[x].to_u32()))
                .max()
                .unwrap_or(0);
            if local > best {
                let x = (tail..n)
                    .find(|&x| pair_sum_gap(duv + rw[x].to_u32(), ru[x].to_u32() + dvw, duw + rv[x].to_u32()) == local)
                    .expect("maximum is attained");
                best = local;
                witness = Some([u as u32, v as u32, w as u32, x as u32]);
                if best >= ceiling {
                    return witness.map(|q| (best, q));
                }
            }
        }
    }
    witness.map(|q| (best, q))
}

/// Sampled δ: maximum over `samples` uniformly random quadruples (drawn with
/// replacement). Always a lower bound on exact δ; deterministic per seed,
/// and the first `s` samples of a larger budget are the same quadruples.
pub fn sampled_delta(m: &DistanceMatrix, samples: u64, seed: u64) -> Result<DeltaReport> {
    require_connected(m)?;
    let (two_delta, witness) = sampled_max(m.n(), samples, seed, |q| quadruple_delta(m, q))?;
    Ok(DeltaReport {
        two_delta,
        method: Method::Sampled,
        witness,
        samples: Some(samples),
        seed: Some(seed),
        diameter: m.diameter(),
    })
}

/// Sampled δ without a distance matrix: distances for each quadruple come
/// from three BFS runs. Draws the same quadruples as [`sampled_delta`].
pub fn sampled_delta_bfs(g: &Graph, samples: u64, seed: u64) -> Result<DeltaReport> {
    if g.n() == 0 {
        return Err(input("empty graph"));
    }
    let probe = bfs_distances(g, 0)?;
    if probe.contains(&UNREACHABLE) {
        return Err(domain("graph is disconnected; δ is defined on connected graphs"));
    }
    let ecc = std::sync::atomic::AtomicU32::new(*probe.iter().max().expect("non-empty"));
    let (two_delta, witness) = sampled_max(g.n(), samples, seed, |[u, v, w, x]| {
        let du = bfs_distances(g, u).expect("in range");
        let dv = bfs_distances(g, v).expect("in range");
        let dw = bfs_distances(g, w).expect("in range");
        for d in [&du, &dv, &dw] {
            ecc.fetch_max(*d.iter().max().expect("non-empty"), Ordering::Relaxed);
        }
        let (v, w, x) = (v as usize, w as usize, x as usize);
        four_point_delta(du[v], dw[x], du[w], dv[x], du[x], dv[w])
    })?;
    Ok(DeltaReport {
        two_delta,
        method: Method::Sampled,
        witness,
        samples: Some(samples),
        seed: Some(seed),
        diameter: ecc.into_inner(),
    })
}

/// The `index`-th sampled quadruple stream chunk.
pub(crate) fn quadruple_chunk(n: usize, seed: u64, chunk: u64, len: u64) -> impl Iterator<Item = [VertexId; 4]> {
    let mut rng = seed::stream(seed, streams::QUAD_SAMPLE, chunk);
    let n = n as u32;
    (0..len).map(move |_| std::array::from_fn(|_| rng.random_range(0..n)))
}

fn sampled_max<F>(n: usize, samples: u64, seed: u64, eval: F) -> Result<(u32, [VertexId; 4])>
where
    F: Fn([VertexId; 4]) -> u32 + Sync,
{
    if samples == 0 {
        return Err(input("samples must be at least 1"));
    }
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
            let mut best: Option<(u32, [VertexId; 4])> = None;
            for q in quadruple_chunk(n, seed, c, len) {
                let val = eval(q);
                if best.is_none_or(|b| val > b.0) {
                    best = Some((val, q));
                }
            }
            best.expect("chunk is non-empty")
        })
        // chunks are reduced in index order, so ties keep the earliest sample
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one chunk");
    Ok(best)
}
