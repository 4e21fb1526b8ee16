// SPDX-License-Identifier: Apache-2.0

//! Exhaustive and sampled checks of ringed-tree structure: ring-distance
//! halving, canonical paths being geodesics, geodesics staying within one
//! hop of canonical paths, 3-slim canonical triangles, and the two
//! distance-versus-ring-distance bounds.

use rand::Rng;
use rayon::prelude::*;

use super::{canonical_path, ring_distance_unchecked, TreeAddress};
use crate::error::{input, Result};
use crate::generators::gen_ringed_tree;
use crate::graph::{all_pairs, extract_geodesic, DistanceMatrix, Geodesic, Graph, VertexId};
use crate::hyperbolicity::triangle_slimness;
use crate::seed::{self, domain};

/// Sampling budgets for the non-exhaustive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaConfig {
    pub sampled_pairs: u64,
    pub sampled_triples: u64,
    pub seed: u64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig { sampled_pairs: 10_000, sampled_triples: 10_000, seed: 0 }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub checked: u64,
    pub failures: u64,
    /// First failing instance, described.
    pub witness: Option<String>,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn tally<I>(name: &'static str, outcomes: I) -> Self
    where
        I: IntoParallelIterator<Item = Option<String>>,
    {
        let (checked, failures, witness) = outcomes
            .into_par_iter()
            .map(|o| (1u64, o.is_some() as u64, o))
            .reduce(
                || (0, 0, None),
                |a, b| (a.0 + b.0, a.1 + b.1, a.2.or(b.2)),
            );
        LemmaCheck { name, checked, failures, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub k: u32,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LemmaCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const HALVING: &str = "ring_distance_halving";
pub const CANONICAL_IS_GEODESIC: &str = "canonical_is_geodesic";
pub const RECTIFICATION: &str = "geodesic_within_one_of_canonical";
pub const CANONICAL_SLIM: &str = "canonical_triangles_3_slim";
pub const DISTANCE_LOWER: &str = "distance_lower_bound";
pub const DISTANCE_UPPER: &str = "distance_upper_bound";

/// Runs the lemma suite on `RT(k)`.
pub fn verify_structural_lemmas(k: u32, cfg: &LemmaConfig) -> Result<LemmaReport> {
    let (g, _) = gen_ringed_tree(k)?;
    verify_structural_lemmas_on(&g, k, cfg)
}

/// Runs the lemma suite on a graph that is supposed to be `RT(k)` (possibly
/// altered, for negative controls). Addresses are the heap numbering.
pub fn verify_structural_lemmas_on(g: &Graph, k: u32, cfg: &LemmaConfig) -> Result<LemmaReport> {
    let n = (1usize << k) - 1;
    if g.n() != n {
        return Err(input(format!("graph has {} vertices, RT({k}) has {n}", g.n())));
    }
    let m = all_pairs(g)?;
    let same_level: Vec<(TreeAddress, TreeAddress)> = (1..k)
        .flat_map(|level| {
            let size = 1u64 << level;
            (0..size).flat_map(move |p| (p + 1..size).map(move |q| (TreeAddress { level, pos: p }, TreeAddress { level, pos: q })))
        })
        .collect();

    let halving = LemmaCheck::tally(
        HALVING,
        same_level.par_iter().map(|&(u, v)| {
            let (pu, pv) = (u.parent()?, v.parent()?);
            let dr = ring_distance_unchecked(u.ring_size(), u.pos, v.pos);
            let drp = ring_distance_unchecked(pu.ring_size(), pu.pos, pv.pos);
            (2 * drp > dr + 1).then(|| format!("{u:?} {v:?}: d_R={dr}, parents d_R={drp}"))
        }),
    );

    let canonical = LemmaCheck::tally(
        CANONICAL_IS_GEODESIC,
        (0..n as VertexId).into_par_iter().flat_map_iter(|i| {
            let m = &m;
            (i + 1..n as VertexId).map(move |j| {
                let geo = canonical_ids(i, j);
                (!geo.is_geodesic_in(g, m)).then(|| {
                    format!("{i}->{j}: canonical {:?} (length {}), graph distance {}", geo.vertices, geo.length(), m.get(i, j))
                })
            })
        }),
    );

    let mut rng = seed::stream(cfg.seed, domain::PAIR_SAMPLE, k as u64);
    let pairs: Vec<(VertexId, VertexId)> =
        (0..cfg.sampled_pairs).map(|_| (rng.random_range(0..n as u32), rng.random_range(0..n as u32))).collect();
    let rectification = LemmaCheck::tally(
        RECTIFICATION,
        pairs.par_iter().map(|&(u, v)| {
            let bfs = extract_geodesic(g, &m, u, v).ok()?;
            let can = canonical_ids(u, v);
            let gap = mutual_distance(&m, &bfs, &can);
            (gap > 1).then(|| format!("{u}->{v}: geodesic {:?} vs canonical {:?} at distance {gap}", bfs.vertices, can.vertices))
        }),
    );

    let mut rng = seed::stream(cfg.seed, domain::TRIPLE_SAMPLE, k as u64);
    let triples: Vec<[VertexId; 3]> =
        (0..cfg.sampled_triples).map(|_| std::array::from_fn(|_| rng.random_range(0..n as u32))).collect();
    let slim = LemmaCheck::tally(
        CANONICAL_SLIM,
        triples.par_iter().map(|&[a, b, c]| {
            let sides = [canonical_ids(a, b), canonical_ids(b, c), canonical_ids(c, a)];
            match triangle_slimness(g, &m, sides) {
                Ok(r) if r.slimness <= 3 => None,
                Ok(r) => Some(format!("triangle {:?} is {}-slim at vertex {:?}", r.triangle, r.slimness, r.witness)),
                Err(e) => Some(format!("triangle {:?}: {e}", [a, b, c])),
            }
        }),
    );

    // Same-level pairs with graph distance > 1. Both bounds are compared in
    // exact integer form: 2 log2(dR) <= d  <=>  dR^2 <= 2^d, and
    // d <= 2 log2(dR - 1) + 2  <=>  2^(d-2) <= (dR - 1)^2.
    let far_pairs: Vec<(TreeAddress, TreeAddress, u64, u32)> = same_level
        .iter()
        .filter_map(|&(u, v)| {
            let d = m.get(u.id(), v.id());
            (d > 1).then(|| (u, v, ring_distance_unchecked(u.ring_size(), u.pos, v.pos), d))
        })
        .collect();
    let lower = LemmaCheck::tally(
        DISTANCE_LOWER,
        far_pairs.par_iter().map(|&(u, v, dr, d)| {
            let holds = (dr as u128) * (dr as u128) <= 1u128 << d;
            (!holds).then(|| format!("{u:?} {v:?}: d_R={dr}, d={d}, 2 log2 d_R = {:.4}", 2.0 * (dr as f64).log2()))
        }),
    );
    let upper = LemmaCheck::tally(
        DISTANCE_UPPER,
        far_pairs.par_iter().map(|&(u, v, dr, d)| {
            let holds = dr >= 2 && (1u128 << (d - 2)) <= ((dr - 1) as u128) * ((dr - 1) as u128);
            (!holds).then(|| format!("{u:?} {v:?}: d_R={dr}, d={d}"))
        }),
    );

    Ok(LemmaReport { k, checks: vec![halving, canonical, rectification, slim, lower, upper] })
}

fn canonical_ids(u: VertexId, v: VertexId) -> Geodesic {
    let path = canonical_path(TreeAddress::from_id(u), TreeAddress::from_id(v));
    Geodesic { vertices: path.into_iter().map(TreeAddress::id).collect() }
}

/// Smallest `r` such that every vertex of each path is within `r` of some
/// vertex of the other.
fn mutual_distance(m: &DistanceMatrix, a: &Geodesic, b: &Geodesic) -> u32 {
    let one_way = |x: &Geodesic, y: &Geodesic| {
        x.vertices
            .iter()
            .map(|&p| y.vertices.iter().map(|&q| m.get(p, q)).min().unwrap_or(u32::MAX))
            .max()
            .unwrap_or(0)
    };
    one_way(a, b).max(one_way(b, a))
}
