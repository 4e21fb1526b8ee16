// SPDX-License-Identifier: Apache-2.0

//! Seeded generators for every graph family.
//!
//! All randomness is drawn from per-vertex streams keyed by the spec's seed,
//! so generation runs in parallel and still produces the same edge set for
//! the same [`GenSpec`] at any thread count. Long-range edges that coincide
//! with base edges or with each other are collapsed; outputs are simple graphs.

mod grid;
mod spec;
mod trees;

pub use grid::{grid_distance, Grid, GridCoord};
pub use spec::{exact_root, GKind, GenSpec, Model, SpanBound, Variants, GENSPEC_FORMAT_VERSION};
pub use trees::{gen_ringed_tree, gen_rt_f, leaf_weight, SpanBounded};

pub(crate) use grid::ClassSampler;
pub(crate) use trees::LeafLaw;

use crate::error::{input, Result};
use crate::seed::{self, domain};
use crate::graph::{Graph, VertexId};
use crate::ringed::{lca_height_unchecked, ring_distance_unchecked, TreeAddress};

/// A generated graph plus non-fatal notes about the draw.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

/// Generates the graph described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let mut warnings = Vec::new();
    let graph = match spec.model {
        Model::Ksw { .. } => gen_ksw(spec)?,
        Model::Rt { k } => gen_ringed_tree(k)?.0,
        Model::RtF { k, span } => {
            let out = gen_rt_f(k, span, spec.seed)?;
            if out.empty_span {
                warnings.push(format!("span bound {span} evaluates below 1; no edges added"));
            }
            out.graph
        }
        Model::Rrt { .. } => gen_rrt(spec)?,
        Model::Rbt { .. } => gen_rbt(spec)?,
    };
    Ok(Generated { graph, warnings })
}

/// Grid small world: base grid plus seeded long-range edges.
pub fn gen_ksw(spec: &GenSpec) -> Result<Graph> {
    let Model::Ksw { n, d, gamma } = spec.model else {
        return Err(input(format!("gen_ksw called with family {}", spec.model.family())));
    };
    spec.validate()?;
    let v = spec.variants;
    let grid = Grid::new(n, d, v.wrap_around)?;
    let mut edges = grid.base_edges();
    if v.independent_edges {
        edges.extend(grid::independent_edges(&grid, gamma, v.edges_per_node, spec.seed));
    } else {
        edges.extend(grid::drawn_edges(&grid, gamma, v.edges_per_node, spec.seed));
    }
    Graph::from_edges(n, edges)
}

fn leaf_model(spec: &GenSpec) -> Result<(u32, GKind, f64)> {
    match spec.model {
        Model::Rrt { k, g_kind, alpha } | Model::Rbt { k, g_kind, alpha } => Ok((k, g_kind, alpha)),
        _ => Err(input(format!("expected rrt or rbt, got {}", spec.model.family()))),
    }
}

/// Random ringed tree: `RT(k)` plus leaf long-range edges.
pub fn gen_rrt(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let (k, g_kind, alpha) = leaf_model(spec)?;
    let mut edges = trees::tree_edges(k);
    edges.extend(trees::ring_edges(k));
    let v = spec.variants;
    edges.extend(trees::leaf_edges(k, g_kind, alpha, v.edges_per_node, v.independent_edges, spec.seed));
    Graph::from_edges((1usize << k) - 1, edges)
}

/// Random binary tree: the `RRT` construction without ring edges.
pub fn gen_rbt(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let (k, g_kind, alpha) = leaf_model(spec)?;
    let mut edges = trees::tree_edges(k);
    let v = spec.variants;
    edges.extend(trees::leaf_edges(k, g_kind, alpha, v.edges_per_node, v.independent_edges, spec.seed));
    Graph::from_edges((1usize << k) - 1, edges)
}

/// Exact law of the long-range target distance class for one source.
///
/// For grid families this is `(grid distance, probability)`; for leaf laws
/// it is `(ring distance or LCA height, probability)`. Used to audit the
/// samplers against analytic expectations.
pub fn target_class_law(spec: &GenSpec, source: VertexId) -> Result<Vec<(u64, f64)>> {
    spec.validate()?;
    let weights = match spec.model {
        Model::Ksw { n, d, gamma } => {
            let grid = Grid::new(n, d, spec.variants.wrap_around)?;
            ClassSampler::new(&grid, &grid.coord(source), gamma).class_weights(gamma)
        }
        Model::Rrt { k, g_kind, alpha } | Model::Rbt { k, g_kind, alpha } => {
            LeafLaw::new(g_kind, alpha, k - 1).class_weights()
        }
        _ => return Err(input("family has no long-range law")),
    };
    let total: f64 = weights.iter().map(|w| w.1).sum();
    Ok(weights.into_iter().map(|(c, w)| (c, w / total)).collect())
}

/// Targets drawn for `source` in the per-node linking mode, in draw order
/// and before duplicates collapse: the same draws [`generate`] makes.
pub fn long_range_draws(spec: &GenSpec, source: VertexId) -> Result<Vec<VertexId>> {
    spec.validate()?;
    let v = spec.variants;
    if v.independent_edges {
        return Err(input("independent linking has no per-node draws"));
    }
    if source as usize >= spec.vertex_count() {
        return Err(input(format!("vertex {source} out of range")));
    }
    match spec.model {
        Model::Ksw { n, d, gamma } => {
            let grid = Grid::new(n, d, v.wrap_around)?;
            let coord = grid.coord(source);
            let sampler = ClassSampler::new(&grid, &coord, gamma);
            let mut rng = seed::stream(spec.seed, domain::KSW_DRAW, source as u64);
            Ok((0..v.edges_per_node).map(|_| sampler.sample(&grid, &coord, &mut rng)).collect())
        }
        Model::Rrt { k, g_kind, alpha } | Model::Rbt { k, g_kind, alpha } => {
            let a = TreeAddress::from_id(source);
            if a.level != k - 1 {
                return Err(input(format!("vertex {source} is not a leaf of a {k}-level tree")));
            }
            let law = LeafLaw::new(g_kind, alpha, a.level);
            let mut rng = seed::stream(spec.seed, domain::TREE_LONG, a.pos);
            Ok((0..v.edges_per_node)
                .map(|_| TreeAddress { level: a.level, pos: law.sample(a.pos, &mut rng) }.id())
                .collect())
        }
        _ => Err(input(format!("family {} has no long-range draws", spec.model.family()))),
    }
}

/// Largest grid distance spanned by an edge that is not a grid edge; 0 when
/// there are none.
pub fn max_long_range_span(g: &Graph, spec: &GenSpec) -> Result<u64> {
    let Model::Ksw { n, d, .. } = spec.model else {
        return Err(input(format!("max_long_range_span needs a ksw spec, got {}", spec.model.family())));
    };
    if g.n() != n {
        return Err(input(format!("graph has {} vertices, spec says {n}", g.n())));
    }
    let grid = Grid::new(n, d, spec.variants.wrap_around)?;
    Ok(g.edges().map(|(u, v)| grid.distance(u, v)).filter(|&r| r > 1).max().unwrap_or(0))
}

/// Largest ring distance spanned by a same-level edge that is not a ring
/// edge, for the tree families; 0 when there are none.
pub fn max_ring_span(g: &Graph) -> u64 {
    g.edges()
        .filter_map(|(u, v)| {
            let (a, b) = (TreeAddress::from_id(u), TreeAddress::from_id(v));
            (a.level == b.level).then(|| ring_distance_unchecked(a.ring_size(), a.pos, b.pos))
        })
        .filter(|&r| r > 1)
        .max()
        .unwrap_or(0)
}

/// Largest LCA height over same-level non-tree edges (0 when none).
pub fn max_lca_span(g: &Graph) -> u32 {
    g.edges()
        .filter_map(|(u, v)| {
            let (a, b) = (TreeAddress::from_id(u), TreeAddress::from_id(v));
            (a.level == b.level).then(|| lca_height_unchecked(a.pos, b.pos))
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ksw(n: usize, d: u32, gamma: f64, seed: u64) -> GenSpec {
        GenSpec::new(Model::Ksw { n, d, gamma }, seed)
    }

    #[test]
    fn ring_small_world_bounds() {
        for seed in 0..20 {
            let g = gen_ksw(&ksw(16, 1, 0.0, seed)).unwrap();
            for i in 0..16u32 {
                assert!(g.has_edge(i, (i + 1) % 16));
            }
            assert!(g.edge_count() <= 32);
            assert!((0..16).all(|u| g.degree(u) >= 2));
            assert!(g.audit().is_ok());
        }
    }

    #[test]
    fn two_dim_grid_edges_present() {
        for gamma in [0.0, 1.0, 2.0, 5.0] {
            let g = gen_ksw(&ksw(9, 2, gamma, 4)).unwrap();
            let grid = Grid::new(9, 2, true).unwrap();
            let base = grid.base_edges();
            assert_eq!(base.len(), 18);
            assert!(base.iter().all(|&(u, v)| g.has_edge(u, v)));
        }
        assert!(gen_ksw(&ksw(10, 2, 1.0, 0)).is_err());
        assert!(gen_ksw(&ksw(16, 1, -0.5, 0)).is_err());
    }

    #[test]
    fn same_seed_same_graph() {
        let a = generate(&ksw(256, 2, 2.0, 9)).unwrap().graph;
        let b = generate(&ksw(256, 2, 2.0, 9)).unwrap().graph;
        let c = generate(&ksw(256, 2, 2.0, 10)).unwrap().graph;
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn long_range_count_bounded() {
        for epn in [1, 3] {
            let spec = ksw(1024, 1, 1.0, 2).with_variants(Variants { edges_per_node: epn, ..Variants::default() });
            let g = gen_ksw(&spec).unwrap();
            assert!(g.edge_count() - 1024 <= epn as usize * 1024);
        }
    }

    #[test]
    fn independent_mode_is_deterministic_and_keeps_grid() {
        let spec = ksw(64, 2, 2.0, 1).with_variants(Variants { independent_edges: true, ..Variants::default() });
        let a = gen_ksw(&spec).unwrap();
        assert_eq!(a, gen_ksw(&spec).unwrap());
        assert!(Grid::new(64, 2, true).unwrap().base_edges().iter().all(|&(u, v)| a.has_edge(u, v)));
    }

    #[test]
    fn non_wrap_grid_variant() {
        let spec = ksw(100, 2, 2.0, 3).with_variants(Variants { wrap_around: false, ..Variants::default() });
        let g = gen_ksw(&spec).unwrap();
        let grid = Grid::new(100, 2, false).unwrap();
        assert!(grid.base_edges().iter().all(|&(u, v)| g.has_edge(u, v)));
        assert!(!g.has_edge(0, 9) || grid.distance(0, 9) == 9);
    }

    #[test]
    fn two_leaf_degenerate_case() {
        for g_kind in GKind::ALL {
            let rrt = gen_rrt(&GenSpec::new(Model::Rrt { k: 2, g_kind, alpha: 1.0 }, 0)).unwrap();
            assert_eq!(rrt, gen_ringed_tree(2).unwrap().0);
            let rbt = gen_rbt(&GenSpec::new(Model::Rbt { k: 2, g_kind, alpha: 1.0 }, 0)).unwrap();
            assert_eq!(rbt.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        }
    }

    #[test]
    fn leaf_edges_stay_on_leaf_level() {
        for g_kind in GKind::ALL {
            for independent in [false, true] {
                let spec = GenSpec::new(Model::Rbt { k: 7, g_kind, alpha: 0.5 }, 8)
                    .with_variants(Variants { independent_edges: independent, ..Variants::default() });
                let g = gen_rbt(&spec).unwrap();
                let tree: std::collections::HashSet<_> = trees::tree_edges(7).into_iter().collect();
                for (u, v) in g.edges() {
                    if !tree.contains(&(u, v)) {
                        assert_eq!(TreeAddress::from_id(u).level, 6);
                        assert_eq!(TreeAddress::from_id(v).level, 6);
                    }
                }
            }
        }
        assert!(gen_rrt(&GenSpec::new(Model::Rrt { k: 5, g_kind: GKind::PowRing, alpha: 0.0 }, 0)).is_err());
    }

    #[test]
    fn span_audits() {
        for seed in 0..10 {
            let g = gen_rt_f(3, SpanBound::Const(2.0), seed).unwrap().graph;
            assert!(max_ring_span(&g) <= 2);
            let g = gen_rt_f(10, SpanBound::Log2N, seed).unwrap().graph;
            assert!(max_ring_span(&g) <= 9);
            assert!(max_ring_span(&g) >= 2);
        }
    }

    #[test]
    fn long_range_span_of_pure_grid_is_zero() {
        let grid = Grid::new(64, 1, true).unwrap();
        let g = Graph::from_edges(64, grid.base_edges()).unwrap();
        assert_eq!(max_long_range_span(&g, &ksw(64, 1, 4.0, 0)).unwrap(), 0);
        assert!(max_long_range_span(&g, &GenSpec::new(Model::Rt { k: 3 }, 0)).is_err());
    }

    #[test]
    fn lca_span_of_tree_family() {
        let (rt, _) = gen_ringed_tree(5).unwrap();
        assert_eq!(max_lca_span(&rt), 4);
    }
}
