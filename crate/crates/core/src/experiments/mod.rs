// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps over the generator families, with δ estimation per
//! graph, CSV emission and least-squares scaling fits.
//!
//! A sweep is described by a TOML file:
//!
//! ```toml
//! family = "ksw"
//! n = [1024, 4096, 16384]
//! d = [1]
//! gamma = [0.0, 4.0]
//! seeds = [0, 1, 2]
//! samples_per_graph = 1000000
//! ```
//!
//! Tree families take `k` instead of `n`; `rrt`/`rbt` also take `g_kind`
//! and `alpha`, `rt_f` takes `span`. Rows come out in grid order: size,
//! `d`, `gamma`, `g_kind`, `alpha`, `span`, variant flags, then seed.

mod fit;

pub use fit::{fit_scaling, median_by_size, Fit, XTransform};

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

use crate::error::{input, Error, Result};
use crate::generators::{generate, max_long_range_span, max_ring_span, GKind, GenSpec, Model, SpanBound, Variants};
use crate::graph::{all_pairs_capped, Graph, DEFAULT_MATRIX_CAP};
use crate::hyperbolicity::{exact_delta, sampled_delta, sampled_delta_bfs, DeltaReport, DEFAULT_EXACT_MAX_N};
use crate::ringed::{ring_distance_unchecked, TreeAddress};

pub const SWEEP_CSV_FORMAT_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 16] = [
    "family",
    "n",
    "k",
    "d",
    "gamma",
    "g_kind",
    "alpha",
    "wrap",
    "edges_per_node",
    "independent",
    "seed",
    "samples",
    "two_delta_hat",
    "diameter",
    "max_long_range_span",
    "runtime_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ksw,
    Rt,
    RtF,
    Rrt,
    Rbt,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Exact,
    #[default]
    Sampled,
}

fn one<T>(v: T) -> Vec<T> {
    vec![v]
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: Family,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub k: Vec<u32>,
    #[serde(default = "default_d")]
    pub d: Vec<u32>,
    #[serde(default)]
    pub gamma: Vec<f64>,
    #[serde(default)]
    pub g_kind: Vec<GKind>,
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_span")]
    pub span: Vec<SpanBound>,
    #[serde(default = "default_wrap")]
    pub wrap: Vec<bool>,
    #[serde(default = "default_epn")]
    pub edges_per_node: Vec<u32>,
    #[serde(default = "default_independent")]
    pub independent: Vec<bool>,
    pub seeds: Vec<u64>,
    pub samples_per_graph: u64,
    #[serde(default)]
    pub method: SweepMethod,
    /// Distance matrices above this size fall back to per-quadruple BFS.
    #[serde(default = "default_cap")]
    pub max_matrix_bytes: u64,
    /// Record wall-clock time per row; off by default so output is
    /// byte-reproducible.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_d() -> Vec<u32> {
    one(1)
}
fn default_alpha() -> Vec<f64> {
    one(1.0)
}
fn default_span() -> Vec<SpanBound> {
    one(SpanBound::Log2N)
}
fn default_wrap() -> Vec<bool> {
    one(true)
}
fn default_epn() -> Vec<u32> {
    one(1)
}
fn default_independent() -> Vec<bool> {
    one(false)
}
fn default_cap() -> u64 {
    DEFAULT_MATRIX_CAP
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| input(format!("sweep config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        Self::from_toml(&text)
    }

    /// Checks the grid is non-empty and every induced spec is valid.
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(input("sweep config has an empty seed list"));
        }
        if self.samples_per_graph == 0 && self.method == SweepMethod::Sampled {
            return Err(input("samples_per_graph must be positive"));
        }
        let (sizes, unused) = match self.family {
            Family::Ksw => (self.n.len(), ("k", self.k.len())),
            _ => (self.k.len(), ("n", self.n.len())),
        };
        if sizes == 0 {
            return Err(input("sweep config has no sizes"));
        }
        if unused.1 > 0 {
            return Err(input(format!("`{}` does not apply to this family", unused.0)));
        }
        let mut count = 0usize;
        for spec in self.specs() {
            spec.validate()?;
            count += 1;
        }
        if count == 0 {
            return Err(input("sweep grid is empty"));
        }
        Ok(())
    }

    /// The sweep grid, one spec per row, in output order.
    pub fn specs(&self) -> impl Iterator<Item = GenSpec> + '_ {
        let models: Vec<Model> = match self.family {
            Family::Ksw => cross3(&self.n, &self.d, &self.gamma)
                .map(|(n, d, gamma)| Model::Ksw { n, d, gamma })
                .collect(),
            Family::Rt => self.k.iter().map(|&k| Model::Rt { k }).collect(),
            Family::RtF => cross2(&self.k, &self.span).map(|(k, span)| Model::RtF { k, span }).collect(),
            Family::Rrt => cross3(&self.k, &self.g_kind, &self.alpha)
                .map(|(k, g_kind, alpha)| Model::Rrt { k, g_kind, alpha })
                .collect(),
            Family::Rbt => cross3(&self.k, &self.g_kind, &self.alpha)
                .map(|(k, g_kind, alpha)| Model::Rbt { k, g_kind, alpha })
                .collect(),
        };
        let variants: Vec<Variants> = cross3(&self.wrap, &self.edges_per_node, &self.independent)
            .map(|(wrap_around, edges_per_node, independent_edges)| Variants {
                wrap_around,
                edges_per_node,
                independent_edges,
            })
            .collect();
        models.into_iter().flat_map(move |model| {
            let variants = variants.clone();
            variants.into_iter().flat_map(move |v| {
                let model = model.clone();
                self.seeds.iter().map(move |&seed| GenSpec::new(model.clone(), seed).with_variants(v))
            })
        })
    }
}

fn cross2<'a, A: Copy, B: Copy>(a: &'a [A], b: &'a [B]) -> impl Iterator<Item = (A, B)> + 'a {
    a.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y)))
}

fn cross3<'a, A: Copy, B: Copy, C: Copy>(a: &'a [A], b: &'a [B], c: &'a [C]) -> impl Iterator<Item = (A, B, C)> + 'a {
    cross2(a, b).flat_map(move |(x, y)| c.iter().map(move |&z| (x, y, z)))
}

/// One sweep result. `two_delta_hat` and `diameter` are `None` for rows
/// skipped as infeasible, with the reason in `skipped`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub spec: GenSpec,
    pub samples: Option<u64>,
    pub two_delta_hat: Option<u32>,
    pub diameter: Option<u32>,
    pub max_long_range_span: u64,
    pub runtime_ms: u64,
    pub skipped: Option<String>,
}

impl SweepRow {
    pub fn n(&self) -> usize {
        self.spec.vertex_count()
    }

    pub fn delta_hat(&self) -> Option<f64> {
        self.two_delta_hat.map(|t| t as f64 / 2.0)
    }

    fn fields(&self) -> [String; 16] {
        let na = || "NA".to_string();
        let opt = |v: Option<String>| v.unwrap_or_else(na);
        let s = &self.spec;
        let (k, d, gamma, g_kind, alpha) = match s.model {
            Model::Ksw { d, gamma, .. } => (None, Some(d.to_string()), Some(gamma.to_string()), None, None),
            Model::Rt { k } | Model::RtF { k, .. } => (Some(k.to_string()), None, None, None, None),
            Model::Rrt { k, g_kind, alpha } | Model::Rbt { k, g_kind, alpha } => {
                (Some(k.to_string()), None, None, Some(g_kind.to_string()), Some(alpha.to_string()))
            }
        };
        [
            s.model.family().to_string(),
            self.n().to_string(),
            opt(k),
            opt(d),
            opt(gamma),
            opt(g_kind),
            opt(alpha),
            s.variants.wrap_around.to_string(),
            s.variants.edges_per_node.to_string(),
            s.variants.independent_edges.to_string(),
            s.seed.to_string(),
            opt(self.samples.map(|x| x.to_string())),
            opt(self.two_delta_hat.map(|x| x.to_string())),
            opt(self.diameter.map(|x| x.to_string())),
            self.max_long_range_span.to_string(),
            self.runtime_ms.to_string(),
        ]
    }
}

/// Runs every grid point of `cfg`. Rows are computed one after another,
/// each using all worker threads, so at most one distance matrix is live.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.specs().map(|spec| run_row(cfg, spec)).collect()
}

fn run_row(cfg: &SweepConfig, spec: GenSpec) -> Result<SweepRow> {
    let start = Instant::now();
    let g = generate(&spec)?.graph;
    let max_long_range_span = long_range_span(&g, &spec)?;
    let n = g.n();
    let (samples, estimate) = match cfg.method {
        SweepMethod::Exact if n > DEFAULT_EXACT_MAX_N => {
            (None, Ok(Err(format!("n={n} exceeds the exact-scan limit {DEFAULT_EXACT_MAX_N}"))))
        }
        SweepMethod::Exact => (None, feasible(all_pairs_capped(&g, cfg.max_matrix_bytes).and_then(|m| exact_delta(&m)))),
        SweepMethod::Sampled => {
            let s = cfg.samples_per_graph;
            let report = match all_pairs_capped(&g, cfg.max_matrix_bytes) {
                Ok(m) => sampled_delta(&m, s, spec.seed),
                Err(Error::Capacity { .. }) => {
                    log::info!("{}: distance matrix over cap, sampling with per-quadruple BFS", spec.to_inline());
                    sampled_delta_bfs(&g, s, spec.seed)
                }
                Err(e) => Err(e),
            };
            (Some(s), feasible(report))
        }
    };
    let runtime_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let mut row = SweepRow {
        spec,
        samples,
        two_delta_hat: None,
        diameter: None,
        max_long_range_span,
        runtime_ms,
        skipped: None,
    };
    match estimate? {
        Ok(r) => {
            debug_assert!(r.two_delta <= r.diameter);
            row.two_delta_hat = Some(r.two_delta);
            row.diameter = Some(r.diameter);
        }
        Err(reason) => {
            log::warn!("skipping {}: {reason}", row.spec.to_inline());
            row.skipped = Some(reason);
        }
    }
    Ok(row)
}

/// Domain and capacity failures mark the row skipped; anything else aborts.
fn feasible(r: Result<DeltaReport>) -> Result<std::result::Result<DeltaReport, String>> {
    match r {
        Ok(r) => Ok(Ok(r)),
        Err(e @ (Error::Domain(_) | Error::Capacity { .. })) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Longest long-range edge: grid distance for grid families, ring distance
/// for the tree families (0 for plain ringed trees).
pub fn long_range_span(g: &Graph, spec: &GenSpec) -> Result<u64> {
    Ok(match spec.model {
        Model::Ksw { .. } => max_long_range_span(g, spec)?,
        Model::Rt { .. } => 0,
        Model::RtF { .. } | Model::Rrt { .. } => max_ring_span(g),
        // no ring edges, so every same-level edge is long-range
        Model::Rbt { .. } => g
            .edges()
            .filter_map(|(u, v)| {
                let (a, b) = (TreeAddress::from_id(u), TreeAddress::from_id(v));
                (a.level == b.level).then(|| ring_distance_unchecked(a.ring_size(), a.pos, b.pos))
            })
            .max()
            .unwrap_or(0),
    })
}

pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let wrap = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Input(format!("csv: {other:?}")),
    };
    out.write_record(CSV_HEADER).map_err(wrap)?;
    for row in rows {
        out.write_record(row.fields()).map_err(wrap)?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}
