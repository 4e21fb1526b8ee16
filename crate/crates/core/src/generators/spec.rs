// SPDX-License-Identifier: Apache-2.0

//! [`GenSpec`]: the complete, reproducible description of one random graph.
//!
//! A spec serializes to flat `key = value` pairs. As a standalone document
//! each pair is one line (see [`GenSpec::to_document`]); inside an edge-list
//! header the pairs are joined on one line as `key=value` tokens.
//!
//! Keys, in emission order:
//!
//! | key | families | value |
//! |-----|----------|-------|
//! | `format_version` | document only | `1` |
//! | `family` | all | `ksw`, `rt`, `rt_f`, `rrt`, `rbt` |
//! | `n` | ksw | vertex count, a perfect `d`-th power |
//! | `d` | ksw | grid dimension |
//! | `gamma` | ksw | decay exponent, `>= 0` |
//! | `k` | rt, rt_f, rrt, rbt | level count |
//! | `span` | rt_f | `const:<c>`, `log2n` or `pow:<p>` |
//! | `g_kind` | rrt, rbt | `exp_ring`, `pow_ring`, `lca_height` |
//! | `alpha` | rrt, rbt | decay parameter, `> 0` |
//! | `wrap_around` | all | `true` / `false` (grid wrap; ksw only) |
//! | `edges_per_node` | all | long-range draws per node, `>= 1` |
//! | `independent_edges` | all | per-pair independent linking |
//! | `seed` | all | unsigned 64-bit |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::ringed::MAX_LEVEL;

pub const GENSPEC_FORMAT_VERSION: u32 = 1;

/// Closeness law for long-range edges among ringed-tree leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GKind {
    /// `exp(-alpha * ring_distance)`
    ExpRing,
    /// `ring_distance^-alpha`
    PowRing,
    /// `2^(-alpha * lca_height)`
    LcaHeight,
}

impl GKind {
    pub const ALL: [GKind; 3] = [GKind::ExpRing, GKind::PowRing, GKind::LcaHeight];

    pub fn as_str(self) -> &'static str {
        match self {
            GKind::ExpRing => "exp_ring",
            GKind::PowRing => "pow_ring",
            GKind::LcaHeight => "lca_height",
        }
    }
}

impl fmt::Display for GKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp_ring" => Ok(GKind::ExpRing),
            "pow_ring" => Ok(GKind::PowRing),
            "lca_height" => Ok(GKind::LcaHeight),
            _ => Err(input(format!("unknown g_kind {s:?}"))),
        }
    }
}

/// Bound `f(n)` on the ring distance spanned by an added edge in `RT(k, f)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SpanBound {
    Const(f64),
    Log2N,
    Pow(f64),
}

impl SpanBound {
    /// `floor(f(n))`, clamped at zero.
    pub fn eval(self, n: u64) -> u64 {
        let v = match self {
            SpanBound::Const(c) => c,
            SpanBound::Log2N => (n as f64).log2(),
            SpanBound::Pow(p) => (n as f64).powf(p),
        };
        if v.is_finite() && v > 0.0 {
            v.floor() as u64
        } else {
            0
        }
    }
}

impl fmt::Display for SpanBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanBound::Const(c) => write!(f, "const:{c}"),
            SpanBound::Log2N => f.write_str("log2n"),
            SpanBound::Pow(p) => write!(f, "pow:{p}"),
        }
    }
}

impl FromStr for SpanBound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| input(format!("bad span parameter in {s:?}")));
        match s.split_once(':') {
            None if s == "log2n" => Ok(SpanBound::Log2N),
            Some(("const", v)) => Ok(SpanBound::Const(num(v)?)),
            Some(("pow", v)) => Ok(SpanBound::Pow(num(v)?)),
            _ => Err(input(format!("unknown span bound {s:?}"))),
        }
    }
}

impl TryFrom<String> for SpanBound {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SpanBound> for String {
    fn from(s: SpanBound) -> String {
        s.to_string()
    }
}

/// Model family and its size/shape parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    /// Grid small world: `n` vertices on a `d`-dimensional grid, long-range
    /// edges with probability proportional to `grid_distance^-gamma`.
    Ksw { n: usize, d: u32, gamma: f64 },
    /// Ringed tree with `k` levels.
    Rt { k: u32 },
    /// Ringed tree plus one edge per vertex within ring distance `span(n)`.
    RtF { k: u32, span: SpanBound },
    /// Ringed tree plus leaf long-range edges drawn from `g_kind`.
    Rrt { k: u32, g_kind: GKind, alpha: f64 },
    /// Binary tree (no rings) plus leaf long-range edges drawn from `g_kind`.
    Rbt { k: u32, g_kind: GKind, alpha: f64 },
}

impl Model {
    pub fn family(&self) -> &'static str {
        match self {
            Model::Ksw { .. } => "ksw",
            Model::Rt { .. } => "rt",
            Model::RtF { .. } => "rt_f",
            Model::Rrt { .. } => "rrt",
            Model::Rbt { .. } => "rbt",
        }
    }

    /// Level count for the tree families.
    pub fn levels(&self) -> Option<u32> {
        match *self {
            Model::Ksw { .. } => None,
            Model::Rt { k } | Model::RtF { k, .. } | Model::Rrt { k, .. } | Model::Rbt { k, .. } => Some(k),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            Model::Ksw { n, .. } => n,
            _ => (1usize << self.levels().expect("tree family")) - 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Variants {
    pub wrap_around: bool,
    pub edges_per_node: u32,
    pub independent_edges: bool,
}

impl Default for Variants {
    fn default() -> Self {
        Variants { wrap_around: true, edges_per_node: 1, independent_edges: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    pub variants: Variants,
    pub seed: u64,
}

/// Exact integer `d`-th root of `n`, if any.
pub fn exact_root(n: usize, d: u32) -> Option<usize> {
    if d == 0 {
        return None;
    }
    let guess = (n as f64).powf(1.0 / d as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&s| s.checked_pow(d) == Some(n))
}

impl GenSpec {
    pub fn new(model: Model, seed: u64) -> Self {
        GenSpec { model, variants: Variants::default(), seed }
    }

    pub fn with_variants(mut self, variants: Variants) -> Self {
        self.variants = variants;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.model.vertex_count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.edges_per_node == 0 {
            return Err(input("edges_per_node must be at least 1"));
        }
        let check_k = |k: u32, min: u32| {
            if k < min || k > MAX_LEVEL {
                Err(input(format!("k={k} outside [{min}, {MAX_LEVEL}]")))
            } else {
                Ok(())
            }
        };
        let check_alpha = |alpha: f64| {
            if alpha.is_finite() && alpha > 0.0 {
                Ok(())
            } else {
                Err(input(format!("alpha must be positive, got {alpha}")))
            }
        };
        match self.model {
            Model::Ksw { n, d, gamma } => {
                if !(gamma.is_finite() && gamma >= 0.0) {
                    return Err(input(format!("gamma must be non-negative, got {gamma}")));
                }
                match exact_root(n, d) {
                    Some(side) if side >= 2 => {}
                    _ => return Err(input(format!("n={n} is not a perfect {d}-th power of an integer >= 2"))),
                }
                if n > u32::MAX as usize {
                    return Err(input(format!("n={n} too large")));
                }
                Ok(())
            }
            Model::Rt { k } => check_k(k, 1),
            Model::RtF { k, .. } => check_k(k, 2),
            Model::Rrt { k, alpha, .. } | Model::Rbt { k, alpha, .. } => {
                check_k(k, 2)?;
                check_alpha(alpha)
            }
        }
    }

    /// Flat key/value pairs in canonical order (without `format_version`).
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("family", self.model.family().to_string())];
        match &self.model {
            Model::Ksw { n, d, gamma } => {
                out.push(("n", n.to_string()));
                out.push(("d", d.to_string()));
                out.push(("gamma", gamma.to_string()));
            }
            Model::Rt { k } => out.push(("k", k.to_string())),
            Model::RtF { k, span } => {
                out.push(("k", k.to_string()));
                out.push(("span", span.to_string()));
            }
            Model::Rrt { k, g_kind, alpha } | Model::Rbt { k, g_kind, alpha } => {
                out.push(("k", k.to_string()));
                out.push(("g_kind", g_kind.to_string()));
                out.push(("alpha", alpha.to_string()));
            }
        }
        out.push(("wrap_around", self.variants.wrap_around.to_string()));
        out.push(("edges_per_node", self.variants.edges_per_node.to_string()));
        out.push(("independent_edges", self.variants.independent_edges.to_string()));
        out.push(("seed", self.seed.to_string()));
        out
    }

    /// Parses flat pairs; unknown or duplicate keys are rejected.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            if map.insert(k, v).is_some() {
                return Err(input(format!("duplicate key {k:?}")));
            }
        }
        let mut take = |key: &str| map.remove(key);
        fn parse<T: FromStr>(key: &str, v: Option<&str>) -> Result<T> {
            let v = v.ok_or_else(|| input(format!("missing key {key:?}")))?;
            v.parse().map_err(|_| input(format!("bad value {v:?} for {key:?}")))
        }
        if let Some(v) = take("format_version") {
            if v != GENSPEC_FORMAT_VERSION.to_string() {
                return Err(input(format!("unsupported format_version {v}")));
            }
        }
        let family = take("family").ok_or_else(|| input("missing key \"family\""))?;
        let model = match family {
            "ksw" => Model::Ksw {
                n: parse("n", take("n"))?,
                d: parse("d", take("d"))?,
                gamma: parse("gamma", take("gamma"))?,
            },
            "rt" => Model::Rt { k: parse("k", take("k"))? },
            "rt_f" => Model::RtF { k: parse("k", take("k"))?, span: parse("span", take("span"))? },
            "rrt" | "rbt" => {
                let k = parse("k", take("k"))?;
                let g_kind = parse("g_kind", take("g_kind"))?;
                let alpha = parse("alpha", take("alpha"))?;
                if family == "rrt" {
                    Model::Rrt { k, g_kind, alpha }
                } else {
                    Model::Rbt { k, g_kind, alpha }
                }
            }
            other => return Err(input(format!("unknown family {other:?}"))),
        };
        let defaults = Variants::default();
        let variants = Variants {
            wrap_around: take("wrap_around").map_or(Ok(defaults.wrap_around), |v| parse("wrap_around", Some(v)))?,
            edges_per_node: take("edges_per_node")
                .map_or(Ok(defaults.edges_per_node), |v| parse("edges_per_node", Some(v)))?,
            independent_edges: take("independent_edges")
                .map_or(Ok(defaults.independent_edges), |v| parse("independent_edges", Some(v)))?,
        };
        let seed = parse("seed", take("seed"))?;
        if let Some((k, _)) = map.into_iter().next() {
            return Err(input(format!("unknown key {k:?}")));
        }
        let spec = GenSpec { model, variants, seed };
        spec.validate()?;
        Ok(spec)
    }

    /// Standalone document: one `key = value` per line, versioned.
    pub fn to_document(&self) -> String {
        let mut out = format!("# gromov genspec\nformat_version = {GENSPEC_FORMAT_VERSION}\n");
        for (k, v) in self.to_pairs() {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, got {line:?}"),
            })?;
            pairs.push((k.trim(), v.trim()));
        }
        GenSpec::from_pairs(pairs)
    }

    /// Single-line `key=value` token form used in edge-list headers.
    pub fn to_inline(&self) -> String {
        self.to_pairs().into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}
