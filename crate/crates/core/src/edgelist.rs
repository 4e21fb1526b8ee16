// SPDX-License-Identifier: Apache-2.0

//! Edge-list text format.
//!
//! ```text
//! # gromov-edgelist format_version=1 n=7 family=rt k=3 wrap_around=true edges_per_node=1 independent_edges=false seed=0
//! 0 1
//! 0 2
//! ```
//!
//! Header lines start with `#`. The record line starts with
//! `# gromov-edgelist` followed by `key=value` tokens: `format_version`, the
//! vertex count `n`, then the generating [`GenSpec`] pairs when known. Edge
//! lines are `u v` with `u < v`, sorted by `(u, v)`, each newline-terminated.
//! Reading and re-writing a file preserves its header lines verbatim, so
//! canonical files round-trip byte for byte.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{input, Error, Result};
use crate::generators::GenSpec;
use crate::graph::{Graph, VertexId};

pub const EDGELIST_FORMAT_VERSION: u32 = 1;
const RECORD_TAG: &str = "# gromov-edgelist";

/// A parsed edge-list file.
#[derive(Clone, Debug)]
pub struct EdgeListFile {
    /// Header lines exactly as read (without trailing newline).
    pub header: Vec<String>,
    pub graph: Graph,
    /// Generating spec, when the header records one.
    pub spec: Option<GenSpec>,
}

fn record_line(n: usize, spec: Option<&GenSpec>) -> String {
    let mut line = format!("{RECORD_TAG} format_version={EDGELIST_FORMAT_VERSION} n={n}");
    if let Some(spec) = spec {
        line.push(' ');
        line.push_str(&spec.to_inline());
    }
    line
}

impl EdgeListFile {
    pub fn new(graph: Graph, spec: Option<GenSpec>) -> Self {
        let header = vec![record_line(graph.n(), spec.as_ref())];
        EdgeListFile { header, graph, spec }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut out = io::BufWriter::new(&mut w);
        for line in &self.header {
            writeln!(out, "{line}")?;
        }
        for (u, v) in self.graph.edges() {
            writeln!(out, "{u} {v}")?;
        }
        out.flush()
    }

    pub fn to_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path)?;
        self.write_to(file)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header = Vec::new();
        let mut edges = Vec::new();
        let mut declared_n = None;
        let mut spec = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            if line.starts_with('#') {
                if let Some(rest) = line.strip_prefix(RECORD_TAG) {
                    let (n, s) = parse_record(rest).map_err(|e| perr(e.to_string()))?;
                    declared_n = Some(n);
                    spec = s;
                }
                header.push(line.to_string());
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut tokens = line.split_ascii_whitespace();
            let mut next = || -> Result<VertexId> {
                let tok = tokens.next().ok_or_else(|| perr("expected two vertex ids".into()))?;
                tok.parse().map_err(|_| perr(format!("bad vertex id {tok:?}")))
            };
            let (u, v) = (next()?, next()?);
            if tokens.next().is_some() {
                return Err(perr("trailing tokens".into()));
            }
            if u == v {
                return Err(perr(format!("self-loop at {u}")));
            }
            edges.push((u, v));
        }
        let implied = edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0);
        let n = match declared_n {
            Some(n) if n < implied => return Err(input(format!("header declares n={n} but edges reference vertex {}", implied - 1))),
            Some(n) => n,
            None => implied,
        };
        if let Some(s) = &spec {
            if s.vertex_count() != n {
                return Err(input(format!("header spec implies {} vertices, n={n}", s.vertex_count())));
            }
        }
        let graph = Graph::from_edges(n, edges)?;
        Ok(EdgeListFile { header, graph, spec })
    }
}

fn parse_record(rest: &str) -> Result<(usize, Option<GenSpec>)> {
    let mut n = None;
    let mut version = None;
    let mut pairs = Vec::new();
    for tok in rest.split_ascii_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| input(format!("bad header token {tok:?}")))?;
        match k {
            "format_version" => version = Some(v),
            // the record's own `n` precedes the spec tokens, which carry
            // their own `n` for grid families
            "n" if n.is_none() && pairs.is_empty() => {
                n = Some(v.parse().map_err(|_| input(format!("bad n {v:?}")))?)
            }
            _ => pairs.push((k, v)),
        }
    }
    match version {
        Some(v) if v == EDGELIST_FORMAT_VERSION.to_string() => {}
        Some(v) => return Err(input(format!("unsupported edge-list format_version {v}"))),
        None => return Err(input("header record lacks format_version")),
    }
    let n = n.ok_or_else(|| input("header record lacks n"))?;
    let spec = if pairs.is_empty() { None } else { Some(GenSpec::from_pairs(pairs)?) };
    if let Some(s) = &spec {
        if s.vertex_count() != n {
            return Err(input(format!("header n={n} disagrees with spec ({} vertices)", s.vertex_count())));
        }
    }
    Ok((n, spec))
}
