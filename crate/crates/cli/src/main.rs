// SPDX-License-Identifier: Apache-2.0

//! `gromov`: generate graphs, measure δ, embed ringed trees, verify
//! structure and run sweeps.
//!
//! Exit status: 0 on success, 1 on any input or runtime error (one line on
//! stderr), 2 when `verify` finds a violation.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gromov_core::edgelist::{EdgeListFile, EDGELIST_FORMAT_VERSION};
use gromov_core::error::{Error, Result};
use gromov_core::experiments::{run_sweep, write_csv, SweepConfig, SWEEP_CSV_FORMAT_VERSION};
use gromov_core::generators::{generate, GKind, GenSpec, Model, SpanBound, Variants, GENSPEC_FORMAT_VERSION};
use gromov_core::graph::{all_pairs_capped, VertexId, DEFAULT_MATRIX_CAP};
use gromov_core::hyperbolicity::{exact_delta_with, sampled_delta, sampled_delta_bfs, DeltaReport, Method};
use gromov_core::ringed::{
    address_table, poincare_embed, verify_quasi_isometry, verify_structural_lemmas, LemmaConfig,
};

#[derive(Parser)]
#[command(name = "gromov", about = "Hyperbolicity of small-world and ringed-tree random graphs")]
#[command(disable_version_flag = true, arg_required_else_help = true)]
struct Cli {
    /// Random seed (generation, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Only report errors on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Print the version and file format versions.
    #[arg(long, short = 'V')]
    version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Compute δ of an edge-list graph.
    Delta(DeltaArgs),
    /// Write Poincaré-disk coordinates of RT(k) as CSV.
    Embed(EmbedArgs),
    /// Check the quasi-isometry bounds and structural lemmas of RT(k).
    Verify(VerifyArgs),
    /// Run a parameter sweep from a TOML config.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ksw,
    Rt,
    RtF,
    Rrt,
    Rbt,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    ExpRing,
    PowRing,
    LcaHeight,
}

impl From<LawArg> for GKind {
    fn from(l: LawArg) -> GKind {
        match l {
            LawArg::ExpRing => GKind::ExpRing,
            LawArg::PowRing => GKind::PowRing,
            LawArg::LcaHeight => GKind::LcaHeight,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, required_unless_present = "from_spec")]
    family: Option<FamilyArg>,
    /// Vertex count (ksw).
    #[arg(long)]
    n: Option<usize>,
    /// Grid dimension (ksw).
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Distance decay exponent (ksw).
    #[arg(long)]
    gamma: Option<f64>,
    /// Tree levels (rt, rt_f, rrt, rbt).
    #[arg(long)]
    k: Option<u32>,
    /// Ring-distance bound for rt_f: const:<c>, log2n or pow:<p>.
    #[arg(long, default_value = "log2n")]
    span: SpanBound,
    #[arg(long, value_enum, default_value = "exp-ring")]
    g_kind: LawArg,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Open grid instead of a torus.
    #[arg(long)]
    no_wrap: bool,
    #[arg(long, default_value_t = 1)]
    edges_per_node: u32,
    /// Link each pair independently instead of drawing per node.
    #[arg(long)]
    independent: bool,
    /// Read the full spec from a document instead of flags.
    #[arg(long, conflicts_with = "family")]
    from_spec: Option<PathBuf>,
    /// Also write the spec as a document.
    #[arg(long)]
    spec_out: Option<PathBuf>,
    /// Edge-list destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    #[value(alias = "sampled")]
    Sample,
}

#[derive(Args)]
struct DeltaArgs {
    /// Edge-list file.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Refuse the exact scan above this many vertices.
    #[arg(long, default_value_t = gromov_core::hyperbolicity::DEFAULT_EXACT_MAX_N)]
    max_n: usize,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 10_000)]
    pairs: u64,
    #[arg(long, default_value_t = 10_000)]
    triples: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; falls back to the config's `output`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = if cli.quiet { log::LevelFilter::Error } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).parse_default_env().format_timestamp(None).init();

    if cli.version {
        println!(
            "gromov {} (edge-list format {EDGELIST_FORMAT_VERSION}, genspec format {GENSPEC_FORMAT_VERSION}, sweep csv format {SWEEP_CSV_FORMAT_VERSION})",
            env!("CARGO_PKG_VERSION")
        );
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given");
        return ExitCode::from(1);
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match command {
        Command::Generate(a) => cmd_generate(a, cli.seed),
        Command::Delta(a) => cmd_delta(a, cli.seed),
        Command::Embed(a) => cmd_embed(a),
        Command::Verify(a) => cmd_verify(a, cli.seed),
        Command::Experiment(a) => cmd_experiment(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Opens `path` for writing, or stdout.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn missing(flag: &str, family: &str) -> Error {
    Error::Input(format!("--{flag} is required for family {family}"))
}

fn spec_from_flags(a: &GenerateArgs, seed: u64) -> Result<GenSpec> {
    let family = a.family.expect("clap enforces --family without --from-spec");
    let k = |name| a.k.ok_or_else(|| missing("k", name));
    let model = match family {
        FamilyArg::Ksw => Model::Ksw {
            n: a.n.ok_or_else(|| missing("n", "ksw"))?,
            d: a.d,
            gamma: a.gamma.ok_or_else(|| missing("gamma", "ksw"))?,
        },
        FamilyArg::Rt => Model::Rt { k: k("rt")? },
        FamilyArg::RtF => Model::RtF { k: k("rt_f")?, span: a.span },
        FamilyArg::Rrt => Model::Rrt { k: k("rrt")?, g_kind: a.g_kind.into(), alpha: a.alpha },
        FamilyArg::Rbt => Model::Rbt { k: k("rbt")?, g_kind: a.g_kind.into(), alpha: a.alpha },
    };
    let variants = Variants {
        wrap_around: !a.no_wrap,
        edges_per_node: a.edges_per_node,
        independent_edges: a.independent,
    };
    Ok(GenSpec::new(model, seed).with_variants(variants))
}

fn cmd_generate(a: GenerateArgs, seed: u64) -> Result<bool> {
    let spec = match &a.from_spec {
        Some(path) => GenSpec::from_document(&read_text(path)?)?,
        None => spec_from_flags(&a, seed)?,
    };
    let generated = generate(&spec)?;
    for w in &generated.warnings {
        log::warn!("{w}");
    }
    if let Some(p) = &a.spec_out {
        std::fs::write(p, spec.to_document())?;
    }
    let file = EdgeListFile::new(generated.graph, Some(spec));
    let mut out = sink(a.out.as_deref())?;
    file.write_to(&mut out)?;
    out.flush()?;
    Ok(true)
}

#[derive(Serialize)]
struct DeltaRecord {
    two_delta: u32,
    delta: f64,
    method: Method,
    witness: [VertexId; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    diameter: u32,
    runtime_ms: u64,
}

fn cmd_delta(a: DeltaArgs, seed: u64) -> Result<bool> {
    let file = EdgeListFile::load(&a.input)?;
    let start = Instant::now();
    let g = &file.graph;
    let report: DeltaReport = match a.method {
        MethodArg::Exact => exact_delta_with(&all_pairs_capped(g, DEFAULT_MATRIX_CAP)?, a.max_n)?,
        MethodArg::Sample => match all_pairs_capped(g, DEFAULT_MATRIX_CAP) {
            Ok(m) => sampled_delta(&m, a.samples, seed)?,
            Err(Error::Capacity { .. }) => sampled_delta_bfs(g, a.samples, seed)?,
            Err(e) => return Err(e),
        },
    };
    let record = DeltaRecord {
        two_delta: report.two_delta,
        delta: report.delta(),
        method: report.method,
        witness: report.witness,
        samples: report.samples,
        seed: report.seed,
        diameter: report.diameter,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    let line = serde_json::to_string(&record).map_err(|e| Error::Input(e.to_string()))?;
    println!("{line}");
    Ok(true)
}

fn cmd_embed(a: EmbedArgs) -> Result<bool> {
    let k = a.k;
    if !(1..=gromov_core::ringed::MAX_LEVEL).contains(&k) {
        return Err(Error::Input(format!("k={k} out of range")));
    }
    let mut out = sink(a.out.as_deref())?;
    writeln!(out, "id,level,pos,re,im")?;
    for addr in address_table(k) {
        let p = poincare_embed(addr);
        writeln!(out, "{},{},{},{},{}", addr.id(), addr.level, addr.pos, p.re, p.im)?;
    }
    out.flush()?;
    Ok(true)
}

fn cmd_verify(a: VerifyArgs, seed: u64) -> Result<bool> {
    let mut out = io::stdout().lock();
    let qi = verify_quasi_isometry(a.k)?;
    writeln!(
        out,
        "{} quasi_isometry k={} pairs={} violations={} min_lower_margin={:.6} min_upper_margin={:.6}",
        verdict(qi.passed()),
        a.k,
        qi.pairs_checked,
        qi.violations,
        qi.min_lower_margin,
        qi.min_upper_margin
    )?;
    let cfg = LemmaConfig { sampled_pairs: a.pairs, sampled_triples: a.triples, seed };
    let lemmas = verify_structural_lemmas(a.k, &cfg)?;
    for c in &lemmas.checks {
        write!(out, "{} {} k={} checked={} failures={}", verdict(c.passed()), c.name, a.k, c.checked, c.failures)?;
        if let Some(w) = &c.witness {
            write!(out, " first_failure=\"{w}\"")?;
        }
        writeln!(out)?;
    }
    Ok(qi.passed() && lemmas.passed())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_experiment(a: ExperimentArgs) -> Result<bool> {
    let cfg = SweepConfig::load(&a.config)?;
    let rows = run_sweep(&cfg)?;
    let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
    if skipped > 0 {
        log::warn!("{skipped} of {} rows skipped", rows.len());
    }
    let dest = a.out.or_else(|| cfg.output.clone());
    let mut out = sink(dest.as_deref())?;
    write_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(true)
}
