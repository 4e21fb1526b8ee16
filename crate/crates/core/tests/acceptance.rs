// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion, and exits nonzero if any failed.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use gromov_core::edgelist::EdgeListFile;
use gromov_core::experiments::{fit_scaling, median_by_size, run_sweep, to_csv_string, SweepConfig, SweepRow, XTransform};
use gromov_core::generators::{gen_ringed_tree, generate, GKind, GenSpec, Model, SpanBound, Variants};
use gromov_core::graph::{all_pairs, Geodesic, Graph};
use gromov_core::hyperbolicity::{exact_delta, four_point_delta, quadruple_delta, sampled_delta, triangle_slimness};
use gromov_core::ringed::{
    canonical_geodesic, verify_quasi_isometry, verify_structural_lemmas, LemmaConfig, TreeAddress,
    CANONICAL_IS_GEODESIC, CANONICAL_SLIM, DISTANCE_LOWER, DISTANCE_UPPER, HALVING, RECTIFICATION,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    // random recursive tree on a shuffled labelling
    let mut labels: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    let edges: Vec<(u32, u32)> = (1..n).map(|i| (labels[rng.random_range(0..i)], labels[i])).collect();
    Graph::from_edges(n, edges).unwrap()
}

fn trees_are_flat() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee5);
    let mut worst = 0;
    let mut sizes = Vec::new();
    for _ in 0..50 {
        let n = rng.random_range(2..=200);
        sizes.push(n);
        let m = all_pairs(&random_tree(n, &mut rng)).unwrap();
        worst = worst.max(exact_delta(&m).unwrap().two_delta);
    }
    let largest = sizes.iter().max().unwrap();
    check(worst == 0, format!("max two_delta over 50 trees (largest n={largest}) = {worst}"))
}

fn cycles_match_analytic_metric() -> Outcome {
    let mut mismatches = Vec::new();
    for n in 4..=32usize {
        let g = Graph::from_edges(n, (0..n as u32).map(|i| (i, (i + 1) % n as u32))).unwrap();
        let got = exact_delta(&all_pairs(&g).unwrap()).unwrap().two_delta;
        let dist = |a: usize, b: usize| {
            let d = a.abs_diff(b);
            d.min(n - d) as u32
        };
        let mut want = 0;
        for u in 0..n {
            for v in u + 1..n {
                for w in v + 1..n {
                    for x in w + 1..n {
                        let t = four_point_delta(dist(u, v), dist(w, x), dist(u, w), dist(v, x), dist(u, x), dist(v, w));
                        want = want.max(t);
                    }
                }
            }
        }
        if got != want {
            mismatches.push((n, got, want));
        }
    }
    check(mismatches.is_empty(), format!("cycles 4..=32, mismatches {mismatches:?}"))
}

fn grid_corners() -> Outcome {
    let side = 64u32;
    let spec = GenSpec::new(Model::Ksw { n: 4096, d: 2, gamma: 0.0 }, 0);
    let grid = gromov_core::generators::Grid::new(4096, 2, true).unwrap();
    let g = Graph::from_edges(4096, grid.base_edges()).unwrap();
    assert_eq!(g.edge_count(), 2 * 4096, "{}", spec.to_inline());
    let m = all_pairs(&g).unwrap();
    let id = |x: u32, y: u32| (x % side) + side * (y % side);
    let mut bad = Vec::new();
    let mut checked = 0;
    for l in 1..=10u32 {
        for y in 0..side {
            for x in 0..side {
                let q = [id(x, y), id(x + l, y), id(x, y + l), id(x + l, y + l)];
                checked += 1;
                if quadruple_delta(&m, q) != 2 * l {
                    bad.push((l, x, y));
                }
            }
        }
    }
    check(bad.is_empty(), format!("{checked} corner quadruples on the 64x64 torus, {} wrong", bad.len()))
}

fn ringed_tree_constants() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for k in 4..=7 {
        let (g, _) = gen_ringed_tree(k).unwrap();
        let r = exact_delta(&all_pairs(&g).unwrap()).unwrap();
        ok &= r.two_delta <= 80;
        notes.push(format!("delta(RT({k}))={}", r.delta()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5117);
    let mut worst_slim = 0;
    let mut non_geodesic = 0u64;
    for k in 1..=9 {
        let (g, table) = gen_ringed_tree(k).unwrap();
        let m = all_pairs(&g).unwrap();
        for (i, &u) in table.iter().enumerate() {
            for &v in &table[i..] {
                let geo = canonical_geodesic(k, u, v).unwrap();
                if geo.length() as u32 != m.get(u.id(), v.id()) || !geo.is_geodesic_in(&g, &m) {
                    non_geodesic += 1;
                }
            }
        }
        let side = |a: TreeAddress, b: TreeAddress| -> Geodesic { canonical_geodesic(k, a, b).unwrap() };
        for _ in 0..10_000 {
            let [a, b, c] = std::array::from_fn(|_| table[rng.random_range(0..table.len())]);
            let r = triangle_slimness(&g, &m, [side(a, b), side(b, c), side(c, a)]).unwrap();
            worst_slim = worst_slim.max(r.slimness);
        }
    }
    ok &= worst_slim <= 3 && non_geodesic == 0;
    notes.push(format!("max canonical slimness k<=9: {worst_slim}"));
    notes.push(format!("non-geodesic canonical paths k<=9: {non_geodesic}"));
    check(ok, notes.join(", "))
}

fn quasi_isometry() -> Outcome {
    let mut violations = 0;
    let mut pairs = 0;
    let mut margin = f64::INFINITY;
    for k in 1..=10 {
        let r = verify_quasi_isometry(k).unwrap();
        violations += r.violations;
        pairs += r.pairs_checked;
        margin = margin.min(r.min_lower_margin.min(r.min_upper_margin));
    }
    check(violations == 0, format!("{pairs} pairs over k<=10, {violations} violations, tightest margin {margin:.4}"))
}

fn structural_lemmas() -> Outcome {
    let mut totals: BTreeMap<&str, (u64, u64, Option<String>)> = BTreeMap::new();
    for k in 2..=10 {
        let sampled = if k <= 9 { 10_000 } else { 0 };
        let cfg = LemmaConfig { sampled_pairs: sampled, sampled_triples: 0, seed: 0xa11 };
        let r = verify_structural_lemmas(k, &cfg).unwrap();
        for c in &r.checks {
            if [HALVING, DISTANCE_LOWER, DISTANCE_UPPER, RECTIFICATION].contains(&c.name) {
                let e = totals.entry(c.name).or_default();
                e.0 += c.checked;
                e.1 += c.failures;
                if e.2.is_none() {
                    e.2 = c.witness.clone().map(|w| format!("k={k}: {w}"));
                }
            }
        }
    }
    let _ = (CANONICAL_IS_GEODESIC, CANONICAL_SLIM);
    let ok = totals.values().all(|t| t.1 == 0);
    let detail = totals
        .iter()
        .map(|(name, (checked, failed, w))| match w {
            Some(w) => format!("{name} {failed}/{checked} failed (first: {w})"),
            None => format!("{name} 0/{checked} failed"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    check(ok, detail)
}

const SEEDS_20: &str = "seeds = [0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19]";

fn leaf_sweep(family: &str, g_kind: GKind) -> &'static Vec<(usize, f64)> {
    static CACHE: OnceLock<std::sync::Mutex<BTreeMap<String, &'static Vec<(usize, f64)>>>> = OnceLock::new();
    let key = format!("{family}/{g_kind}");
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v;
    }
    let cfg = SweepConfig::from_toml(&format!(
        "family = \"{family}\"\nk = [9, 10, 11, 12, 13]\ng_kind = [\"{g_kind}\"]\nalpha = [1.0]\n{SEEDS_20}\nsamples_per_graph = 1000000\n"
    ))
    .unwrap();
    let rows = run_sweep(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.skipped.is_none()));
    let med: &'static Vec<(usize, f64)> = Box::leak(Box::new(median_by_size(&rows)));
    cache.lock().unwrap().insert(key, med);
    med
}

fn non_decreasing(m: &[(usize, f64)]) -> bool {
    m.windows(2).all(|w| w[1].1 >= w[0].1)
}

fn rise(m: &[(usize, f64)]) -> f64 {
    m.last().unwrap().1 - m[0].1
}

fn show(m: &[(usize, f64)]) -> String {
    m.iter().map(|(_, d)| format!("{d}")).collect::<Vec<_>>().join(",")
}

fn ringed_leaf_contrast() -> Outcome {
    let exp = leaf_sweep("rrt", GKind::ExpRing);
    let pow = leaf_sweep("rrt", GKind::PowRing);
    let lca = leaf_sweep("rrt", GKind::LcaHeight);
    let top = |m: &[(usize, f64)]| m.last().unwrap().1;
    let ok = top(exp) <= top(pow)
        && non_decreasing(pow)
        && non_decreasing(lca)
        && rise(pow) >= 2.0
        && rise(lca) >= 2.0
        && rise(exp) <= rise(pow) / 2.0;
    check(
        ok,
        format!("median delta for k=9..13: exp_ring [{}], pow_ring [{}], lca_height [{}]", show(exp), show(pow), show(lca)),
    )
}

fn binary_leaf_growth() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for g_kind in GKind::ALL {
        let m = leaf_sweep("rbt", g_kind);
        ok &= non_decreasing(m) && rise(m) >= 2.0;
        notes.push(format!("rbt {g_kind} [{}]", show(m)));
    }
    let rbt = leaf_sweep("rbt", GKind::ExpRing).last().unwrap().1;
    let rrt = leaf_sweep("rrt", GKind::ExpRing).last().unwrap().1;
    ok &= rbt > rrt;
    notes.push(format!("k=13 exp_ring rbt {rbt} vs rrt {rrt}"));
    check(ok, notes.join("; "))
}

fn grid_sweep(gamma: f64) -> Vec<SweepRow> {
    let cfg = SweepConfig::from_toml(&format!(
        "family = \"ksw\"\nn = [1024, 2048, 4096, 8192, 16384]\nd = [1]\ngamma = [{gamma:?}]\nseeds = [0,1,2,3,4,5,6,7,8,9]\nsamples_per_graph = 1000000\n"
    ))
    .unwrap();
    let rows = run_sweep(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.skipped.is_none()));
    rows
}

fn small_world_trends() -> Outcome {
    let uniform = grid_sweep(0.0);
    let um = median_by_size(&uniform);
    let a = um.last().unwrap().1 > um[0].1;

    let steep = grid_sweep(4.0);
    let sm = median_by_size(&steep);
    let fit = fit_scaling(&steep, XTransform::LogLogSpace).unwrap();
    let b = (0.4..=0.9).contains(&fit.slope);

    let short = steep
        .iter()
        .filter(|r| r.max_long_range_span as f64 <= (r.n() as f64).powf(1.0 / 3.0 + 0.1))
        .count();
    let c = short * 10 >= steep.len() * 9;
    check(
        a && b && c,
        format!(
            "(a) gamma=0 medians [{}] {}; (b) gamma=4 medians [{}], exponent {:.3} (r2 {:.3}) {}; (c) {short}/{} spans within bound {}",
            show(&um),
            pass(a),
            show(&sm),
            fit.slope,
            fit.r_squared,
            pass(b),
            steep.len(),
            pass(c)
        ),
    )
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn random_small_spec(i: u64, rng: &mut ChaCha8Rng) -> GenSpec {
    let g_kind = GKind::ALL[rng.random_range(0..3)];
    let alpha = rng.random_range(0.2..3.0);
    let variants = Variants {
        wrap_around: rng.random_bool(0.7),
        edges_per_node: rng.random_range(1..=2),
        independent_edges: rng.random_bool(0.3),
    };
    let model = match i % 6 {
        0 => Model::Ksw { n: rng.random_range(8..=120), d: 1, gamma: rng.random_range(0.0..5.0) },
        1 => {
            let s = rng.random_range(3..=10usize);
            Model::Ksw { n: s * s, d: 2, gamma: rng.random_range(0.0..5.0) }
        }
        2 => Model::Rrt { k: rng.random_range(3..=6), g_kind, alpha },
        3 => Model::Rbt { k: rng.random_range(3..=6), g_kind, alpha },
        4 => Model::RtF { k: rng.random_range(3..=6), span: SpanBound::Const(rng.random_range(1.0..8.0)) },
        _ => Model::Rt { k: rng.random_range(3..=6) },
    };
    GenSpec::new(model, rng.random()).with_variants(variants)
}

fn estimator_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x50);
    let mut unsound = Vec::new();
    let mut exact_hits = 0u64;
    let total = 200;
    for i in 0..total {
        let spec = random_small_spec(i, &mut rng);
        let g = generate(&spec).unwrap().graph;
        assert!(g.n() <= 120);
        let m = all_pairs(&g).unwrap();
        let exact = exact_delta(&m).unwrap().two_delta;
        for budget in [100, 1_000, 10_000] {
            let s = sampled_delta(&m, budget, i).unwrap().two_delta;
            if s > exact {
                unsound.push(spec.to_inline());
            }
            if budget == 10_000 && s == exact {
                exact_hits += 1;
            }
        }
    }
    let ok = unsound.is_empty() && exact_hits * 10 >= total * 9;
    check(ok, format!("{} unsound estimates; 10^4 samples hit exact on {exact_hits}/{total}", unsound.len()))
}

fn determinism() -> Outcome {
    let pool = |t| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
    let specs = [
        GenSpec::new(Model::Ksw { n: 4096, d: 2, gamma: 2.0 }, 1),
        GenSpec::new(Model::Ksw { n: 1 << 14, d: 1, gamma: 4.0 }, 2),
        GenSpec::new(Model::RtF { k: 12, span: SpanBound::Log2N }, 3),
        GenSpec::new(Model::Rrt { k: 12, g_kind: GKind::PowRing, alpha: 1.0 }, 4)
            .with_variants(Variants { edges_per_node: 2, ..Variants::default() }),
        GenSpec::new(Model::Rbt { k: 10, g_kind: GKind::LcaHeight, alpha: 0.5 }, 5)
            .with_variants(Variants { independent_edges: true, ..Variants::default() }),
    ];
    let mut differing = Vec::new();
    for spec in &specs {
        let render = || EdgeListFile::new(generate(spec).unwrap().graph, Some(spec.clone())).to_string();
        let (a, b, c) = (pool(1).install(render), pool(4).install(render), render());
        if a != b || a != c {
            differing.push(spec.model.family());
        }
    }
    let cfg = SweepConfig::from_toml(
        "family = \"rrt\"\nk = [6, 8]\ng_kind = [\"exp_ring\", \"lca_height\"]\nseeds = [1, 2]\nsamples_per_graph = 20000\n",
    )
    .unwrap();
    let csv = |t| pool(t).install(|| to_csv_string(&run_sweep(&cfg).unwrap()));
    let csv_same = csv(1) == csv(4) && csv(1) == csv(1);
    check(
        differing.is_empty() && csv_same,
        format!("edge lists differing across runs/threads: {differing:?}; sweep csv identical: {csv_same}"),
    )
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let criteria = [
        Criterion { name: "trees have exact delta 0", limit: min(1), run: trees_are_flat },
        Criterion { name: "cycle delta matches the analytic cycle metric", limit: min(1), run: cycles_match_analytic_metric },
        Criterion { name: "torus subgrid corners give delta = side", limit: min(1), run: grid_corners },
        Criterion { name: "ringed-tree delta, canonical slimness and geodesics", limit: min(1), run: ringed_tree_constants },
        Criterion { name: "disk embedding quasi-isometry bounds", limit: min(5), run: quasi_isometry },
        Criterion { name: "ringed-tree structural lemma suite", limit: min(10), run: structural_lemmas },
        Criterion { name: "random ringed trees: leaf-law contrast", limit: min(30), run: ringed_leaf_contrast },
        Criterion { name: "random binary trees: growth under all leaf laws", limit: min(30), run: binary_leaf_growth },
        Criterion { name: "small-world trends in 1D", limit: min(45), run: small_world_trends },
        Criterion { name: "sampled estimator soundness", limit: min(10), run: estimator_soundness },
        Criterion { name: "determinism across runs and thread counts", limit: min(10), run: determinism },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let number = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &number.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > c.limit => Err(format!("{d}; over time limit {:?}", c.limit)),
            o => o,
        };
        let (verdict, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {number:>2} {verdict} {} ({:.1}s): {detail}", c.name, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
