// SPDX-License-Identifier: Apache-2.0

//! Dataset generation: recipes replayed over BENCH designs, one GraphML
//! graph and JSON label per step, plus a manifest and train/test splits.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aig::{Aig, DesignStats};
use crate::bench::{parse_bench, write_bench, BenchError};
use crate::equiv::{check_equiv, EquivError, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::graphml::write_graphml;
use crate::recipe::{
    encode_recipe, sample_recipes, top_k_overlap, write_recipe_file, Recipe, RecipeError, TransformToken,
};
use crate::transforms::{
    balance, refactor, resubstitute, rewrite, NpnLibrary, TransformOutcome, DEFAULT_MAX_CONE_INPUTS,
    DEFAULT_MAX_WINDOW_INPUTS,
};

/// Random-simulation words per check when a design has too many inputs for
/// exhaustive comparison.
pub const VERIFY_RANDOM_WORDS: usize = 64;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: BenchError,
    },
    #[error("step {step}: result is not equivalent to the input")]
    NotEquivalent { step: usize },
    #[error("step {step}: {source}")]
    Equiv {
        step: usize,
        #[source]
        source: EquivError,
    },
    #[error("no BENCH designs found in {0}")]
    NoDesigns(PathBuf),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("split: {0}")]
    Split(String),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn apply_token(aig: &Aig, token: TransformToken, library: &NpnLibrary) -> TransformOutcome {
    let z = token.is_zero_cost();
    match token {
        TransformToken::B => balance(aig),
        TransformToken::Rw | TransformToken::Rwz => rewrite(aig, z, library),
        TransformToken::Rf | TransformToken::Rfz => {
            refactor(aig, z, DEFAULT_MAX_CONE_INPUTS).expect("default cone size is in range")
        }
        TransformToken::Rs | TransformToken::Rsz => {
            resubstitute(aig, z, DEFAULT_MAX_WINDOW_INPUTS).expect("default window size is in range")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub exhaustive_limit: usize,
    pub random_words: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            random_words: VERIFY_RANDOM_WORDS,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub step_id: usize,
    pub aig: Aig,
    pub stats: DesignStats,
}

/// Snapshot 0 is the cleaned input; snapshot `i` is token `i` applied to
/// snapshot `i - 1`. With `verify`, every snapshot is checked against
/// snapshot 0.
pub fn run_recipe(
    aig: &Aig,
    tokens: &[TransformToken],
    library: &NpnLibrary,
    verify: Option<&VerifyOptions>,
) -> Result<Vec<Snapshot>, PipelineError> {
    let start = aig.cleanup();
    let mut snaps = vec![Snapshot {
        step_id: 0,
        stats: start.stats(),
        aig: start,
    }];
    for (i, &t) in tokens.iter().enumerate() {
        let next = apply_token(&snaps[i].aig, t, library).result;
        if let Some(v) = verify {
            let report = check_equiv(&snaps[0].aig, &next, v.exhaustive_limit, v.random_words, v.seed)
                .map_err(|source| PipelineError::Equiv { step: i + 1, source })?;
            if !report.equivalent {
                return Err(PipelineError::NotEquivalent { step: i + 1 });
            }
        }
        snaps.push(Snapshot {
            step_id: i + 1,
            stats: next.stats(),
            aig: next,
        });
    }
    Ok(snaps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleLabel {
    pub ip_name: String,
    pub recipe_id: u32,
    pub step_id: usize,
    pub recipe_tokens: Vec<u8>,
    pub pis: usize,
    pub pos: usize,
    pub nodes: usize,
    pub inverters: usize,
    pub edges: usize,
    pub depth: usize,
    pub final_nodes: usize,
    pub area_proxy: f64,
    pub delay_proxy: f64,
}

/// One manifest line; columns in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ManifestRow {
    pub ip: String,
    pub recipe_id: u32,
    pub step_id: usize,
    pub pis: usize,
    pub pos: usize,
    pub nodes: usize,
    pub edges: usize,
    pub inverters: usize,
    pub depth: usize,
    pub final_nodes: usize,
    pub graphml: String,
    pub json: String,
}

pub const MANIFEST_HEADER: &str = "ip,recipe_id,step_id,pis,pos,nodes,edges,inverters,depth,final_nodes,graphml,json";

pub fn sample_name(ip: &str, recipe_id: u32, step_id: usize) -> String {
    format!("{ip}_syn{recipe_id}_step{step_id}")
}

/// Design name from a file stem, restricted to `[A-Za-z0-9_]`.
pub fn ip_name(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    let name: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if name.is_empty() {
        "design".to_string()
    } else {
        name
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub recipes: usize,
    pub len: usize,
    pub seed: u64,
    pub verify: bool,
    /// Worker threads; 0 picks the rayon default.
    pub jobs: usize,
}

#[derive(Debug, Default)]
pub struct GenSummary {
    pub designs: Vec<String>,
    pub failures: Vec<(PathBuf, String)>,
    pub rows: Vec<ManifestRow>,
}

impl GenSummary {
    pub fn pairs_written(&self) -> usize {
        self.rows.len()
    }
}

/// Sorted `*.bench` files of a directory.
pub fn bench_files(dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("bench")))
        .collect();
    files.sort();
    Ok(files)
}

pub fn read_bench(path: &Path) -> Result<Aig, PipelineError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_bench(&text).map_err(|source| PipelineError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn emit_recipe(
    ip: &str,
    design: &Aig,
    recipe: &Recipe,
    library: &NpnLibrary,
    verify: Option<&VerifyOptions>,
    out_dir: &Path,
) -> Result<Vec<ManifestRow>, PipelineError> {
    let snaps = run_recipe(design, &recipe.tokens, library, verify)?;
    let last = &snaps.last().expect("step 0 always present").stats;
    let (final_nodes, final_depth) = (last.and_count, last.depth);
    let codes = encode_recipe(&recipe.tokens);
    let mut rows = Vec::with_capacity(snaps.len());
    for s in &snaps {
        let name = sample_name(ip, recipe.recipe_id, s.step_id);
        let label = SampleLabel {
            ip_name: ip.to_string(),
            recipe_id: recipe.recipe_id,
            step_id: s.step_id,
            recipe_tokens: codes.clone(),
            pis: s.stats.pi_count,
            pos: s.stats.po_count,
            nodes: s.stats.and_count,
            inverters: s.stats.inverted_edge_count,
            edges: s.stats.edge_count,
            depth: s.stats.depth,
            final_nodes,
            area_proxy: final_nodes as f64,
            delay_proxy: final_depth as f64,
        };
        let graphml = format!("{name}.graphml");
        let json = format!("{name}.json");
        write_file(&out_dir.join(&graphml), &write_graphml(&s.aig))?;
        let mut text = serde_json::to_string_pretty(&label).expect("label serializes");
        text.push('\n');
        write_file(&out_dir.join(&json), &text)?;
        rows.push(ManifestRow {
            ip: ip.to_string(),
            recipe_id: recipe.recipe_id,
            step_id: s.step_id,
            pis: label.pis,
            pos: label.pos,
            nodes: label.nodes,
            edges: label.edges,
            inverters: label.inverters,
            depth: label.depth,
            final_nodes,
            graphml,
            json,
        });
    }
    Ok(rows)
}

/// Replays `config.recipes` sampled recipes over every design of
/// `designs_dir` and writes the dataset into `out_dir`. Designs that fail
/// to parse or verify are reported in the summary and skipped; output for
/// the rest is identical to a serial run.
pub fn generate_dataset(designs_dir: &Path, out_dir: &Path, config: &GenConfig) -> Result<GenSummary, PipelineError> {
    let files = bench_files(designs_dir)?;
    if files.is_empty() {
        return Err(PipelineError::NoDesigns(designs_dir.to_path_buf()));
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let recipes = sample_recipes(config.recipes, config.len, config.seed);
    write_file(&out_dir.join("recipes.txt"), &write_recipe_file(&recipes))?;

    let mut summary = GenSummary::default();
    let mut designs: Vec<(String, Aig)> = Vec::new();
    for f in &files {
        match read_bench(f) {
            Ok(aig) => designs.push((ip_name(f), aig)),
            Err(e) => summary.failures.push((f.clone(), e.to_string())),
        }
    }
    let library = NpnLibrary::shared();
    let verify = config.verify.then(|| VerifyOptions {
        seed: config.seed,
        ..Default::default()
    });
    let tasks: Vec<(usize, &Recipe)> = (0..designs.len())
        .flat_map(|d| recipes.iter().map(move |r| (d, r)))
        .collect();
    let run = || -> Vec<Result<Vec<ManifestRow>, PipelineError>> {
        tasks
            .par_iter()
            .map(|&(d, r)| {
                let (ip, aig) = &designs[d];
                emit_recipe(ip, aig, r, &library, verify.as_ref(), out_dir)
            })
            .collect()
    };
    let results = if config.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| PipelineError::Manifest(e.to_string()))?
            .install(run)
    };
    let mut failed: BTreeSet<usize> = BTreeSet::new();
    for (&(d, _), res) in tasks.iter().zip(results) {
        match res {
            Ok(rows) => summary.rows.extend(rows),
            Err(e) => {
                if failed.insert(d) {
                    summary.failures.push((files_for(&files, &designs[d].0), e.to_string()));
                }
            }
        }
    }
    let failed_ips: BTreeSet<&str> = failed.iter().map(|&d| designs[d].0.as_str()).collect();
    summary.rows.retain(|r| !failed_ips.contains(r.ip.as_str()));
    summary.rows.sort();
    summary.designs = designs
        .iter()
        .map(|(n, _)| n.clone())
        .filter(|n| !failed_ips.contains(n.as_str()))
        .collect();
    write_file(&out_dir.join("manifest.csv"), &manifest_csv(&summary.rows))?;
    Ok(summary)
}

fn files_for(files: &[PathBuf], ip: &str) -> PathBuf {
    files
        .iter()
        .find(|f| ip_name(f) == ip)
        .cloned()
        .unwrap_or_else(|| PathBuf::from(ip))
}

pub fn manifest_csv(rows: &[ManifestRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    if rows.is_empty() {
        return format!("{MANIFEST_HEADER}\n");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>, PipelineError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| PipelineError::Manifest(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    if header.join(",") != MANIFEST_HEADER {
        return Err(PipelineError::Manifest(format!("unexpected header `{}`", header.join(","))));
    }
    r.deserialize()
        .collect::<Result<Vec<ManifestRow>, _>>()
        .map_err(|e| PipelineError::Manifest(e.to_string()))
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>, PipelineError> {
    parse_manifest(&fs::read_to_string(path).map_err(io_err(path))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub variant: u8,
    pub seed: u64,
    pub train: Vec<(String, u32)>,
    pub test: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitParams {
    /// Variant 1: the lowest `n` recipe ids train on every design.
    TrainRecipes(usize),
    /// Variant 2: all recipes of the listed designs train, the rest test;
    /// `None` means designs with step-0 size below the median.
    SmallIps(Option<Vec<String>>),
    /// Variant 3: per design, a seeded random fraction of recipes trains.
    TrainFraction(f64),
}

impl SplitParams {
    fn variant(&self) -> u8 {
        match self {
            SplitParams::TrainRecipes(_) => 1,
            SplitParams::SmallIps(_) => 2,
            SplitParams::TrainFraction(_) => 3,
        }
    }
}

/// Designs with their recipe ids and step-0 sizes.
fn universe(rows: &[ManifestRow]) -> BTreeMap<&str, (BTreeSet<u32>, usize)> {
    let mut u: BTreeMap<&str, (BTreeSet<u32>, usize)> = BTreeMap::new();
    for r in rows {
        let e = u.entry(r.ip.as_str()).or_default();
        e.0.insert(r.recipe_id);
        if r.step_id == 0 {
            e.1 = r.nodes;
        }
    }
    u
}

pub fn make_splits(rows: &[ManifestRow], params: &SplitParams, seed: u64) -> Result<SplitManifest, PipelineError> {
    let u = universe(rows);
    if u.is_empty() {
        return Err(PipelineError::Split("empty manifest".into()));
    }
    let err = |m: String| Err(PipelineError::Split(m));
    let mut train = Vec::new();
    let mut test = Vec::new();
    match params {
        SplitParams::TrainRecipes(n) => {
            let ids: BTreeSet<u32> = u.values().flat_map(|(ids, _)| ids.iter().copied()).collect();
            if *n == 0 || *n >= ids.len() {
                return err(format!("train recipe count must be within 1..{}, got {n}", ids.len()));
            }
            let cut: BTreeSet<u32> = ids.iter().copied().take(*n).collect();
            for (ip, (ids, _)) in &u {
                for &id in ids {
                    let side = if cut.contains(&id) { &mut train } else { &mut test };
                    side.push((ip.to_string(), id));
                }
            }
        }
        SplitParams::SmallIps(list) => {
            let small: BTreeSet<String> = match list {
                Some(names) => {
                    if let Some(bad) = names.iter().find(|n| !u.contains_key(n.as_str())) {
                        return err(format!("unknown design `{bad}`"));
                    }
                    names.iter().cloned().collect()
                }
                None => {
                    let mut sizes: Vec<usize> = u.values().map(|(_, n)| *n).collect();
                    sizes.sort_unstable();
                    let m = sizes.len();
                    let median = if m % 2 == 1 {
                        sizes[m / 2] as f64
                    } else {
                        (sizes[m / 2 - 1] + sizes[m / 2]) as f64 / 2.0
                    };
                    u.iter()
                        .filter(|(_, (_, n))| (*n as f64) < median)
                        .map(|(ip, _)| ip.to_string())
                        .collect()
                }
            };
            if small.is_empty() || small.len() == u.len() {
                return err("both the small and the large design sets must be non-empty".into());
            }
            for (ip, (ids, _)) in &u {
                let side = if small.contains(*ip) { &mut train } else { &mut test };
                side.extend(ids.iter().map(|&id| (ip.to_string(), id)));
            }
        }
        SplitParams::TrainFraction(f) => {
            if !(*f > 0.0 && *f < 1.0) {
                return err(format!("train fraction must be in (0, 1), got {f}"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (ip, (ids, _)) in &u {
                let mut ids: Vec<u32> = ids.iter().copied().collect();
                let k = (ids.len() as f64 * f).round() as usize;
                if k == 0 || k == ids.len() {
                    return err(format!("fraction {f} leaves one side empty for `{ip}`"));
                }
                ids.shuffle(&mut rng);
                let (tr, te) = ids.split_at(k);
                let mut tr = tr.to_vec();
                let mut te = te.to_vec();
                tr.sort_unstable();
                te.sort_unstable();
                train.extend(tr.into_iter().map(|id| (ip.to_string(), id)));
                test.extend(te.into_iter().map(|id| (ip.to_string(), id)));
            }
        }
    }
    Ok(SplitManifest {
        variant: params.variant(),
        seed,
        train,
        test,
    })
}

/// Per-design summary row of the unoptimized (step 0) graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub ip: String,
    pub pi: usize,
    pub po: usize,
    pub n: usize,
    pub e: usize,
    pub i: usize,
    pub d: usize,
}

impl StatsRow {
    pub fn from_stats(ip: &str, s: &DesignStats) -> Self {
        StatsRow {
            ip: ip.to_string(),
            pi: s.pi_count,
            po: s.po_count,
            n: s.and_count,
            e: s.edge_count,
            i: s.inverted_edge_count,
            d: s.depth,
        }
    }
}

pub fn summarize_stats(rows: &[ManifestRow]) -> Vec<StatsRow> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| r.step_id == 0) {
        if seen.insert(r.ip.clone()) {
            out.push(StatsRow {
                ip: r.ip.clone(),
                pi: r.pis,
                po: r.pos,
                n: r.nodes,
                e: r.edges,
                i: r.inverters,
                d: r.depth,
            });
        }
    }
    out
}

pub fn stats_csv(rows: &[StatsRow]) -> String {
    let mut s = String::from("ip,pi,po,n,e,i,d\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{},{},{}\n", r.ip, r.pi, r.po, r.n, r.e, r.i, r.d));
    }
    s
}

/// Final-step rows, one per (design, recipe), in manifest order.
pub fn final_rows(rows: &[ManifestRow]) -> Vec<&ManifestRow> {
    let mut last: BTreeMap<(&str, u32), &ManifestRow> = BTreeMap::new();
    for r in rows {
        let e = last.entry((r.ip.as_str(), r.recipe_id)).or_insert(r);
        if r.step_id > e.step_id {
            *e = r;
        }
    }
    last.into_values().collect()
}

/// `ip,recipe_id,final_depth,final_nodes`, one line per (design, recipe).
pub fn heatmap_csv(rows: &[ManifestRow]) -> String {
    let mut s = String::from("ip,recipe_id,final_depth,final_nodes\n");
    for r in final_rows(rows) {
        s.push_str(&format!("{},{},{},{}\n", r.ip, r.recipe_id, r.depth, r.final_nodes));
    }
    s
}

/// Design names and their top-k overlap matrix, `k = round(K * fraction)`.
pub fn topk_matrix(rows: &[ManifestRow], fraction: f64) -> Result<(Vec<String>, Vec<Vec<f64>>), PipelineError> {
    let mut per_ip: BTreeMap<String, Vec<(u32, usize)>> = BTreeMap::new();
    for r in final_rows(rows) {
        per_ip.entry(r.ip.clone()).or_default().push((r.recipe_id, r.final_nodes));
    }
    let total = per_ip.values().map(Vec::len).min().unwrap_or(0);
    let k = crate::recipe::k_from_fraction(total, fraction);
    let names: Vec<String> = per_ip.keys().cloned().collect();
    let rankings: Vec<Vec<(u32, usize)>> = per_ip.into_values().collect();
    Ok((names, top_k_overlap(&rankings, k)?))
}

/// Writes each snapshot of a recipe run as `<stem>_step<i>.bench`.
pub fn dump_steps(snaps: &[Snapshot], stem: &str, dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for s in snaps {
        write_file(&dir.join(format!("{stem}_step{}.bench", s.step_id)), &write_bench(&s.aig))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aig::edge_count;
    use crate::recipe::parse_recipe;

    fn chain(n: usize) -> Aig {
        let mut g = Aig::new();
        let p: Vec<_> = (0..n).map(|i| g.add_input(format!("x{i}"))).collect();
        let mut acc = p[0];
        for &x in &p[1..] {
            acc = g.add_and(acc, x).unwrap();
        }
        g.add_output("y", acc).unwrap();
        g
    }

    #[test]
    fn balance_step_on_chain() {
        let lib = NpnLibrary::shared();
        let snaps = run_recipe(&chain(8), &[TransformToken::B], &lib, Some(&VerifyOptions::default())).unwrap();
        let depths: Vec<usize> = snaps.iter().map(|s| s.stats.depth).collect();
        assert_eq!(depths, vec![7, 3]);
    }

    #[test]
    fn empty_recipe_keeps_input() {
        let lib = NpnLibrary::shared();
        let g = chain(4);
        let snaps = run_recipe(&g, &[], &lib, None).unwrap();
        assert_eq!(snaps.len(), 1);
        assert_eq!(snaps[0].stats, g.stats());
    }

    #[test]
    fn twenty_tokens_give_twenty_one_snapshots() {
        let lib = NpnLibrary::shared();
        let tokens = parse_recipe("b;rw;rf;rs;b;rw -z;rf -z;rs -z;b;rw;rf;rs;b;rw;rf;rs;b;rw;rf;rs").unwrap();
        assert_eq!(tokens.len(), 20);
        let g = crate::gen::random_aig(8, 60, 3, 1);
        let snaps = run_recipe(&g, &tokens, &lib, Some(&VerifyOptions::default())).unwrap();
        assert_eq!(snaps.len(), 21);
    }

    #[test]
    fn edge_formula_reproduces_table_row() {
        assert_eq!(edge_count(1169, 128), 2466);
    }

    fn rows(ips: &[(&str, usize)], k: u32) -> Vec<ManifestRow> {
        let mut out = Vec::new();
        for &(ip, n) in ips {
            for id in 0..k {
                for step in [0, 1] {
                    out.push(ManifestRow {
                        ip: ip.into(),
                        recipe_id: id,
                        step_id: step,
                        pis: 2,
                        pos: 1,
                        nodes: if step == 0 { n } else { n - id as usize % 3 },
                        edges: 0,
                        inverters: 0,
                        depth: 1,
                        final_nodes: n - id as usize % 3,
                        graphml: String::new(),
                        json: String::new(),
                    });
                }
            }
        }
        out
    }

    #[test]
    fn variant_one_partitions_recipes() {
        let r = rows(&[("a", 10), ("b", 20)], 10);
        let s = make_splits(&r, &SplitParams::TrainRecipes(7), 0).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (14, 6));
        assert!(s.train.iter().all(|(_, id)| *id < 7));
        assert!(make_splits(&r, &SplitParams::TrainRecipes(10), 0).is_err());
        assert!(make_splits(&r, &SplitParams::TrainRecipes(0), 0).is_err());
    }

    #[test]
    fn variant_two_uses_median() {
        let r = rows(&[("a", 10), ("b", 20), ("c", 30)], 4);
        let s = make_splits(&r, &SplitParams::SmallIps(None), 0).unwrap();
        assert!(s.train.iter().all(|(ip, _)| ip == "a"));
        assert_eq!(s.test.len(), 8);
        let all = Some(vec!["a".to_string(), "b".to_string(), "c".to_string()]);
        assert!(make_splits(&r, &SplitParams::SmallIps(all), 0).is_err());
    }

    #[test]
    fn variant_three_per_design_fraction() {
        let r = rows(&[("a", 10), ("b", 20)], 10);
        let s = make_splits(&r, &SplitParams::TrainFraction(0.7), 4).unwrap();
        for ip in ["a", "b"] {
            assert_eq!(s.train.iter().filter(|(i, _)| i == ip).count(), 7);
            assert_eq!(s.test.iter().filter(|(i, _)| i == ip).count(), 3);
        }
        assert_eq!(s, make_splits(&r, &SplitParams::TrainFraction(0.7), 4).unwrap());
        let train: BTreeSet<_> = s.train.iter().collect();
        assert!(s.test.iter().all(|p| !train.contains(p)));
    }

    #[test]
    fn manifest_round_trip_and_summaries() {
        let r = rows(&[("a", 10), ("b", 20)], 3);
        let text = manifest_csv(&r);
        assert!(text.starts_with(MANIFEST_HEADER));
        assert_eq!(parse_manifest(&text).unwrap(), r);
        assert_eq!(summarize_stats(&r).len(), 2);
        assert_eq!(heatmap_csv(&r).lines().count(), 1 + 6);
        let (names, m) = topk_matrix(&r, 0.34).unwrap();
        assert_eq!(names, vec!["a", "b"]);
        assert_eq!(m[0][0], 1.0);
    }
}
