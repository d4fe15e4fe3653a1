// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use regex::Regex;

use aigsynth::pipeline::{
    generate_dataset, make_splits, read_manifest, GenConfig, SampleLabel, SplitParams, MANIFEST_HEADER,
};
use aigsynth::recipe::parse_recipe_file;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn designs(names: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for n in names {
        fs::copy(data(n), dir.path().join(n)).unwrap();
    }
    dir
}

fn config(jobs: usize) -> GenConfig {
    GenConfig {
        recipes: 4,
        len: 5,
        seed: 3,
        verify: true,
        jobs,
    }
}

fn listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn outputs_are_consistent() {
    let src = designs(&["c17.bench", "mux4.bench", "adder4.bench"]);
    let out = tempfile::tempdir().unwrap();
    let summary = generate_dataset(src.path(), out.path(), &config(2)).unwrap();
    assert!(summary.failures.is_empty());
    assert_eq!(summary.pairs_written(), 3 * 4 * 6);

    let manifest = fs::read_to_string(out.path().join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().next().unwrap(), MANIFEST_HEADER);
    let recipes = parse_recipe_file(&fs::read_to_string(out.path().join("recipes.txt")).unwrap()).unwrap();
    assert_eq!(recipes.len(), 4);

    let name_re = Regex::new(r"^[A-Za-z0-9_]+_syn[0-9]+_step[0-9]+$").unwrap();
    let rows = read_manifest(&out.path().join("manifest.csv")).unwrap();
    for r in &rows {
        let stem = r.json.trim_end_matches(".json");
        assert!(name_re.is_match(stem), "{stem}");
        assert_eq!(r.graphml, format!("{stem}.graphml"));
        let label: SampleLabel = serde_json::from_slice(&fs::read(out.path().join(&r.json)).unwrap()).unwrap();
        assert_eq!((label.nodes, label.edges, label.depth), (r.nodes, r.edges, r.depth));
        assert_eq!(label.recipe_tokens.len(), 5);
        let xml = fs::read_to_string(out.path().join(&r.graphml)).unwrap();
        assert_eq!(xml.matches("<edge ").count(), r.edges);
        let last = rows
            .iter()
            .find(|x| x.ip == r.ip && x.recipe_id == r.recipe_id && x.step_id == 5)
            .unwrap();
        assert_eq!(r.final_nodes, last.nodes);
    }
}

#[test]
fn parallel_matches_serial() {
    let src = designs(&["c17.bench", "full_adder.bench", "majority5.bench"]);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    generate_dataset(src.path(), a.path(), &config(1)).unwrap();
    generate_dataset(src.path(), b.path(), &config(4)).unwrap();
    assert_eq!(listing(a.path()), listing(b.path()));
}

#[test]
fn splits_over_generated_rows() {
    let src = designs(&["c17.bench", "mux4.bench", "mult3x3.bench"]);
    let out = tempfile::tempdir().unwrap();
    generate_dataset(src.path(), out.path(), &config(0)).unwrap();
    let rows = read_manifest(&out.path().join("manifest.csv")).unwrap();

    let s = make_splits(&rows, &SplitParams::TrainRecipes(3), 0).unwrap();
    assert_eq!((s.train.len(), s.test.len()), (9, 3));
    assert!(make_splits(&rows, &SplitParams::TrainRecipes(4), 0).is_err());

    let s = make_splits(&rows, &SplitParams::SmallIps(None), 0).unwrap();
    assert!(s.test.iter().any(|(ip, _)| ip == "mult3x3"));
    assert!(s.train.iter().all(|(ip, _)| ip != "mult3x3"));

    let a = make_splits(&rows, &SplitParams::TrainFraction(0.5), 9).unwrap();
    assert_eq!(a, make_splits(&rows, &SplitParams::TrainFraction(0.5), 9).unwrap());
    assert_eq!(a.train.len(), 6);
}

#[test]
fn bad_design_is_reported_not_fatal() {
    let src = designs(&["c17.bench"]);
    fs::write(src.path().join("broken.bench"), "INPUT(a)\nOUTPUT(y)\ny = AND(a, nope)\n").unwrap();
    let out = tempfile::tempdir().unwrap();
    let summary = generate_dataset(src.path(), out.path(), &config(0)).unwrap();
    assert_eq!(summary.failures.len(), 1);
    assert_eq!(summary.designs, vec!["c17".to_string()]);
}
