// SPDX-License-Identifier: Apache-2.0

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aigsynth::equiv::{exhaustive_equiv, random_sim_equiv, DEFAULT_EXHAUSTIVE_LIMIT};
use aigsynth::pipeline::{
    bench_files, dump_steps, generate_dataset, heatmap_csv, ip_name, make_splits, read_bench, read_manifest,
    run_recipe, stats_csv, summarize_stats, topk_matrix, GenConfig, SplitParams, StatsRow, VerifyOptions,
};
use aigsynth::recipe::{matrix_csv, parse_recipe};
use aigsynth::transforms::NpnLibrary;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "aigsynth", version, about = "AIG synthesis recipes and dataset generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay sampled recipes over a directory of BENCH designs.
    Gen {
        #[arg(long)]
        designs: PathBuf,
        #[arg(long, default_value_t = 1500)]
        recipes: usize,
        #[arg(long, default_value_t = 20)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Check every snapshot against the unoptimized design.
        #[arg(long)]
        verify: bool,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Apply one recipe to a design and print per-step statistics.
    Run {
        file: PathBuf,
        #[arg(long)]
        recipe: String,
        #[arg(long)]
        dump_steps: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Size statistics of a BENCH file, a directory of them, or a manifest.
    Stats { path: PathBuf },
    /// Train/test split of a generated dataset, as JSON.
    Splits {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        variant: u8,
        #[arg(long, conflicts_with_all = ["train_fraction", "small_ips"])]
        train_recipes: Option<usize>,
        #[arg(long, conflicts_with = "small_ips")]
        train_fraction: Option<f64>,
        /// Comma-separated design names that train (variant 2).
        #[arg(long, value_delimiter = ',')]
        small_ips: Option<Vec<String>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combinational equivalence of two BENCH designs.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        exhaustive_limit: usize,
        /// Use random simulation with this many 64-pattern words.
        #[arg(long)]
        words: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Final depth and size per (design, recipe) as CSV.
    Heatmap {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Overlap of the best recipes between designs as a CSV matrix.
    Topk {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        k_fraction: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn stats_rows(path: &Path) -> Result<Vec<StatsRow>> {
    if path.is_dir() {
        bench_files(path)?
            .iter()
            .map(|f| Ok(StatsRow::from_stats(&ip_name(f), &read_bench(f)?.stats())))
            .collect()
    } else if path.extension().is_some_and(|e| e == "csv") {
        Ok(summarize_stats(&read_manifest(path)?))
    } else {
        Ok(vec![StatsRow::from_stats(&ip_name(path), &read_bench(path)?.stats())])
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            designs,
            recipes,
            len,
            seed,
            out,
            verify,
            jobs,
        } => {
            let config = GenConfig {
                recipes,
                len,
                seed,
                verify,
                jobs,
            };
            let summary = generate_dataset(&designs, &out, &config)?;
            for (path, msg) in &summary.failures {
                eprintln!("failed: {}: {msg}", path.display());
            }
            println!(
                "{} designs, {} graph/label pairs written to {}",
                summary.designs.len(),
                summary.pairs_written(),
                out.display()
            );
            Ok(summary.failures.is_empty())
        }
        Command::Run {
            file,
            recipe,
            dump_steps: dump,
            verify,
        } => {
            let tokens = parse_recipe(&recipe)?;
            let aig = read_bench(&file)?;
            let lib = NpnLibrary::shared();
            let snaps = run_recipe(&aig, &tokens, &lib, verify.then(VerifyOptions::default).as_ref())?;
            println!("step,token,pis,pos,nodes,edges,inverters,depth");
            for s in &snaps {
                let token = if s.step_id == 0 {
                    "-".to_string()
                } else {
                    tokens[s.step_id - 1].to_string()
                };
                let st = &s.stats;
                println!(
                    "{},{token},{},{},{},{},{},{}",
                    s.step_id, st.pi_count, st.po_count, st.and_count, st.edge_count, st.inverted_edge_count, st.depth
                );
            }
            if let Some(dir) = dump {
                dump_steps(&snaps, &ip_name(&file), &dir)?;
            }
            Ok(true)
        }
        Command::Stats { path } => {
            print!("{}", stats_csv(&stats_rows(&path)?));
            Ok(true)
        }
        Command::Splits {
            manifest,
            variant,
            train_recipes,
            train_fraction,
            small_ips,
            seed,
            out,
        } => {
            let params = match variant {
                1 => SplitParams::TrainRecipes(train_recipes.ok_or("variant 1 needs --train-recipes")?),
                2 => SplitParams::SmallIps(small_ips),
                _ => SplitParams::TrainFraction(train_fraction.unwrap_or(0.7)),
            };
            let split = make_splits(&read_manifest(&manifest)?, &params, seed)?;
            let text = serde_json::to_string_pretty(&split)? + "\n";
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Equiv {
            a,
            b,
            exhaustive_limit,
            words,
            seed,
        } => {
            let (ga, gb) = (read_bench(&a)?, read_bench(&b)?);
            let report = match words {
                Some(w) => random_sim_equiv(&ga, &gb, w, seed)?,
                None => exhaustive_equiv(&ga, &gb, exhaustive_limit)?,
            };
            println!("{}", serde_json::to_string(&report)?);
            Ok(report.equivalent)
        }
        Command::Heatmap { manifest, out } => {
            fs::write(out, heatmap_csv(&read_manifest(&manifest)?))?;
            Ok(true)
        }
        Command::Topk {
            manifest,
            k_fraction,
            out,
        } => {
            let (names, m) = topk_matrix(&read_manifest(&manifest)?, k_fraction)?;
            fs::write(out, matrix_csv(&names, &m))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
