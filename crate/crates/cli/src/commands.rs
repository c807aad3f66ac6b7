use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::json;
use sslrank::data::{load_dataset, mask_labels};
use sslrank::eval::{ch_score, evaluate_ranking, measure_name, xval};
use sslrank::rng::{permutation, seeded};
use sslrank::{rank, Dataset};

use crate::config::RunConfig;
use crate::error::CliError;

/// Warnings raised while producing the outputs.
pub type Warnings = Vec<String>;

fn load(cfg: &RunConfig) -> Result<Dataset, CliError> {
    let (data, schema) = cfg.data_paths()?;
    Ok(load_dataset(data, schema)?)
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

pub fn rank_cmd(cfg: &RunConfig) -> Result<Warnings, CliError> {
    let seed = cfg.seed()?;
    let ranker = cfg.ranker()?;
    let out = cfg.out()?;
    let mut d = load(cfg)?;
    if let Some(l) = cfg.labeled {
        d = mask_labels(&d, l, seed)?;
    }
    let ranking = rank(&d, &ranker)?
        .with_meta("seed", seed)
        .with_meta("labeled", d.n_labeled())
        .with_meta("ranker", &ranker);
    let level = cfg.labeled.map_or_else(|| "all".to_string(), |l| l.to_string());
    let dir = out.join(ranker.method.name()).join(level);
    ranking.write(&dir)?;
    println!("{}", dir.join("ranking.csv").display());
    Ok(ranking.warnings)
}

pub fn xval_cmd(cfg: &RunConfig) -> Result<Warnings, CliError> {
    let out = cfg.out()?;
    let xc = cfg.xval_config()?;
    let d = load(cfg)?;
    let result = xval(&d, &xc)?;
    let dir = out.join(result.method.name());

    let mut curves = String::from("variant,k,L,performance\n");
    for c in &result.curves {
        for (l, p) in &c.curve.points {
            writeln!(curves, "{},{},{},{}", c.variant, c.k, l, p).expect("write to string");
        }
    }
    write(&dir.join("curves.csv"), &curves)?;

    for &l in &xc.l_grid {
        let mut cells = String::from("fold,test_size,chosen");
        for k in &xc.eval_k {
            write!(cells, ",ssl_k{k},sl_k{k}").expect("write to string");
        }
        cells.push('\n');
        for c in result.cells.iter().filter(|c| c.l == l) {
            write!(cells, "{},{},\"{}\"", c.fold, c.test_size, c.chosen).expect("write to string");
            for (s, u) in c.ssl.iter().zip(&c.sl) {
                write!(cells, ",{s},{u}").expect("write to string");
            }
            cells.push('\n');
        }
        write(&dir.join(l.to_string()).join("cells.csv"), &cells)?;
    }

    let areas: Vec<_> = result
        .curves
        .iter()
        .map(|c| json!({"variant": c.variant, "k": c.k, "area": c.curve.area}))
        .collect();
    let deltas: Vec<_> = result.deltas.iter().map(|(k, v)| json!({"k": k, "delta": v})).collect();
    let summary = json!({
        "method": result.method,
        "measure": result.measure,
        "higher_is_better": result.higher_is_better,
        "folds": xc.folds,
        "L_grid": xc.l_grid,
        "seed": xc.seed,
        "areas": areas,
        "deltas": deltas,
        "ranker": xc.ranker,
        "tuning_candidates": xc.tuning.len(),
    });
    write(&dir.join("summary.json"), &pretty(&summary))?;
    for (k, v) in &result.deltas {
        println!("k={k} delta={v}");
    }
    Ok(Vec::new())
}

pub fn ch_cmd(cfg: &RunConfig) -> Result<Warnings, CliError> {
    let seed = cfg.seed()?;
    let d = load(cfg)?;
    let ch = ch_score(&d, seed)?;
    println!("{ch}");
    if let Some(out) = &cfg.out {
        write(&out.join("ch.json"), &pretty(&json!({"ch": ch, "seed": seed, "task": d.task()})))?;
    }
    Ok(Vec::new())
}

/// Scores from a ranking CSV, aligned with the dataset's feature order.
fn read_scores(path: &Path, d: &Dataset) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::usage(format!("cannot read ranking {}: {e}", path.display())))?;
    let mut by_name = HashMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| CliError::usage(format!("bad ranking file: {e}")))?;
        let score: f64 = row
            .get(1)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::usage("ranking rows must be `feature,score,rank`"))?;
        by_name.insert(row.get(0).unwrap_or_default().to_string(), score);
    }
    d.feature_names()
        .iter()
        .map(|n| {
            by_name
                .get(n)
                .copied()
                .ok_or_else(|| CliError::usage(format!("ranking has no score for feature `{n}`")))
        })
        .collect()
}

pub fn evaluate_cmd(cfg: &RunConfig) -> Result<Warnings, CliError> {
    let d = load(cfg)?;
    let path = cfg.ranking.as_deref().ok_or_else(|| CliError::usage("--ranking is required"))?;
    let scores = read_scores(path, &d)?;
    let ks = cfg.eval_k();
    let mut results = Vec::new();
    match &cfg.test_data {
        Some(test_path) => {
            let schema = cfg.test_schema.as_deref().or(cfg.schema.as_deref()).expect("schema checked on load");
            let test = load_dataset(test_path, schema)?;
            for &k in &ks {
                results.push(json!({"k": k, "performance": evaluate_ranking(&d, &test, k, &scores)?}));
            }
        }
        None => {
            let seed = cfg.seed()?;
            let x = cfg.folds.unwrap_or(10);
            let m = d.n_examples();
            if x < 2 || x > m {
                return Err(CliError::usage(format!("cannot split {m} examples into {x} folds")));
            }
            let perm = permutation(m, &mut seeded(seed));
            let folds: Vec<&[usize]> = (0..x).map(|j| &perm[j * m / x..(j + 1) * m / x]).collect();
            for &k in &ks {
                let mut total = 0.0;
                for (i, test) in folds.iter().enumerate() {
                    let train: Vec<usize> = (0..x).filter(|&j| j != i).flat_map(|j| folds[j].iter().copied()).collect();
                    let test_set = d.select(test).labeled_only();
                    if test_set.n_examples() == 0 {
                        continue;
                    }
                    let p = evaluate_ranking(&d.select(&train), &test_set, k, &scores)?;
                    total += p * test_set.n_examples() as f64;
                }
                results.push(json!({"k": k, "performance": total / d.n_labeled() as f64}));
            }
        }
    }
    let doc = json!({"measure": measure_name(d.task()), "results": results});
    let text = pretty(&doc);
    print!("{text}");
    if let Some(out) = &cfg.out {
        write(&out.join("evaluation.json"), &text)?;
    }
    Ok(Vec::new())
}
