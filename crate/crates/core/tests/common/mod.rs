#![allow(dead_code)]

pub mod reference;

use rand::Rng as _;
use sslrank::data::{FeatureColumn, Hierarchy, TargetBlock, Task};
use sslrank::rng::seeded;
use sslrank::Dataset;

/// Random mixed-type dataset of the given task; the last feature is
/// nominal with three categories when `d >= 3`. Roughly `labeled_frac` of
/// the examples keep their targets.
pub fn random_dataset(task: Task, m: usize, d: usize, labeled_frac: f64, seed: u64) -> Dataset {
    build(task, m, d, labeled_frac, seed, true)
}

/// As [`random_dataset`] but with continuous numeric values, so that
/// distances and split heuristics are free of exact ties.
pub fn continuous_dataset(task: Task, m: usize, d: usize, labeled_frac: f64, seed: u64) -> Dataset {
    build(task, m, d, labeled_frac, seed, false)
}

fn build(task: Task, m: usize, d: usize, labeled_frac: f64, seed: u64, grid: bool) -> Dataset {
    let mut rng = seeded(seed);
    let mut features = Vec::new();
    for i in 0..d {
        if d >= 3 && i == d - 1 {
            let codes: Vec<usize> = (0..m).map(|_| rng.random_range(0..3)).collect();
            features.push(
                FeatureColumn::nominal(format!("n{i}"), vec!["a".into(), "b".into(), "c".into()], &codes).unwrap(),
            );
        } else {
            let v: Vec<f64> = (0..m)
                .map(|_| {
                    let raw = rng.random::<f64>() * 5.0;
                    if grid {
                        (raw * 4.0).round() / 4.0
                    } else {
                        raw
                    }
                })
                .collect();
            features.push(FeatureColumn::numeric(format!("x{i}"), v));
        }
    }
    let x0: Vec<f64> = features[0].values().to_vec();
    let mut rows = Vec::with_capacity(m);
    for e in 0..m {
        let signal = x0[e] / 5.0;
        let row = match task {
            Task::Classification => vec![f64::from(u8::from(signal + 0.3 * rng.random::<f64>() > 0.6))],
            Task::Str => vec![signal + 0.2 * rng.random::<f64>()],
            Task::Mtr => vec![signal + 0.2 * rng.random::<f64>(), rng.random::<f64>()],
            Task::Mlc => vec![
                f64::from(u8::from(signal > 0.5)),
                f64::from(u8::from(rng.random::<f64>() > 0.5)),
                f64::from(u8::from(rng.random::<f64>() > 0.7)),
            ],
            Task::Hmlc => {
                let root = signal > 0.4;
                let child = root && rng.random::<f64>() > 0.5;
                let other = rng.random::<f64>() > 0.5;
                vec![root, child, other].into_iter().map(|b| f64::from(u8::from(b))).collect()
            }
        };
        rows.push(row);
    }
    let mut labeled: Vec<Option<Vec<f64>>> = rows
        .into_iter()
        .map(|r| if rng.random::<f64>() < labeled_frac { Some(r) } else { None })
        .collect();
    if labeled.iter().all(Option::is_none) {
        labeled[0] = Some(match task {
            Task::Mtr => vec![0.0, 0.0],
            Task::Mlc | Task::Hmlc => vec![0.0; 3],
            _ => vec![0.0],
        });
    }
    Dataset::new(features, targets(task, &labeled)).unwrap()
}

pub fn targets(task: Task, rows: &[Option<Vec<f64>>]) -> TargetBlock {
    let t = rows.iter().flatten().next().map_or(1, Vec::len);
    let names: Vec<String> = (0..t).map(|j| format!("y{j}")).collect();
    let classes = if task == Task::Classification {
        vec!["neg".into(), "pos".into()]
    } else {
        vec![]
    };
    let hierarchy = (task == Task::Hmlc).then(|| {
        Hierarchy::new(names.clone(), &[("y0".to_string(), "y1".to_string())], 0.75).unwrap()
    });
    TargetBlock::new(task, names, classes, hierarchy, rows).unwrap()
}

pub const ALL_TASKS: [Task; 5] = [Task::Classification, Task::Str, Task::Mtr, Task::Mlc, Task::Hmlc];
