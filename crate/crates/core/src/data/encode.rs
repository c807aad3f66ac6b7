use std::ops::Range;

use super::{Dataset, FeatureKind};

/// Dense row-major numeric matrix from one-hot encoding, with the block of
/// encoded columns that each original feature maps to.
#[derive(Clone, Debug, PartialEq)]
pub struct Encoded {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<f64>,
    pub blocks: Vec<Range<usize>>,
}

impl Encoded {
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.n_rows).map(|r| self.get(r, c)).collect()
    }
}

/// Numeric features are copied; a nominal feature with `c` categories
/// expands into `c` indicator columns.
pub fn one_hot_encode(d: &Dataset) -> Encoded {
    let mut blocks = Vec::with_capacity(d.n_features());
    let mut width = 0;
    for f in d.features() {
        let w = match &f.kind {
            FeatureKind::Numeric => 1,
            FeatureKind::Nominal(c) => c.len(),
        };
        blocks.push(width..width + w);
        width += w;
    }
    let m = d.n_examples();
    let mut data = vec![0.0; m * width];
    for (f, block) in d.features().iter().zip(&blocks) {
        for (e, &v) in f.values().iter().enumerate() {
            let row = e * width;
            match f.kind {
                FeatureKind::Numeric => data[row + block.start] = v,
                FeatureKind::Nominal(_) => data[row + block.start + v as usize] = 1.0,
            }
        }
    }
    Encoded {
        n_rows: m,
        n_cols: width,
        data,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FeatureColumn, TargetBlock, Task};

    fn regression(features: Vec<FeatureColumn>) -> Dataset {
        let m = features[0].values().len();
        let rows: Vec<_> = (0..m).map(|i| Some(vec![i as f64])).collect();
        let t = TargetBlock::new(Task::Str, vec!["y".into()], vec![], None, &rows).unwrap();
        Dataset::new(features, t).unwrap()
    }

    #[test]
    fn numeric_identity() {
        let d = regression(vec![
            FeatureColumn::numeric("a", vec![1.0, 2.0]),
            FeatureColumn::numeric("b", vec![3.0, 4.0]),
        ]);
        let e = one_hot_encode(&d);
        assert_eq!(e.data, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(e.blocks, vec![0..1, 1..2]);
    }

    #[test]
    fn nominal_identity_block() {
        let cats = vec!["A".to_string(), "B".into(), "C".into()];
        let d = regression(vec![FeatureColumn::nominal("c", cats, &[0, 1, 2]).unwrap()]);
        let e = one_hot_encode(&d);
        assert_eq!(e.data, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn mixed_width() {
        let d = regression(vec![
            FeatureColumn::numeric("a", vec![1.0, 2.0]),
            FeatureColumn::numeric("b", vec![3.0, 4.0]),
            FeatureColumn::nominal("c", vec!["u".into(), "v".into()], &[1, 0]).unwrap(),
        ]);
        let e = one_hot_encode(&d);
        assert_eq!(e.n_cols, 4);
        assert_eq!(e.blocks[2], 2..4);
        for r in 0..2 {
            assert_eq!(e.row(r)[2..4].iter().sum::<f64>(), 1.0);
        }
    }
}
