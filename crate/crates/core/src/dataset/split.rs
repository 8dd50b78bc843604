use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TileRecord;
use crate::error::{Error, Result};

/// Tiles grouped into train/validation/test.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetSplit {
    pub train: Vec<TileRecord>,
    pub val: Vec<TileRecord>,
    pub test: Vec<TileRecord>,
}

/// Serialized form listing tile names per split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub ratios: [f64; 3],
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

impl DatasetSplit {
    pub fn manifest(&self, seed: u64, ratios: [f64; 3]) -> SplitManifest {
        let names = |v: &[TileRecord]| v.iter().map(TileRecord::name).collect();
        SplitManifest {
            seed,
            ratios,
            train: names(&self.train),
            val: names(&self.val),
            test: names(&self.test),
        }
    }
}

/// Shuffles parent ids with a seeded ChaCha8 stream and cuts them by the
/// normalized ratios (train and val counts rounded, test takes the rest).
pub fn split_parents(parents: &[u64], ratios: [f64; 3], seed: u64) -> Result<[Vec<u64>; 3]> {
    let total: f64 = ratios.iter().sum();
    if ratios.iter().any(|r| !r.is_finite() || *r < 0.0) || total <= 0.0 {
        return Err(Error::InvalidArgument(format!("bad split ratios {ratios:?}")));
    }
    let mut ids: Vec<u64> = parents.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = ids.len();
    let n_train = ((n as f64 * ratios[0] / total).round() as usize).min(n);
    let n_val = ((n as f64 * ratios[1] / total).round() as usize).min(n - n_train);
    let test = ids.split_off(n_train + n_val);
    let val = ids.split_off(n_train);
    Ok([ids, val, test])
}

/// Splits tiles so every tile of a parent frame lands in the same split.
/// Tile order within each split follows the input order.
pub fn split_dataset(tiles: &[TileRecord], ratios: [f64; 3], seed: u64) -> Result<DatasetSplit> {
    let parents: Vec<u64> = tiles.iter().map(|t| t.parent_id).collect();
    let [train, val, _] = split_parents(&parents, ratios, seed)?;
    let (train, val): (BTreeSet<u64>, BTreeSet<u64>) =
        (train.into_iter().collect(), val.into_iter().collect());
    let mut out = DatasetSplit::default();
    for t in tiles {
        let bucket = if train.contains(&t.parent_id) {
            &mut out.train
        } else if val.contains(&t.parent_id) {
            &mut out.val
        } else {
            &mut out.test
        };
        bucket.push(t.clone());
    }
    Ok(out)
}
