use rand::seq::SliceRandom;

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.7;

/// Seeded shuffle then partition. The train part gets
/// `floor(n * train_fraction)` samples, kept within `1..n`.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument {
            name: "train_fraction",
            message: format!("must lie in (0, 1), got {train_fraction}"),
        });
    }
    let n = ds.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let n_train = ((n as f64 * train_fraction).floor() as usize).clamp(1, n - 1);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(seed));
    let pick = |idx: &[usize]| Dataset {
        samples: idx.iter().map(|&i| ds.samples[i].clone()).collect(),
    };
    Ok((pick(&order[..n_train]), pick(&order[n_train..])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures;

    fn numbered(n: usize) -> Dataset {
        let samples = (0..n)
            .map(|i| fixtures::full(&format!("s{i}"), 100.0 + i as f64, 200.0, 30.0, 0.01, 300.0))
            .collect();
        Dataset::new(samples).unwrap()
    }

    #[test]
    fn sizes_follow_floor_rule() {
        let (a, b) = split(&numbered(10), 0.7, 42).unwrap();
        assert_eq!((a.len(), b.len()), (7, 3));
        let (a, b) = split(&numbered(145), 0.5, 42).unwrap();
        assert_eq!((a.len(), b.len()), (72, 73));
    }

    #[test]
    fn same_seed_same_partition() {
        let ds = numbered(20);
        assert_eq!(split(&ds, 0.7, 3).unwrap(), split(&ds, 0.7, 3).unwrap());
    }

    #[test]
    fn parts_cover_dataset() {
        let ds = numbered(31);
        let (a, b) = split(&ds, 0.6, 9).unwrap();
        let mut ids: Vec<String> = a.iter().chain(&b).map(|s| s.id.clone()).collect();
        ids.sort();
        let mut all: Vec<String> = ds.iter().map(|s| s.id.clone()).collect();
        all.sort();
        assert_eq!(ids, all);
    }

    #[test]
    fn rejects_tiny_or_bad_fraction() {
        assert!(matches!(
            split(&numbered(1), 0.5, 0),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(split(&numbered(5), 1.0, 0).is_err());
        assert!(split(&numbered(5), 0.0, 0).is_err());
    }

    #[test]
    fn both_parts_non_empty() {
        let (a, b) = split(&numbered(2), 0.1, 0).unwrap();
        assert_eq!((a.len(), b.len()), (1, 1));
    }
}
