//! Shared inputs for the benchmarks in `benches/`.

use slabshear::dataset::{build_features, normalize, synthesize, FeatureMatrix, RangeSpec};
use slabshear::{Dataset, ScsCombo};

/// Synthetic database of `n` samples drawn from the reference ranges.
pub fn dataset(n: usize) -> Dataset {
    synthesize(n, &RangeSpec::reference_database(), 1, 0.02).expect("reference ranges are valid")
}

/// Normalized combo-1 feature matrix over [`dataset`].
pub fn combo1_matrix(n: usize) -> FeatureMatrix {
    let combo = ScsCombo::get(1).expect("combo 1 exists");
    let m = build_features(&dataset(n), &combo).expect("combo 1 needs no optional fields");
    normalize(&m).expect("synthetic columns vary").0
}
