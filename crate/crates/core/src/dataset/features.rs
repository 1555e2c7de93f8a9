use serde::{Deserialize, Serialize};

use super::{Dataset, Param, SlabSample};
use crate::error::{Error, Result};

/// One input column of a feature combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Rho,
    Fy,
    Fc,
    C,
    D,
    AvD,
    /// Flexural moment, kN·mm.
    MFs,
    /// M_fs / (fc·b·d²), dimensionless (moment taken in N·mm).
    MFsOverFcBD2,
    /// M_fs / (b·d²), MPa (moment taken in N·mm).
    MFsOverBD2,
    COverD,
    FcOverFy,
}

impl Feature {
    pub fn name(self) -> &'static str {
        match self {
            Feature::Rho => "rho",
            Feature::Fy => "fy",
            Feature::Fc => "fc",
            Feature::C => "c",
            Feature::D => "d",
            Feature::AvD => "av_d",
            Feature::MFs => "m_fs",
            Feature::MFsOverFcBD2 => "m_fs/(fc*b*d^2)",
            Feature::MFsOverBD2 => "m_fs/(b*d^2)",
            Feature::COverD => "c/d",
            Feature::FcOverFy => "fc/fy",
        }
    }

    /// Optional sample fields this feature reads.
    pub fn needs(self) -> &'static [Param] {
        match self {
            Feature::MFs => &[Param::MFs],
            Feature::MFsOverFcBD2 | Feature::MFsOverBD2 => &[Param::MFs, Param::B],
            _ => &[],
        }
    }

    fn eval(self, s: &SlabSample) -> Option<f64> {
        let moment_nmm = || s.m_fs.map(|m| m * 1e3);
        Some(match self {
            Feature::Rho => s.rho,
            Feature::Fy => s.fy,
            Feature::Fc => s.fc,
            Feature::C => s.c,
            Feature::D => s.d,
            Feature::AvD => s.av_d,
            Feature::MFs => s.m_fs?,
            Feature::MFsOverFcBD2 => moment_nmm()? / (s.fc * s.b? * s.d * s.d),
            Feature::MFsOverBD2 => moment_nmm()? / (s.b? * s.d * s.d),
            Feature::COverD => s.c / s.d,
            Feature::FcOverFy => s.fc / s.fy,
        })
    }
}

/// One of the seven parameter combinations used to train the learned
/// models, with its network and optimizer sizing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScsCombo {
    pub id: u8,
    pub features: Vec<Feature>,
    pub hidden_units: usize,
    pub pso_members: usize,
    pub bat_members: usize,
    pub iterations: usize,
}

impl ScsCombo {
    pub const ITERATIONS: usize = 300;

    pub fn get(id: u8) -> Result<Self> {
        use Feature::*;
        let (features, hidden_units, pso_members, bat_members) = match id {
            1 => (vec![Rho, Fy, Fc, C, D, AvD], 14, 50, 30),
            2 => (vec![MFs, Fc, C, D, AvD], 12, 50, 30),
            3 => (vec![MFsOverFcBD2, COverD, AvD], 8, 50, 30),
            4 => (vec![Rho, FcOverFy, COverD, AvD], 10, 30, 30),
            5 => (vec![MFsOverBD2, Fc, D, AvD], 10, 50, 25),
            6 => (vec![MFsOverFcBD2, D, COverD, AvD], 10, 50, 25),
            7 => (vec![MFsOverFcBD2, Fc, D, COverD, AvD], 12, 30, 25),
            other => return Err(Error::UnknownCombo(other)),
        };
        Ok(Self {
            id,
            features,
            hidden_units,
            pso_members,
            bat_members,
            iterations: Self::ITERATIONS,
        })
    }

    pub fn all() -> Vec<Self> {
        (1..=7)
            .map(|id| Self::get(id).expect("ids 1..=7 exist"))
            .collect()
    }

    /// Network shape: inputs, one hidden layer, one output.
    pub fn layer_sizes(&self) -> Vec<usize> {
        vec![self.features.len(), self.hidden_units, 1]
    }

    /// Optional fields this combo requires, in column order.
    pub fn required_fields(&self) -> Vec<Param> {
        let mut out: Vec<Param> = Vec::new();
        for p in self.features.iter().flat_map(|f| f.needs()) {
            if !out.contains(p) {
                out.push(*p);
            }
        }
        out.sort();
        out
    }
}

/// Min and max of one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnBounds {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

impl ColumnBounds {
    fn scale(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    fn unscale(&self, y: f64) -> f64 {
        self.min + y * (self.max - self.min)
    }
}

/// Min-max scaling bounds for every feature column plus the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub features: Vec<ColumnBounds>,
    pub target: ColumnBounds,
}

impl NormParams {
    /// Scales another matrix (e.g. a held-out split) with these bounds.
    /// Values outside the bounds map outside [0, 1].
    pub fn apply(&self, m: &FeatureMatrix) -> Result<FeatureMatrix> {
        if m.n_features != self.features.len() {
            return Err(Error::LengthMismatch {
                expected: self.features.len(),
                actual: m.n_features,
            });
        }
        let mut out = m.clone();
        for (k, v) in out.data.iter_mut().enumerate() {
            *v = self.features[k % m.n_features].scale(*v);
        }
        for t in &mut out.targets {
            *t = self.target.scale(*t);
        }
        out.norm = Some(self.clone());
        Ok(out)
    }

    /// Maps a normalized target back to kN.
    pub fn denormalize_target(&self, y: f64) -> f64 {
        self.target.unscale(y)
    }

    pub fn normalize_target(&self, v: f64) -> f64 {
        self.target.scale(v)
    }

    /// Columns in index order: features, then the target last.
    fn column(&self, col: usize) -> Result<&ColumnBounds> {
        let len = self.features.len() + 1;
        match col {
            c if c < self.features.len() => Ok(&self.features[c]),
            c if c == self.features.len() => Ok(&self.target),
            _ => Err(Error::ColumnOutOfRange { index: col, len }),
        }
    }
}

/// Row-major feature matrix with its aligned target vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub n_features: usize,
    /// `n_samples * n_features` values, row-major.
    pub data: Vec<f64>,
    pub targets: Vec<f64>,
    pub sample_ids: Vec<String>,
    pub combo: Option<u8>,
    pub norm: Option<NormParams>,
}

impl FeatureMatrix {
    pub fn n_samples(&self) -> usize {
        self.targets.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_features.max(1))
    }

    /// Borrowed view used by the network and optimizers.
    pub fn batch(&self) -> crate::fnn::Batch<'_> {
        crate::fnn::Batch::new(&self.data, self.n_features, &self.targets)
            .expect("feature matrix is rectangular by construction")
    }
}

/// Projects a dataset onto a combo's columns; the target is `v_exp` in kN.
pub fn build_features(ds: &Dataset, combo: &ScsCombo) -> Result<FeatureMatrix> {
    let n_features = combo.features.len();
    let mut data = Vec::with_capacity(ds.len() * n_features);
    for s in ds {
        for &f in &combo.features {
            let value = f.eval(s).ok_or_else(|| {
                let missing = f
                    .needs()
                    .iter()
                    .find(|p| s.get(**p).is_none())
                    .copied()
                    .unwrap_or(Param::MFs);
                Error::MissingField {
                    combo: combo.id,
                    field: missing.column(),
                    sample: s.id.clone(),
                }
            })?;
            data.push(value);
        }
    }
    Ok(FeatureMatrix {
        feature_names: combo
            .features
            .iter()
            .map(|f| f.name().to_string())
            .collect(),
        n_features,
        data,
        targets: ds.iter().map(|s| s.v_exp).collect(),
        sample_ids: ds.iter().map(|s| s.id.clone()).collect(),
        combo: Some(combo.id),
        norm: None,
    })
}

fn bounds_of(name: &str, values: impl Iterator<Item = f64>) -> Result<ColumnBounds> {
    let (min, max) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if max <= min {
        return Err(Error::ConstantColumn {
            column: name.to_string(),
            value: min,
        });
    }
    Ok(ColumnBounds {
        name: name.to_string(),
        min,
        max,
    })
}

/// Fits per-column min-max bounds on `m` and scales every feature and the
/// target to [0, 1].
pub fn normalize(m: &FeatureMatrix) -> Result<(FeatureMatrix, NormParams)> {
    if m.n_samples() == 0 {
        return Err(Error::EmptyDataset);
    }
    let features = (0..m.n_features)
        .map(|j| bounds_of(&m.feature_names[j], m.rows().map(|r| r[j])))
        .collect::<Result<Vec<_>>>()?;
    let target = bounds_of("v_exp", m.targets.iter().copied())?;
    let params = NormParams { features, target };
    let scaled = params.apply(m)?;
    Ok((scaled, params))
}

/// Inverse scaling for column `col` (features first, target last).
pub fn denormalize(y: f64, params: &NormParams, col: usize) -> Result<f64> {
    Ok(params.column(col)?.unscale(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures;
    use approx::assert_relative_eq;

    fn params_d() -> NormParams {
        NormParams {
            features: vec![ColumnBounds {
                name: "d".into(),
                min: 64.0,
                max: 275.0,
            }],
            target: ColumnBounds {
                name: "v_exp".into(),
                min: 105.0,
                max: 2450.0,
            },
        }
    }

    #[test]
    fn combo_one_row_for_s1() {
        let ds = Dataset::new(vec![fixtures::s1()]).unwrap();
        let m = build_features(&ds, &ScsCombo::get(1).unwrap()).unwrap();
        let expected = [0.00085, 655.0, 24.25, 255.0, 205.0, 6.2];
        for (a, e) in m.row(0).iter().zip(expected) {
            assert_relative_eq!(*a, e, max_relative = 1e-12);
        }
        assert_eq!(m.targets, vec![600.0]);
    }

    #[test]
    fn combo_four_ratio_columns() {
        let ds = Dataset::new(vec![fixtures::s1()]).unwrap();
        let m = build_features(&ds, &ScsCombo::get(4).unwrap()).unwrap();
        assert_relative_eq!(m.row(0)[1], 0.037023, epsilon = 1e-6);
        assert_relative_eq!(m.row(0)[2], 255.0 / 205.0, epsilon = 1e-15);
    }

    #[test]
    fn combo_three_moment_ratio() {
        let s = fixtures::full("a", 100.0, 200.0, 40.0, 0.01, 300.0);
        let ds = Dataset::new(vec![s]).unwrap();
        let m = build_features(&ds, &ScsCombo::get(3).unwrap()).unwrap();
        // 2e5 kN·mm = 2e8 N·mm over 40·1500·100² = 6e8
        assert_relative_eq!(m.row(0)[0], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn missing_moment_is_named() {
        let ds = Dataset::new(vec![fixtures::s1()]).unwrap();
        let err = build_features(&ds, &ScsCombo::get(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::MissingField { combo: 2, .. }));
        assert!(err.to_string().contains("m_fs"));
    }

    #[test]
    fn missing_width_is_named() {
        let mut s = fixtures::full("a", 100.0, 200.0, 40.0, 0.01, 300.0);
        s.b = None;
        let ds = Dataset::new(vec![s]).unwrap();
        let err = build_features(&ds, &ScsCombo::get(3).unwrap()).unwrap_err();
        assert!(err.to_string().contains("b_mm"), "{err}");
    }

    #[test]
    fn combos_match_reference_sizing() {
        let combos = ScsCombo::all();
        let hidden: Vec<_> = combos.iter().map(|c| c.hidden_units).collect();
        assert_eq!(hidden, [14, 12, 8, 10, 10, 10, 12]);
        let pso: Vec<_> = combos.iter().map(|c| c.pso_members).collect();
        assert_eq!(pso, [50, 50, 50, 30, 50, 50, 30]);
        let bat: Vec<_> = combos.iter().map(|c| c.bat_members).collect();
        assert_eq!(bat, [30, 30, 30, 30, 25, 25, 25]);
        assert!(combos.iter().all(|c| c.iterations == 300));
        let needs_moment: Vec<u8> = combos
            .iter()
            .filter(|c| c.required_fields().contains(&Param::MFs))
            .map(|c| c.id)
            .collect();
        assert_eq!(needs_moment, [2, 3, 5, 6, 7]);
        let needs_width: Vec<u8> = combos
            .iter()
            .filter(|c| c.required_fields().contains(&Param::B))
            .map(|c| c.id)
            .collect();
        assert_eq!(needs_width, [3, 5, 6, 7]);
        assert!(matches!(ScsCombo::get(8), Err(Error::UnknownCombo(8))));
    }

    #[test]
    fn normalize_bounds_map_to_unit_interval() {
        let mut samples = vec![
            fixtures::full("a", 100.0, 200.0, 30.0, 0.01, 300.0),
            fixtures::full("b", 150.0, 300.0, 40.0, 0.02, 500.0),
            fixtures::full("c", 200.0, 250.0, 50.0, 0.015, 400.0),
        ];
        for (s, av_d) in samples.iter_mut().zip([4.0, 9.0, 6.0]) {
            s.av_d = av_d;
        }
        let ds = Dataset::new(samples).unwrap();
        let m = build_features(&ds, &ScsCombo::get(4).unwrap()).unwrap();
        let (scaled, params) = normalize(&m).unwrap();
        assert_eq!(params.features.len(), 4);
        assert!(scaled.data.iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(scaled.targets, vec![0.0, 1.0, 0.5]);
        assert_eq!(scaled.row(0)[0], 0.0);
        assert_eq!(scaled.row(1)[0], 1.0);
    }

    #[test]
    fn constant_column_rejected() {
        let ds = Dataset::new(crate::dataset::fixtures::selected_slabs()).unwrap();
        // av_d and fc are shared by S1 and S3 but C1 differs; a two-sample
        // subset makes them constant.
        let sub = Dataset::new(ds.samples[..2].to_vec()).unwrap();
        let m = build_features(&sub, &ScsCombo::get(1).unwrap()).unwrap();
        assert!(matches!(normalize(&m), Err(Error::ConstantColumn { .. })));
    }

    #[test]
    fn depth_average_scales_by_hand_value() {
        let p = params_d();
        let y = p.features[0].scale(122.32);
        assert_relative_eq!(y, (122.32 - 64.0) / 211.0, epsilon = 1e-15);
        assert_relative_eq!(y, 0.276398, epsilon = 1e-6);
    }

    #[test]
    fn denormalize_endpoints_and_inverse() {
        let p = params_d();
        assert_eq!(denormalize(0.0, &p, 0).unwrap(), 64.0);
        assert_eq!(denormalize(1.0, &p, 0).unwrap(), 275.0);
        assert_eq!(denormalize(1.0, &p, 1).unwrap(), 2450.0);
        let y = (122.32 - 64.0) / 211.0;
        assert!((denormalize(y, &p, 0).unwrap() - 122.32).abs() < 1e-9);
        assert!(matches!(
            denormalize(0.5, &p, 2),
            Err(Error::ColumnOutOfRange { index: 2, len: 2 })
        ));
    }
}
