//! Closed-form punching shear capacities.
//!
//! All three methods take a [`SlabSample`] in mm / MPa and report kN. The
//! formulas run in newtons; `v_pred = v_newtons / 1000` exactly.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::SlabSample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CodeMethod {
    Aci,
    Ec2,
    Cfp,
}

impl CodeMethod {
    pub const ALL: [CodeMethod; 3] = [CodeMethod::Aci, CodeMethod::Ec2, CodeMethod::Cfp];

    pub fn name(self) -> &'static str {
        match self {
            CodeMethod::Aci => "ACI",
            CodeMethod::Ec2 => "EC2",
            CodeMethod::Cfp => "CFP",
        }
    }

    /// Case-insensitive lookup by name.
    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
    }

    pub fn predict(self, s: &SlabSample, opts: &CodeOptions) -> Result<CodePrediction> {
        match self {
            CodeMethod::Aci => aci_capacity(s),
            CodeMethod::Ec2 => ec2_capacity_with(s, opts.ec2_cap_size_term),
            CodeMethod::Cfp => cfp_capacity_with(s, opts.cfp_closure.as_ref()),
        }
    }
}

impl fmt::Display for CodeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value that was pulled back into its admissible range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClampWarning {
    /// ACI size factor above 1, capped to 1.
    SizeFactorCapped { raw: f64 },
    /// EC2 size term above 2, capped (only with the cap enabled).
    Ec2SizeTermCapped { raw: f64 },
    /// CFP lambda below 0, raised to 0.
    CfpLambdaClamped { raw: f64 },
}

impl fmt::Display for ClampWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClampWarning::SizeFactorCapped { raw } => write!(f, "lambda_s {raw:.5} capped to 1"),
            ClampWarning::Ec2SizeTermCapped { raw } => {
                write!(f, "EC2 size term {raw:.5} capped to 2")
            }
            ClampWarning::CfpLambdaClamped { raw } => {
                write!(f, "lambda_c {raw:.5} clamped to 0")
            }
        }
    }
}

/// Intermediate quantities; only the fields of the producing method are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Intermediates {
    /// Control perimeter, mm.
    pub perimeter_mm: f64,
    pub lambda_s: Option<f64>,
    pub ec2_size_term: Option<f64>,
    pub rho_s: Option<f64>,
    pub lambda_c: Option<f64>,
    pub w_ii2_mm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodePrediction {
    pub method: CodeMethod,
    /// Capacity, kN.
    pub v_pred: f64,
    /// Capacity, N.
    pub v_newtons: f64,
    pub intermediates: Intermediates,
    pub warnings: Vec<ClampWarning>,
}

/// Per-run switches for the closed-form methods.
pub struct CodeOptions {
    pub ec2_cap_size_term: bool,
    pub cfp_closure: Box<dyn CfpClosure>,
}

impl Default for CodeOptions {
    fn default() -> Self {
        Self {
            ec2_cap_size_term: false,
            cfp_closure: Box::new(AciStressOverCfpWidth),
        }
    }
}

impl fmt::Debug for CodeOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeOptions")
            .field("ec2_cap_size_term", &self.ec2_cap_size_term)
            .field("cfp_closure", &self.cfp_closure.name())
            .finish()
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument {
            name,
            message: format!("must be positive and finite, got {v}"),
        })
    }
}

/// ACI 318-19 size effect factor, `min(1, sqrt(2 / (1 + 0.004 d)))` with
/// `d` in mm. The second value is set when the cap was applied.
pub fn aci_size_factor(d: f64) -> Result<(f64, Option<ClampWarning>)> {
    positive("d", d)?;
    let raw = (2.0 / (1.0 + 0.004 * d)).sqrt();
    if raw > 1.0 {
        Ok((1.0, Some(ClampWarning::SizeFactorCapped { raw })))
    } else {
        Ok((raw, None))
    }
}

/// `V = (1/3) λ_s u d sqrt(fc)` over `u = 4 (c + d)`.
pub fn aci_capacity(s: &SlabSample) -> Result<CodePrediction> {
    s.validate(0)?;
    let (lambda_s, warn) = aci_size_factor(s.d)?;
    let u = 4.0 * (s.c + s.d);
    let v_newtons = lambda_s * u * s.d * s.fc.sqrt() / 3.0;
    Ok(CodePrediction {
        method: CodeMethod::Aci,
        v_pred: v_newtons / 1000.0,
        v_newtons,
        intermediates: Intermediates {
            perimeter_mm: u,
            lambda_s: Some(lambda_s),
            ..Default::default()
        },
        warnings: warn.into_iter().collect(),
    })
}

/// EC2 basic control perimeter at 2d from a square column: `4c + 4πd`.
pub fn ec2_perimeter(c: f64, d: f64) -> f64 {
    4.0 * c + 4.0 * PI * d
}

/// Eurocode 2 capacity with an uncapped size term and isotropic
/// reinforcement (`ρ_s = sqrt(ρ_x ρ_y) = ρ`).
pub fn ec2_capacity(s: &SlabSample) -> Result<CodePrediction> {
    ec2_capacity_with(s, false)
}

/// As [`ec2_capacity`], optionally capping `1 + sqrt(200/d)` at 2.
pub fn ec2_capacity_with(s: &SlabSample, cap_size_term: bool) -> Result<CodePrediction> {
    s.validate(0)?;
    let u1 = ec2_perimeter(s.c, s.d);
    let rho_s = (s.rho * s.rho).sqrt();
    let raw = 1.0 + (200.0 / s.d).sqrt();
    let mut warnings = Vec::new();
    let size_term = if cap_size_term && raw > 2.0 {
        warnings.push(ClampWarning::Ec2SizeTermCapped { raw });
        2.0
    } else {
        raw
    };
    let v_newtons = 0.18 * u1 * s.d * size_term * (100.0 * s.fc * rho_s).cbrt();
    Ok(CodePrediction {
        method: CodeMethod::Ec2,
        v_pred: v_newtons / 1000.0,
        v_newtons,
        intermediates: Intermediates {
            perimeter_mm: u1,
            ec2_size_term: Some(size_term),
            rho_s: Some(rho_s),
            ..Default::default()
        },
        warnings,
    })
}

/// CFP depth factor
/// `λ_c = max(0, 2 − [100 ρ fy / 500] [1 + 0.01 (fc − 60)])`, `ρ` a fraction.
pub fn cfp_lambda(rho: f64, fy: f64, fc: f64) -> Result<(f64, Option<ClampWarning>)> {
    positive("rho", rho)?;
    positive("fy", fy)?;
    positive("fc", fc)?;
    let raw = 2.0 - (100.0 * rho * fy / 500.0) * (1.0 + 0.01 * (fc - 60.0));
    if raw < 0.0 {
        Ok((0.0, Some(ClampWarning::CfpLambdaClamped { raw })))
    } else {
        Ok((raw, None))
    }
}

/// Effective width `w_II,2 = c + 2 λ_c d`, mm.
pub fn cfp_width(c: f64, lambda_c: f64, d: f64) -> Result<f64> {
    positive("c", c)?;
    positive("d", d)?;
    if !(lambda_c.is_finite() && lambda_c >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "lambda_c",
            message: format!("must be non-negative, got {lambda_c}"),
        });
    }
    Ok(c + 2.0 * lambda_c * d)
}

/// Turns the CFP effective width into a capacity in newtons.
pub trait CfpClosure: Send + Sync {
    fn name(&self) -> &'static str;
    /// Returns `(perimeter_mm, capacity_n)`.
    fn capacity(&self, s: &SlabSample, w_ii2: f64) -> (f64, f64);
}

/// ACI limiting stress `sqrt(fc) / 3` over a square perimeter of side
/// `w_II,2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AciStressOverCfpWidth;

impl CfpClosure for AciStressOverCfpWidth {
    fn name(&self) -> &'static str {
        "aci-stress-over-cfp-width"
    }

    fn capacity(&self, s: &SlabSample, w_ii2: f64) -> (f64, f64) {
        let perimeter = 4.0 * w_ii2;
        (perimeter, s.fc.sqrt() * perimeter * s.d / 3.0)
    }
}

pub fn cfp_capacity(s: &SlabSample) -> Result<CodePrediction> {
    cfp_capacity_with(s, &AciStressOverCfpWidth)
}

pub fn cfp_capacity_with(s: &SlabSample, closure: &dyn CfpClosure) -> Result<CodePrediction> {
    s.validate(0)?;
    let (lambda_c, warn) = cfp_lambda(s.rho, s.fy, s.fc)?;
    let w = cfp_width(s.c, lambda_c, s.d)?;
    let (perimeter, v_newtons) = closure.capacity(s, w);
    Ok(CodePrediction {
        method: CodeMethod::Cfp,
        v_pred: v_newtons / 1000.0,
        v_newtons,
        intermediates: Intermediates {
            perimeter_mm: perimeter,
            lambda_c: Some(lambda_c),
            w_ii2_mm: Some(w),
            ..Default::default()
        },
        warnings: warn.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::fixtures;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn size_factor_values() {
        assert_eq!(aci_size_factor(250.0).unwrap(), (1.0, None));
        let (l, w) = aci_size_factor(275.0).unwrap();
        assert_relative_eq!(l, 0.97590, epsilon = 1e-5);
        assert!(w.is_none());
        let (l, w) = aci_size_factor(100.0).unwrap();
        assert_eq!(l, 1.0);
        match w {
            Some(ClampWarning::SizeFactorCapped { raw }) => {
                assert_relative_eq!(raw, 1.19523, epsilon = 1e-5)
            }
            other => panic!("expected cap warning, got {other:?}"),
        }
        assert!(aci_size_factor(0.0).is_err());
        assert!(aci_size_factor(-3.0).is_err());
    }

    #[test]
    fn aci_on_s1() {
        let p = aci_capacity(&fixtures::s1()).unwrap();
        assert_eq!(p.intermediates.perimeter_mm, 1840.0);
        assert_eq!(p.intermediates.lambda_s, Some(1.0));
        assert_eq!(p.warnings.len(), 1);
        assert_relative_eq!(p.v_pred, 619.1649, max_relative = 1e-6);
    }

    #[test]
    fn aci_sqrt_fc_scaling_and_rejections() {
        let s = fixtures::s1();
        let mut s4 = s.clone();
        s4.fc *= 4.0;
        let ratio = aci_capacity(&s4).unwrap().v_pred / aci_capacity(&s).unwrap().v_pred;
        assert_relative_eq!(ratio, 2.0, max_relative = 1e-14);
        let mut bad = s;
        bad.c = 0.0;
        assert!(aci_capacity(&bad).is_err());
    }

    #[test]
    fn ec2_on_s1() {
        let p = ec2_capacity(&fixtures::s1()).unwrap();
        assert_relative_eq!(p.intermediates.perimeter_mm, 3596.106, epsilon = 1e-3);
        assert_relative_eq!(
            p.intermediates.ec2_size_term.unwrap(),
            1.98773,
            epsilon = 1e-5
        );
        assert_relative_eq!(p.v_pred, 335.6807, max_relative = 1e-6);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn ec2_rho_cube_root_and_depth_200() {
        let s = fixtures::s1();
        let mut s8 = s.clone();
        s8.rho *= 8.0;
        let ratio = ec2_capacity(&s8).unwrap().v_pred / ec2_capacity(&s).unwrap().v_pred;
        assert_relative_eq!(ratio, 2.0, max_relative = 1e-14);
        let mut s200 = s;
        s200.d = 200.0;
        let p = ec2_capacity(&s200).unwrap();
        assert_eq!(p.intermediates.ec2_size_term, Some(2.0));
    }

    #[test]
    fn ec2_cap_is_opt_in() {
        let mut s = fixtures::s1();
        s.d = 100.0;
        let raw = ec2_capacity(&s).unwrap();
        assert!(raw.intermediates.ec2_size_term.unwrap() > 2.0);
        let capped = ec2_capacity_with(&s, true).unwrap();
        assert_eq!(capped.intermediates.ec2_size_term, Some(2.0));
        assert_eq!(capped.warnings.len(), 1);
        assert!(capped.v_pred < raw.v_pred);
    }

    #[test]
    fn cfp_lambda_values() {
        assert_eq!(cfp_lambda(0.01, 500.0, 60.0).unwrap(), (1.0, None));
        let (l, _) = cfp_lambda(0.00085, 655.0, 24.25).unwrap();
        assert_relative_eq!(l, 1.928457625, epsilon = 1e-12);
        let (l, w) = cfp_lambda(0.069, 500.0, 40.0).unwrap();
        assert_eq!(l, 0.0);
        match w {
            Some(ClampWarning::CfpLambdaClamped { raw }) => {
                assert_relative_eq!(raw, -3.52, epsilon = 1e-12)
            }
            other => panic!("expected clamp warning, got {other:?}"),
        }
        assert!(cfp_lambda(0.0, 500.0, 40.0).is_err());
    }

    #[test]
    fn cfp_width_values() {
        assert_eq!(cfp_width(300.0, 0.0, 100.0).unwrap(), 300.0);
        assert_eq!(cfp_width(300.0, 1.0, 100.0).unwrap(), 500.0);
        assert_relative_eq!(
            cfp_width(255.0, 1.928457625, 205.0).unwrap(),
            1045.66762625,
            epsilon = 1e-9
        );
        assert!(cfp_width(300.0, -0.1, 100.0).is_err());
    }

    #[test]
    fn cfp_on_s1() {
        let p = cfp_capacity(&fixtures::s1()).unwrap();
        assert_relative_eq!(p.intermediates.perimeter_mm, 4182.6705, epsilon = 1e-3);
        assert_relative_eq!(p.v_pred, 1407.4797, max_relative = 1e-6);
    }

    #[test]
    fn cfp_degenerate_width_matches_aci_form() {
        let mut s = fixtures::s1();
        s.rho = 0.069;
        s.fy = 500.0;
        s.fc = 40.0;
        let p = cfp_capacity(&s).unwrap();
        assert_eq!(p.intermediates.lambda_c, Some(0.0));
        assert_eq!(p.intermediates.w_ii2_mm, Some(s.c));
        let expected = s.fc.sqrt() * 4.0 * s.c * s.d / 3.0 / 1000.0;
        assert_relative_eq!(p.v_pred, expected, max_relative = 1e-14);
    }

    #[test]
    fn cfp_sqrt_fc_at_fixed_width() {
        let s = fixtures::s1();
        let w = 1000.0;
        let mut s4 = s.clone();
        s4.fc *= 4.0;
        let (_, v1) = AciStressOverCfpWidth.capacity(&s, w);
        let (_, v4) = AciStressOverCfpWidth.capacity(&s4, w);
        assert_relative_eq!(v4 / v1, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn method_names_round_trip() {
        for m in CodeMethod::ALL {
            assert_eq!(CodeMethod::parse(&m.name().to_lowercase()), Some(m));
        }
        assert_eq!(CodeMethod::parse("bs8110"), None);
    }

    fn sample_strategy() -> impl Strategy<Value = SlabSample> {
        (
            10.0..600.0f64,
            10.0..800.0f64,
            1.0..20.0f64,
            100.0..900.0f64,
            1e-4..0.1f64,
            5.0..150.0f64,
        )
            .prop_map(|(d, c, av_d, fy, rho, fc)| SlabSample {
                id: "p".into(),
                source: "prop".into(),
                d,
                c,
                av_d,
                fy,
                rho,
                fc,
                v_exp: 100.0,
                m_fs: None,
                b: None,
            })
    }

    proptest! {
        #[test]
        fn size_factor_monotone(a in 1.0..2000.0f64, b in 1.0..2000.0f64) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(aci_size_factor(lo).unwrap().0 >= aci_size_factor(hi).unwrap().0);
            if hi <= 250.0 {
                prop_assert_eq!(aci_size_factor(hi).unwrap().0, 1.0);
            }
        }

        #[test]
        fn capacities_positive_and_unit_consistent(s in sample_strategy()) {
            for m in CodeMethod::ALL {
                let p = m.predict(&s, &CodeOptions::default()).unwrap();
                prop_assert!(p.v_pred.is_finite() && p.v_pred > 0.0);
                prop_assert_eq!(p.v_pred, p.v_newtons / 1000.0);
            }
        }

        #[test]
        fn aci_recomputes_from_intermediates(s in sample_strategy()) {
            let p = aci_capacity(&s).unwrap();
            let i = &p.intermediates;
            let n = i.lambda_s.unwrap() * i.perimeter_mm * s.d * s.fc.sqrt() / 3.0;
            prop_assert_eq!(n / 1000.0, p.v_pred);
        }

        #[test]
        fn aci_increasing_in_c_and_fc(s in sample_strategy(), k in 1.01..3.0f64) {
            let base = aci_capacity(&s).unwrap().v_pred;
            let mut sc = s.clone();
            sc.c *= k;
            prop_assert!(aci_capacity(&sc).unwrap().v_pred > base);
            let mut sf = s.clone();
            sf.fc *= k;
            prop_assert!(aci_capacity(&sf).unwrap().v_pred > base);
        }

        #[test]
        fn aci_increasing_in_d_piecewise(s in sample_strategy(), k in 1.01..3.0f64) {
            // Holds both below the cap and on the decaying branch.
            let base = aci_capacity(&s).unwrap().v_pred;
            let mut sd = s.clone();
            sd.d *= k;
            prop_assert!(aci_capacity(&sd).unwrap().v_pred > base);
        }

        #[test]
        fn ec2_cube_root_scaling(s in sample_strategy(), k in 0.2..5.0f64) {
            let base = ec2_capacity(&s).unwrap().v_pred;
            let mut sf = s.clone();
            sf.fc *= k;
            let r = ec2_capacity(&sf).unwrap().v_pred / base;
            prop_assert!((r - k.cbrt()).abs() < 1e-12 * k.cbrt().max(1.0));
            let mut sr = s.clone();
            sr.rho *= k;
            let r = ec2_capacity(&sr).unwrap().v_pred / base;
            prop_assert!((r - k.cbrt()).abs() < 1e-12 * k.cbrt().max(1.0));
        }

        #[test]
        fn cfp_lambda_decreasing(rho in 1e-4..0.05f64, fy in 100.0..800.0f64, fc in 5.0..59.0f64, k in 1.01..2.0f64) {
            let base = cfp_lambda(rho, fy, fc).unwrap().0;
            prop_assert!(cfp_lambda(rho * k, fy, fc).unwrap().0 <= base);
            prop_assert!(cfp_lambda(rho, fy * k, fc).unwrap().0 <= base);
            prop_assert!(1.0 + 0.01 * (fc - 60.0) < 1.0);
        }
    }
}
