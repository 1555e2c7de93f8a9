//! Bounded synthetic slab databases for desk-scale testing.
//!
//! Inputs are drawn uniformly inside each parameter's `[min, max]`. The
//! measured load follows a smooth, strictly positive shape
//!
//! ```text
//! g = d^1.5 · sqrt(fc) · (100·rho)^0.33 / (a_v/d)
//! v = v_min · (g / g_min)^p,   p = ln(v_max / v_min) / ln(g_max / g_min)
//! ```
//!
//! where `g_min` / `g_max` are the extremes of `g` over the range box, so the
//! noiseless load spans exactly `[v_min, v_max]`. Relative noise multiplies
//! by `1 + noise·u`, `u ~ U[-1, 1]`, and the result is clamped back into
//! `[v_min, v_max]`.

use rand::Rng;

use super::{Dataset, Param, ParamRange, RangeSpec, SlabSample};
use crate::error::{Error, Result};
use crate::rng;

/// Unscaled load shape `g` for the given sample inputs.
pub fn target_function(d: f64, fc: f64, rho: f64, av_d: f64) -> f64 {
    d.powf(1.5) * fc.sqrt() * (100.0 * rho).powf(0.33) / av_d
}

fn required(spec: &RangeSpec, param: Param) -> Result<&ParamRange> {
    spec.get(param).ok_or_else(|| Error::InvalidRangeSpec {
        param: param.symbol().to_string(),
        message: "required for synthesis".into(),
    })
}

pub fn synthesize(n: usize, spec: &RangeSpec, seed: u64, noise: f64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidArgument {
            name: "n",
            message: "need at least one sample".into(),
        });
    }
    if !(0.0..1.0).contains(&noise) {
        return Err(Error::InvalidArgument {
            name: "noise",
            message: format!("relative noise must lie in [0, 1), got {noise}"),
        });
    }
    spec.validate()?;
    let [d, c, av_d, rho, fy, fc, v] = [
        Param::D,
        Param::C,
        Param::AvD,
        Param::Rho,
        Param::Fy,
        Param::Fc,
        Param::VExp,
    ]
    .map(|p| required(spec, p));
    let (d, c, av_d, rho, fy, fc, v) = (d?, c?, av_d?, rho?, fy?, fc?, v?);
    for r in [d, c, av_d, rho, fy, fc, v] {
        if r.min <= 0.0 {
            return Err(Error::InvalidRangeSpec {
                param: r.param.symbol().to_string(),
                message: "lower bound must be positive".into(),
            });
        }
    }
    let m_fs = spec.get(Param::MFs).filter(|r| r.min > 0.0);
    let b = spec.get(Param::B).filter(|r| r.min > 0.0);

    let g_min = target_function(d.min, fc.min, rho.min, av_d.max);
    let g_max = target_function(d.max, fc.max, rho.max, av_d.min);
    let exponent = if g_max > g_min && v.max > v.min {
        (v.max / v.min).ln() / (g_max / g_min).ln()
    } else {
        0.0
    };

    let mut rng = rng::seeded(seed);
    let draw = |r: &ParamRange, rng: &mut rng::RunRng| {
        if r.max > r.min {
            rng.random_range(r.min..=r.max)
        } else {
            r.min
        }
    };
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let sd = draw(d, &mut rng);
        let sc = draw(c, &mut rng);
        let savd = draw(av_d, &mut rng);
        let srho = draw(rho, &mut rng);
        let sfy = draw(fy, &mut rng);
        let sfc = draw(fc, &mut rng);
        let sm = m_fs.map(|r| draw(r, &mut rng));
        let sb = b.map(|r| draw(r, &mut rng));
        let u: f64 = rng.random_range(-1.0..=1.0);

        let g = target_function(sd, sfc, srho, savd);
        let clean = v.min * (g / g_min).powf(exponent);
        let v_exp = (clean * (1.0 + noise * u)).clamp(v.min, v.max);
        samples.push(SlabSample {
            id: format!("SYN-{:04}", i + 1),
            source: format!("synthetic seed={seed} noise={noise}"),
            d: sd,
            c: sc,
            av_d: savd,
            fy: sfy,
            rho: srho,
            fc: sfc,
            v_exp,
            m_fs: sm,
            b: sb,
        });
    }
    Dataset::new(samples)
}
