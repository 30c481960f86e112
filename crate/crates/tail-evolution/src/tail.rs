use std::f64::consts::PI;

use numerics::fit::line_fit;
use numerics::quad::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Result, TailError};

/// Power-law fit of `|U(tau)| ~ tau^{-p}` over the last decade of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// median of the local exponent over the last decade
    pub exponent: f64,
    /// bootstrap standard deviation of that median
    pub spread: f64,
    /// `R^2` of the log-log line over the last decade
    pub r2: f64,
    /// slope of that line, negated
    pub slope_exponent: f64,
    /// `(tau, p_eff)` on a logarithmic grid
    pub local: Vec<(f64, f64)>,
    pub decades: f64,
}

/// `p_eff = -d log|U| / d log tau` on `per_decade` logarithmically spaced points in `[tau_lo, tau_hi]`,
/// from linear interpolation of the samples and centered differences.
pub fn local_slopes(taus: &[f64], values: &[f64], tau_lo: f64, tau_hi: f64, per_decade: usize) -> Vec<(f64, f64)> {
    let decades = (tau_hi / tau_lo).log10();
    let m = ((decades * per_decade as f64).round() as usize).max(2);
    let logs: Vec<f64> = (0..=m).map(|j| tau_lo.ln() + (tau_hi / tau_lo).ln() * j as f64 / m as f64).collect();
    let sample = |t: f64| -> f64 {
        let k = match taus.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(k) => return values[k].abs().ln(),
            Err(k) => k.clamp(1, taus.len() - 1),
        };
        let w = (t - taus[k - 1]) / (taus[k] - taus[k - 1]);
        ((1.0 - w) * values[k - 1] + w * values[k]).abs().ln()
    };
    let lv: Vec<f64> = logs.iter().map(|l| sample(l.exp())).collect();
    (1..m).map(|j| (logs[j].exp(), -(lv[j + 1] - lv[j - 1]) / (logs[j + 1] - logs[j - 1]))).collect()
}

/// Tail exponent from samples `U(tau)`.
///
/// The fit starts at `tau_start` and must span at least `min_decades`; the exponent is the median
/// of the local exponent over the final decade.
pub fn tail_fit(taus: &[f64], values: &[f64], tau_start: f64, min_decades: f64, seed: u64) -> Result<TailFit> {
    if taus.len() != values.len() || taus.len() < 8 {
        return Err(TailError::Domain("need matching time and value series".into()));
    }
    let tau_end = *taus.last().expect("nonempty");
    if !(tau_start > 0.0) || tau_start >= tau_end {
        return Err(TailError::Domain(format!("fit start {tau_start} outside (0, {tau_end})")));
    }
    let decades = (tau_end / tau_start).log10();
    if decades < min_decades {
        return Err(TailError::InsufficientDecades { decades, needed: min_decades });
    }
    let local = local_slopes(taus, values, tau_start, tau_end, 40);
    let last: Vec<f64> = local.iter().filter(|(t, _)| *t >= 0.1 * tau_end).map(|(_, p)| *p).collect();
    let exponent = median(&last);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let medians: Vec<f64> = (0..200)
        .map(|_| {
            let sample: Vec<f64> = (0..last.len()).map(|_| last[rng.random_range(0..last.len())]).collect();
            median(&sample)
        })
        .collect();
    let mean = medians.iter().sum::<f64>() / medians.len() as f64;
    let spread = (medians.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / medians.len() as f64).sqrt();
    let (xs, ys): (Vec<f64>, Vec<f64>) = taus
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= 0.1 * tau_end && v.abs() > 0.0)
        .map(|(t, v)| (t.ln(), v.abs().ln()))
        .unzip();
    let fit = line_fit(&xs, &ys).ok_or_else(|| TailError::Domain("degenerate log-log fit".into()))?;
    Ok(TailFit { exponent, spread, r2: fit.r2, slope_exponent: -fit.slope, local, decades })
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Free-space field at radius `r` and times `t = tau + r` for characteristic data
/// `psi_0(r') = r'^{3/2} U_0(r')` (`l = 0`, no wall) supported in `[lo, hi]`.
///
/// The data on the cone act as the source `2 r^{-3/2} delta(t - r) psi_0'(r)` for the wave
/// operator on `R^{1+4}`, whose fundamental solution inside the cone is
/// `-(t^2 - |x|^2)^{-3/2} / (4 pi^2)`. After the angular reduction,
/// `U(t, r) = -(2/pi) int r'^{3/2} psi_0'(r') int_0^pi sin^2(th) (A + B cos th)^{-3/2} dth dr'`
/// with `A = (t - r')^2 - r^2 - r'^2`, `B = 2 r r'`. Valid once the point is inside every data
/// cone, `tau > 2 hi`.
pub fn free_space_oracle<F: Fn(f64) -> f64>(dpsi0: F, lo: f64, hi: f64, r: f64, taus: &[f64]) -> Result<Vec<f64>> {
    if let Some(t) = taus.iter().find(|&&t| t <= 2.0 * hi) {
        return Err(TailError::Domain(format!("oracle needs tau > {}, got {t}", 2.0 * hi)));
    }
    let panels = 16;
    let gr = GaussLegendre::new(16);
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|k| {
            let a = lo + (hi - lo) * k as f64 / panels as f64;
            gr.mapped(a, a + (hi - lo) / panels as f64)
        })
        .collect();
    let weights: Vec<(f64, f64)> = nodes.iter().map(|&(rp, w)| (rp, w * rp.powf(1.5) * dpsi0(rp))).collect();
    let gt = GaussLegendre::new(48).mapped(0.0, PI);
    Ok(taus
        .iter()
        .map(|&tau| {
            let t = tau + r;
            let total: f64 = weights
                .iter()
                .map(|&(rp, w)| {
                    let a = (t - rp).powi(2) - r * r - rp * rp;
                    let b = 2.0 * r * rp;
                    w * gt.iter().map(|&(th, wt)| wt * th.sin().powi(2) * (a + b * th.cos()).powf(-1.5)).sum::<f64>()
                })
                .sum();
            -2.0 / PI * total
        })
        .collect())
}

/// [`tail_fit`] for one observer of a run, requiring `tau_max >= 50 r` and 1.5 decades from `tau_start`.
pub fn observer_fit(out: &crate::RunOutput, r: f64, tau_start: f64, seed: u64) -> Result<TailFit> {
    let tau_max = *out.taus.last().ok_or_else(|| TailError::Domain("empty run".into()))?;
    if tau_max < 50.0 * r {
        return Err(TailError::RunTooShort { tau_max, needed: 50.0 * r });
    }
    let series = out
        .observers
        .iter()
        .find(|(ro, _)| *ro == r)
        .map(|(_, s)| s)
        .ok_or_else(|| TailError::Domain(format!("no observer at r = {r}")))?;
    tail_fit(&out.taus, series, tau_start, 1.5, seed)
}
