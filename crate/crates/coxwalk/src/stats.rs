//! Speed and variance estimators, CLT diagnostics.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::renewal::RenewalSeries;
use crate::walk::Trajectory;

pub const MIN_INCREMENTS: usize = 10;

/// Pooled `(d(u_{R_i}, u_{R_{i+1}}), R_{i+1} - R_i)` over all series.
/// The stretch before `R_1` is never included.
pub fn pooled_increments(series: &[RenewalSeries]) -> Vec<(f64, f64)> {
    series
        .iter()
        .flat_map(|s| {
            s.increments_dist
                .iter()
                .zip(&s.increments_time)
                .map(|(&d, &t)| (d as f64, t as f64))
        })
        .collect()
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

/// Sample variance with denominator `n - 1`.
fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs.iter().copied());
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Ratio `E[Y] / E[T]` with its delta-method standard error.
fn ratio(pairs: &[(f64, f64)]) -> (f64, f64) {
    let n = pairs.len() as f64;
    let my = mean(pairs.iter().map(|p| p.0));
    let mt = mean(pairs.iter().map(|p| p.1));
    let r = my / mt;
    let resid: Vec<f64> = pairs.iter().map(|(y, t)| y - r * t).collect();
    (r, (variance(&resid) / n).sqrt() / mt)
}

fn require(pairs: &[(f64, f64)]) -> Result<()> {
    if pairs.len() < MIN_INCREMENTS {
        return Err(Error::InsufficientData(format!(
            "{} pooled renewal increments, at least {MIN_INCREMENTS} needed; \
             use a longer horizon, more trajectories or a smaller L1",
            pairs.len()
        )));
    }
    Ok(())
}

/// `v = E[d] / E[R_2 - R_1]` and its standard error.
pub fn estimate_speed(series: &[RenewalSeries]) -> Result<(f64, f64)> {
    let pairs = pooled_increments(series);
    require(&pairs)?;
    Ok(ratio(&pairs))
}

/// `sigma^2 = E[(d - (R_2 - R_1) v)^2] / E[R_2 - R_1]` and its standard error.
pub fn estimate_variance(series: &[RenewalSeries], v: f64) -> Result<(f64, f64)> {
    let pairs = pooled_increments(series);
    require(&pairs)?;
    let sq: Vec<(f64, f64)> = pairs.iter().map(|(d, t)| ((d - t * v).powi(2), *t)).collect();
    Ok(ratio(&sq))
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimates {
    pub v_hat: f64,
    pub v_se: f64,
    pub sigma2_hat: f64,
    pub sigma2_se: f64,
    /// Renewal times over all series.
    pub n_renewals: usize,
    pub n_increments: usize,
    pub lag1_autocorr_dist: f64,
    pub lag1_autocorr_time: f64,
    /// Standard error of the lag-1 correlations under independence.
    pub lag1_se: f64,
    pub tail_fit: Option<TailFit>,
    /// `v_hat - 3 se <= 0`.
    pub v_ci_includes_zero: bool,
}

pub fn estimate(series: &[RenewalSeries]) -> Result<Estimates> {
    let (v_hat, v_se) = estimate_speed(series)?;
    let (sigma2_hat, sigma2_se) = estimate_variance(series, v_hat)?;
    let pairs = pooled_increments(series);
    let (cd, ct, n_lag) = lag1(series);
    let times: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok(Estimates {
        v_hat,
        v_se,
        sigma2_hat,
        sigma2_se,
        n_renewals: series.iter().map(|s| s.len()).sum(),
        n_increments: pairs.len(),
        lag1_autocorr_dist: cd,
        lag1_autocorr_time: ct,
        lag1_se: 1.0 / (n_lag as f64).sqrt(),
        tail_fit: tail_fit(&times),
        v_ci_includes_zero: v_hat - 3.0 * v_se <= 0.0,
    })
}

/// Lag-1 correlations of consecutive increments within a series.
fn lag1(series: &[RenewalSeries]) -> (f64, f64, usize) {
    let corr = |get: fn(&RenewalSeries) -> &[usize]| {
        let pairs: Vec<(f64, f64)> = series
            .iter()
            .flat_map(|s| get(s).windows(2).map(|w| (w[0] as f64, w[1] as f64)))
            .collect();
        (pearson(&pairs), pairs.len())
    };
    let (cd, n) = corr(|s| &s.increments_dist);
    let (ct, _) = corr(|s| &s.increments_time);
    (cd, ct, n)
}

fn pearson(pairs: &[(f64, f64)]) -> f64 {
    if pairs.len() < 2 {
        return f64::NAN;
    }
    let mx = mean(pairs.iter().map(|p| p.0));
    let my = mean(pairs.iter().map(|p| p.1));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Endpoint estimator `mean(l(u_n) / n)` and its standard error across trajectories.
pub fn direct_speed(trajectories: &[Trajectory]) -> Result<(f64, f64)> {
    if trajectories.len() < 2 {
        return Err(Error::InsufficientData("direct speed needs at least two trajectories".into()));
    }
    let xs: Vec<f64> = trajectories
        .iter()
        .map(|t| t.final_length() as f64 / t.steps().max(1) as f64)
        .collect();
    Ok((mean(xs.iter().copied()), (variance(&xs) / xs.len() as f64).sqrt()))
}

/// Least-squares fit of `ln P(X >= t)` against `t`.
#[derive(Clone, Debug, Serialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Uses every integer `t` from the minimum up to the last `t` with at least
/// ten samples `>= t`.
pub fn tail_fit(samples: &[f64]) -> Option<TailFit> {
    if samples.is_empty() {
        return None;
    }
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let lo = xs[0].ceil() as i64;
    let mut pts = Vec::new();
    for t in lo.. {
        let above = xs.len() - xs.partition_point(|&x| x < t as f64);
        if above < 10 {
            break;
        }
        pts.push((t as f64, (above as f64 / n).ln()));
    }
    if pts.len() < 3 {
        return None;
    }
    let mx = mean(pts.iter().map(|p| p.0));
    let my = mean(pts.iter().map(|p| p.1));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let syy: f64 = pts.iter().map(|(_, y)| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    Some(TailFit {
        slope,
        intercept: my - slope * mx,
        r2: sxy * sxy / (sxx * syy),
        points: pts.len(),
    })
}

/// One-sample Kolmogorov-Smirnov test against the standard normal.
/// Returns the statistic and the asymptotic p-value.
pub fn ks_normal(samples: &[f64]) -> (f64, f64) {
    let normal = Normal::standard();
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sn = n.sqrt();
    (d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d))
}

/// `Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2)`.
pub fn kolmogorov_q(x: f64) -> f64 {
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * x * x).exp();
        sum += sign * term;
        if term < 1e-300 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Sample skewness and excess kurtosis.
pub fn moments(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs.iter().copied());
    let c = |k: i32| mean(xs.iter().map(|x| (x - m).powi(k)));
    let m2 = c(2);
    (c(3) / m2.powf(1.5), c(4) / (m2 * m2) - 3.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct CltReport {
    pub v: f64,
    pub sigma2: f64,
    pub trajectories: usize,
    pub ks_stat: f64,
    pub ks_p: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub tail_fit: Option<TailFit>,
}

/// `Z = (l(u_n) - n v) / sqrt(n sigma^2)` per trajectory, tested against N(0,1).
pub fn clt_check(
    trajectories: &[Trajectory],
    series: &[RenewalSeries],
    v: f64,
    sigma2: f64,
) -> Result<CltReport> {
    if sigma2 <= 0.0 || !sigma2.is_finite() {
        return Err(Error::InvalidInput(format!("sigma^2 = {sigma2} must be positive")));
    }
    if trajectories.is_empty() {
        return Err(Error::InsufficientData("no trajectories".into()));
    }
    let z: Vec<f64> = trajectories
        .iter()
        .map(|t| {
            let n = t.steps() as f64;
            (t.final_length() as f64 - n * v) / (n * sigma2).sqrt()
        })
        .collect();
    let (ks_stat, ks_p) = ks_normal(&z);
    let (skewness, excess_kurtosis) = moments(&z);
    let times: Vec<f64> = pooled_increments(series).iter().map(|p| p.1).collect();
    Ok(CltReport {
        v,
        sigma2,
        trajectories: trajectories.len(),
        ks_stat,
        ks_p,
        skewness,
        excess_kurtosis,
        tail_fit: tail_fit(&times),
    })
}
