//! Summability diagnostics for the perturbation sequence and Taylor-expansion
//! predictors for backward iteration near the critical fixed points.
//!
//! The central object is `S_n = sum_{j=1}^n (sum_{i=j}^n eps_i)^2`; its
//! boundedness as `n -> infinity` separates perturbations that preserve the
//! phase transition from those that force uniqueness.

use crate::error::{Error, Result};
use crate::model::{EpsilonFamily, ModelParams};
use crate::recursion::{psi_prime, psi_second};

/// Condition sum `S_n` with the rearrangement sandwich bounds and a tail sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionSumReport {
    pub horizon: usize,
    /// `S_n = sum_j (sum_{i=j}^n eps_i)^2`.
    pub sum: f64,
    /// `sum_i (i eps_i)^2 <= S_n`.
    pub lower_bound: f64,
    /// `S_n <= sum_i ((n - i + 1) eps_i)^2`.
    pub upper_bound: f64,
    /// First index of the reported tail sum.
    pub tail_from: usize,
    /// `sum_{i=tail_from}^n eps_i`.
    pub tail_sum: f64,
}

/// Verdict on the limit of `S_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionVerdict {
    Convergent,
    Divergent,
    Undetermined,
}

/// Thresholds for the finite-horizon growth test of `S_n`.
///
/// Successive-increment ratios below `shrink_ratio` over the trailing
/// `window` horizon steps count as geometric shrinking (convergent); ratios
/// at or above `nonshrink_ratio` throughout count as non-shrinking
/// (divergent), as does exceeding `blow_up` outright.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionClassifierConfig {
    pub shrink_ratio: f64,
    pub nonshrink_ratio: f64,
    pub blow_up: f64,
    pub window: usize,
}

impl Default for ConditionClassifierConfig {
    fn default() -> Self {
        Self { shrink_ratio: 0.9, nonshrink_ratio: 0.97, blow_up: 1e6, window: 3 }
    }
}

/// Outcome of the horizon sweep, with the exact fast path when one exists.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionClassification {
    /// Final verdict: the analytic fast path when available, else numeric.
    pub verdict: ConditionVerdict,
    pub numeric_verdict: ConditionVerdict,
    /// Exact answer for power-law families: convergent iff `gamma > 3/2`
    /// (the tail term `j^(2 - 2 gamma)` is summable iff `2 - 2 gamma < -1`).
    pub analytic_verdict: Option<ConditionVerdict>,
    /// `(horizon, S_horizon)` samples.
    pub sums: Vec<(usize, f64)>,
}

/// Default horizon schedule for [`classify_condition`].
pub fn default_horizons() -> Vec<usize> {
    vec![100, 200, 400, 800, 1600, 3200, 6400]
}

fn epsilon_prefix(family: &EpsilonFamily, n: usize) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(n);
    for i in 1..=n {
        values.push(family.epsilon(i)?);
    }
    for (i, w) in values.windows(2).enumerate() {
        if w[0] < 0.0 || !w[0].is_finite() {
            return Err(Error::Monotonicity(format!(
                "eps_{} = {} is not a finite non-negative value",
                i + 1,
                w[0]
            )));
        }
        if w[1] > w[0] {
            return Err(Error::Monotonicity(format!(
                "eps_{} = {} exceeds eps_{} = {}",
                i + 2,
                w[1],
                i + 1,
                w[0]
            )));
        }
    }
    Ok(values)
}

/// `S_n` by the `O(n)` suffix-sum method, cross-checked in place against the
/// rearrangement-proof identity
/// `S_n = sum_i i eps_i^2 + 2 sum_{i>=2} eps_i sum_{j<i} j eps_j`.
pub fn condition_sum(
    family: &EpsilonFamily,
    horizon: usize,
    tail_from: usize,
) -> Result<ConditionSumReport> {
    if horizon == 0 {
        return Err(Error::Domain("condition-sum horizon must be >= 1".into()));
    }
    if tail_from == 0 || tail_from > horizon {
        return Err(Error::Domain(format!(
            "tail_from must lie in 1..={horizon}, got {tail_from}"
        )));
    }
    let eps = epsilon_prefix(family, horizon)?;

    let mut suffix = 0.0;
    let mut sum = 0.0;
    let mut tail_sum = 0.0;
    for j in (0..horizon).rev() {
        suffix += eps[j];
        sum += suffix * suffix;
        if j + 1 == tail_from {
            tail_sum = suffix;
        }
    }

    let mut lower_bound = 0.0;
    let mut upper_bound = 0.0;
    for (idx, &e) in eps.iter().enumerate() {
        let i = (idx + 1) as f64;
        let n_rev = (horizon - idx) as f64;
        lower_bound += (i * e) * (i * e);
        upper_bound += (n_rev * e) * (n_rev * e);
    }

    // identity route from the sandwich proof
    let mut weighted_prefix = 0.0; // sum_{j<i} j eps_j
    let mut identity = 0.0;
    for (idx, &e) in eps.iter().enumerate() {
        let i = (idx + 1) as f64;
        identity += i * e * e + 2.0 * e * weighted_prefix;
        weighted_prefix += i * e;
    }
    assert!(
        (sum - identity).abs() <= 1e-10 * sum.abs().max(1.0),
        "suffix-sum and identity routes disagree: {sum} vs {identity}"
    );

    Ok(ConditionSumReport { horizon, sum, lower_bound, upper_bound, tail_from, tail_sum })
}

/// Decide whether `S_n` stays bounded, from its growth over `horizons`.
pub fn classify_condition(
    family: &EpsilonFamily,
    horizons: &[usize],
    config: &ConditionClassifierConfig,
) -> Result<ConditionClassification> {
    if horizons.is_empty() {
        return Err(Error::Domain("horizon schedule must not be empty".into()));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("horizon schedule must be strictly increasing".into()));
    }

    let mut sums = Vec::with_capacity(horizons.len());
    for &n in horizons {
        sums.push((n, condition_sum(family, n, 1)?.sum));
    }

    let final_sum = sums.last().expect("non-empty").1;
    let numeric_verdict = if final_sum == 0.0 {
        ConditionVerdict::Convergent
    } else if final_sum > config.blow_up {
        ConditionVerdict::Divergent
    } else {
        let increments: Vec<f64> = sums.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let ratios: Vec<f64> = increments
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect();
        if ratios.len() < config.window {
            ConditionVerdict::Undetermined
        } else {
            let last = &ratios[ratios.len() - config.window..];
            if last.iter().all(|&r| r < config.shrink_ratio) {
                ConditionVerdict::Convergent
            } else if last.iter().all(|&r| r >= config.nonshrink_ratio) {
                ConditionVerdict::Divergent
            } else {
                ConditionVerdict::Undetermined
            }
        }
    };

    let analytic_verdict = match family {
        EpsilonFamily::PowerLaw { gamma } => Some(if *gamma > 1.5 {
            ConditionVerdict::Convergent
        } else {
            ConditionVerdict::Divergent
        }),
        _ => None,
    };

    Ok(ConditionClassification {
        verdict: analytic_verdict.unwrap_or(numeric_verdict),
        numeric_verdict,
        analytic_verdict,
        sums,
    })
}

/// Two-term saddle-side predictor for the composed backward map:
///
/// `psi~_{k,n}(b+) ~ b+ - sum_{i=k}^n eps_i
///                 - (1/2) |psi''(b+)| sum_{i=k+1}^n (sum_{j=i}^n eps_j)^2`.
///
/// `b_plus` must be the saddle fixed point at `h = -h_c`. The cubic remainder
/// is never added; its size is characterized empirically by the
/// convergence-order tests.
pub fn taylor_plus_prediction(
    k: usize,
    n: usize,
    family: &EpsilonFamily,
    b_plus: f64,
    params: &ModelParams,
) -> Result<f64> {
    if !params.is_supercritical() {
        return Err(Error::Criticality(
            "no saddle fixed point exists for theta <= 1/d".into(),
        ));
    }
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let curvature = psi_second(b_plus, params).abs();
    let mut suffix = 0.0;
    let mut double_sum = 0.0;
    for i in (k..=n).rev() {
        suffix += family.epsilon(i)?;
        if i > k {
            double_sum += suffix * suffix;
        }
    }
    Ok(b_plus - suffix - 0.5 * curvature * double_sum)
}

/// First-order contraction-weighted predictor on the attracting side:
///
/// `psi~_{k,n}(b-) ~ b- - sum_{i=k}^n psi'(b-)^(i-k) eps_i`.
pub fn taylor_minus_prediction(
    k: usize,
    n: usize,
    family: &EpsilonFamily,
    b_minus: f64,
    params: &ModelParams,
) -> Result<f64> {
    if !params.is_supercritical() {
        return Err(Error::Criticality(
            "no attracting critical fixed point exists for theta <= 1/d".into(),
        ));
    }
    if k == 0 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let rate = psi_prime(b_minus, params);
    if rate >= 1.0 {
        return Err(Error::Criticality(format!(
            "psi'(b-) = {rate} is not contracting; b_minus must be the attracting fixed point"
        )));
    }
    let mut weighted = 0.0;
    for i in (k..=n).rev() {
        weighted = weighted * rate + family.epsilon(i)?;
        // Horner-style accumulation: after processing index i the sum equals
        // sum_{j=i}^n rate^(j-i) eps_j.
    }
    Ok(b_minus - weighted)
}
