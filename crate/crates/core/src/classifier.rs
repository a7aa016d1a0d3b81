//! Phase-transition vs. uniqueness verdicts for perturbed critical fields.
//!
//! The extremal boundary-field sequences are probed by backward iteration
//! seeded at the critical homogeneous pair `(b-, b+)`: gaps between the
//! plus-seeded and minus-seeded values are recorded over a depth schedule.
//!
//! Verdict routing: for perturbation profiles the summability of
//! `S_n = sum_j (sum_{i>=j} eps_i)^2` decides (convergent sum preserves the
//! transition, divergent sum forces uniqueness by contraction); the
//! finite-depth gap protocol decides homogeneous calibration runs and any
//! case whose condition test is undetermined. Finite-depth gaps are attached
//! as diagnostics in every run. At these seeds the finite-depth gap can close
//! even for convergent sums (the saddle sheds a perturbed trajectory at a
//! depth that grows with the horizon), so the gap trend alone is not a
//! reliable transition witness; see the gap-protocol notes on each verdict.

use rayon::prelude::*;

use crate::criticality::critical_pair;
use crate::error::{Error, Result};
use crate::model::{EpsilonFamily, FieldProfile, ModelParams};
use crate::perturbation::{
    classify_condition, ConditionClassification, ConditionClassifierConfig, ConditionVerdict,
    default_horizons,
};
use crate::recursion::{compose, kernel, psi, psi_extended, ExtendedReal};

/// Absolute slack when testing that gaps shrink across depth steps.
const SHRINK_SLACK: f64 = 1e-12;

/// Final call on the perturbed model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Transition,
    Uniqueness,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Transition => "Transition",
            Verdict::Uniqueness => "Uniqueness",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Which decision path produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictRoute {
    /// `theta <= 1/d`: unique fixed point at every field, no further work.
    SubcriticalTheta,
    /// Summability of the condition sum decided (perturbation profiles).
    ConditionSum,
    /// Finite-depth gap thresholds decided.
    GapProtocol,
}

impl std::fmt::Display for VerdictRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictRoute::SubcriticalTheta => "subcritical-theta",
            VerdictRoute::ConditionSum => "condition-sum",
            VerdictRoute::GapProtocol => "gap-protocol",
        };
        f.write_str(s)
    }
}

/// One `(probe, depth)` cell of the gap trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapSample {
    pub probe: usize,
    pub depth: usize,
    pub b_plus: f64,
    pub b_minus: f64,
    pub gap: f64,
}

/// Probe generations, depth schedule and decision thresholds.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub probes: Vec<usize>,
    pub depths: Vec<usize>,
    /// Final gaps above this at every probe let the gap protocol call Transition.
    pub tau_gap: f64,
    /// Final gaps below this (and shrinking) let the gap protocol call Uniqueness.
    pub tau_uniq: f64,
    pub condition_horizons: Vec<usize>,
    pub condition_config: ConditionClassifierConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            probes: vec![1, 5, 10],
            depths: vec![250, 500, 1000, 2000, 4000],
            tau_gap: 1e-4,
            tau_uniq: 1e-6,
            condition_horizons: default_horizons(),
            condition_config: ConditionClassifierConfig::default(),
        }
    }
}

impl ClassifyConfig {
    fn validate(&self) -> Result<()> {
        if self.probes.is_empty() || self.depths.is_empty() {
            return Err(Error::Domain("probes and depths must not be empty".into()));
        }
        if self.probes.iter().any(|&k| k == 0) {
            return Err(Error::Domain("probe generations start at 1".into()));
        }
        if self.depths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("depth schedule must be strictly increasing".into()));
        }
        let max_probe = *self.probes.iter().max().expect("non-empty");
        let min_depth = *self.depths.iter().min().expect("non-empty");
        if max_probe >= min_depth {
            return Err(Error::Domain(format!(
                "every depth must exceed every probe; got probe {max_probe} vs depth {min_depth}"
            )));
        }
        if !(self.tau_gap > 0.0) || !(self.tau_uniq > 0.0) || self.tau_uniq > self.tau_gap {
            return Err(Error::Domain(
                "need 0 < tau_uniq <= tau_gap for verdict thresholds".into(),
            ));
        }
        Ok(())
    }
}

/// Verdict with the full evidence trail.
#[derive(Clone, Debug)]
pub struct ClassificationVerdict {
    pub verdict: Verdict,
    pub route: VerdictRoute,
    pub reason: String,
    pub gap_trace: Vec<GapSample>,
    pub condition: Option<ConditionClassification>,
    /// Critical homogeneous pair used as seeds; absent when subcritical.
    pub b_minus_ref: Option<f64>,
    pub b_plus_ref: Option<f64>,
    pub config: ClassifyConfig,
}

/// `psi~_{probe, depth}(b+)`: backward iteration from `depth` seeded at the
/// homogeneous saddle. Converges from above (in `depth`) to a lower bound
/// for the perturbed plus boundary field at `probe`.
pub fn b_plus_tilde(
    profile: &FieldProfile,
    params: &ModelParams,
    probe: usize,
    depth: usize,
) -> Result<f64> {
    if probe >= depth {
        return Err(Error::Domain(format!("need probe < depth, got {probe} >= {depth}")));
    }
    let (_, b_plus) = critical_pair(params)?;
    compose(profile, params, depth, probe, ExtendedReal::Finite(b_plus))
}

/// Mirror of [`b_plus_tilde`] seeded at the attracting fixed point `b-`;
/// an upper bound for the perturbed minus boundary field.
pub fn b_minus_tilde(
    profile: &FieldProfile,
    params: &ModelParams,
    probe: usize,
    depth: usize,
) -> Result<f64> {
    if probe >= depth {
        return Err(Error::Domain(format!("need probe < depth, got {probe} >= {depth}")));
    }
    let (b_minus, _) = critical_pair(params)?;
    compose(profile, params, depth, probe, ExtendedReal::Finite(b_minus))
}

/// Zone tag of an auxiliary-trace entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Homogeneous map at the asymptotic field, between `window_end` and the seed.
    HomogeneousTail,
    /// Inhomogeneous maps between `probe` and `window_end`.
    InhomogeneousWindow,
    /// Below `probe`: same inhomogeneous recursion, kept for compatibility.
    CompatibleHead,
}

/// Three-zone backward trace seeded at plus infinity: homogeneous tail from
/// `tail_end` down to `window_end`, inhomogeneous window down to `probe`,
/// compatible head down to generation 1.
#[derive(Clone, Debug)]
pub struct AuxiliaryFieldTrace {
    pub probe: usize,
    pub window_end: usize,
    pub tail_end: usize,
    /// `values[m - 1] = b_m` for `m = 1 ..= tail_end - 1`; `b_tail_end` is the
    /// infinite seed and is not stored.
    pub values: Vec<f64>,
    pub regimes: Vec<Regime>,
}

impl AuxiliaryFieldTrace {
    pub fn value_at(&self, generation: usize) -> f64 {
        assert!(
            generation >= 1 && generation < self.tail_end,
            "generation {generation} outside stored range 1..{}",
            self.tail_end
        );
        self.values[generation - 1]
    }

    /// `b_{window_end}`: the entry the tail hands to the inhomogeneous window.
    pub fn window_value(&self) -> f64 {
        self.value_at(self.window_end)
    }
}

/// Build the auxiliary boundary fields `b^{+,k,n,N}` for `k < n < N`:
/// seed `+inf` at depth `N`, homogeneous map at the profile's asymptotic
/// field down to `n`, then the profile's inhomogeneous maps down to 1.
pub fn auxiliary_trace(
    profile: &FieldProfile,
    params: &ModelParams,
    probe: usize,
    window_end: usize,
    tail_end: usize,
) -> Result<AuxiliaryFieldTrace> {
    if probe == 0 {
        return Err(Error::Domain("probe generation starts at 1".into()));
    }
    if !(probe < window_end && window_end < tail_end) {
        return Err(Error::Domain(format!(
            "need probe < window_end < tail_end, got {probe}, {window_end}, {tail_end}"
        )));
    }
    let h_tail = profile.asymptotic_field(params)?;
    let d = params.d_f64();
    let theta = params.theta();

    let mut values = vec![0.0; tail_end - 1];
    let mut b = psi_extended(ExtendedReal::PlusInf, h_tail, params);
    values[tail_end - 2] = b; // b_{N-1}
    for m in (window_end..tail_end - 1).rev() {
        b = psi(b, h_tail, params);
        values[m - 1] = b;
    }
    for m in (1..window_end).rev() {
        b = profile.field_at(params, m)? + d * kernel(b, theta);
        values[m - 1] = b;
    }

    let regimes = (1..tail_end)
        .map(|m| {
            if m >= window_end {
                Regime::HomogeneousTail
            } else if m >= probe {
                Regime::InhomogeneousWindow
            } else {
                Regime::CompatibleHead
            }
        })
        .collect();

    Ok(AuxiliaryFieldTrace { probe, window_end, tail_end, values, regimes })
}

fn gap_protocol(
    samples: &[GapSample],
    config: &ClassifyConfig,
) -> (Verdict, String) {
    let depths = &config.depths;
    let last_depth = *depths.last().expect("validated non-empty");
    let mut all_above = true;
    let mut all_below = true;
    let mut all_shrinking = true;
    let mut worst_final: f64 = 0.0;
    for &probe in &config.probes {
        let series: Vec<&GapSample> =
            samples.iter().filter(|s| s.probe == probe).collect();
        let final_gap = series
            .iter()
            .find(|s| s.depth == last_depth)
            .expect("final depth sampled")
            .gap;
        worst_final = worst_final.max(final_gap);
        if final_gap <= config.tau_gap {
            all_above = false;
        }
        if final_gap >= config.tau_uniq {
            all_below = false;
        }
        let steps = series.len();
        for w in series.windows(2).skip(steps.saturating_sub(3)) {
            if w[1].gap > w[0].gap + SHRINK_SLACK {
                all_shrinking = false;
            }
        }
    }
    if all_above {
        (
            Verdict::Transition,
            format!(
                "gap protocol: final gaps at depth {last_depth} exceed tau_gap = {:.1e} at every probe",
                config.tau_gap
            ),
        )
    } else if all_below && all_shrinking {
        (
            Verdict::Uniqueness,
            format!(
                "gap protocol: final gaps below tau_uniq = {:.1e} at every probe and shrinking across the last depth doublings",
                config.tau_uniq
            ),
        )
    } else {
        (
            Verdict::Inconclusive,
            format!(
                "gap protocol: largest final gap {worst_final:.3e} matches neither threshold pattern"
            ),
        )
    }
}

fn condition_horizons_for(
    family: &EpsilonFamily,
    config: &ClassifyConfig,
) -> Vec<usize> {
    match family {
        EpsilonFamily::Custom(values) => {
            let len = values.len();
            let mut horizons: Vec<usize> = config
                .condition_horizons
                .iter()
                .copied()
                .filter(|&n| n <= len)
                .collect();
            if horizons.last() != Some(&len) && len >= 1 {
                horizons.push(len);
            }
            horizons
        }
        _ => config.condition_horizons.clone(),
    }
}

/// Decide Transition vs. Uniqueness for the model the profile describes.
///
/// Subcritical `theta` short-circuits to Uniqueness. Perturbation profiles
/// are decided by the summability of the condition sum; the gap protocol
/// decides homogeneous profiles and undetermined condition tests. The gap
/// trace over `config.depths` x `config.probes` is always computed (except
/// in the subcritical short-circuit) and attached.
pub fn classify(
    profile: &FieldProfile,
    params: &ModelParams,
    config: &ClassifyConfig,
) -> Result<ClassificationVerdict> {
    config.validate()?;

    if !params.is_supercritical() {
        return Ok(ClassificationVerdict {
            verdict: Verdict::Uniqueness,
            route: VerdictRoute::SubcriticalTheta,
            reason: format!(
                "theta = {} <= 1/d = {}: psi has one fixed point at every field",
                params.theta(),
                1.0 / params.d_f64()
            ),
            gap_trace: Vec::new(),
            condition: None,
            b_minus_ref: None,
            b_plus_ref: None,
            config: config.clone(),
        });
    }

    let (b_minus, b_plus) = critical_pair(params)?;

    let cells: Vec<(usize, usize)> = config
        .probes
        .iter()
        .flat_map(|&k0| config.depths.iter().map(move |&n| (k0, n)))
        .collect();
    let gap_trace: Vec<GapSample> = cells
        .par_iter()
        .map(|&(probe, depth)| -> Result<GapSample> {
            let plus = compose(profile, params, depth, probe, ExtendedReal::Finite(b_plus))?;
            let minus = compose(profile, params, depth, probe, ExtendedReal::Finite(b_minus))?;
            Ok(GapSample { probe, depth, b_plus: plus, b_minus: minus, gap: plus - minus })
        })
        .collect::<Result<Vec<_>>>()?;

    for s in &gap_trace {
        assert!(
            s.gap >= -1e-10,
            "monotone maps must keep the plus trajectory above the minus one; \
             gap = {} at probe {}, depth {}",
            s.gap,
            s.probe,
            s.depth
        );
    }

    let condition = match profile {
        FieldProfile::CriticalMinusPerturbation(family) => {
            let horizons = condition_horizons_for(family, config);
            if horizons.is_empty() {
                None
            } else {
                Some(classify_condition(family, &horizons, &config.condition_config)?)
            }
        }
        _ => None,
    };

    let (verdict, route, reason) = match &condition {
        Some(c) => match c.verdict {
            ConditionVerdict::Convergent => (
                Verdict::Transition,
                VerdictRoute::ConditionSum,
                format!(
                    "condition sum bounded ({}): the perturbation preserves the transition",
                    condition_source(c)
                ),
            ),
            ConditionVerdict::Divergent => (
                Verdict::Uniqueness,
                VerdictRoute::ConditionSum,
                format!(
                    "condition sum diverges ({}): contraction collapses the extremal fields",
                    condition_source(c)
                ),
            ),
            ConditionVerdict::Undetermined => {
                let (v, why) = gap_protocol(&gap_trace, config);
                (v, VerdictRoute::GapProtocol, format!("condition test undetermined; {why}"))
            }
        },
        None => {
            let (v, why) = gap_protocol(&gap_trace, config);
            (v, VerdictRoute::GapProtocol, why)
        }
    };

    Ok(ClassificationVerdict {
        verdict,
        route,
        reason,
        gap_trace,
        condition,
        b_minus_ref: Some(b_minus),
        b_plus_ref: Some(b_plus),
        config: config.clone(),
    })
}

fn condition_source(c: &ConditionClassification) -> &'static str {
    if c.analytic_verdict.is_some() {
        "analytic fast path"
    } else {
        "numeric horizon test"
    }
}
