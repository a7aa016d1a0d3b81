//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured figures (run with `--nocapture` to see them).

use std::time::Instant;

use cayley_ising::classifier::{classify, ClassifyConfig, Verdict, VerdictRoute};
use cayley_ising::classifier::{auxiliary_trace, b_minus_tilde, b_plus_tilde};
use cayley_ising::criticality::{
    critical_beta, critical_field, critical_field_numeric, critical_pair, fixed_points,
    CaseLabel, Stability,
};
use cayley_ising::error::Result;
use cayley_ising::model::{EpsilonFamily, FieldProfile, ModelParams, TreeGeometry};
use cayley_ising::oracle::{verify_compatibility, VERTEX_CAP};
use cayley_ising::perturbation::{
    condition_sum, taylor_minus_prediction, taylor_plus_prediction,
};
use cayley_ising::recursion::{compose, ExtendedReal};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn params_theta(theta: f64) -> ModelParams {
    ModelParams::from_theta(2, 1.0, theta).unwrap()
}

#[test]
fn criterion_1_exact_compatibility() {
    let start = Instant::now();
    let mut cases = 0usize;
    let mut worst: f64 = 0.0;
    for d in [2u32, 3] {
        for depth in [2u32, 3] {
            let geometry = TreeGeometry::new(d, depth).unwrap();
            if geometry.total_vertices() > VERTEX_CAP {
                continue;
            }
            for beta in [0.3, 0.6, 1.2] {
                let params = ModelParams::new(d, 1.0, beta).unwrap();
                let mut prefixes: Vec<Vec<f64>> = vec![vec![0.0; depth as usize - 1]];
                if params.is_supercritical() {
                    let profile = FieldProfile::CriticalMinusPerturbation(
                        EpsilonFamily::power_law(2.0).unwrap(),
                    );
                    prefixes.push(profile.prefix(&params, depth as usize - 1).unwrap());
                }
                for fields in &prefixes {
                    for boundary in [-1.0, 0.0, 0.5, 2.0] {
                        let report =
                            verify_compatibility(&geometry, &params, fields, boundary, 0.0)
                                .unwrap();
                        assert!(
                            report.max_residual <= 1e-11,
                            "residual {} at d={d}, depth={depth}, beta={beta}, b={boundary}",
                            report.max_residual
                        );
                        worst = worst.max(report.max_residual);
                        cases += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 120.0, "grid took {elapsed:?}, budget 2 min");
    println!(
        "ACCEPTANCE 1 (exact compatibility): PASS — {cases} cases, max residual {worst:.3e}, {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_fixed_point_classification() {
    let start = Instant::now();
    let p = params_theta(0.8);
    let hc = critical_field(&p).unwrap();

    for h in [0.0, 0.1, -0.1, 0.25, -0.25, 0.4, -0.4, 0.41, -0.41] {
        let report = fixed_points(h, &p);
        assert_eq!(report.case, CaseLabel::Three, "|h| = {} < h_c", h.abs());
        assert_eq!(report.points.len(), 3);
    }
    for h in [hc, -hc] {
        let report = fixed_points(h, &p);
        assert_eq!(report.case, CaseLabel::Two, "|h| = h_c");
        assert_eq!(report.points.len(), 2);
        let saddle = report
            .points
            .iter()
            .find(|fp| fp.stability == Stability::SaddleNode)
            .expect("saddle flagged at |h| = h_c");
        assert!((saddle.psi_prime - 1.0).abs() <= 1e-6);
    }
    for h in [0.43, -0.43, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0] {
        let report = fixed_points(h, &p);
        assert_eq!(report.case, CaseLabel::One, "|h| = {} > h_c", h.abs());
        assert_eq!(report.points.len(), 1);
    }

    let sub = params_theta(0.4);
    let mut h = -2.0;
    while h <= 2.0 {
        let report = fixed_points(h, &sub);
        assert_eq!(report.case, CaseLabel::One, "theta = 0.4, h = {h}");
        assert_eq!(report.points.len(), 1);
        h += 0.25;
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 10.0, "suite took {elapsed:?}, budget 10 s");
    println!("ACCEPTANCE 2 (fixed-point classification): PASS — {elapsed:.2?}");
}

#[test]
fn criterion_3_critical_quantities() {
    // independent bisection oracle for tanh(x) = 1/2
    let f = |x: f64| x.tanh() - 0.5;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let beta_c = critical_beta(2, 1.0).unwrap();
    assert!((beta_c - oracle).abs() <= 1e-12);
    assert!((beta_c - 0.549_306_144_334_054_8).abs() < 1e-12);

    let p = params_theta(0.8);
    let closed = critical_field(&p).unwrap();
    let numeric = critical_field_numeric(&p).unwrap();
    assert!((closed - numeric).abs() <= 1e-10);
    assert!((closed - 0.418_048_004_260_145_75).abs() < 1e-12);

    println!(
        "ACCEPTANCE 3 (critical quantities): PASS — beta_c = {beta_c:.15}, h_c = {closed:.15}, |closed - numeric| = {:.2e}",
        (closed - numeric).abs()
    );
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[test]
fn criterion_4_taylor_formula_orders() {
    let start = Instant::now();
    let p = params_theta(0.8);
    let (b_minus, b_plus) = critical_pair(&p).unwrap();
    let n = 200;
    let mut log_lambda = Vec::new();
    let mut log_err_plus = Vec::new();
    let mut log_err_minus = Vec::new();
    for lambda in [1e-2, 1e-3, 1e-4] {
        let family = EpsilonFamily::custom(
            (1..=n).map(|i| lambda * (i as f64).powi(-2)).collect(),
        )
        .unwrap();
        let profile = FieldProfile::CriticalMinusPerturbation(family.clone());
        let direct_plus = compose(&profile, &p, n, 1, ExtendedReal::Finite(b_plus)).unwrap();
        let direct_minus = compose(&profile, &p, n, 1, ExtendedReal::Finite(b_minus)).unwrap();
        let pred_plus = taylor_plus_prediction(1, n, &family, b_plus, &p).unwrap();
        let pred_minus = taylor_minus_prediction(1, n, &family, b_minus, &p).unwrap();
        log_lambda.push(lambda.ln());
        log_err_plus.push((pred_plus - direct_plus).abs().ln());
        log_err_minus.push((pred_minus - direct_minus).abs().ln());
    }
    let slope_plus = fit_slope(&log_lambda, &log_err_plus);
    let slope_minus = fit_slope(&log_lambda, &log_err_minus);
    assert!((slope_plus - 3.0).abs() <= 0.3, "plus-side slope {slope_plus}");
    assert!((slope_minus - 2.0).abs() <= 0.3, "minus-side slope {slope_minus}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 5.0, "took {elapsed:?}, budget 5 s");
    println!(
        "ACCEPTANCE 4 (Taylor expansion orders): PASS — plus slope {slope_plus:.3}, minus slope {slope_minus:.3}, {elapsed:.2?}"
    );
}

#[test]
fn criterion_5_proposition_sandwich() {
    // worked gamma = 2, n = 3 instance: S_3 = 431/216, checked by hand
    let gamma2 = EpsilonFamily::power_law(2.0).unwrap();
    let worked = condition_sum(&gamma2, 3, 1).unwrap();
    assert!((worked.sum - 431.0 / 216.0).abs() <= 1e-10);

    let mut rng = StdRng::seed_from_u64(20260809);
    let mut violations = 0usize;
    for _ in 0..1000 {
        let n = rng.random_range(1..=200usize);
        let mut eps = vec![0.0f64; n];
        let mut acc = 0.0;
        for i in (0..n).rev() {
            acc += rng.random_range(1e-6..1.0);
            eps[i] = acc;
        }
        let family = EpsilonFamily::custom(eps).unwrap();
        let report = condition_sum(&family, n, 1).unwrap();
        if !(report.lower_bound <= report.sum * (1.0 + 1e-12)
            && report.sum <= report.upper_bound * (1.0 + 1e-12))
        {
            violations += 1;
        }
    }
    assert_eq!(violations, 0, "sandwich violated {violations} times");
    println!(
        "ACCEPTANCE 5 (rearrangement sandwich): PASS — 1000 random sequences, 0 violations, S_3 = {:.12}",
        worked.sum
    );
}

#[test]
fn criterion_6_gamma_threshold() {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    pool.install(|| {
        let p = params_theta(0.8);
        let config = ClassifyConfig::default();
        let run = |gamma: f64| -> Result<_> {
            let profile = FieldProfile::CriticalMinusPerturbation(
                EpsilonFamily::power_law(gamma)?,
            );
            classify(&profile, &p, &config)
        };

        let transition = run(2.0).unwrap();
        assert_eq!(transition.verdict, Verdict::Transition, "gamma = 2");

        let uniqueness = run(1.0).unwrap();
        assert_eq!(uniqueness.verdict, Verdict::Uniqueness, "gamma = 1");

        let critical = run(1.5).unwrap();
        assert_eq!(critical.verdict, Verdict::Uniqueness, "gamma = 3/2");
        assert_eq!(critical.route, VerdictRoute::ConditionSum);
        assert!(
            critical.condition.as_ref().unwrap().analytic_verdict.is_some(),
            "analytic fast path recorded at the critical power"
        );
        assert!(!critical.gap_trace.is_empty(), "gap diagnostics attached");

        let sweep: Vec<Verdict> = [1.0, 1.25, 1.75, 2.0]
            .iter()
            .map(|&g| run(g).unwrap().verdict)
            .collect();
        assert_eq!(
            sweep,
            vec![
                Verdict::Uniqueness,
                Verdict::Uniqueness,
                Verdict::Transition,
                Verdict::Transition
            ],
            "sweep pattern U, U, T, T"
        );
    });
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 180.0, "took {elapsed:?}, budget 3 min");
    println!(
        "ACCEPTANCE 6 (gamma threshold at 3/2): PASS — verdicts T/U/U + sweep U,U,T,T, {elapsed:.2?}"
    );
}

#[test]
fn criterion_7_ordering_and_bound_invariants() {
    let p = params_theta(0.8);
    let config = ClassifyConfig::default();
    let mut checked = 0usize;
    for gamma in [1.0, 1.5, 2.0] {
        let profile =
            FieldProfile::CriticalMinusPerturbation(EpsilonFamily::power_law(gamma).unwrap());
        let verdict = classify(&profile, &p, &config).unwrap();
        for sample in &verdict.gap_trace {
            assert!(
                sample.gap >= -1e-10,
                "ordering violated at gamma={gamma}, probe={}, depth={}",
                sample.probe,
                sample.depth
            );
            checked += 1;
        }
        // direct route through the public bound evaluators
        let plus = b_plus_tilde(&profile, &p, 5, 250).unwrap();
        let minus = b_minus_tilde(&profile, &p, 5, 250).unwrap();
        assert!(plus - minus >= -1e-10);
    }

    // auxiliary construction: the value handed to the window decreases
    // monotonically toward b+ as the homogeneous tail doubles
    let (_, b_plus) = critical_pair(&p).unwrap();
    let profile = FieldProfile::CriticalMinusPerturbation(EpsilonFamily::power_law(2.0).unwrap());
    let mut prev = f64::INFINITY;
    let mut gaps = Vec::new();
    for tail_end in [40usize, 80, 160, 320, 640] {
        let trace = auxiliary_trace(&profile, &p, 3, 20, tail_end).unwrap();
        let value = trace.window_value();
        assert!(value > b_plus, "approach from above (psi^n(inf) >= b+)");
        assert!(value < prev, "monotone decrease as the tail doubles");
        gaps.push(value - b_plus);
        prev = value;
    }
    println!(
        "ACCEPTANCE 7 (ordering and bounds): PASS — {checked} gap cells >= -1e-10, tail gaps {:?}",
        gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>()
    );
}
