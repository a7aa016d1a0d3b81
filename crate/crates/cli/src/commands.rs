//! Command implementations: build the typed report, render JSON or CSV,
//! write to the requested sink, map failures to exit codes.

use std::process::ExitCode;

use cayley_ising::classifier::{self, ClassifyConfig};
use cayley_ising::criticality::{
    critical_beta, critical_field, critical_pair, fixed_points, CaseLabel, Stability,
};
use cayley_ising::model::{EpsilonFamily, FieldProfile, ModelParams, TreeGeometry};
use cayley_ising::oracle;
use cayley_ising::perturbation::{self, ConditionVerdict};
use cayley_ising::recursion::{iterate_backward, ExtendedReal};

use crate::report::*;
use crate::{
    ClassifyArgs, ConditionSumArgs, CriticalArgs, IterateArgs, ModelArgs, OutputArgs,
    ProfileArgs, ScheduleArgs, SweepGammaArgs, VerifyArgs,
};

/// Residual gate for `verify`; exceeding it exits with code 1.
const VERIFY_TOL: f64 = 1e-11;

type CmdResult = Result<ExitCode, String>;

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, String> {
        match (self.beta, self.theta) {
            (Some(beta), None) => {
                ModelParams::new(self.d, self.coupling, beta).map_err(|e| e.to_string())
            }
            (None, Some(theta)) => {
                ModelParams::from_theta(self.d, self.coupling, theta).map_err(|e| e.to_string())
            }
            (None, None) => Err("exactly one of --beta or --theta is required".into()),
            (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
        }
    }
}

fn resolve_h(spec: &str, params: &ModelParams) -> Result<f64, String> {
    match spec {
        "auto" | "+auto" => critical_field(params).map_err(|e| e.to_string()),
        "-auto" => critical_field(params).map(|v| -v).map_err(|e| e.to_string()),
        other => other
            .parse::<f64>()
            .map_err(|_| format!("invalid field value '{other}' (expected a number, 'auto' or '-auto')")),
    }
}

fn read_epsilon_file(path: &std::path::Path, pad_to: usize) -> Result<Vec<f64>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| format!("{}:{}: not a number: '{line}'", path.display(), lineno + 1))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(format!("{}: no values found", path.display()));
    }
    if values.len() < pad_to {
        values.resize(pad_to, 0.0);
    }
    Ok(values)
}

impl ProfileArgs {
    /// Build the profile; custom lists are zero-padded to `pad_to` entries.
    fn build(
        &self,
        params: &ModelParams,
        pad_to: usize,
    ) -> Result<(FieldProfile, ProfileEcho), String> {
        if let Some(gamma) = self.gamma {
            let family = EpsilonFamily::power_law(gamma).map_err(|e| e.to_string())?;
            let echo = ProfileEcho {
                kind: "critical-minus-perturbation".into(),
                gamma: Some(fmt_f64(gamma)),
                ratio: None,
                amplitude: None,
                epsilon_file: None,
                h: None,
            };
            return Ok((FieldProfile::CriticalMinusPerturbation(family), echo));
        }
        if let Some(geom) = &self.geom {
            let (ratio, amplitude) = (geom[0], geom[1]);
            let family =
                EpsilonFamily::geometric(ratio, amplitude).map_err(|e| e.to_string())?;
            let echo = ProfileEcho {
                kind: "critical-minus-perturbation".into(),
                gamma: None,
                ratio: Some(fmt_f64(ratio)),
                amplitude: Some(fmt_f64(amplitude)),
                epsilon_file: None,
                h: None,
            };
            return Ok((FieldProfile::CriticalMinusPerturbation(family), echo));
        }
        if let Some(path) = &self.epsilon_file {
            let values = read_epsilon_file(path, pad_to)?;
            let family = EpsilonFamily::custom(values).map_err(|e| e.to_string())?;
            let echo = ProfileEcho {
                kind: "critical-minus-perturbation".into(),
                gamma: None,
                ratio: None,
                amplitude: None,
                epsilon_file: Some(path.display().to_string()),
                h: None,
            };
            return Ok((FieldProfile::CriticalMinusPerturbation(family), echo));
        }
        if let Some(h_spec) = &self.h {
            let h = resolve_h(h_spec, params)?;
            let echo = ProfileEcho {
                kind: "homogeneous".into(),
                gamma: None,
                ratio: None,
                amplitude: None,
                epsilon_file: None,
                h: Some(fmt_f64(h)),
            };
            return Ok((FieldProfile::Homogeneous(h), echo));
        }
        Err("a field profile is required: --gamma, --geom, --epsilon-file or --h".into())
    }

    /// The epsilon family alone (condition-sum has no homogeneous mode).
    fn build_family(&self, pad_to: usize) -> Result<(EpsilonFamily, ProfileEcho), String> {
        if self.h.is_some() {
            return Err("condition-sum needs an epsilon family (--gamma, --geom or --epsilon-file), not --h".into());
        }
        if let Some(gamma) = self.gamma {
            let family = EpsilonFamily::power_law(gamma).map_err(|e| e.to_string())?;
            return Ok((
                family,
                ProfileEcho {
                    kind: "power-law".into(),
                    gamma: Some(fmt_f64(gamma)),
                    ratio: None,
                    amplitude: None,
                    epsilon_file: None,
                    h: None,
                },
            ));
        }
        if let Some(geom) = &self.geom {
            let family =
                EpsilonFamily::geometric(geom[0], geom[1]).map_err(|e| e.to_string())?;
            return Ok((
                family,
                ProfileEcho {
                    kind: "geometric".into(),
                    gamma: None,
                    ratio: Some(fmt_f64(geom[0])),
                    amplitude: Some(fmt_f64(geom[1])),
                    epsilon_file: None,
                    h: None,
                },
            ));
        }
        if let Some(path) = &self.epsilon_file {
            let values = read_epsilon_file(path, pad_to)?;
            let family = EpsilonFamily::custom(values).map_err(|e| e.to_string())?;
            return Ok((
                family,
                ProfileEcho {
                    kind: "custom".into(),
                    gamma: None,
                    ratio: None,
                    amplitude: None,
                    epsilon_file: Some(path.display().to_string()),
                    h: None,
                },
            ));
        }
        Err("an epsilon family is required: --gamma, --geom or --epsilon-file".into())
    }
}

impl ScheduleArgs {
    fn to_config(&self) -> ClassifyConfig {
        ClassifyConfig {
            probes: self.probes.clone(),
            depths: self.depths.clone(),
            tau_gap: self.tau_gap,
            tau_uniq: self.tau_uniq,
            ..ClassifyConfig::default()
        }
    }
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T, String> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| format!("cannot build worker pool: {e}"))?;
    Ok(pool.install(job))
}

fn emit(output: &OutputArgs, json: String, csv: String) -> CmdResult {
    let payload = if output.format == "csv" { csv } else { json };
    match &output.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{payload}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn case_name(case: CaseLabel) -> &'static str {
    match case {
        CaseLabel::One => "one",
        CaseLabel::Two => "two",
        CaseLabel::Three => "three",
    }
}

fn stability_name(s: Stability) -> &'static str {
    match s {
        Stability::Attracting => "attracting",
        Stability::SaddleNode => "saddle-node",
        Stability::Repelling => "repelling",
    }
}

fn verdict_name(v: classifier::Verdict) -> String {
    v.to_string()
}

fn condition_echo(c: &perturbation::ConditionClassification) -> ConditionEcho {
    let name = |v: ConditionVerdict| {
        match v {
            ConditionVerdict::Convergent => "Convergent",
            ConditionVerdict::Divergent => "Divergent",
            ConditionVerdict::Undetermined => "Undetermined",
        }
        .to_string()
    };
    ConditionEcho {
        verdict: name(c.verdict),
        numeric_verdict: name(c.numeric_verdict),
        analytic_verdict: c.analytic_verdict.map(name),
        sums: c.sums.iter().map(|&(n, s)| (n, fmt_f64(s))).collect(),
    }
}

fn gap_rows(trace: &[classifier::GapSample]) -> Vec<GapRow> {
    trace
        .iter()
        .map(|s| GapRow {
            probe: s.probe,
            depth: s.depth,
            b_plus: fmt_f64(s.b_plus),
            b_minus: fmt_f64(s.b_minus),
            gap: fmt_f64(s.gap),
        })
        .collect()
}

pub(crate) fn critical(args: CriticalArgs) -> CmdResult {
    let params = args.model.params()?;
    let h = resolve_h(&args.h, &params)?;
    let beta_c = critical_beta(params.d(), params.coupling()).map_err(|e| e.to_string())?;
    let h_c = critical_field(&params).ok();
    let report_fp = fixed_points(h, &params);

    let mut notes = Vec::new();
    if !params.is_supercritical() {
        notes.push(format!(
            "subcritical: theta = {} <= 1/d, psi has a single fixed point at every field",
            params.theta()
        ));
    }

    let config = CriticalConfig {
        params: ParamsEcho::from(&params),
        h_request: args.h.clone(),
        h: fmt_f64(h),
    };
    let results = CriticalResults {
        beta_c: fmt_f64(beta_c),
        h_c: fmt_opt(h_c),
        subcritical: !params.is_supercritical(),
        case: case_name(report_fp.case).to_string(),
        fixed_points: report_fp
            .points
            .iter()
            .map(|fp| FixedPointRow {
                b: fmt_f64(fp.value),
                psi_prime: fmt_f64(fp.psi_prime),
                stability: stability_name(fp.stability).to_string(),
            })
            .collect(),
    };

    let csv_rows: Vec<Vec<String>> = report_fp
        .points
        .iter()
        .map(|fp| {
            vec![
                params.d().to_string(),
                fmt_f64(params.theta()),
                fmt_f64(h),
                case_name(report_fp.case).to_string(),
                fmt_f64(beta_c),
                h_c.map(fmt_f64).unwrap_or_default(),
                fmt_f64(fp.value),
                fmt_f64(fp.psi_prime),
                stability_name(fp.stability).to_string(),
            ]
        })
        .collect();
    let csv = to_csv(
        &["d", "theta", "h", "case", "beta_c", "h_c", "b", "psi_prime", "stability"],
        &csv_rows,
    );

    let report = Report::new("critical", config, results, notes);
    emit(&args.output, report.to_json(), csv)
}

pub(crate) fn classify(args: ClassifyArgs) -> CmdResult {
    let params = args.model.params()?;
    let max_depth = args.schedule.depths.iter().copied().max().unwrap_or(0);
    let (profile, profile_echo) = args.profile.build(&params, max_depth)?;
    let config = args.schedule.to_config();

    let verdict = in_pool(args.output.workers, || {
        classifier::classify(&profile, &params, &config)
    })?
    .map_err(|e| e.to_string())?;

    let config_echo = ClassifyConfigEcho {
        params: ParamsEcho::from(&params),
        profile: profile_echo,
        depths: config.depths.clone(),
        probes: config.probes.clone(),
        tau_gap: fmt_f64(config.tau_gap),
        tau_uniq: fmt_f64(config.tau_uniq),
        condition_horizons: config.condition_horizons.clone(),
    };
    let results = ClassifyResults {
        verdict: verdict_name(verdict.verdict),
        route: verdict.route.to_string(),
        reason: verdict.reason.clone(),
        b_minus_ref: fmt_opt(verdict.b_minus_ref),
        b_plus_ref: fmt_opt(verdict.b_plus_ref),
        gap_trace: gap_rows(&verdict.gap_trace),
        condition: verdict.condition.as_ref().map(condition_echo),
    };

    let csv_rows: Vec<Vec<String>> = verdict
        .gap_trace
        .iter()
        .map(|s| {
            vec![
                s.probe.to_string(),
                s.depth.to_string(),
                fmt_f64(s.b_plus),
                fmt_f64(s.b_minus),
                fmt_f64(s.gap),
                verdict_name(verdict.verdict),
                verdict.route.to_string(),
            ]
        })
        .collect();
    let csv = to_csv(
        &["probe", "depth", "b_plus", "b_minus", "gap", "verdict", "route"],
        &csv_rows,
    );

    let notes = vec![verdict.reason];
    let report = Report::new("classify", config_echo, results, notes);
    emit(&args.output, report.to_json(), csv)
}

pub(crate) fn sweep_gamma(args: SweepGammaArgs) -> CmdResult {
    if args.gammas.is_empty() {
        return Err("the gamma grid must not be empty".into());
    }
    let params = args.model.params()?;
    let config = args.schedule.to_config();
    let mut gammas = args.gammas.clone();
    gammas.sort_by(|a, b| a.partial_cmp(b).expect("finite gammas"));

    let verdicts = in_pool(args.output.workers, || {
        use rayon::prelude::*;
        gammas
            .par_iter()
            .map(|&gamma| {
                let family = EpsilonFamily::power_law(gamma)?;
                let profile = FieldProfile::CriticalMinusPerturbation(family);
                classifier::classify(&profile, &params, &config)
            })
            .collect::<Result<Vec<_>, _>>()
    })?
    .map_err(|e| e.to_string())?;

    let last_depth = *config.depths.last().expect("validated");
    let rows: Vec<SweepRow> = gammas
        .iter()
        .zip(&verdicts)
        .map(|(&gamma, v)| SweepRow {
            gamma: fmt_f64(gamma),
            verdict: verdict_name(v.verdict),
            route: v.route.to_string(),
            condition_sum_final: v
                .condition
                .as_ref()
                .and_then(|c| c.sums.last())
                .map(|&(n, s)| (n, fmt_f64(s))),
            final_gaps: config
                .probes
                .iter()
                .map(|&probe| {
                    let gap = v
                        .gap_trace
                        .iter()
                        .find(|s| s.probe == probe && s.depth == last_depth)
                        .map(|s| s.gap)
                        .unwrap_or(f64::NAN);
                    (probe, fmt_f64(gap))
                })
                .collect(),
            gap_trace: gap_rows(&v.gap_trace),
        })
        .collect();

    let mut csv_rows = Vec::new();
    for (row, v) in rows.iter().zip(&verdicts) {
        let s_final = row
            .condition_sum_final
            .as_ref()
            .map(|(_, s)| s.clone())
            .unwrap_or_default();
        for s in &v.gap_trace {
            csv_rows.push(vec![
                row.gamma.clone(),
                s.probe.to_string(),
                s.depth.to_string(),
                fmt_f64(s.b_plus),
                fmt_f64(s.b_minus),
                fmt_f64(s.gap),
                s_final.clone(),
                row.verdict.clone(),
                row.route.clone(),
            ]);
        }
    }
    let csv = to_csv(
        &["gamma", "probe", "depth", "b_plus", "b_minus", "gap", "s_final", "verdict", "route"],
        &csv_rows,
    );

    let config_echo = SweepConfigEcho {
        params: ParamsEcho::from(&params),
        gammas: gammas.iter().copied().map(fmt_f64).collect(),
        depths: config.depths.clone(),
        probes: config.probes.clone(),
        tau_gap: fmt_f64(config.tau_gap),
        tau_uniq: fmt_f64(config.tau_uniq),
        condition_horizons: config.condition_horizons.clone(),
    };
    let notes = rows
        .iter()
        .map(|r| format!("gamma {}: {} ({})", r.gamma, r.verdict, r.route))
        .collect();
    let report = Report::new("sweep-gamma", config_echo, SweepResults { rows }, notes);
    emit(&args.output, report.to_json(), csv)
}

pub(crate) fn iterate(args: IterateArgs) -> CmdResult {
    let params = args.model.params()?;
    let (profile, profile_echo) = args.profile.build(&params, args.from)?;

    let seed = match args.seed.as_str() {
        "plus" => ExtendedReal::Finite(
            critical_pair(&params).map_err(|e| e.to_string())?.1,
        ),
        "minus" => ExtendedReal::Finite(
            critical_pair(&params).map_err(|e| e.to_string())?.0,
        ),
        "inf" => ExtendedReal::PlusInf,
        "minus-inf" => ExtendedReal::MinusInf,
        other => ExtendedReal::Finite(other.parse::<f64>().map_err(|_| {
            format!("invalid seed '{other}' (expected plus|minus|inf|minus-inf|NUMBER)")
        })?),
    };

    let trace = iterate_backward(&profile, &params, args.from, args.to, seed)
        .map_err(|e| e.to_string())?;
    let residual = trace.max_relative_residual().map_err(|e| e.to_string())?;

    let seed_echo = match seed {
        ExtendedReal::Finite(v) => fmt_f64(v),
        ExtendedReal::PlusInf => "inf".to_string(),
        ExtendedReal::MinusInf => "minus-inf".to_string(),
    };
    let values: Vec<(usize, String)> = (args.to..=args.from)
        .map(|depth| (depth, fmt_f64(trace.value_at(depth))))
        .collect();

    let csv_rows: Vec<Vec<String>> = values
        .iter()
        .map(|(depth, b)| vec![depth.to_string(), b.clone()])
        .collect();
    let csv = to_csv(&["depth", "b"], &csv_rows);

    let config = IterateConfig {
        params: ParamsEcho::from(&params),
        profile: profile_echo,
        from_depth: args.from,
        to_depth: args.to,
        seed: seed_echo,
    };
    let results = IterateResults {
        values,
        max_relative_residual: fmt_f64(residual),
    };
    let report = Report::new("iterate", config, results, Vec::new());
    emit(&args.output, report.to_json(), csv)
}

pub(crate) fn condition_sum(args: ConditionSumArgs) -> CmdResult {
    if args.n == 0 {
        return Err("--n must be at least 1".into());
    }
    let pad_to = args.n.max(args.horizons.iter().copied().max().unwrap_or(0));
    let (family, family_echo) = args.profile.build_family(pad_to)?;

    let report_sum =
        perturbation::condition_sum(&family, args.n, args.tail_from).map_err(|e| e.to_string())?;
    let classification = perturbation::classify_condition(
        &family,
        &args.horizons,
        &perturbation::ConditionClassifierConfig::default(),
    )
    .map_err(|e| e.to_string())?;

    let config = ConditionSumConfig {
        family: family_echo,
        horizon: args.n,
        tail_from: args.tail_from,
        horizons: args.horizons.clone(),
    };
    let echo = condition_echo(&classification);
    let csv = to_csv(
        &["n", "s_n", "lower", "upper", "tail_from", "tail_sum", "verdict", "numeric_verdict", "analytic_verdict"],
        &[vec![
            args.n.to_string(),
            fmt_f64(report_sum.sum),
            fmt_f64(report_sum.lower_bound),
            fmt_f64(report_sum.upper_bound),
            args.tail_from.to_string(),
            fmt_f64(report_sum.tail_sum),
            echo.verdict.clone(),
            echo.numeric_verdict.clone(),
            echo.analytic_verdict.clone().unwrap_or_default(),
        ]],
    );
    let results = ConditionSumResults {
        sum: fmt_f64(report_sum.sum),
        lower_bound: fmt_f64(report_sum.lower_bound),
        upper_bound: fmt_f64(report_sum.upper_bound),
        tail_sum: fmt_f64(report_sum.tail_sum),
        classification: echo,
    };
    let report = Report::new("condition-sum", config, results, Vec::new());
    emit(&args.output, report.to_json(), csv)
}

struct VerifyCase {
    d: u32,
    depth: u32,
    beta: f64,
    boundary: f64,
    profile: String,
    fields: Vec<f64>,
}

fn verify_grid_cases() -> Result<Vec<VerifyCase>, String> {
    let mut cases = Vec::new();
    for d in [2u32, 3] {
        for depth in [2u32, 3] {
            let geometry = TreeGeometry::new(d, depth).map_err(|e| e.to_string())?;
            if geometry.total_vertices() > oracle::VERTEX_CAP {
                continue;
            }
            for beta in [0.3, 0.6, 1.2] {
                let params = ModelParams::new(d, 1.0, beta).map_err(|e| e.to_string())?;
                let mut prefixes = vec![("homogeneous-zero".to_string(), vec![0.0; depth as usize - 1])];
                if params.is_supercritical() {
                    let profile = FieldProfile::CriticalMinusPerturbation(
                        EpsilonFamily::power_law(2.0).map_err(|e| e.to_string())?,
                    );
                    let fields = profile
                        .prefix(&params, depth as usize - 1)
                        .map_err(|e| e.to_string())?;
                    prefixes.push(("critical-minus-gamma2".to_string(), fields));
                }
                for (name, fields) in prefixes {
                    for boundary in [-1.0, 0.0, 0.5, 2.0] {
                        cases.push(VerifyCase {
                            d,
                            depth,
                            beta,
                            boundary,
                            profile: name.clone(),
                            fields: fields.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(cases)
}

pub(crate) fn verify(args: VerifyArgs) -> CmdResult {
    let (mode, cases) = if let Some(depth) = args.depth {
        let d = args.d.unwrap_or(2);
        let beta = args.beta.ok_or("single-case verify needs --beta")?;
        let boundary = args.bn.ok_or("single-case verify needs --bn")?;
        let params = ModelParams::new(d, 1.0, beta).map_err(|e| e.to_string())?;
        let (name, fields) = match args.gamma {
            Some(gamma) => {
                let profile = FieldProfile::CriticalMinusPerturbation(
                    EpsilonFamily::power_law(gamma).map_err(|e| e.to_string())?,
                );
                (
                    format!("critical-minus-gamma{gamma}"),
                    profile
                        .prefix(&params, depth as usize - 1)
                        .map_err(|e| e.to_string())?,
                )
            }
            None => ("homogeneous-zero".to_string(), vec![0.0; depth as usize - 1]),
        };
        (
            "single",
            vec![VerifyCase { d, depth, beta, boundary, profile: name, fields }],
        )
    } else {
        if args.beta.is_some() || args.bn.is_some() || args.gamma.is_some() || args.d.is_some() {
            return Err("grid mode takes no case flags; pass --depth for a single case".into());
        }
        ("grid", verify_grid_cases()?)
    };

    let reports = in_pool(args.output.workers, || {
        cases
            .iter()
            .map(|case| {
                let geometry = TreeGeometry::new(case.d, case.depth)?;
                let params = ModelParams::new(case.d, 1.0, case.beta)?;
                oracle::verify_compatibility(
                    &geometry,
                    &params,
                    &case.fields,
                    case.boundary,
                    args.root_field,
                )
            })
            .collect::<Result<Vec<_>, _>>()
    })?
    .map_err(|e| e.to_string())?;

    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (case, rep) in cases.iter().zip(&reports) {
        let pass = rep.max_residual <= VERIFY_TOL;
        max_residual = max_residual.max(rep.max_residual);
        rows.push(VerifyCaseRow {
            d: case.d,
            depth: case.depth,
            beta: fmt_f64(case.beta),
            boundary: fmt_f64(case.boundary),
            profile: case.profile.clone(),
            derived_boundary: fmt_f64(rep.derived_boundary),
            residual: fmt_f64(rep.max_residual),
            pass,
        });
        csv_rows.push(vec![
            case.d.to_string(),
            case.depth.to_string(),
            fmt_f64(case.beta),
            fmt_f64(case.boundary),
            case.profile.clone(),
            fmt_f64(rep.derived_boundary),
            fmt_f64(rep.max_residual),
            pass.to_string(),
        ]);
    }
    let all_pass = rows.iter().all(|r| r.pass);

    let config = VerifyConfig {
        mode: mode.to_string(),
        d: args.depth.map(|_| args.d.unwrap_or(2)),
        depth: args.depth,
        beta: args.beta.map(fmt_f64),
        boundary: args.bn.map(fmt_f64),
        root_field: fmt_f64(args.root_field),
        residual_tolerance: fmt_f64(VERIFY_TOL),
    };
    let results = VerifyResults {
        cases: rows,
        max_residual: fmt_f64(max_residual),
        all_pass,
    };
    let notes = vec![if all_pass {
        format!("all {} residuals within {VERIFY_TOL:e}", cases.len())
    } else {
        format!("residual gate {VERIFY_TOL:e} exceeded; max {max_residual:e}")
    }];
    let csv = to_csv(
        &["d", "depth", "beta", "bn", "profile", "derived_boundary", "residual", "pass"],
        &csv_rows,
    );
    let report = Report::new("verify", config, results, notes);
    emit(&args.output, report.to_json(), csv)?;
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
