//! Suite execution: builds pipelines per kernel, fans verification tasks out
//! over a fixed-size worker pool, and aggregates reports in task order so
//! reruns are byte-identical.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use nonlocal_core::corpus::{self, SplitMix64};
use nonlocal_core::error::CoreError;
use nonlocal_core::fields::{
    bbm_limit_check, nonlocal_seminorm, GridFunction, SeminormBudget, Smoothness,
};
use nonlocal_core::kernels::{w_profile, Profile};
use nonlocal_core::levelset::{
    dyadic_decompose, lemma_gene_convex_check, lemma_young_discrete_check, orlicz_upper_bound,
    proof_lower_bound,
};
use nonlocal_core::orlicz::luxemburg_norm;
use nonlocal_core::verify::{
    build_pipeline, verify_fractional_gns, verify_friedrichs, verify_gns, verify_poincare,
    InequalityReport, PipelineKind, Strategy, Verdict,
};
use nonlocal_core::young::{critical_young, growth_theta, FractionalParams, YoungFunction};

use crate::config::{ExperimentConfig, FunctionSpec, KernelSpec, Suite};

/// Input-level failure: maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutcome {
    /// (instance id, report), in deterministic order
    pub reports: Vec<(String, InequalityReport)>,
    /// (file name under curves/, content)
    pub curves: Vec<(String, String)>,
}

impl SuiteOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|(_, r)| r.passed())
    }

    fn extend(&mut self, other: SuiteOutcome) {
        self.reports.extend(other.reports);
        self.curves.extend(other.curves);
    }
}

/// Fixed-order parallel map: tasks grab indices from a counter and write
/// results by index.
fn parallel_map<T, F>(items: Vec<F>, workers: usize) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if workers <= 1 || items.len() <= 1 {
        return items.into_iter().map(|f| f()).collect();
    }
    let n = items.len();
    let tasks: Vec<Mutex<Option<F>>> = items.into_iter().map(|f| Mutex::new(Some(f))).collect();
    let results: Vec<Mutex<Option<T>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let counter = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(n) {
            scope.spawn(|| loop {
                let i = counter.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let task = tasks[i].lock().unwrap().take().unwrap();
                *results[i].lock().unwrap() = Some(task());
            });
        }
    });
    results.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
}

fn apply_tolerance(mut report: InequalityReport, tolerance: Option<f64>) -> InequalityReport {
    if let Some(tol) = tolerance {
        if report.pass != Verdict::Indeterminate {
            report.tolerance = tol;
            report.pass = if report.margin >= -tol { Verdict::Pass } else { Verdict::Fail };
        }
    }
    report
}

/// Resolve a kernel's verification strategy: explicit choice, or direct with
/// fallback to per-component (max-type growth failure) / minorant.
pub fn resolve_pipeline(
    spec: &KernelSpec,
    cfg: &ExperimentConfig,
) -> Result<(PipelineKind, Strategy), CoreError> {
    if let Some(strategy) = spec.strategy {
        return Ok((build_pipeline(&spec.kernel, cfg.mode, strategy)?, strategy));
    }
    match build_pipeline(&spec.kernel, cfg.mode, Strategy::Direct) {
        Ok(pipe) => {
            if pipe.phi().require_convex().is_ok() {
                Ok((pipe, Strategy::Direct))
            } else if spec.kernel.fractional_components().is_some() {
                Ok((
                    build_pipeline(&spec.kernel, cfg.mode, Strategy::PerComponent)?,
                    Strategy::PerComponent,
                ))
            } else {
                Ok((build_pipeline(&spec.kernel, cfg.mode, Strategy::Minorant)?, Strategy::Minorant))
            }
        }
        Err(CoreError::GrowthFails { .. }) | Err(CoreError::NotConvex { .. }) => {
            if spec.kernel.fractional_components().is_some() {
                Ok((
                    build_pipeline(&spec.kernel, cfg.mode, Strategy::PerComponent)?,
                    Strategy::PerComponent,
                ))
            } else {
                Ok((build_pipeline(&spec.kernel, cfg.mode, Strategy::Minorant)?, Strategy::Minorant))
            }
        }
        Err(e) => Err(e),
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<SuiteOutcome, InputError> {
    let mut outcome = SuiteOutcome::default();
    let suites: Vec<Suite> = match cfg.suite {
        Suite::All => {
            let mut v = vec![
                Suite::Gns,
                Suite::FractionalGns,
                Suite::Poincare,
                Suite::Friedrichs,
                Suite::Bbm,
                Suite::Lemmas,
            ];
            if !cfg.inverse.is_empty() {
                v.push(Suite::Inverse);
            }
            v
        }
        s => vec![s],
    };
    for suite in suites {
        let part = match suite {
            Suite::Gns => run_gns(cfg),
            Suite::FractionalGns => run_fractional_gns(cfg),
            Suite::Poincare => run_poincare(cfg),
            Suite::Friedrichs => run_friedrichs(cfg),
            Suite::Bbm => run_bbm(cfg),
            Suite::Lemmas => run_lemmas(cfg),
            Suite::Inverse => run_inverse(cfg)?,
            Suite::All => unreachable!(),
        };
        outcome.extend(part);
    }
    Ok(outcome)
}

fn budget() -> SeminormBudget {
    SeminormBudget::default()
}

fn run_gns(cfg: &ExperimentConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::default();
    let mut margin_rows = vec!["kernel,function,t,margin,pass".to_string()];
    for kspec in &cfg.kernels {
        let pipeline = resolve_pipeline(kspec, cfg);
        match pipeline {
            Err(err) => {
                for fspec in &cfg.functions {
                    for &t in &cfg.bases {
                        let id = format!("gns/{}/{}/t={t}", kspec.name, fspec.name);
                        let case = format!("kernel={} function={} t={t}", kspec.name, fspec.name);
                        outcome
                            .reports
                            .push((id, InequalityReport::indeterminate("gns", case, &err)));
                    }
                }
            }
            Ok((pipe, _strategy)) => {
                let cases: Vec<(&FunctionSpec, f64)> = cfg
                    .functions
                    .iter()
                    .flat_map(|fspec| cfg.bases.iter().map(move |&t| (fspec, t)))
                    .collect();
                let tasks: Vec<_> = cases
                    .iter()
                    .map(|&(fspec, t)| {
                        let pipe = &pipe;
                        let tolerance = cfg.tolerance;
                        move || -> InequalityReport {
                            match verify_gns(&fspec.field, pipe, t, budget()) {
                                Ok(r) => apply_tolerance(r, tolerance),
                                Err(e) => InequalityReport::indeterminate(
                                    "gns",
                                    format!("kernel={} function={} t={t}", kspec.name, fspec.name),
                                    &e,
                                ),
                            }
                        }
                    })
                    .collect();
                let results = parallel_map(tasks, cfg.workers);
                for ((fspec, t), report) in cases.iter().zip(results) {
                    margin_rows.push(format!(
                        "{},{},{t},{:.12e},{}",
                        kspec.name,
                        fspec.name,
                        report.margin,
                        report.passed()
                    ));
                    outcome
                        .reports
                        .push((format!("gns/{}/{}/t={t}", kspec.name, fspec.name), report));
                }
            }
        }
    }
    outcome.curves.push(("margins_gns.csv".into(), margin_rows.join("\n") + "\n"));
    outcome
}

fn fractional_orders(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut out: Vec<f64> = cfg
        .kernels
        .iter()
        .filter_map(|k| match k.kernel.profile {
            Profile::Fractional { s } => Some(s),
            _ => None,
        })
        .collect();
    if out.is_empty() {
        out = vec![0.125, 0.25];
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

fn run_fractional_gns(cfg: &ExperimentConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::default();
    let mut margin_rows = vec!["s,function,lambda,relative_margin,pass".to_string()];
    let lambdas = [0.5, 1.0, 2.0];
    for &s in &fractional_orders(cfg) {
        for fspec in &cfg.functions {
            let mut relative = Vec::new();
            for &lambda in &lambdas {
                let field = if lambda == 1.0 {
                    Some(fspec.field.clone())
                } else if let Some(shape) = &fspec.shape {
                    corpus::dilated(shape, lambda, cfg.resolution)
                } else {
                    None // CSV data cannot be resampled analytically
                };
                let Some(field) = field else { continue };
                let id = format!("fractional-gns/s={s}/{}/λ={lambda}", fspec.name);
                let report = match verify_fractional_gns(&field, s, 2.0, budget()) {
                    Ok(r) => apply_tolerance(r, cfg.tolerance),
                    Err(e) => InequalityReport::indeterminate(
                        "fractional-gns",
                        format!("s={s} function={} λ={lambda}", fspec.name),
                        &e,
                    ),
                };
                if report.pass != Verdict::Indeterminate && report.rhs > 0.0 {
                    relative.push(report.margin / report.rhs);
                }
                margin_rows.push(format!(
                    "{s},{},{lambda},{:.12e},{}",
                    fspec.name,
                    if report.rhs > 0.0 { report.margin / report.rhs } else { f64::NAN },
                    report.passed()
                ));
                outcome.reports.push((id, report));
            }
            if relative.len() == lambdas.len() {
                let drift = relative
                    .iter()
                    .map(|m| (m - relative[1]).abs())
                    .fold(0.0f64, f64::max);
                let id = format!("fractional-gns-dilation/s={s}/{}", fspec.name);
                let report = InequalityReport {
                    id: "fractional-gns-dilation".into(),
                    case: format!("s={s} function={} λ∈{{1/2,1,2}}", fspec.name),
                    lhs: drift,
                    rhs: 0.01,
                    constant: f64::NAN,
                    margin: 0.01 - drift,
                    tolerance: 0.0,
                    pass: if drift <= 0.01 { Verdict::Pass } else { Verdict::Fail },
                    notes: "worst |margin/rhs − margin₁/rhs₁| across dilations".into(),
                };
                outcome.reports.push((id, report));
            }
        }
    }
    outcome
        .curves
        .push(("margins_fractional_gns.csv".into(), margin_rows.join("\n") + "\n"));
    outcome
}

fn poincare_fixtures(cfg: &ExperimentConfig) -> Vec<FunctionSpec> {
    // u(x) = x on Ω plus the configured functions
    let (lo, hi) = match cfg.omega.components.first() {
        Some(nonlocal_core::kernels::SetComponent::Interval { a, b }) => (*a, *b),
        _ => (0.0, 1.0),
    };
    let linear = GridFunction::sample_1d(
        move |x| if x > lo && x < hi { x } else { 0.0 },
        lo - 1.0,
        hi + 1.0,
        cfg.resolution,
        Smoothness::PiecewiseLinear,
    );
    let mut out = vec![FunctionSpec { name: "linear".into(), shape: None, field: linear }];
    out.extend(cfg.functions.iter().cloned());
    out
}

fn run_poincare(cfg: &ExperimentConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::default();
    for kspec in &cfg.kernels {
        if kspec.kernel.dimension != cfg.omega.dimension {
            continue;
        }
        for fspec in poincare_fixtures(cfg) {
            let id = format!("poincare/{}/{}", kspec.name, fspec.name);
            let report = match verify_poincare(&fspec.field, &cfg.omega, &kspec.kernel, budget()) {
                Ok(r) => apply_tolerance(r, cfg.tolerance),
                Err(e) => InequalityReport::indeterminate(
                    "poincare",
                    format!("kernel={} function={}", kspec.name, fspec.name),
                    &e,
                ),
            };
            outcome.reports.push((id, report));
        }
    }
    outcome
}

fn friedrichs_fixtures(cfg: &ExperimentConfig) -> Vec<FunctionSpec> {
    let (lo, hi) = match cfg.omega.components.first() {
        Some(nonlocal_core::kernels::SetComponent::Interval { a, b }) => (*a, *b),
        _ => (0.0, 1.0),
    };
    let mid = 0.5 * (lo + hi);
    let width = hi - lo;
    let hat = GridFunction::sample_1d(
        move |x| (1.0 - (4.0 / width * (x - mid)).abs()).max(0.0),
        lo - 1.0,
        hi + 1.0,
        cfg.resolution,
        Smoothness::PiecewiseLinear,
    );
    let third = width / 3.0;
    let indicator = GridFunction::sample_1d(
        move |x| {
            if x > mid - third / 2.0 && x < mid + third / 2.0 {
                1.0
            } else {
                0.0
            }
        },
        lo - 1.0,
        hi + 1.0,
        cfg.resolution,
        Smoothness::Jump,
    );
    let mut out = vec![
        FunctionSpec { name: "inner-hat".into(), shape: None, field: hat },
        FunctionSpec { name: "inner-indicator".into(), shape: None, field: indicator },
    ];
    // configured functions join when they vanish outside Ω
    for fspec in &cfg.functions {
        let u = &fspec.field;
        let mut supported = true;
        for i in 0..u.shape[0] {
            for j in 0..u.shape[1] {
                let x = u.center(i, j);
                if u.values[i * u.shape[1] + j] != 0.0
                    && !cfg.omega.contains(&x[..u.dimension as usize])
                {
                    supported = false;
                }
            }
        }
        if supported {
            out.push(fspec.clone());
        }
    }
    out
}

fn run_friedrichs(cfg: &ExperimentConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::default();
    for kspec in &cfg.kernels {
        if kspec.kernel.dimension != cfg.omega.dimension {
            continue;
        }
        for fspec in friedrichs_fixtures(cfg) {
            let id = format!("friedrichs/{}/{}", kspec.name, fspec.name);
            let report =
                match verify_friedrichs(&fspec.field, &cfg.omega, &kspec.kernel, budget()) {
                    Ok(r) => apply_tolerance(r, cfg.tolerance),
                    Err(e) => InequalityReport::indeterminate(
                        "friedrichs",
                        format!("kernel={} function={}", kspec.name, fspec.name),
                        &e,
                    ),
                };
            outcome.reports.push((id, report));
        }
    }
    outcome
}

fn run_bbm(cfg: &ExperimentConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::default();
    let s_list = [0.90, 0.95, 0.99];
    let mut rows = vec!["function,s,weighted,ratio".to_string()];
    for fspec in &cfg.functions {
        if fspec.field.smoothness == Smoothness::Jump {
            continue;
        }
        let id = format!("bbm/{}", fspec.name);
        match bbm_limit_check(&fspec.field, 2.0, &s_list, budget()) {
            Ok(report) => {
                for (s, weighted, ratio) in &report.entries {
                    rows.push(format!("{},{s},{weighted:.12e},{ratio:.12e}", fspec.name));
                }
                let deviations: Vec<f64> =
                    report.entries.iter().map(|e| (e.2 - 1.0).abs()).collect();
                let monotone = deviations.windows(2).all(|w| w[1] <= w[0]);
                let last = deviations.last().copied().unwrap_or(f64::INFINITY);
                let lhs = if monotone { last } else { f64::INFINITY };
                let rep = InequalityReport {
                    id: "bbm".into(),
                    case: format!(
                        "function={} s∈{{0.90,0.95,0.99}} target={:.6e}",
                        fspec.name, report.target
                    ),
                    lhs,
                    rhs: 0.10,
                    constant: report.target,
                    margin: 0.10 - lhs,
                    tolerance: 0.0,
                    pass: if lhs <= 0.10 { Verdict::Pass } else { Verdict::Fail },
                    notes: if monotone {
                        format!("|ratio−1| at s=0.99 is {last:.4}; approach is monotone")
                    } else {
                        "ratio sequence is not monotone toward 1".into()
                    },
                };
                outcome.reports.push((id, rep));
            }
            Err(e) => {
                outcome.reports.push((
                    id,
                    InequalityReport::indeterminate("bbm", format!("function={}", fspec.name), &e),
                ));
            }
        }
    }
    outcome.curves.push(("margins_bbm.csv".into(), rows.join("\n") + "\n"));
    outcome
}

fn run_lemmas(cfg: &ExperimentConfig) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::default();
    // proof-chain certificates per (kernel, function)
    for kspec in &cfg.kernels {
        let prepared = w_profile(&kspec.kernel, cfg.mode).and_then(|w| {
            let kappa = match cfg.mode {
                nonlocal_core::kernels::WMode::TailMass => {
                    kspec.kernel.almost_decreasing_kappa()?
                }
                nonlocal_core::kernels::WMode::NuSharp => 1.0,
            };
            let raw = critical_young(&w)?;
            let phi = if raw.possibly_nonconvex
                || matches!(kspec.strategy, Some(Strategy::Minorant))
            {
                raw.combine_minorant(&raw)?
            } else {
                raw
            };
            Ok((w, kappa, phi))
        });
        match prepared {
            Err(e) => {
                for fspec in &cfg.functions {
                    let id = format!("proof-chain/{}/{}", kspec.name, fspec.name);
                    outcome.reports.push((
                        id,
                        InequalityReport::indeterminate(
                            "proof-chain",
                            format!("kernel={} function={}", kspec.name, fspec.name),
                            &e,
                        ),
                    ));
                }
            }
            Ok((w, kappa, phi)) => {
                for fspec in &cfg.functions {
                    let p = kspec.kernel.exponent;
                    let base = cfg.bases.first().copied().unwrap_or(2.0);
                    let case = format!(
                        "kernel={} function={} t={base}",
                        kspec.name, fspec.name
                    );
                    let dec = match dyadic_decompose(&fspec.field.abs(), base) {
                        Ok(d) => d,
                        Err(e) => {
                            outcome.reports.push((
                                format!("proof-chain/{}/{}", kspec.name, fspec.name),
                                InequalityReport::indeterminate("proof-chain", case, &e),
                            ));
                            continue;
                        }
                    };
                    let semi = match nonlocal_seminorm(&fspec.field, &kspec.kernel, budget()) {
                        Ok(s) => s,
                        Err(e) => {
                            outcome.reports.push((
                                format!("proof-chain/{}/{}", kspec.name, fspec.name),
                                InequalityReport::indeterminate("proof-chain", case, &e),
                            ));
                            continue;
                        }
                    };
                    let lower = proof_lower_bound(&dec, &w, kappa);
                    let tol = (2.0 * semi.error_estimate).max(1e-9 * semi.value.max(1.0));
                    let lower_report = InequalityReport {
                        id: "proof-lower-bound".into(),
                        case: case.clone(),
                        lhs: lower,
                        rhs: semi.value,
                        constant: kappa,
                        margin: semi.value - lower,
                        tolerance: tol,
                        pass: if semi.value - lower >= -tol { Verdict::Pass } else { Verdict::Fail },
                        notes: "2κ²·C_p(t)·Σ t^{pk}(a_{k+1}/a_k)w^p(a_k) ≤ |u|^p".into(),
                    };
                    outcome.reports.push((
                        format!("proof-lower/{}/{}", kspec.name, fspec.name),
                        apply_tolerance(lower_report, cfg.tolerance),
                    ));
                    match luxemburg_norm(&fspec.field, &phi) {
                        Ok(lux) => {
                            let upper = orlicz_upper_bound(&dec, &phi, p);
                            let lux_p = lux.value.powf(p);
                            let tol = (2.0 * p * lux.value.powf(p - 1.0) * lux.error_estimate)
                                .max(1e-9 * upper.max(1.0));
                            let upper_report = InequalityReport {
                                id: "orlicz-upper-bound".into(),
                                case: case.clone(),
                                lhs: lux_p,
                                rhs: upper,
                                constant: base.powf(p),
                                margin: upper - lux_p,
                                tolerance: tol,
                                pass: if upper - lux_p >= -tol {
                                    Verdict::Pass
                                } else {
                                    Verdict::Fail
                                },
                                notes: "‖u‖_φ^p ≤ t^p·Σ t^{pk}(1/φ⁻¹(1/d_k))^p".into(),
                            };
                            outcome.reports.push((
                                format!("orlicz-upper/{}/{}", kspec.name, fspec.name),
                                apply_tolerance(upper_report, cfg.tolerance),
                            ));
                        }
                        Err(e) => {
                            outcome.reports.push((
                                format!("orlicz-upper/{}/{}", kspec.name, fspec.name),
                                InequalityReport::indeterminate("orlicz-upper-bound", case.clone(), &e),
                            ));
                        }
                    }
                }
            }
        }
    }
    // randomized lemma corpus
    let mut rng = SplitMix64::new(cfg.seed);
    let frac = FractionalParams::new(0.25, 2.0, 1).expect("fixture");
    let frac_phi = frac.critical_young().expect("fixture");
    let minorant = YoungFunction::power(1.0, 8.0 / 3.0, 2.0)
        .unwrap()
        .combine_minorant(&YoungFunction::power(1.0, 4.0, 2.0).unwrap())
        .unwrap();
    let minorant_theta = growth_theta(&minorant).expect("fixture θ");
    let mut worst_gene = f64::INFINITY;
    let mut worst_young = f64::INFINITY;
    let mut worst_eq = 0.0f64;
    let count = 100;
    for i in 0..count {
        let (k0, a) = corpus::random_admissible_sequence(&mut rng);
        let t_weight = rng.uniform(2.0, 16.0);
        let (phi, theta) =
            if i % 2 == 0 { (&frac_phi, frac.theta()) } else { (&minorant, minorant_theta) };
        let gene = lemma_gene_convex_check(&a, k0, phi, 2.0, theta, t_weight).expect("admissible");
        worst_gene = worst_gene.min(if gene.rhs > 0.0 { gene.margin / gene.rhs } else { 0.0 });
        let q = rng.uniform(1.0, 4.0);
        let young = lemma_young_discrete_check(&a, k0, q, t_weight).expect("admissible");
        worst_young = worst_young.min(if young.rhs > 0.0 { young.margin / young.rhs } else { 0.0 });
        let eq = lemma_young_discrete_check(&a, k0, 1.0, t_weight).expect("admissible");
        if eq.lhs > 0.0 {
            worst_eq = worst_eq.max((eq.lhs - eq.rhs).abs() / eq.lhs);
        }
    }
    for (id, lhs, rhs, note) in [
        (
            "lemma-gene-convex",
            -worst_gene,
            0.0,
            format!("worst relative margin over {count} sequences"),
        ),
        (
            "lemma-young-discrete",
            -worst_young,
            0.0,
            format!("worst relative margin over {count} sequences"),
        ),
        ("lemma-young-discrete-eq", worst_eq, 1e-9, "worst |lhs−rhs|/lhs at q = 1".to_string()),
    ] {
        let margin = rhs - lhs;
        outcome.reports.push((
            format!("lemmas/{id}"),
            InequalityReport {
                id: id.into(),
                case: format!("seed={}", cfg.seed),
                lhs,
                rhs,
                constant: f64::NAN,
                margin,
                tolerance: 1e-12,
                pass: if margin >= -1e-12 { Verdict::Pass } else { Verdict::Fail },
                notes: note,
            },
        ));
    }
    outcome
}

fn run_inverse(cfg: &ExperimentConfig) -> Result<SuiteOutcome, InputError> {
    let mut outcome = SuiteOutcome::default();
    let specs = if cfg.inverse.is_empty() {
        vec![crate::config::InverseSpec { c: 32.0, q: 4.0, p: 2.0, d: 1 }]
    } else {
        cfg.inverse.clone()
    };
    for spec in specs {
        match nonlocal_core::verify::verify_inverse_problem(spec.q, spec.c, spec.p, spec.d) {
            Ok(report) => {
                let id = format!("inverse/c={}/q={}", spec.c, spec.q);
                outcome.reports.push((id, report));
            }
            Err(e @ CoreError::Hypothesis(_)) => {
                return Err(InputError(format!(
                    "inverse problem (c={}, q={}, p={}, d={}): {e}",
                    spec.c, spec.q, spec.p, spec.d
                )));
            }
            Err(e) => {
                let id = format!("inverse/c={}/q={}", spec.c, spec.q);
                outcome.reports.push((
                    id,
                    InequalityReport::indeterminate(
                        "inverse",
                        format!("c={} q={} p={} d={}", spec.c, spec.q, spec.p, spec.d),
                        &e,
                    ),
                ));
            }
        }
    }
    Ok(outcome)
}

/// φ and w curves for every configured kernel (skipped with a note when the
/// pipeline refuses).
pub fn kernel_curves(cfg: &ExperimentConfig) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for kspec in &cfg.kernels {
        match w_profile(&kspec.kernel, cfg.mode) {
            Ok(w) => {
                let mut rows =
                    vec![format!("# w kernel={} mode={} p={}", kspec.name, cfg.mode, w.exponent)];
                rows.push("r,w".into());
                for (r, v) in w.curve.nodes() {
                    rows.push(format!("{r:.12e},{v:.12e}"));
                }
                out.push((format!("w_{}.csv", kspec.name), rows.join("\n") + "\n"));
                if let Ok(phi) = critical_young(&w) {
                    let mut buf = Vec::new();
                    phi.to_csv(&mut buf).expect("in-memory write");
                    out.push((
                        format!("phi_{}.csv", kspec.name),
                        String::from_utf8(buf).expect("utf8"),
                    ));
                }
            }
            Err(e) => {
                out.push((format!("w_{}.csv", kspec.name), format!("# unavailable: {e}\n")));
            }
        }
    }
    out
}
