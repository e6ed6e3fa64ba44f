//! End-to-end inequality verification with explicit constants, producing
//! one report per inequality instance.
//!
//! Pass tolerances couple to the quadrature error estimates: the
//! inequalities are exact in the continuum, so all slack here is
//! discretization.

use serde::Serialize;

use crate::error::CoreError;
use crate::fields::{
    nonlocal_seminorm, nonlocal_seminorm_on, GridFunction, SeminormBudget,
};
use crate::kernels::{ball_volume, kernel_from_young, w_profile, Kernel, SetSpec, TailProfile, WMode};
use crate::orlicz::luxemburg_norm;
use crate::young::{critical_young, growth_theta, FractionalParams, YoungFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

/// One verified inequality instance. Non-finite sides serialize as JSON
/// null and are explained in the notes.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub id: String,
    /// parameter echo (kernel, φ, p, d, t, set)
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: Verdict,
    pub notes: String,
}

impl InequalityReport {
    fn conclude(
        id: impl Into<String>,
        case: impl Into<String>,
        lhs: f64,
        rhs: f64,
        constant: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let margin = rhs - lhs;
        let pass = if margin.is_nan() {
            Verdict::Indeterminate
        } else if margin >= -tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        InequalityReport {
            id: id.into(),
            case: case.into(),
            lhs,
            rhs,
            constant,
            margin,
            tolerance,
            pass,
            notes: notes.into(),
        }
    }

    /// Report for an upstream failure: pass is indeterminate, the error
    /// lands in the notes.
    pub fn indeterminate(id: impl Into<String>, case: impl Into<String>, err: &CoreError) -> Self {
        InequalityReport {
            id: id.into(),
            case: case.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            constant: f64::NAN,
            margin: f64::NAN,
            tolerance: 0.0,
            pass: Verdict::Indeterminate,
            notes: err.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.pass == Verdict::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }
}

/// Θ_t = t·[2κ²·C_p(t)·φ(θ/t)]^{-1/p} with C_p(t) = (t^p−2)/(t^p−1).
/// The rearrangement mode passes κ = 1.
pub fn theta_constant(
    t: f64,
    p: f64,
    kappa: f64,
    theta: f64,
    phi: &YoungFunction,
) -> Result<f64, CoreError> {
    assert!(t >= 2.0 && theta > 0.0 && kappa > 0.0 && kappa <= 1.0);
    let phi_at = phi.eval(theta / t);
    if phi_at <= 0.0 || !phi_at.is_finite() {
        return Err(CoreError::InfiniteConstant(format!(
            "φ(θ/t) = φ({:.3e}) = {phi_at:.3e}",
            theta / t
        )));
    }
    let cp = crate::levelset::c_p(t, p);
    Ok(t * (2.0 * kappa * kappa * cp * phi_at).powf(-1.0 / p))
}

/// How a kernel is driven through the main inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// critical φ with its own certified θ
    Direct,
    /// growth condition fails for max-type kernels: verify each fractional
    /// component and combine (the constant picks up 2·c₂^{1/p})
    PerComponent,
    /// convexity/growth rectified by the greatest-convex-minorant transform
    Minorant,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Direct => write!(f, "direct"),
            Strategy::PerComponent => write!(f, "per-component"),
            Strategy::Minorant => write!(f, "minorant"),
        }
    }
}

/// A kernel with its derived verification data.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub kernel: Kernel,
    pub mode: WMode,
    pub w: TailProfile,
    pub phi: YoungFunction,
    pub theta: f64,
    pub kappa: f64,
}

fn direct_pipeline(kernel: &Kernel, mode: WMode, minorant: bool) -> Result<Pipeline, CoreError> {
    let w = w_profile(kernel, mode)?;
    let raw = critical_young(&w)?;
    let phi = if minorant { raw.combine_minorant(&raw)? } else { raw };
    let theta = growth_theta(&phi)?;
    let kappa = match mode {
        WMode::TailMass => kernel.almost_decreasing_kappa()?,
        WMode::NuSharp => 1.0,
    };
    Ok(Pipeline { kernel: kernel.clone(), mode, w, phi, theta, kappa })
}

/// A ready-to-verify kernel: either one pipeline or the per-component pair.
#[derive(Debug, Clone)]
pub enum PipelineKind {
    Direct(Pipeline),
    PerComponent {
        kernel: Kernel,
        components: Vec<Pipeline>,
        phi_max: YoungFunction,
        c2: f64,
    },
}

impl PipelineKind {
    pub fn phi(&self) -> &YoungFunction {
        match self {
            PipelineKind::Direct(p) => &p.phi,
            PipelineKind::PerComponent { phi_max, .. } => phi_max,
        }
    }

    pub fn kernel(&self) -> &Kernel {
        match self {
            PipelineKind::Direct(p) => &p.kernel,
            PipelineKind::PerComponent { kernel, .. } => kernel,
        }
    }
}

pub fn build_pipeline(
    kernel: &Kernel,
    mode: WMode,
    strategy: Strategy,
) -> Result<PipelineKind, CoreError> {
    match strategy {
        Strategy::Direct => Ok(PipelineKind::Direct(direct_pipeline(kernel, mode, false)?)),
        Strategy::Minorant => Ok(PipelineKind::Direct(direct_pipeline(kernel, mode, true)?)),
        Strategy::PerComponent => {
            let (s1, s2, c2) = kernel.fractional_components().ok_or_else(|| {
                CoreError::invalid("per-component verification needs a piecewise-fractional kernel")
            })?;
            let p = kernel.exponent;
            let d = kernel.dimension;
            let k1 = Kernel::fractional(s1, p, d);
            let k2 = Kernel::fractional(s2, p, d);
            let p1 = direct_pipeline(&k1, mode, false)?;
            let p2 = direct_pipeline(&k2, mode, false)?;
            let phi_max = p1.phi.combine_max(&p2.phi)?;
            Ok(PipelineKind::PerComponent {
                kernel: kernel.clone(),
                components: vec![p1, p2],
                phi_max,
                c2,
            })
        }
    }
}

/// ‖u‖_{L^φ} ≤ Θ_t·|u|_{W^p_ν} with the pipeline's constants.
pub fn verify_gns(
    u: &GridFunction,
    pipe: &PipelineKind,
    t: f64,
    budget: SeminormBudget,
) -> Result<InequalityReport, CoreError> {
    let kernel = pipe.kernel();
    let p = kernel.exponent;
    let semi = nonlocal_seminorm(u, kernel, budget)?;
    let semi_root = semi.value.powf(1.0 / p);
    let err_semi_root = if semi.value > 0.0 {
        semi_root * semi.error_estimate / (p * semi.value)
    } else {
        0.0
    };
    let (constant, case, notes) = match pipe {
        PipelineKind::Direct(pl) => {
            let theta_t = theta_constant(t, p, pl.kappa, pl.theta, &pl.phi)?;
            (
                theta_t,
                format!(
                    "gns mode={} t={t} p={p} d={} θ={:.6} κ={:.6}",
                    pl.mode, kernel.dimension, pl.theta, pl.kappa
                ),
                format!("seminorm^p={:.6e} (err {:.1e})", semi.value, semi.error_estimate),
            )
        }
        PipelineKind::PerComponent { components, c2, .. } => {
            let mut worst = 0.0f64;
            for pl in components {
                let th = theta_constant(t, p, pl.kappa, pl.theta, &pl.phi)?;
                worst = worst.max(th);
            }
            let constant = 2.0 * c2.powf(1.0 / p) * worst;
            (
                constant,
                format!("gns per-component t={t} p={p} d={} c2={c2:.6}", kernel.dimension),
                format!(
                    "‖u‖_φmax ≤ 2·max_i ‖u‖_φi ≤ 2·c2^(1/p)·max_i Θ_i·|u|_ν; seminorm^p={:.6e}",
                    semi.value
                ),
            )
        }
    };
    let lux = luxemburg_norm(u, pipe.phi())?;
    let lhs = lux.value;
    let rhs = constant * semi_root;
    let tol = (2.0 * (constant * err_semi_root + lux.error_estimate)).max(1e-6);
    Ok(InequalityReport::conclude("gns", case, lhs, rhs, constant, tol, notes))
}

/// ‖u‖_{p*_s} ≤ 2^{p*/p}·|B(0,1)|^{-1/p-s/d}·|u|_{W^{s,p}} with the plain
/// fractional kernel |h|^{-d-sp}.
pub fn verify_fractional_gns(
    u: &GridFunction,
    s: f64,
    p: f64,
    budget: SeminormBudget,
) -> Result<InequalityReport, CoreError> {
    let d = u.dimension;
    let params = FractionalParams::new(s, p, d)?;
    let cd = ball_volume(d);
    let constant = 2f64.powf(params.p_star / p) * cd.powf(-1.0 / p - s / d as f64);
    let kernel = Kernel::fractional(s, p, d);
    let semi = nonlocal_seminorm(u, &kernel, budget)?;
    let lhs = u.lp_norm(params.p_star);
    let semi_root = semi.value.powf(1.0 / p);
    let rhs = constant * semi_root;
    let err = if semi.value > 0.0 {
        constant * semi_root * semi.error_estimate / (p * semi.value)
    } else {
        0.0
    };
    let tol = (2.0 * err).max(1e-6);
    Ok(InequalityReport::conclude(
        "fractional-gns",
        format!("s={s} p={p} d={d} p*={:.6}", params.p_star),
        lhs,
        rhs,
        constant,
        tol,
        format!("seminorm^p={:.6e} (err {:.1e})", semi.value, semi.error_estimate),
    ))
}

/// ‖u − ⨍_Ω u‖_{L^p(Ω)} ≤ [κ|Ω|ν(R)]^{-1/p}·(Ω×Ω seminorm)^{1/p},
/// R = diam Ω.
pub fn verify_poincare(
    u: &GridFunction,
    omega: &SetSpec,
    kernel: &Kernel,
    budget: SeminormBudget,
) -> Result<InequalityReport, CoreError> {
    let p = kernel.exponent;
    let kappa = kernel.almost_decreasing_kappa()?;
    let r = omega.diameter();
    let nu_r = kernel.value(r);
    if nu_r <= 0.0 {
        return Err(CoreError::InfiniteConstant(format!("ν(diam Ω) = ν({r:.3e}) = 0")));
    }
    let constant = (kappa * omega.measure() * nu_r).powf(-1.0 / p);
    let mean = u.mean_on(omega);
    let centered = u.map(|v| v - mean);
    let lhs = centered.lp_power_on(p, omega).powf(1.0 / p);
    let semi = nonlocal_seminorm_on(u, kernel, omega, budget)?;
    let semi_root = semi.value.powf(1.0 / p);
    let rhs = constant * semi_root;
    let err = if semi.value > 0.0 {
        constant * semi_root * semi.error_estimate / (p * semi.value)
    } else {
        0.0
    };
    let tol = (2.0 * err).max(1e-6);
    Ok(InequalityReport::conclude(
        "poincare",
        format!("|Ω|={:.6} R={r:.6} p={p} κ={kappa:.6}", omega.measure()),
        lhs,
        rhs,
        constant,
        tol,
        format!("mean={mean:.6e} seminorm^p={:.6e}", semi.value),
    ))
}

/// ‖u‖_{L^p(Ω)} ≤ [2ν^#(|Ω|)]^{-1/p}·|u|_{W^p_ν} for u vanishing outside Ω.
pub fn verify_friedrichs(
    u: &GridFunction,
    omega: &SetSpec,
    kernel: &Kernel,
    budget: SeminormBudget,
) -> Result<InequalityReport, CoreError> {
    let p = kernel.exponent;
    // u must vanish off Ω
    let mut violation = None;
    for i in 0..u.shape[0] {
        for j in 0..u.shape[1] {
            let x = u.center(i, j);
            let v = u.values[i * u.shape[1] + j];
            if v != 0.0 && !omega.contains(&x[..u.dimension as usize]) {
                violation = Some(x);
            }
        }
    }
    if let Some(x) = violation {
        return Err(CoreError::invalid(format!(
            "Friedrichs needs u = 0 outside Ω; nonzero value at ({:.4}, {:.4})",
            x[0], x[1]
        )));
    }
    let nu_sharp = kernel.nu_sharp(omega.measure())?;
    if nu_sharp <= 0.0 {
        return Err(CoreError::InfiniteConstant("ν^#(|Ω|) = 0".into()));
    }
    let constant = (2.0 * nu_sharp).powf(-1.0 / p);
    let lhs = u.lp_power_on(p, omega).powf(1.0 / p);
    let semi = nonlocal_seminorm(u, kernel, budget)?;
    let semi_root = semi.value.powf(1.0 / p);
    let rhs = constant * semi_root;
    let err = if semi.value > 0.0 {
        constant * semi_root * semi.error_estimate / (p * semi.value)
    } else {
        0.0
    };
    let tol = (2.0 * err).max(1e-6);
    Ok(InequalityReport::conclude(
        "friedrichs",
        format!("|Ω|={:.6} p={p} ν#={nu_sharp:.6e}", omega.measure()),
        lhs,
        rhs,
        constant,
        tol,
        format!("seminorm^p={:.6e}", semi.value),
    ))
}

/// Recover the kernel of φ(t) = c·t^q and fit it against the closed form
/// ν(h) = C|h|^{-d-sp}, s = d/p − d/q, C = c^{p/q}(1−p/q)c_d^{p/q−2}.
/// The report's lhs is the worst normalized deviation (exponent against
/// 1e-4, coefficient against 1e-3 relative); rhs = 1.
pub fn verify_inverse_problem(
    q: f64,
    c: f64,
    p: f64,
    d: u32,
) -> Result<InequalityReport, CoreError> {
    let dd = d as f64;
    if !(1.0 / p - 1.0 / dd < 1.0 / q && 1.0 / q < 1.0 / p) {
        return Err(CoreError::Hypothesis(format!(
            "need 1/p - 1/d < 1/q < 1/p, got 1/q = {:.6}",
            1.0 / q
        )));
    }
    let s = dd / p - dd / q;
    let expected_exponent = -dd - s * p;
    let expected_coeff = c.powf(p / q) * (1.0 - p / q) * ball_volume(d).powf(p / q - 2.0);
    let phi = YoungFunction::power(c, q, p)?;
    let kernel = kernel_from_young(&phi, p, d)?;
    let table = match &kernel.profile {
        crate::kernels::Profile::Table(t) => t,
        _ => unreachable!(),
    };
    // fit over the middle decades of the recovered grid
    let (lo, hi) = (table.x_first(), table.x_last());
    let span = (hi / lo).ln();
    let mid_lo = lo * (span * 0.25).exp();
    let mid_hi = lo * (span * 0.75).exp();
    let (coeff, exponent) = table.fit_power(mid_lo, mid_hi);
    let dev_exponent = (exponent - expected_exponent).abs() / 1e-4;
    let dev_coeff = (coeff - expected_coeff).abs() / (1e-3 * expected_coeff.abs());
    let lhs = dev_exponent.max(dev_coeff);
    Ok(InequalityReport::conclude(
        "inverse",
        format!("c={c} q={q} p={p} d={d} s={s:.6}"),
        lhs,
        1.0,
        expected_coeff,
        0.0,
        format!(
            "fitted exponent {exponent:.8} (want {expected_exponent:.8}), coefficient {coeff:.8} (want {expected_coeff:.8})"
        ),
    ))
}
