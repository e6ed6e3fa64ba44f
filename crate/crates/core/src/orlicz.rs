//! Modulars and Luxemburg norms over grid functions, the indicator-norm
//! closed form, norm identities under power rescaling, and Orlicz-space
//! embedding constants.

use crate::error::CoreError;
use crate::fields::GridFunction;
use crate::quadrature::pairwise_sum;
use crate::young::YoungFunction;

/// Outcome of an iterative norm computation.
#[derive(Debug, Clone, Copy)]
pub struct NormResult {
    pub value: f64,
    pub error_estimate: f64,
    pub iterations: u32,
    pub converged: bool,
}

/// ∫ φ(|u(x)|/λ) dx by grid quadrature. Nonincreasing in λ; an overflowing
/// evaluation at tiny λ legitimately returns +∞.
pub fn modular(u: &GridFunction, phi: &YoungFunction, lambda: f64) -> f64 {
    assert!(lambda > 0.0);
    let mut terms = Vec::with_capacity(u.len());
    for &v in &u.values {
        if v != 0.0 {
            terms.push(phi.eval(v.abs() / lambda));
        }
    }
    if terms.iter().any(|t| t.is_infinite()) {
        return f64::INFINITY;
    }
    pairwise_sum(&terms) * u.cell_measure()
}

/// Luxemburg norm inf{λ > 0 : ∫φ(|u|/λ) ≤ 1} by bisection on λ. At the
/// returned value the modular lies in [1−1e-6, 1]; zero functions return 0.
///
/// The bracket comes from the indicator formula: λ ∈
/// [‖u‖_∞/φ⁻¹(1/cell), ‖u‖_∞/φ⁻¹(1/|supp u|)], widened tenfold each side.
pub fn luxemburg_norm(u: &GridFunction, phi: &YoungFunction) -> Result<NormResult, CoreError> {
    phi.require_convex()?;
    if u.is_zero() {
        return Ok(NormResult { value: 0.0, error_estimate: 0.0, iterations: 0, converged: true });
    }
    let sup = u.max_abs();
    let supp = u.support_measure();
    let cell = u.cell_measure();
    let mut hi = sup / phi.inv(1.0 / supp) * 10.0;
    let mut lo = sup / phi.inv(1.0 / cell) / 10.0;
    let mut widen = 0;
    while modular(u, phi, hi) > 1.0 {
        hi *= 10.0;
        widen += 1;
        if widen > 16 {
            return Err(CoreError::BracketExhausted);
        }
    }
    while modular(u, phi, lo) <= 1.0 {
        lo /= 10.0;
        widen += 1;
        if widen > 32 {
            return Err(CoreError::BracketExhausted);
        }
    }
    let mut iterations = 0;
    let mut top = modular(u, phi, hi);
    for _ in 0..200 {
        iterations += 1;
        let mid = (lo * hi).sqrt();
        let m = modular(u, phi, mid);
        if m <= 1.0 {
            hi = mid;
            top = m;
        } else {
            lo = mid;
        }
        if top >= 1.0 - 1e-6 && (hi - lo) <= 1e-9 * hi {
            break;
        }
    }
    Ok(NormResult {
        value: hi,
        error_estimate: hi - lo,
        iterations,
        converged: top >= 1.0 - 1e-6,
    })
}

/// ‖1_E‖_{L^φ} = 1/φ⁻¹(1/|E|).
pub fn indicator_norm(phi: &YoungFunction, measure: f64) -> f64 {
    assert!(measure > 0.0);
    1.0 / phi.inv(1.0 / measure)
}

/// Both sides of ‖u‖_{ψ(t^q)} = ‖u^q‖_ψ^{1/q}. Refuses when t ↦ ψ(t^q) is
/// not convex on the grid.
pub fn power_rescale_norm(
    u: &GridFunction,
    psi: &YoungFunction,
    q: f64,
) -> Result<(f64, f64), CoreError> {
    assert!(q > 0.0);
    let composed = YoungFunction::from_curve(psi.curve().compose_power(q), psi.p)?;
    if composed.possibly_nonconvex {
        return Err(CoreError::NonConvexComposite);
    }
    let lhs = luxemburg_norm(u, &composed)?.value;
    let powered = u.map(|v| v.abs().powf(q));
    let rhs = luxemburg_norm(&powered, psi)?.value.powf(1.0 / q);
    Ok((lhs, rhs))
}

/// Embedding constant cT with T = φ₁(t₀)|D| + 1 after verifying the
/// domination φ₁(t) ≤ φ₂(ct) on the grid for t ≥ t₀ (finite measure) or for
/// all sampled t (infinite measure, T = 1).
pub fn embedding_bound(
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    c: f64,
    t0: f64,
    domain_measure: Option<f64>,
) -> Result<f64, CoreError> {
    let cut = match domain_measure {
        Some(_) => t0,
        None => 0.0,
    };
    let mut grid: Vec<f64> = phi1
        .curve()
        .extend_to(1e-6, 1e6)
        .nodes()
        .map(|(t, _)| t)
        .chain(phi2.curve().nodes().map(|(t, _)| t))
        .filter(|&t| t >= cut)
        .collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    for &t in &grid {
        if phi1.eval(t) > phi2.eval(c * t) * (1.0 + 1e-9) {
            return Err(CoreError::DominationFails { at: t });
        }
    }
    let t_factor = match domain_measure {
        Some(m) => phi1.eval(t0) * m + 1.0,
        None => 1.0,
    };
    Ok(c * t_factor)
}

/// The Orlicz (dual) norm enters only through the two-sided comparison
/// ‖u‖_φ ≤ |u|_φ ≤ 2‖u‖_φ; no dual optimization is performed.
pub fn orlicz_norm_bounds(u: &GridFunction, phi: &YoungFunction) -> Result<(f64, f64), CoreError> {
    let l = luxemburg_norm(u, phi)?.value;
    Ok((l, 2.0 * l))
}

/// Coarse sum-space norm: minimize ‖u₁‖_{φ₁} + ‖u₂‖_{φ₂} over threshold
/// splits u = clamp(u, τ) + rest at `levels` log-spaced thresholds (both
/// assignments), plus the two trivial decompositions.
pub fn sum_space_norm(
    u: &GridFunction,
    phi1: &YoungFunction,
    phi2: &YoungFunction,
    levels: usize,
) -> Result<f64, CoreError> {
    if u.is_zero() {
        return Ok(0.0);
    }
    let mut best = f64::INFINITY;
    let mut consider = |a: &GridFunction, b: &GridFunction| -> Result<(), CoreError> {
        let cost = |f: &GridFunction, phi: &YoungFunction| -> Result<f64, CoreError> {
            if f.is_zero() {
                Ok(0.0)
            } else {
                Ok(luxemburg_norm(f, phi)?.value)
            }
        };
        let v = cost(a, phi1)? + cost(b, phi2)?;
        if v < best {
            best = v;
        }
        let w = cost(b, phi1)? + cost(a, phi2)?;
        if w < best {
            best = w;
        }
        Ok(())
    };
    let zero = u.map(|_| 0.0);
    consider(u, &zero)?;
    let sup = u.max_abs();
    for k in 0..levels {
        let tau = sup * 10f64.powf(-3.0 + 3.0 * k as f64 / (levels.max(2) - 1) as f64);
        let low = u.map(|v| v.clamp(-tau, tau));
        let high = u.map(|v| v - v.clamp(-tau, tau));
        consider(&high, &low)?;
    }
    Ok(best)
}
