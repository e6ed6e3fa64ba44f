//! Young-function calculus: the critical function φ of a tail profile,
//! inversion, convex conjugation, max/min/minorant combination, and the
//! growth constant θ.
//!
//! A Young function is stored as a strictly increasing log-log curve with
//! endpoint exponents; φ(0) = 0 is implied by a positive head exponent.
//! Inversion swaps the curve axes, so φ and φ⁻¹ agree exactly on nodes.

use crate::curve::LogLogCurve;
use crate::error::CoreError;
use crate::kernels::{ball_volume, gamma_s, Kernel, TailProfile};
use crate::quadrature::golden_max;

/// Canonical sampling grid for closed-form constructors: 256 log-spaced
/// points over six decades centered at t = 1.
pub const T_GRID: (f64, f64, usize) = (1e-3, 1e3, 256);

#[derive(Debug, Clone)]
pub struct YoungFunction {
    curve: LogLogCurve,
    inverse: LogLogCurve,
    /// the exponent p this function is paired with
    pub p: f64,
    /// set when the sampled curve fails the discrete convexity test;
    /// Luxemburg machinery refuses such functions until minorant correction
    pub possibly_nonconvex: bool,
}

impl YoungFunction {
    /// Wrap a strictly increasing curve. The discrete secant test decides the
    /// `possibly_nonconvex` flag; the Young property (φ(t)/t nondecreasing)
    /// is enforced up to a small slack.
    pub fn from_curve(curve: LogLogCurve, p: f64) -> Result<Self, CoreError> {
        let inverse = curve.invert()?;
        let mut min_slope = curve.head_exponent().min(curve.tail_exponent());
        let nodes: Vec<(f64, f64)> = curve.nodes().collect();
        for w in nodes.windows(2) {
            let s = (w[1].1.ln() - w[0].1.ln()) / (w[1].0.ln() - w[0].0.ln());
            min_slope = min_slope.min(s);
        }
        if min_slope < 1.0 - 1e-7 {
            return Err(CoreError::invalid(format!(
                "not a Young function: t ↦ φ(t)/t decreases (log-slope {min_slope:.6} < 1)"
            )));
        }
        let possibly_nonconvex = secant_witness(&nodes).is_some();
        Ok(YoungFunction { curve, inverse, p, possibly_nonconvex })
    }

    /// φ(t) = c·t^q on the canonical grid.
    pub fn power(c: f64, q: f64, p: f64) -> Result<Self, CoreError> {
        assert!(c > 0.0 && q >= 1.0);
        let (lo, hi, n) = T_GRID;
        let curve = LogLogCurve::from_fn(|t| c * t.powf(q), lo, hi, n)?.with_exponents(q, q);
        Self::from_curve(curve, p)
    }

    /// φ^a(t) = ln(a + e^{t^p}) − ln(a + 1) on the canonical grid.
    pub fn log_family(a: f64, p: f64) -> Result<Self, CoreError> {
        assert!(a > 0.0);
        let (lo, hi, n) = T_GRID;
        let f = move |t: f64| {
            let tp = t.powf(p);
            if tp > 30.0 {
                // ln(a + e^x) − ln(a+1) = x + ln1p(a e^{-x}) − ln(a+1)
                tp + (a * (-tp).exp()).ln_1p() - (a + 1.0).ln()
            } else {
                // ln((a + e^x)/(a+1)) = ln1p((e^x − 1)/(a+1))
                (tp.exp_m1() / (a + 1.0)).ln_1p()
            }
        };
        let curve = LogLogCurve::from_fn(f, lo, hi, n)?.with_exponents(p, p);
        Self::from_curve(curve, p)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        self.curve.eval(t)
    }

    /// φ⁻¹(y).
    pub fn inv(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        self.inverse.eval(y)
    }

    pub fn curve(&self) -> &LogLogCurve {
        &self.curve
    }

    pub fn inverse_curve(&self) -> &LogLogCurve {
        &self.inverse
    }

    /// Density b(t) = φ'(t) from the local log-slope.
    pub fn density(&self, t: f64) -> f64 {
        self.curve.log_slope(t) * self.eval(t) / t
    }

    pub fn require_convex(&self) -> Result<(), CoreError> {
        if self.possibly_nonconvex {
            Err(CoreError::PossiblyNonConvex)
        } else {
            Ok(())
        }
    }

    /// Pointwise maximum; exact on the union node set with crossings.
    pub fn combine_max(&self, other: &Self) -> Result<Self, CoreError> {
        self.compatible(other)?;
        Self::from_curve(self.curve.pointwise_max(&other.curve), self.p)
    }

    /// Pointwise minimum; possibly non-convex (the flag is set by the secant
    /// test at construction).
    pub fn combine_min(&self, other: &Self) -> Result<Self, CoreError> {
        self.compatible(other)?;
        Self::from_curve(self.curve.pointwise_min(&other.curve), self.p)
    }

    /// Greatest-convex-minorant correction by the integral formula
    /// φ_min(t) = ∫₀ᵗ min(φ₁(s), φ₂(s))/s ds, exact per power segment.
    /// Satisfies φ_min(t) ≤ min(φ₁,φ₂)(t) ≤ φ_min(2t).
    pub fn combine_minorant(&self, other: &Self) -> Result<Self, CoreError> {
        self.compatible(other)?;
        let m = self
            .curve
            .pointwise_min(&other.curve)
            .extend_to(T_GRID.0 * 1e-3, T_GRID.1 * 1e3);
        let mut xs = Vec::with_capacity(m.len());
        let mut ys = Vec::with_capacity(m.len());
        for (x, _) in m.nodes() {
            xs.push(x);
            ys.push(m.integral_dlog(x)?);
        }
        let curve = LogLogCurve::from_samples(&xs, &ys)?
            .with_exponents(m.head_exponent(), m.tail_exponent());
        Self::from_curve(curve, self.p)
    }

    fn compatible(&self, other: &Self) -> Result<(), CoreError> {
        if (self.p - other.p).abs() > 1e-12 {
            return Err(CoreError::invalid("combining Young functions paired with different p"));
        }
        Ok(())
    }

    /// Write as two-column CSV with a header carrying the endpoint exponents.
    pub fn to_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(
            out,
            "# young p={} head={} tail={}",
            self.p,
            self.curve.head_exponent(),
            self.curve.tail_exponent()
        )?;
        writeln!(out, "t,phi")?;
        for (t, y) in self.curve.nodes() {
            writeln!(out, "{t:.12e},{y:.12e}")?;
        }
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self, CoreError> {
        let mut p = None;
        let mut head = None;
        let mut tail = None;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for tok in rest.split_whitespace() {
                    if let Some((k, v)) = tok.split_once('=') {
                        let v: f64 = v
                            .parse()
                            .map_err(|_| CoreError::invalid(format!("bad header value {v}")))?;
                        match k {
                            "p" => p = Some(v),
                            "head" => head = Some(v),
                            "tail" => tail = Some(v),
                            _ => {}
                        }
                    }
                }
                continue;
            }
            if line.starts_with(|c: char| c.is_alphabetic()) {
                continue; // column header
            }
            let mut it = line.split(',');
            let t: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CoreError::invalid("bad csv row"))?;
            let v: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CoreError::invalid("bad csv row"))?;
            xs.push(t);
            ys.push(v);
        }
        let p = p.ok_or_else(|| CoreError::invalid("csv missing p= header"))?;
        let mut curve = LogLogCurve::from_samples(&xs, &ys)?;
        if let (Some(h), Some(t)) = (head, tail) {
            curve = curve.with_exponents(h, t);
        }
        Self::from_curve(curve, p)
    }
}

/// Discrete convexity (secant) witness on a node list, linear coordinates.
fn secant_witness(nodes: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    for w in nodes.windows(3) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let (x2, y2) = w[2];
        let chord = y0 + (y2 - y0) * (x1 - x0) / (x2 - x0);
        if y1 > chord + 1e-10 * y2.abs().max(1.0) {
            return Some((x0, x1, x2));
        }
    }
    None
}

/// The critical Young function of a tail profile: φ = (1/w(1/t))⁻¹.
/// The node set is the exact image of w's nodes, so w(t) = 1/φ⁻¹(1/t)
/// holds on the grid to round-off.
pub fn critical_young(w: &TailProfile) -> Result<YoungFunction, CoreError> {
    let nodes: Vec<(f64, f64)> = w.curve.nodes().collect();
    let mut xs = Vec::with_capacity(nodes.len());
    let mut ys = Vec::with_capacity(nodes.len());
    // φ's graph: points (1/w_i, 1/r_i), reversed to increasing order
    for &(r, wv) in nodes.iter().rev() {
        xs.push(1.0 / wv);
        ys.push(1.0 / r);
    }
    let head = 1.0 / w.curve.tail_exponent();
    let tail = 1.0 / w.curve.head_exponent();
    let curve = LogLogCurve::from_samples(&xs, &ys)?.with_exponents(head, tail);
    YoungFunction::from_curve(curve, w.exponent)
}

/// Discrete convexity of t ↦ φ(t^{1/p}) on the sample grid; the witness is
/// the violating triple.
pub fn check_convexity_phi_p(phi: &YoungFunction, p: f64) -> Result<(), CoreError> {
    let composed = phi.curve().compose_power(1.0 / p);
    let nodes: Vec<(f64, f64)> = composed.nodes().collect();
    match secant_witness(&nodes) {
        None => Ok(()),
        Some(witness) => Err(CoreError::NotConvex { witness }),
    }
}

/// Floor below which a certified growth constant is treated as failure.
pub const THETA_FLOOR: f64 = 1e-4;

/// Largest θ ∈ (0, 1] with φ(θ·s/t) ≤ φ(s)/φ(t) for all sampled pairs s ≤ t:
/// the exact per-pair bound is θ ≤ (t/s)·φ⁻¹(φ(s)/φ(t)), minimized over the
/// node grid. Asymptotic failure (tail exponent exceeding the head exponent)
/// is decided from the stored endpoint exponents, witness s = 1, t → ∞.
pub fn growth_theta(phi: &YoungFunction) -> Result<f64, CoreError> {
    let (he, te) = (phi.curve().head_exponent(), phi.curve().tail_exponent());
    if te > he + 1e-9 {
        return Err(CoreError::GrowthFails {
            witness: (1.0, f64::INFINITY),
            reason: format!(
                "φ grows like t^{te:.4} at ∞ but t^{he:.4} at 0, so φ(θs/t)·φ(t)/φ(s) → ∞"
            ),
        });
    }
    let nodes: Vec<(f64, f64)> = phi.curve().nodes().collect();
    let mut theta = f64::INFINITY;
    let mut witness = (nodes[0].0, nodes[0].0);
    for i in 0..nodes.len() {
        for j in i..nodes.len() {
            let (s, fs) = nodes[i];
            let (t, ft) = nodes[j];
            let bound = t / s * phi.inv(fs / ft);
            if bound < theta {
                theta = bound;
                witness = (s, t);
            }
        }
    }
    if theta < THETA_FLOOR {
        return Err(CoreError::GrowthFails {
            witness,
            reason: format!("certified θ = {theta:.3e} falls below the {THETA_FLOOR:.0e} floor"),
        });
    }
    Ok(theta.min(1.0))
}

/// Numeric Legendre transform φ̃(t) = sup_s {ts − φ(s)}: discrete maximum
/// over an extended sample grid plus golden-section refinement (the
/// maximizer is unimodal for convex φ).
pub fn conjugate(phi: &YoungFunction) -> Result<YoungFunction, CoreError> {
    phi.require_convex()?;
    let c = phi.curve().extend_to(T_GRID.0 * 1e-3, T_GRID.1 * 1e3);
    let svals: Vec<f64> = c.nodes().map(|(x, _)| x).collect();
    let x0 = svals[0];
    let xn = *svals.last().unwrap();
    // slope range of φ over the extended grid bounds where the sup is interior
    let slope_lo = c.head_exponent() * c.eval(x0) / x0;
    let slope_hi = c.tail_exponent() * c.eval(xn) / xn;
    let (t_lo, t_hi) = (slope_lo * 1.05, slope_hi * 0.95);
    if !(t_lo > 0.0 && t_hi > t_lo) {
        return Err(CoreError::invalid("conjugate: degenerate slope range"));
    }
    let n = 256;
    let mut ts = Vec::with_capacity(n);
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let t = (t_lo.ln() + (t_hi.ln() - t_lo.ln()) * i as f64 / (n - 1) as f64).exp();
        let g = |s: f64| t * s - c.eval(s);
        let mut best = f64::NEG_INFINITY;
        let mut best_i = 0;
        for (i, &s) in svals.iter().enumerate() {
            let v = g(s);
            if v > best {
                best = v;
                best_i = i;
            }
        }
        let lo = if best_i == 0 { svals[0] } else { svals[best_i - 1] };
        let hi = if best_i + 1 == svals.len() { svals[best_i] } else { svals[best_i + 1] };
        let (_, refined) = golden_max(g, lo, hi, 80);
        let v = refined.max(best);
        if v > 0.0 {
            ts.push(t);
            vals.push(v);
        }
    }
    if ts.len() < 8 {
        return Err(CoreError::invalid("conjugate: too few positive values"));
    }
    let curve = LogLogCurve::from_samples(&ts, &vals)?;
    YoungFunction::from_curve(curve, phi.p)
}

/// Closed-form fractional data: p*_s with 1/p*_s = 1/p − s/d, and
/// γ_s = d·c_d^{1+sp/d}/(sp).
#[derive(Debug, Clone, Copy)]
pub struct FractionalParams {
    pub s: f64,
    pub p: f64,
    pub d: u32,
    pub p_star: f64,
    pub gamma: f64,
}

impl FractionalParams {
    pub fn new(s: f64, p: f64, d: u32) -> Result<Self, CoreError> {
        let inv = 1.0 / p - s / d as f64;
        if inv <= 0.0 {
            return Err(CoreError::Hypothesis(format!(
                "1/p*_s = 1/p - s/d = {inv:.4} must be positive"
            )));
        }
        Ok(FractionalParams { s, p, d, p_star: 1.0 / inv, gamma: gamma_s(s, p, d) })
    }

    /// φ(t) = γ_s^{p*/p} t^{p*}.
    pub fn critical_young(&self) -> Result<YoungFunction, CoreError> {
        YoungFunction::power(self.gamma.powf(self.p_star / self.p), self.p_star, self.p)
    }

    /// θ = γ_s^{-1/p}, with equality in the growth condition for all pairs.
    pub fn theta(&self) -> f64 {
        self.gamma.powf(-1.0 / self.p)
    }
}

/// Asymptotic-rate report for a critical function against its kernel.
#[derive(Debug, Clone)]
pub struct AsymptoticRates {
    /// φ(t)/t^p at the largest grid t (→ ∫ν for integrable kernels)
    pub ratio_large_t: f64,
    /// φ(t)/t^p at the smallest grid t (→ 0)
    pub ratio_small_t: f64,
    pub nu_l1: Option<f64>,
    /// head/tail exponents strictly above 1: φ is an N-function
    pub n_function: bool,
    /// head/tail exponents strictly above p: φ_p is an N-function
    pub n_function_p: bool,
    /// (r, lhs, rhs) of the residual identity |B_r|^{-1/p}/φ⁻¹(1/|B_r|) = ν^#(|B_r|)^{1/p}
    pub residuals: Vec<(f64, f64, f64)>,
}

/// Compare φ(t)/t^p at the grid ends with the kernel's mass, set the
/// N-function flags, and re-check the residual identity at r ∈ {1, 10, 100}.
/// Expects φ built from this kernel (ν^#-mode w for the residual identity).
pub fn asymptotic_rates(phi: &YoungFunction, kernel: &Kernel) -> Result<AsymptoticRates, CoreError> {
    let p = phi.p;
    let c = phi.curve();
    let (t0, t1) = (c.x_first(), c.x_last());
    let ratio_small_t = phi.eval(t0) / t0.powf(p);
    let ratio_large_t = phi.eval(t1) / t1.powf(p);
    let nu_l1 = kernel.radial_weighted_integral(0.0, 0.0, f64::INFINITY).ok();
    let n_function = c.head_exponent() > 1.0 + 1e-9 && c.tail_exponent() > 1.0 + 1e-9;
    let n_function_p = c.head_exponent() > p + 1e-9 && c.tail_exponent() > p + 1e-9;
    let mut residuals = Vec::new();
    for &r in &[1.0f64, 10.0, 100.0] {
        let m = ball_volume(kernel.dimension) * r.powf(kernel.dimension as f64);
        let lhs = m.powf(-1.0 / p) / phi.inv(1.0 / m);
        let rhs = kernel.nu_sharp(m)?.powf(1.0 / p);
        residuals.push((r, lhs, rhs));
    }
    Ok(AsymptoticRates { ratio_large_t, ratio_small_t, nu_l1, n_function, n_function_p, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{w_profile, WMode};

    fn frac14_phi() -> YoungFunction {
        let k = Kernel::fractional(0.25, 2.0, 1);
        critical_young(&w_profile(&k, WMode::TailMass).unwrap()).unwrap()
    }

    #[test]
    fn critical_young_fractional_is_32_t4() {
        let phi = frac14_phi();
        let (c, q) = phi.curve().fit_power(1e-3, 1e3);
        assert!((q - 4.0).abs() < 1e-6, "{q}");
        assert!((c - 32.0).abs() < 1e-6, "{c}");
        // w(t) = 1/φ^{-1}(1/t) on the grid
        let k = Kernel::fractional(0.25, 2.0, 1);
        let w = w_profile(&k, WMode::TailMass).unwrap();
        for &t in &[1e-2, 1.0, 1e2] {
            let lhs = w.w(t);
            let rhs = 1.0 / phi.inv(1.0 / t);
            assert!((lhs - rhs).abs() < 1e-6 * lhs);
        }
        // rate function: φ(t)/t^p equals the tail mass at η(1/φ(t))
        for &t in &[0.05, 1.0, 20.0] {
            let lhs = phi.eval(t) / t.powi(2);
            let rhs = k.tail_mass(k.eta(1.0 / phi.eval(t))).unwrap();
            assert!((lhs - rhs).abs() < 1e-7 * lhs, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn critical_young_integrable_is_dominated_by_tp() {
        // φ(t) ≤ ‖ν‖_{L¹} t^p on the grid; for min(1, |h|^{-3/2}) in d = 1
        // the mass is 2 + 4 = 6
        let k = Kernel::truncated_fractional(0.25, 2.0, 1);
        let phi = critical_young(&w_profile(&k, WMode::TailMass).unwrap()).unwrap();
        let l1 = k.radial_weighted_integral(0.0, 0.0, f64::INFINITY).unwrap();
        assert!((l1 - 6.0).abs() < 1e-9, "{l1}");
        for (t, y) in phi.curve().nodes() {
            assert!(y <= l1 * t.powi(2) * (1.0 + 1e-9), "t={t}");
        }
    }

    #[test]
    fn critical_young_of_min_kernel_matches_min_powers() {
        // before minorant correction, the Young-min kernel's critical
        // function is min(t^{p*_{s1}}, t^{p*_{s2}})
        let (s1, s2) = (0.125, 0.25);
        let k = Kernel::young_min_fractional(s1, s2, 2.0, 1);
        let w = w_profile(&k, WMode::TailMass).unwrap();
        let phi = critical_young(&w).unwrap();
        let (q1, q2) = (1.0 / (0.5 - s1), 1.0 / (0.5 - s2));
        for &t in &[1e-2f64, 0.5, 1.0, 3.0, 1e2] {
            let want = t.powf(q1).min(t.powf(q2));
            let got = phi.eval(t);
            assert!((got - want).abs() < 1e-6 * want, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn inversion_involutes_on_grid() {
        let phi = frac14_phi();
        for (t, _) in phi.curve().nodes() {
            let back = phi.inv(phi.eval(t));
            assert!((back - t).abs() <= 1e-8 * t);
        }
    }

    #[test]
    fn convexity_checks() {
        let p4 = YoungFunction::power(1.0, 4.0, 2.0).unwrap();
        let p8 = YoungFunction::power(1.0, 8.0, 2.0).unwrap();
        assert!(check_convexity_phi_p(&p4, 2.0).is_ok());
        // raw min has a concave kink at t = 1
        let raw_min = p4.combine_min(&p8).unwrap();
        assert!(raw_min.possibly_nonconvex);
        let err = check_convexity_phi_p(&raw_min, 2.0).unwrap_err();
        match err {
            CoreError::NotConvex { witness } => {
                // witness straddles the kink at t^p = 1
                assert!(witness.0 < 1.0 && witness.2 > 1.0, "{witness:?}");
            }
            other => panic!("unexpected error {other}"),
        }
        // minorant correction restores convexity
        let minorant = p4.combine_minorant(&p8).unwrap();
        assert!(!minorant.possibly_nonconvex);
        assert!(check_convexity_phi_p(&minorant, 2.0).is_ok());
    }

    #[test]
    fn sandwich_of_minorant() {
        let p4 = YoungFunction::power(1.0, 4.0, 2.0).unwrap();
        let p8 = YoungFunction::power(1.0, 8.0, 2.0).unwrap();
        let minorant = p4.combine_minorant(&p8).unwrap();
        for i in 0..50 {
            let t = 10f64.powf(-2.0 + 4.0 * i as f64 / 49.0);
            let m = t.powi(4).min(t.powi(8));
            let lo = minorant.eval(t);
            let hi = minorant.eval(2.0 * t);
            assert!(lo <= m * (1.0 + 1e-9), "t={t}");
            assert!(m <= hi * (1.0 + 1e-9), "t={t}");
        }
    }

    #[test]
    fn growth_theta_fractional_equality_case() {
        let phi = frac14_phi();
        let theta = growth_theta(&phi).unwrap();
        let want = 2f64.powf(-1.25);
        assert!((theta - want).abs() < 1e-6 * want, "{theta} vs {want}");
        let params = FractionalParams::new(0.25, 2.0, 1).unwrap();
        assert!((params.theta() - want).abs() < 1e-12);
    }

    #[test]
    fn growth_theta_fails_for_max() {
        let p1 = YoungFunction::power(1.0, 8.0 / 3.0, 2.0).unwrap();
        let p2 = YoungFunction::power(1.0, 4.0, 2.0).unwrap();
        let max = p1.combine_max(&p2).unwrap();
        match growth_theta(&max) {
            Err(CoreError::GrowthFails { witness, .. }) => {
                assert!(witness.1.is_infinite());
            }
            other => panic!("expected growth failure, got {other:?}"),
        }
    }

    #[test]
    fn growth_theta_of_minorant_beats_half_min() {
        let (q1, q2) = (8.0 / 3.0, 4.0);
        let a = YoungFunction::power(1.0, q1, 2.0).unwrap();
        let b = YoungFunction::power(1.0, q2, 2.0).unwrap();
        let t1 = growth_theta(&a).unwrap();
        let t2 = growth_theta(&b).unwrap();
        let minorant = a.combine_minorant(&b).unwrap();
        let tm = growth_theta(&minorant).unwrap();
        assert!(tm >= 0.5 * t1.min(t2) - 1e-9, "{tm} vs {}", 0.5 * t1.min(t2));
    }

    #[test]
    fn growth_theta_log_family_is_one() {
        let phi = YoungFunction::log_family(1.0, 2.0).unwrap();
        let theta = growth_theta(&phi).unwrap();
        assert!(theta > 0.95 && theta <= 1.0, "{theta}");
    }

    #[test]
    fn conjugate_quadratic_is_self_dual() {
        let phi = YoungFunction::power(0.5, 2.0, 2.0).unwrap();
        let conj = conjugate(&phi).unwrap();
        for &t in &[0.05, 0.3, 1.0, 4.0, 50.0] {
            let want = 0.5 * t * t;
            let got = conj.eval(t);
            assert!((got - want).abs() < 1e-6 * want, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn conjugate_cubic_gives_dual_exponent() {
        // φ = t³/3 → φ̃ = t^{3/2}/(3/2)
        let phi = YoungFunction::power(1.0 / 3.0, 3.0, 3.0).unwrap();
        let conj = conjugate(&phi).unwrap();
        for &t in &[0.1f64, 1.0, 10.0] {
            let want = t.powf(1.5) / 1.5;
            let got = conj.eval(t);
            assert!((got - want).abs() < 1e-6 * want, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn biconjugate_reproduces_piecewise_power() {
        let a = YoungFunction::power(0.7, 2.5, 2.0).unwrap();
        let b = YoungFunction::power(1.3, 5.0, 2.0).unwrap();
        let phi = a.combine_max(&b).unwrap();
        let cc = conjugate(&conjugate(&phi).unwrap()).unwrap();
        for &t in &[0.05, 0.4, 1.0, 3.0, 40.0] {
            let want = phi.eval(t);
            let got = cc.eval(t);
            assert!((got - want).abs() < 1e-4 * want, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn combine_identity_modes() {
        let phi = YoungFunction::power(2.0, 3.0, 2.0).unwrap();
        let mx = phi.combine_max(&phi).unwrap();
        let mn = phi.combine_min(&phi).unwrap();
        let mino = phi.combine_minorant(&phi).unwrap();
        for &t in &[0.01, 1.0, 90.0] {
            let want = phi.eval(t);
            assert!((mx.eval(t) - want).abs() < 1e-10 * want);
            assert!((mn.eval(t) - want).abs() < 1e-10 * want);
            // minorant of identical powers: ∫₀ᵗ c s^q /s ds = c t^q / q
            assert!((mino.eval(t) - want / 3.0).abs() < 1e-8 * want);
        }
        assert!(!mn.possibly_nonconvex);
    }

    #[test]
    fn young_property_sandwich() {
        // δ₀ = φ(t₀)/t₀^p splits the grid: φ ≤ δ₀t^p below t₀, ≥ above
        let phi = frac14_phi();
        let t0 = 1.7;
        let delta0 = phi.eval(t0) / t0.powi(2);
        for (t, y) in phi.curve().nodes() {
            let bound = delta0 * t.powi(2);
            if t <= t0 {
                assert!(y <= bound * (1.0 + 1e-9));
            } else {
                assert!(y >= bound * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn asymptotics_fractional() {
        let k = Kernel::fractional(0.25, 2.0, 1);
        let phi = frac14_phi();
        let rates = asymptotic_rates(&phi, &k).unwrap();
        assert!(rates.n_function && rates.n_function_p);
        assert!(rates.ratio_large_t > rates.ratio_small_t);
        assert!(rates.nu_l1.is_none());
        for &(r, lhs, rhs) in &rates.residuals {
            assert!((lhs - rhs).abs() < 1e-6 * rhs, "r={r}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn asymptotics_integrable() {
        // the truncated fractional kernel is integrable with full support;
        // beyond the plateau measure its tail-mass and ν^# generators agree,
        // so one φ satisfies both the mass limit and the residual identity
        let k = Kernel::truncated_fractional(0.25, 2.0, 1);
        let phi = critical_young(&w_profile(&k, WMode::TailMass).unwrap()).unwrap();
        let rates = asymptotic_rates(&phi, &k).unwrap();
        let l1 = rates.nu_l1.unwrap();
        assert!((l1 - 6.0).abs() < 1e-9);
        assert!((rates.ratio_large_t - l1).abs() < 0.01 * l1, "{} vs {l1}", rates.ratio_large_t);
        assert!(!rates.n_function_p);
        for &(r, lhs, rhs) in &rates.residuals {
            assert!((lhs - rhs).abs() < 1e-6 * rhs, "r={r}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let phi = YoungFunction::power(32.0, 4.0, 2.0).unwrap();
        let mut buf = Vec::new();
        phi.to_csv(&mut buf).unwrap();
        let back = YoungFunction::from_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        for &t in &[1e-4, 0.3, 1.0, 800.0, 1e4] {
            assert!((back.eval(t) - phi.eval(t)).abs() <= 1e-9 * phi.eval(t));
        }
        assert_eq!(back.p, 2.0);
    }
}
