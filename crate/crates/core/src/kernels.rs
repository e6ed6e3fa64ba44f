//! p-Lévy kernels: radial profiles, tail masses, the profile w, symmetric
//! rearrangement ν*, the exterior-mass function ν^#, the almost-decreasing
//! constant κ, and the inverse problem (Young function → kernel).
//!
//! Radial profiles are stored log-log with power-law interpolation, so every
//! closed-form family here (fractional, piecewise fractional, ball indicator,
//! tabulated) is piecewise power-law and its radial integrals reduce to exact
//! segment arithmetic. The log-family kernel is smooth but not a power law;
//! its integrals go through adaptive Simpson on the log axis with analytic
//! power-law completions at 0 and ∞.

use crate::curve::LogLogCurve;
use crate::error::CoreError;
use crate::fields::GridFunction;
use crate::quadrature::{adaptive_simpson, pairwise_sum};
use crate::young::YoungFunction;

/// Volume of the unit ball in dimension d.
pub fn ball_volume(d: u32) -> f64 {
    match d {
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

/// γ_s = d·c_d^{1+sp/d} / (sp), the fractional tail-mass coefficient.
pub fn gamma_s(s: f64, p: f64, d: u32) -> f64 {
    let dd = d as f64;
    dd * ball_volume(d).powf(1.0 + s * p / dd) / (s * p)
}

/// Which generator drives the profile w: the plain tail mass (mode `a`,
/// paired with the almost-decreasing constant κ) or ν^# (mode `mr2`, the
/// rearrangement-based refinement, κ-free).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WMode {
    TailMass,
    NuSharp,
}

impl std::fmt::Display for WMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WMode::TailMass => write!(f, "a"),
            WMode::NuSharp => write!(f, "mr2"),
        }
    }
}

/// Radial profile of a kernel (or a non-radial tabulation that only enters
/// through its rearrangement).
#[derive(Debug, Clone)]
pub enum Profile {
    /// ν(ρ) = ρ^{-d-sp}
    Fractional { s: f64 },
    /// coeff_inner·ρ^{-d-s_inner·p} inside the break radius, then
    /// coeff_outer·ρ^{-d-s_outer·p}
    PiecewiseFractional {
        s_inner: f64,
        s_outer: f64,
        break_radius: f64,
        coeff_inner: f64,
        coeff_outer: f64,
    },
    /// indicator of the ball B(0, radius)
    BallIndicator { radius: f64 },
    /// the integrable kernel whose critical function is ln(a+e^{t^p})−ln(a+1)
    LogFamily { a: f64 },
    /// tabulated radial curve, power-law extrapolation beyond the samples
    Table(LogLogCurve),
    /// piecewise-constant annuli (rearrangement output); zero past the last radius
    Step { radii: Vec<f64>, values: Vec<f64> },
    /// non-radial tabulation on a uniform grid
    Grid(GridFunction),
}

#[derive(Debug, Clone)]
pub struct Kernel {
    pub dimension: u32,
    pub exponent: f64,
    pub profile: Profile,
}

impl Kernel {
    pub fn fractional(s: f64, p: f64, d: u32) -> Self {
        assert!(s > 0.0 && s < 1.0 && p >= 1.0 && d >= 1);
        Kernel { dimension: d, exponent: p, profile: Profile::Fractional { s } }
    }

    /// Pointwise max(|h|^{-d-s1p}, |h|^{-d-s2p}) for s1 < s2: the more
    /// singular piece inside |h| < 1, continuity-matched at the break.
    pub fn max_fractional(s1: f64, s2: f64, p: f64, d: u32) -> Self {
        assert!(s1 < s2);
        Kernel {
            dimension: d,
            exponent: p,
            profile: Profile::PiecewiseFractional {
                s_inner: s2,
                s_outer: s1,
                break_radius: 1.0,
                coeff_inner: 1.0,
                coeff_outer: 1.0,
            },
        }
    }

    /// Pointwise min(|h|^{-d-s1p}, |h|^{-d-s2p}): lighter singularity inside,
    /// heavier decay outside; globally nonincreasing, κ = 1.
    pub fn min_fractional(s1: f64, s2: f64, p: f64, d: u32) -> Self {
        assert!(s1 < s2);
        Kernel {
            dimension: d,
            exponent: p,
            profile: Profile::PiecewiseFractional {
                s_inner: s1,
                s_outer: s2,
                break_radius: 1.0,
                coeff_inner: 1.0,
                coeff_outer: 1.0,
            },
        }
    }

    /// The kernel whose critical function is exactly max(t^{p*_{s1}}, t^{p*_{s2}}):
    /// (1/γ_{s2})|h|^{-d-s2·p} inside η(1), (1/γ_{s1})|h|^{-d-s1·p} outside.
    pub fn young_max_fractional(s1: f64, s2: f64, p: f64, d: u32) -> Self {
        assert!(s1 < s2);
        let eta1 = (1.0 / ball_volume(d)).powf(1.0 / d as f64);
        Kernel {
            dimension: d,
            exponent: p,
            profile: Profile::PiecewiseFractional {
                s_inner: s2,
                s_outer: s1,
                break_radius: eta1,
                coeff_inner: 1.0 / gamma_s(s2, p, d),
                coeff_outer: 1.0 / gamma_s(s1, p, d),
            },
        }
    }

    /// The kernel whose critical function is exactly min(t^{p*_{s1}}, t^{p*_{s2}}).
    /// Its density jumps up by s2/s1 at the break, so it is not nonincreasing.
    pub fn young_min_fractional(s1: f64, s2: f64, p: f64, d: u32) -> Self {
        assert!(s1 < s2);
        let eta1 = (1.0 / ball_volume(d)).powf(1.0 / d as f64);
        Kernel {
            dimension: d,
            exponent: p,
            profile: Profile::PiecewiseFractional {
                s_inner: s1,
                s_outer: s2,
                break_radius: eta1,
                coeff_inner: 1.0 / gamma_s(s1, p, d),
                coeff_outer: 1.0 / gamma_s(s2, p, d),
            },
        }
    }

    pub fn ball_indicator(radius: f64, p: f64, d: u32) -> Self {
        Kernel { dimension: d, exponent: p, profile: Profile::BallIndicator { radius } }
    }

    /// Truncated fractional kernel min(1, |h|^{-d-sp}): bounded core,
    /// fractional tail. Integrable with full support, so it is the
    /// integrable fixture whose critical function exists.
    pub fn truncated_fractional(s: f64, p: f64, d: u32) -> Self {
        assert!(s > 0.0 && s < 1.0 && p >= 1.0);
        // inner exponent 0 is encoded as s_inner = -d/p
        Kernel {
            dimension: d,
            exponent: p,
            profile: Profile::PiecewiseFractional {
                s_inner: -(d as f64) / p,
                s_outer: s,
                break_radius: 1.0,
                coeff_inner: 1.0,
                coeff_outer: 1.0,
            },
        }
    }

    pub fn log_family(a: f64, p: f64, d: u32) -> Self {
        assert!(a > 0.0);
        Kernel { dimension: d, exponent: p, profile: Profile::LogFamily { a } }
    }

    pub fn from_table(curve: LogLogCurve, p: f64, d: u32) -> Self {
        Kernel { dimension: d, exponent: p, profile: Profile::Table(curve) }
    }

    pub fn from_grid(field: GridFunction, p: f64) -> Self {
        let d = field.dimension;
        Kernel { dimension: d, exponent: p, profile: Profile::Grid(field) }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self.profile, Profile::Grid(_))
    }

    pub fn c_d(&self) -> f64 {
        ball_volume(self.dimension)
    }

    /// η(r) = (r/c_d)^{1/d}: radius of the ball of measure r.
    pub fn eta(&self, r: f64) -> f64 {
        (r / self.c_d()).powf(1.0 / self.dimension as f64)
    }

    /// Radial density at |h| = rho. Panics on non-radial tabulations.
    pub fn value(&self, rho: f64) -> f64 {
        let d = self.dimension as f64;
        let p = self.exponent;
        match &self.profile {
            Profile::Fractional { s } => rho.powf(-d - s * p),
            Profile::PiecewiseFractional {
                s_inner,
                s_outer,
                break_radius,
                coeff_inner,
                coeff_outer,
            } => {
                if rho < *break_radius {
                    coeff_inner * rho.powf(-d - s_inner * p)
                } else {
                    coeff_outer * rho.powf(-d - s_outer * p)
                }
            }
            Profile::BallIndicator { radius } => {
                if rho < *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::LogFamily { a } => log_family_value(*a, rho, self.dimension),
            Profile::Table(c) => c.eval(rho),
            Profile::Step { radii, values } => {
                let i = radii.partition_point(|&r| r <= rho);
                if i < values.len() {
                    values[i]
                } else {
                    0.0
                }
            }
            Profile::Grid(_) => panic!("radial value of a non-radial kernel; rearrange first"),
        }
    }

    /// Power-law exponent of ν near the origin.
    pub fn origin_exponent(&self) -> f64 {
        let d = self.dimension as f64;
        let p = self.exponent;
        match &self.profile {
            Profile::Fractional { s } => -d - s * p,
            Profile::PiecewiseFractional { s_inner, .. } => -d - s_inner * p,
            Profile::BallIndicator { .. } | Profile::Step { .. } | Profile::LogFamily { .. } => 0.0,
            Profile::Table(c) => c.head_exponent(),
            Profile::Grid(_) => 0.0,
        }
    }

    /// Power-law exponent of ν at infinity (ignored when compactly supported).
    pub fn tail_exponent(&self) -> f64 {
        let d = self.dimension as f64;
        let p = self.exponent;
        match &self.profile {
            Profile::Fractional { s } => -d - s * p,
            Profile::PiecewiseFractional { s_outer, .. } => -d - s_outer * p,
            Profile::BallIndicator { .. } | Profile::Step { .. } => f64::NEG_INFINITY,
            Profile::LogFamily { .. } => -2.0 * d,
            Profile::Table(c) => c.tail_exponent(),
            Profile::Grid(_) => f64::NEG_INFINITY,
        }
    }

    pub fn support_radius(&self) -> Option<f64> {
        match &self.profile {
            Profile::BallIndicator { radius } => Some(*radius),
            Profile::Step { radii, .. } => radii.last().copied(),
            _ => None,
        }
    }

    /// Radii where the profile has a kink or jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.profile {
            Profile::PiecewiseFractional { break_radius, .. } => vec![*break_radius],
            Profile::BallIndicator { radius } => vec![*radius],
            Profile::Table(c) => c.nodes().map(|(x, _)| x).collect(),
            Profile::Step { radii, .. } => radii.clone(),
            _ => vec![],
        }
    }

    fn is_piecewise_power(&self) -> bool {
        !matches!(self.profile, Profile::LogFamily { .. } | Profile::Grid(_))
    }

    /// Local power-law exponent at radius rho.
    fn local_exponent(&self, rho: f64) -> f64 {
        let d = self.dimension as f64;
        let p = self.exponent;
        match &self.profile {
            Profile::Fractional { s } => -d - s * p,
            Profile::PiecewiseFractional { s_inner, s_outer, break_radius, .. } => {
                if rho < *break_radius {
                    -d - s_inner * p
                } else {
                    -d - s_outer * p
                }
            }
            Profile::BallIndicator { .. } | Profile::Step { .. } => 0.0,
            Profile::Table(c) => c.log_slope(rho),
            _ => unreachable!("local exponent of a non-power profile"),
        }
    }

    /// ∫_{lo<|h|<hi} |h|^a ν(h) dh for radial kernels. `lo` may be 0 and `hi`
    /// may be ∞; divergence is a typed error.
    pub fn radial_weighted_integral(&self, a: f64, lo: f64, hi: f64) -> Result<f64, CoreError> {
        if !self.is_radial() {
            return Err(CoreError::invalid("non-radial tabulated kernel: rearrange first"));
        }
        let d = self.dimension as f64;
        let dcd = d * self.c_d();
        let hi = match self.support_radius() {
            Some(r) => hi.min(r),
            None => hi,
        };
        if lo >= hi {
            return Ok(0.0);
        }
        if self.is_piecewise_power() {
            let mut cuts: Vec<f64> =
                self.breakpoints().into_iter().filter(|&b| b > lo && b < hi).collect();
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            cuts.dedup();
            let mut edges = Vec::with_capacity(cuts.len() + 2);
            edges.push(lo);
            edges.extend(cuts);
            edges.push(hi);
            let mut acc = 0.0;
            for w in edges.windows(2) {
                let (sa, sb) = (w[0], w[1]);
                if sb <= sa {
                    continue;
                }
                let rref = if sa == 0.0 {
                    if sb.is_infinite() {
                        1.0
                    } else {
                        sb * 0.5
                    }
                } else if sb.is_infinite() {
                    sa * 2.0
                } else {
                    (sa * sb).sqrt()
                };
                let vref = self.value(rref);
                if vref == 0.0 {
                    continue;
                }
                let e = self.local_exponent(rref);
                acc += dcd * power_piece(vref, rref, e, e + a + d, sa, sb)?;
            }
            return Ok(acc);
        }
        // smooth non-power profile: Simpson inside an exact window,
        // power-law completions outside it
        let (w0, w1) = (1e-6, 1e6);
        let mut acc = 0.0;
        if lo < w0 {
            let b = w0.min(hi);
            let e = self.origin_exponent();
            acc += dcd * power_piece(self.value(b), b, e, e + a + d, lo, b)?;
        }
        let (ca, cb) = (lo.max(w0), hi.min(w1));
        if cb > ca {
            let (v, _err) = adaptive_simpson(
                |u| {
                    let rho = u.exp();
                    self.value(rho) * rho.powf(a + d)
                },
                ca.ln(),
                cb.ln(),
                1e-9,
            );
            acc += dcd * v;
        }
        if hi > w1 {
            let b = w1.max(lo);
            let e = self.tail_exponent();
            acc += dcd * power_piece(self.value(b), b, e, e + a + d, b, hi)?;
        }
        Ok(acc)
    }

    /// ∫ (1 ∧ |h|^p) ν(h) dh. A non-finite result is the typed "not p-Lévy"
    /// outcome rather than a crash.
    pub fn levy_modular(&self) -> Result<f64, CoreError> {
        let d = self.dimension as f64;
        let p = self.exponent;
        if self.origin_exponent() <= -d - p + 1e-12 {
            return Err(CoreError::NotPLevy {
                reason: format!(
                    "origin exponent {:.4} ≤ -d-p = {:.4}",
                    self.origin_exponent(),
                    -d - p
                ),
            });
        }
        if self.support_radius().is_none() && self.tail_exponent() >= -d - 1e-12 {
            return Err(CoreError::NotPLevy {
                reason: format!("tail exponent {:.4} ≥ -d = {:.4}", self.tail_exponent(), -d),
            });
        }
        let near = self.radial_weighted_integral(p, 0.0, 1.0)?;
        let far = self.radial_weighted_integral(0.0, 1.0, f64::INFINITY)?;
        Ok(near + far)
    }

    /// ∫_{|h|>rho} ν(h) dh.
    pub fn tail_mass(&self, rho: f64) -> Result<f64, CoreError> {
        assert!(rho > 0.0);
        if self.support_radius().is_none() && self.tail_exponent() >= -(self.dimension as f64) - 1e-12 {
            return Err(CoreError::DivergentTail { exponent: self.tail_exponent() });
        }
        self.radial_weighted_integral(0.0, rho, f64::INFINITY)
    }

    fn scan_grid(&self) -> Vec<f64> {
        let (lo, hi) = match self.support_radius() {
            Some(r) => (r * 1e-9, r),
            None => (1e-10, 1e10),
        };
        let n = 256;
        let (lln, lhn) = (lo.ln(), hi.ln());
        let mut g: Vec<f64> =
            (0..n).map(|i| (lln + (lhn - lln) * i as f64 / (n - 1) as f64).exp()).collect();
        for b in self.breakpoints() {
            if b > lo && b < hi {
                g.push(b * (1.0 - 1e-9));
                g.push(b * (1.0 + 1e-9));
            }
        }
        g.sort_by(|x, y| x.partial_cmp(y).unwrap());
        g
    }

    /// True when ν is nonincreasing in |h| on the verification grid.
    pub fn is_nonincreasing(&self) -> bool {
        if !self.is_radial() {
            return false;
        }
        let mut prev = f64::INFINITY;
        for rho in self.scan_grid() {
            let v = self.value(rho);
            if v > prev * (1.0 + 1e-12) {
                return false;
            }
            prev = v;
        }
        true
    }

    /// True when ν is strictly decreasing (no flats) on the verification grid.
    fn is_strictly_decreasing(&self) -> bool {
        if !self.is_radial() {
            return false;
        }
        let mut prev = f64::INFINITY;
        for rho in self.scan_grid() {
            let v = self.value(rho);
            if v >= prev || v.is_nan() {
                return false;
            }
            prev = v;
        }
        true
    }

    /// κ = inf over sampled radius pairs r1 ≥ r2 of ν(r2)/ν(r1), clamped to 1.
    /// 256 log-spaced radii over the declared support plus the breakpoints.
    pub fn almost_decreasing_kappa(&self) -> Result<f64, CoreError> {
        if !self.is_radial() {
            return Err(CoreError::invalid("κ requires a radial kernel"));
        }
        let grid = self.scan_grid();
        let values: Vec<f64> = grid.iter().map(|&r| self.value(r)).collect();
        // an interior zero followed by a positive value degenerates κ
        if let Some(i) = values.iter().position(|&v| v == 0.0) {
            if let Some(j) = (i + 1..values.len()).find(|&j| values[j] > 0.0) {
                return Err(CoreError::KappaDegenerate { witness: (grid[i], grid[j]) });
            }
        }
        let mut prefix_min = f64::INFINITY;
        let mut prefix_min_at = grid[0];
        let mut kappa = 1.0f64;
        let mut witness = (grid[0], grid[0]);
        for (&rho, &v) in grid.iter().zip(&values) {
            if v < prefix_min {
                prefix_min = v;
                prefix_min_at = rho;
            }
            if v > 0.0 {
                let ratio = prefix_min / v;
                if ratio < kappa {
                    kappa = ratio;
                    witness = (prefix_min_at, rho);
                }
            }
        }
        if kappa <= 1e-9 {
            return Err(CoreError::KappaDegenerate { witness });
        }
        Ok(kappa.min(1.0))
    }

    /// ν*(r): value of the symmetric rearrangement at radius r.
    pub fn rearranged_value(&self, r: f64) -> f64 {
        if self.is_radial() && self.is_nonincreasing() {
            return self.value(r);
        }
        let target = self.c_d() * r.powf(self.dimension as f64);
        if let Profile::Grid(field) = &self.profile {
            let mut vals: Vec<f64> = field.values.iter().map(|v| v.abs()).collect();
            vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let cell = field.cell_measure();
            let k = (target / cell).floor() as usize;
            return if k < vals.len() { vals[k] } else { 0.0 };
        }
        // radial but not monotone: invert the level-measure function by
        // geometric bisection (levels span many decades)
        let sup = self.scan_grid().iter().map(|&r| self.value(r)).fold(0.0, f64::max);
        if self.level_measure(sup) > target {
            return f64::INFINITY;
        }
        let mut lo = sup * 1e-45;
        if self.level_measure(lo) <= target {
            return lo;
        }
        let mut hi = sup;
        for _ in 0..160 {
            let mid = (lo * hi).sqrt();
            if self.level_measure(mid) <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// |{ν > s}| via interval scanning of the radial profile.
    fn level_measure(&self, s: f64) -> f64 {
        let d = self.dimension as f64;
        self.level_intervals(s, true)
            .iter()
            .map(|&(a, b)| self.c_d() * (b.powf(d) - a.powf(d)))
            .sum()
    }

    /// Intervals of {ρ : ν(ρ) > s} (above = true) or {ρ : ν(ρ) < s}.
    /// The scan covers [1e-9, 1e9] (or the support) with 2048 extra points;
    /// crossings are refined by bisection.
    fn level_intervals(&self, s: f64, above: bool) -> Vec<(f64, f64)> {
        let mut grid = self.scan_grid();
        let (l0, l1) = (grid[0].ln(), grid[grid.len() - 1].ln());
        grid.extend((0..2048).map(|i| (l0 + (l1 - l0) * i as f64 / 2047.0).exp()));
        grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let test = |rho: f64| {
            let v = self.value(rho);
            if above {
                v > s
            } else {
                v < s
            }
        };
        let breaks = self.breakpoints();
        let snap = |x: f64| -> f64 {
            for &b in &breaks {
                if (x / b - 1.0).abs() < 1e-9 {
                    return b;
                }
            }
            x
        };
        let mut ivs: Vec<(f64, f64)> = Vec::new();
        let mut open: Option<f64> = if test(grid[0]) { Some(0.0) } else { None };
        let mut prev = grid[0];
        let mut prev_in = open.is_some();
        for &rho in &grid[1..] {
            let now_in = test(rho);
            if now_in != prev_in {
                let cross = snap(bisect_crossing(&test, prev, rho));
                if now_in {
                    open = Some(cross);
                } else if let Some(a) = open.take() {
                    ivs.push((a, cross));
                }
            }
            prev = rho;
            prev_in = now_in;
        }
        match self.support_radius() {
            Some(r) => {
                if let Some(a) = open.take() {
                    ivs.push((a, r));
                }
                // beyond the support ν = 0, below every positive level
                if !above && s > 0.0 {
                    match ivs.last_mut() {
                        Some(last) if last.1 >= r => last.1 = f64::INFINITY,
                        _ => ivs.push((r, f64::INFINITY)),
                    }
                }
            }
            None => {
                if let Some(a) = open.take() {
                    ivs.push((a, f64::INFINITY));
                }
            }
        }
        ivs
    }

    /// ν^#(m) = ∫_{ {ν < ν*(η(m))} } ν(h) dh, the exterior-mass lower bound.
    /// Nonincreasing in m; → ∫ν as m → 0 and → 0 as m → ∞ for kernels
    /// integrable off a ball.
    pub fn nu_sharp(&self, measure: f64) -> Result<f64, CoreError> {
        assert!(measure > 0.0);
        if let Profile::Grid(_) = self.profile {
            return self.rearrange()?.nu_sharp(measure);
        }
        let r_e = self.eta(measure);
        if self.is_strictly_decreasing() {
            // {ν < ν(r_E)} = {|h| > r_E} exactly
            return self.tail_mass(r_e);
        }
        let lambda = self.rearranged_value(r_e);
        if lambda <= 0.0 {
            return Ok(0.0);
        }
        if lambda.is_infinite() {
            return Err(CoreError::invalid(
                "ν* exceeds the scan range; ν^# unavailable at this tiny measure",
            ));
        }
        let mut acc = 0.0;
        for (a, b) in self.level_intervals(lambda, false) {
            acc += self.radial_weighted_integral(0.0, a, b)?;
        }
        Ok(acc)
    }

    /// Symmetric rearrangement ν*: radial, radially nonincreasing,
    /// equimeasurable with ν. Radial nonincreasing inputs are fixed points.
    ///
    /// Grid tabulations rearrange exactly (cell multiset); radial
    /// non-monotone profiles are rearranged from 4096 sampled annuli.
    pub fn rearrange(&self) -> Result<Kernel, CoreError> {
        if self.is_radial() && self.is_nonincreasing() {
            return Ok(self.clone());
        }
        match &self.profile {
            Profile::Grid(field) => {
                let cell = field.cell_measure();
                let mut vals: Vec<f64> = field.values.iter().map(|v| v.abs()).collect();
                vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
                while vals.last().is_some_and(|&v| v == 0.0) {
                    vals.pop();
                }
                Ok(self.step_from_sorted(vals.into_iter().map(|v| (v, cell)).collect()))
            }
            _ => {
                let n = 4096;
                let (lo, hi) = match self.support_radius() {
                    Some(r) => (r * 1e-6, r),
                    None => (1e-6, 1e6),
                };
                let edges: Vec<f64> = (0..=n)
                    .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / n as f64).exp())
                    .collect();
                let d = self.dimension as f64;
                let mut cells: Vec<(f64, f64)> = edges
                    .windows(2)
                    .map(|w| {
                        let m = self.c_d() * (w[1].powf(d) - w[0].powf(d));
                        (self.value((w[0] * w[1]).sqrt()), m)
                    })
                    .collect();
                cells.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                Ok(self.step_from_sorted(cells))
            }
        }
    }

    fn step_from_sorted(&self, cells: Vec<(f64, f64)>) -> Kernel {
        let d = self.dimension as f64;
        let inv_cd = 1.0 / self.c_d();
        let mut radii = Vec::with_capacity(cells.len());
        let mut values = Vec::with_capacity(cells.len());
        let mut cum = 0.0;
        for (v, m) in cells {
            cum += m;
            radii.push((cum * inv_cd).powf(1.0 / d));
            values.push(v);
        }
        Kernel {
            dimension: self.dimension,
            exponent: self.exponent,
            profile: Profile::Step { radii, values },
        }
    }

    /// For piecewise-fractional kernels: component orders (s1 < s2) and the
    /// constant c₂ with max(ν_{s1}, ν_{s2}) ≤ c₂·ν, for per-component
    /// verification.
    pub fn fractional_components(&self) -> Option<(f64, f64, f64)> {
        if let Profile::PiecewiseFractional { s_inner, s_outer, .. } = self.profile {
            if !(0.0..1.0).contains(&s_inner) || !(0.0..1.0).contains(&s_outer) {
                return None;
            }
            let (s1, s2) =
                if s_inner < s_outer { (s_inner, s_outer) } else { (s_outer, s_inner) };
            let k1 = Kernel::fractional(s1, self.exponent, self.dimension);
            let k2 = Kernel::fractional(s2, self.exponent, self.dimension);
            let c2 = self
                .scan_grid()
                .iter()
                .map(|&rho| k1.value(rho).max(k2.value(rho)) / self.value(rho))
                .fold(0.0, f64::max);
            Some((s1, s2, c2))
        } else {
            None
        }
    }
}

/// ν^a at radius ρ for the log-family kernel: with r = c_d ρ^d and
/// ξ(r) = ln((a+1)e^{1/r} − a) = ln1p((a+1)(e^{1/r}−1)),
/// ν(ρ) = (ξ(r) + r ξ'(r)) / (r ξ(r))².
fn log_family_value(a: f64, rho: f64, d: u32) -> f64 {
    let r = ball_volume(d) * rho.powf(d as f64);
    let inv = 1.0 / r;
    let xi = if inv > 30.0 {
        inv + ((a + 1.0) - a * (-inv).exp()).ln()
    } else {
        ((a + 1.0) * inv.exp_m1()).ln_1p()
    };
    // r ξ'(r) = -(a+1) / (r·((a+1) − a e^{-1/r}))
    let r_xi_prime = -(a + 1.0) / (r * ((a + 1.0) - a * (-inv).exp()));
    let num = xi + r_xi_prime;
    let den = r * xi;
    (num / (den * den)).max(0.0)
}

/// ∫_A^B v(ρ)·ρ^{a+d-1} dρ for one power piece v(ρ) = vref·(ρ/rref)^e, with
/// etot = e + a + d. Closed form; A = 0 and B = ∞ handled via etot's sign.
fn power_piece(vref: f64, rref: f64, e: f64, etot: f64, a: f64, b: f64) -> Result<f64, CoreError> {
    if vref == 0.0 {
        return Ok(0.0);
    }
    // integrand = c·ρ^{etot-1} with c = vref·rref^{-e}
    let c = vref * rref.powf(-e);
    let upper = if b.is_infinite() {
        if etot >= -1e-13 {
            return Err(CoreError::DivergentTail { exponent: etot });
        }
        0.0
    } else {
        b.powf(etot)
    };
    let lower = if a == 0.0 {
        if etot <= 1e-13 {
            return Err(CoreError::NotPLevy {
                reason: format!("integral diverges at the origin (net exponent {etot:.4})"),
            });
        }
        0.0
    } else {
        a.powf(etot)
    };
    if etot.abs() < 1e-13 {
        return Ok(c * (b / a).ln());
    }
    Ok(c * (upper - lower) / etot)
}

fn bisect_crossing(inside: &impl Fn(f64) -> bool, mut a: f64, mut b: f64) -> f64 {
    let target = inside(b);
    for _ in 0..60 {
        let m = (a * b).sqrt();
        if inside(m) == target {
            b = m;
        } else {
            a = m;
        }
    }
    (a * b).sqrt()
}

/// The profile w: w^p(r) = r·(tail mass at η(r)) in tail-mass mode, or
/// w^p(r) = r·ν^#(r) in the rearrangement mode.
#[derive(Debug, Clone)]
pub struct TailProfile {
    pub curve: LogLogCurve,
    pub dimension: u32,
    pub exponent: f64,
    pub mode: WMode,
}

impl TailProfile {
    pub fn w(&self, r: f64) -> f64 {
        self.curve.eval(r)
    }

    pub fn w_pow_p(&self, r: f64) -> f64 {
        self.curve.eval(r).powf(self.exponent)
    }

    pub fn c_d(&self) -> f64 {
        ball_volume(self.dimension)
    }

    pub fn eta(&self, r: f64) -> f64 {
        (r / self.c_d()).powf(1.0 / self.dimension as f64)
    }
}

/// Sampling range for w: wide enough that the induced critical function
/// covers several decades around t = 1 for all fixtures.
const W_GRID: (f64, f64, usize) = (1e-14, 1e12, 384);

/// Build the profile w for a radial p-Lévy kernel with full support.
/// Kernel breakpoints map to exact grid nodes at r = c_d·b^d, so w stays an
/// exact piecewise power law for piecewise-power kernels.
pub fn w_profile(kernel: &Kernel, mode: WMode) -> Result<TailProfile, CoreError> {
    if !kernel.is_radial() {
        return Err(CoreError::invalid("w profile requires a radial kernel"));
    }
    let p = kernel.exponent;
    let (lo, hi, n) = match mode {
        // the ν# generator of a non-monotone kernel goes through level-set
        // scans; keep the grid inside the scan window's reliable range
        WMode::NuSharp if !kernel.is_nonincreasing() => (1e-8, 1e8, W_GRID.2),
        _ => W_GRID,
    };
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let breaks = kernel.breakpoints();
    if breaks.len() <= 64 {
        for b in breaks {
            let r = kernel.c_d() * b.powf(kernel.dimension as f64);
            if r > lo && r < hi {
                grid.push(r);
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a / *b - 1.0).abs() < 1e-13);
    let mut rs = Vec::with_capacity(grid.len());
    let mut ws = Vec::with_capacity(grid.len());
    for r in grid {
        let gen = match mode {
            WMode::TailMass => kernel.tail_mass(kernel.eta(r))?,
            WMode::NuSharp => kernel.nu_sharp(r)?,
        };
        if gen <= 0.0 {
            return Err(CoreError::WSaturates { radius: r });
        }
        rs.push(r);
        ws.push((r * gen).powf(1.0 / p));
    }
    let curve = LogLogCurve::from_samples(&rs, &ws)?;
    if !curve.is_strictly_increasing() {
        return Err(CoreError::WSaturates { radius: curve.first_flat().unwrap_or(rs[0]) });
    }
    // r ↦ w^p(r)/r must be nonincreasing
    let mut prev = f64::INFINITY;
    for (r, w) in curve.nodes() {
        let g = w.powf(p) / r;
        if g > prev * (1.0 + 1e-9) {
            return Err(CoreError::invalid(format!("w^p(r)/r increases near r = {r:.3e}")));
        }
        prev = g;
    }
    Ok(TailProfile { curve, dimension: kernel.dimension, exponent: p, mode })
}

/// Solve the inverse problem: recover the kernel whose critical Young
/// function is φ, via ν(η(r)) = −d/dr (w^p(r)/r) differentiated on the log
/// grid (centered log-slopes; exact on power-law segments).
pub fn kernel_from_young(phi: &YoungFunction, p: f64, d: u32) -> Result<Kernel, CoreError> {
    let inv = phi.inverse_curve();
    // w(r) = 1/φ^{-1}(1/r): nodes (y, t) of φ^{-1} map to r = 1/y, w = 1/t
    let nodes: Vec<(f64, f64)> = inv.nodes().collect();
    let mut rs: Vec<f64> = Vec::with_capacity(nodes.len());
    let mut gs: Vec<f64> = Vec::with_capacity(nodes.len());
    for &(y, t) in nodes.iter().rev() {
        let r = 1.0 / y;
        let w = 1.0 / t;
        rs.push(r);
        gs.push(w.powf(p) / r);
    }
    let n = rs.len();
    if n < 3 {
        return Err(CoreError::invalid("Young function grid too coarse for differentiation"));
    }
    let cd = ball_volume(d);
    let mut rhos = Vec::with_capacity(n);
    let mut nus = Vec::with_capacity(n);
    for i in 0..n {
        let (i0, i1) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        let slope = (gs[i1].ln() - gs[i0].ln()) / (rs[i1].ln() - rs[i0].ln());
        let nu = -slope * gs[i] / rs[i];
        if nu < -1e-9 * (gs[i] / rs[i]) {
            return Err(CoreError::NegativeDensity {
                radius: (rs[i] / cd).powf(1.0 / d as f64),
            });
        }
        if nu > 0.0 {
            rhos.push((rs[i] / cd).powf(1.0 / d as f64));
            nus.push(nu);
        }
    }
    if rhos.len() < 2 {
        return Err(CoreError::invalid("recovered kernel density vanishes"));
    }
    let curve = LogLogCurve::from_samples(&rhos, &nus)?;
    Ok(Kernel { dimension: d, exponent: p, profile: Profile::Table(curve) })
}

/// A measurable test set: a finite disjoint union of axis-aligned boxes or
/// balls (intervals in d = 1).
#[derive(Debug, Clone)]
pub enum SetComponent {
    Interval { a: f64, b: f64 },
    Box2 { lo: [f64; 2], hi: [f64; 2] },
    Ball { center: Vec<f64>, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct SetSpec {
    pub dimension: u32,
    pub components: Vec<SetComponent>,
    measure: f64,
    diameter: f64,
}

impl SetSpec {
    pub fn interval(a: f64, b: f64) -> Self {
        SetSpec::new(1, vec![SetComponent::Interval { a, b }]).unwrap()
    }

    pub fn new(dimension: u32, components: Vec<SetComponent>) -> Result<Self, CoreError> {
        if components.is_empty() {
            return Err(CoreError::invalid("empty set"));
        }
        for c in &components {
            if component_measure(c, dimension) <= 0.0 {
                return Err(CoreError::invalid("set component with nonpositive measure"));
            }
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                if components_overlap(&components[i], &components[j]) {
                    return Err(CoreError::invalid("set components must be pairwise disjoint"));
                }
            }
        }
        let measure = components.iter().map(|c| component_measure(c, dimension)).sum();
        let mut diameter = 0.0f64;
        for a in &components {
            for b in &components {
                diameter = diameter.max(component_pair_extent(a, b));
            }
        }
        Ok(SetSpec { dimension, components, measure, diameter })
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// r_E = η(|E|): radius of the rearranged ball.
    pub fn rearranged_radius(&self) -> f64 {
        (self.measure / ball_volume(self.dimension)).powf(1.0 / self.dimension as f64)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.components.iter().any(|c| component_contains(c, x))
    }

    /// Distance from a point to the set (0 inside).
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.components.iter().map(|c| component_distance(c, x)).fold(f64::INFINITY, f64::min)
    }

    /// Smallest axis-aligned bounding box (lo, hi).
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dimension as usize;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for c in &self.components {
            let (clo, chi) = component_bounds(c);
            for k in 0..d {
                lo[k] = lo[k].min(clo[k]);
                hi[k] = hi[k].max(chi[k]);
            }
        }
        (lo, hi)
    }
}

fn component_measure(c: &SetComponent, d: u32) -> f64 {
    match c {
        SetComponent::Interval { a, b } => b - a,
        SetComponent::Box2 { lo, hi } => (hi[0] - lo[0]) * (hi[1] - lo[1]),
        SetComponent::Ball { radius, .. } => ball_volume(d) * radius.powf(d as f64),
    }
}

fn component_contains(c: &SetComponent, x: &[f64]) -> bool {
    match c {
        SetComponent::Interval { a, b } => x[0] > *a && x[0] < *b,
        SetComponent::Box2 { lo, hi } => (0..2).all(|k| x[k] > lo[k] && x[k] < hi[k]),
        SetComponent::Ball { center, radius } => {
            let d2: f64 = center.iter().zip(x).map(|(c, x)| (x - c) * (x - c)).sum();
            d2 < radius * radius
        }
    }
}

fn component_distance(c: &SetComponent, x: &[f64]) -> f64 {
    match c {
        SetComponent::Interval { a, b } => (a - x[0]).max(x[0] - b).max(0.0),
        SetComponent::Box2 { lo, hi } => {
            let mut d2 = 0.0;
            for k in 0..2 {
                let g = (lo[k] - x[k]).max(x[k] - hi[k]).max(0.0);
                d2 += g * g;
            }
            d2.sqrt()
        }
        SetComponent::Ball { center, radius } => {
            let d2: f64 = center.iter().zip(x).map(|(c, x)| (x - c) * (x - c)).sum();
            (d2.sqrt() - radius).max(0.0)
        }
    }
}

fn component_bounds(c: &SetComponent) -> (Vec<f64>, Vec<f64>) {
    match c {
        SetComponent::Interval { a, b } => (vec![*a], vec![*b]),
        SetComponent::Box2 { lo, hi } => (lo.to_vec(), hi.to_vec()),
        SetComponent::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        ),
    }
}

/// Largest distance between points of the two components (via corner bounds;
/// exact for boxes/intervals, exact for balls through the center line).
fn component_pair_extent(a: &SetComponent, b: &SetComponent) -> f64 {
    use SetComponent::*;
    if let (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) = (a, b) {
        let d2: f64 = c1.iter().zip(c2).map(|(x, y)| (x - y) * (x - y)).sum();
        return d2.sqrt() + r1 + r2;
    }
    let (alo, ahi) = component_bounds(a);
    let (blo, bhi) = component_bounds(b);
    let mut d2 = 0.0;
    for k in 0..alo.len() {
        let span = (ahi[k] - blo[k]).abs().max((bhi[k] - alo[k]).abs());
        d2 += span * span;
    }
    d2.sqrt()
}

fn components_overlap(a: &SetComponent, b: &SetComponent) -> bool {
    use SetComponent::*;
    match (a, b) {
        (Interval { a: a1, b: b1 }, Interval { a: a2, b: b2 }) => a1.max(*a2) < b1.min(*b2),
        (Box2 { lo: l1, hi: h1 }, Box2 { lo: l2, hi: h2 }) => {
            (0..2).all(|k| l1[k].max(l2[k]) < h1[k].min(h2[k]))
        }
        (Ball { center: c1, radius: r1 }, Ball { center: c2, radius: r2 }) => {
            let d2: f64 = c1.iter().zip(c2).map(|(x, y)| (x - y) * (x - y)).sum();
            d2.sqrt() < r1 + r2
        }
        (Box2 { lo, hi }, Ball { center, radius }) | (Ball { center, radius }, Box2 { lo, hi }) => {
            let mut d2 = 0.0;
            for k in 0..2 {
                let g = (lo[k] - center[k]).max(center[k] - hi[k]).max(0.0);
                d2 += g * g;
            }
            d2.sqrt() < *radius
        }
        (Interval { .. }, _) | (_, Interval { .. }) => false,
    }
}

/// Report of one exterior-mass verification: ∫_{E^c} ν(x−y) dy against both
/// proof-side lower bounds.
#[derive(Debug, Clone)]
pub struct ExteriorMassReport {
    pub integral: f64,
    pub error_estimate: f64,
    /// κ²·w^p(|E|)/|E| (radial almost-decreasing kernels)
    pub bound_almost_decreasing: Option<f64>,
    /// ν^#(|E|) (any kernel)
    pub bound_nu_sharp: f64,
    pub margin_almost_decreasing: Option<f64>,
    pub margin_nu_sharp: f64,
    pub converged: bool,
}

/// Midpoint quadrature of ∫_{E^c} ν(x−y) dy over a box centered at x plus
/// the analytic radial tail beyond the box; asserted against κ²w^p(|E|)/|E|
/// and ν^#(|E|).
pub fn exterior_mass_bound(
    kernel: &Kernel,
    set: &SetSpec,
    x: &[f64],
    samples: usize,
) -> Result<ExteriorMassReport, CoreError> {
    assert_eq!(kernel.dimension, set.dimension);
    let m = set.measure();
    let bound_sharp = kernel.nu_sharp(m)?;
    let bound_ad = if kernel.is_radial() {
        kernel.almost_decreasing_kappa().ok().map(|kappa| {
            kappa * kappa * kernel.tail_mass(kernel.eta(m)).unwrap_or(0.0)
        })
    } else {
        None
    };
    // x strictly outside Ē with a singular kernel: the integral contains the
    // whole singular core and is infinite
    if set.distance(x) > 0.0 && kernel.origin_exponent() <= -(kernel.dimension as f64) {
        return Ok(ExteriorMassReport {
            integral: f64::INFINITY,
            error_estimate: 0.0,
            bound_almost_decreasing: bound_ad,
            bound_nu_sharp: bound_sharp,
            margin_almost_decreasing: bound_ad.map(|_| f64::INFINITY),
            margin_nu_sharp: f64::INFINITY,
            converged: true,
        });
    }
    let coarse = exterior_quadrature(kernel, set, x, samples);
    let fine = exterior_quadrature(kernel, set, x, samples * 2);
    let err = (fine - coarse).abs();
    let converged = err <= 0.01 * bound_sharp.max(fine.abs() * 1e-3).max(f64::MIN_POSITIVE);
    Ok(ExteriorMassReport {
        integral: fine,
        error_estimate: err,
        bound_almost_decreasing: bound_ad,
        bound_nu_sharp: bound_sharp,
        margin_almost_decreasing: bound_ad.map(|b| fine - b),
        margin_nu_sharp: fine - bound_sharp,
        converged,
    })
}

fn exterior_quadrature(kernel: &Kernel, set: &SetSpec, x: &[f64], n: usize) -> f64 {
    let d = kernel.dimension as usize;
    let (blo, bhi) = set.bounding_box();
    let mut half = 0.0f64;
    for k in 0..d {
        half = half.max((x[k] - blo[k]).abs().max((x[k] - bhi[k]).abs()));
    }
    let l = half * 1.5;
    let h = 2.0 * l / n as f64;
    let mut terms = Vec::new();
    let mut y = vec![0.0; d];
    if d == 1 {
        for i in 0..n {
            y[0] = x[0] - l + (i as f64 + 0.5) * h;
            if !set.contains(&y) {
                terms.push(kernel.value((y[0] - x[0]).abs()) * h);
            }
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                y[0] = x[0] - l + (i as f64 + 0.5) * h;
                y[1] = x[1] - l + (j as f64 + 0.5) * h;
                let r = ((y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2)).sqrt();
                if r > l {
                    continue; // handled by the radial tail piece
                }
                if !set.contains(&y) {
                    terms.push(kernel.value(r) * h * h);
                }
            }
        }
    }
    pairwise_sum(&terms) + kernel.tail_mass(l).unwrap_or(0.0)
}
