//! Grid functions and their norms: the nonlocal seminorm, the gradient
//! seminorm, Lebesgue norms, the sphere-average constant K_{d,p}, symmetric
//! decreasing rearrangement, and the s → 1 asymptotic check.
//!
//! Functions live on uniform grids (d ∈ {1,2}), sampled at cell centers.
//! The singular part of the nonlocal seminorm (|h| < δ = 4·spacing) is
//! integrated through the gradient surrogate ∫|∇u·h|^p ν(h) dh, which the
//! p-Lévy condition makes finite; the rest is direct quadrature of
//! E(h) = ∫|u(x+h)−u(x)|^p dx on a log-radial grid, with the exact far field
//! 2‖u‖_p^p · tailmass once the shifted supports separate.

use crate::error::CoreError;
use crate::kernels::{Kernel, SetSpec};
use crate::orlicz::NormResult;
use crate::quadrature::{adaptive_simpson, pairwise_sum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    PiecewiseLinear,
    /// discontinuous data (indicators); rejected by the BBM check
    Jump,
}

impl std::fmt::Display for Smoothness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Smoothness::Smooth => write!(f, "smooth"),
            Smoothness::PiecewiseLinear => write!(f, "piecewise-linear"),
            Smoothness::Jump => write!(f, "jump"),
        }
    }
}

/// A compactly supported sampled function on a uniform grid, values at cell
/// centers x_i = origin + (i + ½)h.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub dimension: u32,
    pub spacing: f64,
    pub origin: [f64; 2],
    /// cells per axis; shape[1] = 1 in d = 1
    pub shape: [usize; 2],
    /// row-major (i * shape[1] + j)
    pub values: Vec<f64>,
    pub smoothness: Smoothness,
}

impl GridFunction {
    pub fn sample_1d(
        f: impl Fn(f64) -> f64,
        lo: f64,
        hi: f64,
        n: usize,
        smoothness: Smoothness,
    ) -> Self {
        let h = (hi - lo) / n as f64;
        let values = (0..n).map(|i| f(lo + (i as f64 + 0.5) * h)).collect();
        GridFunction {
            dimension: 1,
            spacing: h,
            origin: [lo, 0.0],
            shape: [n, 1],
            values,
            smoothness,
        }
    }

    pub fn sample_2d(
        f: impl Fn(f64, f64) -> f64,
        lo: [f64; 2],
        hi: [f64; 2],
        n: usize,
        smoothness: Smoothness,
    ) -> Self {
        let h = (hi[0] - lo[0]) / n as f64;
        assert!(
            ((hi[1] - lo[1]) / n as f64 - h).abs() < 1e-12 * h,
            "2-d grids must be square"
        );
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = lo[0] + (i as f64 + 0.5) * h;
                let y = lo[1] + (j as f64 + 0.5) * h;
                values.push(f(x, y));
            }
        }
        GridFunction {
            dimension: 2,
            spacing: h,
            origin: lo,
            shape: [n, n],
            values,
            smoothness,
        }
    }

    pub fn cell_measure(&self) -> f64 {
        self.spacing.powi(self.dimension as i32)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + (i as f64 + 0.5) * self.spacing,
            self.origin[1] + (j as f64 + 0.5) * self.spacing,
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Multilinear interpolation, zero outside the box.
    pub fn interp(&self, x: &[f64]) -> f64 {
        let h = self.spacing;
        if self.dimension == 1 {
            let t = (x[0] - self.origin[0]) / h - 0.5;
            let i0 = t.floor();
            let frac = t - i0;
            let a = self.cell_value(i0 as isize, 0);
            let b = self.cell_value(i0 as isize + 1, 0);
            a * (1.0 - frac) + b * frac
        } else {
            let tx = (x[0] - self.origin[0]) / h - 0.5;
            let ty = (x[1] - self.origin[1]) / h - 0.5;
            let (i0, j0) = (tx.floor(), ty.floor());
            let (fx, fy) = (tx - i0, ty - j0);
            let (i0, j0) = (i0 as isize, j0 as isize);
            let v00 = self.cell_value(i0, j0);
            let v10 = self.cell_value(i0 + 1, j0);
            let v01 = self.cell_value(i0, j0 + 1);
            let v11 = self.cell_value(i0 + 1, j0 + 1);
            v00 * (1.0 - fx) * (1.0 - fy)
                + v10 * fx * (1.0 - fy)
                + v01 * (1.0 - fx) * fy
                + v11 * fx * fy
        }
    }

    fn cell_value(&self, i: isize, j: isize) -> f64 {
        if i < 0 || j < 0 || i as usize >= self.shape[0] || j as usize >= self.shape[1] {
            return 0.0;
        }
        self.values[i as usize * self.shape[1] + j as usize]
    }

    /// ‖u‖_{L^p} over the grid (whole box).
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.lp_power(p).powf(1.0 / p)
    }

    /// ∫|u|^p over the grid.
    pub fn lp_power(&self, p: f64) -> f64 {
        let terms: Vec<f64> = self.values.iter().map(|v| v.abs().powf(p)).collect();
        pairwise_sum(&terms) * self.cell_measure()
    }

    /// ∫_Ω |u|^p restricted to a set.
    pub fn lp_power_on(&self, p: f64, set: &SetSpec) -> f64 {
        let mut terms = Vec::new();
        self.for_each_cell(|x, v| {
            if set.contains(&x) {
                terms.push(v.abs().powf(p));
            }
        });
        pairwise_sum(&terms) * self.cell_measure()
    }

    /// Mean value over a set.
    pub fn mean_on(&self, set: &SetSpec) -> f64 {
        let mut sum = Vec::new();
        let mut count = 0usize;
        self.for_each_cell(|x, v| {
            if set.contains(&x) {
                sum.push(v);
                count += 1;
            }
        });
        if count == 0 {
            0.0
        } else {
            pairwise_sum(&sum) / count as f64
        }
    }

    fn for_each_cell(&self, mut f: impl FnMut([f64; 2], f64)) {
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                f(self.center(i, j), self.values[i * self.shape[1] + j]);
            }
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = f(*v);
        }
        out
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// u_λ(x) = u(λx): same cell count, box rescaled by 1/λ, values resampled
    /// by interpolation.
    pub fn dilate(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0);
        let mut out = self.clone();
        out.spacing = self.spacing / lambda;
        out.origin = [self.origin[0] / lambda, self.origin[1] / lambda];
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                let c = out.center(i, j);
                out.values[i * self.shape[1] + j] =
                    self.interp(&[c[0] * lambda, c[1] * lambda]);
            }
        }
        out
    }

    /// Central-difference gradient magnitude per cell.
    pub fn gradient_magnitude(&self) -> Vec<f64> {
        let inv2h = 1.0 / (2.0 * self.spacing);
        let mut out = Vec::with_capacity(self.values.len());
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                let gx = (self.cell_value(i as isize + 1, j as isize)
                    - self.cell_value(i as isize - 1, j as isize))
                    * inv2h;
                if self.dimension == 1 {
                    out.push(gx.abs());
                } else {
                    let gy = (self.cell_value(i as isize, j as isize + 1)
                        - self.cell_value(i as isize, j as isize - 1))
                        * inv2h;
                    out.push((gx * gx + gy * gy).sqrt());
                }
            }
        }
        out
    }

    /// Support bounding box (lo, hi) padded by one cell; None when u ≡ 0.
    pub fn support_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let d = self.dimension as usize;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        let mut any = false;
        self.for_each_cell(|x, v| {
            if v != 0.0 {
                any = true;
                for k in 0..d {
                    lo[k] = lo[k].min(x[k]);
                    hi[k] = hi[k].max(x[k]);
                }
            }
        });
        if !any {
            return None;
        }
        for k in 0..d {
            lo[k] -= self.spacing;
            hi[k] += self.spacing;
        }
        Some((lo, hi))
    }

    pub fn support_measure(&self) -> f64 {
        self.cell_measure() * self.values.iter().filter(|&&v| v != 0.0).count() as f64
    }

    /// CSV export: d=1 is (x, u) rows; d=2 is a row-major block. The header
    /// carries the box, spacing and smoothness class.
    pub fn to_csv(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(
            out,
            "# grid d={} h={:.12e} x0={:.12e} y0={:.12e} nx={} ny={} class={}",
            self.dimension,
            self.spacing,
            self.origin[0],
            self.origin[1],
            self.shape[0],
            self.shape[1],
            self.smoothness
        )?;
        if self.dimension == 1 {
            for i in 0..self.shape[0] {
                writeln!(out, "{:.12e},{:.12e}", self.center(i, 0)[0], self.values[i])?;
            }
        } else {
            for i in 0..self.shape[0] {
                let row: Vec<String> = (0..self.shape[1])
                    .map(|j| format!("{:.12e}", self.values[i * self.shape[1] + j]))
                    .collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self, CoreError> {
        let mut header = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                header = Some(rest.to_string());
                continue;
            }
            let row: Result<Vec<f64>, _> =
                line.split(',').map(|t| t.trim().parse::<f64>()).collect();
            rows.push(row.map_err(|_| CoreError::invalid("bad csv row"))?);
        }
        let header = header.ok_or_else(|| CoreError::invalid("grid csv missing header"))?;
        let mut d = 1u32;
        let mut h = 0.0;
        let mut x0 = 0.0;
        let mut y0 = 0.0;
        let mut nx = 0usize;
        let mut ny = 1usize;
        let mut class = Smoothness::PiecewiseLinear;
        for tok in header.split_whitespace() {
            if let Some((k, v)) = tok.split_once('=') {
                match k {
                    "d" => d = v.parse().map_err(|_| CoreError::invalid("bad d"))?,
                    "h" => h = v.parse().map_err(|_| CoreError::invalid("bad h"))?,
                    "x0" => x0 = v.parse().map_err(|_| CoreError::invalid("bad x0"))?,
                    "y0" => y0 = v.parse().map_err(|_| CoreError::invalid("bad y0"))?,
                    "nx" => nx = v.parse().map_err(|_| CoreError::invalid("bad nx"))?,
                    "ny" => ny = v.parse().map_err(|_| CoreError::invalid("bad ny"))?,
                    "class" => {
                        class = match v {
                            "smooth" => Smoothness::Smooth,
                            "piecewise-linear" => Smoothness::PiecewiseLinear,
                            "jump" => Smoothness::Jump,
                            _ => return Err(CoreError::invalid("bad smoothness class")),
                        }
                    }
                    _ => {}
                }
            }
        }
        if h <= 0.0 || nx == 0 {
            return Err(CoreError::invalid("grid csv header incomplete"));
        }
        let values: Vec<f64> = if d == 1 {
            if rows.iter().any(|r| r.len() != 2) {
                return Err(CoreError::invalid("d=1 grid csv needs x,u rows"));
            }
            rows.iter().map(|r| r[1]).collect()
        } else {
            rows.into_iter().flatten().collect()
        };
        if values.len() != nx * ny {
            return Err(CoreError::invalid(format!(
                "grid csv: {} values, expected {}",
                values.len(),
                nx * ny
            )));
        }
        Ok(GridFunction {
            dimension: d,
            spacing: h,
            origin: [x0, y0],
            shape: [nx, ny],
            values,
            smoothness: class,
        })
    }
}

/// Central-difference gradient p-norm ‖∇u‖_{L^p}.
pub fn gradient_seminorm(u: &GridFunction, p: f64) -> f64 {
    gradient_power(u, p, None).powf(1.0 / p)
}

/// ∫|∇u|^p, optionally restricted to a set.
fn gradient_power(u: &GridFunction, p: f64, domain: Option<&SetSpec>) -> f64 {
    let grad = u.gradient_magnitude();
    let mut terms = Vec::with_capacity(grad.len());
    let mut idx = 0;
    for i in 0..u.shape[0] {
        for j in 0..u.shape[1] {
            let keep = domain.is_none_or(|set| set.contains(&u.center(i, j)));
            if keep {
                terms.push(grad[idx].powf(p));
            }
            idx += 1;
        }
    }
    pairwise_sum(&terms) * u.cell_measure()
}

/// K_{d,p} = ⨍_{S^{d-1}} |w·e|^p dσ(w): 1 in d = 1, 1/d for p = 2, latitude
/// quadrature otherwise.
pub fn k_dp(d: u32, p: f64) -> f64 {
    if d == 1 {
        return 1.0;
    }
    if (p - 2.0).abs() < 1e-14 {
        return 1.0 / d as f64;
    }
    // ⨍ |cosθ|^p with weight sin^{d-2}θ on [0, π]
    let weight_pow = d as f64 - 2.0;
    let num = adaptive_simpson(
        |t| t.cos().abs().powf(p) * t.sin().powf(weight_pow),
        0.0,
        std::f64::consts::PI,
        1e-10,
    )
    .0;
    let den = adaptive_simpson(
        |t| t.sin().powf(weight_pow),
        0.0,
        std::f64::consts::PI,
        1e-10,
    )
    .0;
    num / den
}

/// Quadrature budget for the nonlocal seminorm.
#[derive(Debug, Clone, Copy)]
pub struct SeminormBudget {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for SeminormBudget {
    fn default() -> Self {
        SeminormBudget { radial_nodes: 192, angular_nodes: 16 }
    }
}

/// ∬ |u(x)−u(y)|^p ν(x−y) dy dx (the p-th power of the seminorm), full space.
pub fn nonlocal_seminorm(
    u: &GridFunction,
    kernel: &Kernel,
    budget: SeminormBudget,
) -> Result<NormResult, CoreError> {
    nonlocal_seminorm_impl(u, kernel, None, budget)
}

/// The Ω×Ω restriction: both x and x+h are masked to the set.
pub fn nonlocal_seminorm_on(
    u: &GridFunction,
    kernel: &Kernel,
    domain: &SetSpec,
    budget: SeminormBudget,
) -> Result<NormResult, CoreError> {
    nonlocal_seminorm_impl(u, kernel, Some(domain), budget)
}

fn nonlocal_seminorm_impl(
    u: &GridFunction,
    kernel: &Kernel,
    domain: Option<&SetSpec>,
    budget: SeminormBudget,
) -> Result<NormResult, CoreError> {
    if !kernel.is_radial() {
        return Err(CoreError::invalid(
            "nonlocal seminorm needs a radial kernel; rearrange tabulated kernels first",
        ));
    }
    if kernel.dimension != u.dimension {
        return Err(CoreError::invalid("kernel and grid dimensions differ"));
    }
    if u.is_zero() {
        return Ok(NormResult { value: 0.0, error_estimate: 0.0, iterations: 0, converged: true });
    }
    let p = kernel.exponent;
    let delta = 4.0 * u.spacing;
    // far-field split radius: once |h| exceeds the support diameter the
    // shifted supports are disjoint and E(h) = 2‖u‖_p^p exactly
    let diam = match domain {
        Some(set) => set.diameter(),
        None => {
            let (lo, hi) = u
                .support_box()
                .ok_or_else(|| CoreError::invalid("empty support"))?;
            (0..lo.len()).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt()
        }
    };
    let far_cut = diam.max(delta * 2.0);

    // inner region by the gradient surrogate
    let m_p = kernel.radial_weighted_integral(p, 0.0, delta)?;
    let grad_pp = gradient_power(u, p, domain);
    let kdp = k_dp(u.dimension, p);
    let inner = kdp * m_p * grad_pp;

    // outer region: log-radial Simpson of E(h)·ν, kernel breakpoints split
    let outer = |nodes: usize| -> f64 {
        outer_quadrature(u, kernel, domain, delta, far_cut, nodes, budget.angular_nodes)
    };
    let outer_full = outer(budget.radial_nodes);
    let outer_half = outer(budget.radial_nodes / 2);
    let err_outer = (outer_full - outer_half).abs();

    // far field (exact for the full-space case, zero for Ω×Ω)
    let far = match domain {
        Some(_) => 0.0,
        None => 2.0 * u.lp_power(p) * kernel.tail_mass(far_cut).unwrap_or(0.0),
    };

    // inner consistency: surrogate on [0, δ/2] plus direct shell [δ/2, δ]
    let m_half = kernel.radial_weighted_integral(p, 0.0, delta / 2.0)?;
    let shell = shell_quadrature(u, kernel, domain, delta / 2.0, delta, 24, budget.angular_nodes);
    let err_inner = (inner - (kdp * m_half * grad_pp + shell)).abs();

    let value = inner + outer_full + far;
    let err = err_outer + err_inner;
    Ok(NormResult {
        value,
        error_estimate: err,
        iterations: budget.radial_nodes as u32,
        converged: err <= 1e-3 * value.max(f64::MIN_POSITIVE),
    })
}

fn outer_quadrature(
    u: &GridFunction,
    kernel: &Kernel,
    domain: Option<&SetSpec>,
    lo: f64,
    hi: f64,
    radial_nodes: usize,
    angular_nodes: usize,
) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let d = u.dimension as f64;
    let dcd = d * kernel.c_d();
    // split at kernel breakpoints so Simpson never crosses a kink
    let mut edges: Vec<f64> = vec![lo];
    for b in kernel.breakpoints() {
        if b > lo && b < hi {
            edges.push(b);
        }
    }
    edges.push(hi);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup();
    let p = kernel.exponent;
    let total_span: f64 = edges.windows(2).map(|w| (w[1] / w[0]).ln()).sum();
    let mut acc = 0.0;
    for w in edges.windows(2) {
        let span = (w[1] / w[0]).ln();
        let n = ((radial_nodes as f64 * span / total_span).ceil() as usize).max(8);
        let n = n + n % 2;
        let (ua, ub) = (w[0].ln(), w[1].ln());
        let step = (ub - ua) / n as f64;
        let mut terms = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let weight = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let rho = (ua + step * k as f64).exp();
            // evaluate ν just inside the subinterval so jump kernels take
            // their one-sided value at split points
            let rho_nu = if k == 0 {
                rho * (1.0 + 1e-12)
            } else if k == n {
                rho * (1.0 - 1e-12)
            } else {
                rho
            };
            let e = shift_energy(u, domain, rho, p, angular_nodes);
            terms.push(weight * e * kernel.value(rho_nu) * rho.powf(d));
        }
        acc += pairwise_sum(&terms) * step / 3.0 * dcd;
    }
    acc
}

/// Direct quadrature of one annulus [lo, hi] (used for the inner-consistency
/// estimate).
fn shell_quadrature(
    u: &GridFunction,
    kernel: &Kernel,
    domain: Option<&SetSpec>,
    lo: f64,
    hi: f64,
    radial_nodes: usize,
    angular_nodes: usize,
) -> f64 {
    outer_quadrature(u, kernel, domain, lo, hi, radial_nodes, angular_nodes)
}

/// E(h) = ∫ |u(x+h)−u(x)|^p dx averaged over directions of |h| = rho.
/// E(h) = E(−h), so d = 2 averages angles over [0, π).
fn shift_energy(
    u: &GridFunction,
    domain: Option<&SetSpec>,
    rho: f64,
    p: f64,
    angular_nodes: usize,
) -> f64 {
    match u.dimension {
        1 => shift_energy_at(u, domain, [rho, 0.0], p),
        _ => {
            let n = angular_nodes.max(4);
            let mut acc = 0.0;
            for j in 0..n {
                let phi = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
                acc += shift_energy_at(u, domain, [rho * phi.cos(), rho * phi.sin()], p);
            }
            acc / n as f64
        }
    }
}

fn shift_energy_at(u: &GridFunction, domain: Option<&SetSpec>, h: [f64; 2], p: f64) -> f64 {
    let mut terms = Vec::with_capacity(u.len());
    for i in 0..u.shape[0] {
        for j in 0..u.shape[1] {
            let x = u.center(i, j);
            let y = [x[0] + h[0], x[1] + h[1]];
            if let Some(set) = domain {
                if !set.contains(&x[..u.dimension as usize])
                    || !set.contains(&y[..u.dimension as usize])
                {
                    continue;
                }
            }
            let diff = (u.interp(&y) - u.values[i * u.shape[1] + j]).abs();
            if diff != 0.0 {
                terms.push(diff.powf(p));
            }
        }
    }
    pairwise_sum(&terms) * u.cell_measure()
}

/// Report of the s → 1 limit check.
#[derive(Debug, Clone)]
pub struct BbmReport {
    pub target: f64,
    /// (s, s(1−s)-weighted seminorm power, ratio to target)
    pub entries: Vec<(f64, f64, f64)>,
}

/// Weighted fractional seminorms against the limit (|S^{d-1}|/p)·K_{d,p}·‖∇u‖_p^p.
pub fn bbm_limit_check(
    u: &GridFunction,
    p: f64,
    s_list: &[f64],
    budget: SeminormBudget,
) -> Result<BbmReport, CoreError> {
    if u.smoothness == Smoothness::Jump {
        return Err(CoreError::invalid(
            "BBM limit needs a W^{1,p} function; jump-class data is refused",
        ));
    }
    if !s_list.windows(2).all(|w| w[1] > w[0]) || s_list.iter().any(|&s| s <= 0.0 || s >= 1.0) {
        return Err(CoreError::invalid("s list must increase inside (0,1)"));
    }
    let d = u.dimension;
    let sphere = d as f64 * crate::kernels::ball_volume(d);
    let target = sphere / p * k_dp(d, p) * gradient_power(u, p, None);
    let mut entries = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let kernel = Kernel::fractional(s, p, d);
        let semi = nonlocal_seminorm(u, &kernel, budget)?;
        let weighted = s * (1.0 - s) * semi.value;
        let ratio = if target == 0.0 { 1.0 } else { weighted / target };
        entries.push((s, weighted, ratio));
    }
    Ok(BbmReport { target, entries })
}

/// Symmetric decreasing rearrangement by exact multiset placement: output
/// cells ordered by |center| receive the sorted |values|. Preserves every
/// L^q norm exactly and is equimeasurable with |u| as a cell multiset.
pub fn rearrange_function(u: &GridFunction) -> GridFunction {
    let mut order: Vec<usize> = (0..u.len()).collect();
    let n0 = u.shape[0] as f64 / 2.0;
    let n1 = u.shape[1] as f64 / 2.0;
    let radius = |idx: usize| -> f64 {
        let i = idx / u.shape[1];
        let j = idx % u.shape[1];
        let x = (i as f64 + 0.5 - n0) * u.spacing;
        let y = (j as f64 + 0.5 - n1) * u.spacing;
        if u.dimension == 1 {
            x.abs()
        } else {
            (x * x + y * y).sqrt()
        }
    };
    order.sort_by(|&a, &b| radius(a).partial_cmp(&radius(b)).unwrap().then(a.cmp(&b)));
    let mut sorted: Vec<f64> = u.values.iter().map(|v| v.abs()).collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut values = vec![0.0; u.len()];
    for (rank, &idx) in order.iter().enumerate() {
        values[idx] = sorted[rank];
    }
    GridFunction {
        dimension: u.dimension,
        spacing: u.spacing,
        origin: [-n0 * u.spacing, if u.dimension == 1 { 0.0 } else { -n1 * u.spacing }],
        shape: u.shape,
        values,
        smoothness: u.smoothness,
    }
}
