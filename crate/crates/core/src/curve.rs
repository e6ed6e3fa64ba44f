//! Log-log sampled curves with power-law interpolation.
//!
//! Every radial profile, tail profile and Young function in this crate is a
//! positive monotone curve that is an exact power law between samples and an
//! exact power law beyond the sampled range (explicit endpoint exponents).
//! Storing ln x ↦ ln y with linear interpolation makes evaluation, inversion
//! (swap the axes), max/min combination and the integral ∫₀ᵗ y(s)/s ds exact
//! segment arithmetic for piecewise power-law data.

use crate::error::CoreError;

/// A positive curve y(x) on x > 0, piecewise power-law between log-spaced
/// nodes, extended by pure power laws with exponents `head` (x below the
/// first node) and `tail` (x above the last node).
#[derive(Debug, Clone)]
pub struct LogLogCurve {
    ln_x: Vec<f64>,
    ln_y: Vec<f64>,
    head: f64,
    tail: f64,
}

impl LogLogCurve {
    /// Build from positive samples; `xs` must be strictly increasing.
    /// Endpoint exponents default to the boundary segment slopes.
    pub fn from_samples(xs: &[f64], ys: &[f64]) -> Result<Self, CoreError> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(CoreError::invalid("curve needs at least two samples"));
        }
        let mut ln_x = Vec::with_capacity(xs.len());
        let mut ln_y = Vec::with_capacity(xs.len());
        for (&x, &y) in xs.iter().zip(ys) {
            if !(x.is_finite() && x > 0.0) || !(y.is_finite() && y > 0.0) {
                return Err(CoreError::invalid("curve samples must be finite and positive"));
            }
            ln_x.push(x.ln());
            ln_y.push(y.ln());
        }
        for w in ln_x.windows(2) {
            if w[1] <= w[0] {
                return Err(CoreError::invalid("curve abscissae must be strictly increasing"));
            }
        }
        let head = segment_slope(&ln_x, &ln_y, 0);
        let tail = segment_slope(&ln_x, &ln_y, ln_x.len() - 2);
        Ok(Self { ln_x, ln_y, head, tail })
    }

    pub fn with_exponents(mut self, head: f64, tail: f64) -> Self {
        self.head = head;
        self.tail = tail;
        self
    }

    /// Sample `f` at `n` log-spaced points on [lo, hi].
    pub fn from_fn(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Result<Self, CoreError> {
        assert!(n >= 2 && lo > 0.0 && hi > lo);
        let (lln, lhn) = (lo.ln(), hi.ln());
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for i in 0..n {
            let x = (lln + (lhn - lln) * i as f64 / (n - 1) as f64).exp();
            xs.push(x);
            ys.push(f(x));
        }
        Self::from_samples(&xs, &ys)
    }

    /// The pure power law c·x^q represented by two nodes around x = 1.
    pub fn power(c: f64, q: f64) -> Self {
        let xs = [1e-3, 1e3];
        let ys = [c * 1e-3f64.powf(q), c * 1e3f64.powf(q)];
        Self::from_samples(&xs, &ys).unwrap().with_exponents(q, q)
    }

    pub fn len(&self) -> usize {
        self.ln_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_x.is_empty()
    }

    pub fn x_first(&self) -> f64 {
        self.ln_x[0].exp()
    }

    pub fn x_last(&self) -> f64 {
        self.ln_x[self.ln_x.len() - 1].exp()
    }

    pub fn head_exponent(&self) -> f64 {
        self.head
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail
    }

    pub fn node(&self, i: usize) -> (f64, f64) {
        (self.ln_x[i].exp(), self.ln_y[i].exp())
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    /// Evaluate at x ≥ 0. x = 0 and x = ∞ resolve through the endpoint
    /// exponents (a positive exponent vanishes at 0 and diverges at ∞).
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return if self.head > 0.0 {
                0.0
            } else if self.head == 0.0 {
                self.ln_y[0].exp()
            } else {
                f64::INFINITY
            };
        }
        if x == f64::INFINITY {
            return if self.tail > 0.0 {
                f64::INFINITY
            } else if self.tail == 0.0 {
                self.ln_y[self.len() - 1].exp()
            } else {
                0.0
            };
        }
        debug_assert!(x > 0.0, "curve evaluated at negative abscissa");
        let lx = x.ln();
        let n = self.ln_x.len();
        if lx <= self.ln_x[0] {
            return (self.ln_y[0] + self.head * (lx - self.ln_x[0])).exp();
        }
        if lx >= self.ln_x[n - 1] {
            return (self.ln_y[n - 1] + self.tail * (lx - self.ln_x[n - 1])).exp();
        }
        let i = match self.ln_x.binary_search_by(|v| v.partial_cmp(&lx).unwrap()) {
            Ok(i) => return self.ln_y[i].exp(),
            Err(i) => i - 1,
        };
        let t = (lx - self.ln_x[i]) / (self.ln_x[i + 1] - self.ln_x[i]);
        (self.ln_y[i] + t * (self.ln_y[i + 1] - self.ln_y[i])).exp()
    }

    /// Local log-log slope at x (segment slope; endpoint exponent outside).
    pub fn log_slope(&self, x: f64) -> f64 {
        let lx = x.ln();
        let n = self.ln_x.len();
        if lx <= self.ln_x[0] {
            return self.head;
        }
        if lx >= self.ln_x[n - 1] {
            return self.tail;
        }
        let i = self.ln_x.partition_point(|&v| v < lx).max(1) - 1;
        segment_slope(&self.ln_x, &self.ln_y, i.min(n - 2))
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.ln_y.windows(2).all(|w| w[1] > w[0])
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.ln_y.windows(2).all(|w| w[1] <= w[0])
    }

    /// First abscissa where the curve stops increasing, if any.
    pub fn first_flat(&self) -> Option<f64> {
        self.ln_y
            .windows(2)
            .position(|w| w[1] <= w[0])
            .map(|i| self.ln_x[i].exp())
    }

    /// Inverse curve: swap the roles of x and y. Requires strict monotonicity.
    pub fn invert(&self) -> Result<Self, CoreError> {
        if !self.is_strictly_increasing() {
            let at = self.first_flat().unwrap_or(self.x_first());
            return Err(CoreError::NotInvertible { at });
        }
        Ok(Self {
            ln_x: self.ln_y.clone(),
            ln_y: self.ln_x.clone(),
            head: 1.0 / self.head,
            tail: 1.0 / self.tail,
        })
    }

    /// Extend the node range to cover [lo, hi] using the endpoint power laws.
    /// Exact: the added nodes lie on the extrapolated curve.
    pub fn extend_to(&self, lo: f64, hi: f64) -> Self {
        let mut out = self.clone();
        let lo_ln = lo.ln();
        let hi_ln = hi.ln();
        if lo_ln < out.ln_x[0] {
            let y = out.ln_y[0] + out.head * (lo_ln - out.ln_x[0]);
            out.ln_x.insert(0, lo_ln);
            out.ln_y.insert(0, y);
        }
        if hi_ln > *out.ln_x.last().unwrap() {
            let n = out.ln_x.len();
            let y = out.ln_y[n - 1] + out.tail * (hi_ln - out.ln_x[n - 1]);
            out.ln_x.push(hi_ln);
            out.ln_y.push(y);
        }
        out
    }

    /// Pointwise max/min of two curves, exact: the node set is the union of
    /// both node sets plus every crossing of overlapping power segments.
    fn combine(&self, other: &Self, take_max: bool) -> Self {
        let lo = self.x_first().min(other.x_first());
        let hi = self.x_last().max(other.x_last());
        let a = self.extend_to(lo, hi);
        let b = other.extend_to(lo, hi);
        let mut grid: Vec<f64> = a.ln_x.iter().chain(b.ln_x.iter()).copied().collect();
        grid.sort_by(|p, q| p.partial_cmp(q).unwrap());
        grid.dedup_by(|p, q| (*p - *q).abs() < 1e-14);
        // insert crossings of the two local power laws inside each interval
        let mut with_cross = Vec::with_capacity(grid.len() * 2);
        for w in grid.windows(2) {
            let (l, r) = (w[0], w[1]);
            with_cross.push(l);
            let xm = ((l + r) / 2.0).exp();
            let (sa, sb) = (a.log_slope(xm), b.log_slope(xm));
            if (sa - sb).abs() > 1e-13 {
                let (ya, yb) = (a.eval(xm).ln(), b.eval(xm).ln());
                let lc = xm.ln() + (yb - ya) / (sa - sb);
                if lc > l + 1e-12 && lc < r - 1e-12 {
                    with_cross.push(lc);
                }
            }
        }
        with_cross.push(*grid.last().unwrap());
        let mut ln_y = Vec::with_capacity(with_cross.len());
        for &lx in &with_cross {
            let x = lx.exp();
            let (ya, yb) = (a.eval(x), b.eval(x));
            let v = if take_max { ya.max(yb) } else { ya.min(yb) };
            ln_y.push(v.ln());
        }
        let pick = |ea: f64, eb: f64, va: f64, vb: f64| -> f64 {
            // dominance near 0 (head) or ∞ (tail) follows from the exponents
            if (va - vb).abs() > 1e-12 * va.abs().max(vb.abs()) {
                if (va > vb) == take_max {
                    ea
                } else {
                    eb
                }
            } else if take_max {
                ea.max(eb)
            } else {
                ea.min(eb)
            }
        };
        let x0 = with_cross[0].exp();
        let xn = with_cross.last().unwrap().exp();
        // near 0 the smaller exponent dominates, so max picks it
        let head = if (a.head - b.head).abs() > 1e-13 {
            let a_dominates_at_zero = a.head < b.head;
            if a_dominates_at_zero == take_max {
                a.head
            } else {
                b.head
            }
        } else {
            pick(a.head, b.head, a.eval(x0), b.eval(x0))
        };
        let tail = if (a.tail - b.tail).abs() > 1e-13 {
            let a_dominates_at_inf = a.tail > b.tail;
            if a_dominates_at_inf == take_max {
                a.tail
            } else {
                b.tail
            }
        } else {
            pick(a.tail, b.tail, a.eval(xn), b.eval(xn))
        };
        Self { ln_x: with_cross, ln_y, head, tail }
    }

    pub fn pointwise_max(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn pointwise_min(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    /// ∫₀ᵗ y(s)/s ds, exact per power segment. Requires head exponent > 0
    /// for convergence at the origin.
    pub fn integral_dlog(&self, t: f64) -> Result<f64, CoreError> {
        if self.head <= 0.0 {
            return Err(CoreError::invalid(
                "integral ∫ y(s)/s ds diverges at the origin (head exponent ≤ 0)",
            ));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let lt = t.ln();
        // head piece up to the first node (or to t if below it)
        let l0 = self.ln_x[0];
        if lt <= l0 {
            let y = self.eval(t);
            return Ok(y / self.head);
        }
        let mut acc = self.ln_y[0].exp() / self.head;
        let n = self.ln_x.len();
        for i in 0..n - 1 {
            let (la, lb) = (self.ln_x[i], self.ln_x[i + 1]);
            if lt <= la {
                break;
            }
            let ub = lt.min(lb);
            let q = segment_slope(&self.ln_x, &self.ln_y, i);
            let ya = self.ln_y[i].exp();
            acc += power_dlog_integral(ya, q, ub - la);
        }
        if lt > self.ln_x[n - 1] {
            let ya = self.ln_y[n - 1].exp();
            acc += power_dlog_integral(ya, self.tail, lt - self.ln_x[n - 1]);
        }
        Ok(acc)
    }

    /// Transform to x ↦ y(x^a), exact (x-axis stretch in log space).
    pub fn compose_power(&self, a: f64) -> Self {
        assert!(a > 0.0);
        Self {
            ln_x: self.ln_x.iter().map(|v| v / a).collect(),
            ln_y: self.ln_y.clone(),
            head: self.head * a,
            tail: self.tail * a,
        }
    }

    /// Scale the ordinate by c > 0.
    pub fn scale(&self, c: f64) -> Self {
        assert!(c > 0.0);
        let lc = c.ln();
        Self {
            ln_x: self.ln_x.clone(),
            ln_y: self.ln_y.iter().map(|v| v + lc).collect(),
            head: self.head,
            tail: self.tail,
        }
    }

    /// Least-squares power-law fit ln y = ln c + q ln x over node range
    /// [lo, hi]; returns (c, q).
    pub fn fit_power(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (llo, lhi) = (lo.ln(), hi.ln());
        let pts: Vec<(f64, f64)> = self
            .ln_x
            .iter()
            .zip(&self.ln_y)
            .filter(|(&lx, _)| lx >= llo && lx <= lhi)
            .map(|(&lx, &ly)| (lx, ly))
            .collect();
        assert!(pts.len() >= 2, "fit range contains fewer than two nodes");
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let q = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let c = ((sy - q * sx) / n).exp();
        (c, q)
    }
}

fn segment_slope(ln_x: &[f64], ln_y: &[f64], i: usize) -> f64 {
    (ln_y[i + 1] - ln_y[i]) / (ln_x[i + 1] - ln_x[i])
}

/// ∫ y_a·e^{q·u} du over u ∈ [0, du] (the dlog integral of one power segment).
fn power_dlog_integral(ya: f64, q: f64, du: f64) -> f64 {
    if q.abs() < 1e-14 {
        ya * du
    } else {
        ya * ((q * du).exp() - 1.0) / q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_eval_is_exact() {
        let c = LogLogCurve::power(3.0, 2.5);
        for &x in &[1e-6f64, 0.02, 1.0, 7.3, 1e7] {
            let want = 3.0 * x.powf(2.5);
            assert!((c.eval(x) - want).abs() <= 1e-12 * want);
        }
        assert_eq!(c.eval(0.0), 0.0);
        assert_eq!(c.eval(f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn inversion_round_trip_on_nodes() {
        let c = LogLogCurve::from_fn(|x| 2.0 * x.powf(1.7), 1e-3, 1e3, 64).unwrap();
        let inv = c.invert().unwrap();
        for (x, y) in c.nodes() {
            assert!((inv.eval(y) - x).abs() <= 1e-10 * x);
        }
    }

    #[test]
    fn flat_curve_refuses_inversion() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [1.0, 1.0, 2.0];
        let c = LogLogCurve::from_samples(&xs, &ys).unwrap();
        assert!(matches!(c.invert(), Err(CoreError::NotInvertible { .. })));
    }

    #[test]
    fn max_min_with_crossing() {
        let a = LogLogCurve::power(1.0, 4.0);
        let b = LogLogCurve::power(1.0, 8.0);
        let mx = a.pointwise_max(&b);
        let mn = a.pointwise_min(&b);
        for &t in &[0.01f64, 0.5, 0.999, 1.001, 2.0, 30.0] {
            let (p4, p8) = (t.powi(4), t.powi(8));
            assert!((mx.eval(t) - p4.max(p8)).abs() <= 1e-10 * p4.max(p8));
            assert!((mn.eval(t) - p4.min(p8)).abs() <= 1e-10 * p4.max(p8));
        }
        assert!((mx.head_exponent() - 4.0).abs() < 1e-12);
        assert!((mx.tail_exponent() - 8.0).abs() < 1e-12);
        assert!((mn.head_exponent() - 8.0).abs() < 1e-12);
        assert!((mn.tail_exponent() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dlog_integral_of_min_powers() {
        // ∫₀ᵗ min(s⁴,s⁸)/s ds = t⁸/8 (t ≤ 1), 1/8 + (t⁴-1)/4 (t > 1)
        let m = LogLogCurve::power(1.0, 4.0).pointwise_min(&LogLogCurve::power(1.0, 8.0));
        for &t in &[0.3f64, 1.0, 2.0, 10.0] {
            let want = if t <= 1.0 {
                t.powi(8) / 8.0
            } else {
                0.125 + (t.powi(4) - 1.0) / 4.0
            };
            let got = m.integral_dlog(t).unwrap();
            assert!((got - want).abs() <= 1e-10 * want, "t={t}: {got} vs {want}");
        }
    }
}
