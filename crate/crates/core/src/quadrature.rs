//! Shared quadrature and summation primitives.
//!
//! Singular radial integrals are computed after the substitution ρ = eᵘ,
//! which turns power laws into exponentials; composite Simpson in u is then
//! refined until the relative change drops below the requested tolerance.
//! Sums over grids use fixed-order pairwise summation so results are
//! reproducible bit-for-bit regardless of chunking.

/// Fixed-order pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        let mut s = 0.0;
        for &x in v {
            s += x;
        }
        return s;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Composite Simpson on [a, b] with n intervals (n even).
fn simpson(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut terms = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        terms.push(w * f(a + h * i as f64));
    }
    pairwise_sum(&terms) * h / 3.0
}

/// Adaptive composite Simpson: doubles the interval count until the relative
/// change is below `rel_tol`. Returns (value, error estimate).
pub fn adaptive_simpson(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    if a >= b {
        return (0.0, 0.0);
    }
    let mut n = 16;
    let mut prev = simpson(&mut f, a, b, n);
    loop {
        n *= 2;
        let cur = simpson(&mut f, a, b, n);
        let err = (cur - prev).abs();
        if err <= rel_tol * cur.abs().max(f64::MIN_POSITIVE) || n >= 1 << 18 {
            return (cur, err);
        }
        prev = cur;
    }
}

/// Maximize a unimodal function on [a, b] by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
