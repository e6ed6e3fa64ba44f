//! The golden corpus: named test functions and kernels shared by the
//! verification suites and the acceptance tests, plus a deterministic
//! generator for randomized property corpora (reports must be byte-stable
//! across reruns, so no external RNG).

use crate::fields::{GridFunction, Smoothness};
use crate::kernels::Kernel;
use crate::verify::Strategy;

/// Smooth compactly supported mollifier profile on (-1, 1), peak 1 at 0.
fn mollifier(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// Hat max(0, 1−|x|) on [-2, 2].
pub fn hat(n: usize) -> GridFunction {
    GridFunction::sample_1d(|x| (1.0 - x.abs()).max(0.0), -2.0, 2.0, n, Smoothness::PiecewiseLinear)
}

/// Indicator of (0, 1) on [-2, 2]; the grid aligns so |supp| is exactly 1
/// at power-of-two resolutions.
pub fn indicator_unit(n: usize) -> GridFunction {
    GridFunction::sample_1d(
        |x| if x > 0.0 && x < 1.0 { 1.0 } else { 0.0 },
        -2.0,
        2.0,
        n,
        Smoothness::Jump,
    )
}

/// Gaussian-like smooth bump on [-2, 2].
pub fn bump(n: usize) -> GridFunction {
    GridFunction::sample_1d(mollifier, -2.0, 2.0, n, Smoothness::Smooth)
}

/// Two smooth bumps of different heights.
pub fn two_bump(n: usize) -> GridFunction {
    GridFunction::sample_1d(
        |x| 0.9 * mollifier((x + 0.9) / 0.55) + 0.65 * mollifier((x - 0.8) / 0.5),
        -2.0,
        2.0,
        n,
        Smoothness::Smooth,
    )
}

/// Radial smooth bump in the plane.
pub fn bump_2d(n: usize) -> GridFunction {
    GridFunction::sample_2d(
        |x, y| mollifier((x * x + y * y).sqrt()),
        [-2.0, -2.0],
        [2.0, 2.0],
        n,
        Smoothness::Smooth,
    )
}

/// Dilated corpus member u(λx), sampled analytically on the rescaled box.
pub fn dilated(shape: &str, lambda: f64, n: usize) -> Option<GridFunction> {
    let f: Box<dyn Fn(f64) -> f64> = match shape {
        "hat" => Box::new(|x: f64| (1.0 - x.abs()).max(0.0)),
        "indicator" => Box::new(|x: f64| if x > 0.0 && x < 1.0 { 1.0 } else { 0.0 }),
        "bump" => Box::new(mollifier),
        "two-bump" => {
            Box::new(|x: f64| 0.9 * mollifier((x + 0.9) / 0.55) + 0.65 * mollifier((x - 0.8) / 0.5))
        }
        _ => return None,
    };
    let class = match shape {
        "indicator" => Smoothness::Jump,
        "hat" => Smoothness::PiecewiseLinear,
        _ => Smoothness::Smooth,
    };
    let half = 2.0 / lambda;
    Some(GridFunction::sample_1d(move |x| f(lambda * x), -half, half, n, class))
}

/// The golden function corpus at a given resolution.
pub fn golden_functions(n: usize) -> Vec<(&'static str, GridFunction)> {
    vec![
        ("hat", hat(n)),
        ("indicator", indicator_unit(n)),
        ("bump", bump(n)),
        ("two-bump", two_bump(n)),
    ]
}

/// The golden kernel corpus with each kernel's verification strategy.
pub fn golden_kernels(p: f64, d: u32) -> Vec<(&'static str, Kernel, Strategy)> {
    vec![
        ("fractional-s18", Kernel::fractional(0.125, p, d), Strategy::Direct),
        ("fractional-s14", Kernel::fractional(0.25, p, d), Strategy::Direct),
        ("max-fractional", Kernel::max_fractional(0.125, 0.25, p, d), Strategy::PerComponent),
        ("min-fractional", Kernel::min_fractional(0.125, 0.25, p, d), Strategy::Minorant),
    ]
}

/// SplitMix64: tiny deterministic generator for the randomized corpora.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random smooth function: two or three bumps with random centers, widths
/// and heights, supported inside (-2, 2).
pub fn random_smooth(rng: &mut SplitMix64, n: usize) -> GridFunction {
    let bumps = 2 + rng.index(2);
    let mut params = Vec::new();
    for _ in 0..bumps {
        let center = rng.uniform(-1.2, 1.2);
        let width = rng.uniform(0.25, 0.7);
        let height = rng.uniform(0.2, 1.5);
        params.push((center, width, height));
    }
    GridFunction::sample_1d(
        move |x| {
            params.iter().map(|&(c, w, h)| h * mollifier((x - c) / w)).sum::<f64>()
        },
        -2.0,
        2.0,
        n,
        Smoothness::Smooth,
    )
}

/// Random 2-d function from two elliptic bumps.
pub fn random_smooth_2d(rng: &mut SplitMix64, n: usize) -> GridFunction {
    let c1 = [rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)];
    let c2 = [rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)];
    let (w1, w2) = (rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7));
    let h2 = rng.uniform(0.3, 1.2);
    GridFunction::sample_2d(
        move |x, y| {
            let r1 = (((x - c1[0]) / w1).powi(2) + ((y - c1[1]) / w1).powi(2)).sqrt();
            let r2 = (((x - c2[0]) / w2).powi(2) + ((y - c2[1]) / w2).powi(2)).sqrt();
            mollifier(r1) + h2 * mollifier(r2)
        },
        [-2.0, -2.0],
        [2.0, 2.0],
        n,
        Smoothness::Smooth,
    )
}

/// Random nonincreasing nonnegative sequence in the level-measure shape the
/// summation lemmas expect: a deep bottom plateau (the window of a sequence
/// that is constant below), then decay to a zero tail. Returns (k0, values).
pub fn random_admissible_sequence(rng: &mut SplitMix64) -> (i64, Vec<f64>) {
    let plateau = 45 + rng.index(10);
    let decay_len = 3 + rng.index(20);
    let top = rng.uniform(0.5, 100.0);
    let mut out = vec![top; plateau];
    let mut value = top;
    for _ in 0..decay_len {
        value *= rng.uniform(0.05, 1.0);
        if rng.next_f64() < 0.08 || value < 1e-290 {
            value = 0.0;
        }
        out.push(value);
        if value == 0.0 {
            break;
        }
    }
    let k0 = -(out.len() as i64) + 1 + rng.index(4) as i64;
    (k0, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_members_are_compactly_supported() {
        for (name, u) in golden_functions(256) {
            let (lo, hi) = u.support_box().expect(name);
            assert!(lo[0] > -2.0 && hi[0] < 2.0, "{name}: {lo:?} {hi:?}");
        }
    }

    #[test]
    fn indicator_measure_is_exact() {
        let u = indicator_unit(1024);
        assert_eq!(u.support_measure(), 1.0);
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SplitMix64::new(43);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn random_sequences_are_admissible() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..50 {
            let (_, a) = random_admissible_sequence(&mut rng);
            assert!(a.windows(2).all(|w| w[1] <= w[0]));
            assert!(a.iter().all(|&v| v >= 0.0));
        }
    }
}
