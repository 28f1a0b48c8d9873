use crate::metric::Metric;

use super::DynamicalSystem;

/// `f(x) = x - c·x(1 - x²)` on `[-1, 1]`: fixed points `-1, 0, 1`, with
/// `0` attracting and the endpoints repelling. Invertible for `0 < c < 1`
/// since `f'(x) = 1 - c + 3c x² > 0`.
#[derive(Debug, Clone)]
pub struct NorthSouth {
    c: f64,
    metric: Metric<f64>,
}

impl NorthSouth {
    pub fn new(c: f64) -> Self {
        assert!(c > 0.0 && c < 1.0, "step must lie in (0, 1)");
        NorthSouth {
            c,
            metric: Metric::real(),
        }
    }

    pub fn step(&self) -> f64 {
        self.c
    }

    /// Evenly spaced points `-1, -1 + 2/n, …, 1`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|k| -1.0 + 2.0 * k as f64 / n as f64).collect()
    }

    pub fn fixed_points(&self) -> [f64; 3] {
        [-1.0, 0.0, 1.0]
    }
}

impl Default for NorthSouth {
    fn default() -> Self {
        Self::new(0.1)
    }
}

impl DynamicalSystem for NorthSouth {
    type Point = f64;

    fn name(&self) -> &str {
        "north-south"
    }

    fn forward(&self, x: &f64) -> f64 {
        x - self.c * x * (1.0 - x * x)
    }

    fn backward(&self, y: &f64) -> f64 {
        // f is increasing on [-1, 1]; bisect then polish with Newton
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        let y = y.clamp(-1.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.forward(&mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..3 {
            let d = 1.0 - self.c + 3.0 * self.c * x * x;
            x -= (self.forward(&x) - y) / d;
        }
        x.clamp(-1.0, 1.0)
    }

    fn metric(&self) -> &Metric<f64> {
        &self.metric
    }
}
