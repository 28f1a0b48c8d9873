use crate::metric::Metric;

use super::DynamicalSystem;

/// A point `(n, y)` on the vertical fiber over the integer `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    pub n: i64,
    pub y: f64,
}

impl StripPoint {
    pub fn new(n: i64, y: f64) -> Self {
        StripPoint { n, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Heights {
    /// Fiber `n` is `[0, 2^{-|n|}]`.
    Shrinking,
    /// Every fiber is `[0, 1]`.
    Unit,
}

/// Disjoint vertical segments over the integers, mapped fiber to fiber.
#[derive(Debug, Clone)]
pub struct Strips {
    name: String,
    heights: Heights,
    window: i64,
    metric: Metric<StripPoint>,
}

fn plane_metric() -> Metric<StripPoint> {
    Metric::new("euclidean", None, |a: &StripPoint, b: &StripPoint| {
        ((a.n - b.n) as f64).hypot(a.y - b.y)
    })
}

impl Strips {
    /// Fibers `[0, 2^{-|n|}]`; `(n, y) ↦ (n+1, 2y)` for `n < 0` and
    /// `(n+1, y/2)` for `n ≥ 0`.
    pub fn shrinking(window: i64) -> Self {
        Strips {
            name: "strips-a".into(),
            heights: Heights::Shrinking,
            window,
            metric: plane_metric(),
        }
    }

    /// Unit fibers with the translation `(n, y) ↦ (n+1, y)`.
    pub fn unit(window: i64) -> Self {
        Strips {
            name: "strips-b".into(),
            heights: Heights::Unit,
            window,
            metric: plane_metric(),
        }
    }

    pub fn height(&self, n: i64) -> f64 {
        match self.heights {
            Heights::Shrinking => 0.5f64.powi(n.unsigned_abs().min(1100) as i32),
            Heights::Unit => 1.0,
        }
    }

    /// Bound `W` of the fibers `|n| ≤ W` on which results are reported.
    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn contains(&self, p: &StripPoint) -> bool {
        p.y >= 0.0 && p.y <= self.height(p.n)
    }

    pub fn in_window(&self, p: &StripPoint) -> bool {
        p.n.abs() <= self.window
    }

    /// Points `(n, k·h(n)/m)` for `|n| ≤ window`, `k = 0..=m`.
    pub fn grid(&self, per_fiber: usize) -> Vec<StripPoint> {
        let mut out = Vec::new();
        for n in -self.window..=self.window {
            let h = self.height(n);
            for k in 0..=per_fiber {
                out.push(StripPoint::new(n, h * k as f64 / per_fiber as f64));
            }
        }
        out
    }
}

impl DynamicalSystem for Strips {
    type Point = StripPoint;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &StripPoint) -> StripPoint {
        match self.heights {
            Heights::Unit => StripPoint::new(p.n + 1, p.y),
            Heights::Shrinking if p.n < 0 => StripPoint::new(p.n + 1, 2.0 * p.y),
            Heights::Shrinking => StripPoint::new(p.n + 1, 0.5 * p.y),
        }
    }

    fn backward(&self, p: &StripPoint) -> StripPoint {
        let n = p.n - 1;
        match self.heights {
            Heights::Unit => StripPoint::new(n, p.y),
            Heights::Shrinking if n < 0 => StripPoint::new(n, 0.5 * p.y),
            Heights::Shrinking => StripPoint::new(n, 2.0 * p.y),
        }
    }

    fn metric(&self) -> &Metric<StripPoint> {
        &self.metric
    }
}

/// Fiberwise rescaling `h(n, y) = (n, y · 2^{|n|})` and its inverse.
#[derive(Debug, Clone, Copy)]
pub struct StripsConjugacy;

impl StripsConjugacy {
    pub fn h(&self, p: &StripPoint) -> StripPoint {
        StripPoint::new(p.n, p.y * 2f64.powi(p.n.unsigned_abs().min(1100) as i32))
    }

    pub fn h_inv(&self, p: &StripPoint) -> StripPoint {
        StripPoint::new(p.n, p.y * 0.5f64.powi(p.n.unsigned_abs().min(1100) as i32))
    }
}

/// The shrinking-fiber system, the unit-fiber translation, and the
/// conjugacy taking the first to the second.
pub fn shrinking_intervals(window: i64) -> (Strips, Strips, StripsConjugacy) {
    (Strips::shrinking(window), Strips::unit(window), StripsConjugacy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_examples() {
        let (a, b, h) = shrinking_intervals(20);
        assert_eq!(a.forward(&StripPoint::new(-2, 0.2)), StripPoint::new(-1, 0.4));
        assert_eq!(a.forward(&StripPoint::new(0, 0.8)), StripPoint::new(1, 0.4));
        let p = StripPoint::new(3, 0.05);
        assert_eq!(h.h(&a.forward(&p)), StripPoint::new(4, 0.4));
        assert_eq!(b.forward(&h.h(&p)), StripPoint::new(4, 0.4));
    }

    #[test]
    fn conjugacy_intertwines_exactly_on_dyadic_grid() {
        let (a, b, h) = shrinking_intervals(20);
        for p in a.grid(16) {
            assert!(a.contains(&p));
            assert_eq!(h.h(&a.forward(&p)), b.forward(&h.h(&p)));
            assert_eq!(h.h_inv(&h.h(&p)), p);
            assert_eq!(a.backward(&a.forward(&p)), p);
            assert!(a.contains(&a.forward(&p)));
        }
        for p in b.grid(16) {
            assert_eq!(b.backward(&b.forward(&p)), p);
        }
    }
}
