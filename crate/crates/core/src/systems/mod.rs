//! Concrete homeomorphisms and system-level transforms.

mod catalog;
mod finite;
mod harmonic;
mod interval;
mod linear;
mod shift;
mod strips;
mod torus;
mod transform;

pub use catalog::{catalog, catalog_text, CatalogEntry};
pub use finite::FiniteSystem;
pub use harmonic::HarmonicPoints;
pub use interval::NorthSouth;
pub use linear::{hyperbolic_splitting, plane_two_metrics, LinearSystem, Splitting};
pub use shift::{Shift, SymbolPoint, TransitionMatrix};
pub use strips::{shrinking_intervals, StripPoint, Strips, StripsConjugacy};
pub use torus::{PerturbedTorus, TorusAutomorphism};
pub use transform::{conjugate_system, iterate_system, Conjugated, Iterated};

use crate::entourage::Point;
use crate::metric::Metric;

/// An invertible map of a space onto itself, with its inverse and a metric.
pub trait DynamicalSystem: Send + Sync {
    type Point: Point;

    fn name(&self) -> &str;

    fn forward(&self, p: &Self::Point) -> Self::Point;

    fn backward(&self, p: &Self::Point) -> Self::Point;

    fn metric(&self) -> &Metric<Self::Point>;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.metric().distance(a, b)
    }

    /// `fⁿ(p)` for any integer `n`.
    fn iterate(&self, p: &Self::Point, n: i64) -> Self::Point {
        let mut q = p.clone();
        if n >= 0 {
            for _ in 0..n {
                q = self.forward(&q);
            }
        } else {
            for _ in 0..n.unsigned_abs() {
                q = self.backward(&q);
            }
        }
        q
    }

    /// `[f^from(p), …, f^to(p)]`.
    /// Iterates outward from `p` when `from ≤ 0 ≤ to`, so rounding never
    /// passes through a forward-then-backward round trip.
    fn orbit(&self, p: &Self::Point, from: i64, to: i64) -> Vec<Self::Point> {
        let mut out = Vec::with_capacity((to - from + 1).max(0) as usize);
        if from < 0 && to >= 0 {
            let mut q = p.clone();
            for _ in from..0 {
                q = self.backward(&q);
                out.push(q.clone());
            }
            out.reverse();
            out.push(p.clone());
            let mut q = p.clone();
            for _ in 0..to {
                q = self.forward(&q);
                out.push(q.clone());
            }
            return out;
        }
        let mut q = self.iterate(p, from);
        for k in from..=to {
            if k > from {
                q = self.forward(&q);
            }
            out.push(q.clone());
        }
        out
    }
}

impl<S: DynamicalSystem + ?Sized> DynamicalSystem for &S {
    type Point = S::Point;

    fn name(&self) -> &str {
        (**self).name()
    }

    fn forward(&self, p: &Self::Point) -> Self::Point {
        (**self).forward(p)
    }

    fn backward(&self, p: &Self::Point) -> Self::Point {
        (**self).backward(p)
    }

    fn metric(&self) -> &Metric<Self::Point> {
        (**self).metric()
    }
}
