use crate::error::SystemError;
use crate::linalg::{eigenprojection, Mat2, Vec2};
use crate::metric::Metric;

use super::DynamicalSystem;

const UNIT_TOL: f64 = 1e-12;

/// Hyperbolic splitting `ℝ² = E^s ⊕ E^u` of a linear map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting {
    pub p_s: Mat2,
    pub p_u: Mat2,
    /// Contraction rate on `E^s` (0 when `E^s` is trivial).
    pub lambda_s: f64,
    /// Expansion rate on `E^u` (infinite when `E^u` is trivial).
    pub lambda_u: f64,
}

impl Splitting {
    pub fn stable_dim(&self) -> usize {
        (self.p_s.trace().round() as i64).max(0) as usize
    }
}

/// Computes the stable/unstable eigenprojections of `m`.
pub fn hyperbolic_splitting(m: &Mat2) -> Result<Splitting, SystemError> {
    if m.det().abs() < 1e-300 {
        return Err(SystemError::Singular);
    }
    match m.real_eigenvalues() {
        None => {
            let r = m.det().abs().sqrt();
            if (r - 1.0).abs() < UNIT_TOL {
                return Err(SystemError::NotHyperbolic(r));
            }
            Ok(one_sided(r))
        }
        Some((a, b)) => {
            let (lo, hi) = if a.abs() <= b.abs() { (a, b) } else { (b, a) };
            for l in [lo, hi] {
                if (l.abs() - 1.0).abs() < UNIT_TOL {
                    return Err(SystemError::NotHyperbolic(l.abs()));
                }
            }
            if lo.abs() < 1.0 && hi.abs() > 1.0 {
                let p_s = eigenprojection(m, lo, hi);
                let p_u = Mat2::IDENTITY.add(&p_s.scale(-1.0));
                Ok(Splitting {
                    p_s,
                    p_u,
                    lambda_s: lo.abs(),
                    lambda_u: hi.abs(),
                })
            } else if hi.abs() < 1.0 {
                Ok(one_sided(hi.abs()))
            } else {
                Ok(one_sided(lo.abs()))
            }
        }
    }
}

fn one_sided(rate: f64) -> Splitting {
    if rate < 1.0 {
        Splitting {
            p_s: Mat2::IDENTITY,
            p_u: Mat2::ZERO,
            lambda_s: rate,
            lambda_u: f64::INFINITY,
        }
    } else {
        Splitting {
            p_s: Mat2::ZERO,
            p_u: Mat2::IDENTITY,
            lambda_s: 0.0,
            lambda_u: rate,
        }
    }
}

/// A hyperbolic linear automorphism of the plane.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    name: String,
    m: Mat2,
    inv: Mat2,
    split: Splitting,
    metric: Metric<Vec2>,
}

impl LinearSystem {
    pub fn new(m: Mat2) -> Result<Self, SystemError> {
        let split = hyperbolic_splitting(&m)?;
        let inv = m.inverse().ok_or(SystemError::Singular)?;
        Ok(LinearSystem {
            name: format!("linear[{} {}; {} {}]", m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]),
            m,
            inv,
            split,
            metric: Metric::euclidean(),
        })
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Replaces the metric; the map is unchanged.
    pub fn with_metric(mut self, metric: Metric<Vec2>) -> Self {
        self.metric = metric;
        self
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn inverse_matrix(&self) -> Mat2 {
        self.inv
    }

    pub fn splitting(&self) -> &Splitting {
        &self.split
    }

    pub fn euclidean(&self) -> Metric<Vec2> {
        Metric::euclidean()
    }

    pub fn chordal(&self) -> Metric<Vec2> {
        Metric::chordal()
    }

    /// The system `x ↦ Aᵏ x`.
    pub fn power(&self, k: i64) -> Result<LinearSystem, SystemError> {
        if k == 0 {
            return Err(SystemError::ZeroIterate);
        }
        let mk = self.m.pow(k).ok_or(SystemError::Singular)?;
        Ok(LinearSystem::new(mk)?
            .named(&format!("{}^{k}", self.name))
            .with_metric(self.metric.clone()))
    }
}

impl DynamicalSystem for LinearSystem {
    type Point = Vec2;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &Vec2) -> Vec2 {
        self.m.apply(*p)
    }

    fn backward(&self, p: &Vec2) -> Vec2 {
        self.inv.apply(*p)
    }

    fn metric(&self) -> &Metric<Vec2> {
        &self.metric
    }

    fn iterate(&self, p: &Vec2, n: i64) -> Vec2 {
        let mut q = *p;
        let step = if n >= 0 { self.m } else { self.inv };
        for _ in 0..n.unsigned_abs() {
            q = step.apply(q);
        }
        q
    }
}

/// `diag(2, 1/2)` on the plane, carrying the Euclidean metric; the chordal
/// metric pulled back from the sphere is available through [`LinearSystem::chordal`].
pub fn plane_two_metrics() -> LinearSystem {
    LinearSystem::new(Mat2::diag(2.0, 0.5))
        .expect("diag(2, 1/2) is hyperbolic")
        .named("diag")
}
